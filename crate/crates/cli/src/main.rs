//! `zeropair`: reproducible experiment runner for permutation pair-search
//! and sponge one-wayness experiments.
//!
//! Every run is fully determined by its flags (including `--seed`):
//! repeated runs emit byte-identical output. Exit codes: 0 on success with
//! all embedded assertions passing, 1 if any invariant or bound check
//! fails, 2 on configuration errors.

mod checks;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use output::{Emitter, Format};
use zeropair::bounds::{bound_check, bound_value, BoundKind, BoundParams};
use zeropair::instances::OracleInstance;
use zeropair::pairs;
use zeropair::permgroup::{self, Permutation, SubsetPair};
use zeropair::qsim::{distinguishing_experiment, grover_attack, grover_sponge_inverter};
use zeropair::sponge::{self, SpongeParams};
use zeropair::stats;
use zeropair::Error;

#[derive(Parser)]
#[command(
    name = "zeropair",
    about = "Experiments on double-sided pair search in invertible permutations and single-round sponge one-wayness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct IoArgs {
    /// RNG seed; fixes the entire run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exhaustive lemma suite at enumeration scale.
    VerifyCombinatorics {
        /// Largest N enumerated exhaustively.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Zero-pair existence probability table over N = 4, 16, 64, ...
    Existence {
        /// Largest N tabulated.
        #[arg(long, default_value_t = 256)]
        max_n: u64,
    },
    /// Sampler diagnostics for the pair-weighted distribution and the two
    /// challenge distributions, and exact pair-count law tables.
    Sample {
        /// dx | d1-d2 | law
        #[arg(long, default_value = "dx")]
        mode: String,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        c: u32,
        #[arg(long, default_value_t = 20_000)]
        trials: u64,
    },
    /// Amplitude-amplification attack sweeps with bound checking.
    Attack {
        /// dszs | nuds | sponge-ow
        #[arg(long)]
        mode: String,
        /// Half-width n of the 2n-bit zero-search permutation.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        c: Option<u32>,
        /// Planted pair count (required for dszs; optional for nuds).
        #[arg(long)]
        kappa: Option<u64>,
        /// Single iteration count to run.
        #[arg(long)]
        t: Option<u64>,
        /// Inclusive iteration range `a..b`.
        #[arg(long)]
        t_range: Option<String>,
        /// 0 = analytic mode (exact success probability on one instance).
        #[arg(long, default_value_t = 0)]
        trials: u64,
    },
    /// The kappa-vs-zero distinguishing experiment.
    Distinguish {
        /// Half-width n of the 2n-bit permutation.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        kappa: u64,
        /// Distinguisher query budget.
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Closed-form bound tables.
    Bounds {
        /// Bound kind, or `all`.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        t_range: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        c: Option<u32>,
        #[arg(long)]
        kappa: Option<u64>,
        /// Marked-element count K of unstructured search.
        #[arg(long)]
        k: Option<u64>,
        /// Domain size N of unstructured search.
        #[arg(long)]
        big_n: Option<u64>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Evaluate sponge digests for a seeded random block function.
    Sponge {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        c: u32,
        /// Comma-separated r-bit message blocks, e.g. `1,0,3`.
        #[arg(long)]
        message: String,
        /// Number of squeezed output blocks.
        #[arg(long, default_value_t = 1)]
        blocks: usize,
        /// Initialization vector (c bits).
        #[arg(long, default_value_t = 0)]
        iv: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut emitter = Emitter::new(cli.io.format, cli.io.out.clone());
    let outcome = run(&cli, &mut emitter);
    if let Err(e) = emitter.finish() {
        eprintln!("error: failed to write output: {e}");
        return ExitCode::from(2);
    }
    match outcome {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, emitter: &mut Emitter) -> Result<bool, Error> {
    let seed = cli.io.seed;
    match &cli.command {
        Command::VerifyCombinatorics { max_n } => {
            let records = checks::run_all(*max_n, seed)?;
            let all = records.iter().all(|r| r.pass);
            for r in &records {
                emitter.push(r);
            }
            Ok(all)
        }
        Command::Existence { max_n } => existence(*max_n, emitter),
        Command::Sample { mode, r, c, trials } => sample(mode, *r, *c, *trials, seed, emitter),
        Command::Attack {
            mode,
            n,
            r,
            c,
            kappa,
            t,
            t_range,
            trials,
        } => attack(
            mode,
            *n,
            *r,
            *c,
            *kappa,
            iteration_range(*t, t_range.as_deref())?,
            *trials,
            seed,
            emitter,
        ),
        Command::Distinguish {
            n,
            kappa,
            t,
            trials,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut report = distinguishing_experiment(*n, *kappa, *t, *trials, &mut rng)?;
            report.seed = Some(seed);
            let pass = report.advantage <= report.bound + 3.0 * report.std_error;
            #[derive(Serialize)]
            struct Row<'a> {
                #[serde(flatten)]
                report: &'a zeropair::qsim::DistinguishReport,
                theorem: &'static str,
                pass: bool,
            }
            emitter.push(&Row {
                report: &report,
                theorem: "decision-advantage-ceiling",
                pass,
            });
            Ok(pass)
        }
        Command::Bounds {
            kind,
            t,
            t_range,
            n,
            r,
            c,
            kappa,
            k,
            big_n,
            epsilon,
        } => {
            let kinds: Vec<BoundKind> = if kind == "all" {
                BoundKind::ALL.to_vec()
            } else {
                vec![kind.parse()?]
            };
            let ts = match (t, t_range) {
                (_, Some(range)) => parse_range(range)?,
                (Some(t), None) => vec![*t],
                (None, None) => vec![0],
            };
            for kind in kinds {
                for &t in &ts {
                    let params = BoundParams {
                        t: Some(t),
                        n: *n,
                        rate: *r,
                        capacity: *c,
                        kappa: *kappa,
                        marked: *k,
                        total: *big_n,
                        epsilon: *epsilon,
                    };
                    let bound = bound_value::<f64>(kind, &params)?;
                    #[derive(Serialize)]
                    struct Row {
                        kind: &'static str,
                        params: BoundParams,
                        value: f64,
                        vacuous: bool,
                    }
                    emitter.push(&Row {
                        kind: kind.name(),
                        params,
                        value: bound.value,
                        vacuous: bound.vacuous,
                    });
                }
            }
            Ok(true)
        }
        Command::Sponge {
            r,
            c,
            message,
            blocks,
            iv,
        } => {
            let params = SpongeParams::new(*r, *c)?
                .with_iv(*iv)?
                .with_output_blocks(*blocks)?;
            let message: Vec<u64> = message
                .split(',')
                .map(|b| {
                    b.trim()
                        .parse::<u64>()
                        .map_err(|e| Error::Config(format!("bad message block '{b}': {e}")))
                })
                .collect::<Result<_, _>>()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let phi = Permutation::sample_uniform(params.n_points() as usize, &mut rng);
            let digest = sponge::sponge_eval_of(&phi, &params, &message)?;
            #[derive(Serialize)]
            struct Row {
                r: u32,
                c: u32,
                iv: u64,
                message: Vec<u64>,
                digest: Vec<u64>,
                seed: u64,
            }
            emitter.push(&Row {
                r: *r,
                c: *c,
                iv: *iv,
                message,
                digest,
                seed,
            });
            Ok(true)
        }
    }
}

fn iteration_range(t: Option<u64>, t_range: Option<&str>) -> Result<Vec<u64>, Error> {
    match (t, t_range) {
        (_, Some(range)) => parse_range(range),
        (Some(t), None) => Ok(vec![t]),
        (None, None) => Ok((0..=4).collect()),
    }
}

/// Parses an inclusive range `a..b`.
fn parse_range(s: &str) -> Result<Vec<u64>, Error> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Config(format!("bad range '{s}', expected a..b")))?;
    let a: u64 = a
        .parse()
        .map_err(|e| Error::Config(format!("bad range start '{a}': {e}")))?;
    let b: u64 = b
        .parse()
        .map_err(|e| Error::Config(format!("bad range end '{b}': {e}")))?;
    if a > b {
        return Err(Error::Config(format!("empty range '{s}'")));
    }
    Ok((a..=b).collect())
}

fn existence(max_n: u64, emitter: &mut Emitter) -> Result<bool, Error> {
    #[derive(Serialize)]
    struct Row {
        n_total: u64,
        prob_num: String,
        prob_den: String,
        prob: f64,
        no_pair_prob: f64,
        below_inv_e: bool,
        increasing: bool,
    }
    use num_traits::ToPrimitive;
    let mut all = true;
    let mut prev = -1.0f64;
    let mut n_total = 4u64;
    let inv_e = (-1.0f64).exp();
    while n_total <= max_n {
        let prob = pairs::zero_pair_existence_prob(n_total)?;
        let no_pair = 1.0 - prob.to_f64().unwrap();
        let below = no_pair < inv_e;
        let increasing = no_pair > prev;
        all &= below && increasing;
        emitter.push(&Row {
            n_total,
            prob_num: prob.numer().to_string(),
            prob_den: prob.denom().to_string(),
            prob: prob.to_f64().unwrap(),
            no_pair_prob: no_pair,
            below_inv_e: below,
            increasing,
        });
        prev = no_pair;
        n_total *= 4;
    }
    Ok(all)
}

fn sample(
    mode: &str,
    r: u32,
    c: u32,
    trials: u64,
    seed: u64,
    emitter: &mut Emitter,
) -> Result<bool, Error> {
    use num_traits::ToPrimitive;
    #[derive(Serialize)]
    struct Row {
        mode: String,
        sampler: &'static str,
        r: u32,
        c: u32,
        trials: u64,
        seed: u64,
        chi_square: f64,
        dof: f64,
        p_value: f64,
        pass: bool,
    }
    let n = 1usize << (r + c);
    if mode == "law" {
        // Exact pair-count law of the sponge pair: one record per kappa.
        #[derive(Serialize)]
        struct LawRow {
            r: u32,
            c: u32,
            kappa: usize,
            prob_num: String,
            prob_den: String,
            prob: f64,
        }
        let pair = SubsetPair::sponge(r, c)?;
        for (kappa, prob) in pairs::pair_count_distribution(&pair).iter().enumerate() {
            emitter.push(&LawRow {
                r,
                c,
                kappa,
                prob_num: prob.numer().to_string(),
                prob_den: prob.denom().to_string(),
                prob: prob.to_f64().unwrap(),
            });
        }
        return Ok(true);
    }
    if n > 8 {
        return Err(Error::Resource(
            "sampler diagnostics need N <= 8 for the exact reference law".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    match mode {
        "dx" => {
            let pair = SubsetPair::sponge(r, c)?;
            let all_perms: Vec<Permutation> = Permutation::all(n).collect();
            let probs: Vec<f64> = all_perms
                .iter()
                .map(|p| pairs::dx_pmf(p, &pair).unwrap().to_f64().unwrap())
                .collect();
            for (sampler, shift) in [("shift", true), ("rejection", false)] {
                let mut counts = vec![0u64; all_perms.len()];
                for _ in 0..trials {
                    let p = if shift {
                        pairs::sample_dx_shift(&pair, &mut rng)?
                    } else {
                        pairs::sample_dx_rejection(&pair, &mut rng, 100_000)?
                    };
                    let i = all_perms.iter().position(|q| *q == p).unwrap();
                    counts[i] += 1;
                }
                let outcome = stats::chi_square_grouped(&counts, &probs, trials, 5.0);
                let pass = outcome.p_value > 1e-3;
                all &= pass;
                emitter.push(&Row {
                    mode: mode.into(),
                    sampler,
                    r,
                    c,
                    trials,
                    seed,
                    chi_square: outcome.statistic,
                    dof: outcome.dof,
                    p_value: outcome.p_value,
                    pass,
                });
            }
        }
        "d1-d2" => {
            let params = SpongeParams::new(r, c)?;
            let law = sponge::joint_law_d2(&params, 8)?;
            let keys: Vec<_> = law.keys().cloned().collect();
            let probs: Vec<f64> = keys.iter().map(|k| law[k].to_f64().unwrap()).collect();
            let index: std::collections::HashMap<_, usize> =
                keys.iter().cloned().zip(0..).collect();
            for (sampler, use_d1) in [("d1", true), ("d2", false)] {
                let mut counts = vec![0u64; keys.len()];
                for _ in 0..trials {
                    let (phi, y) = if use_d1 {
                        sponge::sample_d1(&params, &mut rng)?
                    } else {
                        sponge::sample_d2(&params, &mut rng)?
                    };
                    match index.get(&(phi.forward_table().to_vec(), y)) {
                        Some(&i) => counts[i] += 1,
                        None => {
                            return Err(Error::Contract(
                                "sampled an outcome the exact law gives zero mass".into(),
                            ))
                        }
                    }
                }
                let outcome = stats::chi_square_grouped(&counts, &probs, trials, 5.0);
                let pass = outcome.p_value > 1e-3;
                all &= pass;
                emitter.push(&Row {
                    mode: mode.into(),
                    sampler,
                    r,
                    c,
                    trials,
                    seed,
                    chi_square: outcome.statistic,
                    dof: outcome.dof,
                    p_value: outcome.p_value,
                    pass,
                });
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown sample mode '{other}' (expected dx, d1-d2 or law)"
            )))
        }
    }
    Ok(all)
}

/// One attack-sweep configuration and its verdict. In analytic mode
/// (`trials = 0`) `empirical` is the exact simulated success on the single
/// planted instance; in Monte Carlo mode it is a success rate over sampled
/// instances and `analytic` is the mean of the per-instance closed forms.
#[derive(Serialize)]
struct SweepRow {
    kind: &'static str,
    bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<u32>,
    /// Planted pair count, when the arm conditions on one.
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<u64>,
    iterations: u64,
    total_queries: u64,
    trials: u64,
    empirical: f64,
    analytic: f64,
    bound_kind: &'static str,
    bound: f64,
    ceiling: f64,
    std_error: f64,
    pass: bool,
    seed: u64,
}

/// Runs one sweep arm: returns (empirical, mean analytic, queries/trial).
fn sweep_arm<F>(
    pair: &SubsetPair,
    iterations: u64,
    trials: u64,
    rng: &mut ChaCha8Rng,
    mut draw: F,
) -> Result<(f64, f64, u64), Error>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<Permutation, Error>,
{
    if trials == 0 {
        let instance = OracleInstance::from_permutation(draw(rng)?)?;
        let report = grover_attack(&instance, pair, iterations, 0, rng)?;
        return Ok((report.empirical, report.analytic, report.total_queries));
    }
    let mut successes = 0u64;
    let mut analytic_sum = 0.0;
    let mut queries = 0u64;
    for _ in 0..trials {
        let instance = OracleInstance::from_permutation(draw(rng)?)?;
        let report = grover_attack(&instance, pair, iterations, 1, rng)?;
        if report.empirical > 0.5 {
            successes += 1;
        }
        analytic_sum += report.analytic;
        queries = report.total_queries;
    }
    Ok((
        successes as f64 / trials as f64,
        analytic_sum / trials as f64,
        queries,
    ))
}

#[allow(clippy::too_many_arguments)]
fn attack(
    mode: &str,
    n: Option<u32>,
    r: Option<u32>,
    c: Option<u32>,
    kappa: Option<u64>,
    iterations: Vec<u64>,
    trials: u64,
    seed: u64,
    emitter: &mut Emitter,
) -> Result<bool, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    match mode {
        "dszs" => {
            let half = n.ok_or_else(|| Error::Config("dszs needs --n".into()))?;
            if trials == 0 && kappa.is_none() {
                return Err(Error::Config("analytic mode needs --kappa".into()));
            }
            let pair = SubsetPair::zero_pair(half)?;
            for &it in &iterations {
                let (empirical, analytic, queries) =
                    sweep_arm(&pair, it, trials, &mut rng, |rng| match (trials, kappa) {
                        (0, Some(k)) => pair.representative(k as usize),
                        (_, Some(k)) => permgroup::sample_coset_uniform(&pair, k as usize, rng),
                        (_, None) => Ok(Permutation::sample_uniform(pair.size(), rng)),
                    })?;
                // the fixed-pair-count ceiling only applies when kappa > 0
                let mut kinds = vec![BoundKind::DszsUniform];
                if kappa.map_or(false, |k| k > 0) {
                    kinds.push(BoundKind::DszsFixedKappa);
                }
                for kind in kinds {
                    let verdict = bound_check(
                        kind,
                        &BoundParams {
                            t: Some(queries),
                            n: Some(half),
                            kappa,
                            ..Default::default()
                        },
                        empirical,
                        trials,
                        3.0,
                    )?;
                    all &= verdict.pass;
                    emitter.push(&SweepRow {
                        kind: "grover-pair-search",
                        bits: 2 * half,
                        n: Some(half),
                        r: None,
                        c: None,
                        kappa,
                        iterations: it,
                        total_queries: queries,
                        trials,
                        empirical,
                        analytic,
                        bound_kind: kind.name(),
                        bound: verdict.bound,
                        ceiling: verdict.ceiling,
                        std_error: verdict.std_error,
                        pass: verdict.pass,
                        seed,
                    });
                }
            }
        }
        "nuds" => {
            let rate = r.ok_or_else(|| Error::Config("nuds needs --r".into()))?;
            let capacity = c.ok_or_else(|| Error::Config("nuds needs --c".into()))?;
            let pair = SubsetPair::sponge(rate, capacity)?;
            for &it in &iterations {
                let (empirical, analytic, queries) =
                    sweep_arm(&pair, it, trials, &mut rng, |rng| match (trials, kappa) {
                        (0, k) => pair.representative(k.unwrap_or(1) as usize),
                        (_, Some(k)) => permgroup::sample_coset_uniform(&pair, k as usize, rng),
                        (_, None) => pairs::sample_dx(&pair, rng),
                    })?;
                let verdict = bound_check(
                    BoundKind::Nuds,
                    &BoundParams {
                        t: Some(queries),
                        rate: Some(rate),
                        capacity: Some(capacity),
                        ..Default::default()
                    },
                    empirical,
                    trials,
                    3.0,
                )?;
                all &= verdict.pass;
                emitter.push(&SweepRow {
                    kind: "grover-pair-search",
                    bits: rate + capacity,
                    n: None,
                    r: Some(rate),
                    c: Some(capacity),
                    kappa,
                    iterations: it,
                    total_queries: queries,
                    trials,
                    empirical,
                    analytic,
                    bound_kind: BoundKind::Nuds.name(),
                    bound: verdict.bound,
                    ceiling: verdict.ceiling,
                    std_error: verdict.std_error,
                    pass: verdict.pass,
                    seed,
                });
            }
        }
        "sponge-ow" => {
            let rate = r.ok_or_else(|| Error::Config("sponge-ow needs --r".into()))?;
            let capacity = c.ok_or_else(|| Error::Config("sponge-ow needs --c".into()))?;
            if trials == 0 {
                return Err(Error::Config(
                    "sponge-ow has no analytic mode; pass --trials".into(),
                ));
            }
            let params = SpongeParams::new(rate, capacity)?;
            for &it in &iterations {
                let mut wins = 0u64;
                let mut queries_used = 0u64;
                for trial in 0..trials {
                    let mut inverter =
                        grover_sponge_inverter(rate, capacity, it, seed ^ (trial + 1));
                    let transcript = sponge::one_wayness_game(&params, &mut inverter, &mut rng)?;
                    queries_used = transcript.queries_used;
                    if transcript.success {
                        wins += 1;
                    }
                }
                let empirical = wins as f64 / trials as f64;
                let verdict = bound_check(
                    BoundKind::SpongeOw,
                    &BoundParams {
                        t: Some(queries_used),
                        rate: Some(rate),
                        capacity: Some(capacity),
                        ..Default::default()
                    },
                    empirical,
                    trials,
                    3.0,
                )?;
                all &= verdict.pass;
                #[derive(Serialize)]
                struct GameRow {
                    kind: &'static str,
                    r: u32,
                    c: u32,
                    iterations: u64,
                    adversary_queries: u64,
                    trials: u64,
                    empirical: f64,
                    bound_kind: &'static str,
                    bound: f64,
                    ceiling: f64,
                    std_error: f64,
                    pass: bool,
                    seed: u64,
                }
                emitter.push(&GameRow {
                    kind: "one-wayness-game",
                    r: rate,
                    c: capacity,
                    iterations: it,
                    adversary_queries: queries_used,
                    trials,
                    empirical,
                    bound_kind: BoundKind::SpongeOw.name(),
                    bound: verdict.bound,
                    ceiling: verdict.ceiling,
                    std_error: verdict.std_error,
                    pass: verdict.pass,
                    seed,
                });
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown attack mode '{other}' (expected dszs, nuds or sponge-ow)"
            )))
        }
    }
    Ok(all)
}
