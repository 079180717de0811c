//! The exhaustive verification suite behind `verify-combinatorics`: every
//! enumeration-scale claim, re-derived independently and compared against
//! the library's closed forms. Each record names the check so failures are
//! attributable.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use zeropair::pairs::{self, TailKind};
use zeropair::permgroup::{
    self, enumerate_coset, Permutation, Subset, SubsetPair, YoungSubgroup,
};
use zeropair::sponge::{self, SpongeParams};
use zeropair::stats;
use zeropair::{Rational, Result};

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub detail: String,
    pub pass: bool,
}

fn record(check: &'static str, pass: bool, detail: String) -> CheckRecord {
    CheckRecord {
        check,
        detail,
        pass,
    }
}

/// Runs every check up to the enumeration cap; returns one record each.
pub fn run_all(max_n: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    out.push(expected_pairs(max_n)?);
    out.push(hypergeometric_law(max_n)?);
    if max_n >= 6 {
        out.push(symmetrization_uniformity()?);
    }
    out.push(factorization_count(&mut rng)?);
    out.push(zero_pair_existence(&mut rng)?);
    if max_n >= 8 {
        out.push(tail_dominance(TailKind::Uniform)?);
        out.push(tail_dominance(TailKind::NonUniform)?);
    }
    out.push(kl_lower_bound());
    out.push(nonuniform_moments(max_n)?);
    out.push(d1_d2_equality(&mut rng)?);
    Ok(out)
}

fn shapes(n: usize) -> Vec<SubsetPair> {
    vec![
        SubsetPair::new(n, [0], [0]).unwrap(),
        SubsetPair::new(n, [0, n / 2], [1, n - 1]).unwrap(),
        SubsetPair::new(n, 0..n / 2, n / 4..n).unwrap(),
    ]
}

fn expected_pairs(max_n: usize) -> Result<CheckRecord> {
    let mut checked = 0;
    for n in (4..=max_n.min(8)).step_by(2) {
        for pair in shapes(n) {
            let total: u64 = Permutation::all(n)
                .map(|p| pair.count_pairs(&p) as u64)
                .sum();
            let mean = Rational::new(
                total.into(),
                pairs::factorial(n as u64).into(),
            );
            if mean != pairs::expected_pairs_uniform(&pair) {
                return Ok(record(
                    "expected-pairs",
                    false,
                    format!("exhaustive mean mismatch at N={n}"),
                ));
            }
            checked += 1;
        }
    }
    Ok(record(
        "expected-pairs",
        true,
        format!("{checked} shapes, exhaustive mean equals |X1||X2|/N exactly"),
    ))
}

fn hypergeometric_law(max_n: usize) -> Result<CheckRecord> {
    let n = max_n.min(8);
    for pair in shapes(n) {
        let mut counts = vec![0u64; pair.max_pairs() + 1];
        for p in Permutation::all(n) {
            counts[pair.count_pairs(&p)] += 1;
        }
        for (kappa, &count) in counts.iter().enumerate() {
            let exhaustive =
                Rational::new(count.into(), pairs::factorial(n as u64).into());
            let law = pairs::hypergeometric_pmf(
                n as u64,
                pair.x2().len() as u64,
                pair.x1().len() as u64,
                kappa as u64,
            )?;
            if exhaustive != law {
                return Ok(record(
                    "hypergeometric-law",
                    false,
                    format!("mismatch at N={n}, kappa={kappa}"),
                ));
            }
        }
    }
    Ok(record(
        "hypergeometric-law",
        true,
        format!("pair-count law over S_{n} is exactly hypergeometric"),
    ))
}

fn symmetrization_uniformity() -> Result<CheckRecord> {
    let pair = SubsetPair::new(6, [0, 4], [0, 4])?;
    let sigmas = YoungSubgroup::stabilizer(pair.x1()).elements()?;
    let omegas = YoungSubgroup::stabilizer(pair.x2()).elements()?;
    for kappa in 0..=2usize {
        let coset = enumerate_coset(&pair, kappa)?;
        let index: HashMap<Vec<usize>, usize> = coset
            .iter()
            .enumerate()
            .map(|(i, p)| (p.forward_table().to_vec(), i))
            .collect();
        let rep = pair.representative(kappa)?;
        let mut hits = vec![0u64; coset.len()];
        for omega in &omegas {
            let left = omega.compose(&rep)?;
            for sigma in &sigmas {
                let sym = left.compose(sigma)?;
                hits[index[sym.forward_table()]] += 1;
            }
        }
        let expected = (sigmas.len() * omegas.len()) as u64 / coset.len() as u64;
        if hits.iter().any(|&h| h != expected) {
            return Ok(record(
                "symmetrization-uniformity",
                false,
                format!("unequal multiplicities at kappa={kappa}"),
            ));
        }
    }
    Ok(record(
        "symmetrization-uniformity",
        true,
        "all 2304 (omega, sigma) pairs hit each coset member equally often".into(),
    ))
}

fn factorization_count(rng: &mut ChaCha8Rng) -> Result<CheckRecord> {
    let n = 4usize;
    let subsets: Vec<Vec<usize>> = (1..(1u32 << n) - 1)
        .map(|bits| (0..n).filter(|&i| bits & (1 << i) != 0).collect())
        .collect();
    for h_members in &subsets {
        let h = YoungSubgroup::stabilizer(&Subset::new(n, h_members.clone())?);
        for k_members in &subsets {
            let k = YoungSubgroup::stabilizer(&Subset::new(n, k_members.clone())?);
            let x = Permutation::sample_uniform(n, rng);
            let expected = permgroup::conjugate_intersection_size(&x, &h, &k)?;
            // a coset member reached through a random factorization
            let he = h.sample_uniform(rng);
            let ke = k.sample_uniform(rng);
            let g = he.compose(&x)?.compose(&ke)?;
            if permgroup::count_factorizations(&g, &x, &h, &k)? != expected {
                return Ok(record(
                    "factorization-count",
                    false,
                    format!("H={h_members:?}, K={k_members:?}"),
                ));
            }
        }
    }
    Ok(record(
        "factorization-count",
        true,
        format!(
            "brute-force count equals |x^-1 H x ∩ K| over all {} two-block pairs at N=4",
            subsets.len() * subsets.len()
        ),
    ))
}

fn zero_pair_existence(rng: &mut ChaCha8Rng) -> Result<CheckRecord> {
    let pair = SubsetPair::zero_pair(1)?;
    let with_pair = Permutation::all(4)
        .filter(|p| pair.count_pairs(p) >= 1)
        .count() as u64;
    let formula = pairs::zero_pair_existence_prob(4)?;
    if formula != Rational::new(with_pair.into(), 24.into()) {
        return Ok(record(
            "zero-pair-existence",
            false,
            "formula disagrees with exhaustive enumeration at N=4".into(),
        ));
    }
    let exact = pairs::zero_pair_existence_prob(16)?.to_f64().unwrap();
    let pair = SubsetPair::zero_pair(2)?;
    let trials = 20_000u64;
    let hits = (0..trials)
        .filter(|_| pair.count_pairs(&Permutation::sample_uniform(16, rng)) >= 1)
        .count() as f64;
    let empirical = hits / trials as f64;
    let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
    let pass = (empirical - exact).abs() <= 3.0 * sigma;
    Ok(record(
        "zero-pair-existence",
        pass,
        format!("N=4 exact 5/6; N=16 Monte Carlo {empirical} vs {exact}"),
    ))
}

fn tail_dominance(kind: TailKind) -> Result<CheckRecord> {
    let (name, configs): (_, Vec<SubsetPair>) = match kind {
        TailKind::Uniform => (
            "uniform-tail-dominance",
            vec![
                SubsetPair::new(8, [0], [0])?,
                SubsetPair::new(8, [0], [0, 1])?,
                SubsetPair::new(8, [0, 1], [0, 1])?,
            ],
        ),
        TailKind::NonUniform => (
            "nonuniform-tail-dominance",
            vec![SubsetPair::sponge(1, 2)?, SubsetPair::sponge(2, 1)?],
        ),
    };
    for pair in &configs {
        let expectation = match kind {
            TailKind::Uniform => pairs::expected_pairs_uniform(pair),
            TailKind::NonUniform => pairs::nonuniform_expectation(pair),
        }
        .to_f64()
        .unwrap();
        for step in 0..50 {
            let u = 6.0 * expectation + step as f64 * 0.2;
            let bound = pairs::tail_bound(pair, u, kind)?;
            let mut numer = Rational::zero();
            let mut denom = Rational::zero();
            for p in Permutation::all(8) {
                let count = pair.count_pairs(&p);
                let weight = match kind {
                    TailKind::Uniform => Rational::one(),
                    TailKind::NonUniform => Rational::new((count as u64).into(), 1.into()),
                };
                if count as f64 >= expectation + u {
                    numer += weight.clone();
                }
                denom += weight;
            }
            let tail = (numer / denom).to_f64().unwrap();
            if tail > bound + 1e-12 {
                return Ok(record(name, false, format!("tail {tail} > bound {bound} at u={u}")));
            }
        }
    }
    Ok(record(
        name,
        true,
        "exact tails from enumeration stay under the closed-form bound".into(),
    ))
}

fn kl_lower_bound() -> CheckRecord {
    for i in 1..=200 {
        let p = 0.1 * i as f64 / 200.0;
        for j in 0..200 {
            let t = 6.0 * p + (1.0 - p - 6.0 * p) * j as f64 / 200.0;
            if p + t >= 1.0 {
                continue;
            }
            let d = pairs::kl_divergence(p + t, p).unwrap();
            if d <= 0.75 * t {
                return record(
                    "kl-lower-bound",
                    false,
                    format!("KL({}, {p}) = {d} <= 3t/4", p + t),
                );
            }
        }
    }
    record(
        "kl-lower-bound",
        true,
        "KL(p+t || p) > 3t/4 on the 200x200 grid with t >= 6p".into(),
    )
}

fn nonuniform_moments(max_n: usize) -> Result<CheckRecord> {
    let mut specs = vec![SubsetPair::sponge(1, 1)?];
    if max_n >= 8 {
        specs.push(SubsetPair::sponge(1, 2)?);
        specs.push(SubsetPair::sponge(2, 1)?);
    }
    for pair in &specs {
        let enumerated = pairs::nonuniform_expectation_enumerated(pair, 8)?;
        let implementation = pairs::nonuniform_expectation(pair);
        let (lo, hi) = pairs::nonuniform_expectation_bounds(pair);
        if enumerated != implementation || implementation < lo || implementation > hi {
            return Ok(record(
                "nonuniform-moments",
                false,
                format!("mismatch at N={}", pair.size()),
            ));
        }
    }
    Ok(record(
        "nonuniform-moments",
        true,
        "E under the pair-weighted law equals E[X^2]/E[X], inside [1, 1+E]".into(),
    ))
}

fn d1_d2_equality(rng: &mut ChaCha8Rng) -> Result<CheckRecord> {
    let params = SpongeParams::new(1, 1)?;
    if sponge::joint_law_d1(&params, 8)? != sponge::joint_law_d2(&params, 8)? {
        return Ok(record(
            "d1-d2-equality",
            false,
            "exact joint laws differ at r=c=1".into(),
        ));
    }
    // sampler agreement at r=1, c=2
    let params = SpongeParams::new(1, 2)?;
    let law = sponge::joint_law_d2(&params, 8)?;
    let keys: Vec<_> = law.keys().cloned().collect();
    let index: HashMap<_, usize> = keys.iter().cloned().zip(0..).collect();
    let probs: Vec<f64> = keys.iter().map(|k| law[k].to_f64().unwrap()).collect();
    let trials = 20_000u64;
    for use_d1 in [true, false] {
        let mut counts = vec![0u64; keys.len()];
        for _ in 0..trials {
            let (phi, y) = if use_d1 {
                sponge::sample_d1(&params, rng)?
            } else {
                sponge::sample_d2(&params, rng)?
            };
            match index.get(&(phi.forward_table().to_vec(), y)) {
                Some(&i) => counts[i] += 1,
                None => {
                    return Ok(record(
                        "d1-d2-equality",
                        false,
                        "sampled an outcome of zero mass".into(),
                    ))
                }
            }
        }
        let outcome = stats::chi_square_grouped(&counts, &probs, trials, 5.0);
        if outcome.p_value <= 1e-3 {
            return Ok(record(
                "d1-d2-equality",
                false,
                format!("sampler chi-square p = {}", outcome.p_value),
            ));
        }
    }
    Ok(record(
        "d1-d2-equality",
        true,
        "exact equality at r=c=1; samplers pass chi-square at r=1, c=2".into(),
    ))
}
