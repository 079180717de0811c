//! Statevector simulation of quantum query algorithms against permutation
//! oracles, textbook amplitude-amplification attacks, and the
//! kappa-vs-zero distinguishing experiment.
//!
//! Registers are dense complex vectors. Permutation oracles are applied as
//! in-place basis reindexing through a precomputed image table, O(2^bits)
//! per query; the table acquisition itself is what gets charged as the one
//! oracle query. A phase oracle is realized as compute-flip-uncompute and
//! therefore always costs 2 queries; the final verification measurement
//! costs 1 more, and every bound comparison uses this total.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::OracleInstance;
use crate::permgroup::{self, PairKind, SubsetPair};
use crate::scalar::Real;
use crate::stats::binomial_std_error;

/// Norm drift allowed before a state is considered corrupted.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;
/// Allowed gap between simulated and closed-form amplification success.
pub const GROVER_TOLERANCE: f64 = 1e-9;
/// Joint register budget: at most `2^20` amplitudes.
pub const DEFAULT_AMPLITUDE_BUDGET: u32 = 20;

/// A pure state over named-by-position registers (register 0 holds the
/// most significant bits), with an oracle query counter and an optional
/// query budget.
#[derive(Clone, Debug)]
pub struct StateVector<T: Real> {
    widths: Vec<u32>,
    amps: Vec<Complex<T>>,
    queries: u64,
    budget: Option<u64>,
}

impl<T: Real> StateVector<T> {
    /// The all-zero basis state over the given register widths.
    pub fn new(widths: &[u32]) -> Result<Self> {
        let total: u32 = widths.iter().sum();
        if widths.is_empty() || widths.contains(&0) {
            return Err(Error::Config("registers must have nonzero width".into()));
        }
        if total > DEFAULT_AMPLITUDE_BUDGET {
            return Err(Error::Resource(format!(
                "state of {total} bits exceeds the 2^{DEFAULT_AMPLITUDE_BUDGET} amplitude budget"
            )));
        }
        let mut amps = vec![Complex::zero(); 1usize << total];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(StateVector {
            widths: widths.to_vec(),
            amps,
            queries: 0,
            budget: None,
        })
    }

    /// A basis state with the given register contents.
    pub fn basis(widths: &[u32], values: &[u64]) -> Result<Self> {
        if values.len() != widths.len() {
            return Err(Error::Config("one value per register required".into()));
        }
        let mut state = Self::new(widths)?;
        let mut idx = 0usize;
        for (reg, &v) in values.iter().enumerate() {
            if v >> state.widths[reg] != 0 {
                return Err(Error::Config(format!(
                    "value {v:#x} wider than register {reg}"
                )));
            }
            idx |= (v as usize) << state.shift(reg);
        }
        state.amps[0] = Complex::zero();
        state.amps[idx] = Complex::new(T::one(), T::zero());
        Ok(state)
    }

    /// An arbitrary state from raw amplitudes (normalized on entry).
    pub fn from_amplitudes(widths: &[u32], amps: Vec<Complex<T>>) -> Result<Self> {
        let mut state = Self::new(widths)?;
        if amps.len() != state.amps.len() {
            return Err(Error::Config(format!(
                "expected {} amplitudes, got {}",
                state.amps.len(),
                amps.len()
            )));
        }
        let norm = amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
            .sqrt();
        if norm == T::zero() {
            return Err(Error::Config("cannot normalize the zero vector".into()));
        }
        state.amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(state)
    }

    pub fn register_count(&self) -> usize {
        self.widths.len()
    }

    pub fn width(&self, reg: usize) -> u32 {
        self.widths[reg]
    }

    pub fn total_bits(&self) -> u32 {
        self.widths.iter().sum()
    }

    /// Number of amplitudes, `2^total_bits`.
    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Refuse oracle calls beyond this many.
    pub fn set_query_budget(&mut self, budget: Option<u64>) {
        self.budget = budget;
    }

    pub fn amplitude(&self, idx: usize) -> Complex<T> {
        self.amps[idx]
    }

    fn shift(&self, reg: usize) -> u32 {
        self.widths[reg + 1..].iter().sum()
    }

    /// Value of a register within a joint basis index.
    pub fn register_value(&self, idx: usize, reg: usize) -> u64 {
        ((idx as u64) >> self.shift(reg)) & ((1u64 << self.widths[reg]) - 1)
    }

    fn with_register(&self, idx: usize, reg: usize, value: u64) -> usize {
        let shift = self.shift(reg);
        let mask = ((1u64 << self.widths[reg]) - 1) << shift;
        ((idx as u64) & !mask | (value << shift)) as usize
    }

    fn charge_query(&mut self) -> Result<()> {
        if let Some(budget) = self.budget {
            if self.queries >= budget {
                return Err(Error::Resource(format!(
                    "query budget of {budget} exhausted"
                )));
            }
        }
        self.queries += 1;
        Ok(())
    }

    pub fn norm(&self) -> T {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
            .sqrt()
    }

    /// Spreads a register currently in `|0>` into the uniform superposition
    /// over all its values.
    pub fn prepare_uniform(&mut self, reg: usize) -> Result<()> {
        self.ensure_register_zero(reg)?;
        let m = 1u64 << self.widths[reg];
        let scale = T::one() / T::from_u64(m).unwrap().sqrt();
        let mut next = vec![Complex::zero(); self.amps.len()];
        for (idx, amp) in self.amps.iter().enumerate() {
            if amp.is_zero() {
                continue;
            }
            let scaled = *amp * scale;
            for v in 0..m {
                next[self.with_register(idx, reg, v)] += scaled;
            }
        }
        self.amps = next;
        Ok(())
    }

    fn ensure_register_zero(&self, reg: usize) -> Result<()> {
        let threshold = T::epsilon();
        for (idx, amp) in self.amps.iter().enumerate() {
            if self.register_value(idx, reg) != 0 && amp.norm_sqr() > threshold {
                return Err(Error::Contract(format!(
                    "register {reg} is not |0>; amplitude {:?} at index {idx}",
                    amp
                )));
            }
        }
        Ok(())
    }

    fn check_oracle_widths(&self, phi: &OracleInstance, x_reg: usize, y_reg: usize) -> Result<()> {
        if x_reg >= self.widths.len() || y_reg >= self.widths.len() || x_reg == y_reg {
            return Err(Error::Config("invalid register pair".into()));
        }
        if self.widths[x_reg] != phi.bits() || self.widths[y_reg] != phi.bits() {
            return Err(Error::Config(format!(
                "oracle on {} bits needs matching registers, got {} and {}",
                phi.bits(),
                self.widths[x_reg],
                self.widths[y_reg]
            )));
        }
        Ok(())
    }

    /// Forward oracle: `|x>|y> -> |x>|y XOR phi(x)>`. One query.
    pub fn apply_forward(&mut self, phi: &OracleInstance, x_reg: usize, y_reg: usize) -> Result<()> {
        self.check_oracle_widths(phi, x_reg, y_reg)?;
        self.charge_query()?;
        let table = phi.oracle_table(false)?;
        self.xor_into_register(y_reg, |state, idx| {
            table[state.register_value(idx, x_reg) as usize]
        });
        Ok(())
    }

    /// Backward oracle: `|x>|y> -> |x XOR phi^{-1}(y)>|y>`. One query.
    pub fn apply_backward(
        &mut self,
        phi: &OracleInstance,
        x_reg: usize,
        y_reg: usize,
    ) -> Result<()> {
        self.check_oracle_widths(phi, x_reg, y_reg)?;
        self.charge_query()?;
        let table = phi.oracle_table(true)?;
        self.xor_into_register(x_reg, |state, idx| {
            table[state.register_value(idx, y_reg) as usize]
        });
        Ok(())
    }

    fn xor_into_register<F: Fn(&Self, usize) -> u64>(&mut self, target: usize, value: F) {
        // XOR-ing a per-index value into one register permutes basis
        // indices, so a gather into a fresh buffer is unitary.
        let mut next = vec![Complex::zero(); self.amps.len()];
        for idx in 0..self.amps.len() {
            if self.amps[idx].is_zero() {
                continue;
            }
            let current = self.register_value(idx, target);
            let flipped = current ^ value(self, idx);
            next[self.with_register(idx, target, flipped)] = self.amps[idx];
        }
        self.amps = next;
    }

    /// Flips the sign of every basis state whose register value satisfies
    /// the predicate. Not a query; the predicate acts on visible data.
    pub fn phase_flip_where<F: Fn(u64) -> bool>(&mut self, reg: usize, predicate: F) {
        for idx in 0..self.amps.len() {
            if predicate(self.register_value(idx, reg)) {
                self.amps[idx] = -self.amps[idx];
            }
        }
    }

    /// Phase oracle by compute-flip-uncompute against a scratch register
    /// that must start (and is returned) in `|0>`: the search value `s` is
    /// embedded into an oracle input, the image lands in scratch, the sign
    /// is flipped where the image satisfies the predicate, and the image is
    /// uncomputed. Exactly 2 queries.
    pub fn phase_mark(
        &mut self,
        phi: &OracleInstance,
        search_reg: usize,
        scratch_reg: usize,
        layout: &SearchLayout,
    ) -> Result<()> {
        if self.widths[search_reg] != layout.search_bits
            || self.widths[scratch_reg] != layout.perm_bits
            || phi.bits() != layout.perm_bits
        {
            return Err(Error::Config(
                "register widths do not match the search layout".into(),
            ));
        }
        self.ensure_register_zero(scratch_reg)?;

        self.charge_query()?;
        let table = phi.oracle_table(false)?; // charges the instance once
        let embed_table = |state: &Self, idx: usize| {
            table[layout.embed(state.register_value(idx, search_reg)) as usize]
        };
        self.xor_into_register(scratch_reg, embed_table);
        self.phase_flip_where(scratch_reg, |w| layout.is_solution_image(w));
        self.charge_query()?;
        phi.charge_one(); // the uncompute is a second oracle query
        self.xor_into_register(scratch_reg, embed_table);
        Ok(())
    }

    /// Reflection about the uniform state on one register (the other
    /// registers are left alone).
    pub fn diffuse(&mut self, reg: usize) {
        let width = self.widths[reg];
        let shift = self.shift(reg);
        let m = 1usize << width;
        let high_count = self.amps.len() >> (shift + width);
        let low_count = 1usize << shift;
        let mean_scale = T::from_f64_const(2.0 / m as f64);
        for high in 0..high_count {
            for low in 0..low_count {
                let base = (high << (shift as usize + width as usize)) | low;
                let mut mean = Complex::zero();
                for v in 0..m {
                    mean += self.amps[base | (v << shift)];
                }
                mean *= mean_scale;
                for v in 0..m {
                    let slot = base | (v << shift);
                    self.amps[slot] = mean - self.amps[slot];
                }
            }
        }
    }

    /// Marginal probabilities of one register.
    pub fn probabilities_of(&self, reg: usize) -> Vec<T> {
        let mut probs = vec![T::zero(); 1usize << self.widths[reg]];
        for (idx, amp) in self.amps.iter().enumerate() {
            if !amp.is_zero() {
                let slot = self.register_value(idx, reg) as usize;
                probs[slot] += amp.norm_sqr();
            }
        }
        probs
    }

    /// One measurement shot of a register (the state is not collapsed;
    /// callers that need post-measurement evolution re-run the circuit).
    pub fn sample_register<R: Rng + ?Sized>(&self, reg: usize, rng: &mut R) -> u64 {
        let probs = self.probabilities_of(reg);
        sample_from_probabilities(&probs, rng)
    }
}

fn sample_from_probabilities<T: Real, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> u64 {
    let u = T::from_f64_const(rng.gen::<f64>());
    let mut acc = T::zero();
    for (v, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return v as u64;
        }
    }
    probs.len() as u64 - 1
}

/// How a subset pair maps onto the Grover search geometry: the free input
/// bits form the search register, `embed` pads them into an oracle input,
/// and a solution is an image with all masked bits zero.
#[derive(Clone, Copy, Debug)]
pub struct SearchLayout {
    pub search_bits: u32,
    pub perm_bits: u32,
    embed_shift: u32,
    image_mask: u64,
}

impl SearchLayout {
    pub fn for_pair(pair: &SubsetPair) -> Result<Self> {
        match pair.kind() {
            PairKind::ZeroPair { half_bits } => Ok(SearchLayout {
                search_bits: half_bits,
                perm_bits: 2 * half_bits,
                embed_shift: half_bits,
                image_mask: (1u64 << half_bits) - 1,
            }),
            PairKind::Sponge { rate, capacity } => Ok(SearchLayout {
                search_bits: rate,
                perm_bits: rate + capacity,
                embed_shift: capacity,
                image_mask: ((1u64 << rate) - 1) << capacity,
            }),
            PairKind::General => Err(Error::Domain(
                "amplitude amplification needs a bit-structured pair (zero-pair or sponge)".into(),
            )),
        }
    }

    /// Pads a search value into a member of `X1`.
    pub fn embed(&self, s: u64) -> u64 {
        s << self.embed_shift
    }

    /// Whether an image lies in `X2`.
    pub fn is_solution_image(&self, w: u64) -> bool {
        w & self.image_mask == 0
    }
}

/// Result of one amplitude-amplification attack configuration.
#[derive(Clone, Debug, Serialize)]
pub struct AttackReport {
    /// Which experiment produced the report.
    pub kind: String,
    pub bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity: Option<u32>,
    /// Actual number of solutions of the attacked instance.
    pub kappa: u64,
    pub iterations: u64,
    /// Queries per attack: `2 * iterations + 1` (phase oracles plus the
    /// verification).
    pub total_queries: u64,
    /// `0` means analytic mode: `empirical` is the exact simulated success.
    pub trials: u64,
    pub empirical: f64,
    /// Closed form `sin^2((2 iterations + 1) asin(sqrt(kappa / M)))`.
    pub analytic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Closed-form success of `iterations` rounds of amplitude amplification
/// with `kappa` of `m` values marked.
pub fn grover_closed_form(kappa: u64, m: u64, iterations: u64) -> f64 {
    if kappa == 0 {
        return 0.0;
    }
    if kappa >= m {
        return 1.0;
    }
    let theta = ((kappa as f64 / m as f64).sqrt()).asin();
    let angle = (2.0 * iterations as f64 + 1.0) * theta;
    angle.sin().powi(2)
}

/// Runs the amplitude-amplification pair search against one oracle
/// instance.
///
/// With `trials = 0` the report carries the exact simulated success
/// probability and the instance's counter reads `2 * iterations + 1`
/// (including the verification charge). With `trials > 0` each trial is
/// one measurement shot verified with one counted forward query.
pub fn grover_attack<R: Rng + ?Sized>(
    instance: &OracleInstance,
    pair: &SubsetPair,
    iterations: u64,
    trials: u64,
    rng: &mut R,
) -> Result<AttackReport> {
    let layout = SearchLayout::for_pair(pair)?;
    if instance.bits() != layout.perm_bits {
        return Err(Error::Config(format!(
            "instance on {} bits does not match the pair's {} bits",
            instance.bits(),
            layout.perm_bits
        )));
    }
    let m = 1u64 << layout.search_bits;
    let kappa = (0..m)
        .filter(|&s| layout.is_solution_image(instance.peek_forward(layout.embed(s))))
        .count() as u64;

    let mut state = StateVector::<f64>::new(&[layout.search_bits, layout.perm_bits])?;
    state.prepare_uniform(0)?;
    for _ in 0..iterations {
        state.phase_mark(instance, 0, 1, &layout)?;
        state.diffuse(0);
    }
    let probs = state.probabilities_of(0);

    let empirical = if trials == 0 {
        // Analytic readout; the verification query is still charged so the
        // counter reflects the full attack cost.
        instance.charge_one();
        (0..m as usize)
            .filter(|&s| {
                layout.is_solution_image(instance.peek_forward(layout.embed(s as u64)))
            })
            .map(|s| probs[s])
            .sum()
    } else {
        let mut successes = 0u64;
        for _ in 0..trials {
            let s = sample_from_probabilities(&probs, rng);
            if layout.is_solution_image(instance.forward(layout.embed(s))) {
                successes += 1;
            }
        }
        successes as f64 / trials as f64
    };

    let (half_bits, rate, capacity) = match pair.kind() {
        PairKind::ZeroPair { half_bits } => (Some(half_bits), None, None),
        PairKind::Sponge { rate, capacity } => (None, Some(rate), Some(capacity)),
        PairKind::General => (None, None, None),
    };
    Ok(AttackReport {
        kind: "grover-pair-search".into(),
        bits: layout.perm_bits,
        half_bits,
        rate,
        capacity,
        kappa,
        iterations,
        total_queries: 2 * iterations + 1,
        trials,
        empirical,
        analytic: grover_closed_form(kappa, m, iterations),
        seed: None,
    })
}

/// A Grover-based preimage finder for the single-round sponge, usable as
/// the adversary in the one-wayness game: amplifies the `r` free input
/// bits towards those whose image matches the challenge in its rate part,
/// then measures. Spends `2 * iterations` queries; the game's challenger
/// does the re-hashing.
pub fn grover_sponge_inverter(
    rate: u32,
    capacity: u32,
    iterations: u64,
    seed: u64,
) -> impl FnMut(&OracleInstance, u64) -> Option<u64> {
    let mut rng: rand_chacha::ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
    move |phi: &OracleInstance, y: u64| {
        let embed = move |s: u64| s << capacity;
        let mut state = StateVector::<f64>::new(&[rate, rate + capacity]).ok()?;
        state.prepare_uniform(0).ok()?;
        let target_pred = move |w: u64| (w >> capacity) == y;
        for _ in 0..iterations {
            // compute-flip-uncompute against the challenge predicate
            state.charge_query().ok()?;
            let table = phi.oracle_table(false).ok()?;
            let embed_table = |st: &StateVector<f64>, idx: usize| {
                table[embed(st.register_value(idx, 0)) as usize]
            };
            state.xor_into_register(1, embed_table);
            state.phase_flip_where(1, target_pred);
            state.charge_query().ok()?;
            phi.charge_one();
            state.xor_into_register(1, embed_table);
            state.diffuse(0);
        }
        Some(state.sample_register(0, &mut rng))
    }
}

/// Report of one distinguishing experiment: a pair-finder is run against
/// permutations with `kappa` zero pairs and against pair-free ones, and the
/// gap between the two acceptance rates is compared to the decision
/// ceiling `2 T sqrt(kappa / 2^n)`.
#[derive(Clone, Debug, Serialize)]
pub struct DistinguishReport {
    pub half_bits: u32,
    pub kappa: u64,
    /// The distinguisher's query budget `T`.
    pub t_budget: u64,
    pub iterations: u64,
    /// Queries actually spent per trial (`<= t_budget`).
    pub queries_per_trial: u64,
    pub trials: u64,
    pub p_kappa: f64,
    pub p_zero: f64,
    pub advantage: f64,
    pub std_error: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Runs the decision experiment at `2n`-bit permutations: sample from the
/// kappa-pair coset and the pair-free coset, run the `T`-query pair-finder
/// on each (amplification rounds plus one verification), and answer 1 iff a
/// valid pair came out.
pub fn distinguishing_experiment<R: Rng + ?Sized>(
    half_bits: u32,
    kappa: u64,
    t_budget: u64,
    trials: u64,
    rng: &mut R,
) -> Result<DistinguishReport> {
    if trials == 0 {
        return Err(Error::Config("need at least one trial per arm".into()));
    }
    let pair = SubsetPair::zero_pair(half_bits)?;
    let layout = SearchLayout::for_pair(&pair)?;
    if layout.search_bits + layout.perm_bits > DEFAULT_AMPLITUDE_BUDGET {
        return Err(Error::Resource(format!(
            "joint register of {} bits exceeds the amplitude budget",
            layout.search_bits + layout.perm_bits
        )));
    }
    let iterations = t_budget.saturating_sub(1) / 2;
    let can_verify = t_budget >= 1;

    let arm = |arm_kappa: u64, rng: &mut R| -> Result<f64> {
        let mut accepted = 0u64;
        for _ in 0..trials {
            if !can_verify {
                continue; // a 0-query distinguisher can never answer 1
            }
            let phi = permgroup::sample_coset_uniform(&pair, arm_kappa as usize, rng)?;
            let instance = OracleInstance::from_permutation(phi)?;
            let mut state = StateVector::<f64>::new(&[layout.search_bits, layout.perm_bits])?;
            state.prepare_uniform(0)?;
            for _ in 0..iterations {
                state.phase_mark(&instance, 0, 1, &layout)?;
                state.diffuse(0);
            }
            let s = state.sample_register(0, rng);
            if layout.is_solution_image(instance.forward(layout.embed(s))) {
                accepted += 1;
            }
        }
        Ok(accepted as f64 / trials as f64)
    };

    let p_kappa = arm(kappa, rng)?;
    let p_zero = arm(0, rng)?;
    let advantage = (p_kappa - p_zero).abs();
    let std_error = (binomial_std_error(p_kappa, trials).powi(2)
        + binomial_std_error(p_zero, trials).powi(2))
    .sqrt();
    let bound =
        2.0 * t_budget as f64 * (kappa as f64 / 2f64.powi(half_bits as i32)).sqrt();
    Ok(DistinguishReport {
        half_bits,
        kappa,
        t_budget,
        iterations,
        queries_per_trial: if can_verify { 2 * iterations + 1 } else { 0 },
        trials,
        p_kappa,
        p_zero,
        advantage,
        std_error,
        bound,
        seed: None,
    })
}
