//! The sponge construction over an invertible block function, the
//! one-wayness game, and the two equivalent challenge distributions used by
//! the inversion reduction.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::OracleInstance;
use crate::pairs;
use crate::permgroup::{Permutation, SubsetPair};
use crate::Rational;

/// Widest block function the game will materialize as an explicit table;
/// beyond this it switches to a lazily sampled one.
pub const EXPLICIT_TABLE_BITS: u32 = 20;

/// Sponge parameters: rate `r`, capacity `c`, an initialization vector of
/// `c` bits (all-zero by default) and the number of squeezed output blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpongeParams {
    rate: u32,
    capacity: u32,
    iv: u64,
    output_blocks: usize,
}

impl SpongeParams {
    pub fn new(rate: u32, capacity: u32) -> Result<Self> {
        if rate == 0 || capacity == 0 {
            return Err(Error::Config("sponge needs r >= 1 and c >= 1".into()));
        }
        if rate + capacity > 48 {
            return Err(Error::Config(format!(
                "state width r + c = {} out of supported range",
                rate + capacity
            )));
        }
        Ok(SpongeParams {
            rate,
            capacity,
            iv: 0,
            output_blocks: 1,
        })
    }

    pub fn with_iv(mut self, iv: u64) -> Result<Self> {
        if iv >> self.capacity != 0 {
            return Err(Error::Config(format!(
                "IV {iv:#x} wider than the capacity ({} bits)",
                self.capacity
            )));
        }
        self.iv = iv;
        Ok(self)
    }

    pub fn with_output_blocks(mut self, blocks: usize) -> Result<Self> {
        if blocks == 0 {
            return Err(Error::Config("need at least one output block".into()));
        }
        self.output_blocks = blocks;
        Ok(self)
    }

    pub fn rate(&self) -> u32 {
        self.rate
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn iv(&self) -> u64 {
        self.iv
    }

    pub fn output_blocks(&self) -> usize {
        self.output_blocks
    }

    /// State width `n = r + c`.
    pub fn state_bits(&self) -> u32 {
        self.rate + self.capacity
    }

    /// `N = 2^n`.
    pub fn n_points(&self) -> u64 {
        1u64 << self.state_bits()
    }

    fn rate_part(&self, state: u64) -> u64 {
        state >> self.capacity
    }

    fn capacity_part(&self, state: u64) -> u64 {
        state & ((1u64 << self.capacity) - 1)
    }

    /// The subset pair whose X-pairs are exactly the single-round
    /// preimage/image pairs of the all-zero digest.
    pub fn subset_pair(&self) -> Result<SubsetPair> {
        SubsetPair::sponge(self.rate, self.capacity)
    }
}

fn check_block(params: &SpongeParams, block: u64) -> Result<()> {
    if block >> params.rate != 0 {
        return Err(Error::Domain(format!(
            "block {block:#x} wider than the rate ({} bits)",
            params.rate
        )));
    }
    Ok(())
}

fn sponge_eval_with<F: Fn(u64) -> u64>(
    params: &SpongeParams,
    call: F,
    message: &[u64],
) -> Result<Vec<u64>> {
    if message.is_empty() {
        return Err(Error::Domain("message must contain at least one block".into()));
    }
    for &m in message {
        check_block(params, m)?;
    }
    // absorb
    let mut state = params.iv;
    for &m in message {
        let fed = ((params.rate_part(state) ^ m) << params.capacity) | params.capacity_part(state);
        state = call(fed);
    }
    // squeeze
    let mut digest = vec![params.rate_part(state)];
    for _ in 1..params.output_blocks {
        state = call(state);
        digest.push(params.rate_part(state));
    }
    Ok(digest)
}

/// Single-round sponge: the first `r` bits of `phi(x || IV)`. One counted
/// query.
pub fn single_round(phi: &OracleInstance, params: &SpongeParams, x: u64) -> Result<u64> {
    check_width(phi, params)?;
    check_block(params, x)?;
    Ok(params.rate_part(phi.forward((x << params.capacity) | params.iv)))
}

/// [`single_round`] over a plain permutation, outside the query model.
pub fn single_round_of(phi: &Permutation, params: &SpongeParams, x: u64) -> Result<u64> {
    check_perm_width(phi, params)?;
    check_block(params, x)?;
    Ok(params.rate_part(phi.apply(((x << params.capacity) | params.iv) as usize) as u64))
}

/// Full absorb-then-squeeze evaluation on a sequence of `r`-bit blocks.
/// Counts one query per block-function application.
pub fn sponge_eval(
    phi: &OracleInstance,
    params: &SpongeParams,
    message: &[u64],
) -> Result<Vec<u64>> {
    check_width(phi, params)?;
    sponge_eval_with(params, |v| phi.forward(v), message)
}

/// [`sponge_eval`] over a plain permutation, outside the query model.
pub fn sponge_eval_of(
    phi: &Permutation,
    params: &SpongeParams,
    message: &[u64],
) -> Result<Vec<u64>> {
    check_perm_width(phi, params)?;
    sponge_eval_with(params, |v| phi.apply(v as usize) as u64, message)
}

fn check_width(phi: &OracleInstance, params: &SpongeParams) -> Result<()> {
    if phi.bits() != params.state_bits() {
        return Err(Error::Config(format!(
            "block function on {} bits does not match r + c = {}",
            phi.bits(),
            params.state_bits()
        )));
    }
    Ok(())
}

fn check_perm_width(phi: &Permutation, params: &SpongeParams) -> Result<()> {
    if phi.size() as u64 != params.n_points() {
        return Err(Error::Config(format!(
            "block function of size {} does not match N = {}",
            phi.size(),
            params.n_points()
        )));
    }
    Ok(())
}

/// Record of one run of the one-wayness game.
#[derive(Clone, Debug, serde::Serialize)]
pub struct OneWayTranscript {
    pub rate: u32,
    pub capacity: u32,
    /// The sampled preimage.
    pub x: u64,
    /// The challenge image `y = Sp(x)`.
    pub y: u64,
    pub adversary_output: Option<u64>,
    /// Queries the adversary spent on the block function.
    pub queries_used: u64,
    /// Whether the output re-hashes to `y`.
    pub success: bool,
}

/// Plays the one-wayness game: sample the block function and an `r`-bit
/// input `x`, hand the adversary `y = Sp(x)` plus oracle handles, and score
/// whether its output re-hashes to `y`.
pub fn one_wayness_game<R, A>(
    params: &SpongeParams,
    mut adversary: A,
    rng: &mut R,
) -> Result<OneWayTranscript>
where
    R: Rng + ?Sized,
    A: FnMut(&OracleInstance, u64) -> Option<u64>,
{
    let phi = if params.state_bits() <= EXPLICIT_TABLE_BITS {
        OracleInstance::from_permutation(Permutation::sample_uniform(
            params.n_points() as usize,
            rng,
        ))?
    } else {
        OracleInstance::lazy_uniform(params.state_bits(), rng.gen())?
    };
    let x = rng.gen_range(0..(1u64 << params.rate));
    // The challenge evaluation is the challenger's, outside the query count.
    let y = params.rate_part(phi.peek_forward((x << params.capacity) | params.iv));

    let before = phi.queries();
    let output = adversary(&phi, y).map(|v| v & ((1u64 << params.rate) - 1));
    let queries_used = phi.queries() - before;

    let success = match output {
        Some(xp) => params.rate_part(phi.peek_forward((xp << params.capacity) | params.iv)) == y,
        None => false,
    };
    Ok(OneWayTranscript {
        rate: params.rate,
        capacity: params.capacity,
        x,
        y,
        adversary_output: output,
        queries_used,
        success,
    })
}

/// One sample of the forward challenge distribution: uniform `phi`, uniform
/// `x`, output `(phi, Sp^phi(x))`.
pub fn sample_d1<R: Rng + ?Sized>(
    params: &SpongeParams,
    rng: &mut R,
) -> Result<(Permutation, u64)> {
    let phi = Permutation::sample_uniform(params.n_points() as usize, rng);
    let x = rng.gen_range(0..(1u64 << params.rate));
    let y = single_round_of(&phi, params, x)?;
    Ok((phi, y))
}

/// One sample of the reverse challenge distribution: uniform `y`, a
/// pair-count-weighted permutation `pi`, output `(XOR_{y||0^c} ∘ pi, y)`.
pub fn sample_d2<R: Rng + ?Sized>(
    params: &SpongeParams,
    rng: &mut R,
) -> Result<(Permutation, u64)> {
    if params.iv != 0 {
        return Err(Error::Domain(
            "the reverse challenge distribution is defined for IV = 0^c".into(),
        ));
    }
    let y = rng.gen_range(0..(1u64 << params.rate));
    let pair = params.subset_pair()?;
    let pi = pairs::sample_dx(&pair, rng)?;
    let mask = (y << params.capacity) as usize;
    let forward: Vec<usize> = (0..pi.size()).map(|v| pi.apply(v) ^ mask).collect();
    Ok((Permutation::from_forward(forward)?, y))
}

/// The exact joint law of `(phi, y)` under the forward distribution,
/// keyed by the forward table and the image. Enumerates `S_N`.
pub fn joint_law_d1(
    params: &SpongeParams,
    cap: usize,
) -> Result<BTreeMap<(Vec<usize>, u64), Rational>> {
    let n = params.n_points() as usize;
    if n > cap {
        return Err(Error::Resource(format!(
            "N = {n} exceeds the enumeration cap {cap}"
        )));
    }
    let n_fact = pairs::factorial(n as u64);
    let r_points = 1u64 << params.rate;
    let mut law = BTreeMap::new();
    for phi in Permutation::all(n) {
        for x in 0..r_points {
            let y = single_round_of(&phi, params, x)?;
            let key = (phi.forward_table().to_vec(), y);
            let weight = Rational::new(
                BigInt::one(),
                BigInt::from(n_fact.clone() * BigUint::from(r_points)),
            );
            *law.entry(key).or_insert_with(|| Rational::new(0.into(), 1.into())) += weight;
        }
    }
    Ok(law)
}

/// The exact joint law of `(phi, y)` under the reverse distribution:
/// `Pr[(phi, y)] = dx_pmf(XOR_{y||0^c} ∘ phi) / 2^r`.
pub fn joint_law_d2(
    params: &SpongeParams,
    cap: usize,
) -> Result<BTreeMap<(Vec<usize>, u64), Rational>> {
    if params.iv != 0 {
        return Err(Error::Domain(
            "the reverse challenge distribution is defined for IV = 0^c".into(),
        ));
    }
    let n = params.n_points() as usize;
    if n > cap {
        return Err(Error::Resource(format!(
            "N = {n} exceeds the enumeration cap {cap}"
        )));
    }
    let pair = params.subset_pair()?;
    let r_points = 1u64 << params.rate;
    let mut law = BTreeMap::new();
    for phi in Permutation::all(n) {
        for y in 0..r_points {
            let mask = (y << params.capacity) as usize;
            let pi_table: Vec<usize> = (0..n).map(|v| phi.apply(v) ^ mask).collect();
            let pi = Permutation::from_forward(pi_table)?;
            let prob = pairs::dx_pmf(&pi, &pair)? / Rational::from(BigInt::from(r_points));
            if !num_traits::Zero::is_zero(&prob) {
                law.insert((phi.forward_table().to_vec(), y), prob);
            }
        }
    }
    Ok(law)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{ToPrimitive, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn explicit(table: &[usize]) -> OracleInstance {
        OracleInstance::from_permutation(Permutation::from_forward(table.to_vec()).unwrap())
            .unwrap()
    }

    #[test]
    fn single_round_identity_and_hand_cases() {
        let params = SpongeParams::new(1, 1).unwrap();
        let id = explicit(&[0, 1, 2, 3]);
        for x in 0..2 {
            assert_eq!(single_round(&id, &params, x).unwrap(), x);
        }
        // phi swapping 00 <-> 10: Sp(0) = first bit of phi(00) = 1.
        let swap = explicit(&[2, 1, 0, 3]);
        assert_eq!(single_round(&swap, &params, 0).unwrap(), 1);
        assert!(single_round(&swap, &params, 2).is_err());
    }

    #[test]
    fn sponge_eval_hand_case_and_collapse() {
        // phi = identity, r = c = 1, message (1, 1): state goes 10 then
        // phi(00) = 00, digest 0.
        let params = SpongeParams::new(1, 1).unwrap();
        let id = explicit(&[0, 1, 2, 3]);
        assert_eq!(sponge_eval(&id, &params, &[1, 1]).unwrap(), vec![0]);

        // Single block: digest is the first r bits of phi(m || IV).
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let params = SpongeParams::new(2, 2).unwrap();
        for _ in 0..20 {
            let phi = Permutation::sample_uniform(16, &mut rng);
            let inst = OracleInstance::from_permutation(phi.clone()).unwrap();
            for m in 0..4u64 {
                assert_eq!(
                    sponge_eval(&inst, &params, &[m]).unwrap(),
                    vec![single_round_of(&phi, &params, m).unwrap()]
                );
            }
        }
    }

    #[test]
    fn sponge_eval_matches_reference_evaluator() {
        // Independent reference: track rate and capacity halves separately.
        fn reference(phi: &Permutation, params: &SpongeParams, message: &[u64]) -> Vec<u64> {
            let c = params.capacity();
            let mut rate_half = 0u64;
            let mut cap_half = params.iv();
            for &m in message {
                let state = phi.apply((((rate_half ^ m) << c) | cap_half) as usize) as u64;
                rate_half = state >> c;
                cap_half = state & ((1 << c) - 1);
            }
            let mut out = vec![rate_half];
            for _ in 1..params.output_blocks() {
                let state = phi.apply(((rate_half << c) | cap_half) as usize) as u64;
                rate_half = state >> c;
                cap_half = state & ((1 << c) - 1);
                out.push(rate_half);
            }
            out
        }

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let params = SpongeParams::new(2, 2)
            .unwrap()
            .with_iv(0b01)
            .unwrap()
            .with_output_blocks(3)
            .unwrap();
        for _ in 0..50 {
            let phi = Permutation::sample_uniform(16, &mut rng);
            let message: Vec<u64> = (0..3).map(|_| rng.gen_range(0..4)).collect();
            assert_eq!(
                sponge_eval_of(&phi, &params, &message).unwrap(),
                reference(&phi, &params, &message)
            );
        }
    }

    #[test]
    fn sponge_eval_rejects_bad_blocks_and_empty_messages() {
        let params = SpongeParams::new(1, 1).unwrap();
        let id = explicit(&[0, 1, 2, 3]);
        assert!(sponge_eval(&id, &params, &[]).is_err());
        assert!(sponge_eval(&id, &params, &[2]).is_err());
    }

    #[test]
    fn single_round_agrees_with_one_block_eval_exhaustively() {
        // All block functions up to 3 state bits, then random block
        // functions with every input at 4..6 state bits.
        for (r, c) in [(1, 1), (1, 2), (2, 1)] {
            let params = SpongeParams::new(r, c).unwrap();
            let n = params.n_points() as usize;
            for phi in Permutation::all(n) {
                for x in 0..(1u64 << r) {
                    assert_eq!(
                        sponge_eval_of(&phi, &params, &[x]).unwrap()[0],
                        single_round_of(&phi, &params, x).unwrap()
                    );
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for (r, c) in [(2, 2), (2, 3), (3, 3)] {
            let params = SpongeParams::new(r, c).unwrap();
            for _ in 0..20 {
                let phi = Permutation::sample_uniform(params.n_points() as usize, &mut rng);
                for x in 0..(1u64 << r) {
                    assert_eq!(
                        sponge_eval_of(&phi, &params, &[x]).unwrap()[0],
                        single_round_of(&phi, &params, x).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn game_with_cheater_and_counter() {
        let params = SpongeParams::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let t = one_wayness_game(
                &params,
                |phi, y| {
                    (0..4u64).find(|&x| phi.peek_forward(x << 2) >> 2 == y)
                },
                &mut rng,
            )
            .unwrap();
            assert!(t.success, "table-holding cheater always wins");
            assert_eq!(t.queries_used, 0, "peek is not a counted query");
        }
    }

    #[test]
    fn game_with_constant_adversary_matches_exhaustive_rate() {
        // Exact success probability of the constant adversary at r = c = 1,
        // by enumerating every (phi, x): success iff Sp(0) = Sp(x). This
        // comes out to 2/3, not 1/2: the challenge is correlated with phi.
        let params = SpongeParams::new(1, 1).unwrap();
        let mut numer = 0u64;
        let mut denom = 0u64;
        for phi in Permutation::all(4) {
            for x in 0..2u64 {
                let y = single_round_of(&phi, &params, x).unwrap();
                if single_round_of(&phi, &params, 0).unwrap() == y {
                    numer += 1;
                }
                denom += 1;
            }
        }
        let exact = numer as f64 / denom as f64;
        assert!((exact - 2.0 / 3.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let trials = 10_000;
        let mut wins = 0u64;
        for _ in 0..trials {
            let t = one_wayness_game(&params, |_, _| Some(0), &mut rng).unwrap();
            if t.success {
                wins += 1;
            }
        }
        let rate = wins as f64 / trials as f64;
        let sigma = crate::stats::binomial_std_error(exact, trials);
        assert!((rate - exact).abs() <= 3.0 * sigma, "rate = {rate}");
    }

    #[test]
    fn game_uses_lazy_oracle_above_the_table_cap() {
        let params = SpongeParams::new(12, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = one_wayness_game(&params, |phi, _| Some(phi.forward(1) & 0xfff), &mut rng)
            .unwrap();
        assert_eq!(t.queries_used, 1);
    }

    #[test]
    fn d1_marginals() {
        let params = SpongeParams::new(1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let all: Vec<Permutation> = Permutation::all(4).collect();
        let mut phi_counts = vec![0u64; 24];
        let mut y_counts = [0u64; 2];
        let trials = 100_000u64;
        for _ in 0..trials {
            let (phi, y) = sample_d1(&params, &mut rng).unwrap();
            phi_counts[all.iter().position(|q| *q == phi).unwrap()] += 1;
            y_counts[y as usize] += 1;
        }
        let expected = vec![trials as f64 / 24.0; 24];
        let outcome = crate::stats::chi_square_from_counts(&phi_counts, &expected);
        assert!(outcome.p_value > 1e-3, "phi marginal {outcome:?}");
        let outcome =
            crate::stats::chi_square_from_counts(&y_counts, &[trials as f64 / 2.0; 2]);
        assert!(outcome.p_value > 1e-3, "y marginal {outcome:?}");
    }

    #[test]
    fn d2_reconstructed_pi_always_has_a_pair() {
        let params = SpongeParams::new(1, 2).unwrap();
        let pair = params.subset_pair().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..500 {
            let (phi, y) = sample_d2(&params, &mut rng).unwrap();
            let mask = (y << params.capacity()) as usize;
            let pi_table: Vec<usize> = (0..8).map(|v| phi.apply(v) ^ mask).collect();
            let pi = Permutation::from_forward(pi_table).unwrap();
            assert!(pair.count_pairs(&pi) >= 1);
        }
    }

    #[test]
    fn joint_laws_are_probability_distributions() {
        let params = SpongeParams::new(1, 1).unwrap();
        let d1 = joint_law_d1(&params, 8).unwrap();
        let d2 = joint_law_d2(&params, 8).unwrap();
        let total1: Rational = d1.values().cloned().sum();
        let total2: Rational = d2.values().cloned().sum();
        assert!(total1.is_one());
        assert!(total2.is_one());
        // Spot value: under D1, Pr[(id, y)] = (1/24) * #preimages / 2.
        let id: Vec<usize> = (0..4).collect();
        let p = d1.get(&(id, 0)).unwrap();
        assert_eq!(p.to_f64().unwrap(), (1.0 / 24.0) * 0.5);
    }

    #[test]
    fn determinism_under_fixed_seed() {
        let params = SpongeParams::new(2, 1).unwrap();
        let a = sample_d1(&params, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_d1(&params, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        let a = sample_d2(&params, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_d2(&params, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_query_adversary_never_beats_the_bound() {
        // Empirical success of a null adversary stays under the T = 0
        // one-wayness ceiling.
        let params = SpongeParams::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let trials = 2_000u64;
        let mut wins = 0u64;
        for _ in 0..trials {
            let t = one_wayness_game(&params, |_, _| Some(1), &mut rng).unwrap();
            if t.success {
                wins += 1;
            }
        }
        let empirical = wins as f64 / trials as f64;
        let bound = crate::bounds::bound_value::<f64>(
            crate::bounds::BoundKind::SpongeOw,
            &crate::bounds::BoundParams {
                t: Some(0),
                rate: Some(2),
                capacity: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        let sigma = crate::stats::binomial_std_error(empirical, trials);
        assert!(empirical <= bound.value.min(1.0) + 3.0 * sigma);
    }

    #[test]
    fn joint_d1_is_zero_free_wherever_d2_is() {
        let params = SpongeParams::new(1, 1).unwrap();
        let d2 = joint_law_d2(&params, 8).unwrap();
        for prob in d2.values() {
            assert!(!prob.is_zero());
        }
    }
}
