//! Subset-pair statistics: exact counting, the hypergeometric law of the
//! pair count, tail bounds, the KL lower bound, and the non-uniform
//! distribution `D_X` that weights permutations by their pair count.
//!
//! Everything combinatorial is exact big-integer/rational arithmetic;
//! floating point appears only in the tail-bound exponentials.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::permgroup::{PairKind, Permutation, SubsetPair};
use crate::scalar::Real;
use crate::{Natural, Rational};

/// Attempts the rejection sampler makes before giving up.
pub const DEFAULT_REJECTION_ATTEMPTS: u64 = 100_000;

fn binomial_cache() -> &'static Mutex<HashMap<(u64, u64), BigUint>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Binomial coefficient `C(n, k)` via the multiplicative formula, memoized
/// for the session. Concurrent callers block only for a table insertion.
pub fn binomial(n: u64, k: u64) -> Natural {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    if k == 0 {
        return BigUint::one();
    }
    if let Some(v) = binomial_cache().lock().unwrap().get(&(n, k)) {
        return v.clone();
    }
    let mut value = BigUint::one();
    for i in 0..k {
        value *= BigUint::from(n - i);
        value /= BigUint::from(i + 1); // exact: partial products are binomials
    }
    binomial_cache()
        .lock()
        .unwrap()
        .insert((n, k), value.clone());
    value
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> Natural {
    let mut value = BigUint::one();
    for i in 2..=n {
        value *= BigUint::from(i);
    }
    value
}

fn ratio(num: Natural, den: Natural) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Expected number of X-pairs of a uniform permutation: `|X1||X2| / N`,
/// exact.
pub fn expected_pairs_uniform(pair: &SubsetPair) -> Rational {
    ratio(
        BigUint::from(pair.x1().len() as u64) * BigUint::from(pair.x2().len() as u64),
        BigUint::from(pair.size() as u64),
    )
}

/// Total number of X-pairs over all of `S_N`: `|X1| * |X2| * (N-1)!`,
/// exact.
pub fn total_pairs(pair: &SubsetPair) -> Natural {
    BigUint::from(pair.x1().len() as u64)
        * BigUint::from(pair.x2().len() as u64)
        * factorial(pair.size() as u64 - 1)
}

/// Probability of drawing exactly `k` marked objects when drawing `t` out
/// of `n` of which `m` are marked: `C(m,k) C(n-m,t-k) / C(n,t)`, exact.
/// Zero outside the feasible range.
pub fn hypergeometric_pmf(n: u64, m: u64, t: u64, k: u64) -> Result<Rational> {
    if m > n || t > n {
        return Err(Error::Domain(format!(
            "hypergeometric parameters need K <= N and T <= N (N={n}, K={m}, T={t})"
        )));
    }
    if k > t || k > m || t - k > n - m {
        return Ok(Rational::zero());
    }
    Ok(ratio(
        binomial(m, k) * binomial(n - m, t - k),
        binomial(n, t),
    ))
}

/// The exact law of the X-pair count of a uniform permutation:
/// entry `kappa` is `Pr[|X_pi| = kappa]`, for `kappa = 0 ..= min(|X1|,|X2|)`.
///
/// The count is hypergeometric: the images of `X1` are assigned without
/// replacement among `N` slots of which `|X2|` are marked.
pub fn pair_count_distribution(pair: &SubsetPair) -> Vec<Rational> {
    let n = pair.size() as u64;
    let m = pair.x2().len() as u64;
    let t = pair.x1().len() as u64;
    (0..=pair.max_pairs() as u64)
        .map(|k| hypergeometric_pmf(n, m, t, k).expect("parameters in range"))
        .collect()
}

/// Probability that a uniform permutation of a perfect-square `N` has at
/// least one zero pair: `1 - C(N - sqrt(N), sqrt(N)) / C(N, sqrt(N))`.
pub fn zero_pair_existence_prob(n_total: u64) -> Result<Rational> {
    let root = n_total.isqrt();
    if root * root != n_total || n_total == 0 {
        return Err(Error::Domain(format!(
            "zero-pair existence needs a perfect-square N, got {n_total}"
        )));
    }
    let no_pair = ratio(binomial(n_total - root, root), binomial(n_total, root));
    Ok(Rational::one() - no_pair)
}

/// Kullback-Leibler divergence between Bernoulli parameters:
/// `q ln(q/p) + (1-q) ln((1-q)/(1-p))`. Both arguments must lie strictly
/// inside `(0, 1)`.
pub fn kl_divergence<T: Real>(q: T, p: T) -> Result<T> {
    let zero = T::zero();
    let one = T::one();
    if !(q > zero && q < one && p > zero && p < one) {
        return Err(Error::Domain(
            "KL divergence needs p, q strictly inside (0, 1)".into(),
        ));
    }
    Ok(q * (q / p).ln() + (one - q) * ((one - q) / (one - p)).ln())
}

/// Hoeffding-style tail bound for the hypergeometric distribution with `n`
/// objects, `m` marked and `draws` draws:
/// `Pr[X >= (p + t) * draws] <= exp(-draws * D(p + t || p))` with
/// `p = m / n` and `0 <= t < 1 - p`.
pub fn hoeffding_tail<T: Real>(n: u64, m: u64, draws: u64, t: T) -> Result<T> {
    if m == 0 || m >= n {
        return Err(Error::Domain(format!(
            "Hoeffding bound needs 0 < K < N, got K={m}, N={n}"
        )));
    }
    let p = T::from_u64(m).unwrap() / T::from_u64(n).unwrap();
    if t < T::zero() || t >= T::one() - p {
        return Err(Error::Domain(
            "Hoeffding bound needs 0 <= t < 1 - K/N".into(),
        ));
    }
    if t == T::zero() {
        return Ok(T::one());
    }
    let d = kl_divergence(p + t, p)?;
    Ok((-T::from_u64(draws).unwrap() * d).exp())
}

/// Which of the two pair-count tail theorems to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailKind {
    /// Uniform permutations: `Pr[|X_pi| >= E + u] <= exp(-3u/4)` for
    /// `u >= 6 E`.
    Uniform,
    /// `D_X`-distributed permutations with `|X1||X2| = N`:
    /// `Pr[|X_pi| >= E + u] <= 3 exp(-4u/9)` for `u >= 6 E`.
    NonUniform,
}

/// Closed-form tail bound on the X-pair count. Refuses (rather than
/// extrapolates) outside each theorem's hypothesis region, naming the
/// violated hypothesis.
pub fn tail_bound<T: Real>(pair: &SubsetPair, u: T, kind: TailKind) -> Result<T> {
    match kind {
        TailKind::Uniform => {
            let expectation = expected_pairs_uniform(pair)
                .to_f64()
                .expect("finite rational");
            let threshold = T::from_f64_const(6.0 * expectation);
            if u < threshold {
                return Err(Error::Domain(format!(
                    "hypothesis u >= 6*E[|X_pi|] violated: u = {u}, 6E = {threshold}"
                )));
            }
            Ok((-T::from_f64_const(0.75) * u).exp())
        }
        TailKind::NonUniform => {
            if pair.x1().len() * pair.x2().len() != pair.size() {
                return Err(Error::Domain(format!(
                    "hypothesis |X1|*|X2| = N violated: {} * {} != {}",
                    pair.x1().len(),
                    pair.x2().len(),
                    pair.size()
                )));
            }
            let expectation = nonuniform_expectation(pair)
                .to_f64()
                .expect("finite rational");
            let threshold = T::from_f64_const(6.0 * expectation);
            if u < threshold {
                return Err(Error::Domain(format!(
                    "hypothesis u >= 6*E_Dx[|X_pi|] violated: u = {u}, 6E = {threshold}"
                )));
            }
            let four_ninths = T::from_f64_const(4.0 / 9.0);
            Ok(T::from_f64_const(3.0) * (-four_ninths * u).exp())
        }
    }
}

/// Probability of `p` under the non-uniform distribution `D_X`:
/// `|X_p| / sum_sigma |X_sigma|`, exact. Zero for pair-free permutations.
pub fn dx_pmf(p: &Permutation, pair: &SubsetPair) -> Result<Rational> {
    if p.size() != pair.size() {
        return Err(Error::Config(format!(
            "permutation size {} does not match subset-pair size {}",
            p.size(),
            pair.size()
        )));
    }
    let count = pair.count_pairs(p) as u64;
    Ok(ratio(BigUint::from(count), total_pairs(pair)))
}

/// Exact sample from `D_X`. Sponge-shaped pairs use the O(N) shift
/// sampler; everything else falls back to rejection.
pub fn sample_dx<R: Rng + ?Sized>(pair: &SubsetPair, rng: &mut R) -> Result<Permutation> {
    match pair.kind() {
        PairKind::Sponge { .. } => sample_dx_shift(pair, rng),
        _ => sample_dx_rejection(pair, rng, DEFAULT_REJECTION_ATTEMPTS),
    }
}

/// Exact `D_X` sampler for sponge-shaped pairs: draw a uniform permutation
/// `phi` and a uniform input block `x`, read `y` off the first `r` bits of
/// `phi(x || 0^c)`, and return `XOR_{y || 0^c} ∘ phi`. The induced marginal
/// is exactly `D_X`.
pub fn sample_dx_shift<R: Rng + ?Sized>(pair: &SubsetPair, rng: &mut R) -> Result<Permutation> {
    let (rate, capacity) = pair.sponge_params().ok_or_else(|| {
        Error::Domain("the shift sampler needs a sponge-shaped subset pair".into())
    })?;
    let phi = Permutation::sample_uniform(pair.size(), rng);
    let x_block = rng.gen_range(0..(1u64 << rate)) as usize;
    let input = x_block << capacity;
    let y = phi.apply(input) >> capacity;
    let mask = y << capacity;
    let forward: Vec<usize> = (0..pair.size()).map(|v| phi.apply(v) ^ mask).collect();
    Permutation::from_forward(forward)
}

/// Exact `D_X` sampler for arbitrary pairs: draw uniform permutations and
/// accept each with probability `|X_phi| / min(|X1|, |X2|)`.
pub fn sample_dx_rejection<R: Rng + ?Sized>(
    pair: &SubsetPair,
    rng: &mut R,
    max_attempts: u64,
) -> Result<Permutation> {
    let ceiling = pair.max_pairs() as u64;
    for _ in 0..max_attempts {
        let phi = Permutation::sample_uniform(pair.size(), rng);
        let count = pair.count_pairs(&phi) as u64;
        if count > 0 && rng.gen_range(0..ceiling) < count {
            return Ok(phi);
        }
    }
    Err(Error::Resource(format!(
        "rejection sampler exhausted {max_attempts} attempts"
    )))
}

/// Expected X-pair count under `D_X`, exact: the ratio of the second to the
/// first moment of the uniform pair count, evaluated on the hypergeometric
/// law.
pub fn nonuniform_expectation(pair: &SubsetPair) -> Rational {
    let dist = pair_count_distribution(pair);
    let mut first = Rational::zero();
    let mut second = Rational::zero();
    for (kappa, prob) in dist.iter().enumerate() {
        let k = Rational::from(BigInt::from(kappa as u64));
        first += &k * prob;
        second += &k * &k * prob;
    }
    second / first
}

/// Expected X-pair count under `D_X` by exhaustive enumeration of `S_N`;
/// the independent oracle for [`nonuniform_expectation`].
pub fn nonuniform_expectation_enumerated(pair: &SubsetPair, cap: usize) -> Result<Rational> {
    if pair.size() > cap {
        return Err(Error::Resource(format!(
            "N = {} exceeds the enumeration cap {cap}",
            pair.size()
        )));
    }
    let mut sum = 0u64;
    let mut sum_sq = 0u64;
    for p in Permutation::all(pair.size()) {
        let k = pair.count_pairs(&p) as u64;
        sum += k;
        sum_sq += k * k;
    }
    Ok(ratio(BigUint::from(sum_sq), BigUint::from(sum)))
}

/// Closed interval guaranteed to contain the `D_X` expectation:
/// `[1, 1 + |X1||X2|/N]`.
pub fn nonuniform_expectation_bounds(pair: &SubsetPair) -> (Rational, Rational) {
    (
        Rational::one(),
        Rational::one() + expected_pairs_uniform(pair),
    )
}

/// Summary statistics of a subset pair.
#[derive(Clone, Debug)]
pub struct PairStatistics {
    pub n_total: usize,
    pub x1_size: usize,
    pub x2_size: usize,
    /// `|X1||X2| / N`, exact.
    pub expectation_uniform: Rational,
    /// `|X1||X2|(N-1)!`, exact.
    pub total_pairs: Natural,
    /// Interval `[lo, hi]` containing the `D_X` expectation.
    pub expectation_nonuniform_bounds: (Rational, Rational),
}

impl PairStatistics {
    pub fn for_pair(pair: &SubsetPair) -> Self {
        PairStatistics {
            n_total: pair.size(),
            x1_size: pair.x1().len(),
            x2_size: pair.x2().len(),
            expectation_uniform: expected_pairs_uniform(pair),
            total_pairs: total_pairs(pair),
            expectation_nonuniform_bounds: nonuniform_expectation_bounds(pair),
        }
    }
}
