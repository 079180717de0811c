//! Small statistical helpers shared by samplers, experiments and tests.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Result of a chi-square goodness-of-fit test.
#[derive(Clone, Copy, Debug)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

/// Chi-square statistic and p-value for observed counts against expected
/// counts. Callers are responsible for the expected counts being large
/// enough; use [`chi_square_grouped`] otherwise.
pub fn chi_square_from_counts(observed: &[u64], expected: &[f64]) -> ChiSquareOutcome {
    assert_eq!(observed.len(), expected.len());
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let dof = (expected.iter().filter(|&&e| e > 0.0).count() - 1) as f64;
    ChiSquareOutcome {
        statistic,
        dof,
        p_value: chi_square_pvalue(statistic, dof),
    }
}

/// Upper-tail p-value of the chi-square distribution.
pub fn chi_square_pvalue(statistic: f64, dof: f64) -> f64 {
    if dof <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof).expect("positive dof");
    1.0 - dist.cdf(statistic)
}

/// Chi-square test over a fine outcome space: cells are greedily grouped
/// (in the given order) until every group has expected count at least
/// `min_expected`, which keeps the chi-square approximation valid when
/// individual cells are thin. Zero-probability cells must carry zero
/// observations and are skipped.
pub fn chi_square_grouped(
    observed: &[u64],
    probabilities: &[f64],
    total: u64,
    min_expected: f64,
) -> ChiSquareOutcome {
    assert_eq!(observed.len(), probabilities.len());
    let mut groups: Vec<(u64, f64)> = Vec::new();
    let mut acc_obs = 0u64;
    let mut acc_exp = 0.0f64;
    for (&o, &p) in observed.iter().zip(probabilities) {
        if p == 0.0 {
            assert_eq!(o, 0, "observation in a zero-probability cell");
            continue;
        }
        acc_obs += o;
        acc_exp += p * total as f64;
        if acc_exp >= min_expected {
            groups.push((acc_obs, acc_exp));
            acc_obs = 0;
            acc_exp = 0.0;
        }
    }
    if acc_exp > 0.0 {
        // Fold the tail into the last group rather than testing a thin one.
        if let Some(last) = groups.last_mut() {
            last.0 += acc_obs;
            last.1 += acc_exp;
        } else {
            groups.push((acc_obs, acc_exp));
        }
    }
    let counts: Vec<u64> = groups.iter().map(|&(o, _)| o).collect();
    let expected: Vec<f64> = groups.iter().map(|&(_, e)| e).collect();
    chi_square_from_counts(&counts, &expected)
}

/// Standard error of an empirical binomial rate.
pub fn binomial_std_error(rate: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    (rate * (1.0 - rate) / trials as f64).sqrt()
}
