//! Closed-form evaluators for the query/success ceilings, used by every
//! experiment as its assertion ceiling.
//!
//! Values are returned raw (no clamping); clamping to 1 happens only in
//! [`bound_check`], so that raw values remain usable for tightness plots.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::binomial_std_error;

/// The seven closed forms. Each tag maps to exactly one formula and one
/// hypothesis set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Query floor for unstructured search with `K` of `N` marked:
    /// `T >= sqrt(N/K)/(2 sqrt 2) * (1 + sqrt(e) - sqrt(1-e) - 2/sqrt(N/K))`.
    UnstructuredQueries,
    /// Success ceiling for `T`-query unstructured search: `8 (T+1)^2 K / N`.
    UnstructuredSuccess,
    /// Zero-pair search in a uniform permutation: `50 (T+1)^2 / 2^n`.
    DszsUniform,
    /// Zero-pair search at a fixed pair count `K > 0`: `8 (T+1)^2 K / 2^n`.
    DszsFixedKappa,
    /// Zero-pair search ceiling from the decision route:
    /// `2 (T+1) sqrt(kappa / 2^n)`.
    DszsSuperpos,
    /// Non-uniform double-sided search: `80 (T+1)^2 / 2^min(r,c)`.
    Nuds,
    /// Single-round sponge one-wayness: `80 (T+1)^2 / 2^min(r,c)`.
    SpongeOw,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::UnstructuredQueries,
        BoundKind::UnstructuredSuccess,
        BoundKind::DszsUniform,
        BoundKind::DszsFixedKappa,
        BoundKind::DszsSuperpos,
        BoundKind::Nuds,
        BoundKind::SpongeOw,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::UnstructuredQueries => "unstructured-queries",
            BoundKind::UnstructuredSuccess => "unstructured-success",
            BoundKind::DszsUniform => "dszs-uniform",
            BoundKind::DszsFixedKappa => "dszs-fixed-kappa",
            BoundKind::DszsSuperpos => "dszs-superpos",
            BoundKind::Nuds => "nuds",
            BoundKind::SpongeOw => "sponge-ow",
        }
    }

    /// Whether the formula yields a success probability (as opposed to a
    /// query count).
    pub fn is_success_bound(&self) -> bool {
        !matches!(self, BoundKind::UnstructuredQueries)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown bound kind '{s}'")))
    }
}

/// Named parameters; each kind requires its own subset.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct BoundParams {
    /// Query count `T`.
    pub t: Option<u64>,
    /// Half-width `n` of a `2n`-bit zero-search permutation (the ceilings
    /// divide by `2^n`).
    pub n: Option<u32>,
    pub rate: Option<u32>,
    pub capacity: Option<u32>,
    /// Pair count `kappa` (or the fixed `K` of a planted instance).
    pub kappa: Option<u64>,
    /// Marked-element count `K` of unstructured search.
    pub marked: Option<u64>,
    /// Domain size `N` of unstructured search.
    pub total: Option<u64>,
    /// Target success probability `epsilon`.
    pub epsilon: Option<f64>,
}

impl BoundParams {
    fn t(&self) -> Result<u64> {
        self.t.ok_or_else(|| missing("t"))
    }
    fn n(&self) -> Result<u32> {
        self.n.ok_or_else(|| missing("n"))
    }
    fn rate(&self) -> Result<u32> {
        self.rate.ok_or_else(|| missing("r"))
    }
    fn capacity(&self) -> Result<u32> {
        self.capacity.ok_or_else(|| missing("c"))
    }
    fn kappa(&self) -> Result<u64> {
        self.kappa.ok_or_else(|| missing("kappa"))
    }
    fn marked(&self) -> Result<u64> {
        self.marked.ok_or_else(|| missing("k"))
    }
    fn total(&self) -> Result<u64> {
        self.total.ok_or_else(|| missing("big-n"))
    }
    fn epsilon(&self) -> Result<f64> {
        self.epsilon.ok_or_else(|| missing("epsilon"))
    }
}

fn missing(name: &str) -> Error {
    Error::Config(format!("missing parameter '{name}'"))
}

/// A raw bound value plus the vacuousness flag: success ceilings above 1
/// constrain nothing, and query floors at or below 0 constrain nothing.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bound<T> {
    pub value: T,
    pub vacuous: bool,
}

/// Evaluates one closed form. Values are not clamped.
pub fn bound_value<T: Real>(kind: BoundKind, params: &BoundParams) -> Result<Bound<T>> {
    let value: T = match kind {
        BoundKind::UnstructuredQueries => {
            let n = params.total()?;
            let k = params.marked()?;
            let eps = params.epsilon()?;
            if k == 0 || k > n {
                return Err(Error::Domain(format!("need 1 <= K <= N, got K={k}, N={n}")));
            }
            if !(0.0..=1.0).contains(&eps) || eps == 0.0 {
                return Err(Error::Domain(format!("need epsilon in (0, 1], got {eps}")));
            }
            let ratio = (n as f64 / k as f64).sqrt();
            let value =
                ratio / (2.0 * 2.0f64.sqrt()) * (1.0 + eps.sqrt() - (1.0 - eps).sqrt() - 2.0 / ratio);
            T::from_f64_const(value)
        }
        BoundKind::UnstructuredSuccess => {
            let t = params.t()? as f64;
            let n = params.total()?;
            let k = params.marked()?;
            if k == 0 || k > n {
                return Err(Error::Domain(format!("need 1 <= K <= N, got K={k}, N={n}")));
            }
            T::from_f64_const(8.0 * (t + 1.0) * (t + 1.0) * k as f64 / n as f64)
        }
        BoundKind::DszsUniform => {
            let t = params.t()? as f64;
            let n = params.n()?;
            T::from_f64_const(50.0 * (t + 1.0) * (t + 1.0) / 2f64.powi(n as i32))
        }
        BoundKind::DszsFixedKappa => {
            let t = params.t()? as f64;
            let n = params.n()?;
            let kappa = params.kappa()?;
            if kappa == 0 {
                return Err(Error::Domain(
                    "the fixed-pair-count ceiling needs kappa > 0".into(),
                ));
            }
            T::from_f64_const(8.0 * (t + 1.0) * (t + 1.0) * kappa as f64 / 2f64.powi(n as i32))
        }
        BoundKind::DszsSuperpos => {
            let t = params.t()? as f64;
            let n = params.n()?;
            let kappa = params.kappa()?;
            if kappa == 0 {
                return Err(Error::Domain(
                    "the decision-route ceiling needs kappa > 0".into(),
                ));
            }
            T::from_f64_const(2.0 * (t + 1.0) * (kappa as f64 / 2f64.powi(n as i32)).sqrt())
        }
        BoundKind::Nuds | BoundKind::SpongeOw => {
            let t = params.t()? as f64;
            let min_side = params.rate()?.min(params.capacity()?);
            T::from_f64_const(80.0 * (t + 1.0) * (t + 1.0) / 2f64.powi(min_side as i32))
        }
    };
    let vacuous = if kind.is_success_bound() {
        value > T::one()
    } else {
        value <= T::zero()
    };
    Ok(Bound { value, vacuous })
}

/// Verdict of comparing an empirical rate against a ceiling.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub kind: BoundKind,
    pub params: BoundParams,
    /// Raw formula value.
    pub bound: f64,
    /// `min(1, bound)`, the effective ceiling.
    pub ceiling: f64,
    pub empirical: f64,
    pub trials: u64,
    pub std_error: f64,
    pub sigma_slack: f64,
    pub pass: bool,
}

/// Pass iff `empirical <= min(1, bound) + sigma_slack * stderr`, where
/// `stderr` is the binomial standard error of the empirical rate.
pub fn bound_check(
    kind: BoundKind,
    params: &BoundParams,
    empirical: f64,
    trials: u64,
    sigma_slack: f64,
) -> Result<Verdict> {
    if !kind.is_success_bound() {
        return Err(Error::Domain(
            "only success-type bounds can gate an empirical rate".into(),
        ));
    }
    let bound = bound_value::<f64>(kind, params)?;
    let ceiling = bound.value.min(1.0);
    let std_error = binomial_std_error(empirical, trials);
    Ok(Verdict {
        kind,
        params: *params,
        bound: bound.value,
        ceiling,
        empirical,
        trials,
        std_error,
        sigma_slack,
        pass: empirical <= ceiling + sigma_slack * std_error,
    })
}
