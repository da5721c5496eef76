//! Exact steady degree distribution `P(k) = lim P(k, t)`.
//!
//! Two independent routes are provided. [`steady_by_recurrence`] iterates
//! `P(k) = [F(k-1) P(k-1) + d_k] / (1 + F(k))` forward from the head value
//! `P(m) = d_m / (1 + F(m))`. [`steady_closed_form_affine`] evaluates the
//! explicit product/sum over the birth support and, beyond it, the ratio of
//! Gamma functions that an affine `F` produces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rate::{validate_birth, AffineLimit, BirthDistribution, ChainClass};
use crate::special::log_gamma_ratio;

pub const DEFAULT_K_MAX: u64 = 10_000;

/// Bound on how far the partial sum may exceed one.
pub const MASS_SLACK: f64 = 1e-10;

/// Power-law tail summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailInfo {
    /// `1 + 1/A`.
    pub gamma: f64,
    /// `C` with `P(k) ≈ C k^(-gamma)` for large `k`.
    pub prefactor: f64,
    /// `1 - Σ_{k <= k_max} P(k)`, clamped at zero.
    pub truncated_mass: f64,
}

/// How the mass beyond `k_max` behaves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Tail {
    PowerLaw(TailInfo),
    /// `P(k + 1) = ratio * P(k)` beyond the birth support.
    Geometric {
        ratio: f64,
        truncated_mass: f64,
    },
}

impl Tail {
    pub fn gamma(&self) -> Option<f64> {
        match self {
            Tail::PowerLaw(info) => Some(info.gamma),
            Tail::Geometric { .. } => None,
        }
    }
}

/// Probabilities `P(k)` on `k = m..=k_max`, stored densely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    pub m: u64,
    pub probs: Vec<f64>,
    pub tail: Option<Tail>,
}

impl DegreeDistribution {
    /// Checked constructor: non-empty, every entry in `[0, 1]`, and the
    /// partial sum at most `1 + MASS_SLACK`.
    pub fn new(m: u64, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("degree distribution has no entries"));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, &p)| !(0.0..=1.0).contains(&p))
        {
            return Err(Error::domain(format!(
                "P({}) = {p} lies outside [0, 1]",
                m + i as u64
            )));
        }
        let sum: f64 = probs.iter().sum();
        if sum > 1.0 + MASS_SLACK {
            return Err(Error::domain(format!("partial sum {sum} exceeds 1")));
        }
        Ok(DegreeDistribution {
            m,
            probs,
            tail: None,
        })
    }

    pub fn k_max(&self) -> u64 {
        self.m + self.probs.len() as u64 - 1
    }

    /// `P(k)`, zero outside `m..=k_max`.
    #[inline]
    pub fn p(&self, k: u64) -> f64 {
        if k < self.m {
            return 0.0;
        }
        self.probs
            .get((k - self.m) as usize)
            .copied()
            .unwrap_or(0.0)
    }

    pub fn partial_sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mass not represented on `m..=k_max`.
    pub fn truncated_mass(&self) -> f64 {
        (1.0 - self.partial_sum()).max(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.m + i as u64, p))
    }
}

/// `P(m) = d_m / (1 + F(m))`.
pub fn head_probability(d_m: f64, f_m: f64) -> f64 {
    d_m / (1.0 + f_m)
}

/// `P(k) = F(k-1) P(k-1) / (1 + F(k)) + d_k / (1 + F(k))`.
pub fn next_probability(p_prev: f64, f_prev: f64, f_k: f64, d_k: f64) -> f64 {
    (f_prev * p_prev + d_k) / (1.0 + f_k)
}

fn check_inputs(birth: &BirthDistribution, lim: &AffineLimit, k_max: u64) -> Result<()> {
    let violations = validate_birth(birth);
    if !violations.is_empty() {
        let msgs: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::domain(format!(
            "invalid birth law: {}",
            msgs.join("; ")
        )));
    }
    if birth.min_support() != lim.m {
        return Err(Error::domain(format!(
            "birth law starts at {} but rate limit has m = {}",
            birth.min_support(),
            lim.m
        )));
    }
    // Re-run the limit invariants in case the struct was built by hand.
    AffineLimit::new(lim.a, lim.b, lim.m)?;
    if k_max < birth.max_support() {
        return Err(Error::domain(format!(
            "k_max = {k_max} is below the birth support maximum M = {}",
            birth.max_support()
        )));
    }
    Ok(())
}

/// Steady distribution on `m..=k_max` by forward iteration of the one-step
/// recurrence.
pub fn steady_by_recurrence(
    birth: &BirthDistribution,
    lim: &AffineLimit,
    k_max: u64,
) -> Result<DegreeDistribution> {
    check_inputs(birth, lim, k_max)?;
    let m = lim.m;
    let mut probs = Vec::with_capacity((k_max - m + 1) as usize);
    let mut prev = head_probability(birth.d(m), lim.at(m));
    probs.push(prev);
    for k in m + 1..=k_max {
        prev = next_probability(prev, lim.at(k - 1), lim.at(k), birth.d(k));
        probs.push(prev);
    }
    let mut dist = DegreeDistribution::new(m, probs)?;
    dist.tail = tail_for(birth, lim, &dist)?;
    Ok(dist)
}

fn tail_for(
    birth: &BirthDistribution,
    lim: &AffineLimit,
    dist: &DegreeDistribution,
) -> Result<Option<Tail>> {
    let truncated_mass = dist.truncated_mass();
    Ok(match lim.class() {
        ChainClass::ScaleFree => {
            let gamma = tail_exponent_exact(lim.a)?;
            let big_m = birth.max_support();
            let shift = lim.b / lim.a;
            let x = big_m as f64 + shift;
            // Γ(k + c) / Γ(k + c + γ) ~ k^-γ, so C = P(M) Γ(M + c + γ) / Γ(M + c).
            let prefactor = if x > 0.0 {
                dist.p(big_m) * (-log_gamma_ratio(x, gamma)?).exp()
            } else {
                f64::NAN
            };
            Some(Tail::PowerLaw(TailInfo {
                gamma,
                prefactor,
                truncated_mass,
            }))
        }
        ChainClass::Geometric => Some(Tail::Geometric {
            ratio: lim.b / (1.0 + lim.b),
            truncated_mass,
        }),
        ChainClass::Impossible => None,
    })
}

/// Steady distribution from the explicit affine formulas.
///
/// For `m <= k <= M` the product/sum form is evaluated with the product
/// distributed into the sum, `P(k) = Σ_l d_l/(1+F(l)) Π_{j=l}^{k-1} F(j)/(1+F(j+1))`,
/// which stays finite when some `F(j) = 0`. Beyond `M`,
/// `P(k) = P(M) Γ(k+c) Γ(M+c+γ) / (Γ(k+c+γ) Γ(M+c))` with `c = B/A` and
/// `γ = 1 + 1/A`, evaluated in log space.
pub fn steady_closed_form_affine(
    birth: &BirthDistribution,
    lim: &AffineLimit,
    k_max: u64,
) -> Result<DegreeDistribution> {
    check_inputs(birth, lim, k_max)?;
    if !(lim.a > 0.0) {
        return Err(Error::domain(format!(
            "closed form requires A > 0, got A = {}",
            lim.a
        )));
    }
    let m = lim.m;
    let big_m = birth.max_support();
    let shift = lim.b / lim.a;
    let gamma = 1.0 + 1.0 / lim.a;
    // Only Γ(k + c) for k >= M is ever formed; k + c increases with k.
    let first_arg = big_m as f64 + shift;
    if !(first_arg > 0.0) {
        return Err(Error::domain(format!(
            "Gamma argument k + B/A = {first_arg} is not positive at k = {big_m}"
        )));
    }

    let mut probs = Vec::with_capacity((k_max - m + 1) as usize);
    for k in m..=big_m {
        let mut total = 0.0;
        for l in m..=k {
            let mut term = birth.d(l) / (1.0 + lim.at(l));
            for j in l..k {
                term *= lim.at(j) / (1.0 + lim.at(j + 1));
            }
            total += term;
        }
        probs.push(total);
    }

    let p_big_m = *probs.last().unwrap();
    let anchor = log_gamma_ratio(first_arg, gamma)?;
    for k in big_m + 1..=k_max {
        let log_ratio = log_gamma_ratio(k as f64 + shift, gamma)? - anchor;
        probs.push(p_big_m * log_ratio.exp());
    }
    let mut dist = DegreeDistribution::new(m, probs)?;
    dist.tail = tail_for(birth, lim, &dist)?;
    Ok(dist)
}

/// `γ = 1 + 1/A`.
pub fn tail_exponent_exact(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!(
            "tail exponent requires A > 0, got A = {a}"
        )));
    }
    Ok(1.0 + 1.0 / a)
}

/// Tolerance on `partial_sum + tail_bound` for a well-resolved distribution.
pub const NORMALIZATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationReport {
    pub partial_sum: f64,
    pub tail_bound: f64,
    /// `|partial_sum + tail_bound - 1| <= NORMALIZATION_TOL`.
    pub normalized: bool,
}

/// Partial sum plus an estimate of the mass beyond `k_max`.
///
/// A power-law tail is estimated by `∫_{k_max+1/2}^∞ C x^-γ dx`; a geometric
/// tail is summed exactly. Without tail metadata the bound is zero.
pub fn normalization_report(dist: &DegreeDistribution) -> NormalizationReport {
    let partial_sum = dist.partial_sum();
    let k_max = dist.k_max() as f64;
    let tail_bound = match dist.tail {
        Some(Tail::PowerLaw(info)) if info.prefactor.is_finite() => {
            info.prefactor * (k_max + 0.5).powf(1.0 - info.gamma) / (info.gamma - 1.0)
        }
        Some(Tail::Geometric { ratio, .. }) => {
            dist.probs.last().copied().unwrap_or(0.0) * ratio / (1.0 - ratio)
        }
        _ => 0.0,
    };
    NormalizationReport {
        partial_sum,
        tail_bound,
        normalized: (partial_sum + tail_bound - 1.0).abs() <= NORMALIZATION_TOL,
    }
}
