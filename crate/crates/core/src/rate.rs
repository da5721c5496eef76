//! Growth-law abstractions: the per-step increment probability `f_t(k)`, its
//! scaled limit `F(k) = lim t f_t(k)`, the birth law `d_k`, and the
//! classification of a chain by the slope and intercept of `F`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scaled rate limit `F(k) = A k + B`, defined for `k >= m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineLimit {
    pub a: f64,
    pub b: f64,
    /// Minimum degree: the least `k` with `d_k > 0`.
    pub m: u64,
}

impl AffineLimit {
    /// Checked constructor.
    ///
    /// Requires `F(k) >= 0` and `1 + F(k) > 0` on `k >= m`, which for an
    /// affine `F` reduces to `A >= 0` and `F(m) >= 0`.
    pub fn new(a: f64, b: f64, m: u64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!(
                "non-finite rate limit A = {a}, B = {b}"
            )));
        }
        if a < 0.0 {
            return Err(Error::domain(format!(
                "rate limit slope A = {a} is negative"
            )));
        }
        let f_m = a * m as f64 + b;
        if f_m < 0.0 {
            return Err(Error::domain(format!("F(m) = {f_m} < 0 at m = {m}")));
        }
        Ok(AffineLimit { a, b, m })
    }

    /// `F(k)` without the domain check.
    #[inline]
    pub fn at(&self, k: u64) -> f64 {
        self.a * k as f64 + self.b
    }

    pub fn class(&self) -> ChainClass {
        classify(self.a, self.b)
    }
}

/// `F(k) = A k + B`; errors when `k < m`.
pub fn eval_limit(lim: &AffineLimit, k: u64) -> Result<f64> {
    if k < lim.m {
        return Err(Error::domain(format!(
            "F(k) is defined for k >= m = {}, got k = {k}",
            lim.m
        )));
    }
    Ok(lim.at(k))
}

type RateFn = dyn Fn(u64, u64) -> f64 + Send + Sync;

/// Per-step probability `f_t(k)` that a chain at degree `k` gains one unit
/// between steps `t` and `t + 1`.
#[derive(Clone)]
pub struct StepRate {
    eval: Arc<RateFn>,
    description: String,
}

impl StepRate {
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(u64, u64) -> f64 + Send + Sync + 'static,
    {
        StepRate {
            eval: Arc::new(f),
            description: description.into(),
        }
    }

    /// `f_t(k)`.
    #[inline]
    pub fn eval(&self, t: u64, k: u64) -> f64 {
        (self.eval)(t, k)
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for StepRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StepRate")
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

/// Deviation of `t f_t(k)` from the fitted line at the two largest grid times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeResidual {
    pub k: u64,
    pub earlier: f64,
    pub latest: f64,
}

/// Recovers `(A, B)` from an opaque rate by least squares on `t f_t(k)`
/// against `k` at the largest grid time.
///
/// The fit is accepted only if, at every probe degree, the residual at the
/// largest time is smaller than at the second largest (or already at
/// rounding level). `m` of the result is the smallest probe degree.
pub fn extract_limit(rate: &StepRate, k_probe: &[u64], t_grid: &[u64]) -> Result<AffineLimit> {
    if k_probe.len() < 3 {
        return Err(Error::domain(
            "extract_limit needs at least 3 probe degrees",
        ));
    }
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(
            "extract_limit needs at least two strictly increasing grid times",
        ));
    }
    let t_last = *t_grid.last().unwrap();
    let t_prev = t_grid[t_grid.len() - 2];
    if t_last < 1_000_000 {
        return Err(Error::domain(format!(
            "largest grid time must be at least 10^6, got {t_last}"
        )));
    }

    let scaled = |t: u64, k: u64| t as f64 * rate.eval(t, k);
    let xs: Vec<f64> = k_probe.iter().map(|&k| k as f64).collect();
    let ys: Vec<f64> = k_probe.iter().map(|&k| scaled(t_last, k)).collect();
    let (slope, intercept) = least_squares(&xs, &ys)
        .ok_or_else(|| Error::domain("probe degrees must not all coincide"))?;

    let mut residuals = Vec::with_capacity(k_probe.len());
    let mut converged = true;
    for (&k, &y) in k_probe.iter().zip(&ys) {
        let fit = slope * k as f64 + intercept;
        let latest = (y - fit).abs();
        let earlier = (scaled(t_prev, k) - fit).abs();
        let rounding = 1e-9 * (1.0 + y.abs());
        if !(latest < earlier || latest <= rounding) {
            converged = false;
        }
        residuals.push(ProbeResidual { k, earlier, latest });
    }
    if !converged {
        return Err(Error::NonConvergence { residuals });
    }
    let m = *k_probe.iter().min().unwrap();
    Ok(AffineLimit {
        a: slope,
        b: intercept,
        m,
    })
}

pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Qualitative fate of a chain with `F(k) = A k + B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainClass {
    /// `A > 0`: power-law tail with exponent `1 + 1/A`.
    ScaleFree,
    /// `A = 0, B > 0`: geometric law with ratio `B / (1 + B)`.
    Geometric,
    /// `A < 0`, or `A = 0` with `B <= 0`.
    Impossible,
}

impl fmt::Display for ChainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainClass::ScaleFree => "scale-free",
            ChainClass::Geometric => "geometric",
            ChainClass::Impossible => "impossible",
        })
    }
}

/// Total over the plane; NaN inputs fall through to `Impossible`.
pub fn classify(a: f64, b: f64) -> ChainClass {
    if a > 0.0 {
        ChainClass::ScaleFree
    } else if a == 0.0 && b > 0.0 {
        ChainClass::Geometric
    } else {
        ChainClass::Impossible
    }
}

/// Tolerance on `Σ d_k = 1`.
pub const BIRTH_MASS_TOL: f64 = 1e-12;

/// Limiting law of a chain's degree at the step it is born.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthDistribution {
    /// `probs[i]` is `d_{m + i}`.
    probs: Vec<f64>,
    m: u64,
}

impl BirthDistribution {
    /// Birth law with support starting at `m`. Trailing zeros are trimmed
    /// so that the last entry sits at `M`. Not validated; see
    /// [`validate_birth`].
    pub fn new(m: u64, mut probs: Vec<f64>) -> Self {
        while probs.len() > 1 && probs.last() == Some(&0.0) {
            probs.pop();
        }
        BirthDistribution { probs, m }
    }

    pub fn point(k: u64) -> Self {
        BirthDistribution::new(k, vec![1.0])
    }

    pub fn min_support(&self) -> u64 {
        self.m
    }

    /// `M`, the largest degree with `d_k > 0`.
    pub fn max_support(&self) -> u64 {
        self.m + self.probs.len().saturating_sub(1) as u64
    }

    /// `d_k`, zero outside the stored support.
    #[inline]
    pub fn d(&self, k: u64) -> f64 {
        if k < self.m {
            return 0.0;
        }
        self.probs
            .get((k - self.m) as usize)
            .copied()
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.m + i as u64, p))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BirthViolation {
    Empty,
    Negative { k: u64, value: f64 },
    NotNormalized { mass: f64 },
    ZeroHead { m: u64 },
}

impl fmt::Display for BirthViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BirthViolation::Empty => write!(f, "birth law has no entries"),
            BirthViolation::Negative { k, value } => write!(f, "d_{k} = {value} is negative"),
            BirthViolation::NotNormalized { mass } => {
                write!(
                    f,
                    "birth mass {mass} differs from 1 by more than {BIRTH_MASS_TOL:e}"
                )
            }
            BirthViolation::ZeroHead { m } => write!(f, "d_m = 0 at declared minimum m = {m}"),
        }
    }
}

/// Lists every violated invariant; an empty list means the law is valid.
pub fn validate_birth(b: &BirthDistribution) -> Vec<BirthViolation> {
    let mut out = Vec::new();
    if b.probs.is_empty() {
        out.push(BirthViolation::Empty);
        return out;
    }
    for (k, p) in b.iter() {
        if !(p >= 0.0) {
            out.push(BirthViolation::Negative { k, value: p });
        }
    }
    let mass: f64 = b.probs.iter().sum();
    if !((mass - 1.0).abs() <= BIRTH_MASS_TOL) {
        out.push(BirthViolation::NotNormalized { mass });
    }
    if !(b.probs[0] > 0.0) {
        out.push(BirthViolation::ZeroHead { m: b.m });
    }
    out
}
