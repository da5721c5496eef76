//! Distances between degree distributions and tail-exponent estimates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rate::least_squares;
use crate::steady::DegreeDistribution;

/// Default log-log fit window for exact distributions.
pub const DEFAULT_FIT_RANGE: (u64, u64) = (50, 500);

/// Minimum tail sample for [`tail_exponent_mle`].
pub const MIN_TAIL_SAMPLE: u64 = 100;

fn union_support(p: &DegreeDistribution, q: &DegreeDistribution) -> std::ops::RangeInclusive<u64> {
    p.m.min(q.m)..=p.k_max().max(q.k_max())
}

/// `½ Σ_k |p(k) - q(k)|` over the union of supports, with each side's
/// truncated mass as one extra bin.
pub fn tv_distance(p: &DegreeDistribution, q: &DegreeDistribution) -> f64 {
    let body: f64 = union_support(p, q).map(|k| (p.p(k) - q.p(k)).abs()).sum();
    let tail = (p.truncated_mass() - q.truncated_mass()).abs();
    ((body + tail) / 2.0).min(1.0)
}

/// `max_k |CDF_p(k) - CDF_q(k)|`.
pub fn ks_distance(p: &DegreeDistribution, q: &DegreeDistribution) -> f64 {
    let (mut cp, mut cq, mut worst) = (0.0f64, 0.0f64, 0.0f64);
    for k in union_support(p, q) {
        cp += p.p(k);
        cq += q.p(k);
        worst = worst.max((cp - cq).abs());
    }
    worst.min(1.0)
}

/// Negated least-squares slope of `ln P(k)` against `ln k` on `[k_lo, k_hi]`.
pub fn tail_slope_loglog(d: &DegreeDistribution, k_lo: u64, k_hi: u64) -> Result<f64> {
    if k_lo == 0 || k_hi < 2 * k_lo {
        return Err(Error::domain(format!(
            "fit range [{k_lo}, {k_hi}] needs k_lo >= 1 and k_hi >= 2 k_lo"
        )));
    }
    let mut xs = Vec::with_capacity((k_hi - k_lo + 1) as usize);
    let mut ys = Vec::with_capacity(xs.capacity());
    for k in k_lo..=k_hi {
        let p = d.p(k);
        if !(p > 0.0) {
            return Err(Error::domain(format!(
                "P({k}) = 0 inside fit range [{k_lo}, {k_hi}]; try a narrower range"
            )));
        }
        xs.push((k as f64).ln());
        ys.push(p.ln());
    }
    let (slope, _) = least_squares(&xs, &ys).expect("range has at least two points");
    Ok(-slope)
}

/// Continuous-approximation power-law MLE on a degree histogram:
/// `γ̂ = 1 + n / Σ_{k_i >= k_min} ln(k_i / (k_min - 1/2))`.
///
/// Needs at least [`MIN_TAIL_SAMPLE`] observations at or above `k_min`, and
/// at least two distinct tail values.
pub fn tail_exponent_mle(hist: &BTreeMap<u64, u64>, k_min: u64) -> Result<f64> {
    if k_min == 0 {
        return Err(Error::domain("k_min must be at least 1"));
    }
    let offset = k_min as f64 - 0.5;
    let (mut n, mut log_sum, mut distinct) = (0u64, 0.0, 0usize);
    for (&k, &count) in hist.range(k_min..) {
        if count == 0 {
            continue;
        }
        n += count;
        log_sum += count as f64 * (k as f64 / offset).ln();
        distinct += 1;
    }
    if n < MIN_TAIL_SAMPLE {
        return Err(Error::domain(format!(
            "only {n} observations at k >= {k_min}; need {MIN_TAIL_SAMPLE}"
        )));
    }
    if distinct < 2 {
        return Err(Error::domain(format!(
            "degenerate tail: all {n} observations at k >= {k_min} are equal"
        )));
    }
    Ok(1.0 + n as f64 / log_sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareReport {
    pub tv: f64,
    pub ks: f64,
    /// `|exact(m) - other(m)|` at the exact distribution's first degree.
    pub head_abs_err: f64,
    /// Log-log slope of `other` over `fit_range`, when every bin is populated.
    pub gamma_fit: Option<f64>,
    pub gamma_exact: Option<f64>,
    pub fit_range: (u64, u64),
}

pub fn compare_report(
    exact: &DegreeDistribution,
    other: &DegreeDistribution,
    fit_range: (u64, u64),
) -> Result<CompareReport> {
    let (lo, hi) = fit_range;
    if lo == 0 || hi < 2 * lo {
        return Err(Error::domain(format!(
            "fit range [{lo}, {hi}] needs k_lo >= 1 and k_hi >= 2 k_lo"
        )));
    }
    let gamma_fit = match tail_slope_loglog(other, lo, hi) {
        Ok(g) => Some(g),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CompareReport {
        tv: tv_distance(exact, other),
        ks: ks_distance(exact, other),
        head_abs_err: (exact.p(exact.m) - other.p(exact.m)).abs(),
        gamma_fit,
        gamma_exact: exact.tail.and_then(|t| t.gamma()),
        fit_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::{AffineLimit, BirthDistribution};
    use crate::steady::steady_by_recurrence;

    fn dist(m: u64, probs: Vec<f64>) -> DegreeDistribution {
        DegreeDistribution::new(m, probs).unwrap()
    }

    fn ba1(k_max: u64) -> DegreeDistribution {
        steady_by_recurrence(
            &BirthDistribution::point(1),
            &AffineLimit::new(0.5, 0.0, 1).unwrap(),
            k_max,
        )
        .unwrap()
    }

    fn geometric(ratio: f64, k_max: u64) -> DegreeDistribution {
        // P(k) = (1 - r) r^(k-1) on k >= 1
        dist(
            1,
            (1..=k_max)
                .map(|k| (1.0 - ratio) * ratio.powi(k as i32 - 1))
                .collect(),
        )
    }

    #[test]
    fn tv_examples() {
        let p = ba1(1000);
        assert_eq!(tv_distance(&p, &p), 0.0);
        assert_eq!(tv_distance(&dist(1, vec![1.0]), &dist(2, vec![1.0])), 1.0);

        let exact = ba1(100_000);
        let mut short = ba1(100);
        let mass = short.partial_sum();
        short.probs.iter_mut().for_each(|p| *p /= mass);
        let tv = tv_distance(&exact, &short);
        assert!(tv < 2e-4, "{tv}");
        // renormalizing moves the truncated tail 2/(101·102) into the body
        let tail = 2.0 / (101.0 * 102.0);
        assert!((tv - tail).abs() < 1e-6);
    }

    #[test]
    fn ks_examples() {
        let p = ba1(500);
        assert_eq!(ks_distance(&p, &p), 0.0);
        let half = geometric(0.5, 200);
        let third = geometric(1.0 / 3.0, 200);
        assert!((ks_distance(&half, &third) - 1.0 / 6.0).abs() < 1e-12);
        assert!(ks_distance(&half, &third) <= tv_distance(&half, &third));
    }

    #[test]
    fn slope_examples() {
        let synthetic = dist(1, (1..=1000).map(|k| 0.3 * (k as f64).powi(-3)).collect());
        assert!((tail_slope_loglog(&synthetic, 50, 500).unwrap() - 3.0).abs() < 1e-9);
        let ba = ba1(1000);
        assert!((tail_slope_loglog(&ba, 50, 500).unwrap() - 3.0).abs() < 0.05);
    }

    #[test]
    fn slope_errors() {
        let short = ba1(100);
        assert!(tail_slope_loglog(&short, 50, 500).is_err());
        let ba = ba1(1000);
        assert!(tail_slope_loglog(&ba, 50, 80).is_err());
        let holes = dist(1, vec![0.5, 0.0, 0.25, 0.125, 0.125]);
        match tail_slope_loglog(&holes, 1, 4) {
            Err(Error::Domain(msg)) => assert!(msg.contains("narrower")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mle_pure_power_law_sample() {
        // Deterministic sample proportional to k^-3 on k >= 10.
        let hist: BTreeMap<u64, u64> = (10..100_000u64)
            .map(|k| (k, (1e12 * (k as f64).powi(-3)).round() as u64))
            .filter(|&(_, c)| c > 0)
            .collect();
        let g = tail_exponent_mle(&hist, 10).unwrap();
        assert!((g - 3.0).abs() < 0.05, "{g}");
    }

    #[test]
    fn mle_errors() {
        let degenerate = BTreeMap::from([(10, 500)]);
        assert!(tail_exponent_mle(&degenerate, 10).is_err());
        let small = BTreeMap::from([(10, 30), (11, 30)]);
        match tail_exponent_mle(&small, 10) {
            Err(Error::Domain(msg)) => assert!(msg.contains("60")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(tail_exponent_mle(&small, 0).is_err());
    }

    #[test]
    fn compare_examples() {
        let ba = ba1(2000);
        let r = compare_report(&ba, &ba, DEFAULT_FIT_RANGE).unwrap();
        assert_eq!((r.tv, r.ks, r.head_abs_err), (0.0, 0.0, 0.0));
        assert_eq!(r.gamma_exact, Some(3.0));
        assert!((r.gamma_fit.unwrap() - 3.0).abs() < 0.05);

        let geo = geometric(0.5, 2000);
        let r = compare_report(&ba, &geo, DEFAULT_FIT_RANGE).unwrap();
        assert!(r.tv > 0.1);
        assert!((r.head_abs_err - (2.0 / 3.0 - 0.5)).abs() < 1e-12);
    }
}
