//! Finite-time mean degree distribution `P(k, t) = (1/t) Σ_i P(k, i, t)`.
//!
//! One step of the evolution is
//!
//! ```text
//! P(k, t+1) = t/(t+1) [P(k, t)(1 - f_t(k)) + P(k-1, t) f_t(k-1)] + d_k/(t+1)
//! ```
//!
//! with the inflow term absent at `k = m`. Every chain is born with the
//! limiting law `d_k`. For multiple-link models only single-unit jumps are
//! kept; the multi-unit jumps are `o(1/t)` and drop out of the limit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::steady::DegreeDistribution;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: u64,
    /// `P(k, t)` on `k = m..=k_max`.
    pub probs: Vec<f64>,
    /// Mass that has moved above `k_max`.
    pub overflow: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionTrace {
    pub model_name: String,
    pub m: u64,
    pub k_max: u64,
    /// Step at which every chain was set to the birth law.
    pub start: u64,
    pub snapshots: Vec<Snapshot>,
}

/// Evolves `P(·, t)` from the model's onset step to `t_end`, recording
/// snapshots at the requested times (sorted and deduplicated; times before
/// the onset are an error).
///
/// Starting at the onset rather than `t = 1` changes `P(k, t)` by
/// `O(onset / t)`. Time is `O(t_end · k_max)`, memory `O(k_max)` plus the
/// snapshots.
pub fn evolve(
    model: &ModelSpec,
    t_end: u64,
    k_max: u64,
    snapshot_times: &[u64],
) -> Result<EvolutionTrace> {
    let m = model.birth.min_support();
    let big_m = model.birth.max_support();
    let start = model.onset;
    if t_end < 2 {
        return Err(Error::domain(format!(
            "t_end must be at least 2, got {t_end}"
        )));
    }
    if t_end < start {
        return Err(Error::domain(format!(
            "t_end = {t_end} precedes the model onset t = {start}"
        )));
    }
    if k_max < big_m + 2 {
        return Err(Error::domain(format!(
            "k_max = {k_max} must be at least M + 2 = {}",
            big_m + 2
        )));
    }
    let mut times = snapshot_times.to_vec();
    times.sort_unstable();
    times.dedup();
    if let Some(&bad) = times.iter().find(|&&t| t < start || t > t_end) {
        return Err(Error::domain(format!(
            "snapshot time {bad} lies outside [{start}, {t_end}]"
        )));
    }

    let len = (k_max - m + 1) as usize;
    let birth: Vec<f64> = (m..=k_max).map(|k| model.birth.d(k)).collect();
    let mut probs = birth.clone();
    let mut overflow = 0.0;
    let mut snapshots = Vec::with_capacity(times.len());
    let mut next_snap = times.iter().peekable();

    let checked = |t: u64, k: u64| -> Result<f64> {
        let f = model.rate.eval(t, k);
        if !(0.0..1.0).contains(&f) {
            return Err(Error::InvalidRate { t, k, value: f });
        }
        Ok(f)
    };

    let mut t = start;
    loop {
        if next_snap.peek() == Some(&&t) {
            next_snap.next();
            snapshots.push(Snapshot {
                t,
                probs: probs.clone(),
                overflow,
            });
        }
        if t == t_end {
            break;
        }
        // A chain moves at most one unit per step, so P(k, t) = 0 above
        // M + (t - start).
        let reach = (big_m + (t - start)).min(k_max);
        let r = (reach - m) as usize;
        let keep = t as f64 / (t + 1) as f64;
        let born = 1.0 / (t + 1) as f64;

        let mut f_k = checked(t, reach)?;
        if r + 1 == len {
            overflow = keep * (overflow + probs[r] * f_k);
        } else {
            overflow *= keep;
            probs[r + 1] = keep * probs[r] * f_k + born * birth[r + 1];
        }
        // Descending so probs[i - 1] still holds P(k - 1, t).
        for i in (1..=r).rev() {
            let f_below = checked(t, m + i as u64 - 1)?;
            probs[i] = keep * (probs[i] * (1.0 - f_k) + probs[i - 1] * f_below) + born * birth[i];
            f_k = f_below;
        }
        probs[0] = keep * probs[0] * (1.0 - f_k) + born * birth[0];
        t += 1;
    }

    Ok(EvolutionTrace {
        model_name: model.name.to_string(),
        m,
        k_max,
        start,
        snapshots,
    })
}

/// `(t, ½ Σ_k |P(k, t) - P(k)|)` per snapshot over the shared support
/// `m..=k_max`.
pub fn convergence_metrics(
    trace: &EvolutionTrace,
    limit: &DegreeDistribution,
) -> Result<Vec<(u64, f64)>> {
    if limit.m != trace.m || limit.k_max() != trace.k_max {
        return Err(Error::domain(format!(
            "support mismatch: trace covers {}..={}, limit covers {}..={}",
            trace.m,
            trace.k_max,
            limit.m,
            limit.k_max()
        )));
    }
    Ok(trace
        .snapshots
        .iter()
        .map(|s| {
            let tv = s
                .probs
                .iter()
                .zip(&limit.probs)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / 2.0;
            (s.t, tv)
        })
        .collect())
}

/// `10, 100, ...` up to `t_end`, with `t_end` itself appended; times before
/// `start` are skipped.
pub fn decade_times(start: u64, t_end: u64) -> Vec<u64> {
    let mut times: Vec<u64> = std::iter::successors(Some(10u64), |t| t.checked_mul(10))
        .take_while(|&t| t < t_end)
        .filter(|&t| t >= start)
        .collect();
    times.push(t_end);
    times
}
