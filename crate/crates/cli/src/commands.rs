use std::collections::BTreeMap;

use degchain_core::{
    build, compare_report, convergence_metrics, decade_times, empirical_distribution, evolve,
    list_models, normalization_report, steady_by_recurrence, steady_closed_form_affine,
    tail_exponent_exact, tail_exponent_mle, tail_slope_loglog, trials, ChainClass,
    DegreeDistribution, Error, ModelSpec,
};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Against, RunConfig};
use crate::output::{Cell, Report, Table};
use crate::CliError;

fn model(cfg: &RunConfig) -> Result<ModelSpec, CliError> {
    Ok(build(&cfg.model, &cfg.params)?)
}

fn exact(model: &ModelSpec, k_max: u64) -> Result<DegreeDistribution, CliError> {
    Ok(steady_by_recurrence(&model.birth, &model.limit, k_max)?)
}

fn model_summary(model: &ModelSpec) -> serde_json::Value {
    json!({
        "name": model.name,
        "params": model.params,
        "rate": model.rate.description(),
        "limit": { "a": model.limit.a, "b": model.limit.b, "m": model.limit.m },
        "class": model.limit.class(),
        "expected_gamma": model.expected_gamma,
        "multiple_links": model.multiple_links,
    })
}

/// `P(k)` by recurrence, with the closed form alongside when `A > 0`.
pub fn cmd_exact(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = model(cfg)?;
    let rec = exact(&model, cfg.k_max)?;
    let closed = match model.limit.class() {
        ChainClass::ScaleFree => Some(steady_closed_form_affine(
            &model.birth,
            &model.limit,
            cfg.k_max,
        )?),
        _ => None,
    };

    let mut table = match closed {
        Some(_) => Table::new(["k", "p_recurrence", "p_closed_form", "abs_diff"]),
        None => Table::new(["k", "p_recurrence"]),
    };
    let mut max_rel = 0.0f64;
    for (k, p) in rec.iter() {
        match &closed {
            Some(cf) => {
                let q = cf.p(k);
                if p > 0.0 {
                    max_rel = max_rel.max((p - q).abs() / p);
                }
                table.push(vec![k.into(), p.into(), q.into(), (p - q).abs().into()]);
            }
            None => table.push(vec![k.into(), p.into()]),
        }
    }
    let summary = json!({
        "model": model_summary(&model),
        "tail": rec.tail,
        "normalization": normalization_report(&rec),
        "max_rel_diff": closed.as_ref().map(|_| max_rel),
    });
    Ok(Report::new(table, summary))
}

/// Master equation from the model's onset to `steps`, with snapshots at
/// decade times.
pub fn cmd_evolve(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = model(cfg)?;
    let times = decade_times(model.onset, cfg.steps);
    let trace = evolve(&model, cfg.steps, cfg.k_max, &times)?;
    let limit = exact(&model, cfg.k_max)?;
    let tv = convergence_metrics(&trace, &limit)?;

    let mut table = Table::new(["t", "tv_to_limit", "p_head", "overflow"]);
    for (snap, (t, d)) in trace.snapshots.iter().zip(tv) {
        table.push(vec![
            t.into(),
            d.into(),
            snap.probs[0].into(),
            snap.overflow.into(),
        ]);
    }
    let summary = json!({
        "model": model_summary(&model),
        "m": trace.m,
        "start": trace.start,
        "p_head_limit": limit.probs[0],
    });
    Ok(Report::new(table, summary))
}

/// Seeded growth runs and their pooled empirical distribution.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = model(cfg)?;
    let sim = trials(&model, cfg.n, cfg.seed, cfg.trials)?;
    let total = sim.total_count() as f64;
    let mut table = Table::new(["k", "count", "p_hat"]);
    for (&k, &c) in &sim.histogram {
        table.push(vec![k.into(), c.into(), (c as f64 / total).into()]);
    }
    let mean_degree = sim
        .histogram
        .iter()
        .map(|(&k, &c)| k as f64 * c as f64)
        .sum::<f64>()
        / total;
    let summary = json!({
        "model": model_summary(&model),
        "simulation": sim,
        "mean_degree": mean_degree,
    });
    Ok(Report::new(table, summary))
}

/// Exact distribution against a simulation or against itself, with
/// optional pass/fail thresholds.
pub fn cmd_compare(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = model(cfg)?;
    let exact_dist = exact(&model, cfg.k_max)?;
    let (other, gamma_mle) = match cfg.against {
        Against::Exact => (exact_dist.clone(), None),
        Against::Simulation => {
            let sim = trials(&model, cfg.n, cfg.seed, cfg.trials)?;
            let mle = match tail_exponent_mle(&sim.histogram, cfg.k_min) {
                Ok(g) => Some(g),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e.into()),
            };
            (empirical_distribution(&sim)?, mle)
        }
    };
    let report = compare_report(&exact_dist, &other, cfg.fit_range)?;

    let lo = exact_dist.m.min(other.m);
    let hi = exact_dist.k_max().max(other.k_max());
    let mut table = Table::new(["k", "p_exact", "p_other", "abs_diff"]);
    for k in lo..=hi {
        let (p, q) = (exact_dist.p(k), other.p(k));
        table.push(vec![k.into(), p.into(), q.into(), (p - q).abs().into()]);
    }

    let mut failures = Vec::new();
    if let Some(max_tv) = cfg.max_tv {
        if report.tv >= max_tv || report.tv.is_nan() {
            failures.push(format!("tv {} >= {max_tv}", report.tv));
        }
    }
    if let Some(tol) = cfg.gamma_tol {
        let estimate = gamma_mle.or(report.gamma_fit);
        match (estimate, report.gamma_exact) {
            (Some(est), Some(want)) if (est - want).abs() < tol => {}
            (Some(est), Some(want)) => failures.push(format!("|gamma {est} - {want}| >= {tol}")),
            _ => failures.push("no tail exponent to check".into()),
        }
    }

    let summary = json!({
        "model": model_summary(&model),
        "against": cfg.against,
        "report": report,
        "gamma_mle": gamma_mle,
        "k_min": cfg.k_min,
        "passed": failures.is_empty(),
    });
    let mut out = Report::new(table, summary);
    if !failures.is_empty() {
        out.threshold_failure = Some(failures.join("; "));
    }
    Ok(out)
}

/// Exact and log-log fitted tail exponents for each value of one parameter.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let grid = cfg
        .grid
        .as_ref()
        .filter(|g| !g.values.is_empty())
        .ok_or_else(|| CliError::Usage("sweep needs a non-empty grid".into()))?;
    let (lo, hi) = cfg.fit_range;
    let k_max = cfg.k_max.max(hi);

    let rows = grid
        .values
        .par_iter()
        .map(|&value| -> Result<Vec<Cell>, CliError> {
            let mut params: BTreeMap<String, f64> = cfg.params.clone();
            params.insert(grid.param.clone(), value);
            let model = build(&cfg.model, &params)?;
            let dist = exact(&model, k_max)?;
            let class = model.limit.class();
            let gamma_exact = match class {
                ChainClass::ScaleFree => Some(tail_exponent_exact(model.limit.a)?),
                _ => None,
            };
            let gamma_fit = match tail_slope_loglog(&dist, lo, hi) {
                Ok(g) => Some(g),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(vec![
                value.into(),
                class.to_string().into(),
                gamma_exact.into(),
                gamma_fit.into(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new([grid.param.as_str(), "class", "gamma_exact", "gamma_fit"]);
    rows.into_iter().for_each(|r| table.push(r));
    let summary = json!({ "model": cfg.model, "param": grid.param, "k_max": k_max });
    Ok(Report::new(table, summary))
}

/// Registry listing.
pub fn cmd_models(_cfg: &RunConfig) -> Result<Report, CliError> {
    let mut table = Table::new(["model", "params", "gamma", "multiple_links"]);
    for info in list_models() {
        let params: Vec<String> = info
            .params
            .iter()
            .map(|s| match s.default {
                Some(d) => format!("{}={} ({})", s.name, d, s.constraint),
                None => format!("{} ({})", s.name, s.constraint),
            })
            .collect();
        table.push(vec![
            info.name.into(),
            params.join("; ").into(),
            info.gamma_formula.into(),
            info.multiple_links.into(),
        ]);
    }
    Ok(Report::new(table, json!({ "count": list_models().len() })))
}
