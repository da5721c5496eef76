//! The nine growth models as [`ModelSpec`] values.
//!
//! Each builder fixes the birth law `d_k`, the exact per-step increment
//! probability `f_t(k)`, the affine limit `F(k) = A k + B`, and the rule the
//! stochastic generator follows.
//!
//! Two limits differ from a literal transcription of the usual formulas:
//!
//! * BA: each of the `m` new links hits vertex `i` with probability
//!   `k_i / (2mt)`, so a chain gains a unit with probability `k / (2t)` and
//!   `A = 1/2`. This is the rate consistent with the `Γ(k)/Γ(k+3)` law and
//!   `γ = 3`; the generator in `netgen` is the arbiter.
//! * ZRZ: `lim t ((m-1)k - m(m-2)) / (mt + 1) = ((m-1)/m) k - (m - 2)`, so
//!   `B = -(m - 2)`, giving `F(m) = 1`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rate::{AffineLimit, BirthDistribution, StepRate};
use crate::steady::tail_exponent_exact;

/// How `netgen` grows a network for this model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenerativeRule {
    /// `m` distinct degree-proportional targets.
    Ba { m: u32 },
    /// `m` distinct uniform targets.
    Random { m: u32 },
    /// `m` distinct targets with weight `(1-p) k + p`.
    Ll1 { m: u32, p: f64 },
    /// `m` distinct targets, each preferential with probability `1-p`, else uniform.
    Ll2 { m: u32, p: f64, m0: u32 },
    /// `T-1` distinct degree-proportional targets, then close the `T`-clique.
    Collab { team: u32, m0: u32 },
    /// Attach to every member of a uniformly chosen registered `m`-clique.
    Zrz { m: u32 },
    /// Element joins a size-proportional group with probability `p`, else founds one.
    Kk { p: f64 },
    /// `m` directed links, targets proportional to `H + in-degree`, with replacement.
    Dms { m: u32, h: f64 },
    /// `m` sequential edges, endpoints proportional to degree, self-loops allowed.
    Lcd { m: u32 },
}

#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub name: &'static str,
    /// Resolved parameter values, defaults included.
    pub params: BTreeMap<String, f64>,
    pub birth: BirthDistribution,
    pub rate: StepRate,
    pub limit: AffineLimit,
    pub expected_gamma: Option<f64>,
    pub multiple_links: bool,
    pub rule: GenerativeRule,
    /// First step at which `f_t(k)` is a probability on every degree a chain
    /// born at that step can reach.
    pub onset: u64,
}

impl ModelSpec {
    fn assemble(
        name: &'static str,
        params: &[(&str, f64)],
        birth: BirthDistribution,
        rate: StepRate,
        limit: AffineLimit,
        multiple_links: bool,
        rule: GenerativeRule,
    ) -> Result<Self> {
        let expected_gamma = if limit.a > 0.0 {
            Some(tail_exponent_exact(limit.a)?)
        } else {
            None
        };
        let onset = rate_onset(&rate, &birth)?;
        Ok(ModelSpec {
            name,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            birth,
            rate,
            limit,
            expected_gamma,
            multiple_links,
            rule,
            onset,
        })
    }
}

/// Smallest `t0` such that, for a chain born at `t0` with the largest birth
/// degree and gaining a unit every step, `f_t(k)` stays in `[0, 1)` over the
/// next 4096 steps, and likewise at the smallest birth degree.
fn rate_onset(rate: &StepRate, birth: &BirthDistribution) -> Result<u64> {
    const HORIZON: u64 = 4096;
    const SEARCH: u64 = 1 << 20;
    let ok = |f: f64| (0.0..1.0).contains(&f);
    let (lo, hi) = (birth.min_support(), birth.max_support());
    'outer: for t0 in 1..=SEARCH {
        for s in t0..t0 + HORIZON {
            if !ok(rate.eval(s, hi + (s - t0))) || !ok(rate.eval(s, lo)) {
                continue 'outer;
            }
        }
        return Ok(t0);
    }
    Err(Error::param(format!(
        "rate {} is not a probability for any start time up to {SEARCH}",
        rate.description()
    )))
}

fn require_int(name: &str, v: f64, min: u32) -> Result<u32> {
    if v.fract() != 0.0 || v < min as f64 || v > u32::MAX as f64 {
        return Err(Error::param(format!(
            "{name} must be an integer >= {min}, got {v}"
        )));
    }
    Ok(v as u32)
}

fn require_unit(name: &str, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::param(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(v)
}

/// Seed network for the ba/random/ll models: a ring on `m0` vertices (a
/// single edge when `m0 = 2`). Returns the total degree.
pub fn ring_degree_sum(m0: u32) -> u64 {
    if m0 == 2 {
        2
    } else {
        2 * m0 as u64
    }
}

pub fn build_ba(m: u32) -> Result<ModelSpec> {
    let m = require_int("m", m as f64, 1)?;
    let rate = StepRate::new("k/(2t)", |t, k| k as f64 / (2 * t) as f64);
    ModelSpec::assemble(
        "ba",
        &[("m", m as f64)],
        BirthDistribution::point(m as u64),
        rate,
        AffineLimit::new(0.5, 0.0, m as u64)?,
        false,
        GenerativeRule::Ba { m },
    )
}

pub fn build_random(m: u32) -> Result<ModelSpec> {
    let m = require_int("m", m as f64, 1)?;
    let mf = m as f64;
    let rate = StepRate::new("m/t", move |t, _| mf / t as f64);
    ModelSpec::assemble(
        "random",
        &[("m", mf)],
        BirthDistribution::point(m as u64),
        rate,
        AffineLimit::new(0.0, mf, m as u64)?,
        false,
        GenerativeRule::Random { m },
    )
}

pub fn build_ll1(m: u32, p: f64) -> Result<ModelSpec> {
    let m = require_int("m", m as f64, 1)?;
    let p = require_unit("p", p)?;
    let mf = m as f64;
    let norm = (1.0 - p) * 2.0 * mf + p;
    // One division of m((1-p)k + p) by ((1-p)2m + p) t, so p = 0 rounds
    // exactly like k/(2t).
    let rate = StepRate::new("m((1-p)k+p)/(((1-p)2m+p)t)", move |t, k| {
        mf * ((1.0 - p) * k as f64 + p) / (norm * t as f64)
    });
    let limit = AffineLimit::new(mf * (1.0 - p) / norm, mf * p / norm, m as u64)?;
    ModelSpec::assemble(
        "ll1",
        &[("m", mf), ("p", p)],
        BirthDistribution::point(m as u64),
        rate,
        limit,
        false,
        GenerativeRule::Ll1 { m, p },
    )
}

/// `m0` seed vertices on a ring with total degree `n0`.
pub fn build_ll2(m: u32, p: f64, m0: u32, n0: f64) -> Result<ModelSpec> {
    let m = require_int("m", m as f64, 1)?;
    let p = require_unit("p", p)?;
    let m0 = require_int("m0", m0 as f64, (m + 1).max(2))?;
    if !(n0 >= 0.0) {
        return Err(Error::param(format!("N0 must be non-negative, got {n0}")));
    }
    let mf = m as f64;
    let m0f = m0 as f64;
    let rate = StepRate::new("m(1-p)k/(2mt+N0) + mp/(t+m0)", move |t, k| {
        let t = t as f64;
        mf * (1.0 - p) * k as f64 / (2.0 * mf * t + n0) + mf * p / (t + m0f)
    });
    ModelSpec::assemble(
        "ll2",
        &[("m", mf), ("p", p), ("m0", m0f), ("n0", n0)],
        BirthDistribution::point(m as u64),
        rate,
        AffineLimit::new((1.0 - p) / 2.0, mf * p, m as u64)?,
        false,
        GenerativeRule::Ll2 { m, p, m0 },
    )
}

/// Collaboration network with teams of size `team` (the model's `T`).
///
/// A newcomer joins with `T - 1` edges, so births sit at degree `T - 1`.
/// The rate keeps the total-degree normalizer `k0 + T t`, which undercounts
/// the clique edges closed among the chosen vertices; comparing against
/// `netgen` measures that gap.
pub fn build_collab(team: u32, m0: u32, k0: f64) -> Result<ModelSpec> {
    let team = require_int("T", team as f64, 2)?;
    let m0 = require_int("m0", m0 as f64, team.max(2))?;
    if !(k0 >= 0.0) {
        return Err(Error::param(format!("k0 must be non-negative, got {k0}")));
    }
    let tf = team as f64;
    let rate = StepRate::new("(T-1)k/(k0+Tt)", move |t, k| {
        (tf - 1.0) * k as f64 / (k0 + tf * t as f64)
    });
    ModelSpec::assemble(
        "collab",
        &[("T", tf), ("m0", m0 as f64), ("k0", k0)],
        BirthDistribution::point(team as u64 - 1),
        rate,
        AffineLimit::new((tf - 1.0) / tf, 0.0, team as u64 - 1)?,
        false,
        GenerativeRule::Collab { team, m0 },
    )
}

pub fn build_zrz(m: u32) -> Result<ModelSpec> {
    let m = require_int("m", m as f64, 3)?;
    let mf = m as f64;
    let rate = StepRate::new("((m-1)k - m(m-2))/(mt+1)", move |t, k| {
        ((mf - 1.0) * k as f64 - mf * (mf - 2.0)) / (mf * t as f64 + 1.0)
    });
    ModelSpec::assemble(
        "zrz",
        &[("m", mf)],
        BirthDistribution::point(m as u64),
        rate,
        AffineLimit::new((mf - 1.0) / mf, -(mf - 2.0), m as u64)?,
        false,
        GenerativeRule::Zrz { m },
    )
}

/// Group-size chains; a step that joins an existing group leaves a chain
/// frozen at size 0, which is where `d_0 = p` comes from.
pub fn build_kk(p: f64) -> Result<ModelSpec> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!("p must lie in (0, 1), got {p}")));
    }
    let rate = StepRate::new("pk/t", move |t, k| p * k as f64 / t as f64);
    ModelSpec::assemble(
        "kk",
        &[("p", p)],
        BirthDistribution::new(0, vec![p, 1.0 - p]),
        rate,
        AffineLimit::new(p, 0.0, 0)?,
        false,
        GenerativeRule::Kk { p },
    )
}

/// Directed model with attractiveness `H`; chains track in-degree.
///
/// `H = 0` leaves `F(0) = 0`, so no site ever receives a link; it is
/// rejected unless `force` is set.
pub fn build_dms(m: u32, h: f64, force: bool) -> Result<ModelSpec> {
    let m = require_int("m", m as f64, 1)?;
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::param(format!("H must be non-negative, got {h}")));
    }
    if h == 0.0 && !force {
        return Err(Error::param(
            "H = 0 freezes every site at in-degree 0; pass force to build it anyway",
        ));
    }
    let mf = m as f64;
    let rate = StepRate::new("m(k+H)/((m+H)t)", move |t, k| {
        mf * (k as f64 + h) / ((mf + h) * t as f64)
    });
    ModelSpec::assemble(
        "dms",
        &[("m", mf), ("H", h)],
        BirthDistribution::point(0),
        rate,
        AffineLimit::new(mf / (mf + h), mf * h / (mf + h), 0)?,
        true,
        GenerativeRule::Dms { m, h },
    )
}

pub fn build_lcd(m: u32) -> Result<ModelSpec> {
    let m = require_int("m", m as f64, 1)?;
    let mf = m as f64;
    let rate = StepRate::new("mk/(2mt+m)", move |t, k| {
        mf * k as f64 / (2.0 * mf * t as f64 + mf)
    });
    ModelSpec::assemble(
        "lcd",
        &[("m", mf)],
        BirthDistribution::point(m as u64),
        rate,
        AffineLimit::new(0.5, 0.0, m as u64)?,
        true,
        GenerativeRule::Lcd { m },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Integer,
    Real,
    Flag,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSchema {
    pub name: &'static str,
    pub kind: ParamKind,
    /// `None` when the default depends on other parameters.
    pub default: Option<f64>,
    pub constraint: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct ModelInfo {
    pub name: &'static str,
    pub params: &'static [ParamSchema],
    pub gamma_formula: &'static str,
    pub multiple_links: bool,
}

const fn int(name: &'static str, default: f64, constraint: &'static str) -> ParamSchema {
    ParamSchema {
        name,
        kind: ParamKind::Integer,
        default: Some(default),
        constraint,
    }
}

const fn real(name: &'static str, default: f64, constraint: &'static str) -> ParamSchema {
    ParamSchema {
        name,
        kind: ParamKind::Real,
        default: Some(default),
        constraint,
    }
}

static REGISTRY: [ModelInfo; 9] = [
    ModelInfo {
        name: "ba",
        params: &[int("m", 1.0, ">= 1")],
        gamma_formula: "3",
        multiple_links: false,
    },
    ModelInfo {
        name: "random",
        params: &[int("m", 1.0, ">= 1")],
        gamma_formula: "none (geometric)",
        multiple_links: false,
    },
    ModelInfo {
        name: "ll1",
        params: &[int("m", 1.0, ">= 1"), real("p", 0.5, "in [0, 1]")],
        gamma_formula: "3 + p/(m(1-p)); geometric at p = 1",
        multiple_links: false,
    },
    ModelInfo {
        name: "ll2",
        params: &[
            int("m", 1.0, ">= 1"),
            real("p", 0.5, "in [0, 1]"),
            ParamSchema {
                name: "m0",
                kind: ParamKind::Integer,
                default: None,
                constraint: ">= max(m + 1, 2); defaults to m + 1",
            },
            ParamSchema {
                name: "n0",
                kind: ParamKind::Real,
                default: None,
                constraint: ">= 0; defaults to the seed ring's total degree",
            },
        ],
        gamma_formula: "1 + 2/(1-p); geometric at p = 1",
        multiple_links: false,
    },
    ModelInfo {
        name: "collab",
        params: &[
            int("T", 2.0, ">= 2"),
            ParamSchema {
                name: "m0",
                kind: ParamKind::Integer,
                default: None,
                constraint: ">= T; defaults to T",
            },
            ParamSchema {
                name: "k0",
                kind: ParamKind::Real,
                default: None,
                constraint: ">= 0; defaults to m0 (m0 - 1)",
            },
        ],
        gamma_formula: "1 + T/(T-1)",
        multiple_links: false,
    },
    ModelInfo {
        name: "zrz",
        params: &[int("m", 3.0, ">= 3")],
        gamma_formula: "1 + m/(m-1)",
        multiple_links: false,
    },
    ModelInfo {
        name: "kk",
        params: &[real("p", 0.5, "in (0, 1)")],
        gamma_formula: "1 + 1/p",
        multiple_links: false,
    },
    ModelInfo {
        name: "dms",
        params: &[
            int("m", 1.0, ">= 1"),
            real("H", 1.0, "> 0 (or >= 0 with force)"),
            ParamSchema {
                name: "force",
                kind: ParamKind::Flag,
                default: Some(0.0),
                constraint: "1 admits H = 0",
            },
        ],
        gamma_formula: "2 + H/m",
        multiple_links: true,
    },
    ModelInfo {
        name: "lcd",
        params: &[int("m", 1.0, ">= 1")],
        gamma_formula: "3",
        multiple_links: true,
    },
];

pub fn list_models() -> &'static [ModelInfo] {
    &REGISTRY
}

pub fn lookup(name: &str) -> Option<&'static ModelInfo> {
    REGISTRY.iter().find(|info| info.name == name)
}

/// Builds a model by registry name from named parameters, filling defaults.
/// Unknown parameter names are rejected.
pub fn build(name: &str, params: &BTreeMap<String, f64>) -> Result<ModelSpec> {
    let info = lookup(name).ok_or_else(|| {
        let names: Vec<&str> = REGISTRY.iter().map(|i| i.name).collect();
        Error::param(format!(
            "unknown model {name:?}; known: {}",
            names.join(", ")
        ))
    })?;
    for key in params.keys() {
        if !info.params.iter().any(|s| s.name == key) {
            let names: Vec<&str> = info.params.iter().map(|s| s.name).collect();
            return Err(Error::param(format!(
                "model {name} has no parameter {key:?}; schema: {{{}}}",
                names.join(", ")
            )));
        }
    }
    let get = |key: &str| -> Option<f64> {
        params.get(key).copied().or_else(|| {
            info.params
                .iter()
                .find(|s| s.name == key)
                .and_then(|s| s.default)
        })
    };
    let int_param = |key: &str, min: u32| -> Result<u32> {
        let v = get(key).ok_or_else(|| Error::param(format!("missing parameter {key}")))?;
        require_int(key, v, min)
    };
    let real_param = |key: &str| -> Result<f64> {
        get(key).ok_or_else(|| Error::param(format!("missing parameter {key}")))
    };

    match name {
        "ba" => build_ba(int_param("m", 1)?),
        "random" => build_random(int_param("m", 1)?),
        "ll1" => build_ll1(int_param("m", 1)?, real_param("p")?),
        "ll2" => {
            let m = int_param("m", 1)?;
            let m0 = match get("m0") {
                Some(v) => require_int("m0", v, (m + 1).max(2))?,
                None => (m + 1).max(2),
            };
            let n0 = get("n0").unwrap_or(ring_degree_sum(m0) as f64);
            build_ll2(m, real_param("p")?, m0, n0)
        }
        "collab" => {
            let team = int_param("T", 2)?;
            let m0 = match get("m0") {
                Some(v) => require_int("m0", v, team.max(2))?,
                None => team.max(2),
            };
            let k0 = get("k0").unwrap_or((m0 as f64) * (m0 as f64 - 1.0));
            build_collab(team, m0, k0)
        }
        "zrz" => build_zrz(int_param("m", 3)?),
        "kk" => build_kk(real_param("p")?),
        "dms" => build_dms(
            int_param("m", 1)?,
            real_param("H")?,
            get("force").unwrap_or(0.0) != 0.0,
        ),
        "lcd" => build_lcd(int_param("m", 1)?),
        _ => unreachable!("registry and builder table out of sync"),
    }
}

/// Every registered model at its default parameters.
pub fn default_zoo() -> Vec<ModelSpec> {
    REGISTRY
        .iter()
        .map(|info| build(info.name, &BTreeMap::new()).expect("defaults are valid"))
        .collect()
}
