//! Exact and simulated degree distributions of growing networks.
//!
//! A vertex's degree in a growing network is a Markov chain that gains one
//! unit between steps `t` and `t + 1` with probability `f_t(k)`. When
//! `t f_t(k) -> F(k)` and new chains are born with law `d_k`, the
//! vertex-averaged distribution converges to a steady law `P(k)` that this
//! crate computes exactly ([`steady`]), approaches through the finite-time
//! master equation ([`master`]), and checks against direct simulation of
//! nine growth models ([`models`], [`netgen`], [`analyze`]).

// `!(x > 0.0)` is used deliberately so NaN lands on the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyze;
pub mod error;
pub mod master;
pub mod models;
pub mod netgen;
pub mod rate;
pub mod special;
pub mod steady;

pub use analyze::{
    compare_report, ks_distance, tail_exponent_mle, tail_slope_loglog, tv_distance, CompareReport,
    DEFAULT_FIT_RANGE,
};
pub use error::{Error, Result};
pub use master::{convergence_metrics, decade_times, evolve, EvolutionTrace, Snapshot};
pub use models::{build, default_zoo, list_models, lookup, GenerativeRule, ModelInfo, ModelSpec};
pub use netgen::{empirical_distribution, grow, trials, DegreeState, SimResult, RNG_ID};
pub use rate::{
    classify, eval_limit, extract_limit, validate_birth, AffineLimit, BirthDistribution,
    ChainClass, StepRate,
};
pub use special::{log_gamma, log_gamma_ratio};
pub use steady::{
    head_probability, next_probability, normalization_report, steady_by_recurrence,
    steady_closed_form_affine, tail_exponent_exact, DegreeDistribution, NormalizationReport, Tail,
    TailInfo, DEFAULT_K_MAX,
};
