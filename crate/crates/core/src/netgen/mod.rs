//! Stochastic network growth under each model's generative rule.
//!
//! Only degree sequences are kept. Proportional draws use a repeated-node
//! list; additive weights (`(1-p)k + p`, `H + q`) are sampled as a mixture
//! of a uniform draw and a list draw with the exact mixing probability.

mod state;

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{GenerativeRule, ModelSpec};
use crate::steady::DegreeDistribution;

use state::edge_key;
pub use state::{Aux, DegreeState};

/// Generator identity recorded in every [`SimResult`].
pub const RNG_ID: &str = "rand_chacha::ChaCha8Rng/seed_from_u64";

/// Redraws allowed per growth step when targets must be distinct.
pub const MAX_RETRIES: u32 = 10_000;

/// Empirical degree histogram of one or more growth runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimResult {
    pub model_name: String,
    /// Vertices (chains) per run.
    pub n: u64,
    /// Seed of the first run; run `i` uses `seed + i`.
    pub seed: u64,
    pub rng: &'static str,
    pub n_trials: u64,
    /// Degree -> number of vertices, summed over runs.
    pub histogram: BTreeMap<u64, u64>,
}

impl SimResult {
    pub fn total_count(&self) -> u64 {
        self.histogram.values().sum()
    }
}

/// Size of the network a rule starts from.
pub fn initial_size(rule: GenerativeRule) -> u64 {
    match rule {
        GenerativeRule::Ba { m } | GenerativeRule::Random { m } | GenerativeRule::Ll1 { m, .. } => {
            (m + 1) as u64
        }
        GenerativeRule::Ll2 { m0, .. } => m0 as u64,
        GenerativeRule::Collab { m0, .. } => m0 as u64,
        GenerativeRule::Zrz { m } => m as u64,
        GenerativeRule::Kk { .. } | GenerativeRule::Dms { .. } | GenerativeRule::Lcd { .. } => 1,
    }
}

fn histogram(degrees: &[u32]) -> BTreeMap<u64, u64> {
    let mut hist = BTreeMap::new();
    for &d in degrees {
        *hist.entry(d as u64).or_insert(0) += 1;
    }
    hist
}

/// One growth run to `n` vertices.
pub fn grow(model: &ModelSpec, n: u64, seed: u64) -> Result<SimResult> {
    let state = grow_state(model.rule, n, seed)?;
    Ok(SimResult {
        model_name: model.name.to_string(),
        n,
        seed,
        rng: RNG_ID,
        n_trials: 1,
        histogram: histogram(&state.degrees),
    })
}

/// `n_trials` independent runs seeded `seed_base + i`, run in parallel and
/// summed. The result does not depend on scheduling.
pub fn trials(model: &ModelSpec, n: u64, seed_base: u64, n_trials: u64) -> Result<SimResult> {
    if n_trials == 0 {
        return Err(Error::domain("n_trials must be at least 1"));
    }
    let hists = (0..n_trials)
        .into_par_iter()
        .map(|i| {
            grow_state(model.rule, n, seed_base.wrapping_add(i))
                .map(|s| histogram(&s.degrees))
                .map_err(|e| Error::Trial {
                    index: i,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = BTreeMap::new();
    for hist in hists {
        for (k, c) in hist {
            *total.entry(k).or_insert(0) += c;
        }
    }
    Ok(SimResult {
        model_name: model.name.to_string(),
        n,
        seed: seed_base,
        rng: RNG_ID,
        n_trials,
        histogram: total,
    })
}

/// `P̂(k) = count(k) / (N · n_trials)` on the observed range.
pub fn empirical_distribution(r: &SimResult) -> Result<DegreeDistribution> {
    let (&lo, _) = r
        .histogram
        .first_key_value()
        .ok_or_else(|| Error::domain("empty histogram"))?;
    let (&hi, _) = r.histogram.last_key_value().unwrap();
    let total = r.total_count() as f64;
    let mut probs = vec![0.0; (hi - lo + 1) as usize];
    for (&k, &c) in &r.histogram {
        probs[(k - lo) as usize] = c as f64 / total;
    }
    DegreeDistribution::new(lo, probs)
}

/// Runs the rule and returns the final state.
pub fn grow_state(rule: GenerativeRule, n: u64, seed: u64) -> Result<DegreeState> {
    let init = initial_size(rule);
    if n < init {
        return Err(Error::domain(format!(
            "N = {n} is smaller than the initial network ({init} vertices)"
        )));
    }
    if n > u32::MAX as u64 {
        return Err(Error::domain(format!(
            "N = {n} exceeds the 32-bit vertex id range"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n as u32;
    match rule {
        GenerativeRule::Ba { m } => attach(m, m + 1, n, &mut rng, |s, v, rng| {
            pick(&s.pick_list, rng).unwrap_or_else(|| rng.random_range(0..v))
        }),
        GenerativeRule::Random { m } => {
            attach(m, m + 1, n, &mut rng, |_, v, rng| rng.random_range(0..v))
        }
        GenerativeRule::Ll1 { m, p } => attach(m, m + 1, n, &mut rng, move |s, v, rng| {
            // weight (1-p)k + p: total (1-p)Σk + p·v
            let uniform_mass = p * v as f64;
            let total = (1.0 - p) * s.pick_list.len() as f64 + uniform_mass;
            if rng.random::<f64>() * total < uniform_mass {
                rng.random_range(0..v)
            } else {
                pick(&s.pick_list, rng).unwrap_or_else(|| rng.random_range(0..v))
            }
        }),
        GenerativeRule::Ll2 { m, p, m0 } => attach(m, m0, n, &mut rng, move |s, v, rng| {
            if rng.random::<f64>() < p {
                rng.random_range(0..v)
            } else {
                pick(&s.pick_list, rng).unwrap_or_else(|| rng.random_range(0..v))
            }
        }),
        GenerativeRule::Collab { team, m0 } => grow_collab(team, m0, n, &mut rng),
        GenerativeRule::Zrz { m } => Ok(grow_zrz(m, n, &mut rng)),
        GenerativeRule::Kk { p } => Ok(grow_kk(p, n, &mut rng)),
        GenerativeRule::Dms { m, h } => Ok(grow_dms(m, h, n, &mut rng)),
        GenerativeRule::Lcd { m } => Ok(grow_lcd(m, n, &mut rng)),
    }
}

#[inline]
fn pick(list: &[u32], rng: &mut ChaCha8Rng) -> Option<u32> {
    if list.is_empty() {
        None
    } else {
        Some(list[rng.random_range(0..list.len())])
    }
}

/// Draws `count` distinct targets among existing vertices by rejection.
fn distinct_targets<F>(
    state: &DegreeState,
    v: u32,
    count: u32,
    rng: &mut ChaCha8Rng,
    draw: &F,
    out: &mut Vec<u32>,
) -> Result<()>
where
    F: Fn(&DegreeState, u32, &mut ChaCha8Rng) -> u32,
{
    out.clear();
    let mut retries = 0;
    while out.len() < count as usize {
        let target = draw(state, v, rng);
        if out.contains(&target) {
            retries += 1;
            if retries > MAX_RETRIES {
                return Err(Error::Rejection {
                    step: v as u64,
                    retries: MAX_RETRIES,
                });
            }
        } else {
            out.push(target);
        }
    }
    Ok(())
}

/// Shared loop of the ba/random/ll rules: ring seed of `m0` vertices, then
/// each new vertex links to `m` distinct existing vertices.
fn attach<F>(m: u32, m0: u32, n: u32, rng: &mut ChaCha8Rng, draw: F) -> Result<DegreeState>
where
    F: Fn(&DegreeState, u32, &mut ChaCha8Rng) -> u32,
{
    let mut state = DegreeState::ring(m0);
    state.pick_list.reserve(2 * m as usize * n as usize);
    state.degrees.reserve(n as usize);
    let mut targets = Vec::with_capacity(m as usize);
    for v in m0..n {
        distinct_targets(&state, v, m, rng, &draw, &mut targets)?;
        state.add_vertex();
        for &t in &targets {
            state.add_edge(v, t);
        }
    }
    Ok(state)
}

fn grow_collab(team: u32, m0: u32, n: u32, rng: &mut ChaCha8Rng) -> Result<DegreeState> {
    let mut state = DegreeState::complete(m0);
    let mut edges: HashSet<u64> = HashSet::new();
    for a in 0..m0 {
        for b in a + 1..m0 {
            edges.insert(edge_key(a, b));
        }
    }
    let draw = |s: &DegreeState, _v: u32, rng: &mut ChaCha8Rng| -> u32 {
        s.pick_list[rng.random_range(0..s.pick_list.len())]
    };
    let mut targets = Vec::with_capacity(team as usize);
    for v in m0..n {
        distinct_targets(&state, v, team - 1, rng, &draw, &mut targets)?;
        state.add_vertex();
        for &t in &targets {
            state.add_edge(v, t);
            edges.insert(edge_key(v, t));
        }
        for (i, &a) in targets.iter().enumerate() {
            for &b in &targets[i + 1..] {
                if edges.insert(edge_key(a, b)) {
                    state.add_edge(a, b);
                }
            }
        }
    }
    state.aux = Aux::Edges(edges);
    Ok(state)
}

fn grow_zrz(m: u32, n: u32, rng: &mut ChaCha8Rng) -> DegreeState {
    let mut state = DegreeState::complete(m);
    state.tracks_weights = false;
    state.pick_list = Vec::new();
    let width = m as usize;
    let mut cliques: Vec<u32> = (0..m).collect();
    cliques.reserve(width * width * (n - m) as usize);
    let mut chosen = vec![0u32; width];
    for v in m..n {
        let c = rng.random_range(0..cliques.len() / width);
        chosen.copy_from_slice(&cliques[c * width..(c + 1) * width]);
        state.add_vertex();
        for &u in &chosen {
            state.degrees[u as usize] += 1;
        }
        state.degrees[v as usize] = m;
        // The new vertex with each (m-1)-subset of the chosen clique.
        for skip in 0..width {
            for (i, &u) in chosen.iter().enumerate() {
                if i != skip {
                    cliques.push(u);
                }
            }
            cliques.push(v);
        }
    }
    state.aux = Aux::Cliques {
        m: width,
        members: cliques,
    };
    state
}

/// Chains are indexed by step. A step whose element joins an existing group
/// leaves its own chain at size 0 forever.
fn grow_kk(p: f64, n: u32, rng: &mut ChaCha8Rng) -> DegreeState {
    let mut state = DegreeState::empty(true);
    state.degrees.reserve(n as usize);
    state.pick_list.reserve(n as usize);
    let g = state.add_vertex();
    state.degrees[g as usize] = 1;
    state.pick_list.push(g);
    for _ in 1..n {
        let own = state.add_vertex();
        if rng.random::<f64>() < p {
            let g = state.pick_list[rng.random_range(0..state.pick_list.len())];
            state.degrees[g as usize] += 1;
            state.pick_list.push(g);
        } else {
            state.degrees[own as usize] = 1;
            state.pick_list.push(own);
        }
    }
    state
}

/// Directed links; `degrees` holds in-degrees and `pick_list` one entry per
/// link target. The newborn site is a candidate target in its own step.
fn grow_dms(m: u32, h: f64, n: u32, rng: &mut ChaCha8Rng) -> DegreeState {
    let mut state = DegreeState::empty(true);
    state.degrees.reserve(n as usize);
    state.pick_list.reserve(m as usize * n as usize);
    state.add_vertex();
    let mut targets = Vec::with_capacity(m as usize);
    for _ in 1..n {
        state.add_vertex();
        let sites = state.degrees.len() as u32;
        let uniform_mass = h * sites as f64;
        let total = uniform_mass + state.pick_list.len() as f64;
        targets.clear();
        for _ in 0..m {
            let t = if rng.random::<f64>() * total < uniform_mass {
                rng.random_range(0..sites)
            } else {
                state.pick_list[rng.random_range(0..state.pick_list.len())]
            };
            targets.push(t);
        }
        for &t in &targets {
            state.degrees[t as usize] += 1;
            state.pick_list.push(t);
        }
    }
    state
}

/// Each of the `m` edges puts the new vertex's half-edge in the list before
/// drawing the other endpoint, so the new vertex can be chosen (a loop).
fn grow_lcd(m: u32, n: u32, rng: &mut ChaCha8Rng) -> DegreeState {
    let mut state = DegreeState::empty(true);
    state.degrees.reserve(n as usize);
    state.pick_list.reserve(2 * m as usize * n as usize + 2);
    let v0 = state.add_vertex();
    state.add_edge(v0, v0);
    for _ in 1..n {
        let v = state.add_vertex();
        for _ in 0..m {
            state.pick_list.push(v);
            state.degrees[v as usize] += 1;
            let t = state.pick_list[rng.random_range(0..state.pick_list.len())];
            state.pick_list.push(t);
            state.degrees[t as usize] += 1;
        }
    }
    state
}
