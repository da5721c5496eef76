use std::collections::HashSet;

/// Model-specific bookkeeping carried alongside the degree sequence.
#[derive(Debug, Clone)]
pub enum Aux {
    None,
    /// Undirected edge registry, keyed by `(lo << 32) | hi`.
    Edges(HashSet<u64>),
    /// Registered `m`-cliques, stored flat, `m` vertex ids per clique.
    Cliques {
        m: usize,
        members: Vec<u32>,
    },
}

/// Degree sequence plus a repeated-node list for O(1) proportional draws.
///
/// Vertex `v` appears in `pick_list` exactly `degrees[v]` times whenever
/// `tracks_weights` is set. For the group model "degree" is a group size and
/// the list holds one group id per element; for the directed model it is
/// an in-degree and the list holds one target per link.
#[derive(Debug, Clone)]
pub struct DegreeState {
    pub degrees: Vec<u32>,
    pub pick_list: Vec<u32>,
    pub tracks_weights: bool,
    pub aux: Aux,
}

impl DegreeState {
    pub(crate) fn empty(tracks_weights: bool) -> Self {
        DegreeState {
            degrees: Vec::new(),
            pick_list: Vec::new(),
            tracks_weights,
            aux: Aux::None,
        }
    }

    /// `m0` vertices on a cycle, or a single edge when `m0 = 2`.
    pub(crate) fn ring(m0: u32) -> Self {
        let mut s = DegreeState::empty(true);
        s.degrees = vec![0; m0 as usize];
        if m0 == 2 {
            s.add_edge(0, 1);
        } else {
            for v in 0..m0 {
                s.add_edge(v, (v + 1) % m0);
            }
        }
        s
    }

    /// Complete graph on `n` vertices.
    pub(crate) fn complete(n: u32) -> Self {
        let mut s = DegreeState::empty(true);
        s.degrees = vec![0; n as usize];
        for a in 0..n {
            for b in a + 1..n {
                s.add_edge(a, b);
            }
        }
        s
    }

    pub(crate) fn add_vertex(&mut self) -> u32 {
        self.degrees.push(0);
        (self.degrees.len() - 1) as u32
    }

    /// Undirected edge; a self-loop adds 2 to the degree.
    pub(crate) fn add_edge(&mut self, a: u32, b: u32) {
        self.degrees[a as usize] += 1;
        self.degrees[b as usize] += 1;
        if self.tracks_weights {
            self.pick_list.push(a);
            self.pick_list.push(b);
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_weight(&self) -> usize {
        self.pick_list.len()
    }

    pub fn degree_sum(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    /// Recounts the repeated-node list against the degrees. Linear in the
    /// list length; meant for tests and debug checks on small networks.
    pub fn weights_consistent(&self) -> bool {
        if !self.tracks_weights {
            return true;
        }
        let mut counts = vec![0u32; self.degrees.len()];
        for &v in &self.pick_list {
            match counts.get_mut(v as usize) {
                Some(c) => *c += 1,
                None => return false,
            }
        }
        counts == self.degrees
    }
}

pub(crate) fn edge_key(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    ((lo as u64) << 32) | hi as u64
}
