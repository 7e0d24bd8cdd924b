//! Weighted dependency graph over clients and its cycle primitives.
//!
//! Vertex `i` is client `i`. An arc `(i, j)` exists when client `j` holds
//! the chunk client `i` wants, so one transmission `w_i + w_j` along a
//! mutual pair (or `|C| - 1` pairwise sums along a cycle `C`) serves every
//! client on the cycle. Arc `(i, j)` carries weight `γ = v̂_i` and cost
//! `ζ = unit - min(γ, unit)`.

mod cycles;

pub use cycles::{
    max_ratio_cycle, min_cost_cycle, min_cost_cycle_through, ratio_cmp, CycleSearch,
};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::{format_micro, ChunkId, ChunkSet, ReportProfile, Valuation, UNIT};

/// `min(x, 1)`.
pub fn truncate(x: Valuation) -> Valuation {
    Valuation(x.0.min(UNIT as u64))
}

#[derive(Clone, Debug)]
pub struct DependencyGraph {
    n: usize,
    unit: i64,
    weights: Vec<i64>,
    arcs: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    out: Vec<Vec<(usize, usize)>>,
}

impl DependencyGraph {
    /// Builds the graph from reported values (in units where one
    /// transmission costs `unit`) and reported side sets.
    pub fn build(wants: &[ChunkId], values: &[i64], sides: &[ChunkSet], unit: i64) -> Self {
        let n = wants.len();
        assert_eq!(values.len(), n);
        assert_eq!(sides.len(), n);
        let mut arcs = Vec::new();
        for i in 0..n {
            for (j, side) in sides.iter().enumerate() {
                if i != j && side.contains(&wants[i]) {
                    arcs.push((i, j));
                }
            }
        }
        let mut index = vec![None; n * n];
        let mut out = vec![Vec::new(); n];
        for (a, &(i, j)) in arcs.iter().enumerate() {
            index[i * n + j] = Some(a);
            out[i].push((j, a));
        }
        DependencyGraph { n, unit, weights: values.to_vec(), arcs, index, out }
    }

    /// Graph of a report profile in micro-units.
    pub fn from_reports(reports: &ReportProfile, wants: &[ChunkId]) -> Self {
        let v: Vec<i64> = reports.reports.iter().map(|r| r.value.micro()).collect();
        Self::build(wants, &v, &reports.sides(), UNIT)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> i64 {
        self.unit
    }

    /// Reported value of vertex `v`, shared by all its out-arcs.
    pub fn vertex_weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    /// Arcs ordered by `(tail, head)`.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_index(&self, i: usize, j: usize) -> Option<usize> {
        if i < self.n && j < self.n {
            self.index[i * self.n + j]
        } else {
            None
        }
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arc_index(i, j).is_some()
    }

    /// Out-neighbours of `v` as `(head, arc index)`, ascending by head.
    pub fn out_arcs(&self, v: usize) -> &[(usize, usize)] {
        &self.out[v]
    }

    pub fn arc_weight(&self, a: usize) -> i64 {
        self.weights[self.arcs[a].0]
    }

    fn truncated(&self, v: usize) -> i64 {
        self.weights[v].min(self.unit)
    }

    pub fn arc_cost(&self, a: usize) -> i64 {
        self.unit - self.truncated(self.arcs[a].0)
    }

    /// Default per-arc costs.
    pub fn costs(&self) -> Vec<i64> {
        (0..self.arcs.len()).map(|a| self.arc_cost(a)).collect()
    }

    /// Default costs except that every out-arc of `v` costs a full unit.
    pub fn costs_with_free_vertex(&self, v: usize) -> Vec<i64> {
        let mut c = self.costs();
        for &(_, a) in &self.out[v] {
            c[a] = self.unit;
        }
        c
    }

    pub fn is_cycle(&self, c: &Cycle) -> bool {
        let s = c.vertices();
        if s.len() < 2 {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &v in s {
            if v >= self.n || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        c.arcs().all(|(a, b)| self.has_arc(a, b))
    }

    /// `Σ min(γ_a, 1) − (|C| − 1)`.
    ///
    /// # Panics
    /// If `c` is not a cycle of this graph.
    pub fn cycle_weight(&self, c: &Cycle) -> i64 {
        assert!(self.is_cycle(c), "not a cycle of this graph: {c:?}");
        let sum: i64 = c.arcs().map(|(a, _)| self.truncated(a)).sum();
        sum - (c.len() as i64 - 1) * self.unit
    }

    /// `Σ ζ_a`; always equals `unit − cycle_weight(c)`.
    ///
    /// # Panics
    /// If `c` is not a cycle of this graph.
    pub fn cycle_cost(&self, c: &Cycle) -> i64 {
        assert!(self.is_cycle(c), "not a cycle of this graph: {c:?}");
        c.arcs().map(|(a, b)| self.arc_cost(self.arc_index(a, b).unwrap())).sum()
    }

    /// Graphviz dump; arcs are labelled `γ/ζ`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dependency {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  {v} [label=\"{v}\"];");
        }
        for (a, &(i, j)) in self.arcs.iter().enumerate() {
            let _ = writeln!(
                s,
                "  {i} -> {j} [label=\"{}/{}\"];",
                format_micro(self.arc_weight(a) * UNIT / self.unit),
                format_micro(self.arc_cost(a) * UNIT / self.unit)
            );
        }
        s.push_str("}\n");
        s
    }
}

/// A simple directed cycle, stored starting at its smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    /// Rotates `seq` so that it starts at its minimum vertex.
    pub fn new(mut seq: Vec<usize>) -> Self {
        if let Some(k) = seq.iter().enumerate().min_by_key(|(_, v)| **v).map(|(k, _)| k) {
            seq.rotate_left(k);
        }
        Cycle(seq)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    /// Consecutive pairs including the wrap-around arc.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.0.len();
        (0..k).map(move |t| (self.0[t], self.0[(t + 1) % k]))
    }
}

/// Undirected graph with one edge per mutual arc pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingGraph {
    pub n: usize,
    /// `(i, j, weight)` with `i < j`, ascending.
    pub edges: Vec<(usize, usize, i64)>,
}

/// Edge `{i, j}` for every mutual pair, weighted
/// `min(γ_ij, 1) + min(γ_ji, 1) − 1`.
pub fn build_matching_graph(g: &DependencyGraph) -> MatchingGraph {
    let edges = g
        .arcs()
        .iter()
        .filter(|&&(i, j)| i < j && g.has_arc(j, i))
        .map(|&(i, j)| (i, j, g.truncated(i) + g.truncated(j) - g.unit))
        .collect();
    MatchingGraph { n: g.n, edges }
}
