use std::cmp::Ordering;
use std::collections::HashMap;

use super::{Cycle, DependencyGraph};

const INF: i64 = i64::MAX / 4;

/// Minimum-cost cycle queries over the live vertices of a graph.
///
/// Ties are broken by cost, then length, then the lexicographically
/// smallest canonical vertex sequence. Costs must be nonnegative, which
/// makes every closed walk of minimum `(cost, length)` a simple cycle.
#[derive(Clone, Debug)]
pub struct CycleSearch<'g> {
    g: &'g DependencyGraph,
    costs: Vec<i64>,
    alive: Vec<bool>,
}

/// Exact-hop closed-walk table rooted at `s`, restricted to live vertices
/// `>= s`. `at(h, v, need)` is the cheapest walk from `v` back to `s` using
/// exactly `h` arcs; with `need` it must also pass through the tracked
/// vertex after leaving `v`.
struct HopTable {
    s: usize,
    n: usize,
    width: usize,
    rows: Vec<Vec<i64>>,
}

impl HopTable {
    fn at(&self, h: usize, v: usize, need: usize) -> i64 {
        self.rows[h][v * self.width + need]
    }
}

impl<'g> CycleSearch<'g> {
    pub fn new(g: &'g DependencyGraph) -> Self {
        Self::with_costs(g, g.costs())
    }

    /// # Panics
    /// If `costs` does not have one nonnegative entry per arc.
    pub fn with_costs(g: &'g DependencyGraph, costs: Vec<i64>) -> Self {
        assert_eq!(costs.len(), g.arcs().len(), "one cost per arc");
        assert!(costs.iter().all(|c| *c >= 0), "costs must be nonnegative");
        CycleSearch { g, costs, alive: vec![true; g.n()] }
    }

    pub fn graph(&self) -> &DependencyGraph {
        self.g
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    /// Deletes the vertices of `c` from further searches.
    pub fn remove(&mut self, c: &Cycle) {
        for &v in c.vertices() {
            self.alive[v] = false;
        }
    }

    /// Cost of `c` under this search's arc costs.
    pub fn cost(&self, c: &Cycle) -> i64 {
        c.arcs().map(|(a, b)| self.costs[self.g.arc_index(a, b).expect("arc")]).sum()
    }

    fn floyd(&self) -> Vec<(i64, u32)> {
        let n = self.g.n();
        let mut d = vec![(INF, 0u32); n * n];
        for (a, &(i, j)) in self.g.arcs().iter().enumerate() {
            if self.alive[i] && self.alive[j] {
                d[i * n + j] = (self.costs[a], 1);
            }
        }
        for k in (0..n).filter(|&k| self.alive[k]) {
            for i in (0..n).filter(|&i| self.alive[i]) {
                let dik = d[i * n + k];
                if dik.0 >= INF {
                    continue;
                }
                for j in (0..n).filter(|&j| self.alive[j]) {
                    let dkj = d[k * n + j];
                    if dkj.0 >= INF {
                        continue;
                    }
                    let cand = (dik.0 + dkj.0, dik.1 + dkj.1);
                    if cand < d[i * n + j] {
                        d[i * n + j] = cand;
                    }
                }
            }
        }
        d
    }

    fn hop_table(&self, s: usize, max_len: usize, through: Option<usize>) -> HopTable {
        let n = self.g.n();
        let width = if through.is_some() { 2 } else { 1 };
        let inset = |u: usize| u >= s && self.alive[u];
        let mut rows = Vec::with_capacity(max_len + 1);
        let mut first = vec![INF; n * width];
        first[s * width] = 0;
        rows.push(first);
        for h in 1..=max_len {
            let prev = &rows[h - 1];
            let mut cur = vec![INF; n * width];
            for v in (s..n).filter(|&v| inset(v)) {
                for &(u, a) in self.g.out_arcs(v) {
                    if !inset(u) {
                        continue;
                    }
                    for need in 0..width {
                        let next = if need == 1 && Some(u) != through { 1 } else { 0 };
                        let p = prev[u * width + next];
                        if p < INF {
                            let c = self.costs[a] + p;
                            if c < cur[v * width + need] {
                                cur[v * width + need] = c;
                            }
                        }
                    }
                }
            }
            rows.push(cur);
        }
        HopTable { s, n, width, rows }
    }

    /// Greedy lexicographic walk reconstruction that stays on `target`.
    fn reconstruct(&self, t: &HopTable, len: usize, target: i64, need0: usize, through: Option<usize>) -> Cycle {
        debug_assert!(t.n == self.g.n());
        let s = t.s;
        let mut seq = vec![s];
        let (mut v, mut need, mut rest) = (s, need0, target);
        for h in (1..=len).rev() {
            let step = self
                .g
                .out_arcs(v)
                .iter()
                .filter(|&&(u, _)| u >= s && self.alive[u])
                .find_map(|&(u, a)| {
                    let next = if t.width == 2 && need == 1 && Some(u) != through { 1 } else { 0 };
                    let p = t.at(h - 1, u, next);
                    (p < INF && self.costs[a] + p == rest).then_some((u, a, next))
                })
                .expect("table guarantees a continuation");
            rest -= self.costs[step.1];
            v = step.0;
            need = step.2;
            if h > 1 {
                seq.push(v);
            }
        }
        debug_assert_eq!(v, s);
        debug_assert_eq!(rest, 0);
        Cycle(seq)
    }

    /// Cheapest live cycle and its cost.
    pub fn min_cost_cycle(&self) -> Option<(Cycle, i64)> {
        let n = self.g.n();
        let d = self.floyd();
        let mut best: Option<(i64, u32)> = None;
        for (a, &(i, j)) in self.g.arcs().iter().enumerate() {
            if !(self.alive[i] && self.alive[j]) {
                continue;
            }
            let back = d[j * n + i];
            if back.0 < INF {
                let cand = (self.costs[a] + back.0, back.1 + 1);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let (cost, len) = best?;
        let len = len as usize;
        for s in (0..n).filter(|&s| self.alive[s]) {
            let t = self.hop_table(s, len, None);
            if t.at(len, s, 0) == cost {
                return Some((self.reconstruct(&t, len, cost, 0, None), cost));
            }
        }
        unreachable!("a closed walk at the target must start at some vertex")
    }

    /// Cheapest live cycle through `v` and its cost.
    pub fn min_cost_cycle_through(&self, v: usize) -> Option<(Cycle, i64)> {
        if !self.alive[v] {
            return None;
        }
        let n = self.g.n();
        let d = self.floyd();
        let mut best: Option<(i64, u32)> = None;
        for &(u, a) in self.g.out_arcs(v) {
            if !self.alive[u] {
                continue;
            }
            let back = d[u * n + v];
            if back.0 < INF {
                let cand = (self.costs[a] + back.0, back.1 + 1);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let (cost, len) = best?;
        let len = len as usize;
        for s in (0..=v).filter(|&s| self.alive[s]) {
            let t = self.hop_table(s, len, Some(v));
            let need0 = usize::from(s != v);
            if t.at(len, s, need0) == cost {
                return Some((self.reconstruct(&t, len, cost, need0, Some(v)), cost));
            }
        }
        unreachable!("a closed walk through the vertex must start at some vertex")
    }

    /// Runs the bounded-length scan: for each `i = 2..=L` take the
    /// cheapest cycle of length at most `i` and keep it when its
    /// `γ/√|C|` strictly beats the one kept so far. Returns the kept
    /// cycle (with cost) after each `i`.
    pub fn max_ratio_trace(&self) -> Vec<Option<(Cycle, i64)>> {
        let n = self.g.n();
        let live: Vec<usize> = (0..n).filter(|&v| self.alive[v]).collect();
        let l = live.len();
        if l < 2 {
            return Vec::new();
        }
        let tables: Vec<HopTable> = live.iter().map(|&s| self.hop_table(s, l, None)).collect();
        let unit = self.g.unit();
        let mut running: Option<(i64, usize)> = None;
        let mut cache: HashMap<(i64, usize), Cycle> = HashMap::new();
        let mut kept: Option<(Cycle, i64)> = None;
        let mut trace = Vec::with_capacity(l - 1);
        for i in 2..=l {
            let here = tables.iter().map(|t| t.at(i, t.s, 0)).min().unwrap_or(INF);
            if here < INF && running.is_none_or(|(c, _)| here < c) {
                running = Some((here, i));
            }
            if let Some((cost, len)) = running {
                let cyc = cache
                    .entry((cost, len))
                    .or_insert_with(|| {
                        let t = tables.iter().find(|t| t.at(len, t.s, 0) == cost).expect("witness");
                        self.reconstruct(t, len, cost, 0, None)
                    })
                    .clone();
                let better = match &kept {
                    None => true,
                    Some((k, kc)) => ratio_cmp(unit - cost, len, unit - kc, k.len()) == Ordering::Greater,
                };
                if better {
                    kept = Some((cyc, cost));
                }
            }
            trace.push(kept.clone());
        }
        trace
    }

    /// Cycle kept at the end of [`CycleSearch::max_ratio_trace`].
    pub fn max_ratio_cycle(&self) -> Option<(Cycle, i64)> {
        self.max_ratio_trace().pop().flatten()
    }
}

/// Exact comparison of `g1/√k1` with `g2/√k2`.
pub fn ratio_cmp(g1: i64, k1: usize, g2: i64, k2: usize) -> Ordering {
    let sq = |g: i64, k: usize| (g as i128) * (g as i128) * (k as i128);
    match (g1 >= 0, g2 >= 0) {
        (true, true) => sq(g1, k2).cmp(&sq(g2, k1)),
        (false, false) => sq(g2, k1).cmp(&sq(g1, k2)),
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
    }
}

fn search<'g>(g: &'g DependencyGraph, cost_override: Option<&[i64]>) -> CycleSearch<'g> {
    match cost_override {
        Some(c) => CycleSearch::with_costs(g, c.to_vec()),
        None => CycleSearch::new(g),
    }
}

/// Globally cheapest cycle, optionally under replacement arc costs.
pub fn min_cost_cycle(g: &DependencyGraph, cost_override: Option<&[i64]>) -> Option<Cycle> {
    search(g, cost_override).min_cost_cycle().map(|(c, _)| c)
}

/// Cheapest cycle through `v`, optionally under replacement arc costs.
pub fn min_cost_cycle_through(g: &DependencyGraph, v: usize, cost_override: Option<&[i64]>) -> Option<Cycle> {
    search(g, cost_override).min_cost_cycle_through(v).map(|(c, _)| c)
}

/// Cycle approximately maximizing `γ(C)/√|C|` by the bounded-length scan.
pub fn max_ratio_cycle(g: &DependencyGraph) -> Option<Cycle> {
    CycleSearch::new(g).max_ratio_cycle().map(|(c, _)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{samples, ChunkId, ChunkSet, UNIT};

    fn heavy() -> DependencyGraph {
        let inst = samples::triangle_with_pendant_heavy();
        DependencyGraph::from_reports(&inst.truthful_reports(), &inst.wants())
    }

    fn digraph(n: usize, arcs: &[(usize, usize)], values: &[i64]) -> DependencyGraph {
        let wants: Vec<ChunkId> = (0..n).map(ChunkId).collect();
        let mut sides = vec![ChunkSet::new(); n];
        for &(i, j) in arcs {
            sides[j].insert(ChunkId(i));
        }
        DependencyGraph::build(&wants, values, &sides, UNIT)
    }

    #[test]
    fn cheapest_cycle_is_the_triangle() {
        let g = heavy();
        let (c, z) = CycleSearch::new(&g).min_cost_cycle().unwrap();
        assert_eq!(c.vertices(), &[0, 1, 2]);
        assert_eq!(z, 800_000);
    }

    #[test]
    fn acyclic_graph_has_no_cycle() {
        let g = digraph(3, &[(0, 1), (1, 2)], &[1, 1, 1]);
        assert!(min_cost_cycle(&g, None).is_none());
        assert!(min_cost_cycle_through(&g, 1, None).is_none());
        assert!(max_ratio_cycle(&g).is_none());
    }

    #[test]
    fn equal_cost_prefers_shorter_then_lex() {
        // 0<->1 and 2<->3 cost the same; 0->2->1->0 is longer.
        let g = digraph(4, &[(0, 1), (1, 0), (2, 3), (3, 2)], &[UNIT; 4]);
        assert_eq!(min_cost_cycle(&g, None).unwrap().vertices(), &[0, 1]);
        let g = digraph(3, &[(0, 1), (1, 2), (2, 0), (1, 0)], &[UNIT; 3]);
        assert_eq!(min_cost_cycle(&g, None).unwrap().vertices(), &[0, 1]);
        let g = digraph(4, &[(0, 2), (2, 0), (0, 1), (1, 0)], &[UNIT; 4]);
        assert_eq!(min_cost_cycle(&g, None).unwrap().vertices(), &[0, 1]);
    }

    #[test]
    fn through_vertex_queries() {
        let g = heavy();
        assert_eq!(min_cost_cycle_through(&g, 2, None).unwrap().vertices(), &[0, 1, 2]);
        assert_eq!(min_cost_cycle_through(&g, 3, None).unwrap().vertices(), &[2, 3]);
        let g = digraph(3, &[(0, 1), (1, 0)], &[UNIT; 3]);
        assert!(min_cost_cycle_through(&g, 2, None).is_none());
    }

    #[test]
    fn through_vertex_with_free_out_arcs() {
        let inst = samples::mutual_chain();
        let mut r = inst.truthful_reports();
        r.reports[0].value = crate::model::Valuation(700_000);
        let g = DependencyGraph::from_reports(&r, &inst.wants());
        let costs = g.costs_with_free_vertex(0);
        let s = CycleSearch::with_costs(&g, costs);
        let (c, z) = s.min_cost_cycle_through(0).unwrap();
        assert_eq!(c.vertices(), &[0, 1]);
        assert_eq!(z, 1_400_000);
    }

    #[test]
    fn removal_hides_vertices() {
        let g = heavy();
        let mut s = CycleSearch::new(&g);
        let (c, _) = s.min_cost_cycle().unwrap();
        s.remove(&c);
        assert!(s.min_cost_cycle().is_none());
    }

    #[test]
    fn ratio_prefers_the_long_cycle_here() {
        let g = heavy();
        assert_eq!(max_ratio_cycle(&g).unwrap().vertices(), &[0, 1, 2]);
        let g = digraph(2, &[(0, 1), (1, 0)], &[300_000, 900_000]);
        assert_eq!(max_ratio_cycle(&g).unwrap().vertices(), &[0, 1]);
    }

    #[test]
    fn ratio_comparison_signs() {
        assert_eq!(ratio_cmp(200_000, 3, 100_000, 2), Ordering::Greater);
        assert_eq!(ratio_cmp(-1, 2, 0, 5), Ordering::Less);
        assert_eq!(ratio_cmp(-100, 4, -100, 2), Ordering::Greater);
        assert_eq!(ratio_cmp(2, 4, 1, 1), Ordering::Equal);
        assert_eq!(ratio_cmp(-2, 4, -1, 1), Ordering::Equal);
    }

    #[test]
    fn zero_cost_arcs_do_not_break_simplicity() {
        let g = digraph(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 1)], &[UNIT; 4]);
        let c = min_cost_cycle(&g, None).unwrap();
        assert!(g.is_cycle(&c));
        assert_eq!(c.vertices(), &[0, 1, 2]);
        let c = min_cost_cycle_through(&g, 3, None).unwrap();
        assert_eq!(c.vertices(), &[1, 2, 3]);
    }
}
