//! Maximum-weight matching with a canonical tie-break.
//!
//! Among maximum-weight matchings the one with fewest edges wins, then the
//! lexicographically smallest ascending edge list. Both solvers here return
//! exactly that matching, so they can be compared edge for edge.

mod blossom;
mod brute;

pub use blossom::max_weight_mate;
pub use brute::{brute_force_matching, BRUTE_FORCE_MAX_VERTICES};

use serde::{Deserialize, Serialize};

use crate::graph::MatchingGraph;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    /// `(i, j)` with `i < j`, ascending.
    pub edges: Vec<(usize, usize)>,
    pub weight: i64,
}

impl Matching {
    pub fn is_valid_in(&self, g: &MatchingGraph) -> bool {
        let mut used = vec![false; g.n];
        for &(i, j) in &self.edges {
            if i >= g.n || j >= g.n || used[i] || used[j] {
                return false;
            }
            if !g.edges.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                return false;
            }
            used[i] = true;
            used[j] = true;
        }
        true
    }
}

fn normalized(g: &MatchingGraph) -> Vec<(usize, usize, i64)> {
    let mut e: Vec<_> = g.edges.iter().map(|&(i, j, w)| (i.min(j), i.max(j), w)).collect();
    e.sort_unstable();
    e
}

/// Blossom-based maximum-weight matching with the canonical tie-break.
///
/// Edges of weight `<= 0` are dropped up front. Fewest edges is enforced by
/// scaling weights to `w·(n+1) − 1`; the lexicographic order by fixing
/// edges greedily in ascending order and re-solving the residual graph.
pub fn max_weight_matching(g: &MatchingGraph) -> Matching {
    let n = g.n;
    let scale = n as i64 + 1;
    let edges: Vec<(usize, usize, i64)> =
        normalized(g).into_iter().filter(|e| e.2 > 0).map(|(i, j, w)| (i, j, w * scale - 1)).collect();
    let solve = |blocked: &[bool], removed: &[bool]| -> (i64, Vec<(usize, usize)>) {
        let sub: Vec<(usize, usize, i64)> = edges
            .iter()
            .enumerate()
            .filter(|(k, e)| !removed[*k] && !blocked[e.0] && !blocked[e.1])
            .map(|(_, e)| *e)
            .collect();
        let mate = max_weight_mate(n, &sub);
        let mut total = 0;
        let mut chosen = Vec::new();
        for &(i, j, w) in &sub {
            if mate[i] == Some(j) {
                total += w;
                chosen.push((i, j));
            }
        }
        (total, chosen)
    };
    let mut blocked = vec![false; n];
    let mut removed = vec![false; edges.len()];
    let (target, mut current) = solve(&blocked, &removed);
    let mut fixed: Vec<(usize, usize)> = Vec::new();
    let mut fixed_weight = 0;
    for (k, &(i, j, w)) in edges.iter().enumerate() {
        if blocked[i] || blocked[j] {
            continue;
        }
        if current.contains(&(i, j)) {
            blocked[i] = true;
            blocked[j] = true;
            fixed.push((i, j));
            fixed_weight += w;
            continue;
        }
        blocked[i] = true;
        blocked[j] = true;
        let (rest, m) = solve(&blocked, &removed);
        if fixed_weight + w + rest == target {
            fixed.push((i, j));
            fixed_weight += w;
            current = fixed.iter().copied().chain(m).collect();
        } else {
            blocked[i] = false;
            blocked[j] = false;
            removed[k] = true;
        }
    }
    debug_assert_eq!(fixed_weight, target);
    let weight = fixed
        .iter()
        .map(|&(i, j)| edges.iter().find(|e| (e.0, e.1) == (i, j)).map(|e| (e.2 + 1) / scale).unwrap())
        .sum();
    Matching { edges: fixed, weight }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mg(n: usize, e: &[(usize, usize, i64)]) -> MatchingGraph {
        MatchingGraph { n, edges: e.to_vec() }
    }

    #[test]
    fn single_positive_edge() {
        let g = mg(4, &[(2, 3, 100_000)]);
        let m = max_weight_matching(&g);
        assert_eq!(m.edges, vec![(2, 3)]);
        assert_eq!(m.weight, 100_000);
        assert_eq!(brute_force_matching(&g).unwrap(), m);
    }

    #[test]
    fn triangle_takes_heaviest() {
        let g = mg(3, &[(0, 1, 500_000), (1, 2, 400_000), (0, 2, 300_000)]);
        assert_eq!(max_weight_matching(&g).edges, vec![(0, 1)]);
        assert_eq!(brute_force_matching(&g).unwrap().edges, vec![(0, 1)]);
    }

    #[test]
    fn path_takes_outer_edges() {
        let g = mg(4, &[(0, 1, 300_000), (1, 2, 500_000), (2, 3, 300_000)]);
        let m = max_weight_matching(&g);
        assert_eq!(m.edges, vec![(0, 1), (2, 3)]);
        assert_eq!(m.weight, 600_000);
        assert_eq!(brute_force_matching(&g).unwrap(), m);
    }

    #[test]
    fn non_positive_edges_are_ignored() {
        let g = mg(4, &[(0, 1, 0), (2, 3, -5)]);
        assert_eq!(max_weight_matching(&g), Matching::default());
        assert_eq!(brute_force_matching(&g).unwrap(), Matching::default());
    }

    #[test]
    fn ties_prefer_fewer_edges_then_lex() {
        // {0-1} alone weighs 4 as do {0-2, 1-3}; fewer edges wins.
        let g = mg(4, &[(0, 1, 4), (0, 2, 2), (1, 3, 2)]);
        assert_eq!(max_weight_matching(&g).edges, vec![(0, 1)]);
        assert_eq!(brute_force_matching(&g).unwrap().edges, vec![(0, 1)]);
        // Two disjoint options of equal size and weight: lex smaller wins.
        let g = mg(4, &[(0, 3, 1), (1, 2, 1), (0, 1, 1), (2, 3, 1)]);
        assert_eq!(max_weight_matching(&g).edges, vec![(0, 1), (2, 3)]);
        assert_eq!(brute_force_matching(&g).unwrap().edges, vec![(0, 1), (2, 3)]);
    }
}
