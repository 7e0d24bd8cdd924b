use super::{normalized, Matching};
use crate::graph::MatchingGraph;
use crate::{Error, Result};

pub const BRUTE_FORCE_MAX_VERTICES: usize = 14;

/// Exhaustive maximum-weight matching under the canonical tie-break.
pub fn brute_force_matching(g: &MatchingGraph) -> Result<Matching> {
    if g.n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::SizeGuard { guard: "brute-force matching vertices", limit: BRUTE_FORCE_MAX_VERTICES, actual: g.n });
    }
    let edges = normalized(g);
    let mut adj = vec![Vec::new(); g.n];
    for &(i, j, w) in &edges {
        adj[i].push((j, w));
    }
    let mut best = Matching::default();
    let mut cur = Vec::new();
    let mut used = vec![false; g.n];
    walk(0, 0, &adj, &mut used, &mut cur, &mut best);
    Ok(best)
}

fn better(w: i64, e: &[(usize, usize)], best: &Matching) -> bool {
    if w != best.weight {
        return w > best.weight;
    }
    if e.len() != best.edges.len() {
        return e.len() < best.edges.len();
    }
    e < &best.edges[..]
}

fn walk(
    v: usize,
    w: i64,
    adj: &[Vec<(usize, i64)>],
    used: &mut [bool],
    cur: &mut Vec<(usize, usize)>,
    best: &mut Matching,
) {
    let Some(v) = (v..adj.len()).find(|&u| !used[u]) else {
        let mut e = cur.clone();
        e.sort_unstable();
        if better(w, &e, best) {
            *best = Matching { edges: e, weight: w };
        }
        return;
    };
    used[v] = true;
    walk(v + 1, w, adj, used, cur, best);
    for &(u, wt) in &adj[v] {
        if !used[u] {
            used[u] = true;
            cur.push((v, u));
            walk(v + 1, w + wt, adj, used, cur, best);
            cur.pop();
            used[u] = false;
        }
    }
    used[v] = false;
}
