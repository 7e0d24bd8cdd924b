use super::{guard, Limits};
use crate::graph::{Cycle, DependencyGraph};
use crate::Result;

/// All simple directed cycles, each listed once from its smallest vertex,
/// in lexicographic order.
pub fn enumerate_simple_cycles(g: &DependencyGraph, limits: &Limits) -> Result<Vec<Cycle>> {
    guard("cycle enumeration vertices", limits.cycle_vertices, g.n())?;
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on = vec![false; g.n()];
    for s in 0..g.n() {
        path.push(s);
        on[s] = true;
        extend(g, s, s, &mut path, &mut on, &mut out);
        on[s] = false;
        path.pop();
    }
    Ok(out)
}

fn extend(g: &DependencyGraph, s: usize, v: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Cycle>) {
    for &(u, _) in g.out_arcs(v) {
        if u == s {
            out.push(Cycle::new(path.clone()));
        } else if u > s && !on[u] {
            path.push(u);
            on[u] = true;
            extend(g, s, u, path, on, out);
            on[u] = false;
            path.pop();
        }
    }
}

/// Largest number of vertex-disjoint cycles, by plain recursion over the
/// enumerated cycles.
pub fn max_disjoint_cycles(g: &DependencyGraph, limits: &Limits) -> Result<usize> {
    let cycles = enumerate_simple_cycles(g, limits)?;
    let masks: Vec<u64> = cycles.iter().map(|c| c.vertices().iter().fold(0, |m, v| m | 1 << v)).collect();
    fn go(k: usize, used: u64, masks: &[u64]) -> usize {
        if k == masks.len() {
            return 0;
        }
        let skip = go(k + 1, used, masks);
        if masks[k] & used == 0 {
            skip.max(1 + go(k + 1, used | masks[k], masks))
        } else {
            skip
        }
    }
    Ok(go(0, 0, &masks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{samples, ChunkId, ChunkSet, UNIT};

    fn complete(n: usize) -> DependencyGraph {
        let wants: Vec<ChunkId> = (0..n).map(ChunkId).collect();
        let sides: Vec<ChunkSet> = (0..n).map(|j| (0..n).filter(|&i| i != j).map(ChunkId).collect()).collect();
        DependencyGraph::build(&wants, &vec![UNIT; n], &sides, UNIT)
    }

    #[test]
    fn triangle_with_pendant_cycles() {
        let inst = samples::triangle_with_pendant();
        let g = DependencyGraph::from_reports(&inst.truthful_reports(), &inst.wants());
        let c = enumerate_simple_cycles(&g, &Limits::default()).unwrap();
        assert_eq!(c, vec![Cycle::new(vec![0, 1, 2]), Cycle::new(vec![2, 3])]);
        assert_eq!(max_disjoint_cycles(&g, &Limits::default()).unwrap(), 1);
    }

    #[test]
    fn complete_digraph_on_three() {
        let c = enumerate_simple_cycles(&complete(3), &Limits::default()).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.iter().filter(|c| c.len() == 2).count(), 3);
    }

    #[test]
    fn acyclic_and_guarded() {
        let wants: Vec<ChunkId> = (0..3).map(ChunkId).collect();
        let g = DependencyGraph::build(&wants, &[1, 1, 1], &vec![ChunkSet::new(); 3], UNIT);
        assert!(enumerate_simple_cycles(&g, &Limits::default()).unwrap().is_empty());
        assert!(enumerate_simple_cycles(&complete(11), &Limits::default()).is_err());
    }
}
