use serde::{Deserialize, Serialize};

use super::{enumerate_simple_cycles, guard, Limits};
use crate::graph::{Cycle, DependencyGraph};
use crate::mechanism::{cycle_rows, Bids, Coding, CodingScheme};
use crate::model::{CodingMatrix, CodingVector, DecodeMode};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingObjective {
    /// Any simple cycle may be used.
    Weight,
    /// Only mutual pairs, i.e. instantly decodable rows.
    TwoCyclesOnly,
}

impl PackingObjective {
    pub fn for_mode(mode: DecodeMode) -> Self {
        match mode {
            DecodeMode::Instant => PackingObjective::TwoCyclesOnly,
            DecodeMode::General => PackingObjective::Weight,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Packing {
    /// Vertex-disjoint cycles in lexicographic order.
    pub cycles: Vec<Cycle>,
    /// `Σ γ(C)`.
    pub value: i64,
}

/// Exact maximum-weight vertex-disjoint cycle packing by subset DP.
///
/// Among optimal packings, prefers the one needing the fewest
/// transmissions once bids of a full unit outside the packing are served
/// uncoded.
pub fn optimal_cycle_packing(g: &DependencyGraph, objective: PackingObjective, limits: &Limits) -> Result<Packing> {
    guard("cycle packing vertices", limits.cycle_vertices, g.n())?;
    let n = g.n();
    let mut cycles = enumerate_simple_cycles(g, limits)?;
    if objective == PackingObjective::TwoCyclesOnly {
        cycles.retain(|c| c.len() == 2);
    }
    let rich = |v: usize| g.vertex_weight(v) >= g.unit();
    let mut by_start: Vec<Vec<(usize, usize, i64, i64)>> = vec![Vec::new(); n];
    for (k, c) in cycles.iter().enumerate() {
        let mask = c.vertices().iter().fold(0usize, |m, v| m | 1 << v);
        let saved = c.vertices().iter().filter(|&&v| rich(v)).count() as i64;
        by_start[c.vertices()[0]].push((k, mask, g.cycle_weight(c), c.len() as i64 - 1 - saved));
    }
    // (value, rows, choice): choice is None for "skip lowest vertex".
    let full = (1usize << n) - 1;
    let mut best: Vec<(i64, i64, Option<usize>)> = vec![(0, 0, None); full + 1];
    for mask in 1..=full {
        let v = mask.trailing_zeros() as usize;
        let skip = best[mask & !(1 << v)];
        let mut cur = (skip.0, skip.1, None);
        for &(k, cm, w, rows) in &by_start[v] {
            if cm & mask == cm {
                let rest = best[mask & !cm];
                let cand = (w + rest.0, rows + rest.1);
                if cand.0 > cur.0 || (cand.0 == cur.0 && cand.1 < cur.1) {
                    cur = (cand.0, cand.1, Some(k));
                }
            }
        }
        best[mask] = cur;
    }
    let mut chosen = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        match best[mask].2 {
            None => mask &= !(1 << v),
            Some(k) => {
                let c = &cycles[k];
                for &u in c.vertices() {
                    mask &= !(1 << u);
                }
                chosen.push(c.clone());
            }
        }
    }
    chosen.sort();
    Ok(Packing { value: best[full].0, cycles: chosen })
}

/// Optimal sparse coding and its reported welfare: the best cycle packing
/// plus uncoded rows for uncovered bids of at least one unit.
pub fn optimal_sparse_welfare(bids: &Bids, mode: DecodeMode, limits: &Limits) -> Result<(Coding, i64)> {
    bids.check_unicast()?;
    let g = bids.graph();
    let p = optimal_cycle_packing(&g, PackingObjective::for_mode(mode), limits)?;
    let mut matrix = CodingMatrix::default();
    let mut covered = vec![false; bids.n()];
    for c in &p.cycles {
        for r in cycle_rows(c, &bids.wants) {
            matrix.push(r);
        }
        for &v in c.vertices() {
            covered[v] = true;
        }
    }
    let mut welfare = p.value;
    for i in 0..bids.n() {
        if bids.values[i] >= bids.unit {
            welfare += bids.values[i] - bids.unit;
            if !covered[i] {
                matrix.push(CodingVector::uncoded(bids.wants[i]));
            }
        }
    }
    Ok((Coding { matrix, cycles: p.cycles }, welfare))
}

/// Exhaustive packing as a coding scheme; exactly optimal, so it supports
/// externality pricing.
#[derive(Clone, Debug)]
pub struct OraclePacking {
    pub objective: PackingObjective,
    pub limits: Limits,
}

impl CodingScheme for OraclePacking {
    fn name(&self) -> &'static str {
        match self.objective {
            PackingObjective::Weight => "oracle_general",
            PackingObjective::TwoCyclesOnly => "oracle_instant",
        }
    }
    fn decode_mode(&self) -> DecodeMode {
        match self.objective {
            PackingObjective::Weight => DecodeMode::General,
            PackingObjective::TwoCyclesOnly => DecodeMode::Instant,
        }
    }
    fn is_optimal(&self) -> bool {
        true
    }
    fn code(&self, bids: &Bids) -> Result<Coding> {
        optimal_sparse_welfare(bids, self.decode_mode(), &self.limits).map(|(c, _)| c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{samples, UNIT};

    fn heavy() -> Bids {
        Bids::truthful(&samples::triangle_with_pendant_heavy())
    }

    #[test]
    fn packing_values() {
        let g = heavy().graph();
        let p = optimal_cycle_packing(&g, PackingObjective::Weight, &Limits::default()).unwrap();
        assert_eq!(p.cycles, vec![Cycle::new(vec![0, 1, 2])]);
        assert_eq!(p.value, 200_000);
        let p = optimal_cycle_packing(&g, PackingObjective::TwoCyclesOnly, &Limits::default()).unwrap();
        assert_eq!(p.cycles, vec![Cycle::new(vec![2, 3])]);
        assert_eq!(p.value, 100_000);
    }

    #[test]
    fn negative_weights_pack_nothing() {
        let g = heavy().with_value(0, 0).with_value(1, 0).with_value(2, 0).graph();
        let p = optimal_cycle_packing(&g, PackingObjective::Weight, &Limits::default()).unwrap();
        assert_eq!(p, Packing::default());
    }

    #[test]
    fn sparse_welfare_matches_decoding() {
        let b = heavy();
        let (c, w) = optimal_sparse_welfare(&b, DecodeMode::General, &Limits::default()).unwrap();
        assert_eq!(w, 200_000);
        assert_eq!(b.welfare(&c.matrix, DecodeMode::General), w);
    }

    #[test]
    fn rich_isolated_clients() {
        let b = Bids { sides: vec![Default::default(); 4], values: vec![UNIT, 3 * UNIT, 0, 2 * UNIT], ..heavy() };
        let (c, w) = optimal_sparse_welfare(&b, DecodeMode::General, &Limits::default()).unwrap();
        assert_eq!(w, 3 * UNIT);
        assert_eq!(c.matrix.eta(), 3);
    }
}
