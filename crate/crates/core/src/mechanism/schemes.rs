use super::{Bids, Coding, CodingScheme};
use crate::graph::{build_matching_graph, Cycle, CycleSearch};
use crate::matching::max_weight_matching;
use crate::model::{ChunkId, CodingMatrix, CodingVector, DecodeMode};
use crate::Result;

/// Rows `w_c0 + w_c1, …, w_c(k−2) + w_c(k−1)`: every consecutive pair of
/// the canonical sequence except the one closing back onto `c0`.
pub fn cycle_rows(c: &Cycle, wants: &[ChunkId]) -> Vec<CodingVector> {
    c.vertices().windows(2).map(|p| CodingVector::pair(wants[p[0]], wants[p[1]])).collect()
}

fn uncoded_leftovers(bids: &Bids, covered: &[bool], m: &mut CodingMatrix) {
    for i in 0..bids.n() {
        if !covered[i] && bids.values[i] >= bids.unit {
            m.push(CodingVector::uncoded(bids.wants[i]));
        }
    }
}

/// Optimal sparse instantly decodable coding: mutual pairs chosen by a
/// maximum-weight matching, plus uncoded service for unmatched bids of at
/// least one unit.
pub fn alg1_coding(bids: &Bids) -> Result<Coding> {
    bids.check_unicast()?;
    let g = bids.graph();
    let matching = max_weight_matching(&build_matching_graph(&g));
    let mut m = CodingMatrix::default();
    let mut covered = vec![false; bids.n()];
    let mut cycles = Vec::new();
    for &(i, j) in &matching.edges {
        m.push(CodingVector::pair(bids.wants[i], bids.wants[j]));
        covered[i] = true;
        covered[j] = true;
        cycles.push(Cycle::new(vec![i, j]));
    }
    uncoded_leftovers(bids, &covered, &mut m);
    Ok(Coding { matrix: m, cycles })
}

fn greedy(bids: &Bids, pick: impl Fn(&CycleSearch) -> Option<(Cycle, i64)>) -> Result<Coding> {
    bids.check_unicast()?;
    let g = bids.graph();
    let mut search = CycleSearch::new(&g);
    let mut m = CodingMatrix::default();
    let mut cycles = Vec::new();
    while let Some((c, cost)) = pick(&search) {
        if cost > bids.unit {
            break;
        }
        for r in cycle_rows(&c, &bids.wants) {
            m.push(r);
        }
        search.remove(&c);
        cycles.push(c);
    }
    let covered: Vec<bool> = (0..bids.n()).map(|v| !search.is_alive(v)).collect();
    uncoded_leftovers(bids, &covered, &mut m);
    Ok(Coding { matrix: m, cycles })
}

/// Greedy packing: repeatedly encode along the cheapest remaining cycle
/// while its cost is at most one unit.
pub fn alg2_coding(bids: &Bids) -> Result<Coding> {
    greedy(bids, |s| s.min_cost_cycle())
}

/// Greedy packing that selects by `γ(C)/√|C|` instead of cost.
pub fn sqrtn_coding(bids: &Bids) -> Result<Coding> {
    greedy(bids, |s| s.max_ratio_cycle())
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Alg1;

#[derive(Clone, Copy, Debug, Default)]
pub struct Alg2;

#[derive(Clone, Copy, Debug, Default)]
pub struct SqrtN;

impl CodingScheme for Alg1 {
    fn name(&self) -> &'static str {
        "alg1"
    }
    fn decode_mode(&self) -> DecodeMode {
        DecodeMode::Instant
    }
    fn is_optimal(&self) -> bool {
        true
    }
    fn code(&self, bids: &Bids) -> Result<Coding> {
        alg1_coding(bids)
    }
}

impl CodingScheme for Alg2 {
    fn name(&self) -> &'static str {
        "alg2"
    }
    fn decode_mode(&self) -> DecodeMode {
        DecodeMode::General
    }
    fn is_optimal(&self) -> bool {
        false
    }
    fn code(&self, bids: &Bids) -> Result<Coding> {
        alg2_coding(bids)
    }
}

impl CodingScheme for SqrtN {
    fn name(&self) -> &'static str {
        "sqrtn"
    }
    fn decode_mode(&self) -> DecodeMode {
        DecodeMode::General
    }
    fn is_optimal(&self) -> bool {
        false
    }
    fn code(&self, bids: &Bids) -> Result<Coding> {
        sqrtn_coding(bids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{samples, UNIT};

    fn bids(inst: &crate::model::Instance) -> Bids {
        Bids::truthful(inst)
    }

    #[test]
    fn matching_scheme_serves_the_pendant_pair() {
        let b = bids(&samples::triangle_with_pendant_heavy());
        let c = alg1_coding(&b).unwrap();
        assert_eq!(c.matrix.to_string(), "{d2+d3}");
        assert_eq!(b.welfare(&c.matrix, DecodeMode::Instant), 100_000);
    }

    #[test]
    fn matching_scheme_fallbacks() {
        let b = bids(&samples::triangle_with_pendant());
        let rich = Bids { values: vec![UNIT, 2 * UNIT, UNIT, UNIT], sides: vec![Default::default(); 4], ..b.clone() };
        assert_eq!(alg1_coding(&rich).unwrap().matrix.to_string(), "{d0, d1, d2, d3}");
        let broke = Bids { values: vec![0; 4], ..b };
        assert!(alg1_coding(&broke).unwrap().matrix.is_empty());
    }

    #[test]
    fn greedy_packs_the_triangle() {
        let b = bids(&samples::triangle_with_pendant_heavy());
        let c = alg2_coding(&b).unwrap();
        assert_eq!(c.matrix.to_string(), "{d0+d1, d1+d2}");
        assert_eq!(b.welfare(&c.matrix, DecodeMode::General), 200_000);
        let c = sqrtn_coding(&b).unwrap();
        assert_eq!(c.cycles, vec![Cycle::new(vec![0, 1, 2])]);
        assert_eq!(b.welfare(&c.matrix, DecodeMode::General), 200_000);
    }

    #[test]
    fn greedy_on_the_chain() {
        let b = bids(&samples::mutual_chain());
        assert_eq!(alg2_coding(&b).unwrap().cycles, vec![Cycle::new(vec![1, 2])]);
        let lie = b.with_value(0, 700_000);
        assert_eq!(alg2_coding(&lie).unwrap().cycles, vec![Cycle::new(vec![0, 1]), Cycle::new(vec![2, 3])]);
        // At 0.6 both pairs cost 0.8; the lexicographic tie-break picks 0-1.
        let tie = b.with_value(0, 600_000);
        assert_eq!(alg2_coding(&tie).unwrap().cycles[0], Cycle::new(vec![0, 1]));
    }

    #[test]
    fn negative_cycles_are_not_admitted() {
        let b = bids(&samples::mutual_chain()).with_value(1, 100_000).with_value(2, 100_000);
        assert!(alg2_coding(&b).unwrap().matrix.is_empty());
        assert!(sqrtn_coding(&b).unwrap().matrix.is_empty());
    }

    #[test]
    fn duplicate_wants_are_rejected() {
        let mut b = bids(&samples::mutual_chain());
        b.wants[1] = b.wants[0];
        assert!(alg1_coding(&b).is_err());
        assert!(alg2_coding(&b).is_err());
    }
}
