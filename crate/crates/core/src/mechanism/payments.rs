use super::{Alg2, Bids, CodingScheme, SqrtN};
use crate::graph::CycleSearch;
use crate::{Error, Result};

/// Externality price: best welfare of the others without `i`, minus the
/// others' welfare at the chosen matrix. No optimality check.
pub fn externality_payment(bids: &Bids, i: usize, scheme: &dyn CodingScheme) -> Result<i64> {
    let mode = scheme.decode_mode();
    let zeroed = bids.with_value(i, 0);
    let without = scheme.code(&zeroed)?.matrix;
    let chosen = scheme.code(bids)?.matrix;
    Ok(zeroed.welfare(&without, mode) - zeroed.welfare(&chosen, mode))
}

/// VCG payment of client `i`. Only meaningful when `scheme` is exactly
/// welfare-maximizing over its matrix set.
pub fn vcg_payment(bids: &Bids, i: usize, scheme: &dyn CodingScheme) -> Result<i64> {
    if !scheme.is_optimal() {
        return Err(Error::NonOptimalSolver(scheme.name()));
    }
    let p = externality_payment(bids, i, scheme)?;
    debug_assert!(p >= 0, "optimal solver produced a negative externality");
    Ok(p)
}

/// Payment of client `i` under greedy min-cost packing.
///
/// Out-arcs of `i` are priced at a full unit, so each cycle's cost through
/// `i` is what it would cost if `i` bid nothing. Replaying the greedy
/// rounds, the bid at which a cycle through `i` would first win round `k`
/// is `ζ(C₂) − ζ(C₁)`; once the cheapest cycle no longer passes admission,
/// a cycle through `i` would still be taken at `ζ(C₂) − unit`. The payment
/// is the smallest such bid, capped at one unit for uncoded service.
pub fn alg3_payment(bids: &Bids, i: usize) -> Result<i64> {
    let coding = Alg2.code(bids)?;
    if !bids.recovers(&coding.matrix, Alg2.decode_mode(), i) {
        return Err(Error::Precondition(format!("client {i} is not served by greedy packing")));
    }
    let unit = bids.unit;
    let g = bids.graph();
    let mut search = CycleSearch::with_costs(&g, g.costs_with_free_vertex(i));
    let mut p = unit;
    while let Some((_, through)) = search.min_cost_cycle_through(i) {
        let (c1, cheapest) = search.min_cost_cycle().expect("a cycle through i exists");
        if cheapest > unit {
            p = p.min(through - unit);
            break;
        }
        p = p.min(through - cheapest);
        search.remove(&c1);
    }
    Ok(p.max(0))
}

/// Recovery threshold of client `i` under `scheme` with everything else
/// frozen: the smallest `t` such that every bid above `t` is served and
/// every bid below is not.
///
/// Bisects on the half-integer points `t + ½` using bids on a doubled grid,
/// which returns the exact threshold whenever it is an integer number of
/// micro-units, whichever way the scheme breaks the tie at `t` itself.
/// The result is then spot-checked at `t ± 1`.
pub fn threshold_of(scheme: &dyn CodingScheme, bids: &Bids, i: usize) -> Result<i64> {
    let mode = scheme.decode_mode();
    let fine = bids.refined();
    let served_above = |t: i64| -> Result<bool> {
        let b = fine.with_value(i, 2 * t + 1);
        Ok(b.recovers(&scheme.code(&b)?.matrix, mode, i))
    };
    let served_at = |v: i64| -> Result<bool> {
        let b = bids.with_value(i, v);
        Ok(b.recovers(&scheme.code(&b)?.matrix, mode, i))
    };
    let unit = bids.unit;
    if !served_above(unit)? {
        return Err(Error::NonMonotone { client: i, detail: "not served when bidding above one unit".into() });
    }
    let t = if served_above(0)? {
        0
    } else {
        let (mut lo, mut hi) = (0, unit);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if served_above(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    if !served_at(t + 1)? {
        return Err(Error::NonMonotone { client: i, detail: format!("not served at {} above threshold {t}", t + 1) });
    }
    if t >= 1 && served_at(t - 1)? {
        return Err(Error::NonMonotone { client: i, detail: format!("served at {} below threshold {t}", t - 1) });
    }
    Ok(t)
}

/// Payment of client `i` under the `γ/√|C|` greedy scheme.
pub fn sqrtn_payment(bids: &Bids, i: usize) -> Result<i64> {
    threshold_of(&SqrtN, bids, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanism::{Alg1, MechanismId};
    use crate::model::{samples, UNIT};

    #[test]
    fn vcg_on_the_triangle_with_pendant() {
        let b = Bids::truthful(&samples::triangle_with_pendant());
        assert_eq!(vcg_payment(&b, 2, &Alg1).unwrap(), 400_000);
        assert_eq!(vcg_payment(&b, 3, &Alg1).unwrap(), 500_000);
        assert_eq!(threshold_of(&Alg1, &b, 2).unwrap(), 400_000);
        assert_eq!(threshold_of(&Alg1, &b, 3).unwrap(), 500_000);
    }

    #[test]
    fn vcg_refuses_greedy_solver() {
        let b = Bids::truthful(&samples::mutual_chain());
        assert!(matches!(vcg_payment(&b, 1, &Alg2), Err(Error::NonOptimalSolver(_))));
    }

    #[test]
    fn externality_on_the_chain_overbid() {
        let b = Bids::truthful(&samples::mutual_chain()).with_value(0, 700_000);
        assert_eq!(externality_payment(&b, 0, &Alg2).unwrap(), 450_000);
    }

    #[test]
    fn greedy_payment_on_the_chain_overbid() {
        let b = Bids::truthful(&samples::mutual_chain()).with_value(0, 700_000);
        assert_eq!(alg3_payment(&b, 0).unwrap(), 600_000);
        assert_eq!(threshold_of(&Alg2, &b, 0).unwrap(), 600_000);
    }

    #[test]
    fn uncoded_service_costs_one_unit() {
        let inst = samples::triangle_with_pendant();
        let b = Bids { sides: vec![Default::default(); 4], ..Bids::truthful(&inst) }.with_value(1, 3 * UNIT);
        for id in [MechanismId::Alg1Instant, MechanismId::Alg2Maxc, MechanismId::Sqrtn, MechanismId::VcgGeneral] {
            assert_eq!(id.payment(&b, 1, &Default::default()).unwrap(), UNIT, "{id}");
        }
    }

    #[test]
    fn alg3_requires_service() {
        let b = Bids::truthful(&samples::mutual_chain());
        assert!(matches!(alg3_payment(&b, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn single_pair_threshold_is_one_minus_partner() {
        let b = Bids::truthful(&samples::triangle_with_pendant());
        let pair = Bids {
            wants: b.wants[..2].to_vec(),
            values: vec![500_000, 700_000],
            sides: vec![[b.wants[1]].into(), [b.wants[0]].into()],
            unit: UNIT,
        };
        assert_eq!(sqrtn_payment(&pair, 0).unwrap(), 300_000);
        assert_eq!(alg3_payment(&pair, 0).unwrap(), 300_000);
    }

    #[test]
    fn literal_round_gap_rule_would_overcharge() {
        // Both clients are served on their mutual pair (cost 0.9). The gap
        // rule alone never sees a cheaper rival cycle and would leave the
        // price at one unit, above the 0.8 client's value.
        let b = Bids::truthful(&samples::triangle_with_pendant());
        let pair = Bids {
            wants: b.wants[..2].to_vec(),
            values: vec![800_000, 300_000],
            sides: vec![[b.wants[1]].into(), [b.wants[0]].into()],
            unit: UNIT,
        };
        assert_eq!(alg3_payment(&pair, 0).unwrap(), 700_000);
        assert_eq!(threshold_of(&Alg2, &pair, 0).unwrap(), 700_000);
    }
}
