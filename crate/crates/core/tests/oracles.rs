use icmech::graph::{ratio_cmp, CycleSearch};
use icmech::mechanism::{Bids, MechanismId, MechanismOptions};
use icmech::model::{samples, DecodeMode, UNIT};
use icmech::oracle::{
    enumerate_simple_cycles, gen_from_cycle_packing, gen_from_independent_set, gen_random_instance,
    min_transmissions_all_satisfied, optimal_cycle_packing, optimal_multicast_welfare, optimal_sparse_welfare,
    EdgeList, Limits, PackingObjective,
};

/// Greedy min-cost packing recomputed from the full cycle list.
fn greedy_by_enumeration(b: &Bids) -> i64 {
    let g = b.graph();
    let cycles = enumerate_simple_cycles(&g, &Limits::default()).unwrap();
    let mut used = vec![false; b.n()];
    let mut w = 0;
    while let Some((cost, _, c)) = cycles
        .iter()
        .filter(|c| c.vertices().iter().all(|&v| !used[v]))
        .map(|c| (g.cycle_cost(c), c.len(), c))
        .min()
    {
        if cost > b.unit {
            break;
        }
        w += b.unit - cost;
        for &v in c.vertices() {
            used[v] = true;
        }
    }
    w + (0..b.n()).filter(|&i| !used[i] && b.values[i] >= b.unit).map(|i| b.values[i] - b.unit).sum::<i64>()
}

fn random_bids(count: u64, max_n: usize) -> impl Iterator<Item = Bids> {
    (0..count).map(move |s| {
        let n = 2 + (s as usize % (max_n - 1));
        let side = (s as usize / 7) % n;
        Bids::truthful(&gen_random_instance(n, side, 1000 + s).unwrap())
    })
}

fn welfare_of(id: MechanismId, b: &Bids, opts: &MechanismOptions) -> i64 {
    let g = id.scheme(opts).code(b).unwrap().matrix;
    b.welfare(&g, id.native_mode())
}

#[test]
fn greedy_scheme_matches_enumeration() {
    for b in random_bids(150, 9) {
        assert_eq!(welfare_of(MechanismId::Alg2Maxc, &b, &Default::default()), greedy_by_enumeration(&b));
    }
}

#[test]
fn oracle_dominates_every_scheme() {
    let opts = MechanismOptions { guard_n: 9 };
    for b in random_bids(150, 9) {
        for mode in [DecodeMode::Instant, DecodeMode::General] {
            let (coding, best) = optimal_sparse_welfare(&b, mode, &Limits::default()).unwrap();
            assert_eq!(b.welfare(&coding.matrix, mode), best);
            for id in [MechanismId::Alg1Instant, MechanismId::Alg2Maxc, MechanismId::Sqrtn] {
                if mode == DecodeMode::General || id.native_mode() == DecodeMode::Instant {
                    assert!(welfare_of(id, &b, &opts) <= best, "{id} beats the {mode} oracle");
                }
            }
        }
        let (_, instant) = optimal_sparse_welfare(&b, DecodeMode::Instant, &Limits::default()).unwrap();
        assert_eq!(welfare_of(MechanismId::Alg1Instant, &b, &opts), instant);
    }
}

#[test]
fn row_search_agrees_with_cycle_packing_on_small_unicast() {
    let limits = Limits { candidate_rows: 10, ..Limits::default() };
    for b in random_bids(80, 4) {
        for mode in [DecodeMode::Instant, DecodeMode::General] {
            let (_, rows) = optimal_multicast_welfare(&b, mode, &limits).unwrap();
            let (_, packing) = optimal_sparse_welfare(&b, mode, &limits).unwrap();
            assert_eq!(rows, packing, "{mode} {b:?}");
        }
    }
}

#[test]
fn ratio_scan_finds_the_best_nonnegative_ratio() {
    for b in random_bids(150, 9) {
        let g = b.graph();
        let all = enumerate_simple_cycles(&g, &Limits::default()).unwrap();
        let best = all.iter().max_by(|x, y| ratio_cmp(g.cycle_weight(x), x.len(), g.cycle_weight(y), y.len()));
        let found = CycleSearch::new(&g).max_ratio_cycle();
        match (best, found) {
            (None, None) => {}
            (Some(c), Some((f, cost))) => {
                let ord = ratio_cmp(UNIT - cost, f.len(), g.cycle_weight(c), c.len());
                if g.cycle_weight(c) >= 0 {
                    assert_eq!(ord, std::cmp::Ordering::Equal);
                } else {
                    assert!(UNIT - cost < 0);
                }
            }
            other => panic!("mismatch {other:?}"),
        }
    }
}

#[test]
fn packing_on_the_triangle_with_pendant() {
    let b = Bids::truthful(&samples::triangle_with_pendant_heavy());
    let g = b.graph();
    let p = optimal_cycle_packing(&g, PackingObjective::Weight, &Limits::default()).unwrap();
    assert_eq!(p.value, 200_000);
    assert_eq!(p.cycles.len(), 1);
    assert_eq!(p.cycles[0].vertices(), &[0, 1, 2]);
    let p = optimal_cycle_packing(&g, PackingObjective::TwoCyclesOnly, &Limits::default()).unwrap();
    assert_eq!(p.value, 100_000);
    assert_eq!(p.cycles[0].vertices(), &[2, 3]);
}

#[test]
fn small_reductions() {
    let k2 = EdgeList::undirected(2, &[(0, 1)]).unwrap();
    let p3 = EdgeList::undirected(3, &[(0, 1), (1, 2)]).unwrap();
    let k3 = EdgeList::undirected(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    // On the triangle, one d_x + d_e row per edge serves every edge client and one endpoint each.
    for (g, opt_is, best) in [(&k2, 1, UNIT), (&p3, 2, 2 * UNIT), (&k3, 1, 3 * UNIT / 2)] {
        let r = gen_from_independent_set(g).unwrap();
        assert_eq!(r.expected.opt_is, Some(opt_is));
        let b = Bids::truthful(&r.instance);
        let (_, w) = optimal_multicast_welfare(&b, DecodeMode::Instant, &Limits::default()).unwrap();
        assert_eq!(w, best);
        let eta = min_transmissions_all_satisfied(&r.instance, DecodeMode::Instant, &Limits::default()).unwrap();
        assert_eq!(eta, g.edges.len() + r.expected.opt_vc.unwrap());
    }
    let two = EdgeList::directed(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
    let r = gen_from_cycle_packing(&two).unwrap();
    let (_, w) = optimal_sparse_welfare(&Bids::truthful(&r.instance), DecodeMode::General, &Limits::default()).unwrap();
    assert_eq!(w, 2 * UNIT);
}
