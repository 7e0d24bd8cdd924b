use std::collections::BTreeSet;

use super::{guard, Limits};
use crate::mechanism::Bids;
use crate::model::gf2::decodes;
use crate::model::{ChunkId, CodingMatrix, CodingVector, DecodeMode, Instance};
use crate::Result;

/// Sparse rows worth considering. Instant mode: `{w_i}` and `{w_i, h}` for
/// `h ∈ H_i`, the only rows that can serve anyone. General mode: every
/// singleton and pair over chunks that appear in some want or side set.
pub fn candidate_rows(bids: &Bids, mode: DecodeMode) -> Vec<CodingVector> {
    let mut rows = BTreeSet::new();
    match mode {
        DecodeMode::Instant => {
            for (w, h) in bids.wants.iter().zip(&bids.sides) {
                rows.insert(CodingVector::uncoded(*w));
                for c in h {
                    if c != w {
                        rows.insert(CodingVector::pair(*w, *c));
                    }
                }
            }
        }
        DecodeMode::General => {
            let used: BTreeSet<ChunkId> = bids.wants.iter().copied().chain(bids.sides.iter().flatten().copied()).collect();
            let used: Vec<ChunkId> = used.into_iter().collect();
            for (k, a) in used.iter().enumerate() {
                rows.insert(CodingVector::uncoded(*a));
                for b in &used[k + 1..] {
                    rows.insert(CodingVector::pair(*a, *b));
                }
            }
        }
    }
    rows.into_iter().collect()
}

fn check_size(bids: &Bids, mode: DecodeMode, rows: usize, limits: &Limits) -> Result<()> {
    match mode {
        DecodeMode::Instant => guard("multicast clients", limits.multicast_clients, bids.n()),
        DecodeMode::General => guard("candidate rows", limits.candidate_rows, rows),
    }
}

/// Fewest sparse transmissions that serve every client under true side
/// information. Instant mode is an exact hitting-set search; general mode
/// enumerates row subsets by increasing size.
pub fn min_transmissions_all_satisfied(inst: &Instance, mode: DecodeMode, limits: &Limits) -> Result<usize> {
    inst.check(crate::model::Scenario::Multicast)?;
    let bids = Bids::truthful(inst);
    let rows = candidate_rows(&bids, mode);
    check_size(&bids, mode, rows.len(), limits)?;
    Ok(match mode {
        DecodeMode::Instant => min_hitting(&bids, &rows),
        DecodeMode::General => min_general(&bids, &rows),
    })
}

fn min_hitting(bids: &Bids, rows: &[CodingVector]) -> usize {
    let single = |r: &CodingVector| CodingMatrix::new(vec![r.clone()]);
    let options: Vec<Vec<usize>> = (0..bids.n())
        .map(|i| (0..rows.len()).filter(|&r| decodes(DecodeMode::Instant, &bids.sides[i], &single(&rows[r]), bids.wants[i])).collect())
        .collect();
    let mut hits = vec![0usize; bids.n()];
    let mut best = bids.n() + 1;
    fn go(options: &[Vec<usize>], covers: &[Vec<usize>], hits: &mut [usize], count: usize, best: &mut usize) {
        let open = (0..hits.len()).filter(|&i| hits[i] == 0).min_by_key(|&i| options[i].len());
        let Some(i) = open else {
            *best = (*best).min(count);
            return;
        };
        if count + 1 >= *best {
            return;
        }
        for &r in &options[i] {
            for &c in &covers[r] {
                hits[c] += 1;
            }
            go(options, covers, hits, count + 1, best);
            for &c in &covers[r] {
                hits[c] -= 1;
            }
        }
    }
    let mut covers = vec![Vec::new(); rows.len()];
    for (i, o) in options.iter().enumerate() {
        for &r in o {
            covers[r].push(i);
        }
    }
    go(&options, &covers, &mut hits, 0, &mut best);
    best
}

fn min_general(bids: &Bids, rows: &[CodingVector]) -> usize {
    let all_served = |m: &CodingMatrix| (0..bids.n()).all(|i| bids.recovers(m, DecodeMode::General, i));
    let wanted: BTreeSet<ChunkId> = bids.wants.iter().copied().collect();
    for k in 0..=wanted.len() {
        let mut pick = Vec::with_capacity(k);
        if subsets_of_size(rows, k, 0, &mut pick, &mut |sel: &[usize]| {
            let covered = sel.iter().flat_map(|&r| rows[r].support().iter()).collect::<BTreeSet<_>>();
            if !wanted.iter().all(|w| covered.contains(w)) {
                return false;
            }
            all_served(&CodingMatrix::new(sel.iter().map(|&r| rows[r].clone()).collect()))
        }) {
            return k;
        }
    }
    unreachable!("uncoded service of every wanted chunk serves everyone")
}

fn subsets_of_size(
    rows: &[CodingVector],
    k: usize,
    from: usize,
    pick: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if pick.len() == k {
        return f(pick);
    }
    for r in from..rows.len() {
        if rows.len() - r < k - pick.len() {
            break;
        }
        pick.push(r);
        if subsets_of_size(rows, k, r + 1, pick, f) {
            return true;
        }
        pick.pop();
    }
    false
}

/// Maximum reported welfare over sparse matrices, by branch and bound on
/// the candidate rows. Clients may share wants.
pub fn optimal_multicast_welfare(bids: &Bids, mode: DecodeMode, limits: &Limits) -> Result<(CodingMatrix, i64)> {
    let rows = candidate_rows(bids, mode);
    check_size(bids, mode, rows.len(), limits)?;
    let mut best = (CodingMatrix::default(), 0i64);
    let mut chosen = Vec::new();
    bnb(bids, mode, &rows, 0, &mut chosen, &mut best);
    Ok(best)
}

fn bnb(
    bids: &Bids,
    mode: DecodeMode,
    rows: &[CodingVector],
    k: usize,
    chosen: &mut Vec<usize>,
    best: &mut (CodingMatrix, i64),
) {
    let cost = bids.unit * chosen.len() as i64;
    let with_rest = CodingMatrix::new(chosen.iter().copied().chain(k..rows.len()).map(|r| rows[r].clone()).collect());
    let reach: i64 = (0..bids.n()).filter(|&i| bids.recovers(&with_rest, mode, i)).map(|i| bids.values[i]).sum();
    if reach - cost <= best.1 && !(chosen.is_empty() && k == 0) {
        return;
    }
    if k == rows.len() {
        let m = CodingMatrix::new(chosen.iter().map(|&r| rows[r].clone()).collect());
        let w = bids.welfare(&m, mode);
        if w > best.1 || (w == best.1 && m.eta() < best.0.eta()) {
            *best = (m, w);
        }
        return;
    }
    chosen.push(k);
    bnb(bids, mode, rows, k + 1, chosen, best);
    chosen.pop();
    bnb(bids, mode, rows, k + 1, chosen, best);
}
