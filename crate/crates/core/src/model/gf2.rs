use serde::{Deserialize, Serialize};

use super::{ChunkId, ChunkSet, DecodeMode};
use crate::{Error, Result};

/// One transmission: the XOR of the chunks in `support`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChunkSet", into = "ChunkSet")]
pub struct CodingVector {
    support: ChunkSet,
}

impl CodingVector {
    pub fn new(support: ChunkSet) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Precondition("coding vector with empty support".into()));
        }
        Ok(CodingVector { support })
    }

    pub fn uncoded(c: ChunkId) -> Self {
        CodingVector { support: [c].into() }
    }

    /// `a + b`; panics if `a == b`.
    pub fn pair(a: ChunkId, b: ChunkId) -> Self {
        assert_ne!(a, b, "pair of identical chunks");
        CodingVector { support: [a, b].into() }
    }

    pub fn support(&self) -> &ChunkSet {
        &self.support
    }

    pub fn is_sparse(&self) -> bool {
        self.support.len() <= 2
    }

    pub fn contains(&self, c: ChunkId) -> bool {
        self.support.contains(&c)
    }
}

impl TryFrom<ChunkSet> for CodingVector {
    type Error = Error;
    fn try_from(s: ChunkSet) -> Result<Self> {
        CodingVector::new(s)
    }
}

impl From<CodingVector> for ChunkSet {
    fn from(v: CodingVector) -> Self {
        v.support
    }
}

impl std::fmt::Display for CodingVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.support.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join("+"))
    }
}

/// Ordered list of transmissions; `eta()` is the transmission count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CodingMatrix {
    pub rows: Vec<CodingVector>,
}

impl CodingMatrix {
    pub fn new(rows: Vec<CodingVector>) -> Self {
        CodingMatrix { rows }
    }

    pub fn eta(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_sparse(&self) -> bool {
        self.rows.iter().all(CodingVector::is_sparse)
    }

    pub fn push(&mut self, row: CodingVector) {
        self.rows.push(row);
    }
}

impl std::fmt::Display for CodingMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(width: usize) -> Self {
        Bits(vec![0; width.div_ceil(64).max(1)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }
    fn xor_assign(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }
    fn lowest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

fn check_pre(side: &ChunkSet, want: ChunkId) -> Result<()> {
    if side.contains(&want) {
        return Err(Error::Precondition(format!("wanted chunk {want} is already in side information")));
    }
    Ok(())
}

/// True iff `want` lies in the GF(2) span of the rows of `g` and the unit
/// vectors of `side`.
pub fn can_decode_general(side: &ChunkSet, g: &CodingMatrix, want: ChunkId) -> Result<bool> {
    check_pre(side, want)?;
    Ok(decodes_general(side, g, want))
}

/// True iff a single row of `g` yields `want` after cancelling side chunks.
pub fn can_decode_instant(side: &ChunkSet, g: &CodingMatrix, want: ChunkId) -> Result<bool> {
    check_pre(side, want)?;
    Ok(decodes_instant(side, g, want))
}

pub fn can_decode(mode: DecodeMode, side: &ChunkSet, g: &CodingMatrix, want: ChunkId) -> Result<bool> {
    check_pre(side, want)?;
    Ok(decodes(mode, side, g, want))
}

pub(crate) fn decodes(mode: DecodeMode, side: &ChunkSet, g: &CodingMatrix, want: ChunkId) -> bool {
    match mode {
        DecodeMode::Instant => decodes_instant(side, g, want),
        DecodeMode::General => decodes_general(side, g, want),
    }
}

fn decodes_instant(side: &ChunkSet, g: &CodingMatrix, want: ChunkId) -> bool {
    g.rows
        .iter()
        .any(|r| r.contains(want) && r.support.iter().all(|c| *c == want || side.contains(c)))
}

fn decodes_general(side: &ChunkSet, g: &CodingMatrix, want: ChunkId) -> bool {
    // Side chunks are known, so reducing modulo their unit vectors just
    // clears those coordinates.
    let width = g
        .rows
        .iter()
        .filter_map(|r| r.support.iter().next_back())
        .map(|c| c.0 + 1)
        .max()
        .unwrap_or(0)
        .max(want.0 + 1);
    let mut basis: Vec<(usize, Bits)> = Vec::new();
    for r in &g.rows {
        let mut b = Bits::zeros(width);
        for c in r.support.iter().filter(|c| !side.contains(c)) {
            b.set(c.0);
        }
        reduce(&basis, &mut b);
        if let Some(p) = b.lowest() {
            basis.push((p, b));
        }
    }
    let mut t = Bits::zeros(width);
    t.set(want.0);
    reduce(&basis, &mut t);
    t.lowest().is_none()
}

fn reduce(basis: &[(usize, Bits)], b: &mut Bits) {
    for (p, row) in basis {
        if b.get(*p) {
            b.xor_assign(row);
        }
    }
}
