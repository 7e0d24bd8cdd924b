//! Instances, report profiles and valuations.

pub(crate) mod gf2;
pub mod io;
pub mod samples;
pub(crate) mod welfare;

pub use gf2::{can_decode, can_decode_general, can_decode_instant, CodingMatrix, CodingVector};
pub use welfare::{outcome, recovery, welfare, DecodeMode, MechanismOutcome};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Cost of a single transmission, in micro-units.
pub const UNIT: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChunkId(pub usize);

impl fmt::Display for ChunkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

pub type ChunkSet = BTreeSet<ChunkId>;

/// Builds a chunk set from raw indices.
pub fn chunks<I: IntoIterator<Item = usize>>(ids: I) -> ChunkSet {
    ids.into_iter().map(ChunkId).collect()
}

/// A nonnegative valuation in micro-units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(pub u64);

impl Valuation {
    pub const ZERO: Valuation = Valuation(0);
    pub const ONE: Valuation = Valuation(UNIT as u64);

    pub fn micro(self) -> i64 {
        self.0 as i64
    }

    pub fn from_micro(micro: i64) -> Result<Self> {
        if micro < 0 {
            return Err(Error::Precondition(format!("negative valuation {micro}")));
        }
        Ok(Valuation(micro as u64))
    }

    /// Parses a nonnegative decimal such as `"0.55"` exactly.
    pub fn parse_decimal(s: &str) -> Result<Self> {
        let micro = parse_micro(s)?;
        Self::from_micro(micro).map_err(|_| Error::Parse(format!("negative valuation `{s}`")))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_micro(self.micro()))
    }
}

/// Parses a signed decimal string into micro-units, rejecting more than six
/// fractional digits.
pub fn parse_micro(s: &str) -> Result<i64> {
    let bad = || Error::Parse(format!("invalid decimal `{s}`"));
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if frac.len() > 6 {
        return Err(Error::Parse(format!(
            "`{s}` has {} fractional digits; at most 6 are representable",
            frac.len()
        )));
    }
    let whole: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let mut f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    for _ in frac.len()..6 {
        f *= 10;
    }
    let v = whole.checked_mul(UNIT).and_then(|w| w.checked_add(f)).ok_or_else(bad)?;
    Ok(if neg { -v } else { v })
}

/// Formats micro-units as a decimal with exactly six fractional digits.
pub fn format_micro(micro: i64) -> String {
    let sign = if micro < 0 { "-" } else { "" };
    let a = micro.unsigned_abs();
    format!("{sign}{}.{:06}", a / UNIT as u64, a % UNIT as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Client {
    pub wants: ChunkId,
    pub side_info: ChunkSet,
    pub valuation: Valuation,
}

/// Whether clients may share a wanted chunk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Unicast,
    Multicast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub num_chunks: usize,
    pub clients: Vec<Client>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.clients.len()
    }

    pub fn wants(&self) -> Vec<ChunkId> {
        self.clients.iter().map(|c| c.wants).collect()
    }

    pub fn values(&self) -> Vec<Valuation> {
        self.clients.iter().map(|c| c.valuation).collect()
    }

    pub fn sides(&self) -> Vec<ChunkSet> {
        self.clients.iter().map(|c| c.side_info.clone()).collect()
    }

    pub fn truthful_reports(&self) -> ReportProfile {
        ReportProfile {
            reports: self
                .clients
                .iter()
                .map(|c| Report { value: c.valuation, side_info: c.side_info.clone() })
                .collect(),
        }
    }

    /// Fails with every violated invariant.
    pub fn check(&self, scenario: Scenario) -> Result<()> {
        let v = validate_instance(self, scenario);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}

/// Returns every violated instance invariant; empty means valid.
pub fn validate_instance(inst: &Instance, scenario: Scenario) -> Vec<String> {
    let m = inst.num_chunks;
    let mut out = Vec::new();
    for (i, c) in inst.clients.iter().enumerate() {
        if c.wants.0 >= m {
            out.push(format!("client {i}: wanted chunk {} out of range [0, {m})", c.wants.0));
        }
        if c.side_info.contains(&c.wants) {
            out.push(format!("client {i}: wanted chunk {} is in its side information", c.wants.0));
        }
        if let Some(bad) = c.side_info.iter().find(|d| d.0 >= m) {
            out.push(format!("client {i}: side chunk {} out of range [0, {m})", bad.0));
        }
    }
    if scenario == Scenario::Unicast {
        if inst.n() != m {
            out.push(format!("unicast requires n = m, got n = {} and m = {m}", inst.n()));
        }
        let mut seen = BTreeSet::new();
        for (i, c) in inst.clients.iter().enumerate() {
            if !seen.insert(c.wants) {
                out.push(format!("client {i}: chunk {} is wanted by another client", c.wants.0));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub value: Valuation,
    pub side_info: ChunkSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportProfile {
    pub reports: Vec<Report>,
}

impl ReportProfile {
    pub fn values(&self) -> Vec<Valuation> {
        self.reports.iter().map(|r| r.value).collect()
    }

    pub fn sides(&self) -> Vec<ChunkSet> {
        self.reports.iter().map(|r| r.side_info.clone()).collect()
    }

    /// Returns violations of this profile against `inst`. With
    /// `require_subset`, every reported side set must be a subset of the
    /// true one.
    pub fn validate(&self, inst: &Instance, require_subset: bool) -> Vec<String> {
        let mut out = Vec::new();
        if self.reports.len() != inst.n() {
            out.push(format!("{} reports for {} clients", self.reports.len(), inst.n()));
            return out;
        }
        for (i, (r, c)) in self.reports.iter().zip(&inst.clients).enumerate() {
            if let Some(bad) = r.side_info.iter().find(|d| d.0 >= inst.num_chunks) {
                out.push(format!("report {i}: side chunk {} out of range", bad.0));
            }
            if r.side_info.contains(&c.wants) {
                out.push(format!("report {i}: reports its wanted chunk as side information"));
            }
            if require_subset && !r.side_info.is_subset(&c.side_info) {
                out.push(format!("report {i}: reported side information is not a subset of the true one"));
            }
        }
        out
    }
}
