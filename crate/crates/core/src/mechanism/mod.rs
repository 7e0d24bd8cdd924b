//! Coding schemes and the payment rules that make them truthful.
//!
//! | id             | coding                               | payment                    |
//! |----------------|--------------------------------------|----------------------------|
//! | `vcg_general`  | exhaustive cycle packing             | externality (VCG)          |
//! | `vcg_instant`  | exhaustive packing of mutual pairs   | externality (VCG)          |
//! | `alg1_instant` | maximum-weight matching              | externality (VCG)          |
//! | `alg2_maxc`    | greedy min-cost cycles               | per-round cost gaps        |
//! | `sqrtn`        | greedy max `γ/√|C|` cycles           | exact recovery threshold   |
//! | `alg2_vcg`     | greedy min-cost cycles               | externality (not truthful) |

mod payments;
mod schemes;

pub use payments::{alg3_payment, externality_payment, sqrtn_payment, threshold_of, vcg_payment};
pub use schemes::{alg1_coding, alg2_coding, cycle_rows, sqrtn_coding, Alg1, Alg2, SqrtN};

use serde::{Deserialize, Serialize};

use crate::graph::{Cycle, DependencyGraph};
use crate::model::{
    outcome, ChunkId, ChunkSet, CodingMatrix, DecodeMode, Instance, MechanismOutcome, ReportProfile, Valuation,
    UNIT,
};
use crate::oracle::{Limits, OraclePacking, PackingObjective};
use crate::{Error, Result};

/// Reports in a fixed integer scale where one transmission costs `unit`.
///
/// Schemes only compare values against each other and against `unit`, so
/// scaling values and `unit` together never changes their output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bids {
    pub wants: Vec<ChunkId>,
    pub values: Vec<i64>,
    pub sides: Vec<ChunkSet>,
    pub unit: i64,
}

impl Bids {
    pub fn new(wants: Vec<ChunkId>, reports: &ReportProfile) -> Self {
        Bids { wants, values: reports.values().iter().map(|v| v.micro()).collect(), sides: reports.sides(), unit: UNIT }
    }

    pub fn truthful(inst: &Instance) -> Self {
        Self::new(inst.wants(), &inst.truthful_reports())
    }

    pub fn n(&self) -> usize {
        self.wants.len()
    }

    pub fn with_value(&self, i: usize, v: i64) -> Self {
        let mut b = self.clone();
        b.values[i] = v;
        b
    }

    pub fn with_side(&self, i: usize, side: ChunkSet) -> Self {
        let mut b = self.clone();
        b.sides[i] = side;
        b
    }

    /// The same bids on a grid twice as fine.
    pub fn refined(&self) -> Self {
        let mut b = self.clone();
        b.values.iter_mut().for_each(|v| *v *= 2);
        b.unit *= 2;
        b
    }

    pub fn graph(&self) -> DependencyGraph {
        DependencyGraph::build(&self.wants, &self.values, &self.sides, self.unit)
    }

    pub fn welfare(&self, g: &CodingMatrix, mode: DecodeMode) -> i64 {
        crate::model::welfare::welfare_scaled(&self.values, &self.sides, &self.wants, g, mode, self.unit)
    }

    pub fn recovers(&self, g: &CodingMatrix, mode: DecodeMode, i: usize) -> bool {
        !self.sides[i].contains(&self.wants[i]) && crate::model::gf2::decodes(mode, &self.sides[i], g, self.wants[i])
    }

    pub fn check_unicast(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        let mut bad = Vec::new();
        for (i, w) in self.wants.iter().enumerate() {
            if !seen.insert(*w) {
                bad.push(format!("client {i}: chunk {} is wanted by another client", w.0));
            }
            if self.sides[i].contains(w) {
                bad.push(format!("client {i}: reports its wanted chunk as side information"));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(bad))
        }
    }
}

/// Output of a coding scheme.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Coding {
    pub matrix: CodingMatrix,
    /// Cycles the matrix encodes along, in selection order.
    pub cycles: Vec<Cycle>,
}

pub trait CodingScheme: Send + Sync {
    fn name(&self) -> &'static str;
    fn decode_mode(&self) -> DecodeMode;
    /// Whether the scheme maximizes reported welfare exactly over its
    /// matrix set, which externality pricing requires.
    fn is_optimal(&self) -> bool;
    fn code(&self, bids: &Bids) -> Result<Coding>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MechanismId {
    VcgGeneral,
    VcgInstant,
    Alg1Instant,
    Alg2Maxc,
    Sqrtn,
    Alg2Vcg,
}

impl MechanismId {
    pub const ALL: [MechanismId; 6] = [
        MechanismId::VcgGeneral,
        MechanismId::VcgInstant,
        MechanismId::Alg1Instant,
        MechanismId::Alg2Maxc,
        MechanismId::Sqrtn,
        MechanismId::Alg2Vcg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MechanismId::VcgGeneral => "vcg_general",
            MechanismId::VcgInstant => "vcg_instant",
            MechanismId::Alg1Instant => "alg1_instant",
            MechanismId::Alg2Maxc => "alg2_maxc",
            MechanismId::Sqrtn => "sqrtn",
            MechanismId::Alg2Vcg => "alg2_vcg",
        }
    }

    /// `alg2_vcg` pairs greedy coding with externality pricing and exists
    /// to exhibit a profitable lie.
    pub fn is_truthful(self) -> bool {
        self != MechanismId::Alg2Vcg
    }

    pub fn native_mode(self) -> DecodeMode {
        match self {
            MechanismId::VcgInstant | MechanismId::Alg1Instant => DecodeMode::Instant,
            _ => DecodeMode::General,
        }
    }

    pub fn scheme(self, opts: &MechanismOptions) -> Box<dyn CodingScheme> {
        match self {
            MechanismId::VcgGeneral => Box::new(opts.oracle(PackingObjective::Weight)),
            MechanismId::VcgInstant => Box::new(opts.oracle(PackingObjective::TwoCyclesOnly)),
            MechanismId::Alg1Instant => Box::new(Alg1),
            MechanismId::Alg2Maxc | MechanismId::Alg2Vcg => Box::new(Alg2),
            MechanismId::Sqrtn => Box::new(SqrtN),
        }
    }

    /// Payment of client `i`, who must be served under its report.
    pub fn payment(self, bids: &Bids, i: usize, opts: &MechanismOptions) -> Result<i64> {
        match self {
            MechanismId::VcgGeneral | MechanismId::VcgInstant | MechanismId::Alg1Instant => {
                vcg_payment(bids, i, self.scheme(opts).as_ref())
            }
            MechanismId::Alg2Maxc => alg3_payment(bids, i),
            MechanismId::Sqrtn => sqrtn_payment(bids, i),
            MechanismId::Alg2Vcg => Ok(externality_payment(bids, i, &Alg2)?.max(0)),
        }
    }
}

impl std::fmt::Display for MechanismId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MechanismId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MechanismId::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = MechanismId::ALL.iter().map(|m| m.as_str()).collect();
            Error::Parse(format!("unknown mechanism `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismOptions {
    /// Largest client count the exhaustive packing schemes accept.
    pub guard_n: usize,
}

impl Default for MechanismOptions {
    fn default() -> Self {
        MechanismOptions { guard_n: 8 }
    }
}

impl MechanismOptions {
    fn oracle(&self, objective: PackingObjective) -> OraclePacking {
        OraclePacking { objective, limits: Limits { cycle_vertices: self.guard_n, ..Limits::default() } }
    }
}

/// Coding, served-under-report indicators and payments on raw bids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BidOutcome {
    pub coding: Coding,
    pub served: Vec<bool>,
    pub payments: Vec<i64>,
}

pub fn run_on_bids(id: MechanismId, bids: &Bids, mode: DecodeMode, opts: &MechanismOptions) -> Result<BidOutcome> {
    let coding = id.scheme(opts).code(bids)?;
    let served: Vec<bool> = (0..bids.n()).map(|i| bids.recovers(&coding.matrix, mode, i)).collect();
    let payments = (0..bids.n())
        .map(|i| if served[i] { id.payment(bids, i, opts) } else { Ok(0) })
        .collect::<Result<Vec<_>>>()?;
    Ok(BidOutcome { coding, served, payments })
}

/// Runs `id` on `reports` and evaluates the outcome in its native mode.
pub fn run_mechanism(
    inst: &Instance,
    reports: &ReportProfile,
    id: MechanismId,
    opts: &MechanismOptions,
) -> Result<MechanismOutcome> {
    run_mechanism_in_mode(inst, reports, id, id.native_mode(), opts)
}

/// As [`run_mechanism`] but decoding (and charging) under `mode`.
pub fn run_mechanism_in_mode(
    inst: &Instance,
    reports: &ReportProfile,
    id: MechanismId,
    mode: DecodeMode,
    opts: &MechanismOptions,
) -> Result<MechanismOutcome> {
    inst.check(crate::model::Scenario::Unicast)?;
    let bad = reports.validate(inst, false);
    if !bad.is_empty() {
        return Err(Error::Validation(bad));
    }
    let bids = Bids::new(inst.wants(), reports);
    let r = run_on_bids(id, &bids, mode, opts)?;
    let pay = r.payments.iter().map(|p| Valuation::from_micro(*p)).collect::<Result<Vec<_>>>()?;
    outcome(inst, reports, &r.coding.matrix, &pay, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::samples;

    #[test]
    fn ids_round_trip() {
        for id in MechanismId::ALL {
            assert_eq!(id.as_str().parse::<MechanismId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.as_str()));
        }
        assert!("alg9".parse::<MechanismId>().is_err());
    }

    #[test]
    fn matching_mechanism_on_the_triangle_with_pendant() {
        let inst = samples::triangle_with_pendant();
        let o = run_mechanism(&inst, &inst.truthful_reports(), MechanismId::Alg1Instant, &Default::default()).unwrap();
        assert_eq!(o.matrix.to_string(), "{d2+d3}");
        assert_eq!(o.payments, [0, 0, 400_000, 500_000].map(Valuation));
        assert_eq!(o.welfare, 100_000);
    }

    #[test]
    fn honest_chain_endpoint_gets_nothing() {
        let inst = samples::mutual_chain();
        let o = run_mechanism(&inst, &inst.truthful_reports(), MechanismId::Alg2Maxc, &Default::default()).unwrap();
        assert_eq!(o.utilities[0], 0);
    }

    #[test]
    fn zero_bids_give_empty_outcomes() {
        let inst = samples::mutual_chain();
        let mut r = inst.truthful_reports();
        r.reports.iter_mut().for_each(|x| x.value = Valuation::ZERO);
        for id in MechanismId::ALL {
            let o = run_mechanism(&inst, &r, id, &Default::default()).unwrap();
            assert!(o.matrix.is_empty(), "{id}");
            assert!(o.payments.iter().all(|p| p.0 == 0), "{id}");
        }
    }

    #[test]
    fn exhaustive_schemes_are_guarded() {
        let inst = crate::oracle::gen_random_instance(9, 2, 1).unwrap();
        let err = run_mechanism(&inst, &inst.truthful_reports(), MechanismId::VcgGeneral, &Default::default());
        assert!(matches!(err, Err(Error::SizeGuard { .. })));
        let opts = MechanismOptions { guard_n: 9 };
        assert!(run_mechanism(&inst, &inst.truthful_reports(), MechanismId::VcgGeneral, &opts).is_ok());
    }

    #[test]
    fn refinement_preserves_codings() {
        for seed in 0..30 {
            let inst = crate::oracle::gen_random_instance(7, 3, seed).unwrap();
            let b = Bids::truthful(&inst);
            let f = b.refined();
            for id in [MechanismId::Alg1Instant, MechanismId::Alg2Maxc, MechanismId::Sqrtn, MechanismId::VcgGeneral] {
                let s = id.scheme(&Default::default());
                assert_eq!(s.code(&b).unwrap(), s.code(&f).unwrap(), "{id} seed {seed}");
            }
        }
    }
}
