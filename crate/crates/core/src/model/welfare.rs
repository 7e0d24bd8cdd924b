use serde::{Deserialize, Serialize};

use super::gf2::decodes;
use super::{ChunkId, ChunkSet, CodingMatrix, Instance, ReportProfile, Valuation, UNIT};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecodeMode {
    /// One received row combined with side information.
    Instant,
    /// Any combination of received rows and side information.
    General,
}

impl std::str::FromStr for DecodeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "instant" => Ok(DecodeMode::Instant),
            "general" => Ok(DecodeMode::General),
            _ => Err(Error::Parse(format!("unknown decoding mode `{s}` (expected instant or general)"))),
        }
    }
}

impl std::fmt::Display for DecodeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DecodeMode::Instant => "instant",
            DecodeMode::General => "general",
        })
    }
}

/// Per-client recovery indicators; clients whose want sits in their own
/// side set count as not recovered.
pub fn recovery(sides: &[ChunkSet], wants: &[ChunkId], g: &CodingMatrix, mode: DecodeMode) -> Vec<bool> {
    sides
        .iter()
        .zip(wants)
        .map(|(h, w)| !h.contains(w) && decodes(mode, h, g, *w))
        .collect()
}

/// `Σ v_i·1_i − unit·η(G)` with values and cost in the same integer scale.
pub fn welfare_scaled(
    values: &[i64],
    sides: &[ChunkSet],
    wants: &[ChunkId],
    g: &CodingMatrix,
    mode: DecodeMode,
    unit: i64,
) -> i64 {
    let got: i64 = recovery(sides, wants, g, mode)
        .iter()
        .zip(values)
        .filter(|(r, _)| **r)
        .map(|(_, v)| *v)
        .sum();
    got - unit * g.eta() as i64
}

/// Social welfare in micro-units. Serves both true and reported welfare,
/// depending on which values and side sets are passed.
pub fn welfare(values: &[Valuation], sides: &[ChunkSet], wants: &[ChunkId], g: &CodingMatrix, mode: DecodeMode) -> i64 {
    let v: Vec<i64> = values.iter().map(|v| v.micro()).collect();
    welfare_scaled(&v, sides, wants, g, mode, UNIT)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanismOutcome {
    pub matrix: CodingMatrix,
    /// Recovery under true side information.
    pub recovered: Vec<bool>,
    /// Recovery under reported side information; decides who is charged.
    pub recovered_reported: Vec<bool>,
    pub payments: Vec<Valuation>,
    /// True social welfare.
    pub welfare: i64,
    /// Welfare evaluated on the reports.
    pub reported_welfare: i64,
    pub utilities: Vec<i64>,
}

/// Assembles the outcome of broadcasting `g` and charging `payments`.
pub fn outcome(
    inst: &Instance,
    reports: &ReportProfile,
    g: &CodingMatrix,
    payments: &[Valuation],
    mode: DecodeMode,
) -> Result<MechanismOutcome> {
    let n = inst.n();
    if reports.reports.len() != n || payments.len() != n {
        return Err(Error::Precondition(format!(
            "length mismatch: {n} clients, {} reports, {} payments",
            reports.reports.len(),
            payments.len()
        )));
    }
    let wants = inst.wants();
    let recovered = recovery(&inst.sides(), &wants, g, mode);
    let rsides = reports.sides();
    let recovered_reported = recovery(&rsides, &wants, g, mode);
    for (i, (p, r)) in payments.iter().zip(&recovered_reported).enumerate() {
        if !r && p.0 != 0 {
            return Err(Error::Precondition(format!("client {i} is charged without being served")));
        }
    }
    let utilities = (0..n)
        .map(|i| {
            if recovered[i] {
                // A client served only thanks to hidden side chunks is never
                // charged.
                let p = if recovered_reported[i] { payments[i].micro() } else { 0 };
                inst.clients[i].valuation.micro() - p
            } else {
                0
            }
        })
        .collect();
    Ok(MechanismOutcome {
        matrix: g.clone(),
        welfare: welfare(&inst.values(), &inst.sides(), &wants, g, mode),
        reported_welfare: welfare(&reports.values(), &rsides, &wants, g, mode),
        recovered,
        recovered_reported,
        payments: payments.to_vec(),
        utilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{chunks, samples, CodingVector};

    fn rows(r: &[&[usize]]) -> CodingMatrix {
        CodingMatrix::new(r.iter().map(|x| CodingVector::new(chunks(x.iter().copied())).unwrap()).collect())
    }

    #[test]
    fn three_row_broadcast_welfare() {
        let inst = samples::triangle_with_pendant();
        let g = rows(&[&[0, 1], &[1, 2], &[3]]);
        assert_eq!(welfare(&inst.values(), &inst.sides(), &inst.wants(), &g, DecodeMode::General), -800_000);
    }

    #[test]
    fn single_pair_welfare() {
        let inst = samples::triangle_with_pendant();
        let g = rows(&[&[2, 3]]);
        assert_eq!(welfare(&inst.values(), &inst.sides(), &inst.wants(), &g, DecodeMode::General), 100_000);
    }

    #[test]
    fn empty_matrix_has_zero_welfare() {
        let inst = samples::mutual_chain();
        let g = CodingMatrix::default();
        for mode in [DecodeMode::Instant, DecodeMode::General] {
            assert_eq!(welfare(&inst.values(), &inst.sides(), &inst.wants(), &g, mode), 0);
        }
    }

    #[test]
    fn outcome_charges_and_utilities() {
        let inst = samples::mutual_chain();
        let mut reports = inst.truthful_reports();
        reports.reports[0].value = Valuation(700_000);
        let g = rows(&[&[0, 1], &[2, 3]]);
        let pay = [450_000, 0, 0, 0].map(Valuation);
        let o = outcome(&inst, &reports, &g, &pay, DecodeMode::Instant).unwrap();
        assert_eq!(o.utilities[0], 100_000);
        assert!(o.recovered.iter().all(|r| *r));
    }

    #[test]
    fn unserved_client_gets_nothing() {
        let inst = samples::mutual_chain();
        let g = rows(&[&[1, 2]]);
        let o = outcome(&inst, &inst.truthful_reports(), &g, &[Valuation::ZERO; 4], DecodeMode::Instant).unwrap();
        assert_eq!(o.utilities[0], 0);
        assert!(!o.recovered[0]);
        let bad = [Valuation(1), Valuation::ZERO, Valuation::ZERO, Valuation::ZERO];
        assert!(outcome(&inst, &inst.truthful_reports(), &g, &bad, DecodeMode::Instant).is_err());
        assert!(outcome(&inst, &inst.truthful_reports(), &g, &bad[..2], DecodeMode::Instant).is_err());
    }
}
