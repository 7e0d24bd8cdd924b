use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{guard, Limits};
use crate::mechanism::{threshold_of, Bids, CodingScheme, MechanismId, MechanismOptions};
use crate::model::io::instance_to_json;
use crate::model::{ChunkSet, Instance, Scenario, UNIT};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub value: i64,
    pub side_info: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub client: usize,
    pub deviation: Deviation,
    pub truthful_utility: i64,
    pub deviation_utility: i64,
    pub gain: i64,
}

/// A failed check of one of the four sufficient conditions for
/// truthfulness: (1) recovery is a step function of the bid, (2) the
/// payment equals the threshold, (3) reporting more side information never
/// raises the threshold, (4) hidden-side-information recovery implies a
/// zero threshold under the full report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionFailure {
    pub condition: u8,
    pub client: usize,
    pub side_info: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// SHA-256 of the instance in file format.
    pub instance_digest: String,
    pub mechanism: MechanismId,
    /// Base grid; each client's sweep adds 0, one unit, its own value and
    /// every threshold ±1.
    pub grid: Vec<i64>,
    pub deviations_tested: usize,
    pub violations: Vec<Violation>,
    /// Threshold of each client under truthful reports.
    pub thresholds: Vec<Option<i64>>,
    pub condition_failures: Vec<ConditionFailure>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.condition_failures.is_empty()
    }
}

struct Point {
    value: i64,
    served: bool,
    served_true: bool,
    payment: i64,
    utility: i64,
}

struct ClientAudit {
    tested: usize,
    violations: Vec<Violation>,
    threshold: Option<i64>,
    failures: Vec<ConditionFailure>,
}

fn subsets(h: &ChunkSet) -> Vec<ChunkSet> {
    let items: Vec<_> = h.iter().copied().collect();
    (0..1usize << items.len())
        .map(|m| items.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, c)| *c).collect())
        .collect()
}

fn ids(s: &ChunkSet) -> Vec<usize> {
    s.iter().map(|c| c.0).collect()
}

/// Sweeps every unilateral deviation `(v̂_i, Ĥ_i ⊆ H_i)` over the grid with
/// the other clients truthful, records any utility gain over the truthful
/// report, and checks the four sufficient conditions explicitly.
pub fn truthfulness_audit(
    inst: &Instance,
    id: MechanismId,
    grid: &[i64],
    opts: &MechanismOptions,
    limits: &Limits,
) -> Result<AuditReport> {
    guard("audit clients", limits.audit_clients, inst.n())?;
    inst.check(Scenario::Unicast)?;
    if let Some(v) = grid.iter().find(|v| **v < 0) {
        return Err(Error::Precondition(format!("negative grid value {v}")));
    }
    let scheme = id.scheme(opts);
    let truth = Bids::truthful(inst);
    let per_client = (0..inst.n())
        .into_par_iter()
        .map(|i| audit_client(inst, &truth, i, id, scheme.as_ref(), grid, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let mut report = AuditReport {
        instance_digest: hex_digest(&instance_to_json(inst, None)),
        mechanism: id,
        grid,
        deviations_tested: 0,
        violations: Vec::new(),
        thresholds: Vec::new(),
        condition_failures: Vec::new(),
    };
    for c in per_client {
        report.deviations_tested += c.tested;
        report.violations.extend(c.violations);
        report.thresholds.push(c.threshold);
        report.condition_failures.extend(c.failures);
    }
    Ok(report)
}

pub(crate) fn hex_digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn audit_client(
    inst: &Instance,
    truth: &Bids,
    i: usize,
    id: MechanismId,
    scheme: &dyn CodingScheme,
    base: &[i64],
    opts: &MechanismOptions,
) -> Result<ClientAudit> {
    let mode = id.native_mode();
    let true_side = &inst.clients[i].side_info;
    let v_i = inst.clients[i].valuation.micro();
    let sides = subsets(true_side);
    let mut failures = Vec::new();

    let mut thresholds = Vec::with_capacity(sides.len());
    for s in &sides {
        match threshold_of(scheme, &truth.with_side(i, s.clone()), i) {
            Ok(t) => thresholds.push(Some(t)),
            Err(Error::NonMonotone { detail, .. }) => {
                failures.push(ConditionFailure { condition: 1, client: i, side_info: ids(s), detail });
                thresholds.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let full = sides.len() - 1;
    let t_full = thresholds[full];

    let mut grid: Vec<i64> = base.to_vec();
    grid.extend([0, UNIT, UNIT + 1, v_i]);
    for t in thresholds.iter().flatten() {
        grid.extend([t - 1, *t, t + 1]);
    }
    grid.retain(|v| *v >= 0);
    grid.sort_unstable();
    grid.dedup();

    let eval = |side: &ChunkSet, value: i64| -> Result<Point> {
        let b = truth.with_side(i, side.clone()).with_value(i, value);
        let g = scheme.code(&b)?.matrix;
        let served = b.recovers(&g, mode, i);
        let served_true = truth.recovers(&g, mode, i);
        let payment = if served { id.payment(&b, i, opts)? } else { 0 };
        let utility = if served_true { v_i - payment } else { 0 };
        Ok(Point { value, served, served_true, payment, utility })
    };

    let honest = eval(true_side, v_i)?;
    let mut violations = Vec::new();
    let mut tested = 0;
    let mut hidden = false;
    for (s, t) in sides.iter().zip(&thresholds) {
        let points = grid.iter().map(|&v| eval(s, v)).collect::<Result<Vec<_>>>()?;
        tested += points.len();
        for p in &points {
            if p.utility > honest.utility {
                violations.push(Violation {
                    client: i,
                    deviation: Deviation { value: p.value, side_info: ids(s) },
                    truthful_utility: honest.utility,
                    deviation_utility: p.utility,
                    gain: p.utility - honest.utility,
                });
            }
            if p.served_true && !p.served {
                hidden = true;
            }
        }
        let fail = |c: u8, detail: String| ConditionFailure { condition: c, client: i, side_info: ids(s), detail };

        if let Some(k) = points.windows(2).position(|w| w[0].served && !w[1].served) {
            failures.push(fail(1, format!("served at {} but not at {}", points[k].value, points[k + 1].value)));
        }
        if let Some(p) = points.iter().find(|p| p.value > UNIT && !p.served) {
            failures.push(fail(1, format!("not served at {} above one unit", p.value)));
        }

        if let Some(t) = *t {
            for p in &points {
                if p.value > t && !p.served {
                    failures.push(fail(2, format!("not served at {} above threshold {t}", p.value)));
                } else if p.value < t && p.served {
                    failures.push(fail(2, format!("served at {} below threshold {t}", p.value)));
                }
                if p.served && p.payment != t {
                    failures.push(fail(2, format!("charged {} at bid {} but threshold is {t}", p.payment, p.value)));
                }
                if !p.served && p.payment != 0 {
                    failures.push(fail(2, format!("charged {} without service at bid {}", p.payment, p.value)));
                }
            }
            if let Some(tf) = t_full {
                if tf > t {
                    failures.push(fail(3, format!("full side information threshold {tf} exceeds {t}")));
                }
            }
        }
    }
    if hidden && t_full != Some(0) {
        failures.push(ConditionFailure {
            condition: 4,
            client: i,
            side_info: ids(true_side),
            detail: format!("hidden recovery occurs but full-report threshold is {t_full:?}"),
        });
    }
    Ok(ClientAudit { tested, violations, threshold: t_full, failures })
}
