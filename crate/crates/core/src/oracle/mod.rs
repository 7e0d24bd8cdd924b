//! Exhaustive ground-truth solvers, instance generators and the
//! truthfulness audit. Everything here is exponential and size-guarded.

mod audit;
mod cycles;
mod generators;
mod multicast;
mod packing;

pub use audit::{truthfulness_audit, AuditReport, ConditionFailure, Deviation, Violation};
pub use cycles::{enumerate_simple_cycles, max_disjoint_cycles};
pub use generators::{
    gen_from_cycle_packing, gen_from_independent_set, gen_random_instance, min_vertex_cover, parse_edge_list,
    EdgeList, Expected, Provenance, ReductionInstance,
};
pub use multicast::{candidate_rows, min_transmissions_all_satisfied, optimal_multicast_welfare};
pub use packing::{optimal_cycle_packing, optimal_sparse_welfare, OraclePacking, Packing, PackingObjective};

use crate::{Error, Result};

/// Size limits for the exhaustive routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Vertices for cycle enumeration and packing.
    pub cycle_vertices: usize,
    /// Clients for truthfulness audits.
    pub audit_clients: usize,
    /// Candidate rows for general-decoding multicast search.
    pub candidate_rows: usize,
    /// Clients for instant-decoding multicast search.
    pub multicast_clients: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cycle_vertices: 10, audit_clients: 6, candidate_rows: 18, multicast_clients: 40 }
    }
}

pub(crate) fn guard(guard: &'static str, limit: usize, actual: usize) -> Result<()> {
    if actual > limit {
        Err(Error::SizeGuard { guard, limit, actual })
    } else {
        Ok(())
    }
}
