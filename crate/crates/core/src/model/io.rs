//! JSON instance files.
//!
//! ```json
//! {"m": 2, "clients": [{"wants": 0, "has": [1], "v": "0.5"},
//!                      {"wants": 1, "has": [0], "v": "0.7"}]}
//! ```
//!
//! An optional `"reports"` array with the same shape carries reported
//! values and side sets; `wants` in a report must match the client's.

use serde::{Deserialize, Serialize};

use super::{chunks, ChunkId, Client, Instance, Report, ReportProfile, Valuation};
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileEntry {
    wants: usize,
    has: Vec<usize>,
    v: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    m: usize,
    clients: Vec<FileEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reports: Option<Vec<FileEntry>>,
}

fn entry(c: &ChunkId, has: &super::ChunkSet, v: Valuation) -> FileEntry {
    FileEntry { wants: c.0, has: has.iter().map(|d| d.0).collect(), v: v.to_string() }
}

/// Parses an instance and its optional report profile.
pub fn parse_instance(text: &str) -> Result<(Instance, Option<ReportProfile>)> {
    let f: InstanceFile = serde_json::from_str(text)?;
    let clients = f
        .clients
        .iter()
        .map(|e| {
            Ok(Client {
                wants: ChunkId(e.wants),
                side_info: chunks(e.has.iter().copied()),
                valuation: Valuation::parse_decimal(&e.v)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let inst = Instance { num_chunks: f.m, clients };
    let reports = match f.reports {
        None => None,
        Some(rs) => {
            if rs.len() != inst.n() {
                return Err(Error::Validation(vec![format!(
                    "{} reports for {} clients",
                    rs.len(),
                    inst.n()
                )]));
            }
            let mut out = Vec::with_capacity(rs.len());
            for (i, (r, c)) in rs.iter().zip(&inst.clients).enumerate() {
                if r.wants != c.wants.0 {
                    return Err(Error::Validation(vec![format!(
                        "report {i} names wanted chunk {} but client wants {}",
                        r.wants, c.wants.0
                    )]));
                }
                out.push(Report { value: Valuation::parse_decimal(&r.v)?, side_info: chunks(r.has.iter().copied()) });
            }
            Some(ReportProfile { reports: out })
        }
    };
    Ok((inst, reports))
}

pub fn read_instance(path: &std::path::Path) -> Result<(Instance, Option<ReportProfile>)> {
    parse_instance(&std::fs::read_to_string(path)?)
}

/// Serializes in the file format, pretty-printed with a trailing newline.
pub fn instance_to_json(inst: &Instance, reports: Option<&ReportProfile>) -> String {
    let f = InstanceFile {
        m: inst.num_chunks,
        clients: inst.clients.iter().map(|c| entry(&c.wants, &c.side_info, c.valuation)).collect(),
        reports: reports.map(|rp| {
            rp.reports
                .iter()
                .zip(&inst.clients)
                .map(|(r, c)| entry(&c.wants, &r.side_info, r.value))
                .collect()
        }),
    };
    let mut s = serde_json::to_string_pretty(&f).expect("serializable");
    s.push('\n');
    s
}
