//! Small hand-checked instances used by tests, docs and the CLI.

use super::{chunks, ChunkId, Client, Instance, Valuation};

fn build(values: &[&str], sides: &[&[usize]]) -> Instance {
    Instance {
        num_chunks: values.len(),
        clients: values
            .iter()
            .zip(sides)
            .enumerate()
            .map(|(i, (v, h))| Client {
                wants: ChunkId(i),
                side_info: chunks(h.iter().copied()),
                valuation: Valuation::parse_decimal(v).expect("literal"),
            })
            .collect(),
    }
}

/// Four clients; client `i` wants `d_i`. Clients 0, 1, 2 form a directed
/// triangle and clients 2 and 3 are mutually useful.
///
/// Values `(0.2, 0.9, 0.5, 0.6)`.
pub fn triangle_with_pendant() -> Instance {
    build(&["0.2", "0.9", "0.5", "0.6"], &[&[2], &[0], &[1, 3], &[2]])
}

/// Same graph as [`triangle_with_pendant`] with client 0 valued at 0.8.
pub fn triangle_with_pendant_heavy() -> Instance {
    build(&["0.8", "0.9", "0.5", "0.6"], &[&[2], &[0], &[1, 3], &[2]])
}

/// A chain of mutual pairs 0-1, 1-2, 2-3 with values `(0.55, 0.6, 0.6, 0.55)`.
///
/// Greedy cycle packing serves only 1 and 2; client 0 can overbid to split
/// the chain into two pairs.
pub fn mutual_chain() -> Instance {
    build(&["0.55", "0.6", "0.6", "0.55"], &[&[1], &[0, 2], &[1, 3], &[2]])
}
