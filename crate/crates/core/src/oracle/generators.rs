use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::{max_disjoint_cycles, Limits};
use crate::graph::DependencyGraph;
use crate::model::io::instance_to_json;
use crate::model::{chunks, ChunkId, Client, Instance, Valuation, UNIT};
use crate::{Error, Result};

/// Random unicast instance: `m = n`, client `i` wants chunk `i`, values
/// uniform on `[0, UNIT]`, and `side` distinct other chunks as side
/// information. Deterministic per seed.
pub fn gen_random_instance(n: usize, side: usize, seed: u64) -> Result<Instance> {
    if n == 0 || side > n - 1 {
        return Err(Error::Validation(vec![format!("side size {side} needs at least {} clients, got {n}", side + 1)]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clients = (0..n)
        .map(|i| {
            let valuation = Valuation(rng.gen_range(0..=UNIT as u64));
            let others = sample(&mut rng, n - 1, side);
            let side_info = chunks(others.into_iter().map(|k| if k >= i { k + 1 } else { k }));
            Client { wants: ChunkId(i), side_info, valuation }
        })
        .collect();
    Ok(Instance { num_chunks: n, clients })
}

/// A simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub directed: bool,
}

impl EdgeList {
    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::checked(n, edges.to_vec(), false)
    }

    pub fn directed(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        Self::checked(n, arcs.to_vec(), true)
    }

    fn checked(n: usize, edges: Vec<(usize, usize)>, directed: bool) -> Result<Self> {
        let mut errs = Vec::new();
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                errs.push(format!("edge ({a}, {b}) leaves 0..{n}"));
            }
            if a == b {
                errs.push(format!("self-loop at {a}"));
            }
            let key = if directed { (a, b) } else { (a.min(b), a.max(b)) };
            if !seen.insert(key) {
                errs.push(format!("duplicate edge ({a}, {b})"));
            }
        }
        if errs.is_empty() {
            Ok(EdgeList { n, edges, directed })
        } else {
            Err(Error::Validation(errs))
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }
}

/// Parses `a b` lines. `#` starts a comment; an optional `n K` line fixes
/// the vertex count, otherwise it is one past the largest endpoint.
pub fn parse_edge_list(text: &str, directed: bool) -> Result<EdgeList> {
    let mut n = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("line {}: bad number {s:?}", k + 1)));
        match toks.as_slice() {
            ["n", c] => n = Some(num(c)?),
            [a, b] => edges.push((num(a)?, num(b)?)),
            _ => return Err(Error::Parse(format!("line {}: expected two integers", k + 1))),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0));
    EdgeList::checked(n, edges, directed)
}

/// Minimum vertex cover size by exhaustive search.
pub fn min_vertex_cover(g: &EdgeList) -> usize {
    (0u64..1 << g.n)
        .filter(|m| g.edges.iter().all(|&(a, b)| m >> a & 1 == 1 || m >> b & 1 == 1))
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// `independent_set` or `cycle_packing`.
    pub kind: &'static str,
    pub source: EdgeList,
    /// Exact value of each client as a fraction of one unit.
    pub exact_valuations: Vec<String>,
    /// How fractional values were mapped to micro-units.
    pub rounding: &'static str,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Expected {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opt_is: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opt_vc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_disjoint_cycles: Option<usize>,
    /// Optimal welfare in micro-units under the rounded values.
    pub welfare: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_transmissions: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionInstance {
    #[serde(serialize_with = "as_file")]
    pub instance: Instance,
    pub provenance: Provenance,
    pub expected: Expected,
}

fn as_file<S: Serializer>(inst: &Instance, s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: serde_json::Value = serde_json::from_str(&instance_to_json(inst, None)).map_err(serde::ser::Error::custom)?;
    v.serialize(s)
}

/// Multicast instance whose welfare optimum encodes a maximum independent
/// set of `g`. Chunk `x` belongs to vertex `x`, chunk `n + k` to edge `k`.
/// Each edge `(x, y)` yields a client wanting the edge chunk with both
/// endpoint chunks as side information and value one, and two clients
/// wanting `x` and `y` with the edge chunk as side information and values
/// `1/deg`, rounded up to the next micro-unit.
pub fn gen_from_independent_set(g: &EdgeList) -> Result<ReductionInstance> {
    let g = EdgeList::checked(g.n, g.edges.clone(), false)?;
    let mut clients = Vec::with_capacity(3 * g.edges.len());
    let mut exact = Vec::with_capacity(3 * g.edges.len());
    for (k, &(x, y)) in g.edges.iter().enumerate() {
        let e = ChunkId(g.n + k);
        clients.push(Client { wants: e, side_info: chunks([x, y]), valuation: Valuation::ONE });
        exact.push("1".to_string());
        for end in [x, y] {
            clients.push(Client { wants: ChunkId(end), side_info: [e].into(), valuation: Valuation(share(&g, end) as u64) });
            exact.push(format!("1/{}", g.degree(end)));
        }
    }
    let vc = min_vertex_cover(&g);
    let edges = g.edges.len() as i64;
    let total: i64 = clients.iter().map(|c| c.valuation.micro()).sum();
    let expected = Expected {
        opt_is: Some(g.n - vc),
        opt_vc: Some(vc),
        max_disjoint_cycles: None,
        welfare: total - (edges + vc as i64) * UNIT,
        min_transmissions: Some(g.edges.len() + vc),
    };
    Ok(ReductionInstance {
        instance: Instance { num_chunks: g.n + g.edges.len(), clients },
        provenance: Provenance { kind: "independent_set", source: g, exact_valuations: exact, rounding: "ceil" },
        expected,
    })
}

fn share(g: &EdgeList, x: usize) -> i64 {
    let d = g.degree(x) as i64;
    (UNIT + d - 1) / d
}

/// Unicast instance whose dependency graph is `g`, every value one unit.
/// Its optimal sparse welfare is the maximum number of disjoint cycles.
pub fn gen_from_cycle_packing(g: &EdgeList) -> Result<ReductionInstance> {
    let g = EdgeList::checked(g.n, g.edges.clone(), true)?;
    let clients: Vec<Client> = (0..g.n)
        .map(|j| Client {
            wants: ChunkId(j),
            side_info: chunks(g.edges.iter().filter(|&&(_, b)| b == j).map(|&(a, _)| a)),
            valuation: Valuation::ONE,
        })
        .collect();
    let instance = Instance { num_chunks: g.n, clients };
    let dg = DependencyGraph::build(
        &instance.wants(),
        &vec![UNIT; g.n],
        &instance.sides(),
        UNIT,
    );
    let limits = Limits { cycle_vertices: g.n.max(Limits::default().cycle_vertices), ..Limits::default() };
    let c = max_disjoint_cycles(&dg, &limits)?;
    Ok(ReductionInstance {
        provenance: Provenance {
            kind: "cycle_packing",
            source: g.clone(),
            exact_valuations: vec!["1".to_string(); g.n],
            rounding: "exact",
        },
        expected: Expected { max_disjoint_cycles: Some(c), welfare: c as i64 * UNIT, ..Expected::default() },
        instance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scenario;

    #[test]
    fn random_instances_are_valid_and_reproducible() {
        let a = gen_random_instance(10, 3, 7).unwrap();
        assert!(a.check(Scenario::Unicast).is_ok());
        assert!(a.clients.iter().all(|c| c.side_info.len() == 3));
        assert_eq!(a, gen_random_instance(10, 3, 7).unwrap());
        assert_ne!(a, gen_random_instance(10, 3, 8).unwrap());
        assert!(gen_random_instance(4, 4, 0).is_err());
        assert!(gen_random_instance(4, 1, 1).unwrap().check(Scenario::Unicast).is_ok());
    }

    #[test]
    fn edge_list_parsing() {
        let g = parse_edge_list("# triangle\nn 4\n0 1\n1 2 # inline\n2 0\n", false).unwrap();
        assert_eq!(g.n, 4);
        assert_eq!(g.edges, vec![(0, 1), (1, 2), (2, 0)]);
        assert!(parse_edge_list("0 0\n", false).is_err());
        assert!(parse_edge_list("0 1\n1 0\n", false).is_err());
        assert!(parse_edge_list("0 1\n1 0\n", true).is_ok());
        assert!(parse_edge_list("0 1 2\n", false).is_err());
    }

    #[test]
    fn independent_set_reduction_shape() {
        let k2 = EdgeList::undirected(2, &[(0, 1)]).unwrap();
        let r = gen_from_independent_set(&k2).unwrap();
        assert_eq!(r.instance.n(), 3);
        assert_eq!(r.instance.num_chunks, 3);
        assert_eq!(r.expected.opt_is, Some(1));
        assert_eq!(r.expected.welfare, UNIT);
        assert_eq!(r.expected.min_transmissions, Some(2));

        let k3 = EdgeList::undirected(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = gen_from_independent_set(&k3).unwrap();
        assert_eq!(r.instance.n(), 9);
        assert_eq!(r.expected.opt_is, Some(1));
        assert_eq!(r.provenance.exact_valuations[1], "1/2");
        assert_eq!(r.expected.welfare, UNIT);
    }

    #[test]
    fn cycle_packing_reduction_shape() {
        let two = EdgeList::directed(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert_eq!(gen_from_cycle_packing(&two).unwrap().expected.welfare, 2 * UNIT);
        let path = EdgeList::directed(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(gen_from_cycle_packing(&path).unwrap().expected.welfare, 0);
        let tri = EdgeList::directed(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = gen_from_cycle_packing(&tri).unwrap();
        assert_eq!(r.expected.welfare, UNIT);
        let dg = DependencyGraph::build(&r.instance.wants(), &[UNIT; 3], &r.instance.sides(), UNIT);
        for &(a, b) in &tri.edges {
            assert!(dg.has_arc(a, b));
        }
        assert_eq!(dg.arcs().len(), 3);
    }

    #[test]
    fn reductions_serialize() {
        let k2 = EdgeList::undirected(2, &[(0, 1)]).unwrap();
        let j = serde_json::to_value(gen_from_independent_set(&k2).unwrap()).unwrap();
        assert_eq!(j["instance"]["m"], 3);
        assert_eq!(j["provenance"]["rounding"], "ceil");
    }
}
