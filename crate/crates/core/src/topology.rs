//! Device coupling maps: pair enumeration at fixed graph distance and
//! deterministic selection of qubit-disjoint pairs for simultaneous runs.
//!
//! Maps are always loaded from JSON files (`{"qubits": [{"id":0,
//! "f_mhz":4900.1}, ...], "edges": [[0,1], ...]}`); no device layout is
//! hard-coded anywhere in the crate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One qubit of a coupling map; drive frequency is optional metadata.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QubitNode {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_mhz: Option<f64>,
}

/// Undirected coupling graph of a device.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CouplingGraph {
    pub qubits: Vec<QubitNode>,
    pub edges: Vec<[u32; 2]>,
}

/// An (A, B) pair with its connecting shortest path.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PairRecord {
    pub a: u32,
    pub b: u32,
    /// Qubit ids from A to B inclusive; length = distance + 1.
    pub path: Vec<u32>,
    pub distance: u32,
    /// f_A − f_B in MHz when both frequencies are known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_f_mhz: Option<f64>,
}

impl CouplingGraph {
    pub fn from_json(json: &str) -> Result<Self> {
        let g: CouplingGraph = serde_json::from_str(json)?;
        g.validate()?;
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let ids: BTreeSet<u32> = self.qubits.iter().map(|q| q.id).collect();
        if ids.len() != self.qubits.len() {
            return Err(Error::InvalidGraph("duplicate qubit ids".into()));
        }
        for q in &self.qubits {
            if let Some(f) = q.f_mhz {
                if !(f.is_finite() && f > 0.0) {
                    return Err(Error::InvalidGraph(format!(
                        "qubit {} has non-positive frequency {f}",
                        q.id
                    )));
                }
            }
        }
        for e in &self.edges {
            if e[0] == e[1] {
                return Err(Error::InvalidGraph(format!("self-loop on qubit {}", e[0])));
            }
            for v in e {
                if !ids.contains(v) {
                    return Err(Error::InvalidGraph(format!(
                        "edge [{}, {}] references unknown qubit {v}",
                        e[0], e[1]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn frequency(&self, id: u32) -> Option<f64> {
        self.qubits.iter().find(|q| q.id == id).and_then(|q| q.f_mhz)
    }

    fn adjacency(&self) -> BTreeMap<u32, Vec<u32>> {
        let mut adj: BTreeMap<u32, Vec<u32>> = self.qubits.iter().map(|q| (q.id, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e[0]).unwrap().push(e[1]);
            adj.get_mut(&e[1]).unwrap().push(e[0]);
        }
        for n in adj.values_mut() {
            n.sort_unstable();
            n.dedup();
        }
        adj
    }
}

fn bfs_dist(adj: &BTreeMap<u32, Vec<u32>>, from: u32) -> BTreeMap<u32, u32> {
    let mut dist = BTreeMap::new();
    dist.insert(from, 0u32);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for &v in &adj[&u] {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// All unordered pairs at shortest-path distance exactly `d`, each with its
/// lexicographically smallest shortest path (ties broken toward small ids).
pub fn pairs_at_distance(graph: &CouplingGraph, d: u32) -> Result<Vec<PairRecord>> {
    if graph.qubits.is_empty() {
        return Err(Error::InvalidGraph("empty graph".into()));
    }
    if d < 1 {
        return Err(Error::InvalidGraph("distance must be at least 1".into()));
    }
    graph.validate()?;
    let adj = graph.adjacency();
    let dists: BTreeMap<u32, BTreeMap<u32, u32>> =
        adj.keys().map(|&q| (q, bfs_dist(&adj, q))).collect();

    let mut out = Vec::new();
    let ids: Vec<u32> = adj.keys().copied().collect();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if dists[&a].get(&b).copied() != Some(d) {
                continue;
            }
            // Greedy forward walk yields the lexicographically smallest
            // shortest path for fixed endpoints.
            let da = &dists[&a];
            let db = &dists[&b];
            let mut path = vec![a];
            let mut cur = a;
            while cur != b {
                let next = adj[&cur]
                    .iter()
                    .copied()
                    .find(|v| {
                        da.get(v).copied() == Some(da[&cur] + 1)
                            && db.get(v).copied() == Some(db[&cur] - 1)
                    })
                    .expect("shortest path step exists");
                path.push(next);
                cur = next;
            }
            let delta_f = match (graph.frequency(a), graph.frequency(b)) {
                (Some(fa), Some(fb)) => Some(fa - fb),
                _ => None,
            };
            out.push(PairRecord {
                a,
                b,
                path,
                distance: d,
                delta_f_mhz: delta_f,
            });
        }
    }
    Ok(out)
}

/// Greedy maximal-by-inclusion subset of pairs whose paths share no qubit.
///
/// Pairs are visited sorted by (path length, min id, ids), so the result is
/// byte-identical across runs for the same input.
pub fn select_disjoint(pairs: &[PairRecord]) -> Vec<PairRecord> {
    let mut order: Vec<&PairRecord> = pairs.iter().collect();
    order.sort_by_key(|p| (p.path.len(), p.a.min(p.b), p.a, p.b));
    let mut used: BTreeSet<u32> = BTreeSet::new();
    let mut out = Vec::new();
    for p in order {
        if p.path.iter().any(|q| used.contains(q)) {
            continue;
        }
        used.extend(p.path.iter().copied());
        out.push(p.clone());
    }
    out
}
