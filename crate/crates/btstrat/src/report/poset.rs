//! The `poset` command: concrete indices in the window ordered by
//! inclusion of closed strata, with their Hasse diagram.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::strata::{leq_index, stratum_descriptor, window_indices, AbstractIndex, ConcreteIndex};

use super::{Check, Header, Report, ReportConfig};

/// Largest number of concrete indices exported by one poset.
pub const POSET_NODE_LIMIT: usize = 5_000;

/// One concrete index of the window.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PosetNode {
    pub id: usize,
    pub label: String,
    pub orbit_key: String,
    pub dimension: usize,
    /// Canonical text of the slot lattices, stable across runs.
    #[serde(skip)]
    pub fingerprint: String,
}

/// Payload of the `poset` command.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PosetBody {
    pub nodes: Vec<PosetNode>,
    /// Covering pairs `(smaller, bigger)` by node id.
    pub covers: Vec<(usize, usize)>,
    pub relation_size: usize,
}

fn node_label(abs: &AbstractIndex, dimension: usize) -> String {
    let list = |m: &std::collections::BTreeMap<usize, usize>| m.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(",");
    let set: Vec<String> = abs.set.iter().map(usize::to_string).collect();
    format!("I={{{}}};t0={{{}}};t1={{{}}};dim={dimension}", set.join(","), list(&abs.t0), list(&abs.t1))
}

fn fingerprint(idx: &ConcreteIndex) -> String {
    format!("{:?}|{:?}|{:?}", idx.index, idx.rank0, idx.rank1)
}

/// Bitset rows of a relation on `len` elements.
struct Relation {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl Relation {
    fn new(len: usize) -> Self {
        let words = len.div_ceil(64);
        Relation { words, rows: vec![vec![0; words]; len] }
    }

    fn set(&mut self, a: usize, b: usize) {
        self.rows[a][b / 64] |= 1 << (b % 64);
    }

    fn get(&self, a: usize, b: usize) -> bool {
        self.rows[a][b / 64] >> (b % 64) & 1 == 1
    }

    fn members(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.words * 64).filter(move |&b| b < self.rows.len() && self.get(a, b))
    }
}

/// Window poset of one tuple.
pub fn cmd_poset(config: &ReportConfig) -> Result<Report<PosetBody>> {
    let header = Header::new("poset", config)?;
    let tuple = config.tuple()?;
    let amb = config.ambient()?;
    let indices = window_indices(&amb, &tuple)?;
    if indices.len() > POSET_NODE_LIMIT {
        return Err(Error::SizeGuard { what: "window poset nodes".into(), needed: indices.len() as u128, limit: POSET_NODE_LIMIT as u128 });
    }
    let mut dims: HashMap<AbstractIndex, usize> = HashMap::new();
    let mut nodes = Vec::with_capacity(indices.len());
    for (id, idx) in indices.iter().enumerate() {
        let dimension = match dims.get(&idx.index) {
            Some(&d) => d,
            None => {
                let d = stratum_descriptor(&idx.index)?.dimension;
                dims.insert(idx.index.clone(), d);
                d
            }
        };
        nodes.push(PosetNode {
            id,
            label: node_label(&idx.index, dimension),
            orbit_key: idx.index.orbit_key().to_string(),
            dimension,
            fingerprint: fingerprint(idx),
        });
    }
    let len = indices.len();
    let mut strict = Relation::new(len);
    let mut relation_size = 0;
    let mut antisymmetry = Vec::new();
    for a in 0..len {
        for b in 0..len {
            if a == b || !indices[a].index.leq(&indices[b].index) || !leq_index(&amb, &indices[a], &indices[b])? {
                continue;
            }
            strict.set(a, b);
            relation_size += 1;
            if strict.get(b, a) {
                antisymmetry.push(format!("{} <-> {}", nodes[a].label, nodes[b].label));
            }
        }
    }
    let mut transitivity = Vec::new();
    let mut monotone = Vec::new();
    let mut covers = Vec::new();
    for a in 0..len {
        let mut reachable = vec![0u64; strict.words];
        for c in strict.members(a) {
            for (w, &x) in reachable.iter_mut().zip(&strict.rows[c]) {
                *w |= x;
            }
            if nodes[c].dimension < nodes[a].dimension {
                monotone.push(format!("{} < {}", nodes[a].label, nodes[c].label));
            }
        }
        for b in 0..len {
            let via = reachable[b / 64] >> (b % 64) & 1 == 1;
            if via && !strict.get(a, b) {
                transitivity.push(format!("{} < {} not implied", nodes[a].label, nodes[b].label));
            }
            if strict.get(a, b) && !via {
                covers.push((a, b));
            }
        }
    }
    let realized: std::collections::BTreeSet<&AbstractIndex> = indices.iter().map(|i| &i.index).collect();
    let missing: Vec<String> =
        crate::strata::enumerate_abstract(&tuple).iter().filter(|a| !realized.contains(a)).map(|a| a.to_string()).collect();
    let checks = vec![
        Check::new("antisymmetry", format!("{relation_size} strict relations"), antisymmetry),
        Check::new("transitivity", format!("{len} nodes"), transitivity),
        Check::new("dimension_monotone", format!("{} covers", covers.len()), monotone),
        Check::new("abstract_census_realized", format!("{} abstract indices", realized.len()), missing),
    ];
    Ok(Report { header, body: PosetBody { nodes, covers, relation_size }, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperspecial_poset() {
        let r = cmd_poset(&ReportConfig::new(3, vec![0], 3, 1).unwrap()).unwrap();
        assert_eq!(r.body.nodes.len(), 29);
        assert_eq!(r.body.covers.len(), 28);
        assert!(r.passed(), "{:?}", r.checks);
        assert!(r.body.nodes.iter().all(|n| n.label.starts_with("I={1}")));
    }
}
