//! Abstract Bruhat-Tits indices: an index set `I ⊆ {0..m}` with the types of its slot lattices.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tuple::ParahoricTuple;

/// A slot of an index: `Λ₀ⁱ` (rank 0) or `Λ₁ʲ` (rank 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Slot {
    Rank0(usize),
    Rank1(usize),
}

/// Index set and slot types, the data classifying an orbit of concrete indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct AbstractIndex {
    pub tuple: ParahoricTuple,
    pub set: Vec<usize>,
    /// Type of `Λ₀ⁱ` for `i ∈ I ∖ {0}`.
    pub t0: BTreeMap<usize, usize>,
    /// Type of `Λ₁ʲ` for `j ∈ I ∖ {m}`.
    pub t1: BTreeMap<usize, usize>,
}

/// `(I, type vector)` with the types listed in chain order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct OrbitKey {
    pub set: Vec<usize>,
    pub types: Vec<usize>,
}

/// The slots of `set` in chain order `Λ₀^{i₁}, Λ₁^{i₁}, Λ₀^{i₂}, …`.
pub fn chain_slots(m: usize, set: &[usize]) -> Vec<Slot> {
    let mut out = Vec::new();
    for &i in set {
        if i != 0 {
            out.push(Slot::Rank0(i));
        }
        if i != m {
            out.push(Slot::Rank1(i));
        }
    }
    out
}

impl AbstractIndex {
    /// Builds an index from its chain values listed in chain order.
    ///
    /// A rank-1 slot is given by the type `n - t(Λ₁)` of the rank-0 lattice `πΛ₁^∨`.
    pub fn from_chain_values(tuple: &ParahoricTuple, set: &[usize], values: &[usize]) -> Self {
        let n = tuple.n();
        let mut t0 = BTreeMap::new();
        let mut t1 = BTreeMap::new();
        for (slot, &v) in chain_slots(tuple.m(), set).iter().zip(values) {
            match *slot {
                Slot::Rank0(i) => {
                    t0.insert(i, v);
                }
                Slot::Rank1(j) => {
                    t1.insert(j, n - v);
                }
            }
        }
        AbstractIndex { tuple: tuple.clone(), set: set.to_vec(), t0, t1 }
    }

    pub fn slots(&self) -> Vec<Slot> {
        chain_slots(self.tuple.m(), &self.set)
    }

    pub fn type_of(&self, slot: Slot) -> Option<usize> {
        match slot {
            Slot::Rank0(i) => self.t0.get(&i).copied(),
            Slot::Rank1(j) => self.t1.get(&j).copied(),
        }
    }

    /// Chain values: `t(Λ₀ⁱ)` for rank-0 slots and `n - t(Λ₁ʲ)` for rank-1 slots.
    pub fn chain_values(&self) -> Vec<usize> {
        let n = self.tuple.n();
        self.slots()
            .into_iter()
            .map(|s| match s {
                Slot::Rank0(i) => self.t0[&i],
                Slot::Rank1(j) => n.saturating_sub(self.t1[&j]),
            })
            .collect()
    }

    /// Violated clauses of the index conditions; empty when valid.
    pub fn diagnostics(&self) -> Vec<String> {
        let tuple = &self.tuple;
        let (n, m) = (tuple.n(), tuple.m());
        let mut out = Vec::new();
        if self.set.is_empty() {
            out.push("I is empty".to_string());
            return out;
        }
        if self.set.windows(2).any(|w| w[0] >= w[1]) || self.set.iter().any(|&i| i > m) {
            out.push(format!("I = {:?} is not an increasing subset of 0..={m}", self.set));
            return out;
        }
        if tuple.h(1) == 0 && self.set.contains(&0) {
            out.push("0 ∈ I although h_1 = 0".to_string());
        }
        if tuple.h(m) == n && self.set.contains(&m) {
            out.push(format!("{m} ∈ I although h_m = n"));
        }
        let want0: Vec<usize> = self.set.iter().copied().filter(|&i| i != 0).collect();
        let want1: Vec<usize> = self.set.iter().copied().filter(|&i| i != m).collect();
        if self.t0.keys().copied().collect::<Vec<_>>() != want0 || self.t1.keys().copied().collect::<Vec<_>>() != want1 {
            out.push("slot types do not match I".to_string());
            return out;
        }
        for (&i, &t) in &self.t0 {
            if t < tuple.h(i) + 1 || t > n || t % 2 != tuple.rank0_parity() {
                out.push(format!("t(Λ₀^{i}) = {t} outside the admissible types ≥ {}", tuple.h(i) + 1));
            }
        }
        for (&j, &t) in &self.t1 {
            if t + tuple.h(j + 1) < n + 1 || t > n || t % 2 != tuple.rank1_parity() {
                out.push(format!("t(Λ₁^{j}) = {t} outside the admissible types ≥ {}", n + 1 - tuple.h(j + 1)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let values = self.chain_values();
        let slots = self.slots();
        for k in 1..values.len() {
            if values[k - 1] > values[k] {
                out.push(format!("chain types decrease between {:?} and {:?}", slots[k - 1], slots[k]));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.diagnostics().is_empty()
    }

    pub fn orbit_key(&self) -> OrbitKey {
        OrbitKey { set: self.set.clone(), types: self.slots().into_iter().filter_map(|s| self.type_of(s)).collect() }
    }

    /// `self ≤ other`: `I_other ⊆ I_self` and slotwise types no larger on `I_other`.
    pub fn leq(&self, other: &AbstractIndex) -> bool {
        self.tuple == other.tuple
            && other.set.iter().all(|i| self.set.contains(i))
            && other.slots().into_iter().all(|s| self.type_of(s) <= other.type_of(s))
    }
}

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set: Vec<String> = self.set.iter().map(usize::to_string).collect();
        let types: Vec<String> = self.types.iter().map(usize::to_string).collect();
        write!(f, "I={{{}}};t=({})", set.join(","), types.join(","))
    }
}

impl fmt::Display for AbstractIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set: Vec<String> = self.set.iter().map(usize::to_string).collect();
        let t0: Vec<String> = self.t0.iter().map(|(i, t)| format!("{i}:{t}")).collect();
        let t1: Vec<String> = self.t1.iter().map(|(j, t)| format!("{j}:{t}")).collect();
        write!(f, "I={{{}}};t0={};t1={}", set.join(","), t0.join(","), t1.join(","))
    }
}

/// `idx` is valid.
pub fn validate_abstract(idx: &AbstractIndex) -> bool {
    idx.is_valid()
}

/// `smaller ≤ bigger` on abstract indices.
pub fn abstract_leq(smaller: &AbstractIndex, bigger: &AbstractIndex) -> bool {
    smaller.leq(bigger)
}

/// Nonempty subsets of the admissible index set, ordered by size then lexicographically.
pub fn index_sets(tuple: &ParahoricTuple) -> Vec<Vec<usize>> {
    let full = tuple.full_set();
    let mut out: Vec<Vec<usize>> = (1u32..(1 << full.len()))
        .map(|mask| full.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Every valid abstract index of the tuple, sorted.
pub fn enumerate_abstract(tuple: &ParahoricTuple) -> Vec<AbstractIndex> {
    let n = tuple.n();
    let parity = tuple.rank0_parity();
    let mut out = Vec::new();
    for set in index_sets(tuple) {
        let slots = chain_slots(tuple.m(), &set);
        let bounds: Vec<(usize, usize)> = slots
            .iter()
            .map(|s| match *s {
                Slot::Rank0(i) => (tuple.h(i) + 1, n),
                Slot::Rank1(j) => (0, tuple.h(j + 1).saturating_sub(1)),
            })
            .collect();
        let mut values = Vec::with_capacity(slots.len());
        extend_chain(&bounds, parity, &mut values, &mut |vals| {
            out.push(AbstractIndex::from_chain_values(tuple, &set, vals));
        });
    }
    out.sort();
    out
}

fn extend_chain(bounds: &[(usize, usize)], parity: usize, values: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    let k = values.len();
    if k == bounds.len() {
        emit(values);
        return;
    }
    let (lo, hi) = bounds[k];
    let start = lo.max(values.last().copied().unwrap_or(0));
    for v in (start..=hi).filter(|v| v % 2 == parity) {
        values.push(v);
        extend_chain(bounds, parity, values, emit);
        values.pop();
    }
}

/// Maximal elements of `indices` for `≤`.
pub fn maximal_indices(indices: &[AbstractIndex]) -> Vec<AbstractIndex> {
    indices.iter().filter(|a| !indices.iter().any(|b| b != *a && a.leq(b))).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(n: usize, h: &[usize]) -> ParahoricTuple {
        ParahoricTuple::new(n, h.to_vec()).unwrap()
    }

    #[test]
    fn maximal_parahoric_cases() {
        let t = tuple(3, &[0]);
        let all = enumerate_abstract(&t);
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|a| a.set == vec![1]));
        let bad = AbstractIndex::from_chain_values(&tuple(3, &[3]), &[1], &[3]);
        assert!(!bad.is_valid());
        assert_eq!(enumerate_abstract(&tuple(3, &[3])).len(), 2);
    }

    #[test]
    fn junction_example() {
        let t = tuple(4, &[1, 3]);
        let idx = AbstractIndex::from_chain_values(&t, &[0, 1, 2], &[0, 2, 2, 4]);
        assert_eq!(idx.t1[&0], 4);
        assert_eq!(idx.t0[&1], 2);
        assert_eq!(idx.t1[&1], 2);
        assert!(idx.is_valid(), "{:?}", idx.diagnostics());
    }

    #[test]
    fn enumeration_matches_validation() {
        for n in 1..=5 {
            for t in ParahoricTuple::all(n) {
                let all = enumerate_abstract(&t);
                assert!(all.iter().all(AbstractIndex::is_valid));
                let mut keys: Vec<_> = all.iter().map(AbstractIndex::orbit_key).collect();
                keys.dedup();
                assert_eq!(keys.len(), all.len());
            }
        }
    }

    #[test]
    fn order_is_partial() {
        let t = tuple(4, &[1, 3]);
        let all = enumerate_abstract(&t);
        for a in &all {
            assert!(a.leq(a));
            for b in &all {
                if a != b && a.leq(b) {
                    assert!(!b.leq(a));
                }
            }
        }
    }
}
