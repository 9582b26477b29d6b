//! Concrete Bruhat-Tits indices: chains of vertex lattices in the window,
//! their order, intersection, completion and type minimization.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::hermitian::{neighbour_vertices, residue_space, Direction, HermSpace, ResidueKind};
use crate::lattice::{AmbientSpace, VertexLattice, WindowLattice};
use crate::linalg::{for_each_subspace, Subspace};

use super::index::{chain_slots, AbstractIndex, Slot};
use super::tuple::ParahoricTuple;

/// An index with its slot lattices `Λ₀ⁱ` and `Λ₁ʲ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ConcreteIndex {
    pub index: AbstractIndex,
    pub rank0: BTreeMap<usize, WindowLattice>,
    pub rank1: BTreeMap<usize, WindowLattice>,
}

/// Result of intersecting two indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Intersection {
    Defined(ConcreteIndex),
    /// The first failing clause.
    Undefined(String),
}

/// `Λ₁ = πX^∨` for the rank-0 lattice `X = πΛ₁^∨`, and conversely.
pub fn rank_swap(amb: &AmbientSpace, l: &WindowLattice) -> Result<WindowLattice> {
    amb.pi_mul(&amb.dual(l)?, 1)
}

fn vertex_type(amb: &AmbientSpace, l: &WindowLattice, rank: i32) -> Result<usize> {
    amb.vertex_recognize(l, rank)?
        .map(|v| v.type_t)
        .ok_or_else(|| Error::Precondition(format!("slot lattice is not a rank-{rank} vertex lattice")))
}

impl ConcreteIndex {
    /// Reads the slot types off the lattices.
    pub fn from_lattices(
        amb: &AmbientSpace,
        tuple: &ParahoricTuple,
        set: Vec<usize>,
        rank0: BTreeMap<usize, WindowLattice>,
        rank1: BTreeMap<usize, WindowLattice>,
    ) -> Result<Self> {
        let t0 = rank0.iter().map(|(&i, l)| Ok((i, vertex_type(amb, l, 0)?))).collect::<Result<_>>()?;
        let t1 = rank1.iter().map(|(&j, l)| Ok((j, vertex_type(amb, l, 1)?))).collect::<Result<_>>()?;
        Ok(ConcreteIndex { index: AbstractIndex { tuple: tuple.clone(), set, t0, t1 }, rank0, rank1 })
    }

    /// Builds an index from rank-0 chain lattices listed in chain order.
    pub fn from_chain(amb: &AmbientSpace, tuple: &ParahoricTuple, set: Vec<usize>, chain: &[WindowLattice]) -> Result<Self> {
        let mut rank0 = BTreeMap::new();
        let mut rank1 = BTreeMap::new();
        for (slot, l) in chain_slots(tuple.m(), &set).into_iter().zip(chain) {
            match slot {
                Slot::Rank0(i) => {
                    rank0.insert(i, l.clone());
                }
                Slot::Rank1(j) => {
                    rank1.insert(j, rank_swap(amb, l)?);
                }
            }
        }
        Self::from_lattices(amb, tuple, set, rank0, rank1)
    }

    pub fn tuple(&self) -> &ParahoricTuple {
        &self.index.tuple
    }

    pub fn set(&self) -> &[usize] {
        &self.index.set
    }

    pub fn lattice(&self, slot: Slot) -> Option<&WindowLattice> {
        match slot {
            Slot::Rank0(i) => self.rank0.get(&i),
            Slot::Rank1(j) => self.rank1.get(&j),
        }
    }

    /// The chain lattice of a slot: `Λ₀ⁱ` or `πΛ₁ʲ^∨`.
    pub fn chain_lattice(&self, amb: &AmbientSpace, slot: Slot) -> Result<WindowLattice> {
        let l = self.lattice(slot).ok_or_else(|| Error::Precondition(format!("{slot:?} is not a slot of the index")))?;
        match slot {
            Slot::Rank0(_) => Ok(l.clone()),
            Slot::Rank1(_) => rank_swap(amb, l),
        }
    }

    /// The chain `Λ₀^{i₁} ⊆ πΛ₁^{i₁∨} ⊆ Λ₀^{i₂} ⊆ …`.
    pub fn chain(&self, amb: &AmbientSpace) -> Result<Vec<WindowLattice>> {
        self.index.slots().into_iter().map(|s| self.chain_lattice(amb, s)).collect()
    }
}

/// Violated clauses of the concrete index conditions; empty when valid.
pub fn concrete_diagnostics(amb: &AmbientSpace, idx: &ConcreteIndex) -> Result<Vec<String>> {
    let mut out = idx.index.diagnostics();
    if !out.is_empty() {
        return Ok(out);
    }
    for slot in idx.index.slots() {
        let (l, rank) = match slot {
            Slot::Rank0(i) => (idx.rank0.get(&i), 0),
            Slot::Rank1(j) => (idx.rank1.get(&j), 1),
        };
        let Some(l) = l else {
            out.push(format!("{slot:?} has no lattice"));
            continue;
        };
        match amb.vertex_recognize(l, rank)? {
            Some(v) if Some(v.type_t) == idx.index.type_of(slot) => {}
            Some(v) => out.push(format!("{slot:?} has type {} instead of {:?}", v.type_t, idx.index.type_of(slot))),
            None => out.push(format!("{slot:?} is not a rank-{rank} vertex lattice")),
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }
    let slots = idx.index.slots();
    let chain = idx.chain(amb)?;
    for k in 1..chain.len() {
        if !amb.contains(&chain[k], &chain[k - 1]) {
            out.push(format!("chain inclusion fails between {:?} and {:?}", slots[k - 1], slots[k]));
        }
    }
    Ok(out)
}

/// `idx` satisfies every index condition.
pub fn validate_concrete(amb: &AmbientSpace, idx: &ConcreteIndex) -> Result<bool> {
    Ok(concrete_diagnostics(amb, idx)?.is_empty())
}

/// `smaller ≤ bigger`: `I_bigger ⊆ I_smaller` and slotwise inclusion on `I_bigger`.
pub fn leq_index(amb: &AmbientSpace, smaller: &ConcreteIndex, bigger: &ConcreteIndex) -> Result<bool> {
    if smaller.tuple() != bigger.tuple() {
        return Err(Error::KindMismatch("indices belong to different tuples".into()));
    }
    if !bigger.set().iter().all(|i| smaller.set().contains(i)) {
        return Ok(false);
    }
    for slot in bigger.index.slots() {
        let (Some(a), Some(b)) = (smaller.lattice(slot), bigger.lattice(slot)) else {
            return Ok(false);
        };
        if !amb.contains(b, a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The intersection of two indices, or the first clause preventing it.
pub fn intersect_index(amb: &AmbientSpace, a: &ConcreteIndex, b: &ConcreteIndex) -> Result<Intersection> {
    let tuple = a.tuple();
    if tuple != b.tuple() {
        return Err(Error::KindMismatch("indices belong to different tuples".into()));
    }
    let n = tuple.n();
    let mut rank0 = BTreeMap::new();
    let mut rank1 = BTreeMap::new();
    for i in a.set().iter().filter(|i| b.set().contains(i)) {
        if let (Some(x), Some(y)) = (a.rank0.get(i), b.rank0.get(i)) {
            let meet = amb.intersect(x, y);
            match amb.vertex_recognize(&meet, 0)? {
                Some(v) if v.type_t > tuple.h(*i) => {
                    rank0.insert(*i, meet);
                }
                _ => return Ok(Intersection::Undefined(format!("Λ₀^{i} ∩ Λ₀'^{i} is not a vertex lattice of type ≥ h_{i}+1"))),
            }
        }
        if let (Some(x), Some(y)) = (a.rank1.get(i), b.rank1.get(i)) {
            let meet = amb.intersect(x, y);
            match amb.vertex_recognize(&meet, 1)? {
                Some(v) if v.type_t + tuple.h(*i + 1) > n => {
                    rank1.insert(*i, meet);
                }
                _ => return Ok(Intersection::Undefined(format!("Λ₁^{i} ∩ Λ₁'^{i} is not a vertex lattice of type ≥ n-h_{}+1", i + 1))),
            }
        }
    }
    for (first, second, label) in [(a, b, "πΛ₁^∨ ⊆ Λ₀'"), (b, a, "πΛ₁'^∨ ⊆ Λ₀")] {
        for (&i1, l1) in &first.rank1 {
            let lower = rank_swap(amb, l1)?;
            for (&i2, l0) in second.rank0.range(i1 + 1..) {
                if !amb.contains(l0, &lower) {
                    return Ok(Intersection::Undefined(format!("{label} fails for indices {i1} < {i2}")));
                }
            }
        }
    }
    for (src, other) in [(a, b), (b, a)] {
        for (&i, l) in &src.rank0 {
            if !other.set().contains(&i) {
                rank0.insert(i, l.clone());
            }
        }
        for (&j, l) in &src.rank1 {
            if !other.set().contains(&j) {
                rank1.insert(j, l.clone());
            }
        }
    }
    let mut set: Vec<usize> = a.set().iter().chain(b.set()).copied().collect();
    set.sort_unstable();
    set.dedup();
    let result = ConcreteIndex::from_lattices(amb, tuple, set, rank0, rank1)?;
    let diagnostics = concrete_diagnostics(amb, &result)?;
    if !diagnostics.is_empty() {
        return Ok(Intersection::Undefined(diagnostics.join("; ")));
    }
    Ok(Intersection::Defined(result))
}

/// First totally isotropic `r`-dimensional rational subspace of `within`, in echelon order.
fn first_isotropic(space: &HermSpace, within: &Subspace, r: usize) -> Option<Subspace> {
    let f = space.field();
    let coeffs = f.rational_elements();
    let basis = within.basis();
    let mut found = None;
    let _ = for_each_subspace(within.dim(), r, &coeffs, |sub| {
        let rows: Vec<_> = sub
            .basis()
            .iter()
            .map(|c| {
                (0..space.dim())
                    .map(|k| c.iter().zip(basis).fold(crate::field::Fq::ZERO, |acc, (&x, b)| f.add(acc, f.mul(x, b[k]))))
                    .collect()
            })
            .collect();
        let w = Subspace::span(f, space.dim(), rows);
        if space.is_totally_isotropic(&w) {
            found = Some(w);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

fn prefix(space: &HermSpace, w: &Subspace, k: usize) -> Subspace {
    Subspace::span(space.field(), space.dim(), w.basis()[..k].to_vec())
}

/// Rank-0 vertex lattices of the given increasing types, nested, between `lower` and `upper`.
pub fn fill_chain(
    amb: &AmbientSpace,
    lower: Option<&WindowLattice>,
    upper: Option<&WindowLattice>,
    types: &[usize],
) -> Result<Vec<WindowLattice>> {
    if types.is_empty() {
        return Ok(Vec::new());
    }
    let recognize = |l: &WindowLattice| -> Result<VertexLattice> {
        amb.vertex_recognize(l, 0)?.ok_or_else(|| Error::Precondition("chain end is not a rank-0 vertex lattice".into()))
    };
    let out: Vec<WindowLattice> = match (lower, upper) {
        (_, Some(up)) => {
            let vertex = recognize(up)?;
            let d = vertex.type_t;
            let res = residue_space(amb, &vertex, ResidueKind::Lower)?;
            let space = &res.space;
            let need = (d - types[0]) / 2;
            let big = match lower {
                Some(low) => {
                    let u = res.subspace_of(amb, low).ok_or(Error::NotContained)?;
                    let w = space.orth(&u);
                    if w.dim() < need {
                        return Err(Error::InfeasibleIndex(format!("no room for type {} below the upper end", types[0])));
                    }
                    w
                }
                None => first_isotropic(space, &Subspace::full(space.dim()), need)
                    .ok_or_else(|| Error::InfeasibleIndex(format!("no isotropic subspace of dimension {need}")))?,
            };
            types.iter().map(|&t| res.lattice_of(amb, &space.orth(&prefix(space, &big, (d - t) / 2)))).collect()
        }
        (Some(low), None) => {
            let vertex = recognize(low)?;
            let x = vertex.type_t;
            let res = residue_space(amb, &vertex, ResidueKind::Upper)?;
            let space = &res.space;
            let top = *types.last().expect("nonempty");
            let need = (top - x) / 2;
            let big = first_isotropic(space, &Subspace::full(space.dim()), need)
                .ok_or_else(|| Error::InfeasibleIndex(format!("no isotropic subspace of dimension {need}")))?;
            types.iter().map(|&t| res.lattice_of(amb, &prefix(space, &big, (t - x) / 2))).collect()
        }
        (None, None) => return Err(Error::Precondition("a chain segment needs at least one end".into())),
    };
    for (l, &t) in out.iter().zip(types) {
        let got = vertex_type(amb, l, 0)?;
        if got != t {
            return Err(Error::Precondition(format!("chain lattice has type {got} instead of {t}")));
        }
    }
    Ok(out)
}

/// Chain value of a slot inserted by [`complete_index`].
fn completion_value(tuple: &ParahoricTuple, slot: Slot) -> usize {
    match slot {
        Slot::Rank0(i) => tuple.h(i) + 1,
        Slot::Rank1(0) => tuple.h(1) - 1,
        Slot::Rank1(j) => tuple.h(j) + 1,
    }
}

/// An index `≤ idx` whose index set is the largest admissible one.
pub fn complete_index(amb: &AmbientSpace, idx: &ConcreteIndex) -> Result<ConcreteIndex> {
    let tuple = idx.tuple().clone();
    let target = tuple.full_set();
    let slots = chain_slots(tuple.m(), &target);
    let mut chain: Vec<Option<WindowLattice>> =
        slots.iter().map(|&s| if idx.lattice(s).is_some() { idx.chain_lattice(amb, s).map(Some) } else { Ok(None) }).collect::<Result<_>>()?;
    let mut k = 0;
    while k < slots.len() {
        if chain[k].is_some() {
            k += 1;
            continue;
        }
        let start = k;
        while k < slots.len() && chain[k].is_none() {
            k += 1;
        }
        let lower = start.checked_sub(1).and_then(|p| chain[p].clone());
        let upper = chain.get(k).cloned().flatten();
        let values: Vec<usize> = slots[start..k].iter().map(|&s| completion_value(&tuple, s)).collect();
        let filled = fill_chain(amb, lower.as_ref(), upper.as_ref(), &values)?;
        for (pos, l) in (start..k).zip(filled) {
            chain[pos] = Some(l);
        }
    }
    let chain: Vec<WindowLattice> = chain.into_iter().map(|l| l.expect("filled")).collect();
    ConcreteIndex::from_chain(amb, &tuple, target, &chain)
}

/// An index `≤ idx` with the same index set and every slot of least admissible type.
pub fn minimize_types(amb: &AmbientSpace, idx: &ConcreteIndex) -> Result<ConcreteIndex> {
    let tuple = idx.tuple().clone();
    let set = idx.set().to_vec();
    let m = tuple.m();
    let mut rank0 = BTreeMap::new();
    let mut rank1 = BTreeMap::new();
    let first = set[0];
    if first != 0 {
        let l = fill_chain(amb, None, Some(&idx.rank0[&first]), &[tuple.h(first) + 1])?;
        rank0.insert(first, l[0].clone());
    }
    for w in set.windows(2) {
        let (a, b) = (w[0], w[1]);
        let low = rank_swap(amb, &idx.rank1[&a])?;
        let l = fill_chain(amb, Some(&low), Some(&idx.rank0[&b]), &[tuple.h(a + 1) - 1, tuple.h(b) + 1])?;
        rank1.insert(a, rank_swap(amb, &l[0])?);
        rank0.insert(b, l[1].clone());
    }
    let last = *set.last().expect("I is nonempty");
    if last != m {
        let low = rank_swap(amb, &idx.rank1[&last])?;
        let l = fill_chain(amb, Some(&low), None, &[tuple.h(last + 1) - 1])?;
        rank1.insert(last, rank_swap(amb, &l[0])?);
    }
    ConcreteIndex::from_lattices(amb, &tuple, set, rank0, rank1)
}

/// The rank-0 vertex lattice `Λ_std`, the top of the window.
pub fn window_top(amb: &AmbientSpace) -> Result<VertexLattice> {
    amb.vertex_recognize(&amb.standard(), 0)?
        .ok_or_else(|| Error::Precondition("the standard lattice is not a rank-0 vertex lattice".into()))
}

/// A concrete index realizing `abs` inside `Λ_std`.
pub fn realize(amb: &AmbientSpace, abs: &AbstractIndex) -> Result<ConcreteIndex> {
    let diagnostics = abs.diagnostics();
    if !diagnostics.is_empty() {
        return Err(Error::InfeasibleIndex(diagnostics.join("; ")));
    }
    let top = window_top(amb)?;
    let chain = fill_chain(amb, None, Some(&top.lattice), &abs.chain_values())?;
    let idx = ConcreteIndex::from_chain(amb, &abs.tuple, abs.set.clone(), &chain)?;
    if idx.index != *abs {
        return Err(Error::Precondition("realized index has different types".into()));
    }
    Ok(idx)
}

/// Rank-0 vertex lattices contained in `Λ_std`, sorted by type.
pub fn window_vertices(amb: &AmbientSpace) -> Result<Vec<VertexLattice>> {
    let top = window_top(amb)?;
    let mut out = Vec::new();
    for t in (top.type_t % 2..=top.type_t).step_by(2) {
        out.extend(neighbour_vertices(amb, &top, Direction::Sub, t)?);
    }
    Ok(out)
}

/// Rank-0 vertex lattices of the window with their upward inclusions.
pub struct WindowPoset {
    pub vertices: Vec<VertexLattice>,
    /// `above[v]`: vertices `u ≠ v` with `v ⊆ u`.
    pub above: Vec<Vec<usize>>,
}

impl WindowPoset {
    pub fn new(amb: &AmbientSpace) -> Result<Self> {
        let vertices = window_vertices(amb)?;
        let above = vertices
            .iter()
            .enumerate()
            .map(|(a, v)| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(b, u)| b != a && u.type_t > v.type_t && amb.contains(&u.lattice, &v.lattice))
                    .map(|(b, _)| b)
                    .collect()
            })
            .collect();
        Ok(WindowPoset { vertices, above })
    }

    /// Every concrete index of the abstract index whose chain lies in `Λ_std`.
    pub fn indices_of(&self, amb: &AmbientSpace, abs: &AbstractIndex) -> Result<Vec<ConcreteIndex>> {
        let values = abs.chain_values();
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut cur = Vec::new();
        self.extend(&values, &mut cur, &mut chains);
        chains
            .into_iter()
            .map(|c| {
                let lattices: Vec<WindowLattice> = c.iter().map(|&v| self.vertices[v].lattice.clone()).collect();
                ConcreteIndex::from_chain(amb, &abs.tuple, abs.set.clone(), &lattices)
            })
            .collect()
    }

    fn extend(&self, values: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == values.len() {
            out.push(cur.clone());
            return;
        }
        let t = values[k];
        let candidates: Vec<usize> = match cur.last() {
            None => (0..self.vertices.len()).filter(|&v| self.vertices[v].type_t == t).collect(),
            Some(&prev) if self.vertices[prev].type_t == t => vec![prev],
            Some(&prev) => self.above[prev].iter().copied().filter(|&v| self.vertices[v].type_t == t).collect(),
        };
        for v in candidates {
            cur.push(v);
            self.extend(values, cur, out);
            cur.pop();
        }
    }
}

/// Every concrete index whose chain lies in `Λ_std`, grouped by abstract index in sorted order.
pub fn window_indices(amb: &AmbientSpace, tuple: &ParahoricTuple) -> Result<Vec<ConcreteIndex>> {
    let poset = WindowPoset::new(amb)?;
    let mut out = Vec::new();
    for abs in super::index::enumerate_abstract(tuple) {
        out.extend(poset.indices_of(amb, &abs)?);
    }
    Ok(out)
}

/// Largest rank and residue field size where realizability is certified.
pub const CERTIFIED_RANGE: (usize, u32) = (4, 5);

/// Certification status of the abstract census of a tuple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Feasibility {
    /// Every abstract index has a witness, a completion and a type-minimal refinement.
    Verified,
    /// Outside [`CERTIFIED_RANGE`].
    Unverified,
    /// Abstract indices whose witness construction failed.
    Discrepancies(Vec<(AbstractIndex, String)>),
}

fn certify_one(amb: &AmbientSpace, abs: &AbstractIndex) -> Result<()> {
    let idx = realize(amb, abs)?;
    for derived in [complete_index(amb, &idx)?, minimize_types(amb, &idx)?] {
        let diagnostics = concrete_diagnostics(amb, &derived)?;
        if !diagnostics.is_empty() {
            return Err(Error::InfeasibleIndex(diagnostics.join("; ")));
        }
        if !leq_index(amb, &derived, &idx)? {
            return Err(Error::Precondition("derived index is not below the witness".into()));
        }
    }
    Ok(())
}

/// Cross-checks the abstract census of `tuple` against concrete witnesses over `F_{q^2}`, `q = p^e`.
pub fn certify_feasibility(tuple: &ParahoricTuple, p: u32, e: u32) -> Result<Feasibility> {
    let (max_n, max_q) = CERTIFIED_RANGE;
    if tuple.n() > max_n || p.pow(e) > max_q {
        return Ok(Feasibility::Unverified);
    }
    let amb = tuple.ambient(p, e, 1)?;
    let failures: Vec<(AbstractIndex, String)> = super::index::enumerate_abstract(tuple)
        .into_iter()
        .filter_map(|abs| certify_one(&amb, &abs).err().map(|err| (abs, err.to_string())))
        .collect();
    Ok(if failures.is_empty() { Feasibility::Verified } else { Feasibility::Discrepancies(failures) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::index::enumerate_abstract;

    fn setup(n: usize, h: &[usize]) -> (ParahoricTuple, AmbientSpace) {
        let t = ParahoricTuple::new(n, h.to_vec()).unwrap();
        let amb = t.ambient(3, 1, 1).unwrap();
        (t, amb)
    }

    fn hyperspecial_indices(amb: &AmbientSpace, t: &ParahoricTuple) -> (ConcreteIndex, Vec<ConcreteIndex>) {
        let all = window_indices(amb, t).unwrap();
        let top = all.iter().find(|i| i.index.t0[&1] == 3).unwrap().clone();
        let small = all.into_iter().filter(|i| i.index.t0[&1] == 1).collect();
        (top, small)
    }

    #[test]
    fn window_of_hyperspecial_level() {
        let (t, amb) = setup(3, &[0]);
        assert_eq!(window_vertices(&amb).unwrap().len(), 29);
        let (_, small) = hyperspecial_indices(&amb, &t);
        assert_eq!(small.len(), 28);
    }

    #[test]
    fn every_abstract_index_is_realized() {
        for n in 1..=4 {
            for t in ParahoricTuple::all(n) {
                let amb = t.ambient(3, 1, 1).unwrap();
                for abs in enumerate_abstract(&t) {
                    let idx = realize(&amb, &abs).unwrap();
                    assert!(validate_concrete(&amb, &idx).unwrap(), "{abs}");
                    assert_eq!(idx.index, abs);
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        let (t, amb) = setup(3, &[0]);
        let (top, small) = hyperspecial_indices(&amb, &t);
        assert!(leq_index(&amb, &top, &top).unwrap());
        assert!(leq_index(&amb, &small[0], &top).unwrap());
        assert!(!leq_index(&amb, &top, &small[0]).unwrap());
        assert!(!leq_index(&amb, &small[0], &small[1]).unwrap());
        assert!(!leq_index(&amb, &small[1], &small[0]).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let (t, amb) = setup(3, &[0]);
        let (top, small) = hyperspecial_indices(&amb, &t);
        assert_eq!(intersect_index(&amb, &top, &top).unwrap(), Intersection::Defined(top.clone()));
        assert_eq!(intersect_index(&amb, &top, &small[0]).unwrap(), Intersection::Defined(small[0].clone()));
        assert!(matches!(intersect_index(&amb, &small[0], &small[1]).unwrap(), Intersection::Undefined(_)));
    }

    #[test]
    fn completion_enlarges_the_index_set() {
        let (t, amb) = setup(3, &[0, 2]);
        let abs = AbstractIndex::from_chain_values(&t, &[2], &[3]);
        let idx = realize(&amb, &abs).unwrap();
        let done = complete_index(&amb, &idx).unwrap();
        assert_eq!(done.set(), &[1, 2]);
        assert!(validate_concrete(&amb, &done).unwrap());
        assert!(leq_index(&amb, &done, &idx).unwrap());
    }

    #[test]
    fn completion_and_minimization_postconditions() {
        for n in 1..=4 {
            for t in ParahoricTuple::all(n) {
                let amb = t.ambient(3, 1, 1).unwrap();
                for abs in enumerate_abstract(&t) {
                    let idx = realize(&amb, &abs).unwrap();
                    let done = complete_index(&amb, &idx).unwrap();
                    assert_eq!(done.set(), t.full_set().as_slice(), "{abs}");
                    assert!(validate_concrete(&amb, &done).unwrap() && leq_index(&amb, &done, &idx).unwrap(), "{abs}");
                    let least = minimize_types(&amb, &idx).unwrap();
                    assert!(validate_concrete(&amb, &least).unwrap() && leq_index(&amb, &least, &idx).unwrap(), "{abs}");
                    assert!(least.index.t0.iter().all(|(&i, &ty)| ty == t.h(i) + 1), "{abs}");
                    assert!(least.index.t1.iter().all(|(&j, &ty)| ty == n + 1 - t.h(j + 1)), "{abs}");
                    assert_eq!(minimize_types(&amb, &least).unwrap(), least);
                }
            }
        }
    }

    #[test]
    fn feasibility_is_certified_in_range() {
        for n in 1..=4 {
            for t in ParahoricTuple::all(n) {
                assert_eq!(certify_feasibility(&t, 5, 1).unwrap(), Feasibility::Verified, "{t:?}");
            }
        }
        let t = ParahoricTuple::new(5, vec![1]).unwrap();
        assert_eq!(certify_feasibility(&t, 3, 1).unwrap(), Feasibility::Unverified);
    }

    #[test]
    fn hyperspecial_minimization() {
        let (t, amb) = setup(3, &[0]);
        let (top, _) = hyperspecial_indices(&amb, &t);
        let least = minimize_types(&amb, &top).unwrap();
        assert_eq!(least.index.t0[&1], 1);
        assert!(amb.vertex_recognize(&least.rank0[&1], 0).unwrap().is_some_and(|v| v.type_t == 1));
    }
}
