//! Points of the Rapoport-Zink space over `F_{q^{2d}}` as lattice chains,
//! their enumeration inside a closed stratum, their Bruhat-Tits types and
//! the map to flags of the Deligne-Lusztig blocks.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::coxeter::CoxElement;
use crate::dl::{Flag, FlagModel};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::hermitian::{residue_space, HermSpace, ResidueKind};
use crate::lattice::{AmbientSpace, LatticeInterval, WindowLattice};
use crate::linalg::{for_each_subspace, gaussian_binomial, invert, mat_mul, transpose, FixedSpace, Subspace};

use super::blocks::{stratum_descriptor, BlockRole, StratumDescriptor, WordLengths};
use super::concrete::{rank_swap, ConcreteIndex};
use super::tuple::ParahoricTuple;

/// Largest number of candidate lattices visited by one enumeration.
pub const POINT_SEARCH_LIMIT: u128 = 4_000_000;

/// A chain `A_m ⊆ … ⊆ A_1 ⊆ B_1 ⊆ … ⊆ B_m`; `a[i - 1] = A_i`, `b[i - 1] = B_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RZPoint {
    pub a: Vec<WindowLattice>,
    pub b: Vec<WindowLattice>,
}

/// Volumes `[A_i : Λ_std]` and `[B_i : Λ_std]` forced by the point conditions.
fn volumes(amb: &AmbientSpace, tuple: &ParahoricTuple) -> (Vec<i64>, Vec<i64>) {
    let base = amb.det_valuation() as i64 - amb.n() as i64 + 1;
    let hs = tuple.entries();
    (hs.iter().map(|&h| (base - h as i64) / 2).collect(), hs.iter().map(|&h| (base + h as i64) / 2).collect())
}

fn index_is(amb: &AmbientSpace, small: &WindowLattice, big: &WindowLattice, expected: usize) -> bool {
    amb.index_in(small, big).is_ok_and(|k| k == expected)
}

/// Violated point conditions; empty when `pt` is a point.
pub fn point_diagnostics(amb: &AmbientSpace, tuple: &ParahoricTuple, pt: &RZPoint) -> Result<Vec<String>> {
    let m = tuple.m();
    if pt.a.len() != m || pt.b.len() != m {
        return Ok(vec![format!("chain length differs from m = {m}")]);
    }
    let mut out = Vec::new();
    for i in 0..m {
        let (a, b) = (&pt.a[i], &pt.b[i]);
        let (da, db) = (amb.dual(a)?, amb.dual(b)?);
        let k = i + 1;
        if !index_is(amb, &amb.pi_mul(&da, 1)?, b, 1) {
            out.push(format!("πA_{k}^∨ ⊂(1) B_{k} fails"));
        }
        if !amb.contains(&da, b) {
            out.push(format!("B_{k} ⊆ A_{k}^∨ fails"));
        }
        if !index_is(amb, &amb.pi_mul(&db, 1)?, a, 1) {
            out.push(format!("πB_{k}^∨ ⊂(1) A_{k} fails"));
        }
        if !amb.contains(&db, a) {
            out.push(format!("A_{k} ⊆ B_{k}^∨ fails"));
        }
        if !amb.contains(a, &amb.pi_mul(b, 1)?) {
            out.push(format!("πB_{k} ⊆ A_{k} fails"));
        }
        if !index_is(amb, a, b, tuple.h(k)) {
            out.push(format!("A_{k} ⊂(h_{k}) B_{k} fails"));
        }
        if k < m {
            let delta = tuple.delta(k);
            if !index_is(amb, &pt.a[i + 1], a, delta) {
                out.push(format!("A_{} ⊂(Δh_{k}) A_{k} fails", k + 1));
            }
            if !index_is(amb, b, &pt.b[i + 1], delta) {
                out.push(format!("B_{k} ⊂(Δh_{k}) B_{} fails", k + 1));
            }
        }
    }
    Ok(out)
}

/// `B_i ⊆ Λ₀ⁱ` for `i ∈ I ∖ {0}` and `A_{j+1} ⊆ Λ₁ʲ` for `j ∈ I ∖ {m}`.
pub fn in_stratum(amb: &AmbientSpace, pt: &RZPoint, idx: &ConcreteIndex) -> bool {
    idx.rank0.iter().all(|(&i, l)| amb.contains(l, &pt.b[i - 1])) && idx.rank1.iter().all(|(&j, l)| amb.contains(l, &pt.a[j]))
}

/// `π^shift · small ⊆ big`, `x ⊆ π^e y^∨` or `π^e y^∨ ⊆ x` between chain variables.
#[derive(Clone, Copy)]
enum Relation {
    Inclusion { small: usize, big: usize, shift: i32 },
    DualUpper { x: usize, y: usize, e: i32 },
    DualLower { x: usize, y: usize, e: i32 },
}

fn relations(m: usize) -> Vec<Relation> {
    let (a, b) = (|i: usize| i, |i: usize| m + i);
    let mut out = Vec::new();
    for i in 0..m {
        out.extend([
            Relation::DualUpper { x: b(i), y: a(i), e: 0 },
            Relation::DualLower { x: b(i), y: a(i), e: 1 },
            Relation::DualUpper { x: a(i), y: b(i), e: 0 },
            Relation::DualLower { x: a(i), y: b(i), e: 1 },
            Relation::Inclusion { small: b(i), big: a(i), shift: 1 },
            Relation::Inclusion { small: a(i), big: b(i), shift: 0 },
        ]);
        if i + 1 < m {
            out.push(Relation::Inclusion { small: a(i + 1), big: a(i), shift: 0 });
            out.push(Relation::Inclusion { small: b(i), big: b(i + 1), shift: 0 });
        }
    }
    out
}

/// Bounds `[low, up]` of the chain variables implied by membership in the stratum.
fn initial_bounds(amb: &AmbientSpace, idx: &ConcreteIndex) -> Result<Vec<(WindowLattice, WindowLattice)>> {
    let m = idx.tuple().m();
    let set = idx.set();
    let mut a_bounds = Vec::with_capacity(m);
    let mut b_bounds = Vec::with_capacity(m);
    for i in 1..=m {
        if set[0] != 0 && i <= set[0] {
            let top = &idx.rank0[&set[0]];
            let low = amb.pi_mul(&amb.dual(top)?, 1)?;
            a_bounds.push((low.clone(), top.clone()));
            b_bounds.push((low, top.clone()));
        } else if let Some(w) = set.windows(2).find(|w| w[0] < i && i <= w[1]) {
            let (l1, l0) = (&idx.rank1[&w[0]], &idx.rank0[&w[1]]);
            a_bounds.push((amb.pi_mul(&amb.dual(l0)?, 1)?, l1.clone()));
            b_bounds.push((rank_swap(amb, l1)?, l0.clone()));
        } else {
            let l1 = &idx.rank1[set.last().expect("I is nonempty")];
            let low = rank_swap(amb, l1)?;
            a_bounds.push((amb.pi_mul(&low, 1)?, l1.clone()));
            b_bounds.push((low, amb.pi_mul(l1, -1)?));
        }
    }
    a_bounds.extend(b_bounds);
    Ok(a_bounds)
}

struct Search<'a> {
    amb: &'a AmbientSpace,
    relations: Vec<Relation>,
    volumes: Vec<i64>,
    coeffs: Vec<Fq>,
    visited: u128,
    limit: u128,
    found: Vec<Vec<WindowLattice>>,
}

#[derive(Clone)]
struct Frame {
    assigned: Vec<Option<WindowLattice>>,
    bounds: Vec<(WindowLattice, WindowLattice)>,
}

impl Search<'_> {
    fn propagate(&self, frame: &mut Frame, v: usize, l: &WindowLattice) -> Result<()> {
        let amb = self.amb;
        let mut dual: Option<WindowLattice> = None;
        let mut dual_of = |l: &WindowLattice| -> Result<WindowLattice> {
            if dual.is_none() {
                dual = Some(amb.dual(l)?);
            }
            Ok(dual.clone().expect("set"))
        };
        for rel in &self.relations {
            match *rel {
                Relation::Inclusion { small, big, shift } => {
                    if v == small && frame.assigned[big].is_none() {
                        let x = amb.pi_mul(l, shift)?;
                        frame.bounds[big].0 = amb.sum(&frame.bounds[big].0, &x);
                    } else if v == big && frame.assigned[small].is_none() {
                        let x = amb.pi_mul(l, -shift)?;
                        frame.bounds[small].1 = amb.intersect(&frame.bounds[small].1, &x);
                    }
                }
                Relation::DualUpper { x, y, e } => {
                    if v == y && frame.assigned[x].is_none() {
                        let z = amb.pi_mul(&dual_of(l)?, e)?;
                        frame.bounds[x].1 = amb.intersect(&frame.bounds[x].1, &z);
                    } else if v == x && frame.assigned[y].is_none() {
                        let z = amb.pi_mul(&amb.tau_pow(&dual_of(l)?, -1), e)?;
                        frame.bounds[y].1 = amb.intersect(&frame.bounds[y].1, &z);
                    }
                }
                Relation::DualLower { x, y, e } => {
                    if v == y && frame.assigned[x].is_none() {
                        let z = amb.pi_mul(&dual_of(l)?, e)?;
                        frame.bounds[x].0 = amb.sum(&frame.bounds[x].0, &z);
                    } else if v == x && frame.assigned[y].is_none() {
                        let z = amb.pi_mul(&amb.tau_pow(&dual_of(l)?, -1), e)?;
                        frame.bounds[y].0 = amb.sum(&frame.bounds[y].0, &z);
                    }
                }
            }
        }
        Ok(())
    }

    fn run(&mut self, frame: Frame) -> Result<()> {
        let amb = self.amb;
        let size = amb.field().size() as u128;
        let mut best: Option<(u128, usize, usize)> = None;
        for v in (0..frame.assigned.len()).filter(|&v| frame.assigned[v].is_none()) {
            let (low, up) = &frame.bounds[v];
            let Ok(dim) = amb.index_in(low, up) else {
                return Ok(());
            };
            let k = self.volumes[v] - amb.volume(low);
            if k < 0 || k as usize > dim {
                return Ok(());
            }
            let count = gaussian_binomial(size, dim, k as usize);
            if best.is_none_or(|(c, _, _)| count < c) {
                best = Some((count, v, k as usize));
            }
        }
        let Some((count, v, k)) = best else {
            self.found.push(frame.assigned.into_iter().map(|l| l.expect("assigned")).collect());
            return Ok(());
        };
        self.visited += count;
        if self.visited > self.limit {
            return Err(Error::SizeGuard { what: "candidate lattices in point enumeration".into(), needed: self.visited, limit: self.limit });
        }
        let iv = amb.interval(&frame.bounds[v].0, &frame.bounds[v].1)?;
        let coeffs = self.coeffs.clone();
        let mut failure = None;
        let _ = for_each_subspace(iv.dim(), k, &coeffs, |sub| {
            let l = amb.interval_lift(&iv, sub.basis());
            let mut next = frame.clone();
            let step = self.propagate(&mut next, v, &l).and_then(|_| {
                next.assigned[v] = Some(l);
                self.run(next)
            });
            match step {
                Ok(()) => ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        failure.map_or(Ok(()), Err)
    }
}

/// Every point of the closed stratum of `idx` over the field of `amb`, sorted.
pub fn enumerate_points(amb: &AmbientSpace, idx: &ConcreteIndex) -> Result<Vec<RZPoint>> {
    enumerate_points_limited(amb, idx, POINT_SEARCH_LIMIT)
}

/// [`enumerate_points`] with an explicit bound on visited candidates.
pub fn enumerate_points_limited(amb: &AmbientSpace, idx: &ConcreteIndex, limit: u128) -> Result<Vec<RZPoint>> {
    let tuple = idx.tuple();
    let m = tuple.m();
    let (va, vb) = volumes(amb, tuple);
    let mut search = Search {
        amb,
        relations: relations(m),
        volumes: va.into_iter().chain(vb).collect(),
        coeffs: amb.field().elements().collect(),
        visited: 0,
        limit,
        found: Vec::new(),
    };
    let frame = Frame { assigned: vec![None; 2 * m], bounds: initial_bounds(amb, idx)? };
    search.run(frame)?;
    let mut out = Vec::with_capacity(search.found.len());
    for mut chain in search.found {
        let b = chain.split_off(m);
        let pt = RZPoint { a: chain, b };
        if point_diagnostics(amb, tuple, &pt)?.is_empty() && in_stratum(amb, &pt, idx) {
            out.push(pt);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The `τ`-closures of a point and the index set they determine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointType {
    pub set: Vec<usize>,
    pub closures_a: Vec<WindowLattice>,
    pub closures_b: Vec<WindowLattice>,
}

impl PointType {
    /// The index `(I, Λ_{B_i}, Λ_{A_{j+1}})`.
    pub fn index(&self, amb: &AmbientSpace, tuple: &ParahoricTuple) -> Result<ConcreteIndex> {
        let m = tuple.m();
        let rank0 = self.set.iter().filter(|&&i| i != 0).map(|&i| (i, self.closures_b[i - 1].clone())).collect();
        let rank1 = self.set.iter().filter(|&&j| j != m).map(|&j| (j, self.closures_a[j].clone())).collect();
        ConcreteIndex::from_lattices(amb, tuple, self.set.clone(), rank0, rank1)
    }
}

/// The Bruhat-Tits type of a point.
pub fn bt_type_of_point(amb: &AmbientSpace, tuple: &ParahoricTuple, pt: &RZPoint) -> Result<PointType> {
    let m = tuple.m();
    let closures_a: Vec<WindowLattice> = pt.a.iter().map(|l| Ok(amb.tau_closure(l)?.1)).collect::<Result<_>>()?;
    let closures_b: Vec<WindowLattice> = pt.b.iter().map(|l| Ok(amb.tau_closure(l)?.1)).collect::<Result<_>>()?;
    let mut set = Vec::new();
    if amb.vertex_recognize(&closures_a[0], 1)?.is_some() {
        set.push(0);
    }
    for i in 1..m {
        if amb.contains(&rank_swap(amb, &closures_a[i])?, &closures_b[i - 1]) {
            set.push(i);
        }
    }
    if amb.vertex_recognize(&closures_b[m - 1], 0)?.is_some() {
        set.push(m);
    }
    Ok(PointType { set, closures_a, closures_b })
}

/// Pairs `(i, j)` with `Λ_{B_i} ⊆ πΛ_{A_j}^∨` where `Λ_{B_i}` or `Λ_{A_j}` is not a vertex lattice.
pub fn condition_star_violations(amb: &AmbientSpace, ty: &PointType) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, lb) in ty.closures_b.iter().enumerate() {
        for (j, la) in ty.closures_a.iter().enumerate() {
            if amb.contains(&rank_swap(amb, la)?, lb)
                && (amb.vertex_recognize(lb, 0)?.is_none() || amb.vertex_recognize(la, 1)?.is_none())
            {
                out.push((i + 1, j + 1));
            }
        }
    }
    Ok(out)
}

/// An orthonormal rational basis of a hermitian space, as rows.
fn orthonormal_basis(space: &HermSpace) -> Result<Vec<Vec<Fq>>> {
    let f = space.field();
    let dim = space.dim();
    let rational = f.rational_elements();
    let mut basis: Vec<Vec<Fq>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let complement = space.orth(&Subspace::span(f, dim, basis.clone()));
        let cand = complement.basis();
        let combine = |u: &[Fq], w: &[Fq], c: Fq| -> Vec<Fq> { u.iter().zip(w).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect() };
        let v = cand.iter().find(|v| !space.pair(v, v).is_zero()).cloned().or_else(|| {
            cand.iter().flat_map(|u| cand.iter().map(move |w| (u, w))).find_map(|(u, w)| {
                rational.iter().map(|&c| combine(u, w, c)).find(|x| !space.pair(x, x).is_zero())
            })
        });
        let v = v.ok_or_else(|| Error::Precondition("residue form is degenerate".into()))?;
        let norm = space.pair(&v, &v);
        let c = rational
            .iter()
            .copied()
            .find(|&c| f.mul(f.mul(c, f.frobenius(c)), norm) == Fq::ONE)
            .ok_or_else(|| Error::Precondition("norm equation has no rational solution".into()))?;
        basis.push(v.iter().map(|&x| f.mul(c, x)).collect());
    }
    Ok(basis)
}

fn sigma_matrix(f: &Field, m: &[Vec<Fq>]) -> Vec<Vec<Fq>> {
    m.iter().map(|row| row.iter().map(|&x| f.frobenius(x)).collect()).collect()
}

/// Coordinates in one residue space: interval plus change to standard coordinates.
struct Frame0 {
    interval: LatticeInterval,
    /// Right multiplication taking interval coordinates to standard ones.
    transform: Vec<Vec<Fq>>,
}

/// One chain variable feeding a flag step: `A_i` or `πB_i`.
#[derive(Clone, Copy)]
enum Step {
    A(usize),
    PiB(usize),
    B(usize),
}

struct BlockFrame {
    role: BlockRole,
    factors: Vec<(Frame0, Vec<Step>)>,
    model: FlagModel,
    dims: Vec<Vec<usize>>,
    labels: HashMap<CoxElement, WordLengths>,
    open: HashMap<CoxElement, bool>,
}

/// Point map of one index: flags of the blocks in standard coordinates.
pub struct PointMap {
    pub stratum: StratumDescriptor,
    blocks: Vec<BlockFrame>,
}

impl PointMap {
    pub fn new(amb: &AmbientSpace, idx: &ConcreteIndex) -> Result<Self> {
        let f = amb.field();
        let stratum = stratum_descriptor(&idx.index)?;
        let mut blocks = Vec::new();
        for block in &stratum.blocks {
            let factors = match block.role {
                BlockRole::Head { last } => {
                    let v = amb.vertex_recognize(&idx.rank0[&last], 0)?.ok_or(Error::NotContained)?;
                    let res = residue_space(amb, &v, ResidueKind::Lower)?;
                    let basis = orthonormal_basis(&res.space)?;
                    let transform = invert(f, &basis).ok_or_else(|| Error::Precondition("singular basis".into()))?;
                    let steps = (1..=last).rev().map(Step::A).chain((1..=last).map(Step::B)).collect();
                    vec![(Frame0 { interval: res.interval, transform }, steps)]
                }
                BlockRole::Tail { first } => {
                    let m = idx.tuple().m();
                    let v = amb.vertex_recognize(&idx.rank1[&first], 1)?.ok_or(Error::NotContained)?;
                    let res = residue_space(amb, &v, ResidueKind::Lower)?;
                    let basis = orthonormal_basis(&res.space)?;
                    let transform = invert(f, &basis).ok_or_else(|| Error::Precondition("singular basis".into()))?;
                    let steps = (first + 1..=m).map(Step::PiB).chain((first + 1..=m).rev().map(Step::A)).collect();
                    vec![(Frame0 { interval: res.interval, transform }, steps)]
                }
                BlockRole::Middle { from, to } => {
                    let (l1, l0) = (&idx.rank1[&from], &idx.rank0[&to]);
                    let iv1 = amb.interval(&amb.pi_mul(&rank_swap(amb, l1)?, 1)?, &amb.pi_mul(l0, 1)?)?;
                    let iv2 = amb.interval(&amb.pi_mul(&amb.dual(l0)?, 1)?, l1)?;
                    let e: Vec<_> = iv1.free.iter().map(|&p| amb.basis_vector(&iv1.up, p)).collect();
                    let g: Vec<_> = iv2.free.iter().map(|&p| amb.basis_vector(&iv2.up, p)).collect();
                    let pairing: Vec<Vec<Fq>> = e.iter().map(|x| g.iter().map(|y| amb.pairing(x, y).coeff(1)).collect()).collect();
                    if invert(f, &pairing).is_none() {
                        return Err(Error::Precondition("residue pairing of a middle block is degenerate".into()));
                    }
                    let identity: Vec<Vec<Fq>> =
                        (0..e.len()).map(|i| (0..e.len()).map(|j| if i == j { Fq::ONE } else { Fq::ZERO }).collect()).collect();
                    let transform2 = transpose(&sigma_matrix(f, &pairing));
                    vec![
                        (Frame0 { interval: iv1, transform: identity }, (from + 1..=to).map(Step::PiB).collect()),
                        (Frame0 { interval: iv2, transform: transform2 }, (from + 1..=to).rev().map(Step::A).collect()),
                    ]
                }
            };
            let model = FlagModel::with_field(block.kind(), block.d(), amb.field_arc())?;
            let mut labels = HashMap::new();
            let mut open = HashMap::new();
            for ts in block.fine_lengths() {
                let w = block.fine_descriptor(&ts).w;
                open.insert(w.clone(), block.is_open(&ts));
                labels.insert(w, ts);
            }
            blocks.push(BlockFrame { role: block.role, factors, model, dims: block.flag_dims.clone(), labels, open });
        }
        Ok(PointMap { stratum, blocks })
    }

    /// Flags of the blocks for a point of the closed stratum.
    pub fn flags(&self, amb: &AmbientSpace, pt: &RZPoint) -> Result<Vec<Flag>> {
        let f = amb.field();
        let mut out = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let mut parts = Vec::new();
            for (frame, steps) in &block.factors {
                let d = frame.interval.dim();
                let mut part: Vec<FixedSpace> = Vec::new();
                for &step in steps {
                    let lattice = match step {
                        Step::A(i) => pt.a[i - 1].clone(),
                        Step::B(i) => pt.b[i - 1].clone(),
                        Step::PiB(i) => amb.pi_mul(&pt.b[i - 1], 1)?,
                    };
                    let sub = amb
                        .interval_coordinates(&frame.interval, &lattice)
                        .ok_or_else(|| Error::Precondition(format!("point leaves the residue space of {:?}", block.role)))?;
                    let rows = if sub.dim() == 0 { Vec::new() } else { mat_mul(f, sub.basis(), &frame.transform) };
                    let space = Subspace::span(f, d, rows);
                    if space.dim() == 0 || space.dim() == d || part.last().is_some_and(|p| p.dim() == space.dim()) {
                        continue;
                    }
                    part.push(FixedSpace::from_subspace(&space).ok_or_else(|| Error::Precondition("flag rank too large".into()))?);
                }
                parts.push(part);
            }
            let flag = Flag { parts };
            if flag.dims() != block.dims {
                return Err(Error::Precondition(format!("flag of {:?} has dims {:?} instead of {:?}", block.role, flag.dims(), block.dims)));
            }
            out.push(flag);
        }
        Ok(out)
    }

    /// Word lengths of the fine stratum containing each block flag; `None` outside the closed stratum.
    pub fn fine_lengths(&self, amb: &AmbientSpace, pt: &RZPoint) -> Result<Vec<Option<WordLengths>>> {
        let flags = self.flags(amb, pt)?;
        Ok(self.blocks.iter().zip(&flags).map(|(b, fl)| b.labels.get(&b.model.fine_label(fl).0).cloned()).collect())
    }

    /// Whether every block flag lies in its open stratum.
    pub fn in_open_stratum(&self, amb: &AmbientSpace, pt: &RZPoint) -> Result<bool> {
        let flags = self.flags(amb, pt)?;
        Ok(self.blocks.iter().zip(&flags).all(|(b, fl)| b.open.get(&b.model.fine_label(fl).0).copied().unwrap_or(false)))
    }

    /// The flag model of each block.
    pub fn models(&self) -> Vec<&FlagModel> {
        self.blocks.iter().map(|b| &b.model).collect()
    }
}

/// The block flags of a point of the closed stratum of `idx`.
pub fn point_map(amb: &AmbientSpace, pt: &RZPoint, idx: &ConcreteIndex) -> Result<Vec<Flag>> {
    if !in_stratum(amb, pt, idx) {
        return Err(Error::Precondition("point is not in the closed stratum".into()));
    }
    PointMap::new(amb, idx)?.flags(amb, pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::blocks::StratumCounter;
    use crate::strata::concrete::{realize, window_indices};
    use crate::strata::index::{enumerate_abstract, AbstractIndex};

    fn hyperspecial(t0: usize) -> (ParahoricTuple, AmbientSpace, ConcreteIndex) {
        let t = ParahoricTuple::new(3, vec![0]).unwrap();
        let amb = t.ambient(3, 1, 1).unwrap();
        let idx = realize(&amb, &AbstractIndex::from_chain_values(&t, &[1], &[t0])).unwrap();
        (t, amb, idx)
    }

    #[test]
    fn superspecial_point() {
        let (t, amb, idx) = hyperspecial(1);
        let pts = enumerate_points(&amb, &idx).unwrap();
        assert_eq!(pts.len(), 1);
        let ty = bt_type_of_point(&amb, &t, &pts[0]).unwrap();
        assert_eq!(ty.set, vec![1]);
        assert_eq!(ty.index(&amb, &t).unwrap(), idx);
        let flags = point_map(&amb, &pts[0], &idx).unwrap();
        assert_eq!(flags.len(), 1);
        assert!(flags[0].parts.iter().all(Vec::is_empty));
    }

    #[test]
    fn hermitian_curve_points() {
        let (t, amb, idx) = hyperspecial(3);
        let pts = enumerate_points(&amb, &idx).unwrap();
        assert_eq!(pts.len(), 28);
        let mut counter = StratumCounter::new(amb.field_arc());
        let stratum = stratum_descriptor(&idx.index).unwrap();
        assert_eq!(counter.closed_count(&stratum).unwrap(), 28);
        let map = PointMap::new(&amb, &idx).unwrap();
        let mut images = Vec::new();
        for p in &pts {
            assert!(point_diagnostics(&amb, &t, p).unwrap().is_empty());
            let lengths = map.fine_lengths(&amb, p).unwrap();
            let lengths = lengths[0].clone().expect("image lies in the closed stratum");
            let rational = p.a.iter().chain(&p.b).all(|l| amb.is_rational(l));
            let dim = stratum.blocks[0].fine_descriptor(&lengths).dimension().unwrap();
            assert_eq!(rational, dim == 0);
            images.push(format!("{:?}", map.flags(&amb, p).unwrap()));
        }
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 28);
    }

    #[test]
    fn enumeration_agrees_with_flag_counts() {
        for (n, h) in [(2, vec![1]), (3, vec![1]), (3, vec![0, 2]), (3, vec![1, 3])] {
            let t = ParahoricTuple::new(n, h).unwrap();
            let amb = t.ambient(3, 1, 1).unwrap();
            let mut counter = StratumCounter::new(amb.field_arc());
            for abs in enumerate_abstract(&t) {
                let idx = realize(&amb, &abs).unwrap();
                let pts = enumerate_points(&amb, &idx).unwrap();
                let stratum = stratum_descriptor(&abs).unwrap();
                assert_eq!(pts.len() as u64, counter.closed_count(&stratum).unwrap(), "{abs}");
                let map = PointMap::new(&amb, &idx).unwrap();
                let open = pts.iter().filter(|p| map.in_open_stratum(&amb, p).unwrap()).count();
                let typed = pts.iter().filter(|p| bt_type_of_point(&amb, &t, p).unwrap().index(&amb, &t).unwrap() == idx).count();
                assert_eq!(open, typed, "{abs}");
                assert_eq!(open as u64, counter.open_count(&stratum).unwrap(), "{abs}");
            }
        }
    }

    #[test]
    fn types_are_nonempty_and_satisfy_condition_star() {
        let t = ParahoricTuple::new(3, vec![0, 2]).unwrap();
        let amb = t.ambient(3, 1, 1).unwrap();
        for idx in window_indices(&amb, &t).unwrap().iter().take(10) {
            for p in enumerate_points(&amb, idx).unwrap() {
                let ty = bt_type_of_point(&amb, &t, &p).unwrap();
                assert!(!ty.set.is_empty());
                assert!(condition_star_violations(&amb, &ty).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn search_limit_is_enforced() {
        let (_, amb, idx) = hyperspecial(3);
        assert!(matches!(enumerate_points_limited(&amb, &idx, 5), Err(Error::SizeGuard { .. })));
    }
}
