//! Flag models of Deligne-Lusztig varieties for the general linear, unitary
//! and fake unitary Frobenius structures, with relative positions, fine and
//! coarse labels, and brute-force point counts.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxElement, CoxGroup, CoxKind, Perm, SimpleSubset};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Fq};
use crate::linalg::{for_each_subspace, gaussian_binomial, FixedSpace, FIXED_DIM};

/// Largest flag set labelled by a census.
pub const FLAG_LIMIT: u128 = 2_000_000;
/// Largest number of complete refinements scanned per flag by the refinement oracle.
pub const REFINEMENT_LIMIT: u128 = 10_000;

/// Names a Deligne-Lusztig variety `X_I(w)` (coarse) or `X_I{w}` (fine).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct DLDescriptor {
    pub kind: CoxKind,
    pub d: usize,
    pub subset: SimpleSubset,
    pub w: CoxElement,
    pub fine: bool,
}

impl DLDescriptor {
    pub fn group(&self) -> Result<CoxGroup> {
        CoxGroup::new(self.kind, self.d)
    }

    /// Checks `w ∈ ᴵW` (fine) or `w ∈ ᴵW^{F(I)}` (coarse).
    pub fn validate(&self) -> Result<()> {
        let g = self.group()?;
        if !g.is_left_reduced(&self.w, &self.subset) {
            return Err(Error::Precondition("descriptor word is not I-reduced".into()));
        }
        if !self.fine && !g.is_right_reduced(&self.w, &g.frobenius_subset(&self.subset)) {
            return Err(Error::Precondition("coarse descriptor word is not reduced-F(I)".into()));
        }
        Ok(())
    }

    /// `ℓ(w)` for fine descriptors, the coarse dimension formula otherwise.
    pub fn dimension(&self) -> Result<usize> {
        let g = self.group()?;
        if self.fine {
            Ok(g.length(&self.w))
        } else {
            g.dim_coarse(&self.subset, &self.w)
        }
    }
}

/// Flag type increments `d_I`.
pub fn flag_type_of(group: &CoxGroup, i: &SimpleSubset) -> Vec<Vec<usize>> {
    i.flag_type(group.d)
}

/// `(I_∞, w)` from the stabilizing sequence.
pub fn fine_to_parabolic(group: &CoxGroup, i: &SimpleSubset, w: &CoxElement) -> Result<(SimpleSubset, CoxElement)> {
    let seq = group.bedard(i, w)?;
    Ok((seq.limit, seq.element))
}

/// A partial flag per factor, listing its proper nonzero steps.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Flag {
    pub parts: Vec<Vec<FixedSpace>>,
}

impl Flag {
    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|steps| steps.iter().map(FixedSpace::dim).collect()).collect()
    }
}

/// The permutation with `dim(G_i ∩ G'_j) = #{b ≤ j : w(b) ≤ i}` minimal in its double coset.
///
/// `a` and `b` are step dimensions ending in `d`; `table[x][y] = dim(G_{a_x} ∩ G'_{b_y})`.
pub fn min_rep_from_table(d: usize, a: &[usize], b: &[usize], table: &[Vec<usize>]) -> Perm {
    let r = a.len();
    let s = b.len();
    let at = |x: usize, y: usize| if x == 0 || y == 0 { 0 } else { table[x - 1][y - 1] };
    let mut next_value: Vec<usize> = (0..r).map(|x| if x == 0 { 1 } else { a[x - 1] + 1 }).collect();
    let mut images = Vec::with_capacity(d);
    for y in 1..=s {
        for x in 1..=r {
            let count = at(x, y) + at(x - 1, y - 1) - at(x - 1, y) - at(x, y - 1);
            for _ in 0..count {
                images.push(next_value[x - 1]);
                next_value[x - 1] += 1;
            }
        }
    }
    Perm::from_one_line(&images).expect("block counts define a permutation")
}

/// Label histograms of one flag variety.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub fine: BTreeMap<CoxElement, u64>,
    pub coarse: BTreeMap<CoxElement, u64>,
}

/// Ambient data for counting flags over `k = F_{q^{2e}}`.
#[derive(Clone, Debug)]
pub struct FlagModel {
    pub group: CoxGroup,
    field: Arc<Field>,
}

impl FlagModel {
    /// Flags in `k^d` with `k = F_{q^{2e}}` and the standard form `Σ x_a σ(y_a)`.
    pub fn new(kind: CoxKind, d: usize, p: u32, e_base: u32, ext: u32) -> Result<Self> {
        let field = Arc::new(Field::new(FieldSpec::new(p, e_base, ext))?);
        Self::with_field(kind, d, field)
    }

    pub fn with_field(kind: CoxKind, d: usize, field: Arc<Field>) -> Result<Self> {
        if d > FIXED_DIM {
            return Err(Error::Precondition(format!("flag models support rank at most {FIXED_DIM}")));
        }
        Ok(FlagModel { group: CoxGroup::new(kind, d)?, field })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.group.d
    }

    /// `U^⊥` for the standard `σ`-sesquilinear form.
    pub fn orth(&self, u: &FixedSpace) -> FixedSpace {
        let f = &*self.field;
        u.annihilator_with(f, |x| f.frobenius(x))
    }

    fn sigma(&self, u: &FixedSpace) -> FixedSpace {
        let f = &*self.field;
        u.map_entries(f, |x| f.frobenius(x))
    }

    /// Reversed orthogonal flag `j ↦ (G_{d-j})^⊥`.
    fn orth_flag(&self, steps: &[FixedSpace]) -> Vec<FixedSpace> {
        steps.iter().rev().map(|s| self.orth(s)).collect()
    }

    /// The Frobenius-twisted flag: `σ(G)` (linear), `G^⊥` (unitary), swapped orthogonals (fake unitary).
    pub fn twist(&self, flag: &Flag) -> Flag {
        match self.group.kind {
            CoxKind::Linear => Flag { parts: vec![flag.parts[0].iter().map(|s| self.sigma(s)).collect()] },
            CoxKind::Unitary => Flag { parts: vec![self.orth_flag(&flag.parts[0])] },
            CoxKind::FakeUnitary => {
                Flag { parts: vec![self.orth_flag(&flag.parts[1]), self.orth_flag(&flag.parts[0])] }
            }
        }
    }

    /// Coefficientwise `q^2`-Frobenius of a flag.
    pub fn tau(&self, flag: &Flag) -> Flag {
        let f = &*self.field;
        Flag {
            parts: flag
                .parts
                .iter()
                .map(|steps| steps.iter().map(|s| s.map_entries(f, |x| f.tau(x))).collect())
                .collect(),
        }
    }

    /// `dim(G_x ∩ G'_y)` over all proper steps; the full space is implicit.
    pub fn intersection_table(&self, g: &[FixedSpace], h: &[FixedSpace]) -> Vec<Vec<usize>> {
        let f = &*self.field;
        let mut table: Vec<Vec<usize>> =
            g.iter().map(|a| h.iter().map(|b| a.intersection_dim(f, b)).chain([a.dim()]).collect()).collect();
        table.push(h.iter().map(FixedSpace::dim).chain([self.d()]).collect());
        table
    }

    fn relpos_part(&self, g: &[FixedSpace], h: &[FixedSpace]) -> Perm {
        let d = self.d();
        let table = self.intersection_table(g, h);
        let a: Vec<usize> = g.iter().map(FixedSpace::dim).chain([d]).collect();
        let b: Vec<usize> = h.iter().map(FixedSpace::dim).chain([d]).collect();
        min_rep_from_table(d, &a, &b, &table)
    }

    /// Minimal representative of the relative position of two partial flags, per factor.
    pub fn relative_position_min(&self, g: &Flag, h: &Flag) -> Result<CoxElement> {
        let n = self.group.factors();
        if g.parts.len() != n || h.parts.len() != n {
            return Err(Error::KindMismatch("flag factor count".into()));
        }
        Ok(CoxElement { parts: g.parts.iter().zip(&h.parts).map(|(a, b)| self.relpos_part(a, b)).collect() })
    }

    /// Relative position of two complete flags.
    pub fn relative_position(&self, g: &Flag, h: &Flag) -> Result<CoxElement> {
        let complete = |fl: &Flag| fl.parts.iter().all(|steps| steps.len() + 1 == self.d());
        if !complete(g) || !complete(h) {
            return Err(Error::Precondition("relative position needs complete flags".into()));
        }
        self.relative_position_min(g, h)
    }

    /// The simple subset whose flag type matches the step dimensions.
    pub fn type_of(&self, flag: &Flag) -> SimpleSubset {
        let mut s = self.group.full_subset();
        for (factor, steps) in flag.parts.iter().enumerate() {
            for st in steps {
                s.masks[factor] &= !(1u64 << st.dim());
            }
        }
        s
    }

    /// Coarse label: the minimal element of the double coset of `(G, twist G)`.
    pub fn coarse_label(&self, flag: &Flag) -> CoxElement {
        self.relative_position_min(flag, &self.twist(flag)).expect("factor counts agree")
    }

    /// `G_{x-1} + (G_x ∩ G'_y)` over all `x, y`, without repeats.
    fn refine(&self, g: &[FixedSpace], h: &[FixedSpace]) -> Vec<FixedSpace> {
        let f = &*self.field;
        let d = self.d();
        let full = FixedSpace::full(d);
        let mut out: Vec<FixedSpace> = Vec::new();
        let mut prev = FixedSpace::zero(d);
        for gx in g.iter().chain([&full]) {
            for hy in h.iter().chain([&full]) {
                let step = prev.sum(f, &gx.intersect(f, hy));
                if step.dim() > out.last().map_or(0, FixedSpace::dim) && step.dim() < d {
                    out.push(step);
                }
            }
            prev = *gx;
        }
        out
    }

    /// Coarse label, fine label `w ∈ ᴵW` and limit subset, refining `G` against its twist until the type stabilizes.
    pub fn labels(&self, flag: &Flag) -> (CoxElement, CoxElement, SimpleSubset) {
        let mut cur = flag.clone();
        let mut tw = self.twist(&cur);
        let coarse = self.relative_position_min(&cur, &tw).expect("factor counts agree");
        let mut label = coarse.clone();
        loop {
            let subset = self.type_of(&cur);
            let refined = self.group.intersect_conjugate(&subset, &label, &self.type_of(&tw));
            if refined == subset {
                return (coarse, label, subset);
            }
            cur = Flag { parts: cur.parts.iter().zip(&tw.parts).map(|(g, h)| self.refine(g, h)).collect() };
            debug_assert_eq!(self.type_of(&cur), refined);
            tw = self.twist(&cur);
            label = self.relative_position_min(&cur, &tw).expect("factor counts agree");
        }
    }

    /// Fine label and limit subset.
    pub fn fine_label(&self, flag: &Flag) -> (CoxElement, SimpleSubset) {
        let (_, fine, limit) = self.labels(flag);
        (fine, limit)
    }

    /// Bruhat-closed coarse condition `relpos(G, twist G) ≤ w`.
    pub fn in_coarse_closure(&self, flag: &Flag, w: &CoxElement) -> bool {
        self.group.bruhat_leq(&self.coarse_label(flag), w)
    }

    /// Number of flags of type `I` over `k`.
    pub fn flag_count(&self, i: &SimpleSubset) -> u128 {
        let size = self.field.size() as u128;
        i.flag_type(self.d())
            .iter()
            .map(|incs| {
                let mut remaining = self.d();
                let mut total: u128 = 1;
                for &inc in incs {
                    total = total.saturating_mul(gaussian_binomial(size, remaining, inc));
                    remaining -= inc;
                }
                total
            })
            .fold(1u128, u128::saturating_mul)
    }

    fn for_each_chain<B>(
        &self,
        dims: &[usize],
        prefix: &mut Vec<FixedSpace>,
        visit: &mut dyn FnMut(&[FixedSpace]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let depth = prefix.len();
        if depth == dims.len() {
            return visit(prefix);
        }
        let d = self.d();
        let f = &*self.field;
        let base = prefix.last().copied().unwrap_or_else(|| FixedSpace::zero(d));
        let pivots = base.pivots();
        let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
        let inc = dims[depth] - base.dim();
        let coeffs: Vec<Fq> = f.elements().collect();
        for_each_subspace(free.len(), inc, &coeffs, |y| {
            let lifted: Vec<Vec<Fq>> = y
                .basis()
                .iter()
                .map(|row| {
                    let mut v = vec![Fq::ZERO; d];
                    for (k, &c) in free.iter().enumerate() {
                        v[c] = row[k];
                    }
                    v
                })
                .collect();
            let step = FixedSpace::span(f, d, base.basis().chain(lifted.iter().map(Vec::as_slice)))
                .expect("rank checked at construction");
            prefix.push(step);
            let flow = self.for_each_chain(dims, prefix, visit);
            prefix.pop();
            flow
        })
    }

    /// All chains with the given step dimensions.
    pub fn chains(&self, dims: &[usize]) -> Vec<Vec<FixedSpace>> {
        let mut out = Vec::new();
        let _ = self.for_each_chain::<()>(dims, &mut Vec::new(), &mut |c| {
            out.push(c.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    /// Visits every flag of type `I` over `k`.
    pub fn for_each_flag<B>(&self, i: &SimpleSubset, mut visit: impl FnMut(&Flag) -> ControlFlow<B>) -> Result<ControlFlow<B>> {
        let count = self.flag_count(i);
        if count > FLAG_LIMIT {
            return Err(Error::SizeGuard { what: "flag enumeration".into(), needed: count, limit: FLAG_LIMIT });
        }
        let dims = i.flag_dims(self.d());
        match self.group.kind {
            CoxKind::Linear | CoxKind::Unitary => Ok(self.for_each_chain(&dims[0], &mut Vec::new(), &mut |c| {
                visit(&Flag { parts: vec![c.to_vec()] })
            })),
            CoxKind::FakeUnitary => {
                let second = self.chains(&dims[1]);
                Ok(self.for_each_chain(&dims[0], &mut Vec::new(), &mut |c| {
                    for other in &second {
                        visit(&Flag { parts: vec![c.to_vec(), other.clone()] })?;
                    }
                    ControlFlow::Continue(())
                }))
            }
        }
    }

    /// Fine and coarse label histograms over all flags of type `I` in one pass.
    pub fn census(&self, i: &SimpleSubset) -> Result<Census> {
        let mut out = Census::default();
        let _ = self.for_each_flag::<()>(i, |fl| {
            let (coarse, fine, _) = self.labels(fl);
            *out.coarse.entry(coarse).or_insert(0) += 1;
            *out.fine.entry(fine).or_insert(0) += 1;
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Number of `k`-points of the descriptor's variety.
    pub fn count_points(&self, desc: &DLDescriptor) -> Result<u64> {
        self.check_descriptor(desc)?;
        let census = self.census(&desc.subset)?;
        let hist = if desc.fine { &census.fine } else { &census.coarse };
        Ok(hist.get(&desc.w).copied().unwrap_or(0))
    }

    fn check_descriptor(&self, desc: &DLDescriptor) -> Result<()> {
        desc.validate()?;
        if desc.kind != self.group.kind || desc.d != self.d() {
            return Err(Error::KindMismatch("descriptor and flag model differ".into()));
        }
        Ok(())
    }

    /// Points of the closure of a fine stratum: flags whose fine label is `≤_{I,F} w`.
    pub fn count_closure(&self, desc: &DLDescriptor) -> Result<u64> {
        self.check_descriptor(desc)?;
        let closure = self.group.closure_fine(&desc.subset, &desc.w)?;
        let census = self.census(&desc.subset)?;
        Ok(closure.iter().map(|w| census.fine.get(w).copied().unwrap_or(0)).sum())
    }

    /// Relative positions `relpos(F, twist F)` of every complete `k`-rational refinement of `G`.
    pub fn refinement_labels(&self, flag: &Flag) -> Result<Vec<CoxElement>> {
        let d = self.d();
        let size = self.field.size() as u128;
        let mut total: u128 = 1;
        for steps in &flag.parts {
            let mut prev = 0;
            for dim in steps.iter().map(FixedSpace::dim).chain([d]) {
                for k in 1..=dim - prev {
                    total = total.saturating_mul(gaussian_binomial(size, k, 1));
                }
                prev = dim;
            }
        }
        if total > REFINEMENT_LIMIT {
            return Err(Error::SizeGuard { what: "complete refinements".into(), needed: total, limit: REFINEMENT_LIMIT });
        }
        let per_factor: Vec<Vec<Vec<FixedSpace>>> = flag.parts.iter().map(|steps| self.refinements(steps)).collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_factor.len()];
        loop {
            let complete = Flag { parts: per_factor.iter().zip(&idx).map(|(opts, &k)| opts[k].clone()).collect() };
            out.push(self.relative_position(&complete, &self.twist(&complete))?);
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    out.sort();
                    out.dedup();
                    return Ok(out);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < per_factor[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// Complete flags through the given steps.
    fn refinements(&self, steps: &[FixedSpace]) -> Vec<Vec<FixedSpace>> {
        let d = self.d();
        let mut partial: Vec<Vec<FixedSpace>> = vec![Vec::new()];
        for target in steps.iter().copied().chain([FixedSpace::full(d)]) {
            let mut next = Vec::new();
            for chain in partial {
                self.extend_to(&target, chain, &mut next);
            }
            partial = next;
        }
        for chain in &mut partial {
            chain.retain(|s| s.dim() < d);
        }
        partial
    }

    fn extend_to(&self, target: &FixedSpace, chain: Vec<FixedSpace>, out: &mut Vec<Vec<FixedSpace>>) {
        let d = self.d();
        let base = chain.last().copied().unwrap_or_else(|| FixedSpace::zero(d));
        if base.dim() == target.dim() {
            out.push(chain);
            return;
        }
        let f = &*self.field;
        let coeffs: Vec<Fq> = f.elements().collect();
        let basis: Vec<&[Fq]> = target.basis().collect();
        let mut seen: Vec<FixedSpace> = Vec::new();
        let _ = for_each_subspace::<()>(basis.len(), 1, &coeffs, |line| {
            let v: Vec<Fq> = (0..d)
                .map(|c| basis.iter().zip(&line.basis()[0]).fold(Fq::ZERO, |acc, (row, &k)| f.add(acc, f.mul(k, row[c]))))
                .collect();
            if !base.contains_vector(f, &v) {
                let step = FixedSpace::span(f, d, base.basis().chain([v.as_slice()])).expect("rank checked");
                if !seen.contains(&step) {
                    seen.push(step);
                    let mut c = chain.clone();
                    c.push(step);
                    self.extend_to(target, c, out);
                }
            }
            ControlFlow::Continue(())
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Simple;

    fn s(index: usize) -> Simple {
        Simple { factor: 0, index }
    }

    #[test]
    fn relative_position_extremes() {
        let m = FlagModel::new(CoxKind::Linear, 2, 3, 1, 1).unwrap();
        let f = m.field();
        let e1 = FixedSpace::span(f, 2, [[Fq::ONE, Fq::ZERO].as_slice()]).unwrap();
        let e2 = FixedSpace::span(f, 2, [[Fq::ZERO, Fq::ONE].as_slice()]).unwrap();
        let g = Flag { parts: vec![vec![e1.clone()]] };
        let h = Flag { parts: vec![vec![e2]] };
        assert!(m.relative_position(&g, &g).unwrap().parts[0].is_identity());
        assert_eq!(m.relative_position(&g, &h).unwrap().parts[0], Perm::simple(2, 1));
    }

    #[test]
    fn unitary_line_has_identity_label() {
        let m = FlagModel::new(CoxKind::Unitary, 1, 3, 1, 1).unwrap();
        let i = m.group.full_subset();
        let census = m.census(&i).unwrap().fine;
        assert_eq!(census.values().sum::<u64>(), 1);
    }

    #[test]
    fn hermitian_plane_closure_count() {
        let m = FlagModel::new(CoxKind::Unitary, 3, 3, 1, 1).unwrap();
        let g = m.group;
        let i = g.subset(&[s(1)]);
        let desc = DLDescriptor { kind: CoxKind::Unitary, d: 3, subset: i.clone(), w: g.simple(s(2)), fine: true };
        assert_eq!(m.count_closure(&desc).unwrap(), 28);
        let census = m.census(&i).unwrap().fine;
        assert_eq!(census.values().sum::<u64>(), 91);
    }
}
