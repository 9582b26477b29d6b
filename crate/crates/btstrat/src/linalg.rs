//! Dense linear algebra over the finite field: echelon forms, subspaces and
//! Grassmannian enumeration restricted to a coefficient subfield.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::field::{Field, Fq};

/// Reduced row echelon form of `rows`; zero rows are dropped and pivots are `1`.
pub fn rref(f: &Field, mut rows: Vec<Vec<Fq>>) -> Vec<Vec<Fq>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

/// Pivot column of each row of an echelon matrix.
pub fn pivots(rows: &[Vec<Fq>]) -> Vec<usize> {
    rows.iter().map(|r| r.iter().position(|c| !c.is_zero()).expect("echelon rows are nonzero")).collect()
}

/// Basis of `{x : rows · x = 0}` for a matrix with `ncols` columns.
pub fn kernel(f: &Field, rows: &[Vec<Fq>], ncols: usize) -> Vec<Vec<Fq>> {
    let echelon = rref(f, rows.to_vec());
    let piv = pivots(&echelon);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![Fq::ZERO; ncols];
        v[free] = Fq::ONE;
        for (row, &p) in echelon.iter().zip(&piv) {
            v[p] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// Matrix product `a · b` for row-major matrices.
pub fn mat_mul(f: &Field, a: &[Vec<Fq>], b: &[Vec<Fq>]) -> Vec<Vec<Fq>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Fq::ZERO, |acc, k| {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            f.add(acc, f.mul(row[k], b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert(f: &Field, m: &[Vec<Fq>]) -> Option<Vec<Vec<Fq>>> {
    let n = m.len();
    let augmented: Vec<Vec<Fq>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().copied().chain((0..n).map(|j| if i == j { Fq::ONE } else { Fq::ZERO })).collect())
        .collect();
    let reduced = rref(f, augmented);
    if reduced.len() < n || pivots(&reduced).iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(reduced.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Transpose of a row-major matrix.
pub fn transpose(m: &[Vec<Fq>]) -> Vec<Vec<Fq>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

/// A subspace of `F^ambient` stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Fq>>,
}

impl Subspace {
    /// Span of `rows` inside `F^ambient`.
    pub fn span(f: &Field, ambient: usize, rows: Vec<Vec<Fq>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        Subspace { ambient, basis: rref(f, rows) }
    }

    /// Wraps rows already in reduced row echelon form.
    pub fn from_rref(ambient: usize, basis: Vec<Vec<Fq>>) -> Self {
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Fq::ONE } else { Fq::ZERO }).collect())
            .collect();
        Subspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Fq>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        pivots(&self.basis)
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in the span.
    pub fn reduce(&self, f: &Field, v: &[Fq]) -> Vec<Fq> {
        let mut v = v.to_vec();
        for (row, p) in self.basis.iter().zip(self.pivots()) {
            let c = v[p];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, f: &Field, v: &[Fq]) -> bool {
        self.reduce(f, v).iter().all(|x| x.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, f: &Field, other: &Subspace) -> bool {
        other.dim() <= self.dim() && other.basis.iter().all(|v| self.contains_vector(f, v))
    }

    /// Coordinates of `v ∈ self` in the echelon basis.
    pub fn coordinates(&self, v: &[Fq]) -> Vec<Fq> {
        self.pivots().into_iter().map(|p| v[p]).collect()
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(f, self.ambient, rows)
    }

    /// Annihilator under the standard bilinear dot product.
    pub fn annihilator(&self, f: &Field) -> Subspace {
        Subspace::span(f, self.ambient, kernel(f, &self.basis, self.ambient))
    }

    pub fn intersect(&self, f: &Field, other: &Subspace) -> Subspace {
        self.annihilator(f).sum(f, &other.annihilator(f)).annihilator(f)
    }

    /// Applies a field map entrywise; the result is re-echelonized.
    pub fn map_entries(&self, f: &Field, map: impl Fn(Fq) -> Fq) -> Subspace {
        let rows = self.basis.iter().map(|r| r.iter().map(|&x| map(x)).collect()).collect();
        Subspace::span(f, self.ambient, rows)
    }

    /// True when every basis entry satisfies `pred`; for an echelon basis this
    /// decides whether the subspace is defined over the corresponding subfield.
    pub fn entries_satisfy(&self, pred: impl Fn(Fq) -> bool) -> bool {
        self.basis.iter().flatten().all(|&x| pred(x))
    }
}

/// Largest ambient dimension of a [`FixedSpace`].
pub const FIXED_DIM: usize = 8;

type Row = [Fq; 2 * FIXED_DIM];

/// Echelonizes the first `n` rows over `ncols` columns in place and returns the rank.
fn echelon_fixed(f: &Field, rows: &mut [Row], n: usize, ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][col]);
        for x in rows[rank][col..ncols].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[rank];
        for (r, row) in rows[..n].iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = f.neg(row[col]);
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    row[c] = f.add(row[c], f.mul(factor, pivot_row[c]));
                }
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

/// A subspace of `k^d` with `d ≤ FIXED_DIM`, stored inline in reduced row echelon form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FixedSpace {
    ambient: u8,
    dim: u8,
    rows: [[Fq; FIXED_DIM]; FIXED_DIM],
}

impl FixedSpace {
    fn from_buffer(ambient: usize, buf: &[Row], rank: usize, offset: usize) -> Self {
        let mut rows = [[Fq::ZERO; FIXED_DIM]; FIXED_DIM];
        for (dst, src) in rows.iter_mut().zip(&buf[..rank]) {
            dst[..ambient].copy_from_slice(&src[offset..offset + ambient]);
        }
        FixedSpace { ambient: ambient as u8, dim: rank as u8, rows }
    }

    /// Span of the given vectors; `None` when `ambient > FIXED_DIM`.
    pub fn span<'a>(f: &Field, ambient: usize, vectors: impl IntoIterator<Item = &'a [Fq]>) -> Option<Self> {
        if ambient > FIXED_DIM {
            return None;
        }
        let mut buf = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        let mut n = 0;
        for v in vectors {
            if n == 2 * FIXED_DIM {
                let rank = echelon_fixed(f, &mut buf, n, ambient);
                n = rank;
            }
            buf[n][..ambient].copy_from_slice(&v[..ambient]);
            n += 1;
        }
        let rank = echelon_fixed(f, &mut buf, n, ambient);
        Some(Self::from_buffer(ambient, &buf, rank, 0))
    }

    pub fn zero(ambient: usize) -> Self {
        FixedSpace { ambient: ambient as u8, dim: 0, rows: [[Fq::ZERO; FIXED_DIM]; FIXED_DIM] }
    }

    pub fn full(ambient: usize) -> Self {
        let mut rows = [[Fq::ZERO; FIXED_DIM]; FIXED_DIM];
        for (i, row) in rows.iter_mut().enumerate().take(ambient) {
            row[i] = Fq::ONE;
        }
        FixedSpace { ambient: ambient as u8, dim: ambient as u8, rows }
    }

    pub fn from_subspace(s: &Subspace) -> Option<Self> {
        if s.ambient_dim() > FIXED_DIM {
            return None;
        }
        let mut rows = [[Fq::ZERO; FIXED_DIM]; FIXED_DIM];
        for (dst, src) in rows.iter_mut().zip(s.basis()) {
            dst[..src.len()].copy_from_slice(src);
        }
        Some(FixedSpace { ambient: s.ambient_dim() as u8, dim: s.dim() as u8, rows })
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::from_rref(self.ambient(), self.basis().map(<[Fq]>::to_vec).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn ambient(&self) -> usize {
        self.ambient as usize
    }

    /// Echelon basis rows.
    pub fn basis(&self) -> impl Iterator<Item = &[Fq]> + '_ {
        self.rows[..self.dim()].iter().map(|r| &r[..self.ambient()])
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis().map(|r| r.iter().position(|c| !c.is_zero()).expect("echelon rows are nonzero")).collect()
    }

    fn stacked(&self, other: &FixedSpace) -> ([Row; 2 * FIXED_DIM], usize) {
        let d = self.ambient();
        let mut buf = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        for (dst, src) in buf.iter_mut().zip(self.basis().chain(other.basis())) {
            dst[..d].copy_from_slice(src);
        }
        (buf, self.dim() + other.dim())
    }

    pub fn sum(&self, f: &Field, other: &FixedSpace) -> FixedSpace {
        let (mut buf, n) = self.stacked(other);
        let rank = echelon_fixed(f, &mut buf, n, self.ambient());
        Self::from_buffer(self.ambient(), &buf, rank, 0)
    }

    pub fn sum_dim(&self, f: &Field, other: &FixedSpace) -> usize {
        let (mut buf, n) = self.stacked(other);
        echelon_fixed(f, &mut buf, n, self.ambient())
    }

    pub fn intersection_dim(&self, f: &Field, other: &FixedSpace) -> usize {
        self.dim() + other.dim() - self.sum_dim(f, other)
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, f: &Field, other: &FixedSpace) -> FixedSpace {
        let d = self.ambient();
        let mut buf = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        for (dst, src) in buf.iter_mut().zip(self.basis()) {
            dst[..d].copy_from_slice(src);
            dst[d..2 * d].copy_from_slice(src);
        }
        for (dst, src) in buf[self.dim()..].iter_mut().zip(other.basis()) {
            dst[..d].copy_from_slice(src);
        }
        let n = self.dim() + other.dim();
        let rank = echelon_fixed(f, &mut buf, n, 2 * d);
        let start = buf[..rank].iter().position(|r| r[..d].iter().all(|c| c.is_zero())).unwrap_or(rank);
        let mut tail = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        tail[..rank - start].copy_from_slice(&buf[start..rank]);
        let k = echelon_fixed(f, &mut tail[..], rank - start, 2 * d);
        let mut out = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        for (dst, src) in out.iter_mut().zip(&tail[..k]) {
            dst[..d].copy_from_slice(&src[d..2 * d]);
        }
        Self::from_buffer(d, &out, k, 0)
    }

    /// `{x : Σ_a x_a map(u_a) = 0 for all u}` for the given entrywise map.
    pub fn annihilator_with(&self, f: &Field, map: impl Fn(Fq) -> Fq) -> FixedSpace {
        let d = self.ambient();
        let mut buf = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        for (dst, src) in buf.iter_mut().zip(self.basis()) {
            for (x, &y) in dst.iter_mut().zip(src) {
                *x = map(y);
            }
        }
        let rank = echelon_fixed(f, &mut buf, self.dim(), d);
        let mut pivot_of = [usize::MAX; FIXED_DIM];
        for (r, row) in buf[..rank].iter().enumerate() {
            let p = row[..d].iter().position(|c| !c.is_zero()).expect("echelon rows are nonzero");
            pivot_of[p] = r;
        }
        let mut out = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        let mut n = 0;
        for c in (0..d).filter(|&c| pivot_of[c] == usize::MAX) {
            out[n][c] = Fq::ONE;
            for p in 0..d {
                if pivot_of[p] != usize::MAX {
                    out[n][p] = f.neg(buf[pivot_of[p]][c]);
                }
            }
            n += 1;
        }
        let rank = echelon_fixed(f, &mut out, n, d);
        Self::from_buffer(d, &out, rank, 0)
    }

    /// Applies a field automorphism entrywise.
    pub fn map_entries(&self, f: &Field, map: impl Fn(Fq) -> Fq) -> FixedSpace {
        let d = self.ambient();
        let mut buf = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        for (dst, src) in buf.iter_mut().zip(self.basis()) {
            for (x, &y) in dst.iter_mut().zip(src) {
                *x = map(y);
            }
        }
        let rank = echelon_fixed(f, &mut buf, self.dim(), d);
        Self::from_buffer(d, &buf, rank, 0)
    }

    pub fn contains_vector(&self, f: &Field, v: &[Fq]) -> bool {
        let d = self.ambient();
        let mut buf = [[Fq::ZERO; 2 * FIXED_DIM]; 2 * FIXED_DIM];
        for (dst, src) in buf.iter_mut().zip(self.basis().chain(std::iter::once(v))) {
            dst[..d].copy_from_slice(&src[..d]);
        }
        echelon_fixed(f, &mut buf, self.dim() + 1, d) == self.dim()
    }
}

/// Number of `k`-dimensional subspaces of a `dim`-dimensional space over a field with `size` elements.
pub fn gaussian_binomial(size: u128, dim: usize, k: usize) -> u128 {
    if k > dim {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(size.saturating_pow((dim - i) as u32).saturating_sub(1));
        den = den.saturating_mul(size.saturating_pow((i + 1) as u32).saturating_sub(1));
    }
    num / den
}

fn pivot_sets(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..dim {
            if dim - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    rec(0, dim, k, &mut cur, &mut out);
    out
}

/// Visits every `k`-dimensional subspace of `F^dim` whose echelon basis has
/// entries in `coeffs` (which must contain `0` and `1` and be a subfield).
/// Subspaces are visited in lexicographic order of pivot sets and free entries.
pub fn for_each_subspace<B>(
    dim: usize,
    k: usize,
    coeffs: &[Fq],
    mut visit: impl FnMut(&Subspace) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if k > dim {
        return ControlFlow::Continue(());
    }
    for piv in pivot_sets(dim, k) {
        let mut slots: Vec<(usize, usize)> = Vec::new();
        for (r, &p) in piv.iter().enumerate() {
            for c in p + 1..dim {
                if !piv.contains(&c) {
                    slots.push((r, c));
                }
            }
        }
        let mut basis: Vec<Vec<Fq>> = (0..k).map(|_| vec![Fq::ZERO; dim]).collect();
        for (r, &p) in piv.iter().enumerate() {
            basis[r][p] = Fq::ONE;
        }
        let mut digits = vec![0usize; slots.len()];
        loop {
            for (&(r, c), &d) in slots.iter().zip(&digits) {
                basis[r][c] = coeffs[d];
            }
            let sub = Subspace { ambient: dim, basis: basis.clone() };
            visit(&sub)?;
            let mut done = true;
            for pos in (0..slots.len()).rev() {
                digits[pos] += 1;
                if digits[pos] < coeffs.len() {
                    done = false;
                    break;
                }
                digits[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    ControlFlow::Continue(())
}

/// All `k`-dimensional subspaces with entries in `coeffs`.
pub fn subspaces(dim: usize, k: usize, coeffs: &[Fq]) -> Vec<Subspace> {
    let mut out = Vec::new();
    let _ = for_each_subspace::<()>(dim, k, coeffs, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn f9() -> Field {
        Field::new(FieldSpec::new(3, 1, 1)).unwrap()
    }

    #[test]
    fn grassmannian_counts_match_gaussian_binomials() {
        let f = f9();
        let all: Vec<Fq> = f.elements().collect();
        for dim in 0..=3 {
            for k in 0..=dim {
                assert_eq!(subspaces(dim, k, &all).len() as u128, gaussian_binomial(9, dim, k));
            }
        }
        let base: Vec<Fq> = f.elements().filter(|&x| f.in_subfield(x, 1)).collect();
        assert_eq!(subspaces(3, 1, &base).len(), 13);
    }

    #[test]
    fn intersection_and_sum_dimensions() {
        let f = f9();
        let a = Subspace::span(&f, 3, vec![vec![Fq::ONE, Fq::ZERO, Fq::ZERO], vec![Fq::ZERO, Fq::ONE, Fq::ZERO]]);
        let b = Subspace::span(&f, 3, vec![vec![Fq::ZERO, Fq::ONE, Fq::ZERO], vec![Fq::ZERO, Fq::ZERO, Fq::ONE]]);
        assert_eq!(a.intersect(&f, &b).dim(), 1);
        assert_eq!(a.sum(&f, &b).dim(), 3);
        assert!(a.contains(&f, &a.intersect(&f, &b)));
    }

    #[test]
    fn kernel_has_complementary_dimension() {
        let f = f9();
        let rows = vec![vec![Fq::ONE, Fq::ONE, Fq::ZERO]];
        let ker = kernel(&f, &rows, 3);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(mat_mul(&f, &rows, &v.iter().map(|&x| vec![x]).collect::<Vec<_>>())[0][0].is_zero());
        }
    }

    #[test]
    fn fixed_space_agrees_with_subspace() {
        let f = Field::new(FieldSpec::new(3, 1, 1)).unwrap();
        let coeffs: Vec<Fq> = f.elements().collect();
        let planes = subspaces(3, 2, &coeffs);
        let lines = subspaces(3, 1, &coeffs);
        for a in planes.iter().take(20) {
            for b in lines.iter().chain(planes.iter()).take(40) {
                let fa = FixedSpace::from_subspace(a).unwrap();
                let fb = FixedSpace::from_subspace(b).unwrap();
                assert_eq!(fa.intersect(&f, &fb).to_subspace(), a.intersect(&f, b));
                assert_eq!(fa.sum(&f, &fb).to_subspace(), a.sum(&f, b));
            }
            let fa = FixedSpace::from_subspace(a).unwrap();
            assert_eq!(fa.annihilator_with(&f, |x| x).to_subspace(), a.annihilator(&f));
        }
    }
}
