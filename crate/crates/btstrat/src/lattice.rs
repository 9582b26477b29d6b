//! Window lattices in an `n`-dimensional hermitian space over `F[[π]]`.
//!
//! A lattice `L` with `π^N Λ_std ⊆ L ⊆ π^{-N} Λ_std` is stored through the
//! scaled lattice `π^N L`, a submodule of `R^n` containing `π^{2N} R^n`
//! where `R = F[[π]]`. Its canonical basis is the lower-triangular column
//! Hermite form: column `j` has diagonal entry exactly `π^{a_j}` and every
//! entry `(i, j)` with `i > j` has degree `< a_i`. Because the scaled lattice
//! contains `π^{2N} R^n`, computations modulo `π^{2N}` are exact.
//!
//! The pairing is `{v, w} = vᵀ G σ(w)` with a diagonal gram `G` whose entries
//! are `1` or `π`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::linalg::Subspace;
use crate::series::{Laurent, TruncSeries, MAX_PRECISION};

/// Which of the two gram fixtures an ambient space carries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum GramKind {
    /// `diag(1, …, 1)`, determinant of valuation 0.
    Identity,
    /// `diag(1, …, 1, π)`, determinant of valuation 1.
    LastPi,
}

impl GramKind {
    /// Valuation of the determinant.
    pub fn det_valuation(self) -> usize {
        match self {
            GramKind::Identity => 0,
            GramKind::LastPi => 1,
        }
    }

    /// The fixture realizing points for a tuple entry `h` in dimension `n`.
    pub fn for_parity(n: usize, h: usize) -> Self {
        if (h + n + 1) % 2 == 0 {
            GramKind::Identity
        } else {
            GramKind::LastPi
        }
    }
}

/// The hermitian space `C` with its window radius.
#[derive(Clone, Debug)]
pub struct AmbientSpace {
    field: Arc<Field>,
    n: usize,
    radius: usize,
    gram: GramKind,
    gram_exps: Vec<usize>,
}

/// A lattice in canonical form; equality of values is equality of lattices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WindowLattice {
    /// Diagonal exponents `a_j` of the scaled basis.
    diag: Vec<u8>,
    /// Column-major scaled basis, `cols[j * n + i]` is entry `(i, j)`.
    cols: Vec<TruncSeries>,
}

/// A vertex lattice `π^{i+1}Λ^∨ ⊆ Λ ⊆ π^iΛ^∨` of rank `i` and type `t`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexLattice {
    pub lattice: WindowLattice,
    pub rank: i32,
    pub type_t: usize,
}

impl WindowLattice {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal exponents of the scaled canonical basis.
    pub fn diagonal(&self) -> &[u8] {
        &self.diag
    }

    /// Entry `(i, j)` of the scaled canonical basis.
    pub fn entry(&self, i: usize, j: usize) -> &TruncSeries {
        &self.cols[j * self.dim() + i]
    }

    fn column(&self, j: usize) -> Vec<TruncSeries> {
        let n = self.dim();
        self.cols[j * n..(j + 1) * n].to_vec()
    }

    fn columns(&self) -> Vec<Vec<TruncSeries>> {
        (0..self.dim()).map(|j| self.column(j)).collect()
    }
}

/// Hermite form of the module generated by `gens` (columns of length
/// `rows`) plus `π^prec R^rows`. Returns the basis columns and diagonal exponents.
fn hermite(f: &Field, rows: usize, prec: usize, mut gens: Vec<Vec<TruncSeries>>) -> (Vec<Vec<TruncSeries>>, Vec<usize>) {
    let mut basis: Vec<Vec<TruncSeries>> = Vec::with_capacity(rows);
    let mut diag = Vec::with_capacity(rows);
    for i in 0..rows {
        gens.retain(|g| g[i..].iter().any(|e| !e.is_zero()));
        let best = gens
            .iter()
            .enumerate()
            .map(|(k, g)| (g[i].valuation(), k))
            .min();
        match best {
            Some((a, k)) if a < prec => {
                let mut piv = gens.swap_remove(k);
                let unit_inv = piv[i].shift_down(a).unit_inverse(f);
                for e in piv[i..].iter_mut() {
                    *e = e.mul(&unit_inv, f);
                }
                piv[i] = TruncSeries::monomial(Fq::ONE, a, prec);
                for g in gens.iter_mut() {
                    if g[i].is_zero() {
                        continue;
                    }
                    let quot = g[i].shift_down(a);
                    for r in i + 1..rows {
                        if !piv[r].is_zero() {
                            g[r] = g[r].sub(&quot.mul(&piv[r], f), f);
                        }
                    }
                    g[i] = TruncSeries::zero(prec);
                }
                basis.push(piv);
                diag.push(a);
            }
            _ => {
                for g in gens.iter_mut() {
                    g[i] = TruncSeries::zero(prec);
                }
                basis.push(vec![TruncSeries::zero(prec); rows]);
                diag.push(prec);
            }
        }
    }
    for j in 0..rows {
        for i in j + 1..rows {
            let a = diag[i];
            if a >= prec || basis[j][i].valuation() >= prec {
                continue;
            }
            let high = basis[j][i].high_part(a);
            if high.is_zero() {
                continue;
            }
            let (left, right) = basis.split_at_mut(i);
            let col = &mut left[j];
            let piv = &right[0];
            col[i] = col[i].truncate(a);
            for r in i + 1..rows {
                if !piv[r].is_zero() {
                    col[r] = col[r].sub(&high.mul(&piv[r], f), f);
                }
            }
        }
    }
    (basis, diag)
}

/// Determinant of a square matrix of Laurent polynomials by cofactor expansion.
fn laurent_det(f: &Field, m: &[Vec<Laurent>]) -> Laurent {
    let n = m.len();
    if n == 0 {
        return Laurent::monomial(Fq::ONE, 0);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Laurent::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Laurent>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][c].mul(&laurent_det(f, &minor), f);
        acc = if c % 2 == 0 { acc.add(&term, f) } else { acc.sub(&term, f) };
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl AmbientSpace {
    /// Ambient space of dimension `n` with window radius `radius`.
    pub fn new(field: Arc<Field>, n: usize, radius: usize, gram: GramKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("dimension must be positive".into()));
        }
        if 2 * radius > MAX_PRECISION || radius == 0 {
            return Err(Error::Precondition(format!("window radius {radius} outside 1..={}", MAX_PRECISION / 2)));
        }
        let mut gram_exps = vec![0; n];
        if gram == GramKind::LastPi {
            gram_exps[n - 1] = 1;
        }
        Ok(AmbientSpace { field, n, radius, gram, gram_exps })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        self.field.clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn gram(&self) -> GramKind {
        self.gram
    }

    /// Valuation of the gram determinant.
    pub fn det_valuation(&self) -> usize {
        self.gram.det_valuation()
    }

    /// Precision `2N` of the scaled representation.
    pub fn precision(&self) -> usize {
        2 * self.radius
    }

    /// Gram matrix entries as truncated series (row-major).
    pub fn gram_matrix(&self) -> Vec<Vec<TruncSeries>> {
        let prec = self.precision();
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        if i == j {
                            TruncSeries::monomial(Fq::ONE, self.gram_exps[i], prec)
                        } else {
                            TruncSeries::zero(prec)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn build(&self, basis: Vec<Vec<TruncSeries>>, diag: Vec<usize>) -> WindowLattice {
        let n = self.n;
        let mut cols = Vec::with_capacity(n * n);
        for c in basis {
            cols.extend(c);
        }
        WindowLattice { diag: diag.into_iter().map(|a| a as u8).collect(), cols }
    }

    fn from_scaled_generators(&self, gens: Vec<Vec<TruncSeries>>) -> WindowLattice {
        let (basis, diag) = hermite(&self.field, self.n, self.precision(), gens);
        self.build(basis, diag)
    }

    /// `π^k Λ_std` for `-N ≤ k ≤ N`.
    pub fn scaled_standard(&self, k: i32) -> Result<WindowLattice> {
        let r = self.radius as i32;
        if k < -r || k > r {
            return Err(Error::WindowOverflow(format!("π^{k}Λ_std outside radius {r}")));
        }
        let prec = self.precision();
        let e = (k + r) as usize;
        let gens = (0..self.n)
            .map(|j| {
                (0..self.n)
                    .map(|i| if i == j { TruncSeries::monomial(Fq::ONE, e, prec) } else { TruncSeries::zero(prec) })
                    .collect()
            })
            .collect();
        Ok(self.from_scaled_generators(gens))
    }

    /// The standard lattice `Λ_std`.
    pub fn standard(&self) -> WindowLattice {
        self.scaled_standard(0).expect("radius is positive")
    }

    /// Canonical form of the lattice spanned by exact generator columns.
    ///
    /// Fails when the generators are rank deficient or when the spanned
    /// module does not lie between `π^N Λ_std` and `π^{-N} Λ_std`.
    pub fn canonicalize(&self, generators: &[Vec<Laurent>]) -> Result<WindowLattice> {
        let n = self.n;
        let f = &*self.field;
        let r = self.radius as i32;
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::Precondition("generator length differs from dimension".into()));
        }
        if generators.len() < n {
            return Err(Error::RankDeficient { rank: generators.len(), dim: n });
        }
        if generators.len() > 12 {
            return Err(Error::SizeGuard { what: "generator count".into(), needed: generators.len() as u128, limit: 12 });
        }
        let mut min_val: Option<i32> = None;
        for cols in combinations(generators.len(), n) {
            let m: Vec<Vec<Laurent>> = (0..n).map(|i| cols.iter().map(|&c| generators[c][i].clone()).collect()).collect();
            if let Some(v) = laurent_det(f, &m).valuation() {
                min_val = Some(min_val.map_or(v, |x: i32| x.min(v)));
            }
        }
        let Some(det_val) = min_val else {
            let rank = generators.len().min(n - 1);
            return Err(Error::RankDeficient { rank, dim: n });
        };
        let prec = self.precision();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            let mut col = Vec::with_capacity(n);
            for x in g {
                let s = x
                    .to_series(r, prec)
                    .ok_or_else(|| Error::WindowOverflow("generator entry below π^{-N}".into()))?;
                col.push(s);
            }
            gens.push(col);
        }
        let lat = self.from_scaled_generators(gens);
        let scaled_index: i32 = lat.diag.iter().map(|&a| a as i32).sum();
        if scaled_index != det_val + r * n as i32 {
            return Err(Error::WindowOverflow("lattice does not contain π^N Λ_std".into()));
        }
        Ok(lat)
    }

    /// Canonical form from generators with coefficients in `F` and `π`-exponents:
    /// each generator is a list of `(row, exponent, coefficient)` terms.
    pub fn lattice_from_terms(&self, generators: &[Vec<(usize, i32, Fq)>]) -> Result<WindowLattice> {
        let f = &*self.field;
        let gens: Vec<Vec<Laurent>> = generators
            .iter()
            .map(|terms| {
                let mut col = vec![Laurent::zero(); self.n];
                for &(row, k, c) in terms {
                    col[row] = col[row].add(&Laurent::monomial(c, k), f);
                }
                col
            })
            .collect();
        self.canonicalize(&gens)
    }

    /// Exact entry `(i, j)` of the canonical basis as a Laurent polynomial.
    pub fn basis_entry(&self, l: &WindowLattice, i: usize, j: usize) -> Laurent {
        Laurent::from_series(l.entry(i, j), self.radius as i32)
    }

    /// Column `j` of the canonical basis as an exact vector of `C`.
    pub fn basis_vector(&self, l: &WindowLattice, j: usize) -> Vec<Laurent> {
        (0..self.n).map(|i| self.basis_entry(l, i, j)).collect()
    }

    /// The hermitian pairing `{v, w} = Σ g_k v_k σ(w_k)`.
    pub fn pairing(&self, v: &[Laurent], w: &[Laurent]) -> Laurent {
        let f = &*self.field;
        let mut acc = Laurent::zero();
        for k in 0..self.n {
            if v[k].is_zero() || w[k].is_zero() {
                continue;
            }
            let term = v[k].mul(&w[k].sigma_pow(1, f), f).mul_monomial(Fq::ONE, self.gram_exps[k] as i32, f);
            acc = acc.add(&term, f);
        }
        acc
    }

    /// Signed index `[L : Λ_std]`.
    pub fn volume(&self, l: &WindowLattice) -> i64 {
        (self.n * self.radius) as i64 - l.diag.iter().map(|&a| a as i64).sum::<i64>()
    }

    /// Reduces a scaled column modulo `l`; returns the remainder, `None` if not in `l`.
    fn reduce(&self, l: &WindowLattice, mut v: Vec<TruncSeries>) -> Option<Vec<TruncSeries>> {
        let f = &*self.field;
        let prec = self.precision();
        let n = self.n;
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            let a = l.diag[i] as usize;
            if v[i].valuation() < a {
                return None;
            }
            if a >= prec {
                continue;
            }
            let quot = v[i].shift_down(a);
            for r in i + 1..n {
                let e = l.entry(r, i);
                if !e.is_zero() {
                    v[r] = v[r].sub(&quot.mul(e, f), f);
                }
            }
            v[i] = TruncSeries::zero(prec);
        }
        Some(v)
    }

    /// `small ⊆ big`.
    pub fn contains(&self, big: &WindowLattice, small: &WindowLattice) -> bool {
        if big.diag.iter().zip(&small.diag).any(|(_, _)| false) {
            return false;
        }
        let pb: i64 = big.diag.iter().map(|&a| a as i64).sum();
        let ps: i64 = small.diag.iter().map(|&a| a as i64).sum();
        if ps < pb {
            return false;
        }
        (0..self.n).all(|j| self.reduce(big, small.column(j)).is_some())
    }

    /// Length of `big / small`.
    pub fn index_in(&self, small: &WindowLattice, big: &WindowLattice) -> Result<usize> {
        if !self.contains(big, small) {
            return Err(Error::NotContained);
        }
        let pb: usize = big.diag.iter().map(|&a| a as usize).sum();
        let ps: usize = small.diag.iter().map(|&a| a as usize).sum();
        Ok(ps - pb)
    }

    /// `A + B`.
    pub fn sum(&self, a: &WindowLattice, b: &WindowLattice) -> WindowLattice {
        let mut gens = a.columns();
        gens.extend(b.columns());
        self.from_scaled_generators(gens)
    }

    /// Sum of several lattices.
    pub fn sum_all<'a>(&self, ls: impl IntoIterator<Item = &'a WindowLattice>) -> Option<WindowLattice> {
        let gens: Vec<Vec<TruncSeries>> = ls.into_iter().flat_map(|l| l.columns()).collect();
        (!gens.is_empty()).then(|| self.from_scaled_generators(gens))
    }

    /// `A ∩ B` via the Hermite form of `[[A, B], [A, 0]]`.
    pub fn intersect(&self, a: &WindowLattice, b: &WindowLattice) -> WindowLattice {
        let n = self.n;
        let prec = self.precision();
        let mut gens = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut c = a.column(j);
            c.extend(a.column(j));
            gens.push(c);
        }
        for j in 0..n {
            let mut c = b.column(j);
            c.extend(vec![TruncSeries::zero(prec); n]);
            gens.push(c);
        }
        let (basis, diag) = hermite(&self.field, 2 * n, prec, gens);
        let lower: Vec<Vec<TruncSeries>> = basis[n..].iter().map(|c| c[n..].to_vec()).collect();
        self.build(lower, diag[n..].to_vec())
    }

    /// `(A + B, A ∩ B)`.
    pub fn sum_intersect(&self, a: &WindowLattice, b: &WindowLattice) -> (WindowLattice, WindowLattice) {
        (self.sum(a, b), self.intersect(a, b))
    }

    /// Coefficientwise `σ^k`.
    pub fn sigma_pow(&self, l: &WindowLattice, k: i64) -> WindowLattice {
        let f = &*self.field;
        WindowLattice { diag: l.diag.clone(), cols: l.cols.iter().map(|s| s.sigma_pow(k, f)).collect() }
    }

    /// `τ^k = σ^{2k}`.
    pub fn tau_pow(&self, l: &WindowLattice, k: i64) -> WindowLattice {
        self.sigma_pow(l, 2 * k)
    }

    pub fn tau(&self, l: &WindowLattice) -> WindowLattice {
        self.tau_pow(l, 1)
    }

    /// `tau_apply` applied `times` times.
    pub fn tau_apply(&self, l: &WindowLattice, times: u32) -> WindowLattice {
        self.tau_pow(l, times as i64)
    }

    /// True when `τ(L) = L`, i.e. `L` is defined over `F_{q^2}`.
    pub fn is_rational(&self, l: &WindowLattice) -> bool {
        self.tau(l) == *l
    }

    /// `π^k L`.
    pub fn pi_mul(&self, l: &WindowLattice, k: i32) -> Result<WindowLattice> {
        let prec = self.precision();
        let n = self.n;
        if k == 0 {
            return Ok(l.clone());
        }
        if k > 0 {
            let k = k as usize;
            let floor = self.scaled_standard(self.radius as i32 - k as i32)?;
            if !self.contains(l, &floor) {
                return Err(Error::WindowOverflow(format!("π^{k}·L leaves the window")));
            }
            let gens = l.columns().into_iter().map(|c| c.iter().map(|s| s.shift_up(k)).collect()).collect();
            Ok(self.from_scaled_generators(gens))
        } else {
            let k = (-k) as usize;
            if l.cols.iter().any(|s| s.valuation() < k) {
                return Err(Error::WindowOverflow(format!("π^-{k}·L leaves the window")));
            }
            let mut gens: Vec<Vec<TruncSeries>> =
                l.columns().into_iter().map(|c| c.iter().map(|s| s.shift_down(k)).collect()).collect();
            for j in 0..n {
                gens.push(
                    (0..n)
                        .map(|i| if i == j { TruncSeries::monomial(Fq::ONE, prec - k, prec) } else { TruncSeries::zero(prec) })
                        .collect(),
                );
            }
            Ok(self.from_scaled_generators(gens))
        }
    }

    /// `L^∨ = {v : {v, L} ⊆ R}`.
    pub fn dual(&self, l: &WindowLattice) -> Result<WindowLattice> {
        let f = &*self.field;
        let n = self.n;
        let prec = self.precision();
        // X = G σ(M), lower triangular with monomial diagonal.
        let x: Vec<Vec<Laurent>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j > i {
                            Laurent::zero()
                        } else {
                            Laurent::from_series(&l.entry(i, j).sigma(f), 0).mul_monomial(Fq::ONE, self.gram_exps[i] as i32, f)
                        }
                    })
                    .collect()
            })
            .collect();
        // Y = X^{-1} by forward substitution.
        let mut y = vec![vec![Laurent::zero(); n]; n];
        for j in 0..n {
            let dj = (l.diag[j] as usize + self.gram_exps[j]) as i32;
            y[j][j] = Laurent::monomial(Fq::ONE, -dj);
            for i in j + 1..n {
                let mut acc = Laurent::zero();
                for k in j..i {
                    if !x[i][k].is_zero() && !y[k][j].is_zero() {
                        acc = acc.add(&x[i][k].mul(&y[k][j], f), f);
                    }
                }
                let di = (l.diag[i] as usize + self.gram_exps[i]) as i32;
                y[i][j] = acc.mul_monomial(f.neg(Fq::ONE), -di, f);
            }
        }
        // Scaled dual basis: columns of π^{2N} Yᵀ, i.e. rows of Y.
        let mut gens = Vec::with_capacity(n);
        for row in y.iter() {
            let mut col = Vec::with_capacity(n);
            for e in row {
                let s = e
                    .to_series(prec as i32, prec)
                    .ok_or_else(|| Error::WindowOverflow("dual lattice leaves the window".into()))?;
                col.push(s);
            }
            gens.push(col);
        }
        Ok(self.from_scaled_generators(gens))
    }

    /// `T_c(L) = L + τL + … + τ^{c-1}L` for the least `c` making it `τ`-stable.
    pub fn tau_closure(&self, l: &WindowLattice) -> Result<(usize, WindowLattice)> {
        let bound = 2 * self.field.spec().d as usize + 2;
        let mut cur = l.clone();
        for c in 1..=bound {
            let next = self.sum(l, &self.tau(&cur));
            if next == cur {
                return Ok((c, cur));
            }
            cur = next;
        }
        Err(Error::WindowOverflow("τ-closure did not stabilize".into()))
    }

    /// The chain `T_1(L) ⊆ T_2(L) ⊆ … ⊆ T_c(L)`.
    pub fn tau_chain(&self, l: &WindowLattice) -> Result<Vec<WindowLattice>> {
        let (c, _) = self.tau_closure(l)?;
        let mut out = vec![l.clone()];
        for _ in 1..c {
            let next = self.sum(l, &self.tau(out.last().expect("nonempty")));
            out.push(next);
        }
        Ok(out)
    }

    /// Type parity for rank `i`: `t ≡ det_val + n(i+1) (mod 2)`.
    pub fn expected_type_parity(&self, rank: i32) -> usize {
        ((self.det_valuation() as i64 + self.n as i64 * (rank as i64 + 1)).rem_euclid(2)) as usize
    }

    /// Recognizes `L` as a vertex lattice of rank `i`.
    pub fn vertex_recognize(&self, l: &WindowLattice, rank: i32) -> Result<Option<VertexLattice>> {
        if !self.is_rational(l) {
            return Ok(None);
        }
        let dual = self.dual(l)?;
        let upper = match self.pi_mul(&dual, rank) {
            Ok(x) => x,
            Err(Error::WindowOverflow(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let lower = match self.pi_mul(&dual, rank + 1) {
            Ok(x) => x,
            Err(Error::WindowOverflow(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if !self.contains(&upper, l) || !self.contains(l, &lower) {
            return Ok(None);
        }
        let t = self.index_in(&lower, l)?;
        if t % 2 != self.expected_type_parity(rank) || t > self.n {
            return Err(Error::Precondition(format!("vertex lattice of rank {rank} has type {t} of wrong parity")));
        }
        Ok(Some(VertexLattice { lattice: l.clone(), rank, type_t: t }))
    }

    /// `[Λ : π^{i+1}Λ^∨]` for a lattice already known to be a vertex lattice of rank `i`.
    pub fn vertex_type(&self, l: &WindowLattice, rank: i32) -> Result<usize> {
        let lower = self.pi_mul(&self.dual(l)?, rank + 1)?;
        self.index_in(&lower, l)
    }

    /// Coordinates modulo `π` of `v ∈ up` in the canonical basis of `up`.
    fn coordinates_mod_pi(&self, up: &WindowLattice, mut v: Vec<TruncSeries>) -> Option<Vec<Fq>> {
        let f = &*self.field;
        let prec = self.precision();
        let n = self.n;
        let mut out = vec![Fq::ZERO; n];
        for i in 0..n {
            let a = up.diag[i] as usize;
            if v[i].is_zero() {
                continue;
            }
            if a >= prec || v[i].valuation() < a {
                return None;
            }
            let quot = v[i].shift_down(a);
            out[i] = quot.coeff(0);
            for r in i + 1..n {
                let e = up.entry(r, i);
                if !e.is_zero() {
                    v[r] = v[r].sub(&quot.mul(e, f), f);
                }
            }
            v[i] = TruncSeries::zero(prec);
        }
        Some(out)
    }

    /// Describes `low ⊆ X ⊆ up` for `π·up ⊆ low ⊆ up` as a vector space.
    pub fn interval(&self, low: &WindowLattice, up: &WindowLattice) -> Result<LatticeInterval> {
        let prec = self.precision();
        if !self.contains(up, low) {
            return Err(Error::NotContained);
        }
        if up.diag.iter().any(|&a| a as usize >= prec) {
            return Err(Error::WindowOverflow("upper lattice touches the window floor".into()));
        }
        let pi_up = self.pi_mul(up, 1)?;
        if !self.contains(low, &pi_up) {
            return Err(Error::Precondition("interval is not killed by π".into()));
        }
        let f = &*self.field;
        let mut rows: Vec<Vec<Fq>> = Vec::new();
        for j in 0..self.n {
            let c = self.coordinates_mod_pi(up, low.column(j)).ok_or(Error::NotContained)?;
            rows.push(c);
        }
        let low_space = Subspace::span(f, self.n, rows);
        let pivots = low_space.pivots();
        let free: Vec<usize> = (0..self.n).filter(|c| !pivots.contains(c)).collect();
        Ok(LatticeInterval { low: low.clone(), up: up.clone(), low_space, free })
    }

    /// The lattice `low + Σ lift(v)` for coordinate vectors `v` on the free positions.
    pub fn interval_lift(&self, iv: &LatticeInterval, vectors: &[Vec<Fq>]) -> WindowLattice {
        let f = &*self.field;
        let prec = self.precision();
        let n = self.n;
        let mut gens = iv.low.columns();
        for v in vectors {
            let mut col = vec![TruncSeries::zero(prec); n];
            for (k, &pos) in iv.free.iter().enumerate() {
                let c = v[k];
                if c.is_zero() {
                    continue;
                }
                for r in pos..n {
                    let e = iv.up.entry(r, pos);
                    if !e.is_zero() {
                        col[r] = col[r].add(&e.scale(c, f), f);
                    }
                }
            }
            gens.push(col);
        }
        self.from_scaled_generators(gens)
    }

    /// Inverse of [`Self::interval_lift`]: the subspace `X / low` in free coordinates,
    /// or `None` when `X` is not between `low` and `up`.
    pub fn interval_coordinates(&self, iv: &LatticeInterval, x: &WindowLattice) -> Option<Subspace> {
        let f = &*self.field;
        if !self.contains(x, &iv.low) {
            return None;
        }
        let mut rows = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let c = self.coordinates_mod_pi(&iv.up, x.column(j))?;
            let reduced = iv.low_space.reduce(f, &c);
            rows.push(iv.free.iter().map(|&p| reduced[p]).collect());
        }
        Some(Subspace::span(f, iv.free.len(), rows))
    }

    /// Free coordinates of a vector of `up` modulo `low`, given as exact Laurent entries.
    pub fn interval_vector_coordinates(&self, iv: &LatticeInterval, v: &[Laurent]) -> Result<Vec<Fq>> {
        let prec = self.precision();
        let r = self.radius as i32;
        let mut col = Vec::with_capacity(self.n);
        for x in v {
            col.push(x.to_series(r, prec).ok_or_else(|| Error::WindowOverflow("vector below π^{-N}".into()))?);
        }
        let c = self.coordinates_mod_pi(&iv.up, col).ok_or(Error::NotContained)?;
        let reduced = iv.low_space.reduce(&self.field, &c);
        Ok(iv.free.iter().map(|&p| reduced[p]).collect())
    }
}

/// The lattices between `low` and `up` with `π·up ⊆ low`, parametrized by
/// subspaces of the free coordinates of `up / low`.
#[derive(Clone, Debug)]
pub struct LatticeInterval {
    pub low: WindowLattice,
    pub up: WindowLattice,
    /// Image of `low` in `up / π up`, in the coordinates of the canonical basis of `up`.
    pub low_space: Subspace,
    /// Positions in the canonical basis of `up` spanning a complement of `low`.
    pub free: Vec<usize>,
}

impl LatticeInterval {
    /// `dim up / low`.
    pub fn dim(&self) -> usize {
        self.free.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn space(n: usize, gram: GramKind, d: u32) -> AmbientSpace {
        let f = Arc::new(Field::new(FieldSpec::new(3, 1, d)).unwrap());
        AmbientSpace::new(f, n, 3, gram).unwrap()
    }

    fn diag_lattice(amb: &AmbientSpace, exps: &[i32]) -> WindowLattice {
        let gens: Vec<Vec<(usize, i32, Fq)>> = exps.iter().enumerate().map(|(i, &k)| vec![(i, k, Fq::ONE)]).collect();
        amb.lattice_from_terms(&gens).unwrap()
    }

    #[test]
    fn identity_is_standard() {
        let amb = space(3, GramKind::Identity, 1);
        assert_eq!(diag_lattice(&amb, &[0, 0, 0]), amb.standard());
    }

    #[test]
    fn permuted_identity_is_standard() {
        let amb = space(3, GramKind::Identity, 1);
        let gens = vec![vec![(2, 0, Fq::ONE)], vec![(0, 0, Fq::ONE)], vec![(1, 0, Fq::ONE)]];
        assert_eq!(amb.lattice_from_terms(&gens).unwrap(), amb.standard());
    }

    #[test]
    fn pi_standard_differs() {
        let amb = space(2, GramKind::Identity, 1);
        let l = diag_lattice(&amb, &[1, 1]);
        assert_ne!(l, amb.standard());
        assert_eq!(l, amb.pi_mul(&amb.standard(), 1).unwrap());
    }

    #[test]
    fn standard_self_dual_for_identity_gram() {
        let amb = space(3, GramKind::Identity, 1);
        assert_eq!(amb.dual(&amb.standard()).unwrap(), amb.standard());
    }

    #[test]
    fn dual_for_last_pi_gram() {
        let amb = space(2, GramKind::LastPi, 1);
        assert_eq!(amb.dual(&amb.standard()).unwrap(), diag_lattice(&amb, &[0, -1]));
    }

    #[test]
    fn indices() {
        let amb = space(2, GramKind::Identity, 1);
        let l = amb.standard();
        assert_eq!(amb.index_in(&l, &l).unwrap(), 0);
        assert_eq!(amb.index_in(&amb.pi_mul(&l, 1).unwrap(), &l).unwrap(), 2);
        assert_eq!(amb.index_in(&diag_lattice(&amb, &[1, 0]), &l).unwrap(), 1);
        assert_eq!(amb.index_in(&l, &diag_lattice(&amb, &[1, 0])), Err(Error::NotContained));
    }

    #[test]
    fn sum_and_intersection_of_coordinate_lattices() {
        let amb = space(2, GramKind::Identity, 1);
        let a = diag_lattice(&amb, &[0, 1]);
        let b = diag_lattice(&amb, &[1, 0]);
        let (s, i) = amb.sum_intersect(&a, &b);
        assert_eq!(s, amb.standard());
        assert_eq!(i, amb.pi_mul(&amb.standard(), 1).unwrap());
        assert_eq!(amb.sum_intersect(&a, &a), (a.clone(), a.clone()));
    }

    #[test]
    fn tau_moves_irrational_generator() {
        let amb = space(2, GramKind::Identity, 2);
        let f = amb.field();
        let u = f.elements().find(|&x| !f.is_rational(x)).unwrap();
        let l = amb.lattice_from_terms(&[vec![(0, 0, Fq::ONE), (1, 0, u)], vec![(1, 1, Fq::ONE)]]).unwrap();
        let expected = amb
            .lattice_from_terms(&[vec![(0, 0, Fq::ONE), (1, 0, f.pow(u, 9))], vec![(1, 1, Fq::ONE)]])
            .unwrap();
        assert_eq!(amb.tau(&l), expected);
        assert_eq!(amb.tau_apply(&l, 2), l);
        let (c, closure) = amb.tau_closure(&l).unwrap();
        assert_eq!(c, 2);
        assert_eq!(closure, amb.sum(&l, &amb.tau(&l)));
    }

    #[test]
    fn vertex_recognition_of_standard() {
        let amb = space(3, GramKind::Identity, 1);
        let v = amb.vertex_recognize(&amb.standard(), 0).unwrap().unwrap();
        assert_eq!(v.type_t, 3);
        let pl = amb.pi_mul(&amb.standard(), 1).unwrap();
        assert_eq!(amb.vertex_recognize(&pl, 1).unwrap().unwrap().type_t, 0);
        assert_eq!(amb.vertex_recognize(&pl, 2).unwrap().unwrap().type_t, 3);
        assert!(amb.vertex_recognize(&pl, 0).unwrap().is_none());
    }

    #[test]
    fn window_overflow_is_reported() {
        let amb = space(2, GramKind::Identity, 1);
        let gens = vec![vec![(0, -4, Fq::ONE)], vec![(1, 0, Fq::ONE)]];
        assert!(matches!(amb.lattice_from_terms(&gens), Err(Error::WindowOverflow(_))));
        let deficient = vec![vec![(0, 0, Fq::ONE)], vec![(0, 1, Fq::ONE)]];
        assert!(matches!(amb.lattice_from_terms(&deficient), Err(Error::RankDeficient { .. })));
    }
}
