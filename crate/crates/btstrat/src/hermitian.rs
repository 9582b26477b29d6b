//! Hermitian residue spaces of vertex lattices and the correspondence between
//! coisotropic subspaces and neighbouring vertex lattices.

use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::lattice::{AmbientSpace, LatticeInterval, VertexLattice, WindowLattice};
use crate::linalg::{for_each_subspace, gaussian_binomial, kernel, Subspace};

/// Largest Grassmannian scanned by the subspace enumerators.
pub const GRASSMANNIAN_LIMIT: u128 = 2_000_000;

/// A finite `F_{q^2}/F_q`-hermitian space `h(x, y) = Σ x_a g_ab σ(y_b)`.
#[derive(Clone, Debug)]
pub struct HermSpace {
    field: Arc<Field>,
    gram: Vec<Vec<Fq>>,
}

/// Which residue space of a vertex lattice of rank `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ResidueKind {
    /// `Λ / π^{i+1} Λ^∨` with the form `π^{-i}{·,·}`.
    Lower,
    /// `π^i Λ^∨ / Λ` with the form `π^{-i+1}{·,·}`.
    Upper,
}

/// Whether a lifted vertex lattice sits below or above the reference lattice.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Direction {
    Sub,
    Over,
}

impl HermSpace {
    /// A hermitian space with the given gram matrix; rejects non-hermitian input.
    pub fn new(field: Arc<Field>, gram: Vec<Vec<Fq>>) -> Result<Self> {
        let dim = gram.len();
        for a in 0..dim {
            if gram[a].len() != dim {
                return Err(Error::Precondition("gram matrix is not square".into()));
            }
            for b in 0..dim {
                if gram[b][a] != field.frobenius(gram[a][b]) {
                    return Err(Error::Precondition("gram matrix is not hermitian".into()));
                }
            }
        }
        Ok(HermSpace { field, gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Fq>] {
        &self.gram
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// `h(x, y)`.
    pub fn pair(&self, x: &[Fq], y: &[Fq]) -> Fq {
        let f = &*self.field;
        let mut acc = Fq::ZERO;
        for (a, &xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                let g = self.gram[a][b];
                if g.is_zero() || yb.is_zero() {
                    continue;
                }
                acc = f.add(acc, f.mul(xa, f.mul(g, f.frobenius(yb))));
            }
        }
        acc
    }

    /// Full rank of the gram matrix.
    pub fn is_nondegenerate(&self) -> bool {
        kernel(&self.field, &self.gram, self.dim()).is_empty()
    }

    /// `U^⊥ = {x : h(x, u) = 0 for all u ∈ U}`.
    pub fn orth(&self, u: &Subspace) -> Subspace {
        let f = &*self.field;
        let dim = self.dim();
        let rows: Vec<Vec<Fq>> = u
            .basis()
            .iter()
            .map(|v| {
                (0..dim)
                    .map(|a| {
                        (0..dim).fold(Fq::ZERO, |acc, b| f.add(acc, f.mul(self.gram[a][b], f.frobenius(v[b]))))
                    })
                    .collect()
            })
            .collect();
        Subspace::span(f, dim, kernel(f, &rows, dim))
    }

    /// `W ⊆ W^⊥`.
    pub fn is_totally_isotropic(&self, w: &Subspace) -> bool {
        let b = w.basis();
        (0..b.len()).all(|i| (i..b.len()).all(|j| self.pair(&b[i], &b[j]).is_zero()))
    }

    /// `U^⊥ ⊆ U`.
    pub fn is_coisotropic(&self, u: &Subspace) -> bool {
        u.contains(&self.field, &self.orth(u))
    }

    /// Totally isotropic `F_{q^2}`-rational subspaces of dimension `r`, in echelon order.
    pub fn enumerate_isotropic(&self, r: usize) -> Result<Vec<Subspace>> {
        let dim = self.dim();
        if r > dim {
            return Ok(Vec::new());
        }
        let q2 = (self.q() as u128) * (self.q() as u128);
        let size = gaussian_binomial(q2, dim, r);
        if size > GRASSMANNIAN_LIMIT {
            return Err(Error::SizeGuard { what: format!("Grassmannian Gr({r},{dim}) over F_{q2}"), needed: size, limit: GRASSMANNIAN_LIMIT });
        }
        let coeffs = self.field.rational_elements();
        let mut out = Vec::new();
        let _ = for_each_subspace::<()>(dim, r, &coeffs, |w| {
            if self.is_totally_isotropic(w) {
                out.push(w.clone());
            }
            ControlFlow::Continue(())
        });
        Ok(out)
    }

    /// Rational subspaces `U` with `U^⊥ ⊆ U` and `dim U = k`, sorted by echelon basis.
    pub fn enumerate_coisotropic(&self, k: usize) -> Result<Vec<Subspace>> {
        let dim = self.dim();
        if k > dim || 2 * k < dim {
            return Ok(Vec::new());
        }
        let mut out: Vec<Subspace> = self.enumerate_isotropic(dim - k)?.iter().map(|w| self.orth(w)).collect();
        out.sort();
        Ok(out)
    }
}

/// A residue space together with its identification with a lattice interval.
#[derive(Clone, Debug)]
pub struct ResidueSpace {
    pub vertex: VertexLattice,
    pub kind: ResidueKind,
    pub space: HermSpace,
    pub interval: LatticeInterval,
}

impl ResidueSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Image `X / low` of a lattice between the two ends of the interval.
    pub fn subspace_of(&self, amb: &AmbientSpace, x: &WindowLattice) -> Option<Subspace> {
        amb.interval_coordinates(&self.interval, x)
    }

    /// Preimage of a subspace.
    pub fn lattice_of(&self, amb: &AmbientSpace, u: &Subspace) -> WindowLattice {
        amb.interval_lift(&self.interval, u.basis())
    }
}

/// The residue space `V_Λ⁰` or `V_Λ¹` with its induced hermitian form.
pub fn residue_space(amb: &AmbientSpace, vertex: &VertexLattice, kind: ResidueKind) -> Result<ResidueSpace> {
    let rank = vertex.rank;
    let lattice = &vertex.lattice;
    let dual = amb.dual(lattice)?;
    let (low, up, shift) = match kind {
        ResidueKind::Lower => (amb.pi_mul(&dual, rank + 1)?, lattice.clone(), rank),
        ResidueKind::Upper => (lattice.clone(), amb.pi_mul(&dual, rank)?, rank - 1),
    };
    let interval = amb.interval(&low, &up)?;
    let vectors: Vec<_> = interval.free.iter().map(|&p| amb.basis_vector(&up, p)).collect();
    let gram: Vec<Vec<Fq>> = vectors
        .iter()
        .map(|x| vectors.iter().map(|y| amb.pairing(x, y).coeff(shift)).collect())
        .collect();
    let space = HermSpace::new(amb.field_arc(), gram)?;
    if !space.is_nondegenerate() {
        return Err(Error::Precondition("induced residue form is degenerate".into()));
    }
    Ok(ResidueSpace { vertex: vertex.clone(), kind, space, interval })
}

/// Dimension of the coisotropic subspace attached to a neighbour of type `t_target`.
pub fn coisotropic_dim(n: usize, t: usize, t_target: usize, direction: Direction) -> Result<usize> {
    let ok = (t + t_target) % 2 == 0;
    match direction {
        Direction::Sub if ok && t_target <= t => Ok((t + t_target) / 2),
        Direction::Over if ok && t <= t_target && t_target <= n => Ok(n - (t + t_target) / 2),
        _ => Err(Error::Precondition(format!("no {direction:?} neighbour of type {t_target} for type {t}"))),
    }
}

/// The vertex lattice of rank `i` attached to a coisotropic subspace.
pub fn lift_to_vertex(
    amb: &AmbientSpace,
    vertex: &VertexLattice,
    u: &Subspace,
    direction: Direction,
    t_target: usize,
) -> Result<VertexLattice> {
    let expected = coisotropic_dim(amb.n(), vertex.type_t, t_target, direction)?;
    let kind = match direction {
        Direction::Sub => ResidueKind::Lower,
        Direction::Over => ResidueKind::Upper,
    };
    let res = residue_space(amb, vertex, kind)?;
    if u.dim() != expected || u.ambient_dim() != res.dim() || !res.space.is_coisotropic(u) {
        return Err(Error::Precondition(format!("subspace is not coisotropic of dimension {expected}")));
    }
    let lattice = match direction {
        Direction::Sub => res.lattice_of(amb, u),
        Direction::Over => res.lattice_of(amb, &res.space.orth(u)),
    };
    let lifted = amb
        .vertex_recognize(&lattice, vertex.rank)?
        .ok_or_else(|| Error::Precondition("lift is not a vertex lattice".into()))?;
    if lifted.type_t != t_target {
        return Err(Error::Precondition(format!("lift has type {} instead of {t_target}", lifted.type_t)));
    }
    Ok(lifted)
}

/// Inverse of [`lift_to_vertex`]: the coisotropic subspace of a neighbour.
pub fn residue_of_neighbour(amb: &AmbientSpace, vertex: &VertexLattice, neighbour: &WindowLattice, direction: Direction) -> Result<Subspace> {
    match direction {
        Direction::Sub => {
            let res = residue_space(amb, vertex, ResidueKind::Lower)?;
            res.subspace_of(amb, neighbour).ok_or(Error::NotContained)
        }
        Direction::Over => {
            let res = residue_space(amb, vertex, ResidueKind::Upper)?;
            let top = amb.pi_mul(&amb.dual(neighbour)?, vertex.rank)?;
            res.subspace_of(amb, &top).ok_or(Error::NotContained)
        }
    }
}

/// All vertex lattices of the same rank and type `t_target` below (`Sub`) or above (`Over`) `vertex`.
pub fn neighbour_vertices(amb: &AmbientSpace, vertex: &VertexLattice, direction: Direction, t_target: usize) -> Result<Vec<VertexLattice>> {
    let k = match coisotropic_dim(amb.n(), vertex.type_t, t_target, direction) {
        Ok(k) => k,
        Err(_) => return Ok(Vec::new()),
    };
    let kind = match direction {
        Direction::Sub => ResidueKind::Lower,
        Direction::Over => ResidueKind::Upper,
    };
    let res = residue_space(amb, vertex, kind)?;
    let mut out = Vec::new();
    for u in res.space.enumerate_coisotropic(k)? {
        let lattice = match direction {
            Direction::Sub => res.lattice_of(amb, &u),
            Direction::Over => res.lattice_of(amb, &res.space.orth(&u)),
        };
        out.push(VertexLattice { lattice, rank: vertex.rank, type_t: t_target });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::lattice::GramKind;

    fn amb(n: usize, gram: GramKind) -> AmbientSpace {
        let f = Arc::new(Field::new(FieldSpec::new(3, 1, 1)).unwrap());
        AmbientSpace::new(f, n, 3, gram).unwrap()
    }

    #[test]
    fn standard_residues() {
        let a = amb(3, GramKind::Identity);
        let v = a.vertex_recognize(&a.standard(), 0).unwrap().unwrap();
        let lower = residue_space(&a, &v, ResidueKind::Lower).unwrap();
        assert_eq!(lower.dim(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(lower.space.gram()[i][j], if i == j { Fq::ONE } else { Fq::ZERO });
            }
        }
        assert_eq!(residue_space(&a, &v, ResidueKind::Upper).unwrap().dim(), 0);
    }

    #[test]
    fn orth_of_extremes() {
        let a = amb(3, GramKind::Identity);
        let v = a.vertex_recognize(&a.standard(), 0).unwrap().unwrap();
        let space = residue_space(&a, &v, ResidueKind::Lower).unwrap().space;
        assert_eq!(space.orth(&Subspace::full(3)), Subspace::zero(3));
        assert_eq!(space.orth(&Subspace::zero(3)), Subspace::full(3));
    }

    #[test]
    fn coisotropic_count_extremes() {
        let a = amb(3, GramKind::Identity);
        let v = a.vertex_recognize(&a.standard(), 0).unwrap().unwrap();
        let space = residue_space(&a, &v, ResidueKind::Lower).unwrap().space;
        assert_eq!(space.enumerate_coisotropic(3).unwrap(), vec![Subspace::full(3)]);
        assert!(space.enumerate_coisotropic(1).unwrap().is_empty());
    }

    #[test]
    fn sub_lift_of_full_space_is_identity() {
        let a = amb(3, GramKind::Identity);
        let v = a.vertex_recognize(&a.standard(), 0).unwrap().unwrap();
        let lifted = lift_to_vertex(&a, &v, &Subspace::full(3), Direction::Sub, 3).unwrap();
        assert_eq!(lifted.lattice, v.lattice);
    }
}
