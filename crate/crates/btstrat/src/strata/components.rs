//! Maximal closed strata and the orbit bookkeeping of irreducible components.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::blocks::stratum_descriptor;
use super::index::{enumerate_abstract, maximal_indices, AbstractIndex};
use super::tuple::ParahoricTuple;

/// The three families of maximal indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `I = {0}`.
    Initial,
    /// `I = {i}` with `0 < i < m`.
    Interior(usize),
    /// `I = {m}`.
    Terminal,
}

/// The maximal indices sharing one index set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComponentFamily {
    pub kind: FamilyKind,
    pub indices: Vec<AbstractIndex>,
    /// Dimension of each closed stratum, from its descriptor.
    pub dimensions: Vec<usize>,
    /// Closed-form dimension of the family.
    pub formula_dimension: usize,
    /// Orbit count claimed for the family: one for the end families, `h_{i+1} - h_i - 1` otherwise.
    pub stated_orbits: usize,
}

/// Orbit census of the irreducible components.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComponentCensus {
    pub tuple: ParahoricTuple,
    pub families: Vec<ComponentFamily>,
    /// Number of maximal abstract indices, one per orbit.
    pub orbit_count: usize,
    /// `h_m - h_1 - m + 1 + ε`.
    pub stated_total: i64,
    /// `Σ Δh_i + ε`.
    pub corrected_total: usize,
}

impl FamilyKind {
    fn of(tuple: &ParahoricTuple, set: &[usize]) -> Result<Self> {
        match *set {
            [0] => Ok(FamilyKind::Initial),
            [i] if i == tuple.m() => Ok(FamilyKind::Terminal),
            [i] => Ok(FamilyKind::Interior(i)),
            _ => Err(Error::Precondition(format!("maximal index set {set:?} is not a singleton"))),
        }
    }

    /// Closed-form dimension of the components in this family.
    pub fn formula_dimension(self, tuple: &ParahoricTuple) -> usize {
        let n = tuple.n();
        match self {
            FamilyKind::Initial => n - (tuple.h(1) + tuple.t_min() + 1) / 2,
            FamilyKind::Terminal => (tuple.t_max() + tuple.h(tuple.m()) - 1) / 2,
            FamilyKind::Interior(i) => n - 1 - tuple.delta(i),
        }
    }

    fn stated_orbits(self, tuple: &ParahoricTuple) -> usize {
        match self {
            FamilyKind::Interior(i) => tuple.h(i + 1) - tuple.h(i) - 1,
            _ => 1,
        }
    }
}

/// Maximal indices grouped into families, with the claimed and enumerated orbit counts.
pub fn irreducible_components(tuple: &ParahoricTuple) -> Result<ComponentCensus> {
    let maximal = maximal_indices(&enumerate_abstract(tuple));
    let mut families: Vec<ComponentFamily> = Vec::new();
    for idx in &maximal {
        let kind = FamilyKind::of(tuple, &idx.set)?;
        let dim = stratum_descriptor(idx)?.dimension;
        match families.iter_mut().find(|f| f.kind == kind) {
            Some(f) => {
                f.indices.push(idx.clone());
                f.dimensions.push(dim);
            }
            None => families.push(ComponentFamily {
                kind,
                indices: vec![idx.clone()],
                dimensions: vec![dim],
                formula_dimension: kind.formula_dimension(tuple),
                stated_orbits: kind.stated_orbits(tuple),
            }),
        }
    }
    families.sort_by_key(|f| f.kind);
    let m = tuple.m();
    let eps = tuple.epsilon();
    let stated_total = tuple.h(m) as i64 - tuple.h(1) as i64 - m as i64 + 1 + eps as i64;
    let corrected_total = (tuple.h(m) - tuple.h(1)) / 2 + eps;
    Ok(ComponentCensus { tuple: tuple.clone(), families, orbit_count: maximal.len(), stated_total, corrected_total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_iwahori_fixture() {
        let c = irreducible_components(&ParahoricTuple::new(3, vec![0, 2]).unwrap()).unwrap();
        assert_eq!(c.orbit_count, 2);
        let dims: Vec<usize> = c.families.iter().flat_map(|f| f.dimensions.clone()).collect();
        assert_eq!(dims, vec![1, 2]);
    }

    #[test]
    fn corrected_total_and_dimensions() {
        for n in 1..=6 {
            for t in ParahoricTuple::all(n) {
                let c = irreducible_components(&t).unwrap();
                assert_eq!(c.orbit_count, c.corrected_total, "{t:?}");
                for f in &c.families {
                    assert!(f.dimensions.iter().all(|&d| d == f.formula_dimension), "{t:?} {f:?}");
                }
            }
        }
    }
}
