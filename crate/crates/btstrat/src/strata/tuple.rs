//! Parahoric level tuples `h = (h_1, …, h_m)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::lattice::{AmbientSpace, GramKind};

/// Window radius used for every ambient space built from a tuple.
pub const WINDOW_RADIUS: usize = 4;

/// A strictly increasing tuple of integers in `[0, n]` of constant parity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ParahoricTuple {
    n: usize,
    h: Vec<usize>,
}

impl ParahoricTuple {
    pub fn new(n: usize, h: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTuple("n must be positive".into()));
        }
        if h.is_empty() {
            return Err(Error::InvalidTuple("the tuple is empty".into()));
        }
        if let Some(&x) = h.iter().find(|&&x| x > n) {
            return Err(Error::InvalidTuple(format!("entry {x} exceeds n = {n}")));
        }
        if h.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTuple(format!("{h:?} is not strictly increasing")));
        }
        if h.iter().any(|x| x % 2 != h[0] % 2) {
            return Err(Error::InvalidTuple(format!("{h:?} mixes parities")));
        }
        Ok(ParahoricTuple { n, h })
    }

    /// Every admissible tuple for the given `n`.
    pub fn all(n: usize) -> Vec<ParahoricTuple> {
        let mut out = Vec::new();
        for parity in 0..2 {
            let values: Vec<usize> = (0..=n).filter(|x| x % 2 == parity).collect();
            for mask in 1u32..(1 << values.len()) {
                let h = values.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x).collect();
                out.push(ParahoricTuple { n, h });
            }
        }
        out.sort();
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.h.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.h
    }

    /// `h_i` for `1 ≤ i ≤ m`.
    pub fn h(&self, i: usize) -> usize {
        self.h[i - 1]
    }

    /// `Δh_i = (h_{i+1} - h_i) / 2` for `1 ≤ i < m`.
    pub fn delta(&self, i: usize) -> usize {
        (self.h[i] - self.h[i - 1]) / 2
    }

    /// `0` when `h_1` is odd, `1` otherwise.
    pub fn t_min(&self) -> usize {
        if self.h[0] % 2 == 1 {
            0
        } else {
            1
        }
    }

    /// `n` when `n - h_1` is odd, `n - 1` otherwise.
    pub fn t_max(&self) -> usize {
        if (self.n - self.h[0]) % 2 == 1 {
            self.n
        } else {
            self.n - 1
        }
    }

    /// Gram fixture whose vertex lattices have the parities this tuple needs.
    pub fn gram(&self) -> GramKind {
        GramKind::for_parity(self.n, self.h[0])
    }

    /// Parity of the types of rank-0 vertex lattices.
    pub fn rank0_parity(&self) -> usize {
        (self.h[0] + 1) % 2
    }

    /// Parity of the types of rank-1 vertex lattices.
    pub fn rank1_parity(&self) -> usize {
        (self.n + self.h[0] + 1) % 2
    }

    /// `1` for each of `h_1 > 0` and `h_m < n`.
    pub fn epsilon(&self) -> usize {
        usize::from(self.h[0] > 0) + usize::from(self.h[self.m() - 1] < self.n)
    }

    /// Largest admissible index set: `{0..m}` without `0` when `h_1 = 0` and without `m` when `h_m = n`.
    pub fn full_set(&self) -> Vec<usize> {
        let m = self.m();
        (0..=m).filter(|&i| !(i == 0 && self.h[0] == 0) && !(i == m && self.h[m - 1] == self.n)).collect()
    }

    /// The ambient space over `F_{q^{2d}}`, `q = p^e`, with the matching gram fixture.
    pub fn ambient(&self, p: u32, e: u32, d: u32) -> Result<AmbientSpace> {
        let field = Arc::new(Field::new(FieldSpec::new(p, e, d))?);
        AmbientSpace::new(field, self.n, WINDOW_RADIUS, self.gram())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_tuples() {
        assert!(ParahoricTuple::new(3, vec![0, 1]).is_err());
        assert!(ParahoricTuple::new(3, vec![2, 0]).is_err());
        assert!(ParahoricTuple::new(3, vec![5]).is_err());
        assert!(ParahoricTuple::new(3, vec![]).is_err());
        assert!(ParahoricTuple::new(3, vec![1, 3]).is_ok());
    }

    #[test]
    fn derived_integers() {
        let t = ParahoricTuple::new(4, vec![1, 3]).unwrap();
        assert_eq!((t.m(), t.delta(1), t.t_min(), t.t_max(), t.epsilon()), (2, 1, 0, 4, 2));
        let t = ParahoricTuple::new(3, vec![0, 2]).unwrap();
        assert_eq!((t.t_min(), t.t_max(), t.epsilon(), t.full_set()), (1, 3, 1, vec![1, 2]));
    }

    #[test]
    fn enumerates_all_tuples() {
        assert_eq!(ParahoricTuple::all(3).len(), 3 + 3);
        assert!(ParahoricTuple::all(4).iter().all(|t| ParahoricTuple::new(4, t.entries().to_vec()).is_ok()));
    }
}
