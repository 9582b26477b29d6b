//! Truncated power series `R_N = F[π]/(π^{2N})` with coefficientwise Frobenius.

use crate::error::{Error, Result};
use crate::field::{Field, Fq};

/// Largest supported precision `2N`.
pub const MAX_PRECISION: usize = 16;

/// An element of `F[π]/(π^prec)`; coefficient `k` multiplies `π^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TruncSeries {
    coeffs: [Fq; MAX_PRECISION],
    prec: u8,
}

impl TruncSeries {
    pub fn zero(prec: usize) -> Self {
        assert!(prec <= MAX_PRECISION, "precision {prec} exceeds {MAX_PRECISION}");
        TruncSeries { coeffs: [Fq::ZERO; MAX_PRECISION], prec: prec as u8 }
    }

    /// The monomial `c·π^k`, zero when `k ≥ prec`.
    pub fn monomial(c: Fq, k: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if k < prec {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn one(prec: usize) -> Self {
        Self::monomial(Fq::ONE, 0, prec)
    }

    /// Series from leading coefficients; extra coefficients beyond `prec` are dropped.
    pub fn from_coeffs(coeffs: &[Fq], prec: usize) -> Self {
        let mut s = Self::zero(prec);
        for (k, &c) in coeffs.iter().take(prec).enumerate() {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.prec as usize
    }

    pub fn coeff(&self, k: usize) -> Fq {
        if k < self.precision() {
            self.coeffs[k]
        } else {
            Fq::ZERO
        }
    }

    pub fn set_coeff(&mut self, k: usize, c: Fq) {
        assert!(k < self.precision());
        self.coeffs[k] = c;
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs[..self.precision()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_zero())
    }

    /// Least index of a nonzero coefficient; `prec` for zero.
    pub fn valuation(&self) -> usize {
        self.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(self.precision())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.prec != other.prec {
            return Err(Error::WindowMismatch { left: self.precision(), right: other.precision() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self, f: &Field) -> Result<Self> {
        self.check(other)?;
        Ok(self.add(other, f))
    }

    pub fn try_sub(&self, other: &Self, f: &Field) -> Result<Self> {
        self.check(other)?;
        Ok(self.sub(other, f))
    }

    pub fn try_mul(&self, other: &Self, f: &Field) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other, f))
    }

    pub fn add(&self, other: &Self, f: &Field) -> Self {
        debug_assert_eq!(self.prec, other.prec);
        let mut s = *self;
        for k in 0..self.precision() {
            s.coeffs[k] = f.add(self.coeffs[k], other.coeffs[k]);
        }
        s
    }

    pub fn sub(&self, other: &Self, f: &Field) -> Self {
        debug_assert_eq!(self.prec, other.prec);
        let mut s = *self;
        for k in 0..self.precision() {
            s.coeffs[k] = f.sub(self.coeffs[k], other.coeffs[k]);
        }
        s
    }

    pub fn neg(&self, f: &Field) -> Self {
        let mut s = *self;
        for c in s.coeffs.iter_mut().take(self.precision()) {
            *c = f.neg(*c);
        }
        s
    }

    pub fn mul(&self, other: &Self, f: &Field) -> Self {
        debug_assert_eq!(self.prec, other.prec);
        let prec = self.precision();
        let mut s = Self::zero(prec);
        for i in 0..prec {
            let a = self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..prec - i {
                let b = other.coeffs[j];
                if !b.is_zero() {
                    s.coeffs[i + j] = f.add(s.coeffs[i + j], f.mul(a, b));
                }
            }
        }
        s
    }

    pub fn scale(&self, c: Fq, f: &Field) -> Self {
        let mut s = *self;
        for x in s.coeffs.iter_mut().take(self.precision()) {
            *x = f.mul(*x, c);
        }
        s
    }

    /// Multiplication by `π^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let prec = self.precision();
        let mut s = Self::zero(prec);
        for i in 0..prec.saturating_sub(k) {
            s.coeffs[i + k] = self.coeffs[i];
        }
        s
    }

    /// Exact division by `π^k`; the top `k` coefficients of the quotient are zero.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.valuation() >= k.min(self.precision()));
        let prec = self.precision();
        let mut s = Self::zero(prec);
        for i in k..prec {
            s.coeffs[i - k] = self.coeffs[i];
        }
        s
    }

    /// Quotient of division by `π^k`, discarding the remainder of degree `< k`.
    pub fn high_part(&self, k: usize) -> Self {
        self.truncate_below(k).shift_down(k)
    }

    fn truncate_below(&self, k: usize) -> Self {
        let mut s = *self;
        for c in s.coeffs.iter_mut().take(k.min(self.precision())) {
            *c = Fq::ZERO;
        }
        s
    }

    /// Keeps coefficients of degree `< k`.
    pub fn truncate(&self, k: usize) -> Self {
        let mut s = *self;
        for c in s.coeffs.iter_mut().take(self.precision()).skip(k) {
            *c = Fq::ZERO;
        }
        s
    }

    /// Inverse of a unit (nonzero constant term).
    pub fn unit_inverse(&self, f: &Field) -> Self {
        let prec = self.precision();
        let c0 = self.coeffs[0];
        assert!(!c0.is_zero(), "not a unit");
        let inv0 = f.inv(c0);
        let mut out = Self::zero(prec);
        out.coeffs[0] = inv0;
        for k in 1..prec {
            let mut acc = Fq::ZERO;
            for j in 1..=k {
                acc = f.add(acc, f.mul(self.coeffs[j], out.coeffs[k - j]));
            }
            out.coeffs[k] = f.neg(f.mul(acc, inv0));
        }
        out
    }

    /// Coefficientwise `σ^k`.
    pub fn sigma_pow(&self, k: i64, f: &Field) -> Self {
        let mut s = *self;
        for c in s.coeffs.iter_mut().take(self.precision()) {
            *c = f.frobenius_pow(*c, k);
        }
        s
    }

    /// Coefficientwise `σ`.
    pub fn sigma(&self, f: &Field) -> Self {
        self.sigma_pow(1, f)
    }
}

/// A Laurent polynomial `Σ c_k π^k` with finitely many nonzero terms.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<Fq>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(c: Fq, k: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { low: k, coeffs: vec![c] }
    }

    /// `π^{-offset}·s`.
    pub fn from_series(s: &TruncSeries, offset: i32) -> Self {
        let mut l = Laurent { low: -offset, coeffs: s.coeffs().to_vec() };
        l.normalize();
        l
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Least exponent with a nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn coeff(&self, k: i32) -> Fq {
        let idx = k - self.low;
        if idx < 0 {
            return Fq::ZERO;
        }
        self.coeffs.get(idx as usize).copied().unwrap_or(Fq::ZERO)
    }

    /// Terms `(exponent, coefficient)` with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, &c)| (self.low + k as i32, c))
    }

    pub fn add(&self, other: &Self, f: &Field) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = (self.low + self.coeffs.len() as i32).max(other.low + other.coeffs.len() as i32);
        let coeffs = (low..high).map(|k| f.add(self.coeff(k), other.coeff(k))).collect();
        let mut out = Laurent { low, coeffs };
        out.normalize();
        out
    }

    pub fn neg(&self, f: &Field) -> Self {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Self, f: &Field) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &Self, f: &Field) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
                }
            }
        }
        let mut out = Laurent { low: self.low + other.low, coeffs };
        out.normalize();
        out
    }

    /// Multiplication by `c·π^k`.
    pub fn mul_monomial(&self, c: Fq, k: i32, f: &Field) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        Laurent { low: self.low + k, coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect() }
    }

    pub fn sigma_pow(&self, k: i64, f: &Field) -> Self {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|&c| f.frobenius_pow(c, k)).collect() }
    }

    /// `π^{offset}·self` as a truncated series; fails when a negative exponent remains.
    pub fn to_series(&self, offset: i32, prec: usize) -> Option<TruncSeries> {
        let mut s = TruncSeries::zero(prec);
        for (k, c) in self.terms() {
            let e = k + offset;
            if e < 0 {
                return None;
            }
            if (e as usize) < prec {
                s.coeffs[e as usize] = c;
            }
        }
        Some(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn one_plus_pi_times_one_minus_pi() {
        let f = Field::new(FieldSpec::new(3, 1, 1)).unwrap();
        let prec = 8;
        let pi = TruncSeries::monomial(Fq::ONE, 1, prec);
        let one = TruncSeries::one(prec);
        let prod = one.add(&pi, &f).mul(&one.sub(&pi, &f), &f);
        let expected = one.sub(&pi.mul(&pi, &f), &f);
        assert_eq!(prod, expected);
    }

    #[test]
    fn valuation_of_pi_squared_times_unit() {
        let f = Field::new(FieldSpec::new(3, 1, 1)).unwrap();
        let prec = 8;
        let unit = TruncSeries::from_coeffs(&[f.gen_pow(3), f.gen_pow(1), Fq::ONE], prec);
        let pi2 = TruncSeries::monomial(Fq::ONE, 2, prec);
        assert_eq!(pi2.mul(&unit, &f).valuation(), 2);
        assert_eq!(TruncSeries::zero(prec).valuation(), prec);
    }

    #[test]
    fn sigma_fixes_base_field_series() {
        let f = Field::new(FieldSpec::new(3, 1, 1)).unwrap();
        let s = TruncSeries::from_coeffs(&[f.from_i64(1), f.from_i64(2), Fq::ZERO, f.from_i64(1)], 6);
        assert_eq!(s.sigma(&f), s);
    }

    #[test]
    fn mismatched_windows_are_rejected() {
        let f = Field::new(FieldSpec::new(3, 1, 1)).unwrap();
        let a = TruncSeries::one(4);
        let b = TruncSeries::one(6);
        assert_eq!(a.try_add(&b, &f), Err(Error::WindowMismatch { left: 4, right: 6 }));
    }

    #[test]
    fn unit_inverse_round_trip() {
        let f = Field::new(FieldSpec::new(5, 1, 1)).unwrap();
        let u = TruncSeries::from_coeffs(&[f.gen_pow(2), f.gen_pow(7), f.gen_pow(11)], 10);
        assert_eq!(u.mul(&u.unit_inverse(&f), &f), TruncSeries::one(10));
    }
}
