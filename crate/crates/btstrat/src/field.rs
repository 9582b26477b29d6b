//! Finite fields of odd characteristic in Zech-logarithm form.
//!
//! A [`Field`] is the top field `F_{q^{2d}}` of the tower
//! `F_p ⊂ F_q ⊂ F_{q^2} ⊂ F_{q^{2d}}` with `q = p^e`. Elements are stored as
//! discrete logarithms with respect to a fixed primitive element, so
//! multiplication is an addition of exponents and addition goes through a
//! Zech table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size accepted by [`Field::new`].
pub const MAX_FIELD_SIZE: u64 = 1 << 15;

/// An element of a [`Field`]: `0` encodes zero, `k + 1` encodes `g^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Fq(pub(crate) u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Raw code, stable for a fixed field; used for hashing and ordering.
    pub fn code(self) -> u16 {
        self.0
    }
}

/// Parameters of the tower `F_p ⊂ F_q ⊂ F_{q^2} ⊂ F_{q^{2d}}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    /// Odd characteristic.
    pub p: u32,
    /// `q = p^e`.
    pub e: u32,
    /// Coefficient extension: the top field is `F_{q^{2d}}`.
    pub d: u32,
}

impl FieldSpec {
    pub fn new(p: u32, e: u32, d: u32) -> Self {
        FieldSpec { p, e, d }
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }

    /// Degree of the top field over the prime field.
    pub fn degree(&self) -> u32 {
        2 * self.e * self.d
    }
}

/// The finite field `F_{q^{2d}}` with lookup tables.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    size: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u16>,
    minus_one: u32,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

fn prime_factors(mut x: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= x {
        if x % k == 0 {
            out.push(k);
            while x % k == 0 {
                x /= k;
            }
        }
        k += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// Base-`p` digits, low to high, padded to `len`.
fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = x % p;
        x /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &c) in m.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p * p - lead * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

/// True when the monic polynomial `m` has no monic factor of degree `1..=deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for fdeg in 1..=deg / 2 {
        for tail in 0..p.pow(fdeg as u32) {
            let mut f = digits(tail, p, fdeg);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds `F_{q^{2d}}` with the lexicographically smallest monic
    /// irreducible modulus and the smallest primitive element.
    pub fn new(spec: FieldSpec) -> Result<Self> {
        if !is_prime(spec.p) || spec.p == 2 {
            return Err(Error::InvalidField(format!("p = {} is not an odd prime", spec.p)));
        }
        if spec.e == 0 || spec.d == 0 {
            return Err(Error::InvalidField("extension degrees must be positive".into()));
        }
        let degree = spec.degree() as usize;
        let size64 = (spec.p as u64).pow(degree as u32);
        if size64 > MAX_FIELD_SIZE {
            return Err(Error::InvalidField(format!("field of size {size64} exceeds {MAX_FIELD_SIZE}")));
        }
        let p = spec.p;
        let size = size64 as u32;
        let order = size - 1;
        let modulus = (0..p.pow(degree as u32))
            .map(|tail| {
                let mut m = digits(tail, p, degree);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .ok_or_else(|| Error::InvalidField("no irreducible modulus found".into()))?;
        let factors = prime_factors(order);
        let power = |base: u32, mut k: u32| -> u32 {
            let mut acc = digits(1, p, degree);
            let mut b = digits(base, p, degree);
            while k > 0 {
                if k & 1 == 1 {
                    acc = poly_mul_mod(&acc, &b, &modulus, p);
                }
                b = poly_mul_mod(&b, &b, &modulus, p);
                k >>= 1;
            }
            undigits(&acc, p)
        };
        let generator = (2..size)
            .find(|&g| factors.iter().all(|&r| power(g, order / r) != 1))
            .ok_or_else(|| Error::InvalidField("no primitive element".into()))?;
        let gen_digits = digits(generator, p, degree);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = digits(1, p, degree);
        for k in 0..order {
            let v = undigits(&cur, p);
            exp.push(v);
            log[v as usize] = k;
            cur = poly_mul_mod(&cur, &gen_digits, &modulus, p);
        }
        let add_one = |v: u32| -> u32 {
            let mut ds = digits(v, p, degree);
            ds[0] = (ds[0] + 1) % p;
            undigits(&ds, p)
        };
        let zech = (0..order)
            .map(|k| {
                let s = add_one(exp[k as usize]);
                if s == 0 {
                    0
                } else {
                    (log[s as usize] + 1) as u16
                }
            })
            .collect();
        let minus_one = log[(p - 1) as usize];
        Ok(Field { spec, size, order, modulus, generator, exp, log, zech, minus_one })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn q(&self) -> u32 {
        self.spec.q()
    }

    /// Number of elements of the top field.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Monic modulus over `F_p`, coefficients from low to high degree.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Primitive element as a base-`p` polynomial integer.
    pub fn generator_int(&self) -> u32 {
        self.generator
    }

    /// Element with the given base-`p` polynomial encoding.
    pub fn from_int(&self, v: u32) -> Fq {
        assert!(v < self.size, "polynomial integer out of range");
        if v == 0 {
            Fq::ZERO
        } else {
            Fq((self.log[v as usize] + 1) as u16)
        }
    }

    /// Base-`p` polynomial encoding of `x`.
    pub fn to_int(&self, x: Fq) -> u32 {
        if x.is_zero() {
            0
        } else {
            self.exp[(x.0 - 1) as usize]
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_i64(&self, c: i64) -> Fq {
        self.from_int(c.rem_euclid(self.spec.p as i64) as u32)
    }

    /// `g^k` for the fixed primitive element `g`.
    pub fn gen_pow(&self, k: u64) -> Fq {
        Fq((k % self.order as u64) as u16 + 1)
    }

    /// Discrete logarithm of a nonzero element.
    pub fn log_of(&self, x: Fq) -> Option<u32> {
        (!x.is_zero()).then(|| (x.0 - 1) as u32)
    }

    /// All elements, zero first, then `g^0, g^1, …`.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.size).map(|c| Fq(c as u16))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() || b.is_zero() {
            return Fq::ZERO;
        }
        let s = (a.0 as u32 - 1) + (b.0 as u32 - 1);
        let s = if s >= self.order { s - self.order } else { s };
        Fq((s + 1) as u16)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let (la, lb) = (a.0 as u32 - 1, b.0 as u32 - 1);
        let diff = if lb >= la { lb - la } else { lb + self.order - la };
        let z = self.zech[diff as usize];
        if z == 0 {
            return Fq::ZERO;
        }
        let s = la + (z as u32 - 1);
        let s = if s >= self.order { s - self.order } else { s };
        Fq((s + 1) as u16)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if a.is_zero() {
            return a;
        }
        let s = (a.0 as u32 - 1) + self.minus_one;
        let s = if s >= self.order { s - self.order } else { s };
        Fq((s + 1) as u16)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(!a.is_zero(), "inverse of zero");
        let l = a.0 as u32 - 1;
        Fq((if l == 0 { 0 } else { self.order - l } + 1) as u16)
    }

    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fq, k: u64) -> Fq {
        if a.is_zero() {
            return if k == 0 { Fq::ONE } else { Fq::ZERO };
        }
        let l = (a.0 as u64 - 1) * (k % self.order as u64) % self.order as u64;
        Fq(l as u16 + 1)
    }

    /// The `q`-power Frobenius `σ`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.q() as u64)
    }

    /// `σ^k`, defined for every integer `k` (negative powers invert `σ`).
    pub fn frobenius_pow(&self, a: Fq, k: i64) -> Fq {
        let period = self.spec.degree() as i64 / self.spec.e as i64;
        let k = k.rem_euclid(period) as u32;
        self.pow(a, (self.q() as u64).pow(k))
    }

    /// `τ = σ^2`, the `q^2`-power Frobenius.
    pub fn tau(&self, a: Fq) -> Fq {
        self.frobenius_pow(a, 2)
    }

    /// True when `a` lies in the subfield with `p^deg` elements.
    pub fn in_subfield(&self, a: Fq, deg: u32) -> bool {
        self.pow(a, (self.spec.p as u64).pow(deg)) == a
    }

    /// True when `a ∈ F_{q^2}`.
    pub fn is_rational(&self, a: Fq) -> bool {
        self.in_subfield(a, 2 * self.spec.e)
    }

    /// Elements of the subfield `F_{q^2}`, in code order.
    pub fn rational_elements(&self) -> Vec<Fq> {
        self.elements().filter(|&a| self.is_rational(a)).collect()
    }

    /// Minimal polynomial of `a` over `F_p`, monic, coefficients low to high.
    pub fn minimal_polynomial(&self, a: Fq) -> Vec<u32> {
        let mut conjugates = vec![a];
        let mut cur = self.pow(a, self.spec.p as u64);
        while cur != a {
            conjugates.push(cur);
            cur = self.pow(cur, self.spec.p as u64);
        }
        let mut poly = vec![Fq::ONE];
        for &r in &conjugates {
            let mut next = vec![Fq::ZERO; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] = self.add(next[k + 1], c);
                next[k] = self.sub(next[k], self.mul(c, r));
            }
            poly = next;
        }
        poly.iter()
            .map(|&c| {
                let v = self.to_int(c);
                assert!(v < self.spec.p, "minimal polynomial coefficient outside F_p");
                v
            })
            .collect()
    }

    /// Field embedding of `small` into `self` sending the class of `t` to the
    /// smallest root of `small`'s modulus; returns the image of every element
    /// of `small`, indexed by code.
    pub fn embedding_from(&self, small: &Field) -> Result<Vec<Fq>> {
        if small.spec.p != self.spec.p || self.spec.degree() % small.spec.degree() != 0 {
            return Err(Error::InvalidField("no embedding between these fields".into()));
        }
        let eval = |x: Fq| -> Fq {
            small
                .modulus
                .iter()
                .rev()
                .fold(Fq::ZERO, |acc, &c| self.add(self.mul(acc, x), self.from_int(c)))
        };
        let mut roots: Vec<Fq> = self.elements().filter(|&x| eval(x).is_zero()).collect();
        roots.sort_by_key(|&x| self.to_int(x));
        let root = *roots.first().ok_or_else(|| Error::InvalidField("modulus has no root".into()))?;
        let deg = small.spec.degree() as usize;
        Ok(small
            .elements()
            .map(|x| {
                let ds = digits(small.to_int(x), small.spec.p, deg);
                ds.iter()
                    .rev()
                    .fold(Fq::ZERO, |acc, &c| self.add(self.mul(acc, root), self.from_int(c)))
            })
            .collect())
    }

    /// Human-readable modulus such as `t^2 + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (k, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            terms.push(match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Field {
        Field::new(FieldSpec::new(3, 1, 1)).unwrap()
    }

    #[test]
    fn f9_modulus_is_t2_plus_1() {
        assert_eq!(f9().modulus(), &[1, 0, 1]);
        assert_eq!(f9().modulus_string(), "t^2 + 1");
    }

    #[test]
    fn frobenius_of_t_is_minus_t() {
        let f = f9();
        let t = f.from_int(3);
        assert_eq!(f.frobenius(t), f.neg(t));
    }

    #[test]
    fn frobenius_fixes_base_and_is_involutive() {
        let f = f9();
        for c in 0..3 {
            let x = f.from_i64(c);
            assert_eq!(f.frobenius(x), x);
        }
        for x in f.elements() {
            assert_eq!(f.frobenius(f.frobenius(x)), x);
        }
    }

    #[test]
    fn field_axioms_small() {
        let f = Field::new(FieldSpec::new(3, 1, 2)).unwrap();
        assert_eq!(f.size(), 81);
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a)), Fq::ONE);
            }
            for b in f.elements().step_by(7) {
                assert_eq!(f.add(a, b), f.add(b, a));
                let c = f.gen_pow(5);
                assert_eq!(f.mul(f.add(a, b), c), f.add(f.mul(a, c), f.mul(b, c)));
            }
        }
        assert_eq!(f.rational_elements().len(), 9);
    }

    #[test]
    fn rejects_even_characteristic() {
        assert!(Field::new(FieldSpec::new(2, 1, 1)).is_err());
    }
}
