//! Symmetric groups and their products with Frobenius twists: lengths,
//! Bruhat order, parabolic subgroups, reduced cosets, the twisted order
//! `≤_{I,F}`, stabilizing sequences, and permutation decompositions.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest parabolic subgroup enumerated explicitly.
pub const PARABOLIC_LIMIT: usize = 100_000;

/// A permutation of `{1, …, d}` in one-line notation, stored zero-based.
///
/// Products are composition of maps: `(u * v)(x) = u(v(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<u8>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm((0..d as u8).collect())
    }

    /// From one-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &v in images {
            if v == 0 || v > d || seen[v - 1] {
                return Err(Error::Precondition(format!("{images:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Perm(images.iter().map(|&v| (v - 1) as u8).collect()))
    }

    /// One-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Image of the one-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.0[x - 1] as usize + 1
    }

    /// The simple transposition `s_i = (i, i+1)`, one-based `i`.
    pub fn simple(d: usize, i: usize) -> Self {
        let mut p = Self::identity(d);
        p.0.swap(i - 1, i);
        p
    }

    /// The transposition `(a, b)`, one-based.
    pub fn transposition(d: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(d);
        p.0.swap(a - 1, b - 1);
        p
    }

    /// `w_0 : i ↦ d + 1 - i`.
    pub fn longest(d: usize) -> Self {
        Perm((0..d as u8).rev().collect())
    }

    /// `s_{a_1} s_{a_2} ⋯ s_{a_k}`.
    pub fn from_word(d: usize, word: &[usize]) -> Self {
        let mut p = Self::identity(d);
        for &i in word {
            p = p.mul_simple_right(i);
        }
        p
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| k == v as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&v| self.0[v as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v as usize] = k as u8;
        }
        Perm(inv)
    }

    /// `s_i · self`.
    pub fn mul_simple_left(&self, i: usize) -> Perm {
        let mut p = self.clone();
        for v in p.0.iter_mut() {
            if *v as usize == i - 1 {
                *v = i as u8;
            } else if *v as usize == i {
                *v = (i - 1) as u8;
            }
        }
        p
    }

    /// `self · s_i`.
    pub fn mul_simple_right(&self, i: usize) -> Perm {
        let mut p = self.clone();
        p.0.swap(i - 1, i);
        p
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.0;
        (0..v.len()).map(|a| (a + 1..v.len()).filter(|&b| v[a] > v[b]).count()).sum()
    }

    /// `ℓ(s_i w) < ℓ(w)`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.0[i - 1] > inv.0[i]
    }

    /// `ℓ(w s_i) < ℓ(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.0[i - 1] > self.0[i]
    }

    /// Bruhat order by the rank-matrix criterion.
    pub fn bruhat_leq(&self, other: &Perm) -> bool {
        let d = self.degree();
        if other.degree() != d {
            return false;
        }
        for i in 0..d {
            for k in 0..d {
                let a = self.0[..=i].iter().filter(|&&v| v as usize >= k).count();
                let b = other.0[..=i].iter().filter(|&&v| v as usize >= k).count();
                if a > b {
                    return false;
                }
            }
        }
        true
    }

    /// `w_0 w w_0`.
    pub fn conjugate_by_longest(&self) -> Perm {
        let d = self.degree() as u8;
        Perm((0..self.0.len()).rev().map(|k| d - 1 - self.0[k]).collect())
    }

    /// Simple reflections `s_i` with `w({1..i}) ≠ {1..i}`: the support of any reduced word.
    pub fn support(&self) -> Vec<usize> {
        let d = self.degree();
        (1..d).filter(|&i| self.0[..i].iter().any(|&v| v as usize >= i)).collect()
    }

    /// True when `self` contains the one-based `pattern`.
    pub fn contains_pattern(&self, pattern: &[usize]) -> bool {
        let k = pattern.len();
        let d = self.degree();
        if k > d {
            return false;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let vals: Vec<u8> = idx.iter().map(|&i| self.0[i]).collect();
            if (0..k).all(|a| (0..k).all(|b| (pattern[a] < pattern[b]) == (vals[a] < vals[b]))) {
                return true;
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    return false;
                }
                pos -= 1;
                if idx[pos] < d - k + pos {
                    idx[pos] += 1;
                    for t in pos + 1..k {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// All permutations of degree `d` in lexicographic one-line order.
    pub fn all(d: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..d as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..d).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// The three Frobenius actions on Weyl groups of type A.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum CoxKind {
    /// `S_d` with trivial Frobenius.
    Linear,
    /// `S_d` with `F(w) = w_0 w w_0`.
    Unitary,
    /// `S_d × S_d` with `F(w_1, w_2) = (w_0 w_2 w_0, w_0 w_1 w_0)`.
    FakeUnitary,
}

impl CoxKind {
    pub fn factors(self) -> usize {
        match self {
            CoxKind::FakeUnitary => 2,
            _ => 1,
        }
    }
}

/// A Weyl group of type `A_{d-1}` or `A_{d-1} × A_{d-1}` with its Frobenius.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CoxGroup {
    pub kind: CoxKind,
    pub d: usize,
}

/// An element of a [`CoxGroup`], one permutation per factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CoxElement {
    pub parts: Vec<Perm>,
}

/// A simple reflection: factor index and one-based position.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Simple {
    pub factor: usize,
    pub index: usize,
}

/// A subset of the simple reflections, one bitmask per factor (bit `i` for `s_i`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SimpleSubset {
    pub masks: Vec<u64>,
}

impl SimpleSubset {
    pub fn contains(&self, s: Simple) -> bool {
        self.masks[s.factor] >> s.index & 1 == 1
    }

    pub fn members(&self, d: usize) -> Vec<Simple> {
        let mut out = Vec::new();
        for (factor, &m) in self.masks.iter().enumerate() {
            for index in 1..d {
                if m >> index & 1 == 1 {
                    out.push(Simple { factor, index });
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn intersect(&self, other: &SimpleSubset) -> SimpleSubset {
        SimpleSubset { masks: self.masks.iter().zip(&other.masks).map(|(a, b)| a & b).collect() }
    }

    pub fn union(&self, other: &SimpleSubset) -> SimpleSubset {
        SimpleSubset { masks: self.masks.iter().zip(&other.masks).map(|(a, b)| a | b).collect() }
    }

    pub fn is_subset_of(&self, other: &SimpleSubset) -> bool {
        self.masks.iter().zip(&other.masks).all(|(a, b)| a & !b == 0)
    }

    /// Gap positions `k` with `s_{k+1}` missing, per factor, increasing.
    pub fn gaps(&self, d: usize) -> Vec<Vec<usize>> {
        self.masks.iter().map(|&m| (1..d).filter(|&i| m >> i & 1 == 0).map(|i| i - 1).collect()).collect()
    }

    /// Rank increments of the flags stabilized by this subset, per factor.
    pub fn flag_type(&self, d: usize) -> Vec<Vec<usize>> {
        self.gaps(d)
            .into_iter()
            .map(|gaps| {
                let mut cuts: Vec<usize> = gaps.iter().map(|k| k + 1).collect();
                cuts.push(d);
                let mut prev = 0;
                cuts.into_iter()
                    .map(|c| {
                        let inc = c - prev;
                        prev = c;
                        inc
                    })
                    .collect()
            })
            .collect()
    }

    /// Dimensions of the proper steps of the flag, per factor.
    pub fn flag_dims(&self, d: usize) -> Vec<Vec<usize>> {
        self.gaps(d).into_iter().map(|g| g.into_iter().map(|k| k + 1).collect()).collect()
    }
}

impl CoxGroup {
    pub fn new(kind: CoxKind, d: usize) -> Result<Self> {
        if d == 0 || d > 63 {
            return Err(Error::Precondition(format!("unsupported rank {d}")));
        }
        Ok(CoxGroup { kind, d })
    }

    pub fn factors(&self) -> usize {
        self.kind.factors()
    }

    pub fn identity(&self) -> CoxElement {
        CoxElement { parts: vec![Perm::identity(self.d); self.factors()] }
    }

    /// Element from one-based one-line notations, one per factor.
    pub fn element(&self, parts: &[&[usize]]) -> Result<CoxElement> {
        if parts.len() != self.factors() || parts.iter().any(|p| p.len() != self.d) {
            return Err(Error::KindMismatch(format!("expected {} permutations of degree {}", self.factors(), self.d)));
        }
        Ok(CoxElement { parts: parts.iter().map(|p| Perm::from_one_line(p)).collect::<Result<_>>()? })
    }

    /// Element from a word in the simple reflections.
    pub fn from_word(&self, word: &[Simple]) -> CoxElement {
        let mut w = self.identity();
        for &s in word {
            w = self.mul_simple_right(&w, s);
        }
        w
    }

    pub fn simple(&self, s: Simple) -> CoxElement {
        let mut w = self.identity();
        w.parts[s.factor] = Perm::simple(self.d, s.index);
        w
    }

    pub fn simples(&self) -> Vec<Simple> {
        (0..self.factors()).flat_map(|factor| (1..self.d).map(move |index| Simple { factor, index })).collect()
    }

    pub fn empty_subset(&self) -> SimpleSubset {
        SimpleSubset { masks: vec![0; self.factors()] }
    }

    pub fn full_subset(&self) -> SimpleSubset {
        let m = if self.d <= 1 { 0 } else { ((1u64 << self.d) - 1) & !1 };
        SimpleSubset { masks: vec![m; self.factors()] }
    }

    pub fn subset(&self, members: &[Simple]) -> SimpleSubset {
        let mut s = self.empty_subset();
        for m in members {
            s.masks[m.factor] |= 1 << m.index;
        }
        s
    }

    /// The subset missing exactly `s_{k+1}` for the given gaps (single factor kinds).
    pub fn subset_from_gaps(&self, gaps: &[Vec<usize>]) -> Result<SimpleSubset> {
        if gaps.len() != self.factors() {
            return Err(Error::KindMismatch("gap list per factor expected".into()));
        }
        let mut s = self.full_subset();
        for (factor, g) in gaps.iter().enumerate() {
            for &k in g {
                if k + 1 >= self.d {
                    return Err(Error::Precondition(format!("gap {k} out of range for d = {}", self.d)));
                }
                s.masks[factor] &= !(1 << (k + 1));
            }
        }
        Ok(s)
    }

    /// All subsets of the simple reflections.
    pub fn all_subsets(&self) -> Vec<SimpleSubset> {
        let bits = self.d.saturating_sub(1);
        let per = 1u64 << bits;
        let total = per.pow(self.factors() as u32);
        (0..total)
            .map(|code| {
                let masks = (0..self.factors()).map(|f| ((code / per.pow(f as u32)) % per) << 1).collect();
                SimpleSubset { masks }
            })
            .collect()
    }

    fn check(&self, w: &CoxElement) -> Result<()> {
        if w.parts.len() != self.factors() || w.parts.iter().any(|p| p.degree() != self.d) {
            return Err(Error::KindMismatch(format!("element does not belong to {:?} of rank {}", self.kind, self.d)));
        }
        Ok(())
    }

    pub fn length(&self, w: &CoxElement) -> usize {
        w.parts.iter().map(Perm::length).sum()
    }

    pub fn mul(&self, a: &CoxElement, b: &CoxElement) -> CoxElement {
        CoxElement { parts: a.parts.iter().zip(&b.parts).map(|(x, y)| x.compose(y)).collect() }
    }

    pub fn inverse(&self, w: &CoxElement) -> CoxElement {
        CoxElement { parts: w.parts.iter().map(Perm::inverse).collect() }
    }

    pub fn mul_simple_left(&self, w: &CoxElement, s: Simple) -> CoxElement {
        let mut out = w.clone();
        out.parts[s.factor] = w.parts[s.factor].mul_simple_left(s.index);
        out
    }

    pub fn mul_simple_right(&self, w: &CoxElement, s: Simple) -> CoxElement {
        let mut out = w.clone();
        out.parts[s.factor] = w.parts[s.factor].mul_simple_right(s.index);
        out
    }

    pub fn has_left_descent(&self, w: &CoxElement, s: Simple) -> bool {
        w.parts[s.factor].has_left_descent(s.index)
    }

    pub fn has_right_descent(&self, w: &CoxElement, s: Simple) -> bool {
        w.parts[s.factor].has_right_descent(s.index)
    }

    /// Length and Bruhat comparison of two elements.
    pub fn length_and_bruhat(&self, w: &CoxElement, w2: &CoxElement) -> Result<(usize, usize, bool)> {
        self.check(w)?;
        self.check(w2)?;
        Ok((self.length(w), self.length(w2), self.bruhat_leq(w, w2)))
    }

    pub fn bruhat_leq(&self, a: &CoxElement, b: &CoxElement) -> bool {
        a.parts.iter().zip(&b.parts).all(|(x, y)| x.bruhat_leq(y))
    }

    pub fn frobenius(&self, w: &CoxElement) -> CoxElement {
        match self.kind {
            CoxKind::Linear => w.clone(),
            CoxKind::Unitary => CoxElement { parts: vec![w.parts[0].conjugate_by_longest()] },
            CoxKind::FakeUnitary => {
                CoxElement { parts: vec![w.parts[1].conjugate_by_longest(), w.parts[0].conjugate_by_longest()] }
            }
        }
    }

    pub fn frobenius_simple(&self, s: Simple) -> Simple {
        match self.kind {
            CoxKind::Linear => s,
            CoxKind::Unitary => Simple { factor: 0, index: self.d - s.index },
            CoxKind::FakeUnitary => Simple { factor: 1 - s.factor, index: self.d - s.index },
        }
    }

    pub fn frobenius_subset(&self, j: &SimpleSubset) -> SimpleSubset {
        let members: Vec<Simple> = j.members(self.d).into_iter().map(|s| self.frobenius_simple(s)).collect();
        self.subset(&members)
    }

    /// `w^{-1} s w` when it is a simple reflection.
    pub fn conjugate_simple_back(&self, w: &CoxElement, s: Simple) -> Option<Simple> {
        let p = &w.parts[s.factor];
        let inv = p.inverse();
        let a = inv.apply(s.index);
        let b = inv.apply(s.index + 1);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        (hi == lo + 1).then_some(Simple { factor: s.factor, index: lo })
    }

    /// `I ∩ ʷJ = {s ∈ I : w^{-1} s w ∈ J}`.
    pub fn intersect_conjugate(&self, i: &SimpleSubset, w: &CoxElement, j: &SimpleSubset) -> SimpleSubset {
        let keep: Vec<Simple> = i
            .members(self.d)
            .into_iter()
            .filter(|&s| self.conjugate_simple_back(w, s).is_some_and(|t| j.contains(t)))
            .collect();
        self.subset(&keep)
    }

    /// Length of the longest element of `W_J`.
    pub fn parabolic_longest_length(&self, j: &SimpleSubset) -> usize {
        self.parabolic_blocks(j).iter().map(|&(_, _, len)| len * (len - 1) / 2).sum()
    }

    /// Maximal runs of consecutive positions generated by `J`: (factor, first point, size).
    fn parabolic_blocks(&self, j: &SimpleSubset) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for factor in 0..self.factors() {
            let mut start = 1;
            for i in 1..=self.d {
                let joined = i < self.d && j.contains(Simple { factor, index: i });
                if !joined {
                    out.push((factor, start, i + 1 - start));
                    start = i + 1;
                }
            }
        }
        out
    }

    /// The longest element of `W_J`.
    pub fn parabolic_longest(&self, j: &SimpleSubset) -> CoxElement {
        let mut w = self.identity();
        for (factor, start, size) in self.parabolic_blocks(j) {
            let p = &mut w.parts[factor];
            let mut v = p.one_line();
            v[start - 1..start - 1 + size].reverse();
            *p = Perm::from_one_line(&v).expect("block reversal is a permutation");
        }
        w
    }

    /// Order of `W_J`.
    pub fn parabolic_order(&self, j: &SimpleSubset) -> u128 {
        self.parabolic_blocks(j).iter().map(|&(_, _, size)| (1..=size as u128).product::<u128>()).product()
    }

    /// All elements of `W_J`, sorted.
    pub fn parabolic_elements(&self, j: &SimpleSubset) -> Result<Vec<CoxElement>> {
        let order = self.parabolic_order(j);
        if order > PARABOLIC_LIMIT as u128 {
            return Err(Error::SizeGuard { what: "parabolic subgroup".into(), needed: order, limit: PARABOLIC_LIMIT as u128 });
        }
        let gens = j.members(self.d);
        let mut seen: HashSet<CoxElement> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(w) = queue.pop_front() {
            for &s in &gens {
                let next = self.mul_simple_right(&w, s);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<CoxElement> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// All group elements, sorted.
    pub fn elements(&self) -> Result<Vec<CoxElement>> {
        self.parabolic_elements(&self.full_subset())
    }

    /// `w ∈ ᴵW`: no left descent in `I`.
    pub fn is_left_reduced(&self, w: &CoxElement, i: &SimpleSubset) -> bool {
        i.members(self.d).into_iter().all(|s| !self.has_left_descent(w, s))
    }

    /// `w ∈ W^J`: no right descent in `J`.
    pub fn is_right_reduced(&self, w: &CoxElement, j: &SimpleSubset) -> bool {
        j.members(self.d).into_iter().all(|s| !self.has_right_descent(w, s))
    }

    /// `I`-reduced in the sense `ℓ(vw) = ℓ(v) + ℓ(w)` for `v ∈ W_I`.
    pub fn i_reduced(&self, w: &CoxElement, i: &SimpleSubset) -> bool {
        self.is_left_reduced(w, i)
    }

    /// Minimal element of `W_I w W_J`.
    pub fn min_double_coset(&self, w: &CoxElement, i: &SimpleSubset, j: &SimpleSubset) -> CoxElement {
        let left = i.members(self.d);
        let right = j.members(self.d);
        let mut cur = w.clone();
        loop {
            if let Some(&s) = left.iter().find(|&&s| self.has_left_descent(&cur, s)) {
                cur = self.mul_simple_left(&cur, s);
                continue;
            }
            if let Some(&s) = right.iter().find(|&&s| self.has_right_descent(&cur, s)) {
                cur = self.mul_simple_right(&cur, s);
                continue;
            }
            return cur;
        }
    }

    /// Maximal element of `W_I w W_J`.
    pub fn max_double_coset(&self, w: &CoxElement, i: &SimpleSubset, j: &SimpleSubset) -> CoxElement {
        let left = i.members(self.d);
        let right = j.members(self.d);
        let mut cur = w.clone();
        loop {
            if let Some(&s) = left.iter().find(|&&s| !self.has_left_descent(&cur, s)) {
                cur = self.mul_simple_left(&cur, s);
                continue;
            }
            if let Some(&s) = right.iter().find(|&&s| !self.has_right_descent(&cur, s)) {
                cur = self.mul_simple_right(&cur, s);
                continue;
            }
            return cur;
        }
    }

    /// All elements of `ᴵW`, sorted.
    pub fn left_reduced_elements(&self, i: &SimpleSubset) -> Result<Vec<CoxElement>> {
        Ok(self.elements()?.into_iter().filter(|w| self.is_left_reduced(w, i)).collect())
    }

    /// All elements of `ᴵW^J`, sorted.
    pub fn double_reduced_elements(&self, i: &SimpleSubset, j: &SimpleSubset) -> Result<Vec<CoxElement>> {
        Ok(self
            .elements()?
            .into_iter()
            .filter(|w| self.is_left_reduced(w, i) && self.is_right_reduced(w, j))
            .collect())
    }

    /// `w' ≤_{I,F} w`: some `u ∈ W_I` has `u w' F(u)^{-1} ≤ w`.
    pub fn leq_if(&self, w_small: &CoxElement, w: &CoxElement, i: &SimpleSubset) -> Result<bool> {
        if !self.is_left_reduced(w_small, i) || !self.is_left_reduced(w, i) {
            return Err(Error::Precondition("arguments must be I-reduced".into()));
        }
        if self.length(w_small) > self.length(w) + 2 * self.parabolic_longest_length(i) {
            return Ok(false);
        }
        for u in self.parabolic_elements(i)? {
            let twisted = self.mul(&self.mul(&u, w_small), &self.inverse(&self.frobenius(&u)));
            if self.bruhat_leq(&twisted, w) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `{w' ∈ ᴵW : w' ≤_{I,F} w}`, sorted.
    pub fn closure_fine(&self, i: &SimpleSubset, w: &CoxElement) -> Result<Vec<CoxElement>> {
        let mut out = Vec::new();
        for v in self.left_reduced_elements(i)? {
            if self.leq_if(&v, w, i)? {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// The stabilizing sequence `(I_n, w_n)` ending in `w`, with `w_n` the minimal
    /// element of `W_{I_n} w W_{F(I_n)}` and `I_{n+1} = I_n ∩ ^{w_n}F(I_n)`.
    pub fn bedard(&self, i: &SimpleSubset, w: &CoxElement) -> Result<BedardSequence> {
        if !self.is_left_reduced(w, i) {
            return Err(Error::Precondition("w must be I-reduced".into()));
        }
        let mut steps = Vec::new();
        let mut cur = i.clone();
        loop {
            let fi = self.frobenius_subset(&cur);
            let wn = self.min_double_coset(w, &cur, &fi);
            let next = self.intersect_conjugate(&cur, &wn, &fi);
            steps.push((cur.clone(), wn));
            if next == cur {
                break;
            }
            cur = next;
        }
        Ok(BedardSequence { steps, limit: cur, element: w.clone() })
    }

    /// Dimension `ℓ(w) + ℓ(W_{F(I)}) - ℓ(W_{I ∩ ʷF(I)})` of a coarse variety.
    pub fn dim_coarse(&self, i: &SimpleSubset, w: &CoxElement) -> Result<usize> {
        let fi = self.frobenius_subset(i);
        if !self.is_left_reduced(w, i) || !self.is_right_reduced(w, &fi) {
            return Err(Error::Precondition("coarse label must lie in ᴵW^{F(I)}".into()));
        }
        let meet = self.intersect_conjugate(i, w, &fi);
        Ok(self.length(w) + self.parabolic_longest_length(&fi) - self.parabolic_longest_length(&meet))
    }

    /// False iff `W_I w` lies in a proper `F`-stable standard parabolic subgroup.
    pub fn is_irreducible(&self, i: &SimpleSubset, w: &CoxElement) -> bool {
        let mut members: BTreeSet<Simple> = i.members(self.d).into_iter().collect();
        for (factor, p) in w.parts.iter().enumerate() {
            for index in p.support() {
                members.insert(Simple { factor, index });
            }
        }
        loop {
            let extra: Vec<Simple> = members.iter().map(|&s| self.frobenius_simple(s)).filter(|s| !members.contains(s)).collect();
            if extra.is_empty() {
                break;
            }
            members.extend(extra);
        }
        members.len() == self.simples().len()
    }

    /// Rational Levi condition `I = w F(I) w^{-1}`.
    pub fn is_rational_levi(&self, i: &SimpleSubset, w: &CoxElement) -> bool {
        let fi = self.frobenius_subset(i);
        self.intersect_conjugate(i, w, &fi) == *i && i.len() == fi.len()
    }

    /// `x · w' · y` with `y` longest in `W_{F(J)}` and `x` longest in `W_J ∩ W^{J ∩ ʷ'F(J)}`.
    pub fn build_xwy(&self, j: &SimpleSubset, w: &CoxElement) -> Result<CoxElement> {
        let fj = self.frobenius_subset(j);
        if !self.is_left_reduced(w, j) || !self.is_right_reduced(w, &fj) {
            return Err(Error::Precondition("w must lie in ᴶW^{F(J)}".into()));
        }
        let k = self.intersect_conjugate(j, w, &fj);
        let x = self.mul(&self.parabolic_longest(j), &self.parabolic_longest(&k));
        let y = self.parabolic_longest(&fj);
        Ok(self.mul(&self.mul(&x, w), &y))
    }
}

/// Output of [`CoxGroup::bedard`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BedardSequence {
    /// Pairs `(I_n, w_n)` until the subset stabilizes.
    pub steps: Vec<(SimpleSubset, CoxElement)>,
    /// `I_∞`.
    pub limit: SimpleSubset,
    /// `w_∞`.
    pub element: CoxElement,
}

/// Avoidance of each one-based pattern.
pub fn pattern_avoids(sigma: &Perm, patterns: &[&[usize]]) -> bool {
    patterns.iter().all(|p| !sigma.contains_pattern(p))
}

/// The smoothness patterns `3412` and `4231`.
pub const SMOOTHNESS_PATTERNS: [&[usize]; 2] = [&[3, 4, 1, 2], &[4, 2, 3, 1]];

/// `σ = τ σ_1 σ_2` with `σ_1` fixing `{k+1..n}`, `σ_2` fixing `{1..k}` and `τ`
/// trivial when `σ^{-1}(k+1) > k`, a transposition `(x, k+1)` otherwise.
pub fn decompose_k(sigma: &Perm, k: usize) -> Result<(Perm, Perm, Perm)> {
    let n = sigma.degree();
    if k >= n || (1..=k).any(|i| sigma.apply(i) > k + 1) {
        return Err(Error::Precondition(format!("σ does not map 1..{k} into 1..{}", k + 1)));
    }
    let x = (1..=(k + 1).min(n)).find(|&x| sigma.inverse().apply(x) > k).expect("a value escapes 1..k");
    let tau = Perm::transposition(n, x, k + 1);
    let ts = tau.compose(sigma);
    let mut s1 = Perm::identity(n).one_line();
    let mut s2 = Perm::identity(n).one_line();
    for i in 1..=n {
        if i <= k {
            s1[i - 1] = ts.apply(i);
        } else {
            s2[i - 1] = ts.apply(i);
        }
    }
    Ok((tau, Perm::from_one_line(&s1)?, Perm::from_one_line(&s2)?))
}

/// `s_{k+1} s_{k+2} ⋯ s_{k+t}`.
pub fn gap_word(n: usize, k: usize, t: usize) -> Perm {
    let word: Vec<usize> = (k + 1..=k + t).collect();
    Perm::from_word(n, &word)
}

/// Product `w_1 ⋯ w_r` of the gap words.
pub fn chain_product(n: usize, gaps: &[usize], ts: &[usize]) -> Perm {
    gaps.iter().zip(ts).fold(Perm::identity(n), |acc, (&k, &t)| acc.compose(&gap_word(n, k, t)))
}

/// Upper bounds `k_{i+1} - k_i` and `n - 1 - k_r` for the word lengths.
pub fn chain_bounds(n: usize, gaps: &[usize]) -> Vec<usize> {
    let r = gaps.len();
    (0..r).map(|i| if i + 1 < r { gaps[i + 1] - gaps[i] } else { n - 1 - gaps[i] }).collect()
}

/// Word lengths `(t_i)` with `σ = w_1 ⋯ w_r`, or `None` when the mapping condition fails.
pub fn decompose_chain(sigma: &Perm, gaps: &[usize]) -> Result<Option<Vec<usize>>> {
    let n = sigma.degree();
    if gaps.windows(2).any(|w| w[0] >= w[1]) || gaps.last().is_some_and(|&k| k + 1 >= n) {
        return Err(Error::Precondition("gaps must be increasing and below n - 1".into()));
    }
    let group = CoxGroup::new(CoxKind::Linear, n)?;
    let gaps_set = vec![gaps.to_vec()];
    let i = group.subset_from_gaps(&gaps_set)?;
    if !group.is_left_reduced(&CoxElement { parts: vec![sigma.clone()] }, &i) {
        return Err(Error::Precondition("σ must be I-reduced".into()));
    }
    if gaps.iter().any(|&k| (1..=k).any(|a| sigma.apply(a) > k + 1)) {
        return Ok(None);
    }
    let bounds = chain_bounds(n, gaps);
    let mut cur = sigma.clone();
    let mut ts = vec![0; gaps.len()];
    for j in (0..gaps.len()).rev() {
        let (tau, s1, s2) = decompose_k(&cur, gaps[j])?;
        let Some(t) = (0..=bounds[j]).find(|&t| gap_word(n, gaps[j], t) == s2) else {
            return Ok(None);
        };
        ts[j] = t;
        cur = tau.compose(&s1);
    }
    Ok(cur.is_identity().then_some(ts))
}

/// Every tuple `0 ≤ t_i ≤ bound_i`, lexicographic.
pub fn enumerate_admissible(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t);
                    v
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unitary(d: usize) -> CoxGroup {
        CoxGroup::new(CoxKind::Unitary, d).unwrap()
    }

    fn s(index: usize) -> Simple {
        Simple { factor: 0, index }
    }

    #[test]
    fn lengths_and_bruhat() {
        let g = CoxGroup::new(CoxKind::Linear, 3).unwrap();
        assert_eq!(g.length(&g.identity()), 0);
        assert_eq!(Perm::longest(3).length(), 3);
        let s1 = g.simple(s(1));
        let s1s2 = g.from_word(&[s(1), s(2)]);
        assert!(g.length_and_bruhat(&s1, &s1s2).unwrap().2);
        let fake = CoxGroup::new(CoxKind::FakeUnitary, 3).unwrap();
        assert!(matches!(g.length_and_bruhat(&s1, &fake.identity()), Err(Error::KindMismatch(_))));
    }

    #[test]
    fn reducedness_and_double_cosets() {
        let g = CoxGroup::new(CoxKind::Linear, 3).unwrap();
        let i = g.subset(&[s(1)]);
        assert!(g.i_reduced(&g.identity(), &i));
        assert!(!g.i_reduced(&g.simple(s(1)), &i));
        let min = g.min_double_coset(&g.from_word(&[s(1), s(2)]), &i, &g.empty_subset());
        assert_eq!(min, g.simple(s(2)));
    }

    #[test]
    fn twisted_order_example() {
        let g = unitary(3);
        let i = g.subset(&[s(1)]);
        let w = g.simple(s(2));
        assert_eq!(g.closure_fine(&i, &w).unwrap(), vec![g.identity(), w.clone()]);
        assert!(g.leq_if(&g.identity(), &w, &i).unwrap());
        assert!(g.leq_if(&w, &w, &i).unwrap());
    }

    #[test]
    fn bedard_extremes() {
        let g = unitary(3);
        let w = g.simple(s(2));
        let seq = g.bedard(&g.empty_subset(), &w).unwrap();
        assert_eq!(seq.limit, g.empty_subset());
        let full = g.bedard(&g.full_subset(), &g.identity()).unwrap();
        assert_eq!(full.limit, g.full_subset());
        let i = g.subset(&[s(1)]);
        let seq = g.bedard(&i, &w).unwrap();
        assert!(g.is_rational_levi(&seq.limit, &w));
        assert!(seq.limit.is_empty());
    }

    #[test]
    fn lemma_decomposition_examples() {
        let id = Perm::identity(3);
        assert_eq!(decompose_k(&id, 1).unwrap(), (id.clone(), id.clone(), id.clone()));
        let s2 = Perm::from_one_line(&[1, 3, 2]).unwrap();
        assert_eq!(decompose_k(&s2, 1).unwrap(), (id.clone(), id.clone(), s2.clone()));
        let s1 = Perm::from_one_line(&[2, 1, 3]).unwrap();
        assert_eq!(decompose_k(&s1, 1).unwrap(), (s1.clone(), id.clone(), id.clone()));
    }

    #[test]
    fn chain_decomposition_examples() {
        assert_eq!(decompose_chain(&Perm::identity(3), &[1]).unwrap(), Some(vec![0]));
        assert_eq!(decompose_chain(&Perm::simple(3, 2), &[1]).unwrap(), Some(vec![1]));
        let s1s3 = Perm::from_word(4, &[1, 3]);
        assert_eq!(decompose_chain(&s1s3, &[0, 2]).unwrap(), Some(vec![1, 1]));
    }

    #[test]
    fn admissible_tuples() {
        assert_eq!(enumerate_admissible(&[1]), vec![vec![0], vec![1]]);
        assert_eq!(enumerate_admissible(&[]), vec![Vec::<usize>::new()]);
        assert_eq!(enumerate_admissible(&[1, 2]).len(), 6);
    }

    #[test]
    fn patterns() {
        assert!(pattern_avoids(&Perm::identity(4), &SMOOTHNESS_PATTERNS));
        assert!(!pattern_avoids(&Perm::from_one_line(&[3, 4, 1, 2]).unwrap(), &SMOOTHNESS_PATTERNS));
    }

    #[test]
    fn flag_types() {
        let g = CoxGroup::new(CoxKind::Linear, 3).unwrap();
        assert_eq!(g.full_subset().flag_type(3), vec![vec![3]]);
        assert_eq!(g.empty_subset().flag_type(3), vec![vec![1, 1, 1]]);
        assert_eq!(g.subset(&[s(1)]).flag_type(3), vec![vec![2, 1]]);
    }

    #[test]
    fn coarse_dimensions() {
        let g = unitary(3);
        let i = g.subset(&[s(1)]);
        let w = g.simple(s(2));
        assert!(g.dim_coarse(&i, &w).is_err());
        assert_eq!(g.min_double_coset(&w, &i, &g.frobenius_subset(&i)), g.identity());
        assert_eq!(g.dim_coarse(&i, &g.identity()).unwrap(), 1);
        let w3 = g.from_word(&[s(1), s(2)]);
        assert_eq!(g.dim_coarse(&g.empty_subset(), &w3).unwrap(), 2);
        assert!(g.is_irreducible(&i, &w));
        assert!(!g.is_irreducible(&g.empty_subset(), &g.identity()));
    }
}
