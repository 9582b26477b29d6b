//! Deligne-Lusztig blocks of a closed stratum: the head and tail unitary
//! blocks, the fake unitary blocks between consecutive elements of `I`,
//! their fine decompositions and the selection of the open stratum.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coxeter::{chain_bounds, chain_product, enumerate_admissible, CoxElement, CoxGroup, CoxKind, SimpleSubset};
use crate::dl::{Census, DLDescriptor, FlagModel};
use crate::error::{Error, Result};
use crate::field::Field;

use super::index::AbstractIndex;

/// Position of a block inside the index set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum BlockRole {
    /// Unitary block of `Λ₀^{i₁}` covering `1..=i₁`.
    Head { last: usize },
    /// Fake unitary block between consecutive `from < to` in `I`.
    Middle { from: usize, to: usize },
    /// Unitary block of `Λ₁^{i_s}` covering `i_s+1..=m`.
    Tail { first: usize },
}

/// A word-length position `(factor, gap)`, zero-based.
pub type GapPosition = (usize, usize);

/// One inequality cutting out the open stratum.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum OpenClause {
    /// `t_a + t_b ≥ bound`; `a = b` encodes `2 t_a ≥ bound`.
    AtLeast { a: GapPosition, b: GapPosition, bound: usize },
    /// `t_a` takes its largest value.
    Forced { at: GapPosition },
}

/// One factor of a closed stratum.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Block {
    pub role: BlockRole,
    /// Fine descriptor `X_J{w}` whose closure is the block.
    pub descriptor: DLDescriptor,
    /// Proper step dimensions of the flags, per factor.
    pub flag_dims: Vec<Vec<usize>>,
    /// Upper bounds of the word lengths `t_i`, per factor.
    pub bounds: Vec<Vec<usize>>,
    pub open: Vec<OpenClause>,
    pub dimension: usize,
}

/// Word lengths `(t_i)` per factor of one block.
pub type WordLengths = Vec<Vec<usize>>;

/// The closed stratum of an index as a product of blocks.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StratumDescriptor {
    pub index: AbstractIndex,
    pub blocks: Vec<Block>,
    pub dimension: usize,
}

/// One fine stratum: word lengths and fine descriptor per block.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FineStratum {
    pub lengths: Vec<WordLengths>,
    pub descriptors: Vec<DLDescriptor>,
    pub dimension: usize,
}

/// Step dimensions from a first dimension and increments, dropping repeats and the full space.
fn step_dims(d: usize, first: usize, increments: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut dims = vec![first];
    let mut cur = first;
    for inc in increments {
        cur += inc;
        dims.push(cur);
    }
    dims.dedup();
    dims.retain(|&x| x > 0 && x < d);
    dims
}

impl Block {
    fn new(role: BlockRole, kind: CoxKind, d: usize, flag_dims: Vec<Vec<usize>>, open: Vec<OpenClause>) -> Result<Self> {
        let group = CoxGroup::new(kind, d)?;
        let gaps: Vec<Vec<usize>> = flag_dims.iter().map(|dims| dims.iter().map(|x| x - 1).collect()).collect();
        let subset = group.subset_from_gaps(&gaps)?;
        let bounds: Vec<Vec<usize>> = gaps.iter().map(|g| chain_bounds(d, g)).collect();
        let parts = gaps.iter().zip(&bounds).map(|(g, b)| chain_product(d, g, b)).collect();
        let descriptor = DLDescriptor { kind, d, subset, w: CoxElement { parts }, fine: true };
        descriptor.validate()?;
        let dimension = descriptor.dimension()?;
        Ok(Block { role, descriptor, flag_dims, bounds, open, dimension })
    }

    pub fn kind(&self) -> CoxKind {
        self.descriptor.kind
    }

    pub fn d(&self) -> usize {
        self.descriptor.d
    }

    pub fn subset(&self) -> &SimpleSubset {
        &self.descriptor.subset
    }

    /// Every admissible tuple of word lengths.
    pub fn fine_lengths(&self) -> Vec<WordLengths> {
        let flat: Vec<usize> = self.bounds.iter().flatten().copied().collect();
        enumerate_admissible(&flat).into_iter().map(|ts| self.split(&ts)).collect()
    }

    fn split(&self, flat: &[usize]) -> WordLengths {
        let mut out = Vec::new();
        let mut rest = flat;
        for b in &self.bounds {
            let (head, tail) = rest.split_at(b.len());
            out.push(head.to_vec());
            rest = tail;
        }
        out
    }

    /// The fine descriptor `X_J{w_1 ⋯ w_r}` of a tuple of word lengths.
    pub fn fine_descriptor(&self, lengths: &WordLengths) -> DLDescriptor {
        let d = self.d();
        let parts = self
            .flag_dims
            .iter()
            .zip(lengths)
            .map(|(dims, ts)| {
                let gaps: Vec<usize> = dims.iter().map(|x| x - 1).collect();
                chain_product(d, &gaps, ts)
            })
            .collect();
        DLDescriptor { kind: self.kind(), d, subset: self.subset().clone(), w: CoxElement { parts }, fine: true }
    }

    /// Whether a tuple of word lengths lies in the open stratum.
    pub fn is_open(&self, lengths: &WordLengths) -> bool {
        self.open.iter().all(|clause| match *clause {
            OpenClause::AtLeast { a, b, bound } => lengths[a.0][a.1] + lengths[b.0][b.1] >= bound,
            OpenClause::Forced { at } => lengths[at.0][at.1] == self.bounds[at.0][at.1],
        })
    }
}

fn head_block(idx: &AbstractIndex, last: usize) -> Result<Block> {
    let tuple = &idx.tuple;
    let d = idx.t0[&last];
    let h = tuple.h(last);
    let l = (d - h + 1) / 2;
    let h1 = tuple.h(1);
    let increments = (1..last).rev().map(|i| tuple.delta(i)).chain([h1]).chain((1..last).map(|i| tuple.delta(i)));
    let dims = step_dims(d, l, increments);
    let r = dims.len();
    let r0 = if l > 1 { r - 1 } else { r };
    let mut open = Vec::new();
    for i in 1..last {
        open.push(OpenClause::AtLeast { a: (0, i - 1), b: (0, r0 - i), bound: tuple.delta(last - i) });
    }
    if h1 != 0 {
        open.push(OpenClause::AtLeast { a: (0, last - 1), b: (0, last - 1), bound: h1 });
    }
    if l > 1 {
        open.push(OpenClause::Forced { at: (0, r - 1) });
    }
    Block::new(BlockRole::Head { last }, CoxKind::Unitary, d, vec![dims], open)
}

fn tail_block(idx: &AbstractIndex, first: usize) -> Result<Block> {
    let tuple = &idx.tuple;
    let (n, m) = (tuple.n(), tuple.m());
    let d = idx.t1[&first];
    let l = (d + tuple.h(first + 1) + 1 - n) / 2;
    let span = m - first;
    let top = n - tuple.h(m);
    let increments = (1..span)
        .map(|i| tuple.delta(first + i))
        .chain([top])
        .chain((1..span).rev().map(|i| tuple.delta(first + i)));
    let dims = step_dims(d, l, increments);
    let r = dims.len();
    let r0 = if l > 1 { r - 1 } else { r };
    let mut open = Vec::new();
    for i in 1..span {
        open.push(OpenClause::AtLeast { a: (0, i - 1), b: (0, r0 - i), bound: tuple.delta(first + i) });
    }
    if top != 0 {
        open.push(OpenClause::AtLeast { a: (0, span - 1), b: (0, span - 1), bound: top });
    }
    if l > 1 {
        open.push(OpenClause::Forced { at: (0, r - 1) });
    }
    Block::new(BlockRole::Tail { first }, CoxKind::Unitary, d, vec![dims], open)
}

fn middle_block(idx: &AbstractIndex, from: usize, to: usize) -> Result<Block> {
    let tuple = &idx.tuple;
    let n = tuple.n();
    let (t1, t0) = (idx.t1[&from], idx.t0[&to]);
    let d = (t1 + t0 - n) / 2;
    let l0 = (t0 - tuple.h(to) + 1) / 2;
    let l1 = (t1 + tuple.h(from + 1) + 1 - n) / 2;
    let span = to - from;
    let w_dims = step_dims(d, l1, (1..span).map(|i| tuple.delta(from + i)));
    let u_dims = step_dims(d, l0, (1..span).rev().map(|i| tuple.delta(from + i)));
    let (r, r_u) = (w_dims.len(), u_dims.len());
    let r0_u = if l1 > 1 { r_u - 1 } else { r_u };
    let mut open = Vec::new();
    for i in 1..span {
        open.push(OpenClause::AtLeast { a: (0, i - 1), b: (1, r0_u - i), bound: tuple.delta(from + i) });
    }
    if l0 > 1 {
        open.push(OpenClause::Forced { at: (0, r - 1) });
    }
    if l1 > 1 {
        open.push(OpenClause::Forced { at: (1, r_u - 1) });
    }
    Block::new(BlockRole::Middle { from, to }, CoxKind::FakeUnitary, d, vec![w_dims, u_dims], open)
}

/// The closed stratum of a valid abstract index as a product of blocks.
pub fn stratum_descriptor(idx: &AbstractIndex) -> Result<StratumDescriptor> {
    let diagnostics = idx.diagnostics();
    if !diagnostics.is_empty() {
        return Err(Error::InfeasibleIndex(diagnostics.join("; ")));
    }
    let m = idx.tuple.m();
    let set = &idx.set;
    let mut blocks = Vec::new();
    if set[0] != 0 {
        blocks.push(head_block(idx, set[0])?);
    }
    for w in set.windows(2) {
        blocks.push(middle_block(idx, w[0], w[1])?);
    }
    let last = *set.last().expect("I is nonempty");
    if last != m {
        blocks.push(tail_block(idx, last)?);
    }
    let dimension = blocks.iter().map(|b| b.dimension).sum();
    Ok(StratumDescriptor { index: idx.clone(), blocks, dimension })
}

impl StratumDescriptor {
    fn strata(&self, keep: impl Fn(&Block, &WordLengths) -> bool) -> Vec<FineStratum> {
        let mut out = vec![FineStratum { lengths: Vec::new(), descriptors: Vec::new(), dimension: 0 }];
        for block in &self.blocks {
            let choices: Vec<(WordLengths, DLDescriptor, usize)> = block
                .fine_lengths()
                .into_iter()
                .filter(|ts| keep(block, ts))
                .map(|ts| {
                    let desc = block.fine_descriptor(&ts);
                    let dim = ts.iter().flatten().sum();
                    (ts, desc, dim)
                })
                .collect();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |(ts, desc, dim)| {
                        let mut next = prefix.clone();
                        next.lengths.push(ts.clone());
                        next.descriptors.push(desc.clone());
                        next.dimension += dim;
                        next
                    })
                })
                .collect();
        }
        out
    }

    /// Every fine stratum of the closed stratum.
    pub fn fine_decomposition(&self) -> Vec<FineStratum> {
        self.strata(|_, _| true)
    }

    /// The fine strata making up the open stratum.
    pub fn open_selection(&self) -> Vec<FineStratum> {
        self.strata(|block, ts| block.is_open(ts))
    }
}

/// Fine decomposition of the closed stratum of `idx`.
pub fn fine_decomposition(idx: &AbstractIndex) -> Result<Vec<FineStratum>> {
    Ok(stratum_descriptor(idx)?.fine_decomposition())
}

/// Fine strata of the open stratum of `idx`.
pub fn open_selection(idx: &AbstractIndex) -> Result<Vec<FineStratum>> {
    Ok(stratum_descriptor(idx)?.open_selection())
}

/// Point counts of blocks over a fixed field, with cached flag censuses.
pub struct StratumCounter {
    field: Arc<Field>,
    models: BTreeMap<(CoxKind, usize), FlagModel>,
    censuses: HashMap<(CoxKind, usize, SimpleSubset), Census>,
}

impl StratumCounter {
    pub fn new(field: Arc<Field>) -> Self {
        StratumCounter { field, models: BTreeMap::new(), censuses: HashMap::new() }
    }

    pub fn model(&mut self, kind: CoxKind, d: usize) -> Result<&FlagModel> {
        if !self.models.contains_key(&(kind, d)) {
            let model = FlagModel::with_field(kind, d, self.field.clone())?;
            self.models.insert((kind, d), model);
        }
        Ok(&self.models[&(kind, d)])
    }

    fn census(&mut self, kind: CoxKind, d: usize, subset: &SimpleSubset) -> Result<&Census> {
        let key = (kind, d, subset.clone());
        if !self.censuses.contains_key(&key) {
            let census = self.model(kind, d)?.census(subset)?;
            self.censuses.insert(key.clone(), census);
        }
        Ok(&self.censuses[&key])
    }

    /// Points of a fine stratum `X_J{w}`.
    pub fn fine_count(&mut self, desc: &DLDescriptor) -> Result<u64> {
        Ok(self.census(desc.kind, desc.d, &desc.subset)?.fine.get(&desc.w).copied().unwrap_or(0))
    }

    /// Points of the closure of a fine stratum.
    pub fn closure_count(&mut self, desc: &DLDescriptor) -> Result<u64> {
        let closure = self.model(desc.kind, desc.d)?.group.closure_fine(&desc.subset, &desc.w)?;
        let census = self.census(desc.kind, desc.d, &desc.subset)?;
        Ok(closure.iter().map(|w| census.fine.get(w).copied().unwrap_or(0)).sum())
    }

    /// Points of the closed stratum.
    pub fn closed_count(&mut self, stratum: &StratumDescriptor) -> Result<u64> {
        stratum.blocks.iter().try_fold(1u64, |acc, b| Ok(acc * self.closure_count(&b.descriptor)?))
    }

    fn block_sum(&mut self, block: &Block, open_only: bool) -> Result<u64> {
        let mut total = 0;
        for ts in block.fine_lengths() {
            if !open_only || block.is_open(&ts) {
                total += self.fine_count(&block.fine_descriptor(&ts))?;
            }
        }
        Ok(total)
    }

    /// Sum of the point counts of all fine strata.
    pub fn fine_total(&mut self, stratum: &StratumDescriptor) -> Result<u64> {
        stratum.blocks.iter().try_fold(1u64, |acc, b| Ok(acc * self.block_sum(b, false)?))
    }

    /// Points of the open stratum.
    pub fn open_count(&mut self, stratum: &StratumDescriptor) -> Result<u64> {
        stratum.blocks.iter().try_fold(1u64, |acc, b| Ok(acc * self.block_sum(b, true)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::strata::index::enumerate_abstract;
    use crate::strata::tuple::ParahoricTuple;

    fn tuple(n: usize, h: &[usize]) -> ParahoricTuple {
        ParahoricTuple::new(n, h.to_vec()).unwrap()
    }

    #[test]
    fn hyperspecial_block() {
        let t = tuple(3, &[0]);
        let idx = AbstractIndex::from_chain_values(&t, &[1], &[3]);
        let s = stratum_descriptor(&idx).unwrap();
        assert_eq!(s.blocks.len(), 1);
        let b = &s.blocks[0];
        assert_eq!((b.kind(), b.d(), b.dimension), (CoxKind::Unitary, 3, 1));
        assert_eq!(b.flag_dims, vec![vec![2]]);
        assert_eq!(s.fine_decomposition().len(), 2);
        assert_eq!(s.open_selection().len(), 1);
        assert_eq!(s.open_selection()[0].dimension, 1);
    }

    #[test]
    fn top_word_has_full_length() {
        for n in 1..=5 {
            for t in ParahoricTuple::all(n) {
                for idx in enumerate_abstract(&t) {
                    let s = stratum_descriptor(&idx).unwrap();
                    for b in &s.blocks {
                        let total: usize = b.bounds.iter().flatten().sum();
                        assert_eq!(b.dimension, total, "{idx}");
                    }
                    let fine = s.fine_decomposition();
                    assert_eq!(fine.iter().filter(|f| f.dimension == s.dimension).count(), 1);
                    assert!(fine.iter().all(|f| f.dimension <= s.dimension));
                    assert!(!s.open_selection().is_empty(), "{idx}");
                }
            }
        }
    }

    #[test]
    fn fine_counts_sum_to_closure() {
        let field = Arc::new(Field::new(FieldSpec::new(3, 1, 1)).unwrap());
        let mut counter = StratumCounter::new(field);
        for n in 1..=4 {
            for t in ParahoricTuple::all(n) {
                for idx in enumerate_abstract(&t) {
                    let s = stratum_descriptor(&idx).unwrap();
                    if s.blocks.iter().any(|b| b.d() > 4 || (b.kind() == CoxKind::FakeUnitary && b.d() > 3)) {
                        continue;
                    }
                    assert_eq!(counter.closed_count(&s).unwrap(), counter.fine_total(&s).unwrap(), "{idx}");
                }
            }
        }
    }
}
