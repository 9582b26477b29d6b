//! The `verify` command: brute-force replays of the structural identities,
//! each comparing two independent computations.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::coxeter::{
    chain_bounds, chain_product, decompose_chain, decompose_k, enumerate_admissible, pattern_avoids, CoxElement, CoxGroup, CoxKind, Perm,
    SMOOTHNESS_PATTERNS,
};
use crate::dl::{FlagModel, FLAG_LIMIT};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermitian::{neighbour_vertices, Direction};
use crate::lattice::{AmbientSpace, VertexLattice, WindowLattice};
use crate::linalg::for_each_subspace;
use crate::strata::concrete::{rank_swap, window_vertices};
use crate::strata::points::{enumerate_points, in_stratum};
use crate::strata::{
    bt_type_of_point, enumerate_abstract, intersect_index, leq_index, stratum_descriptor, window_indices, ConcreteIndex, Intersection,
    ParahoricTuple, PointMap, RZPoint, StratumCounter,
};

use super::{Check, Header, Report, ReportConfig};

/// A group of replays selectable from the command line.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Suite {
    Coxeter,
    Lattice,
    Hermitian,
    Dl,
    Bt,
    Bijection,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["coxeter", "lattice", "hermitian", "dl", "bt", "bijection", "all"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "coxeter" => Suite::Coxeter,
            "lattice" => Suite::Lattice,
            "hermitian" => Suite::Hermitian,
            "dl" => Suite::Dl,
            "bt" => Suite::Bt,
            "bijection" => Suite::Bijection,
            "all" => Suite::All,
            other => return Err(Error::UnknownSuite(format!("{other} (expected one of {})", Suite::NAMES.join(", ")))),
        })
    }
}

/// Payload of the `verify` command.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerifyBody {
    pub suite: Suite,
    /// Instances left out by size guards, per check.
    pub refused: BTreeMap<String, usize>,
}

/// Largest symmetric-group degree replayed by the coxeter suite.
pub const COXETER_DEGREE_LIMIT: usize = 7;

/// Largest flag rank replayed by the dl suite from the command line.
pub const CENSUS_RANK_LIMIT: usize = 3;

/// Largest closed stratum whose points the bijection suite enumerates.
pub const BIJECTION_POINT_LIMIT: u64 = 1_000;

/// Largest rank for which the poset laws are replayed.
pub const POSET_LAW_RANK_LIMIT: usize = 3;

/// Unique decomposition `σ = w_1 ⋯ w_r` into gap words for every chain of
/// gaps in `S_n`, `n ≤ max_degree`, and the mapping condition for the rest.
pub fn check_chain_decomposition(max_degree: usize) -> Result<Check> {
    let mut failures = Vec::new();
    let mut cases = 0usize;
    for n in 2..=max_degree {
        let perms = Perm::all(n);
        let linear = CoxGroup::new(CoxKind::Linear, n)?;
        for mask in 1u32..(1 << (n - 1)) {
            let gaps: Vec<usize> = (0..n - 1).filter(|g| mask >> g & 1 == 1).collect();
            let bounds = chain_bounds(n, &gaps);
            let mut products: HashMap<Perm, Vec<usize>> = HashMap::new();
            for ts in enumerate_admissible(&bounds) {
                let sigma = chain_product(n, &gaps, &ts);
                if let Some(old) = products.insert(sigma, ts.clone()) {
                    failures.push(format!("n={n} gaps={gaps:?}: {old:?} and {ts:?} collide"));
                }
            }
            let subset = linear.subset_from_gaps(std::slice::from_ref(&gaps))?;
            for sigma in &perms {
                if !linear.is_left_reduced(&CoxElement { parts: vec![sigma.clone()] }, &subset) {
                    continue;
                }
                cases += 1;
                let mapping = gaps.iter().all(|&k| (1..=k).all(|a| sigma.apply(a) <= k + 1));
                let expected = products.get(sigma).cloned().filter(|_| mapping);
                let got = decompose_chain(sigma, &gaps)?;
                if mapping != products.contains_key(sigma) || got != expected {
                    failures.push(format!("n={n} gaps={gaps:?} σ={:?}: got {got:?}, expected {expected:?}", sigma.one_line()));
                }
            }
        }
    }
    Ok(Check::new("chain_decomposition", format!("{cases} reduced permutations, degree ≤ {max_degree}"), failures))
}

/// `σ = τ σ_1 σ_2` for every `σ ∈ S_n` mapping `1..k` into `1..k+1`, with `τ`
/// the only candidate among the identity and `(x, k+1)`.
pub fn check_single_gap_decomposition(max_degree: usize) -> Result<Check> {
    let mut failures = Vec::new();
    let mut cases = 0usize;
    for n in 2..=max_degree {
        for sigma in Perm::all(n) {
            for k in 1..n {
                if (1..=k).any(|a| sigma.apply(a) > k + 1) {
                    continue;
                }
                cases += 1;
                let (tau, s1, s2) = decompose_k(&sigma, k)?;
                let splits = |t: &Perm| {
                    let ts = t.compose(&sigma);
                    (1..=k).all(|a| ts.apply(a) <= k)
                };
                let candidates: Vec<Perm> =
                    std::iter::once(Perm::identity(n)).chain((1..=k).map(|x| Perm::transposition(n, x, k + 1))).filter(splits).collect();
                let product = tau.compose(&s1.compose(&s2));
                let fixes = (k + 1..=n).all(|a| s1.apply(a) == a) && (1..=k).all(|a| s2.apply(a) == a);
                if product != sigma || !fixes || candidates != [tau.clone()] {
                    failures.push(format!("σ={:?} k={k}", sigma.one_line()));
                }
            }
        }
    }
    Ok(Check::new("single_gap_decomposition", format!("{cases} cases, degree ≤ {max_degree}"), failures))
}

/// For every block of every index of the tuples: the factors of `x w' y` avoid
/// `3412` and `4231`, and the coarse dimension of `w'` is the block dimension.
pub fn check_block_smoothness(tuples: &[ParahoricTuple]) -> Result<Check> {
    let mut failures = Vec::new();
    let mut blocks = 0usize;
    for tuple in tuples {
        for abs in enumerate_abstract(tuple) {
            for block in stratum_descriptor(&abs)?.blocks {
                blocks += 1;
                let group = block.descriptor.group()?;
                let j = &block.descriptor.subset;
                let w = group.min_double_coset(&block.descriptor.w, j, &group.frobenius_subset(j));
                let xwy = group.build_xwy(j, &w)?;
                let smooth = xwy.parts.iter().all(|p| pattern_avoids(p, &SMOOTHNESS_PATTERNS));
                let dim = group.dim_coarse(j, &w)?;
                if !smooth || dim != block.dimension {
                    failures.push(format!("{abs} {:?}: smooth={smooth} dim {dim} vs {}", block.role, block.dimension));
                }
            }
        }
    }
    Ok(Check::new("block_smoothness", format!("{blocks} blocks"), failures))
}

/// Flag census of one model: fine labels partition the flags, and the
/// dominance count of each coarse label equals the sum of fine counts over
/// the closure of the largest fine label in its double coset. Returns the
/// number of subsets refused by [`FLAG_LIMIT`].
pub fn check_flag_census(kind: CoxKind, d: usize, field: Arc<Field>) -> Result<(Check, usize)> {
    let model = FlagModel::with_field(kind, d, field)?;
    let group = model.group;
    let mut failures = Vec::new();
    let (mut refused, mut labels) = (0usize, 0usize);
    for i in group.all_subsets() {
        let flags = model.flag_count(&i);
        if flags > FLAG_LIMIT {
            refused += 1;
            continue;
        }
        let census = model.census(&i)?;
        if u128::from(census.fine.values().sum::<u64>()) != flags {
            failures.push(format!("{i:?}: fine counts do not sum to {flags}"));
        }
        let fi = group.frobenius_subset(&i);
        let reduced = group.left_reduced_elements(&i)?;
        for w in group.double_reduced_elements(&i, &fi)? {
            labels += 1;
            let dominated: u64 = census.coarse.iter().filter(|(u, _)| group.bruhat_leq(u, &w)).map(|(_, c)| c).sum();
            let top = reduced
                .iter()
                .filter(|v| group.min_double_coset(v, &i, &fi) == w)
                .max_by_key(|v| group.length(v))
                .ok_or_else(|| Error::Precondition("empty double coset".into()))?;
            let closure: u64 = group.closure_fine(&i, top)?.iter().map(|v| census.fine.get(v).copied().unwrap_or(0)).sum();
            if dominated != closure {
                failures.push(format!("{i:?} w={w:?}: dominance {dominated} vs closure {closure}"));
            }
        }
    }
    let name = format!("flag_census_{kind:?}_{d}").to_lowercase();
    Ok((Check::new(&name, format!("{labels} coarse labels, {refused} subsets refused"), failures), refused))
}

fn interval_vertices(amb: &AmbientSpace, low: &WindowLattice, up: &WindowLattice, rank: i32) -> Result<Vec<VertexLattice>> {
    let iv = amb.interval(low, up)?;
    let coeffs = amb.field().rational_elements();
    let mut out = Vec::new();
    let mut failure = None;
    for k in 0..=iv.dim() {
        let _ = for_each_subspace::<()>(iv.dim(), k, &coeffs, |sub| {
            match amb.vertex_recognize(&amb.interval_lift(&iv, sub.basis()), rank) {
                Ok(Some(v)) => out.push(v),
                Ok(None) => {}
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if let Some(e) = failure.take() {
            return Err(e);
        }
    }
    Ok(out)
}

/// Neighbours of `Λ_std` (rank 0) and `πΛ_std^∨` (rank 1) from coisotropic
/// subspaces agree with the vertex lattices found among all rational
/// lattices of the residue intervals.
pub fn check_neighbours(amb: &AmbientSpace) -> Result<Check> {
    let std = amb.standard();
    let swapped = rank_swap(amb, &std)?;
    let n = amb.n();
    let mut failures = Vec::new();
    let mut compared = 0usize;
    for (lattice, rank) in [(std, 0), (swapped, 1)] {
        let vertex = amb.vertex_recognize(&lattice, rank)?.ok_or(Error::NotContained)?;
        let dual = amb.dual(&lattice)?;
        for direction in [Direction::Sub, Direction::Over] {
            let brute = match direction {
                Direction::Sub => interval_vertices(amb, &amb.pi_mul(&dual, rank + 1)?, &lattice, rank)?,
                Direction::Over => interval_vertices(amb, &lattice, &amb.pi_mul(&dual, rank)?, rank)?,
            };
            for t in 0..=n {
                let mut expected: Vec<WindowLattice> = brute.iter().filter(|v| v.type_t == t).map(|v| v.lattice.clone()).collect();
                let mut got: Vec<WindowLattice> = neighbour_vertices(amb, &vertex, direction, t)?.into_iter().map(|v| v.lattice).collect();
                expected.sort();
                got.sort();
                compared += expected.len();
                if expected != got {
                    failures.push(format!("rank {rank} {direction:?} type {t}: {} vs {}", got.len(), expected.len()));
                }
            }
        }
    }
    Ok(Check::new("neighbour_vertices", format!("{compared} vertex lattices compared"), failures))
}

/// Involutions and recognition on the window vertices.
pub fn check_lattice_laws(amb: &AmbientSpace) -> Result<Check> {
    let vertices = window_vertices(amb)?;
    let std = amb.standard();
    let mut failures = Vec::new();
    for v in &vertices {
        let l = &v.lattice;
        let dual_twice = amb.dual(&amb.dual(l)?)?;
        let swap_twice = rank_swap(amb, &rank_swap(amb, l)?)?;
        let recognized = amb.vertex_recognize(l, 0)?.map(|r| r.type_t);
        if dual_twice != *l || swap_twice != *l || recognized != Some(v.type_t) || !amb.is_rational(l) || !amb.contains(&std, l) {
            failures.push(format!("type {} vertex {:?}", v.type_t, l));
        }
    }
    for (a, b) in vertices.iter().zip(vertices.iter().skip(1)) {
        let (sum, meet) = (amb.sum(&a.lattice, &b.lattice), amb.intersect(&a.lattice, &b.lattice));
        if !amb.contains(&sum, &a.lattice) || !amb.contains(&a.lattice, &meet) || !amb.contains(&b.lattice, &meet) {
            failures.push(format!("sum or meet of types {} and {}", a.type_t, b.type_t));
        }
    }
    Ok(Check::new("window_lattice_laws", format!("{} window vertices", vertices.len()), failures))
}

/// Closed-stratum counts equal the sums of their fine counts. Returns the
/// number of indices refused by the flag size guard.
pub fn check_stratum_counts(tuple: &ParahoricTuple, field: Arc<Field>) -> Result<(Check, usize)> {
    let mut counter = StratumCounter::new(field);
    let mut failures = Vec::new();
    let (mut counted, mut refused) = (0usize, 0usize);
    for abs in enumerate_abstract(tuple) {
        let stratum = stratum_descriptor(&abs)?;
        match counter.closed_count(&stratum) {
            Ok(closed) => {
                counted += 1;
                let total = counter.fine_total(&stratum)?;
                let open = counter.open_count(&stratum)?;
                if closed != total || open > closed {
                    failures.push(format!("{abs}: closed {closed}, fine total {total}, open {open}"));
                }
            }
            Err(Error::SizeGuard { .. }) => refused += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((Check::new("closed_count_equals_fine_total", format!("{counted} indices counted, {refused} refused"), failures), refused))
}

/// Point maps are cached per concrete index.
struct PointMaps<'a> {
    amb: &'a AmbientSpace,
    maps: HashMap<ConcreteIndex, PointMap>,
}

impl PointMaps<'_> {
    fn in_open(&mut self, idx: &ConcreteIndex, pt: &RZPoint) -> Result<bool> {
        if !self.maps.contains_key(idx) {
            self.maps.insert(idx.clone(), PointMap::new(self.amb, idx)?);
        }
        self.maps[idx].in_open_stratum(self.amb, pt)
    }
}

/// For every window index with at most `point_limit` closed points: every
/// point has a nonempty type below the index whose open stratum contains it,
/// and the points of type exactly the index number the open count. Returns
/// the number of indices refused.
pub fn check_point_bijection(amb: &AmbientSpace, tuple: &ParahoricTuple, point_limit: u64) -> Result<(Check, usize)> {
    let mut counter = StratumCounter::new(amb.field_arc());
    let mut maps = PointMaps { amb, maps: HashMap::new() };
    let mut failures = Vec::new();
    let (mut checked, mut refused, mut points) = (0usize, 0usize, 0usize);
    for idx in window_indices(amb, tuple)? {
        let stratum = stratum_descriptor(&idx.index)?;
        let closed = match counter.closed_count(&stratum) {
            Ok(c) if c <= point_limit => c,
            Ok(_) | Err(Error::SizeGuard { .. }) => {
                refused += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        checked += 1;
        let pts = enumerate_points(amb, &idx)?;
        points += pts.len();
        if pts.len() as u64 != closed {
            failures.push(format!("{}: {} points vs closed count {closed}", idx.index, pts.len()));
        }
        let mut own = 0u64;
        for pt in &pts {
            let ty = bt_type_of_point(amb, tuple, pt)?;
            let typed = if ty.set.is_empty() { None } else { ty.index(amb, tuple).ok() };
            let Some(typed) = typed else {
                failures.push(format!("{}: point without a valid type", idx.index));
                continue;
            };
            if typed == idx {
                own += 1;
            }
            if !leq_index(amb, &typed, &idx)? || !in_stratum(amb, pt, &typed) || !maps.in_open(&typed, pt)? {
                failures.push(format!("{}: point of type {} misplaced", idx.index, typed.index));
            }
        }
        let open = counter.open_count(&stratum)?;
        if own != open {
            failures.push(format!("{}: {own} points of its own type vs open count {open}", idx.index));
        }
    }
    let detail = format!("{checked} indices, {points} points, {refused} indices refused");
    Ok((Check::new("point_type_bijection", detail, failures), refused))
}

/// Order, intersection and decomposition laws on the point sets of every window index.
pub fn check_poset_laws(amb: &AmbientSpace, tuple: &ParahoricTuple) -> Result<Check> {
    let indices = window_indices(amb, tuple)?;
    let sets: Vec<HashSet<RZPoint>> = indices.iter().map(|idx| Ok(enumerate_points(amb, idx)?.into_iter().collect())).collect::<Result<_>>()?;
    let position: HashMap<&ConcreteIndex, usize> = indices.iter().enumerate().map(|(k, idx)| (idx, k)).collect();
    let mut failures = Vec::new();
    for (a, idx_a) in indices.iter().enumerate() {
        for pt in &sets[a] {
            let typed = bt_type_of_point(amb, tuple, pt)?.index(amb, tuple)?;
            if !leq_index(amb, &typed, idx_a)? {
                failures.push(format!("decomposition: point of {} has type {}", idx_a.index, typed.index));
            }
        }
        for (b, idx_b) in indices.iter().enumerate().skip(a + 1) {
            let (ab, ba) = (leq_index(amb, idx_a, idx_b)?, leq_index(amb, idx_b, idx_a)?);
            if ab != sets[a].is_subset(&sets[b]) || ba != sets[b].is_subset(&sets[a]) {
                failures.push(format!("order: {} vs {}", idx_a.index, idx_b.index));
            }
            let common: HashSet<&RZPoint> = sets[a].intersection(&sets[b]).collect();
            let expected: HashSet<RZPoint> = match intersect_index(amb, idx_a, idx_b)? {
                Intersection::Defined(meet) => match position.get(&meet) {
                    Some(&k) => sets[k].clone(),
                    None => enumerate_points(amb, &meet)?.into_iter().collect(),
                },
                Intersection::Undefined(_) => HashSet::new(),
            };
            if common.len() != expected.len() || !expected.iter().all(|p| common.contains(p)) {
                failures.push(format!("intersection: {} and {}", idx_a.index, idx_b.index));
            }
        }
    }
    Ok(Check::new("poset_laws", format!("{} window indices", indices.len()), failures))
}

fn record(checks: &mut Vec<Check>, refused: &mut BTreeMap<String, usize>, (check, count): (Check, usize)) {
    if count > 0 {
        refused.insert(check.name.clone(), count);
    }
    checks.push(check);
}

/// Runs one suite for the configured tuple and field.
pub fn cmd_verify(config: &ReportConfig, suite: Suite) -> Result<Report<VerifyBody>> {
    let header = Header::new("verify", config)?;
    let tuple = config.tuple()?;
    let amb = config.ambient()?;
    let field = amb.field_arc();
    let mut checks = Vec::new();
    let mut refused = BTreeMap::new();
    if suite.includes(Suite::Coxeter) {
        let degree = (config.n + 1).min(COXETER_DEGREE_LIMIT);
        checks.push(check_chain_decomposition(degree)?);
        checks.push(check_single_gap_decomposition(degree)?);
        checks.push(check_block_smoothness(std::slice::from_ref(&tuple))?);
    }
    if suite.includes(Suite::Lattice) {
        checks.push(check_lattice_laws(&amb)?);
    }
    if suite.includes(Suite::Hermitian) {
        checks.push(check_neighbours(&amb)?);
    }
    if suite.includes(Suite::Dl) {
        for d in 1..=config.n.min(CENSUS_RANK_LIMIT) {
            for kind in [CoxKind::Unitary, CoxKind::Linear, CoxKind::FakeUnitary] {
                record(&mut checks, &mut refused, check_flag_census(kind, d, field.clone())?);
            }
        }
    }
    if suite.includes(Suite::Bt) {
        record(&mut checks, &mut refused, check_stratum_counts(&tuple, field.clone())?);
        if config.n <= POSET_LAW_RANK_LIMIT {
            checks.push(check_poset_laws(&amb, &tuple)?);
        } else {
            refused.insert("poset_laws".into(), 1);
        }
    }
    if suite.includes(Suite::Bijection) {
        record(&mut checks, &mut refused, check_point_bijection(&amb, &tuple, BIJECTION_POINT_LIMIT)?);
    }
    Ok(Report { header, body: VerifyBody { suite, refused }, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert!(name.parse::<Suite>().is_ok());
        }
        assert!(matches!("lattices".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn coxeter_suite_passes() {
        let r = cmd_verify(&ReportConfig::new(3, vec![0, 2], 3, 1).unwrap(), Suite::Coxeter).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn bt_and_bijection_suites_pass() {
        let config = ReportConfig::new(3, vec![1], 3, 1).unwrap();
        for suite in [Suite::Bt, Suite::Bijection, Suite::Lattice, Suite::Hermitian] {
            let r = cmd_verify(&config, suite).unwrap();
            assert!(r.passed(), "{suite:?}: {:?}", r.checks);
        }
    }
}
