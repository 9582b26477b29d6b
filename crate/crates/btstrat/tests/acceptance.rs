//! Acceptance harness: one pass/fail line per criterion with its pinned
//! tolerance (all comparisons are exact) and time limit.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use btstrat::coxeter::CoxKind;
use btstrat::field::{Field, FieldSpec};
use btstrat::lattice::{AmbientSpace, GramKind};
use btstrat::report::verify::{
    check_block_smoothness, check_chain_decomposition, check_flag_census, check_neighbours, check_point_bijection, check_poset_laws,
    check_single_gap_decomposition,
};
use btstrat::strata::tuple::WINDOW_RADIUS;
use btstrat::strata::{
    enumerate_abstract, enumerate_points, irreducible_components, realize, stratum_descriptor, AbstractIndex, ParahoricTuple, StratumCounter,
};

/// Criteria expected to fail, each analysed in the project notes.
const KNOWN_DEVIATIONS: [usize; 3] = [1, 5, 6];

/// Closed strata larger than this are not enumerated point by point.
const BIJECTION_POINT_LIMIT: u64 = 1_000;

/// Writes past the test harness capture so the table shows in plain `cargo test` logs.
fn report_line(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn field(q_prime: u32, d: u32) -> Arc<Field> {
    Arc::new(Field::new(FieldSpec::new(q_prime, 1, d)).unwrap())
}

fn maximal_orbit_count(tuple: &ParahoricTuple) -> usize {
    let all = enumerate_abstract(tuple);
    all.iter().filter(|a| !all.iter().any(|b| b != *a && a.leq(b))).count()
}

fn orbit_count() -> Verdict {
    let (mut tuples, mut stated_misses, mut corrected_misses) = (0, Vec::new(), 0);
    for n in 1..=6 {
        for t in ParahoricTuple::all(n) {
            tuples += 1;
            let count = maximal_orbit_count(&t) as i64;
            let library = irreducible_components(&t).unwrap().orbit_count as i64;
            let (m, eps) = (t.m() as i64, t.epsilon() as i64);
            let (h1, hm) = (t.h(1) as i64, t.h(t.m()) as i64);
            let stated = hm - h1 - m + 1 + eps;
            let corrected = (hm - h1) / 2 + eps;
            if count != stated {
                stated_misses.push(format!("n={n} h={:?}: {count} vs {stated}", t.entries()));
            }
            if count != corrected || library != count {
                corrected_misses += 1;
            }
        }
    }
    report_line(&format!("criterion 1: parity-corrected count Σ Δh_i + ε matches {}/{tuples} tuples", tuples - corrected_misses));
    let first: Vec<&String> = stated_misses.iter().take(3).collect();
    verdict(stated_misses.is_empty(), format!("{}/{tuples} tuples match h_m - h_1 - m + 1 + ε; first misses {first:?}", tuples - stated_misses.len()))
}

fn iwahori_fixtures() -> Verdict {
    let fixtures: [(usize, &[usize], usize, &[usize]); 3] = [(3, &[0, 2], 2, &[1, 2]), (4, &[0, 2, 4], 2, &[2, 2]), (4, &[1, 3], 3, &[2, 3, 3])];
    let mut misses = Vec::new();
    for (n, h, orbits, dims) in fixtures {
        let c = irreducible_components(&ParahoricTuple::new(n, h.to_vec()).unwrap()).unwrap();
        let mut got: Vec<usize> = c.families.iter().flat_map(|f| f.dimensions.clone()).collect();
        got.sort_unstable();
        if c.orbit_count != orbits || got != dims {
            misses.push(format!("n={n} h={h:?}: {} orbits, dims {got:?}", c.orbit_count));
        }
    }
    verdict(misses.is_empty(), format!("3 fixtures, misses {misses:?}"))
}

/// Closed-form dimension of an `m = 2` stratum, by index set.
fn m2_dimension(t: &ParahoricTuple, idx: &AbstractIndex) -> Option<i64> {
    let n = t.n() as i64;
    let (h1, h2) = (t.h(1) as i64, t.h(2) as i64);
    let dh = (h2 - h1) / 2;
    let t0 = |i: usize| idx.t0[&i] as i64;
    let t1 = |j: usize| idx.t1[&j] as i64;
    let half = |x: i64| (x % 2 == 0).then_some(x / 2);
    match idx.set.as_slice() {
        [1] => half(t0(1) + t1(1) + n).map(|x| x - dh - 1),
        [0] => half(t1(0) + n - h1 - 1),
        [0, 1] => half(t1(0) + t0(1) + t1(1) - h2 - 1).map(|x| x - 1),
        [2] => half(t0(2) + h2 - 1),
        [1, 2] => half(t0(1) + t1(1) + t0(2) + h1 - n - 1).map(|x| x - 1),
        [0, 2] => half(t1(0) + t0(2) + h2 - h1 - n).map(|x| x - 1),
        [0, 1, 2] => half(t1(0) + t0(1) + t1(1) + t0(2)).map(|x| x - n - 2),
        _ => None,
    }
}

fn m2_table() -> Verdict {
    let (mut indices, mut misses) = (0, Vec::new());
    for n in 1..=6 {
        for t in ParahoricTuple::all(n).into_iter().filter(|t| t.m() == 2) {
            for idx in enumerate_abstract(&t) {
                indices += 1;
                let dim = stratum_descriptor(&idx).unwrap().dimension as i64;
                if m2_dimension(&t, &idx) != Some(dim) {
                    misses.push(format!("{idx}: descriptor {dim}, closed form {:?}", m2_dimension(&t, &idx)));
                }
            }
        }
    }
    verdict(indices > 0 && misses.is_empty(), format!("{indices} indices, misses {:?}", misses.iter().take(3).collect::<Vec<_>>()))
}

fn point_bijection() -> Verdict {
    // (n, h, index set, chain values, expected count): q³ + 1 and q² + 1 for q = 3.
    // A rank-1 slot of type t has chain value n - t.
    let cases: [(usize, &[usize], &[usize], &[usize], usize); 2] = [(3, &[0], &[1], &[3], 28), (2, &[1], &[0], &[0], 10)];
    let mut lines = Vec::new();
    let mut passed = true;
    for (n, h, set, values, expected) in cases {
        let t = ParahoricTuple::new(n, h.to_vec()).unwrap();
        let amb = t.ambient(3, 1, 1).unwrap();
        let abs = AbstractIndex::from_chain_values(&t, set, values);
        let idx = realize(&amb, &abs).unwrap();
        let lattice_side = enumerate_points(&amb, &idx).unwrap().len();
        let flag_side = StratumCounter::new(amb.field_arc()).closed_count(&stratum_descriptor(&abs).unwrap()).unwrap() as usize;
        passed &= lattice_side == flag_side && flag_side == expected;
        lines.push(format!("n={n}: lattices {lattice_side}, flags {flag_side}, expected {expected}"));
    }
    verdict(passed, lines.join("; "))
}

fn closure_decomposition() -> Verdict {
    let f = field(3, 1);
    let (mut passed, mut refused, mut failures) = (true, 0, Vec::new());
    for d in 1..=4 {
        for kind in [CoxKind::Unitary, CoxKind::Linear, CoxKind::FakeUnitary] {
            let (check, skipped) = check_flag_census(kind, d, f.clone()).unwrap();
            passed &= check.passed;
            if !check.passed {
                failures.push(check.name.clone());
            }
            if skipped > 0 {
                refused += skipped;
                report_line(&format!("criterion 5: {} refused {skipped} subsets over the flag guard", check.name));
            }
        }
    }
    verdict(passed && refused == 0, format!("identities hold on every checked descriptor: {passed}; failures {failures:?}; {refused} subsets not covered"))
}

fn crucial_lemma() -> Verdict {
    let (mut passed, mut refused, mut lines) = (true, 0, Vec::new());
    for d in 1..=2 {
        let mut refused_d = 0;
        for n in 1..=4 {
            for t in ParahoricTuple::all(n) {
                let amb = t.ambient(3, 1, d).unwrap();
                let (check, skipped) = check_point_bijection(&amb, &t, BIJECTION_POINT_LIMIT).unwrap();
                if !check.passed {
                    passed = false;
                    lines.push(format!("d={d} {:?}: {:?}", t.entries(), check.counterexamples.first()));
                }
                refused_d += skipped;
            }
        }
        report_line(&format!("criterion 6: d={d} refused {refused_d} window indices over {BIJECTION_POINT_LIMIT} points"));
        refused += refused_d;
    }
    verdict(passed && refused == 0, format!("every enumerated point typed correctly: {passed}; {refused} indices not covered {lines:?}"))
}

fn permutation_lemmas() -> Verdict {
    let chain = check_chain_decomposition(7).unwrap();
    let single = check_single_gap_decomposition(7).unwrap();
    verdict(chain.passed && single.passed, format!("{}; {}", chain.detail, single.detail))
}

fn residue_correspondence() -> Verdict {
    let (mut passed, mut compared) = (true, Vec::new());
    for q in [3, 5] {
        let f = field(q, 1);
        for n in 1..=4 {
            for gram in [GramKind::Identity, GramKind::LastPi] {
                let amb = AmbientSpace::new(f.clone(), n, WINDOW_RADIUS, gram).unwrap();
                let check = check_neighbours(&amb).unwrap();
                passed &= check.passed;
                if !check.passed {
                    compared.push(format!("q={q} n={n} {gram:?}: {:?}", check.counterexamples));
                }
            }
        }
    }
    verdict(passed, format!("q ∈ {{3,5}}, n ≤ 4, both gram fixtures; mismatches {compared:?}"))
}

fn smoothness() -> Verdict {
    let tuples: Vec<ParahoricTuple> = (1..=8).flat_map(ParahoricTuple::all).collect();
    let check = check_block_smoothness(&tuples).unwrap();
    verdict(check.passed, format!("{}; {:?}", check.detail, check.counterexamples.first()))
}

fn poset_laws() -> Verdict {
    let (mut passed, mut details) = (true, Vec::new());
    for n in 1..=3 {
        for t in ParahoricTuple::all(n) {
            let amb = t.ambient(3, 1, 1).unwrap();
            let check = check_poset_laws(&amb, &t).unwrap();
            passed &= check.passed;
            if !check.passed {
                details.push(format!("{:?}: {:?}", t.entries(), check.counterexamples.first()));
            }
        }
    }
    verdict(passed, format!("all tuples n ≤ 3; failures {details:?}"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(usize, Duration, fn() -> Verdict); 10] = [
        (1, Duration::from_secs(10), orbit_count),
        (2, Duration::from_secs(1), iwahori_fixtures),
        (3, Duration::from_secs(30), m2_table),
        (4, Duration::from_secs(60), point_bijection),
        (5, Duration::from_secs(300), closure_decomposition),
        (6, Duration::from_secs(300), crucial_lemma),
        (7, Duration::from_secs(120), permutation_lemmas),
        (8, Duration::from_secs(120), residue_correspondence),
        (9, Duration::from_secs(10), smoothness),
        (10, Duration::from_secs(300), poset_laws),
    ];
    let mut outcomes = BTreeMap::new();
    for (number, limit, run) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let passed = v.passed && elapsed <= limit;
        report_line(&format!(
            "criterion {number}: {} exact, {:.2?} of {:?}: {}",
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            limit,
            v.detail
        ));
        outcomes.insert(number, passed);
    }
    for (number, passed) in outcomes {
        assert_eq!(passed, !KNOWN_DEVIATIONS.contains(&number), "criterion {number} outcome changed");
    }
}
