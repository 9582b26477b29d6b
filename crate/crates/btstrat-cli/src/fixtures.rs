//! Reference fixtures: irreducible components of Iwahori levels and point
//! counts of small strata, recomputed and compared with a data file.

use std::fmt::Write;

use btstrat::report::{cmd_report, ReportConfig};
use serde::{Deserialize, Serialize};

/// The fixture file shipped with the binary.
pub const BUNDLED: &str = include_str!("../fixtures/reference.json");

#[derive(Deserialize)]
struct FixtureFile {
    components: Vec<ComponentFixture>,
    points: Vec<PointFixture>,
}

/// Orbit count and component dimensions of one tuple.
#[derive(Deserialize)]
struct ComponentFixture {
    tag: String,
    n: usize,
    h: Vec<usize>,
    orbits: usize,
    /// Sorted dimensions, one per orbit.
    dimensions: Vec<usize>,
}

/// Closed-stratum point counts of every abstract index, in census order.
#[derive(Deserialize)]
struct PointFixture {
    tag: String,
    n: usize,
    h: Vec<usize>,
    q: u32,
    closed_points: Vec<u64>,
}

/// One compared fixture.
#[derive(Serialize)]
pub struct FixtureOutcome {
    pub tag: String,
    pub passed: bool,
    pub expected: String,
    pub computed: String,
}

#[derive(Serialize)]
pub struct FixtureReport {
    pub fixtures: Vec<FixtureOutcome>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.fixtures.iter().all(|f| f.passed)
    }
}

fn outcome<T: PartialEq + std::fmt::Debug>(tag: &str, expected: T, computed: T) -> FixtureOutcome {
    FixtureOutcome { tag: tag.to_string(), passed: expected == computed, expected: format!("{expected:?}"), computed: format!("{computed:?}") }
}

pub fn reproduce(data: &str) -> Result<FixtureReport, String> {
    let file: FixtureFile = serde_json::from_str(data).map_err(|e| format!("fixture file: {e}"))?;
    let mut fixtures = Vec::new();
    for f in &file.components {
        let report = cmd_report(&ReportConfig::new(f.n, f.h.clone(), 3, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let comp = &report.body.components;
        let mut dims: Vec<usize> = comp.families.iter().flat_map(|fam| fam.dimensions.iter().copied()).collect();
        dims.sort_unstable();
        fixtures.push(outcome(&f.tag, (f.orbits, f.dimensions.clone()), (comp.orbit_count, dims)));
    }
    for f in &file.points {
        let report = cmd_report(&ReportConfig::new(f.n, f.h.clone(), f.q, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let counts: Vec<Option<u64>> = report.body.census.iter().map(|i| i.closed_points).collect();
        fixtures.push(outcome(&f.tag, f.closed_points.iter().copied().map(Some).collect(), counts));
    }
    Ok(FixtureReport { fixtures })
}

pub fn markdown(report: &FixtureReport) -> String {
    let mut out = String::from("# btstrat fixtures\n\n| fixture | result | expected | computed |\n|---|---|---|---|\n");
    for f in &report.fixtures {
        let _ = writeln!(out, "| {} | {} | {} | {} |", f.tag, if f.passed { "pass" } else { "FAIL" }, f.expected, f.computed);
    }
    out
}
