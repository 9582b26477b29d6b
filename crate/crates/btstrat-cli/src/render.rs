//! Serialization of reports as JSON, Markdown and Graphviz DOT.

use std::fmt::Write;

use btstrat::report::{Check, Header, PosetBody, Report, StratificationBody};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Hex digits of the digest kept in DOT node names.
const NODE_HASH_DIGITS: usize = 16;

pub fn json<T: Serialize>(value: &T) -> Result<String, String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    Ok(text)
}

fn node_name(fingerprint: &str) -> String {
    let digest = Sha256::digest(fingerprint.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("idx_{}", &hex[..NODE_HASH_DIGITS])
}

fn quoted(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

fn dot(nodes: &[(String, String, String)], covers: &[(usize, usize)]) -> String {
    let mut out = String::from("digraph strata {\n");
    for (name, label, orbit) in nodes {
        let _ = writeln!(out, "  {name} [label={}, orbit={}];", quoted(label), quoted(orbit));
    }
    for &(a, b) in covers {
        let _ = writeln!(out, "  {} -> {};", nodes[a].0, nodes[b].0);
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram of the window poset, edges pointing to the larger index.
pub fn poset_dot(report: &Report<PosetBody>) -> String {
    let nodes: Vec<_> = report.body.nodes.iter().map(|n| (node_name(&n.fingerprint), n.label.clone(), n.orbit_key.clone())).collect();
    dot(&nodes, &report.body.covers)
}

/// Hasse diagram of the abstract census.
pub fn report_dot(report: &Report<StratificationBody>) -> String {
    let nodes: Vec<_> = report
        .body
        .census
        .iter()
        .map(|i| (node_name(&i.label), format!("{};dim={}", i.label, i.dimension), i.orbit_key.clone()))
        .collect();
    dot(&nodes, &report.body.covers)
}

fn header_markdown(out: &mut String, header: &Header) {
    let c = &header.config;
    let f = &header.field;
    let _ = writeln!(out, "# btstrat {}\n", header.command);
    let _ = writeln!(out, "| key | value |\n|---|---|");
    let _ = writeln!(out, "| schema | {} |", header.schema);
    let _ = writeln!(out, "| version | {} |", header.crate_version);
    let h: Vec<String> = c.h.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "| tuple | n={} h=({}) |", c.n, h.join(","));
    let _ = writeln!(out, "| field | F_{} = F_{}[x]/({}) |", f.size, f.p, f.modulus);
    let _ = writeln!(out, "| q, d | {}, {} |", f.q, f.d);
    let _ = writeln!(out, "| gram | {} (det valuation {}) |", header.gram, header.det_valuation);
    let _ = writeln!(out, "| window radius | {} |\n", c.window_radius);
}

fn checks_section(out: &mut String, checks: &[Check]) {
    let _ = writeln!(out, "## Checks\n\n| check | result | detail |\n|---|---|---|");
    for c in checks {
        let _ = writeln!(out, "| {} | {} | {} |", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
    for c in checks.iter().filter(|c| !c.counterexamples.is_empty()) {
        let _ = writeln!(out, "\n### {} counterexamples\n", c.name);
        for x in &c.counterexamples {
            let _ = writeln!(out, "- `{x}`");
        }
    }
}

pub fn checks_markdown(header: &Header, checks: &[Check]) -> String {
    let mut out = String::new();
    header_markdown(&mut out, header);
    checks_section(&mut out, checks);
    out
}

fn count(x: Option<u64>) -> String {
    x.map_or_else(|| "guarded".to_string(), |c| c.to_string())
}

pub fn report_markdown(report: &Report<StratificationBody>) -> String {
    let body = &report.body;
    let mut out = String::new();
    header_markdown(&mut out, &report.header);
    let _ = writeln!(out, "## Census\n\nFeasibility: {}\n", body.feasibility);
    let _ = writeln!(out, "| index | orbit key | dim | blocks | fine strata | closed points | open points |\n|---|---|---|---|---|---|---|");
    for i in &body.census {
        let blocks: Vec<String> = i.blocks.iter().map(|b| format!("{} {} d={} dim={}", b.role, b.kind, b.d, b.dimension)).collect();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            i.label,
            i.orbit_key,
            i.dimension,
            blocks.join("; "),
            i.fine.len(),
            count(i.closed_points),
            count(i.open_points)
        );
    }
    let comp = &body.components;
    let _ = writeln!(out, "\n## Irreducible components\n\nOrbits enumerated: {}\n", comp.orbit_count);
    let _ = writeln!(out, "| family | orbit keys | dimensions | closed-form dimension |\n|---|---|---|---|");
    for f in &comp.families {
        let dims: Vec<String> = f.dimensions.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "| {} | {} | {} | {} |", f.family, f.orbit_keys.join(" "), dims.join(","), f.formula_dimension);
    }
    out.push('\n');
    checks_section(&mut out, &report.checks);
    out
}

pub fn poset_markdown(report: &Report<PosetBody>) -> String {
    let body = &report.body;
    let mut out = String::new();
    header_markdown(&mut out, &report.header);
    let _ = writeln!(out, "## Window poset\n\n{} nodes, {} covers, {} strict relations\n", body.nodes.len(), body.covers.len(), body.relation_size);
    let _ = writeln!(out, "| id | label | orbit key |\n|---|---|---|");
    for n in &body.nodes {
        let _ = writeln!(out, "| {} | {} | {} |", n.id, n.label, n.orbit_key);
    }
    out.push('\n');
    checks_section(&mut out, &report.checks);
    out
}
