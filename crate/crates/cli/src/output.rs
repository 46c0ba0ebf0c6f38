//! Rendering of command results as JSON, CSV or plain lines.

use std::collections::BTreeMap;

use lsl_core::acceptance::CriterionResult;
use lsl_core::bounds::{CorollaryReport, SharpnessTable};
use lsl_core::farey::FareySequence;
use lsl_core::lattice::{AdditiveProfile, Prop1Report};
use lsl_core::report::BoundReport;
use num_bigint::BigInt;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::args::Format;

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// A finished command: its verdict and every rendering of its result.
pub struct Output {
    /// Some inequality verdict failed.
    pub failed: bool,
    json: String,
    table: Table,
    lines: Option<String>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("result types serialize to JSON")
}

/// Same shortest round-trip form as the JSON output.
fn num(v: f64) -> String {
    to_json(&v)
}

#[derive(Serialize)]
struct RValue {
    n: u64,
    r: u64,
}

#[derive(Serialize)]
struct SupRValue {
    sup_r: u64,
    argmax: u64,
}

/// `A_Y` counts keyed by `k` as decimal strings, in increasing numeric order.
struct CountMap<'a>(&'a BTreeMap<BigInt, u64>);

impl Serialize for CountMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

fn report_table(reports: &[&BoundReport], extra: &[&str]) -> Table {
    let factor_names: Vec<String> = reports.first().map(|r| r.factors.keys().cloned().collect()).unwrap_or_default();
    let mut header = vec!["index", "inequality", "lhs", "rhs", "error_budget", "verdict"];
    header.extend_from_slice(extra);
    let mut table = Table::new(&header);
    table.header.extend(factor_names.iter().cloned());
    for (i, r) in reports.iter().enumerate() {
        let verdict = if r.passed() { "pass" } else { "fail" };
        let mut row = vec![i.to_string(), r.inequality.clone(), num(r.lhs), num(r.rhs), num(r.error_budget), verdict.to_string()];
        row.extend(std::iter::repeat(String::new()).take(extra.len()));
        row.extend(factor_names.iter().map(|k| r.factors.get(k).map(|v| num(*v)).unwrap_or_default()));
        table.push(row);
    }
    table
}

impl Output {
    fn plain(json: String, table: Table) -> Self {
        Output { failed: false, json, table, lines: None }
    }

    pub fn farey(seq: &FareySequence) -> Self {
        let mut t = Table::new(&["x"]);
        for x in seq.fractions() {
            t.push(vec![x.to_string()]);
        }
        Output::plain(to_json(seq), t)
    }

    pub fn r_value(n: u64, r: u64) -> Self {
        let mut t = Table::new(&["n", "r"]);
        t.push(vec![n.to_string(), r.to_string()]);
        Output::plain(to_json(&RValue { n, r }), t)
    }

    pub fn sup_r(sup: u64, argmax: u64) -> Self {
        let mut t = Table::new(&["sup_r", "argmax"]);
        t.push(vec![sup.to_string(), argmax.to_string()]);
        Output::plain(to_json(&SupRValue { sup_r: sup, argmax }), t)
    }

    pub fn prop1(rep: Prop1Report) -> Self {
        let mut t = Table::new(&["x", "y"]);
        for (x, y) in &rep.points {
            t.push(vec![x.to_string(), y.to_string()]);
        }
        Output { failed: !rep.pass, json: to_json(&rep), table: t, lines: None }
    }

    pub fn profile(p: &AdditiveProfile) -> Self {
        let mut t = Table::new(&["k", "count"]);
        for (k, v) in &p.counts {
            t.push(vec![k.to_string(), v.to_string()]);
        }
        Output::plain(to_json(&CountMap(&p.counts)), t)
    }

    pub fn report(r: BoundReport) -> Self {
        Output { failed: !r.passed(), table: report_table(&[&r], &[]), json: to_json(&r), lines: None }
    }

    pub fn reports(rs: Vec<BoundReport>) -> Self {
        let refs: Vec<&BoundReport> = rs.iter().collect();
        Output { failed: rs.iter().any(|r| !r.passed()), table: report_table(&refs, &[]), json: to_json(&rs), lines: None }
    }

    /// A single report renders as an object, a sweep as an array.
    pub fn corollary(rs: Vec<CorollaryReport>, single: bool) -> Self {
        let refs: Vec<&BoundReport> = rs.iter().map(|c| &c.report).collect();
        let mut table = report_table(&refs, &["direct_lhs", "theorem1_lhs", "theorem1_rhs", "pass"]);
        for (row, c) in table.rows.iter_mut().zip(&rs) {
            row[6] = num(c.direct_lhs);
            row[7] = c.theorem1.as_ref().map(|t| num(t.lhs)).unwrap_or_default();
            row[8] = c.theorem1.as_ref().map(|t| num(t.rhs)).unwrap_or_default();
            row[9] = c.pass.to_string();
        }
        let json = if single && rs.len() == 1 { to_json(&rs[0]) } else { to_json(&rs) };
        Output { failed: rs.iter().any(|c| !c.pass), json, table, lines: None }
    }

    pub fn sharpness(s: SharpnessTable) -> Self {
        let mut t = Table::new(&["Q", "N", "lhs", "scale", "ratio", "envelope"]);
        for r in &s.rows {
            t.push(vec![r.order.to_string(), r.n.to_string(), num(r.lhs), num(r.scale), num(r.ratio), num(r.envelope)]);
        }
        let failed = s.rows.iter().any(|r| !(r.ratio > 0.0 && r.ratio <= r.envelope));
        Output { failed, json: to_json(&s), table: t, lines: None }
    }

    pub fn selftest(results: Vec<CriterionResult>) -> Self {
        let mut t = Table::new(&["id", "name", "passed", "seconds", "limit", "detail"]);
        let mut lines = String::new();
        for r in &results {
            t.push(vec![
                r.id.to_string(),
                r.name.to_string(),
                r.passed.to_string(),
                num(r.seconds),
                r.limit.map(num).unwrap_or_default(),
                r.detail.clone(),
            ]);
            lines.push_str(&format!("{r}\n"));
        }
        Output { failed: results.iter().any(|r| !r.passed), json: to_json(&results), table: t, lines: Some(lines) }
    }

    pub fn render(&self, format: Option<Format>) -> Result<String, String> {
        match (format, &self.lines) {
            (None, Some(lines)) => Ok(lines.clone()),
            (None | Some(Format::Json), _) => Ok(format!("{}\n", self.json)),
            (Some(Format::Csv), _) => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.header).map_err(|e| e.to_string())?;
                for row in &self.table.rows {
                    w.write_record(row).map_err(|e| e.to_string())?;
                }
                let bytes = w.into_inner().map_err(|e| e.to_string())?;
                String::from_utf8(bytes).map_err(|e| e.to_string())
            }
        }
    }
}
