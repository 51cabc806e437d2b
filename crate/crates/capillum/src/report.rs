//! Versioned, self-describing output in JSON, CSV or aligned text.
//!
//! Everything except the optional `runtime_seconds` fields is a pure function of the
//! command line, so identical invocations produce identical bytes.

use capillum_core::explicit::ExplicitReport;
use capillum_core::ilp::GridKind;
use capillum_core::search::{discrepancy_note, reference_row, BoundReport};
use serde::Serialize;
use serde_json::Value;

use crate::AppResult;

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Flat, row-oriented view used by the CSV and text renderers.
pub trait Tabular {
    fn columns() -> Vec<&'static str>;
    fn cells(&self) -> Vec<String>;
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn grid_name(kind: GridKind) -> &'static str {
    match kind {
        GridKind::Uniform => "uniform",
        GridKind::Degree => "degree",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub n: usize,
    /// Two-decimal bound, comparable with the published table.
    pub bound: f64,
    pub s: u32,
    pub l: u32,
    #[serde(rename = "M")]
    pub m: f64,
    pub total_bound: f64,
    pub integer_bound: u64,
    pub ratio_to_2n: f64,
    pub t: usize,
    #[serde(rename = "N")]
    pub steps: usize,
    pub grid: &'static str,
    pub cells_solved: usize,
    pub cells_pruned: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

impl BoundRow {
    pub fn new(r: &BoundReport, runtime_seconds: Option<f64>) -> Self {
        BoundRow {
            n: r.n,
            bound: r.rounded_total,
            s: r.best_s,
            l: r.best_l,
            m: r.m,
            total_bound: r.total_bound,
            integer_bound: r.integer_bound,
            ratio_to_2n: r.ratio_to_2n,
            t: r.t,
            steps: r.steps,
            grid: grid_name(r.grid),
            cells_solved: r.cells_solved,
            cells_pruned: r.cells_pruned,
            reference_bound: reference_row(r.n).map(|row| row.0),
            note: discrepancy_note(r.n),
            runtime_seconds,
        }
    }
}

impl Tabular for BoundRow {
    fn columns() -> Vec<&'static str> {
        vec![
            "n", "bound", "s", "l", "M", "total_bound", "integer_bound", "ratio_to_2n", "t", "N", "grid",
            "cells_solved", "cells_pruned", "reference_bound", "runtime_seconds",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.bound.to_string(),
            self.s.to_string(),
            self.l.to_string(),
            self.m.to_string(),
            self.total_bound.to_string(),
            self.integer_bound.to_string(),
            self.ratio_to_2n.to_string(),
            self.t.to_string(),
            self.steps.to_string(),
            self.grid.to_string(),
            self.cells_solved.to_string(),
            self.cells_pruned.to_string(),
            opt(&self.reference_bound),
            opt(&self.runtime_seconds),
        ]
    }
}

impl Tabular for ExplicitReport {
    fn columns() -> Vec<&'static str> {
        vec![
            "n", "p", "q", "p_lower", "p_upper", "q_lower", "x0", "f_floor", "f_ceil", "direction_count",
            "slope_majorant", "log_relaxed", "three_over_n", "rhs_eq1", "rhs_from_pq_bounds", "passes_2n",
            "passes_2n_minus_1",
        ]
    }

    fn cells(&self) -> Vec<String> {
        [
            self.n as f64, self.p, self.q, self.p_lower, self.p_upper, self.q_lower, self.x0, self.f_floor, self.f_ceil,
            self.direction_count, self.chain.slope_majorant, self.chain.log_relaxed, self.chain.three_over_n,
            self.rhs_eq1, self.rhs_from_pq_bounds,
        ]
        .iter()
        .map(ToString::to_string)
        .chain([self.passes_2n.to_string(), self.passes_2n_minus_1.to_string()])
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IlpRow {
    pub n: usize,
    pub s: u32,
    pub l: u32,
    pub t: usize,
    #[serde(rename = "N")]
    pub steps: usize,
    pub grid: &'static str,
    #[serde(rename = "M")]
    pub m: f64,
    /// Non-zero `(bucket, count)` pairs.
    pub assignment: Vec<(usize, u64)>,
    pub lp_bound: f64,
    pub gap: f64,
    pub nodes_explored: usize,
}

impl Tabular for IlpRow {
    fn columns() -> Vec<&'static str> {
        vec!["n", "s", "l", "t", "N", "grid", "M", "assignment", "lp_bound", "gap", "nodes_explored"]
    }

    fn cells(&self) -> Vec<String> {
        let assignment: Vec<String> = self.assignment.iter().map(|(i, k)| format!("{i}:{k}")).collect();
        vec![
            self.n.to_string(),
            self.s.to_string(),
            self.l.to_string(),
            self.t.to_string(),
            self.steps.to_string(),
            self.grid.to_string(),
            self.m.to_string(),
            assignment.join(";"),
            self.lp_bound.to_string(),
            self.gap.to_string(),
            self.nodes_explored.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureRow {
    pub n: usize,
    pub theta: f64,
    pub measure: &'static str,
    pub kind: &'static str,
    pub value: f64,
}

impl Tabular for MeasureRow {
    fn columns() -> Vec<&'static str> {
        vec!["n", "theta", "measure", "kind", "value"]
    }

    fn cells(&self) -> Vec<String> {
        vec![self.n.to_string(), self.theta.to_string(), self.measure.into(), self.kind.into(), self.value.to_string()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexRow {
    pub vertex: usize,
    pub radius: f64,
    pub lit: bool,
}

impl Tabular for VertexRow {
    fn columns() -> Vec<&'static str> {
        vec!["vertex", "radius", "lit"]
    }

    fn cells(&self) -> Vec<String> {
        vec![self.vertex.to_string(), self.radius.to_string(), self.lit.to_string()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressRow {
    pub check: &'static str,
    pub n: usize,
    pub parameter: f64,
    pub expected: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub passed: bool,
}

impl Tabular for StressRow {
    fn columns() -> Vec<&'static str> {
        vec!["check", "n", "parameter", "expected", "estimate", "std_error", "trials", "passed"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.check.into(),
            self.n.to_string(),
            self.parameter.to_string(),
            self.expected.to_string(),
            self.estimate.to_string(),
            self.std_error.to_string(),
            self.trials.to_string(),
            self.passed.to_string(),
        ]
    }
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema_version: u32,
    code_version: &'static str,
    command: &'a str,
    parameters: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<&'a Value>,
    results: &'a [T],
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_seconds: Option<f64>,
}

/// One command's output before rendering.
#[derive(Debug, Clone)]
pub struct Output<'a, T> {
    pub command: &'a str,
    pub parameters: Value,
    pub summary: Option<Value>,
    pub rows: Vec<T>,
    pub runtime_seconds: Option<f64>,
}

impl<T: Serialize + Tabular> Output<'_, T> {
    pub fn render(&self, format: Format) -> AppResult<String> {
        match format {
            Format::Json => {
                let env = Envelope {
                    schema_version: SCHEMA_VERSION,
                    code_version: CODE_VERSION,
                    command: self.command,
                    parameters: &self.parameters,
                    summary: self.summary.as_ref(),
                    results: &self.rows,
                    runtime_seconds: self.runtime_seconds,
                };
                let mut s = serde_json::to_string_pretty(&env).expect("report values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(T::columns())?;
                for row in &self.rows {
                    w.write_record(row.cells())?;
                }
                let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
            }
            Format::Table => Ok(self.text_table()),
        }
    }

    fn text_table(&self) -> String {
        let header: Vec<String> = T::columns().into_iter().map(String::from).collect();
        let body: Vec<Vec<String>> = self.rows.iter().map(Tabular::cells).collect();
        let mut widths: Vec<usize> = header.iter().map(String::len).collect();
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&header);
        for row in &body {
            out.push_str(&line(row));
        }
        if let Some(Value::Object(map)) = &self.summary {
            for (k, v) in map {
                out.push_str(&format!("# {k}: {v}\n"));
            }
        }
        if let Some(t) = self.runtime_seconds {
            out.push_str(&format!("# runtime_seconds: {t}\n"));
        }
        out
    }
}
