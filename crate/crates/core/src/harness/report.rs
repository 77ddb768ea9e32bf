//! Report records and their three renderings: an aligned text table, CSV and
//! JSON.
//!
//! JSON carries every float at full precision. The text and CSV renderings
//! round to 12 significant digits, except where a column is marked exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::TrigRow;
use crate::deletion::{CaseTag, PhaseMode};

use super::verify::InvariantResult;
use super::OutputFormat;

/// A complex number as `{"re": …, "im": …}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfigEcho {
    pub n: usize,
    pub tau: usize,
    pub k: u32,
    pub mode: PhaseMode,
    pub normalize_global_phase: bool,
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRow {
    pub index: usize,
    pub amplitude: ComplexValue,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfigEcho,
    pub case: CaseTag,
    /// `|amp{τ}|` after the last step.
    pub residual: f64,
    /// Fidelity between the simulated state and the closed-form prediction.
    pub fidelity: f64,
    pub elapsed_ms: f64,
    pub seed: u64,
    pub version: String,
    pub oracle_calls: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<AmplitudeRow>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub size: usize,
    pub phi: f64,
    pub phi_minus_pi_over_3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub version: String,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub version: String,
    pub rows: Vec<TrigRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub size: usize,
    pub step_ms_min: f64,
    pub step_ms_median: f64,
    pub amps_per_sec: f64,
    pub quantum_queries: u64,
    pub classical_avg_queries: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub version: String,
    pub repetitions: usize,
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `ln t` against `ln N`; `None` below two rows.
    pub loglog_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub version: String,
    pub passed: bool,
    pub invariants: Vec<InvariantResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &InvariantResult> {
        self.invariants.iter().filter(|r| !r.passed)
    }
}

/// One printed value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    /// Rounded to 12 significant digits.
    Num(f64),
    /// Shortest representation that reads back to the same `f64`.
    Exact(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format_sig(*v),
            Cell::Exact(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn right_aligned(&self) -> bool {
        !matches!(self, Cell::Text(_))
    }
}

/// `x` with 12 significant digits. Plain decimal notation between 1e-4 and
/// 1e15, scientific otherwise.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let a = x.abs();
    if a == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if (1e-4..1e15).contains(&a) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn to_text(&self) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &rendered {
            for (w, s) in widths.iter_mut().zip(row) {
                *w = (*w).max(s.chars().count());
            }
        }
        let mut out = String::new();
        let right: Vec<bool> = (0..self.headers.len())
            .map(|i| {
                self.rows
                    .first()
                    .and_then(|r| r.get(i))
                    .map_or(true, Cell::right_aligned)
            })
            .collect();
        let header: Vec<String> = self
            .headers
            .iter()
            .zip(&widths)
            .zip(&right)
            .map(|((h, w), &r)| if r { format!("{h:>w$}") } else { format!("{h:<w$}") })
            .collect();
        out.push_str(header.join("  ").trim_end());
        out.push('\n');
        for (cells, row) in self.rows.iter().zip(&rendered) {
            let line: Vec<String> = cells
                .iter()
                .zip(row)
                .zip(&widths)
                .map(|((c, s), w)| {
                    if c.right_aligned() {
                        format!("{s:>w$}")
                    } else {
                        format!("{s:<w$}")
                    }
                })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Shared rendering for every command's report.
pub trait Report: Serialize {
    /// Key/value lines printed above the tables in text form.
    fn summary(&self) -> Vec<(&'static str, Cell)> {
        Vec::new()
    }

    fn tables(&self) -> Vec<Table>;

    /// Tables written in CSV form; sections are separated by a blank line.
    fn csv_tables(&self) -> Vec<Table> {
        self.tables()
    }

    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self
                .csv_tables()
                .iter()
                .map(Table::to_csv)
                .collect::<Vec<_>>()
                .join("\n"),
            OutputFormat::Human => {
                let summary = self.summary();
                let width = summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut parts = Vec::new();
                if !summary.is_empty() {
                    let mut s = String::new();
                    for (k, v) in &summary {
                        s.push_str(&format!("{k:<width$}  {}\n", v.render()));
                    }
                    parts.push(s);
                }
                parts.extend(self.tables().iter().map(Table::to_text));
                parts.join("\n")
            }
        }
    }
}

impl Report for RunReport {
    fn summary(&self) -> Vec<(&'static str, Cell)> {
        let c = &self.config;
        vec![
            (
                "config",
                Cell::Text(format!(
                    "n={} tau={} k={} mode={} normalize={} cap={}",
                    c.n, c.tau, c.k, c.mode, c.normalize_global_phase, c.cap
                )),
            ),
            ("case", Cell::Text(self.case.to_string())),
            ("residual", Cell::Num(self.residual)),
            ("fidelity", Cell::Num(self.fidelity)),
            ("oracle_calls", Cell::Int(self.oracle_calls)),
            ("elapsed_ms", Cell::Num(self.elapsed_ms)),
            ("seed", Cell::Int(self.seed)),
            ("version", Cell::Text(self.version.clone())),
        ]
    }

    fn tables(&self) -> Vec<Table> {
        self.amplitudes
            .iter()
            .map(|amps| Table {
                headers: vec!["index", "re", "im", "probability"],
                rows: amps
                    .iter()
                    .map(|a| {
                        vec![
                            Cell::Int(a.index as u64),
                            Cell::Num(a.amplitude.re),
                            Cell::Num(a.amplitude.im),
                            Cell::Num(a.probability),
                        ]
                    })
                    .collect(),
            })
            .collect()
    }

    fn csv_tables(&self) -> Vec<Table> {
        let c = &self.config;
        let head = Table {
            headers: vec![
                "n",
                "tau",
                "k",
                "mode",
                "normalize",
                "cap",
                "case",
                "residual",
                "fidelity",
                "oracle_calls",
                "elapsed_ms",
                "seed",
                "version",
            ],
            rows: vec![vec![
                Cell::Int(c.n as u64),
                Cell::Int(c.tau as u64),
                Cell::Int(u64::from(c.k)),
                Cell::Text(c.mode.to_string()),
                Cell::Text(c.normalize_global_phase.to_string()),
                Cell::Int(c.cap as u64),
                Cell::Text(self.case.to_string()),
                Cell::Num(self.residual),
                Cell::Num(self.fidelity),
                Cell::Int(self.oracle_calls),
                Cell::Num(self.elapsed_ms),
                Cell::Int(self.seed),
                Cell::Text(self.version.clone()),
            ]],
        };
        std::iter::once(head).chain(self.tables()).collect()
    }
}

impl Report for SweepReport {
    fn tables(&self) -> Vec<Table> {
        vec![Table {
            headers: vec!["n", "N", "phi", "phi_minus_pi_over_3"],
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Int(r.n as u64),
                        Cell::Int(r.size as u64),
                        Cell::Num(r.phi),
                        Cell::Num(r.phi_minus_pi_over_3),
                    ]
                })
                .collect(),
        }]
    }
}

impl Report for TableReport {
    fn tables(&self) -> Vec<Table> {
        vec![Table {
            headers: vec![
                "k",
                "sin_theta",
                "cos_theta",
                "signed_sin_theta",
                "signed_cos_theta",
            ],
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Int(u64::from(r.k)),
                        Cell::Exact(r.sin_theta),
                        Cell::Exact(r.cos_theta),
                        Cell::Exact(r.signed_sin_theta),
                        Cell::Exact(r.signed_cos_theta),
                    ]
                })
                .collect(),
        }]
    }
}

impl Report for BenchReport {
    fn summary(&self) -> Vec<(&'static str, Cell)> {
        let slope = match self.loglog_slope {
            Some(s) => Cell::Num(s),
            None => Cell::Text("n/a".into()),
        };
        vec![
            ("repetitions", Cell::Int(self.repetitions as u64)),
            ("loglog_slope", slope),
            ("seed", Cell::Int(self.seed)),
            ("version", Cell::Text(self.version.clone())),
        ]
    }

    fn tables(&self) -> Vec<Table> {
        vec![Table {
            headers: vec![
                "n",
                "N",
                "step_ms_min",
                "step_ms_median",
                "amps_per_sec",
                "quantum_queries",
                "classical_avg_queries",
            ],
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Int(r.n as u64),
                        Cell::Int(r.size as u64),
                        Cell::Num(r.step_ms_min),
                        Cell::Num(r.step_ms_median),
                        Cell::Num(r.amps_per_sec),
                        Cell::Int(r.quantum_queries),
                        Cell::Num(r.classical_avg_queries),
                    ]
                })
                .collect(),
        }]
    }
}

impl Report for VerifyReport {
    fn summary(&self) -> Vec<(&'static str, Cell)> {
        vec![
            ("n_max", Cell::Int(self.n_max as u64)),
            ("trials", Cell::Int(self.trials as u64)),
            ("seed", Cell::Int(self.seed)),
            ("version", Cell::Text(self.version.clone())),
            (
                "result",
                Cell::Text(if self.passed { "PASS" } else { "FAIL" }.into()),
            ),
        ]
    }

    fn tables(&self) -> Vec<Table> {
        vec![Table {
            headers: vec![
                "invariant",
                "checks",
                "max_deviation",
                "tolerance",
                "status",
                "worst_case",
            ],
            rows: self
                .invariants
                .iter()
                .map(|r| {
                    vec![
                        Cell::Text(r.name.clone()),
                        Cell::Int(r.checks),
                        Cell::Num(r.max_deviation),
                        Cell::Num(r.tolerance),
                        Cell::Text(if r.passed { "pass" } else { "FAIL" }.into()),
                        Cell::Text(r.worst_case.clone().unwrap_or_default()),
                    ]
                })
                .collect(),
        }]
    }
}
