//! File formats: quadrature grids (CSV), sections (JSON), norm reports (CSV)
//! and the generic result table.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use szego_core::{EnsembleSpec, NormReport, ProjectivePoint, QuadratureGrid, SectionCoefficients};

/// One table entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    /// CSV text; reals use the shortest round-trip form.
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) if v.is_nan() => "nan".into(),
            Cell::Real(v) if v.is_infinite() => if *v > 0.0 { "inf".into() } else { "-inf".into() },
            Cell::Real(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    /// JSON value; non-finite reals become `null`.
    pub fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Real(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Null => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Real)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        i64::try_from(v).map_or_else(|_| Cell::Text(v.to_string()), Cell::Int)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Rows with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Panics if the row length differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row length must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Array of objects keyed by column name, in column order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Writes `re0..re_m, im0..im_m, weight` per node.
pub fn write_grid_csv<W: Write>(grid: &QuadratureGrid, out: W) -> Result<()> {
    let m = grid.dim();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..=m).map(|i| format!("re{i}")).collect();
    header.extend((0..=m).map(|i| format!("im{i}")));
    header.push("weight".into());
    w.write_record(&header)?;
    for (x, weight) in grid.nodes().iter().zip(grid.weights()) {
        let mut rec: Vec<String> = x.lift().iter().map(|z| format!("{:?}", z.re)).collect();
        rec.extend(x.lift().iter().map(|z| format!("{:?}", z.im)));
        rec.push(format!("{weight:?}"));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a grid written by [`write_grid_csv`]; the dimension comes from the
/// header and weights must sum to `V_m`.
pub fn read_grid_csv<R: Read>(input: R) -> Result<QuadratureGrid> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.len() < 5 || header.len() % 2 == 0 || header.get(header.len() - 1) != Some("weight") {
        bail!("grid header must be re0..re_m, im0..im_m, weight");
    }
    let n = (header.len() - 1) / 2;
    for i in 0..n {
        if header.get(i) != Some(format!("re{i}").as_str()) || header.get(n + i) != Some(format!("im{i}").as_str()) {
            bail!("unexpected grid column order");
        }
    }
    let (mut nodes, mut weights) = (Vec::new(), Vec::new());
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .context("short row")?
                .trim()
                .parse::<f64>()
                .with_context(|| format!("row {}: column {i} is not a number", line + 2))
        };
        let lift = (0..n).map(|i| Ok(Complex64::new(num(i)?, num(n + i)?))).collect::<Result<Vec<_>>>()?;
        nodes.push(ProjectivePoint::from_lift(lift)?);
        weights.push(num(2 * n)?);
    }
    Ok(QuadratureGrid::from_parts(n - 1, nodes, weights, None)?)
}

#[derive(Serialize, Deserialize)]
struct SectionFile {
    spec: EnsembleSpec,
    coefficients: Vec<[f64; 2]>,
}

/// `{"spec": {...}, "coefficients": [[re, im], ...]}` in multi-index order.
pub fn write_section_json<W: Write>(s: &SectionCoefficients, out: W) -> Result<()> {
    let file = SectionFile {
        spec: *s.spec(),
        coefficients: s.coeffs().iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_writer_pretty(out, &file)?;
    Ok(())
}

pub fn read_section_json<R: Read>(input: R) -> Result<SectionCoefficients> {
    let file: SectionFile = serde_json::from_reader(input)?;
    let coeffs = file.coefficients.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    Ok(SectionCoefficients::new(file.spec, coeffs)?)
}

/// One per-trial norm measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormRow {
    pub seed: u64,
    pub trial: u64,
    pub m: usize,
    pub degree: usize,
    pub report: NormReport,
}

pub const NORM_REPORT_COLUMNS: [&str; 8] = ["seed", "trial", "m", "N", "p", "value", "method", "error_bound"];

pub fn norm_report_table(rows: &[NormRow]) -> Table {
    let mut t = Table::new(&NORM_REPORT_COLUMNS);
    for r in rows {
        t.push(vec![
            r.seed.into(),
            r.trial.into(),
            r.m.into(),
            r.degree.into(),
            r.report.p.into(),
            r.report.value.into(),
            r.report.method.as_str().into(),
            r.report.error_bound.into(),
        ]);
    }
    t
}

pub fn write_norm_reports_csv<W: Write>(rows: &[NormRow], out: W) -> Result<()> {
    norm_report_table(rows).write_csv(out)
}
