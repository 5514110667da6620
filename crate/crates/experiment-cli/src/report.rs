use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::fit::{fit_polynomial, FitResult};
use crate::spec::FitSpec;
use crate::sweep::{SweepTable, BASELINE};
use crate::ExperimentError;

/// Slack allowed when checking that a bound dominates a fidelity.
pub const DUALITY_SLACK: f64 = 1e-6;

/// `value^(1/k)`, the fidelity per logical qubit.
pub fn normalized_fidelity(value: f64, k: usize) -> Result<f64, ExperimentError> {
    if k == 0 || !(value > 0.0 && value <= 1.0 + 1e-9) {
        return Err(ExperimentError::Spec(format!("cannot normalize {value} over {k} qubits")));
    }
    Ok(value.min(1.0).powf(1.0 / k as f64))
}

/// Which table column a fit was taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    Fidelity,
    Bound,
    Normalized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodFit {
    pub method: String,
    pub column: Column,
    pub fit: FitResult,
}

/// Fits every method's fidelity, and the bound of every method that has one.
pub fn fit_table(table: &SweepTable, spec: &FitSpec) -> Vec<MethodFit> {
    let mut out = Vec::new();
    for m in table.methods() {
        let columns = [(Column::Fidelity, table.fidelities(&m)), (Column::Bound, table.bounds(&m))];
        for (column, samples) in columns {
            if samples.is_empty() {
                continue;
            }
            if let Ok(fit) = fit_polynomial(&samples, spec.degree, spec.range) {
                out.push(MethodFit {
                    method: m.clone(),
                    column,
                    fit,
                });
            }
        }
    }
    out
}

/// Rows whose fidelity exceeds the smallest bound reported at the same
/// noise value by more than [`DUALITY_SLACK`]. Baseline rows describe the
/// unencoded system and are not audited.
pub fn audit_bounds(table: &SweepTable) -> Vec<String> {
    let mut out = Vec::new();
    for r in &table.rows {
        let Some(f) = r.fidelity.filter(|_| r.method != BASELINE) else {
            continue;
        };
        let tightest = table
            .rows
            .iter()
            .filter(|b| b.noise == r.noise)
            .filter_map(|b| b.bound.map(|v| (v, &b.method)))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((bound, by)) = tightest {
            if f > bound + DUALITY_SLACK {
                out.push(format!("{} at {}: fidelity {f} above {by} bound {bound}", r.method, r.noise));
            }
        }
    }
    out
}

/// First noise value at which `method` falls below `reference`, by linear
/// interpolation of the difference.
pub fn crossover(table: &SweepTable, method: &str, reference: &str) -> Option<f64> {
    let a = table.fidelities(method);
    let b = table.fidelities(reference);
    let diff: Vec<(f64, f64)> = a
        .iter()
        .filter_map(|&(x, f)| b.iter().find(|p| p.0 == x).map(|p| (x, f - p.1)))
        .collect();
    diff.windows(2).find_map(|w| {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        (d0 >= 0.0 && d1 < 0.0).then(|| x0 + (x1 - x0) * d0 / (d0 - d1))
    })
}

/// Twelve significant digits.
fn number(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.11e}"))
}

pub fn write_csv<W: Write>(table: &SweepTable, w: W) -> Result<(), ExperimentError> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(["noise", "method", "fidelity", "bound", "normalized"])?;
    for r in &table.rows {
        out.write_record([
            number(Some(r.noise)),
            r.method.clone(),
            number(r.fidelity),
            number(r.bound),
            number(r.normalized),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct CsvRow {
    pub noise: f64,
    pub method: String,
    pub fidelity: Option<f64>,
    pub bound: Option<f64>,
    pub normalized: Option<f64>,
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<CsvRow>, ExperimentError> {
    let mut rdr = csv::Reader::from_reader(r);
    Ok(rdr.deserialize().collect::<Result<Vec<CsvRow>, _>>()?)
}

/// Plain-text summary: one coefficient row per fitted column, then the
/// duality audit and any failed rows.
pub fn summary_text(table: &SweepTable, fits: &[MethodFit]) -> String {
    let degree = fits.iter().map(|f| f.fit.coefficients.len()).max().unwrap_or(0);
    let mut s = format!("{} ({}, k = {})\n", table.name, table.code, table.k);
    if let Some(f) = fits.first() {
        s += &format!(
            "fit over {} in [{}, {}]\n",
            table.parameter, f.fit.fit_range.0, f.fit.fit_range.1
        );
    }
    s += &format!("{:<22}{:<12}", "method", "column");
    for i in 0..degree {
        s += &format!("{:>14}", format!("{}^{i}", table.parameter));
    }
    s += &format!("{:>14}\n", "residual");
    for f in fits {
        let column = match f.column {
            Column::Fidelity => "fidelity",
            Column::Bound => "bound",
            Column::Normalized => "normalized",
        };
        s += &format!("{:<22}{:<12}", f.method, column);
        for i in 0..degree {
            s += &format!("{:>14.6}", f.fit.coefficient(i));
        }
        s += &format!("{:>14.3e}\n", f.fit.residual);
    }
    let audit = audit_bounds(table);
    if audit.is_empty() {
        s += "duality audit: every fidelity is below every bound\n";
    } else {
        s += &format!("duality audit: {} violations\n", audit.len());
        for v in audit {
            s += &format!("  {v}\n");
        }
    }
    for r in table.errors() {
        s += &format!("error: {} at {}: {}\n", r.method, r.noise, r.error.as_deref().unwrap_or(""));
    }
    s
}

#[derive(Clone, Debug)]
pub struct ReportFiles {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub json: PathBuf,
}

/// Writes `<name>.csv`, `<name>.txt` and `<name>.json` (full table with
/// timings, errors and fits) into `dir`.
pub fn emit_report(table: &SweepTable, fits: &[MethodFit], dir: &Path) -> Result<ReportFiles, ExperimentError> {
    std::fs::create_dir_all(dir)?;
    let files = ReportFiles {
        csv: dir.join(format!("{}.csv", table.name)),
        summary: dir.join(format!("{}.txt", table.name)),
        json: dir.join(format!("{}.json", table.name)),
    };
    write_csv(table, std::fs::File::create(&files.csv)?)?;
    std::fs::write(&files.summary, summary_text(table, fits))?;
    let full = serde_json::json!({ "table": table, "fits": fits });
    std::fs::write(&files.json, serde_json::to_string_pretty(&full)?)?;
    Ok(files)
}
