//! Binary and JSON persistence of SDP solutions.
//!
//! Binary layout, all little-endian: the 8-byte magic `QERSDP1\0`, `u64`
//! `d_out` and `d_in`, the entries of `X` then `Y` in row-major order as
//! `(re, im)` pairs of `f64`, then `f64` primal value, dual value and gap and
//! a `u64` iteration count.

use std::io::{Read, Write};
use std::path::Path;

use qer_linalg::{Complex, Matrix, Real};
use serde::{Deserialize, Serialize};

use crate::{OptimalError, SdpSolution};

const MAGIC: &[u8; 8] = b"QERSDP1\0";

pub fn write_solution<T: Real, W: Write>(solution: &SdpSolution<T>, mut w: W) -> Result<(), OptimalError> {
    w.write_all(MAGIC)?;
    w.write_all(&(solution.d_out as u64).to_le_bytes())?;
    w.write_all(&(solution.d_in as u64).to_le_bytes())?;
    for m in [&solution.x, &solution.y] {
        for z in m.data() {
            w.write_all(&z.re.as_f64().to_le_bytes())?;
            w.write_all(&z.im.as_f64().to_le_bytes())?;
        }
    }
    for v in [solution.primal_value, solution.dual_value, solution.gap] {
        w.write_all(&v.as_f64().to_le_bytes())?;
    }
    w.write_all(&(solution.iterations as u64).to_le_bytes())?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64, OptimalError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64, OptimalError> {
    Ok(f64::from_bits(read_u64(r)?))
}

fn read_matrix<R: Read>(r: &mut R, n: usize) -> Result<Matrix<f64>, OptimalError> {
    let mut data = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re = read_f64(r)?;
        let im = read_f64(r)?;
        data.push(Complex::new(re, im));
    }
    Matrix::new(n, n, data).map_err(|e| OptimalError::Format(e.to_string()))
}

/// Reads a solution written by [`write_solution`]. Residuals are not stored
/// and come back as `NaN`.
pub fn read_solution<R: Read>(mut r: R) -> Result<SdpSolution<f64>, OptimalError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(OptimalError::Format("bad magic".into()));
    }
    let d_out = read_u64(&mut r)? as usize;
    let d_in = read_u64(&mut r)? as usize;
    let n = d_out
        .checked_mul(d_in)
        .filter(|&n| n <= crate::MAX_SDP_DIM && d_in <= crate::MAX_CONSTRAINT_DIM)
        .ok_or_else(|| OptimalError::Format(format!("dimensions {d_out} x {d_in}")))?;
    let x = read_matrix(&mut r, n)?;
    let y = read_matrix(&mut r, d_in)?;
    let primal_value = read_f64(&mut r)?;
    let dual_value = read_f64(&mut r)?;
    let gap = read_f64(&mut r)?;
    let iterations = read_u64(&mut r)? as usize;
    Ok(SdpSolution {
        x,
        y,
        d_out,
        d_in,
        primal_value,
        dual_value,
        gap,
        iterations,
        primal_residual: f64::NAN,
        dual_residual: f64::NAN,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub d_out: usize,
    pub d_in: usize,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl SolutionSummary {
    pub fn of<T: Real>(s: &SdpSolution<T>) -> Self {
        Self {
            d_out: s.d_out,
            d_in: s.d_in,
            primal_value: s.primal_value.as_f64(),
            dual_value: s.dual_value.as_f64(),
            gap: s.gap.as_f64(),
            iterations: s.iterations,
            primal_residual: s.primal_residual,
            dual_residual: s.dual_residual,
        }
    }
}

pub fn summary_json<T: Real>(solution: &SdpSolution<T>) -> Result<String, OptimalError> {
    serde_json::to_string_pretty(&SolutionSummary::of(solution)).map_err(|e| OptimalError::Format(e.to_string()))
}

/// Writes `<stem>.bin` and `<stem>.json` next to each other.
pub fn save_solution<T: Real>(solution: &SdpSolution<T>, stem: &Path) -> Result<(), OptimalError> {
    let file = std::fs::File::create(stem.with_extension("bin"))?;
    let mut w = std::io::BufWriter::new(file);
    write_solution(solution, &mut w)?;
    w.flush()?;
    std::fs::write(stem.with_extension("json"), summary_json(solution)?)?;
    Ok(())
}

pub fn load_solution(path: &Path) -> Result<SdpSolution<f64>, OptimalError> {
    read_solution(std::io::BufReader::new(std::fs::File::open(path)?))
}
