//! Persistence of structured recoveries: a binary dump of the operator
//! elements and a JSON manifest of the syndrome structure.
//!
//! Binary layout, little-endian: magic `QERREC1\0`, `u64` `d_S`, `d_C` and
//! operator count, then each `d_S × d_C` operator row-major as `(re, im)`
//! pairs of `f64`.

use std::io::{Read, Write};

use qer_linalg::{Complex, Matrix, Real};
use serde::{Deserialize, Serialize};

use crate::{RecoveryForm, StructuredError, StructuredRecovery};

const MAGIC: &[u8; 8] = b"QERREC1\0";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryManifest {
    pub d_s: usize,
    pub d_c: usize,
    pub form: RecoveryForm,
    pub ranks: Vec<usize>,
    pub operators: Vec<usize>,
    pub contributions: Vec<f64>,
    pub residual_rank: usize,
}

impl RecoveryManifest {
    pub fn of<T: Real>(r: &StructuredRecovery<T>) -> Self {
        Self {
            d_s: r.d_s,
            d_c: r.d_c,
            form: r.form,
            ranks: r.ranks(),
            operators: r.blocks.iter().map(|b| b.kraus.len()).collect(),
            contributions: r.contributions().iter().map(|c| c.as_f64()).collect(),
            residual_rank: r.residual.cols(),
        }
    }
}

fn io_err(e: std::io::Error) -> StructuredError {
    StructuredError::Invalid(format!("i/o: {e}"))
}

pub fn write_operators<T: Real, W: Write>(r: &StructuredRecovery<T>, mut w: W) -> Result<(), StructuredError> {
    let kraus = r.kraus();
    w.write_all(MAGIC).map_err(io_err)?;
    for v in [r.d_s, r.d_c, kraus.len()] {
        w.write_all(&(v as u64).to_le_bytes()).map_err(io_err)?;
    }
    for k in &kraus {
        for z in k.data() {
            w.write_all(&z.re.as_f64().to_le_bytes()).map_err(io_err)?;
            w.write_all(&z.im.as_f64().to_le_bytes()).map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn read_operators<R: Read>(mut r: R) -> Result<Vec<Matrix<f64>>, StructuredError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(io_err)?;
    if &b != MAGIC {
        return Err(StructuredError::Invalid("bad magic".into()));
    }
    let mut next = || -> Result<u64, StructuredError> {
        r.read_exact(&mut b).map_err(io_err)?;
        Ok(u64::from_le_bytes(b))
    };
    let (d_s, d_c, count) = (next()? as usize, next()? as usize, next()? as usize);
    if d_s.saturating_mul(d_c) > 1 << 24 || count > 1 << 20 {
        return Err(StructuredError::Invalid("implausible dimensions".into()));
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut data = Vec::with_capacity(d_s * d_c);
        for _ in 0..d_s * d_c {
            let re = f64::from_bits(next()?);
            let im = f64::from_bits(next()?);
            data.push(Complex::new(re, im));
        }
        out.push(Matrix::new(d_s, d_c, data)?);
    }
    Ok(out)
}

pub fn manifest_json<T: Real>(r: &StructuredRecovery<T>) -> Result<String, StructuredError> {
    serde_json::to_string_pretty(&RecoveryManifest::of(r)).map_err(|e| StructuredError::Invalid(e.to_string()))
}
