use std::cell::OnceCell;
use std::time::Instant;

use qer_channels::{ChannelKind, ChannelSpec, RegisterChannel};
use qer_dual::{
    gersgorin_bound, iterated_block_dual, iterative_dual, lambda_max_init, partition_of, recovery_duals, svd_dual_point,
    RepairOptions,
};
use qer_ops::{data_matrix, entanglement_fidelity, DataMatrix, DensityMatrix, Ensemble, QuantumChannel};
use qer_optimal::{solve_optimal_recovery, DualCertificate};
use qer_stabilizer::{adc_family_recovery, generic_qec_recovery, leung_recovery, ml_pauli_recovery};
use qer_structured::{block_eigqer, eigqer, orderqer, EigQerOptions, ResidualPolicy, StructuredRecovery};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::normalized_fidelity;
use crate::spec::{BoundKind, CodeInstance, ExperimentSpec, Method, ResidualSpec};
use crate::ExperimentError;

/// Label of the unprotected single-qubit reference rows.
pub const BASELINE: &str = "baseline";

const SDP_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub noise: f64,
    pub method: String,
    pub fidelity: Option<f64>,
    pub bound: Option<f64>,
    /// `fidelity^(1/k)`
    pub normalized: Option<f64>,
    pub seconds: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub name: String,
    pub code: String,
    /// Swept channel parameter (`gamma`, `phi`, `p`).
    pub parameter: String,
    /// Logical qubits.
    pub k: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Method labels in order of first appearance.
    pub fn methods(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.method) {
                out.push(r.method.clone());
            }
        }
        out
    }

    /// `(noise, fidelity)` for one method, skipping failed rows.
    pub fn fidelities(&self, method: &str) -> Vec<(f64, f64)> {
        self.column(method, |r| r.fidelity)
    }

    pub fn bounds(&self, method: &str) -> Vec<(f64, f64)> {
        self.column(method, |r| r.bound)
    }

    pub fn normalized(&self, method: &str) -> Vec<(f64, f64)> {
        self.column(method, |r| r.normalized)
    }

    fn column(&self, method: &str, f: impl Fn(&SweepRow) -> Option<f64>) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .filter_map(|r| f(r).map(|v| (r.noise, v)))
            .collect()
    }

    pub fn errors(&self) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.error.is_some()).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none())
    }
}

struct Point<'a> {
    code: &'a CodeInstance,
    channel: ChannelSpec,
    encoded: QuantumChannel<f64>,
    ensemble: Ensemble<f64>,
    data: OnceCell<DataMatrix<f64>>,
    eig: OnceCell<StructuredRecovery<f64>>,
    block2: OnceCell<StructuredRecovery<f64>>,
}

type Outcome = (Option<f64>, Option<f64>);

impl Point<'_> {
    fn data(&self) -> Result<&DataMatrix<f64>, ExperimentError> {
        if let Some(d) = self.data.get() {
            return Ok(d);
        }
        let d = data_matrix(&self.ensemble, &self.encoded)?;
        Ok(self.data.get_or_init(|| d))
    }

    fn eigqer(&self) -> Result<&StructuredRecovery<f64>, ExperimentError> {
        if let Some(r) = self.eig.get() {
            return Ok(r);
        }
        let r = eigqer(self.data()?, &EigQerOptions::default())?;
        Ok(self.eig.get_or_init(|| r))
    }

    fn block2(&self) -> Result<&StructuredRecovery<f64>, ExperimentError> {
        if let Some(r) = self.block2.get() {
            return Ok(r);
        }
        let r = block_eigqer(self.data()?, 2, &EigQerOptions::default())?;
        Ok(self.block2.get_or_init(|| r))
    }

    fn stabilizer(&self) -> Result<&qer_stabilizer::StabilizerCode, ExperimentError> {
        self.code
            .stabilizer
            .as_ref()
            .ok_or_else(|| ExperimentError::Spec("method needs a stabilizer code".into()))
    }

    fn single_qubit(&self) -> Result<QuantumChannel<f64>, ExperimentError> {
        self.channel
            .single_qubit()?
            .ok_or_else(|| ExperimentError::Spec("channel is not a product of qubit channels".into()))
    }

    fn evaluate(&self, method: &Method) -> Result<Outcome, ExperimentError> {
        let opts = EigQerOptions::default();
        Ok(match method {
            Method::Optimal => {
                let data = self.data()?;
                let sol = solve_optimal_recovery(data, SDP_TOL)?;
                let cert = DualCertificate::new(sol.y.clone(), data)?;
                (Some(sol.primal_value), Some(cert.certified_bound()))
            }
            Method::GenericQec => {
                let r = generic_qec_recovery::<f64>(self.stabilizer()?)?;
                (Some(r.fidelity_with(&self.ensemble, &self.encoded)?), None)
            }
            Method::MlPauli => {
                let noise = match self.channel.register_channel::<f64>()? {
                    RegisterChannel::Product(p) => p.dense()?,
                    RegisterChannel::Dense(ch) => ch,
                };
                let ml = ml_pauli_recovery(self.stabilizer()?, &noise)?;
                (Some(ml.recovery.fidelity_with(&self.ensemble, &self.encoded)?), None)
            }
            Method::Eigqer => (Some(self.eigqer()?.fidelity(self.data()?)), None),
            Method::BlockEigqer { m: 2 } => (Some(self.block2()?.fidelity(self.data()?)), None),
            Method::BlockEigqer { m } => {
                let data = self.data()?;
                (Some(block_eigqer(data, *m, &opts)?.fidelity(data)), None)
            }
            Method::Orderqer { order, residual } => {
                let data = self.data()?;
                let policy = match residual {
                    ResidualSpec::Eigqer => ResidualPolicy::EigQer,
                    ResidualSpec::None => ResidualPolicy::None,
                };
                let o = orderqer(data, &self.code.encoding, &self.single_qubit()?, *order, policy, &opts)?;
                (Some(o.recovery.fidelity(data)), None)
            }
            Method::AdcFamily => {
                let r = adc_family_recovery::<f64>(self.stabilizer()?)?;
                (Some(r.fidelity_with(&self.ensemble, &self.encoded)?), None)
            }
            Method::Leung => {
                let gamma = match self.channel.kind {
                    ChannelKind::AmplitudeDamping { gamma } if self.code.label == "leung_41" => gamma,
                    _ => return Err(ExperimentError::Spec("leung recovery needs leung_41 and amplitude damping".into())),
                };
                let r = leung_recovery::<f64>(gamma)?;
                (Some(r.fidelity_with(&self.ensemble, &self.encoded)?), None)
            }
            Method::DualBounds { bound } => {
                let data = self.data()?;
                let repair = RepairOptions::default();
                let (fidelity, cert) = match bound {
                    BoundKind::Gersgorin => {
                        let e = self.eigqer()?;
                        (e.fidelity(data), gersgorin_bound(data, &partition_of(e)?)?.certificate)
                    }
                    BoundKind::Svd => {
                        let e = self.eigqer()?;
                        (e.fidelity(data), svd_dual_point(data, &partition_of(e)?)?.certificate)
                    }
                    BoundKind::Iterative => {
                        let e = self.eigqer()?;
                        let start = lambda_max_init(data, &partition_of(e)?)?;
                        (e.fidelity(data), iterative_dual(&start.certificate.y, data, &repair)?)
                    }
                    BoundKind::Block => {
                        let b = self.block2()?;
                        let (partition, duals) = recovery_duals(b)?;
                        (b.fidelity(data), iterated_block_dual(data, &partition, &duals, &repair)?.certificate)
                    }
                };
                (Some(fidelity), Some(cert.certified_bound()))
            }
        })
    }
}

fn row(noise: f64, method: String, k: usize, outcome: Result<Outcome, ExperimentError>, seconds: f64) -> SweepRow {
    match outcome {
        Ok((fidelity, bound)) => SweepRow {
            noise,
            method,
            normalized: fidelity.and_then(|f| normalized_fidelity(f, k).ok()),
            fidelity,
            bound,
            seconds,
            error: None,
        },
        Err(e) => SweepRow {
            noise,
            method,
            fidelity: None,
            bound: None,
            normalized: None,
            seconds,
            error: Some(e.to_string()),
        },
    }
}

fn evaluate_point(spec: &ExperimentSpec, code: &CodeInstance, x: f64) -> Vec<SweepRow> {
    let labels: Vec<String> = std::iter::once(BASELINE.to_string())
        .chain(spec.methods.iter().map(Method::label))
        .collect();
    let setup = (|| -> Result<Point<'_>, ExperimentError> {
        let channel = match spec.channel.parameter_name() {
            Some(_) => spec.channel.with_parameter(x)?,
            None => spec.channel.clone(),
        };
        let encoded = channel.after_encoding(&code.encoding)?;
        Ok(Point {
            code,
            channel,
            encoded,
            ensemble: Ensemble::maximally_mixed(1 << code.k),
            data: OnceCell::new(),
            eig: OnceCell::new(),
            block2: OnceCell::new(),
        })
    })();
    let point = match setup {
        Ok(p) => p,
        Err(e) => {
            let msg = e.to_string();
            return labels
                .into_iter()
                .map(|m| row(x, m, code.k, Err(ExperimentError::Spec(msg.clone())), 0.0))
                .collect();
        }
    };
    let mut rows = Vec::with_capacity(labels.len());
    let start = Instant::now();
    let baseline = point.single_qubit().and_then(|ch| {
        let f = entanglement_fidelity(&DensityMatrix::maximally_mixed(2), &ch)?;
        Ok((Some(f.powi(code.k as i32)), None))
    });
    rows.push(row(x, labels[0].clone(), code.k, baseline, start.elapsed().as_secs_f64()));
    for (method, label) in spec.methods.iter().zip(&labels[1..]) {
        let start = Instant::now();
        let outcome = point.evaluate(method);
        rows.push(row(x, label.clone(), code.k, outcome, start.elapsed().as_secs_f64()));
    }
    rows
}

/// Evaluates every method at every grid point. Grid points run on the rayon
/// pool; a failing computation becomes an error row and the sweep goes on.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepTable, ExperimentError> {
    spec.validate()?;
    let code = spec.code.build(spec.seed)?;
    let grid = spec.grid_values();
    let per_point: Vec<Vec<SweepRow>> = grid.par_iter().map(|&x| evaluate_point(spec, &code, x)).collect();
    Ok(SweepTable {
        name: spec.name.clone(),
        code: code.label.clone(),
        parameter: spec.channel.parameter_name().unwrap_or("noise").to_string(),
        k: code.k,
        rows: per_point.into_iter().flatten().collect(),
    })
}
