//! Optimal channel-adapted recovery and encoding.
//!
//! Both problems are the semidefinite program `max tr(XK)` over Choi matrices
//! `X ⪰ 0` with `tr_out X = I`, solved here by a dense primal-dual
//! interior-point method. Dual points `Y` with `I ⊗ Y ⪰ K` certify upper
//! bounds `tr Y`.

mod certificate;
mod encoding;
pub mod io;
mod robust;
mod sdp;

pub use certificate::{
    dual_from_primal, dual_from_recovery, kraus_from_choi, numerical_rank, recovery_from_choi, verify_optimality, DualCertificate,
    OptimalityReport, DUAL_FEASIBILITY_TOL,
};
pub use encoding::{
    encoding_kernel, iterate_encoding_recovery, solve_optimal_encoding, EncodingIteration, OptimalEncoding,
};
pub use robust::robust_data_matrix;
pub use sdp::{
    solve_optimal_recovery, solve_sdp, SdpOptions, SdpProblem, SdpSolution, MAX_CONSTRAINT_DIM, MAX_SDP_DIM,
};

use qer_linalg::LinalgError;
use qer_ops::OpsError;

pub type SdpProblem64 = SdpProblem<f64>;
pub type SdpSolution64 = SdpSolution<f64>;
pub type DualCertificate64 = DualCertificate<f64>;
pub type OptimalEncoding64 = OptimalEncoding<f64>;
pub type EncodingIteration64 = EncodingIteration<f64>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum OptimalError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("problem of size {d_out} x {d_in} exceeds the dense solver limits")]
    TooLarge { d_out: usize, d_in: usize },
    #[error("solver did not converge (gap {gap:e})")]
    NoConvergence { gap: f64, best: Box<SdpSolution<f64>> },
    #[error("numerical breakdown: {0}")]
    Numerical(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("bad solution file: {0}")]
    Format(String),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<std::io::Error> for OptimalError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}
