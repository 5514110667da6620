//! States, channels and fidelity measures.
//!
//! A channel from `d_in` to `d_out` is a list of Kraus operators
//! (`d_out × d_in`). Its Choi matrix is `Σ_k |A_k⟩⟩⟨⟨A_k|` on the
//! `d_out ⊗ d_in` space (output factor first). The recovery data matrix
//! `C = Σ_{jk} p_k |ρ_k E_j†⟩⟩⟨⟨ρ_k E_j†|` lives on `d_S ⊗ d_C`, so that
//! `tr(X_R C)` is the average entanglement fidelity of `R ∘ E`.

mod channel;
mod data;
mod fidelity;
pub mod random;
mod recovery;
mod state;

pub use channel::{choi_to_kraus, cptp_tolerance, kraus_to_choi, ChoiMatrix, QuantumChannel, CPTP_TOL, PSD_TOL};
pub use data::{composite_fidelity, data_matrix, DataMatrix};
pub use fidelity::{
    average_entanglement_fidelity, ensemble_average_fidelity, entanglement_fidelity, minimum_fidelity_estimate,
    state_fidelity, MinFidelityOptions,
};
pub use recovery::RecoveryOperation;
pub use state::{DensityMatrix, Ensemble};

use qer_linalg::LinalgError;

pub type DensityMatrix64 = DensityMatrix<f64>;
pub type QuantumChannel64 = QuantumChannel<f64>;
pub type ChoiMatrix64 = ChoiMatrix<f64>;
pub type Ensemble64 = Ensemble<f64>;
pub type DataMatrix64 = DataMatrix<f64>;
pub type RecoveryOperation64 = RecoveryOperation<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OpsError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a density matrix: {0}")]
    InvalidState(String),
    #[error("channel is not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("ensemble state {index} is not pure")]
    MixedState { index: usize },
}
