//! Pauli algebra, stabilizer codes and their standard recoveries.
//!
//! Qubit 1 (index 0) is the leftmost tensor factor and the most significant
//! bit of every basis index. Qubit arguments are 0-based unless a function
//! says otherwise.

mod code;
mod correctability;
mod damped;
mod encoding;
mod family;
mod leung;
mod library;
mod pauli;
mod recovery;
pub mod symplectic;
mod syndrome;

pub use code::StabilizerCode;
pub use correctability::{
    check_correctability, check_correctability_images, damping_error_images, damping_image, damping_operator,
    Correctability, CORRECTABILITY_TOL,
};
pub use damped::{damp_qubits, damped_subspace, DampedSubspace};
pub use encoding::{encoding_isometry, stabilized_subspace};
pub use family::adc_family_recovery;
pub use leung::leung_recovery;
pub use library::{
    adc_pairs, code_library, five_qubit, generalized_adc_code, gottesman_83, hamming_7_4, leung_41, linear_adc_code,
    shor, steane, LIBRARY_CODES,
};
pub use pauli::{PauliOperator, MAX_QUBITS};
pub use recovery::{generic_qec_recovery, ml_pauli_recovery, pauli_decomposition, MlPauliRecovery, PauliTerm};
pub use syndrome::{min_weight_representatives, pauli_syndrome, syndrome_label, syndrome_partition, SyndromePartition};

use qer_channels::ChannelError;
use qer_linalg::LinalgError;
use qer_ops::OpsError;

pub type SyndromePartition64 = SyndromePartition<f64>;
pub type MlPauliRecovery64 = MlPauliRecovery<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StabilizerError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid code: {0}")]
    Invalid(String),
    #[error("unknown code '{0}'")]
    UnknownCode(String),
    #[error("Kraus operator {0} is not a scaled Pauli")]
    NotPauli(usize),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
