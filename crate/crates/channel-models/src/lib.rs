//! Qubit noise models and their n-qubit extensions.
//!
//! Qubit 1 is the leftmost tensor factor, i.e. the most significant bit of a
//! basis index. Tensor-product Kraus sets are ordered lexicographically by
//! per-qubit index with qubit 1 varying slowest.

mod models;
mod product;
mod spec;

pub use models::{amplitude_damping, depolarizing, pauli_channel, pauli_matrix, pure_state_rotation, PureStateRotation};
pub use product::{apply_on_qubit, n_fold, ProductChannel, MAX_DENSE_QUBITS};
pub use spec::{ChannelKind, ChannelSpec, RegisterChannel};

use qer_ops::OpsError;

pub type ProductChannel64 = ProductChannel<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChannelError {
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error("invalid channel parameter: {0}")]
    InvalidParameter(String),
    #[error("{qubits}-qubit dense channel exceeds the memory guard")]
    TooLarge { qubits: usize },
    #[error("no CPTP completion: {0}")]
    NoSolution(String),
}
