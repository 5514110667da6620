//! Recoveries built from an orthogonal syndrome measurement followed by a
//! correction on each syndrome subspace.
//!
//! All subspaces live on the code space `H_C`. A recovery operator `R`
//! supported on a subspace with orthonormal basis `B` satisfies `R = R B B†`;
//! on the vectorized side this is `|R⟩⟩ = (I ⊗ conj(BB†)) |R⟩⟩`.

mod block;
mod deflation;
mod eigqer;
pub mod io;
mod order;
mod recovery;
mod reduced;
mod subspace;

pub use block::block_eigqer;
pub use eigqer::{eigqer, EigQerOptions};
pub use order::{orderqer, OrderQer, ResidualPolicy};
pub use recovery::{RecoveryForm, StructuredRecovery, SyndromeBlock};
pub use reduced::{reduced_sdp, ReducedSolution};
pub use subspace::{complement_basis, lift_dual, reduce_kernel, restrict_dual};

use qer_channels::ChannelError;
use qer_linalg::LinalgError;
use qer_ops::OpsError;
use qer_optimal::OptimalError;

pub type StructuredRecovery64 = StructuredRecovery<f64>;
pub type SyndromeBlock64 = SyndromeBlock<f64>;
pub type ReducedSolution64 = ReducedSolution<f64>;
pub type OrderQer64 = OrderQer<f64>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum StructuredError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Optimal(#[from] OptimalError),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}
