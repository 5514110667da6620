//! Upper bounds on channel-adapted recovery fidelity.
//!
//! Any Hermitian `Y` on the dual code space with `I ⊗ Y − C ⪰ 0` bounds the
//! fidelity of every recovery by `tr Y`. This crate builds such points from a
//! syndrome partition (Gersgorin and SVD weights) and repairs infeasible
//! points by rank-one updates, optionally block by block.

mod block;
mod feasibility;
mod iterative;
mod partition;

pub use block::{block_dual_init, iterated_block_dual, recovery_duals, BlockDual, MergeRecord};
pub use feasibility::{is_dual_feasible, FeasibilityCheck};
pub use iterative::{iterative_dual, repair_kernel, DualRepair, RepairOptions};
pub use partition::{gersgorin_bound, lambda_max_init, partition_of, svd_dual_point, weighted_dual, PartitionedDual};

pub use qer_optimal::DualCertificate;

use qer_linalg::{LinalgError, Matrix};
use qer_ops::OpsError;
use qer_optimal::OptimalError;
use qer_stabilizer::StabilizerError;
use qer_structured::StructuredError;

pub type PartitionedDual64 = PartitionedDual<f64>;
pub type DualRepair64 = DualRepair<f64>;
pub type BlockDual64 = BlockDual<f64>;

#[derive(Debug, thiserror::Error)]
pub enum DualError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dual repair stopped after {iterations} updates with residual {residual:e}")]
    MaxIterations {
        iterations: usize,
        residual: f64,
        best: Box<Matrix<f64>>,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Optimal(#[from] OptimalError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
    #[error(transparent)]
    Structured(#[from] StructuredError),
}
