use qer_channels::apply_on_qubit;
use qer_linalg::{orthonormal_span, Complex, Matrix, Real};
use qer_ops::{DataMatrix, QuantumChannel};

use crate::deflation::Deflator;
use crate::eigqer::extend_greedy;
use crate::{reduced_sdp, EigQerOptions, RecoveryForm, StructuredError, StructuredRecovery, SyndromeBlock};

/// How OrderQER treats the code space outside the order subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualPolicy {
    EigQer,
    None,
}

#[derive(Clone, Debug)]
pub struct OrderQer<T: Real> {
    pub recovery: StructuredRecovery<T>,
    /// Dimension of the order-1 and order-2 subspaces.
    pub order_dims: Vec<usize>,
    /// Fidelity contributed by each order subspace.
    pub order_contributions: Vec<T>,
    /// Fidelity of the residual recovery.
    pub residual_contribution: T,
}

/// `E₁` on `damped`, `E₀` on every other qubit, applied to the columns of `m`.
fn damp<T: Real>(e0: &Matrix<T>, e1: &Matrix<T>, damped: &[usize], n: usize, m: &Matrix<T>) -> Matrix<T> {
    (0..n).fold(m.clone(), |acc, q| {
        let op = if damped.contains(&q) { e1 } else { e0 };
        apply_on_qubit(op, q, n, &acc)
    })
}

fn columns<T: Real>(m: &Matrix<T>) -> Vec<Vec<Complex<T>>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

/// OrderQER for a product channel whose single-qubit Kraus operators are
/// `[E₀, E₁]` (no damping, damping). The order-`k` subspace is spanned by the
/// encoded states with exactly `k` damped qubits; order 2 is orthogonalized
/// against order 1. Each order gets its subspace SDP optimum.
pub fn orderqer<T: Real>(
    data: &DataMatrix<T>,
    encoding: &Matrix<T>,
    channel: &QuantumChannel<T>,
    max_order: usize,
    residual: ResidualPolicy,
    options: &EigQerOptions,
) -> Result<OrderQer<T>, StructuredError> {
    let (d_s, d_c) = (data.d_s(), data.d_c());
    if channel.num_kraus() != 2 || channel.d_in() != 2 || channel.d_out() != 2 {
        return Err(StructuredError::Invalid("OrderQER needs a single-qubit channel with exactly two Kraus operators".into()));
    }
    if !(1..=2).contains(&max_order) {
        return Err(StructuredError::Invalid(format!("order {max_order} not supported")));
    }
    if encoding.shape() != (d_c, d_s) || !d_c.is_power_of_two() {
        return Err(StructuredError::Invalid(format!("encoding {:?} for {d_s} -> {d_c}", encoding.shape())));
    }
    let n = d_c.trailing_zeros() as usize;
    let (e0, e1) = (&channel.kraus()[0], &channel.kraus()[1]);

    let mut first = columns(&damp(e0, e1, &[], n, encoding));
    for k in 0..n {
        first.extend(columns(&damp(e0, e1, &[k], n, encoding)));
    }
    let s1 = orthonormal_span(&first, 1e-10)?;
    let mut bases = vec![s1];
    if max_order == 2 {
        let mut second = Vec::new();
        for k in 0..n {
            for l in k + 1..n {
                let m = damp(e0, e1, &[k, l], n, encoding);
                let s1 = &bases[0];
                second.extend(columns(&(&m - &s1.matmul(&s1.adjoint().matmul(&m)))));
            }
        }
        let s2 = orthonormal_span(&second, 1e-8)?;
        if s2.cols() > 0 {
            bases.push(s2);
        }
    }

    let mut deflator = Deflator::new(data);
    let mut blocks = Vec::new();
    let mut order_dims = Vec::new();
    let mut order_contributions = Vec::new();
    for basis in bases {
        let sol = reduced_sdp(data, &basis, options.sdp_tol)?;
        deflator.remove(&basis);
        order_dims.push(basis.cols());
        order_contributions.push(sol.value);
        blocks.push(SyndromeBlock {
            basis,
            kraus: sol.kraus,
            contribution: sol.value,
            eigenvalue: T::zero(),
            dual: Some(sol.dual),
        });
    }
    let ordered = blocks.len();
    if residual == ResidualPolicy::EigQer {
        extend_greedy(data, &mut deflator, &mut blocks, options)?;
    }
    let residual_contribution = blocks[ordered..]
        .iter()
        .fold(T::zero(), |acc, b| acc + b.contribution);
    Ok(OrderQer {
        recovery: StructuredRecovery::assemble(d_s, d_c, RecoveryForm::Subspace, blocks)?,
        order_dims,
        order_contributions,
        residual_contribution,
    })
}
