use qer_linalg::{psd_sqrt, vec_inner, Complex, Real};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{random, DensityMatrix, Ensemble, OpsError, QuantumChannel};

fn check_square<T: Real>(channel: &QuantumChannel<T>, d: usize) -> Result<(), OpsError> {
    if channel.d_in() != d || channel.d_out() != d {
        return Err(OpsError::Dimension(format!(
            "channel {} -> {} on a {}-dimensional state",
            channel.d_in(),
            channel.d_out(),
            d
        )));
    }
    Ok(())
}

/// (tr √(√ρ σ √ρ))²
pub fn state_fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T, OpsError> {
    if rho.dim() != sigma.dim() {
        return Err(OpsError::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    let s = psd_sqrt(rho.matrix())?;
    let inner = s.matmul(sigma.matrix()).matmul(&s).hermitian_part();
    let root = psd_sqrt(&inner)?;
    let t = root.trace().re;
    Ok(t * t)
}

/// F_e(ρ, A) = Σ_k |tr(ρ A_k)|²
pub fn entanglement_fidelity<T: Real>(rho: &DensityMatrix<T>, channel: &QuantumChannel<T>) -> Result<T, OpsError> {
    check_square(channel, rho.dim())?;
    Ok(channel
        .kraus()
        .iter()
        .map(|a| rho.matrix().trace_product(a).norm_sqr())
        .fold(T::zero(), |s, x| s + x))
}

/// Σ_i p_i F_e(ρ_i, A)
pub fn average_entanglement_fidelity<T: Real>(ensemble: &Ensemble<T>, channel: &QuantumChannel<T>) -> Result<T, OpsError> {
    let mut total = T::zero();
    for (rho, p) in ensemble.iter() {
        total = total + p * entanglement_fidelity(rho, channel)?;
    }
    Ok(total)
}

/// Σ_i p_i ⟨ψ_i|A(|ψ_i⟩⟨ψ_i|)|ψ_i⟩; every state must be pure.
pub fn ensemble_average_fidelity<T: Real>(ensemble: &Ensemble<T>, channel: &QuantumChannel<T>) -> Result<T, OpsError> {
    check_square(channel, ensemble.dim())?;
    let mut total = T::zero();
    for (i, (rho, p)) in ensemble.iter().enumerate() {
        if !rho.is_pure(1e-9) {
            return Err(OpsError::MixedState { index: i });
        }
        let out = channel.apply_operator(rho.matrix())?;
        total = total + p * rho.matrix().trace_product(&out).re;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug)]
pub struct MinFidelityOptions {
    pub samples: usize,
    /// Local random-descent steps from the worst sample.
    pub refine_steps: usize,
    pub seed: u64,
}

impl Default for MinFidelityOptions {
    fn default() -> Self {
        Self {
            samples: 512,
            refine_steps: 400,
            seed: 0,
        }
    }
}

fn pure_fidelity<T: Real>(psi: &[Complex<T>], channel: &QuantumChannel<T>) -> T {
    channel
        .kraus()
        .iter()
        .map(|a| vec_inner(psi, &a.matvec(psi)).norm_sqr())
        .fold(T::zero(), |s, x| s + x)
}

/// Upper estimate of `min_ψ ⟨ψ|A(ψ)|ψ⟩` from Haar samples followed by a
/// shrinking random local search. Returns the value and the worst state found.
pub fn minimum_fidelity_estimate<T: Real>(
    channel: &QuantumChannel<T>,
    options: MinFidelityOptions,
) -> Result<(T, Vec<Complex<T>>), OpsError> {
    let d = channel.d_in();
    check_square(channel, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best = random::pure_state::<T, _>(d, &mut rng);
    let mut best_f = pure_fidelity(&best, channel);
    for _ in 1..options.samples.max(1) {
        let psi = random::pure_state::<T, _>(d, &mut rng);
        let f = pure_fidelity(&psi, channel);
        if f < best_f {
            best_f = f;
            best = psi;
        }
    }
    let mut step = T::lit(0.3);
    for _ in 0..options.refine_steps {
        let dir = random::gaussian_vector::<T, _>(d, &mut rng);
        let trial: Vec<_> = best.iter().zip(&dir).map(|(a, b)| a + b * step).collect();
        let n = qer_linalg::vec_norm(&trial);
        let trial: Vec<_> = trial.into_iter().map(|z| z / n).collect();
        let f = pure_fidelity(&trial, channel);
        if f < best_f {
            best_f = f;
            best = trial;
        } else {
            step = step * T::lit(0.97);
        }
    }
    Ok((best_f, best))
}

