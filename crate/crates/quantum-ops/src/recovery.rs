use qer_linalg::{Matrix, Real};

use crate::{composite_fidelity, cptp_tolerance, DataMatrix, Ensemble, OpsError, QuantumChannel};

/// Decoding map from the code space (`d_C`) back to the source (`d_S`),
/// optionally labelled with the syndrome each Kraus operator belongs to.
#[derive(Clone, Debug)]
pub struct RecoveryOperation<T: Real> {
    channel: QuantumChannel<T>,
    labels: Option<Vec<String>>,
}

impl<T: Real> RecoveryOperation<T> {
    /// Builds a CPTP recovery from `d_S × d_C` Kraus operators.
    pub fn new(kraus: Vec<Matrix<T>>) -> Result<Self, OpsError> {
        Ok(Self {
            channel: QuantumChannel::new(kraus)?,
            labels: None,
        })
    }

    /// Like [`RecoveryOperation::new`] with one label per Kraus operator.
    pub fn labelled(kraus: Vec<Matrix<T>>, labels: Vec<String>) -> Result<Self, OpsError> {
        if labels.len() != kraus.len() {
            return Err(OpsError::Dimension(format!(
                "{} labels for {} Kraus operators",
                labels.len(),
                kraus.len()
            )));
        }
        Ok(Self {
            channel: QuantumChannel::new(kraus)?,
            labels: Some(labels),
        })
    }

    /// Accepts a residual up to `tol` instead of [`crate::cptp_tolerance`].
    pub fn with_tolerance(kraus: Vec<Matrix<T>>, tol: f64) -> Result<Self, OpsError> {
        let channel = QuantumChannel::from_kraus_unchecked(kraus)?;
        let residual = channel.cptp_residual().as_f64();
        if residual > tol.max(cptp_tolerance::<T>(channel.d_in())) {
            return Err(OpsError::NotTracePreserving { residual });
        }
        Ok(Self { channel, labels: None })
    }

    pub fn channel(&self) -> &QuantumChannel<T> {
        &self.channel
    }

    pub fn kraus(&self) -> &[Matrix<T>] {
        self.channel.kraus()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn d_s(&self) -> usize {
        self.channel.d_out()
    }

    pub fn d_c(&self) -> usize {
        self.channel.d_in()
    }

    /// Choi matrix on `d_S ⊗ d_C`.
    pub fn choi(&self) -> Matrix<T> {
        self.channel.choi().into_matrix()
    }

    /// tr(X_R C), evaluated Kraus by Kraus.
    pub fn fidelity(&self, data: &DataMatrix<T>) -> T {
        data.kraus_fidelity(self.kraus())
    }

    /// Average entanglement fidelity of `self ∘ channel` on the ensemble.
    pub fn fidelity_with(&self, ensemble: &Ensemble<T>, channel: &QuantumChannel<T>) -> Result<T, OpsError> {
        composite_fidelity(ensemble, self.kraus(), channel)
    }

    pub fn into_channel(self) -> QuantumChannel<T> {
        self.channel
    }
}
