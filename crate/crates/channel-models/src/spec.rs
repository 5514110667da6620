use qer_linalg::Real;
use qer_ops::QuantumChannel;
use serde::{Deserialize, Serialize};

use crate::{amplitude_damping, depolarizing, pauli_channel, pure_state_rotation, ChannelError, ProductChannel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelKind {
    AmplitudeDamping { gamma: f64 },
    PureStateRotation { theta: f64, phi: f64 },
    Depolarizing { p: f64 },
    /// Pauli strings with probabilities. Single-character labels describe a
    /// qubit channel applied independently to every qubit; longer labels
    /// describe the whole register.
    Pauli { terms: Vec<(String, f64)> },
}

/// Serializable description of an n-qubit noise model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    #[serde(flatten)]
    pub kind: ChannelKind,
    pub qubits: usize,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, qubits: usize) -> Result<Self, ChannelError> {
        let spec = Self { kind, qubits };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.qubits == 0 {
            return Err(ChannelError::InvalidParameter("qubits must be at least 1".into()));
        }
        if let ChannelKind::Pauli { terms } = &self.kind {
            let len = terms.first().map_or(0, |t| t.0.chars().count());
            if len != 1 && len != self.qubits {
                return Err(ChannelError::InvalidParameter(format!(
                    "Pauli labels of length {len} for {} qubits",
                    self.qubits
                )));
            }
        }
        self.register_channel::<f64>().map(|_| ())
    }

    /// Name of the swept noise parameter (`gamma`, `phi` or `p`).
    pub fn parameter_name(&self) -> Option<&'static str> {
        match self.kind {
            ChannelKind::AmplitudeDamping { .. } => Some("gamma"),
            ChannelKind::PureStateRotation { .. } => Some("phi"),
            ChannelKind::Depolarizing { .. } => Some("p"),
            ChannelKind::Pauli { .. } => None,
        }
    }

    /// Copy with the noise parameter replaced.
    pub fn with_parameter(&self, x: f64) -> Result<Self, ChannelError> {
        let kind = match &self.kind {
            ChannelKind::AmplitudeDamping { .. } => ChannelKind::AmplitudeDamping { gamma: x },
            ChannelKind::PureStateRotation { theta, .. } => ChannelKind::PureStateRotation { theta: *theta, phi: x },
            ChannelKind::Depolarizing { .. } => ChannelKind::Depolarizing { p: x },
            ChannelKind::Pauli { .. } => {
                return Err(ChannelError::InvalidParameter("Pauli channels have no sweep parameter".into()))
            }
        };
        Self::new(kind, self.qubits)
    }

    fn is_per_qubit(&self) -> bool {
        match &self.kind {
            ChannelKind::Pauli { terms } => terms.first().is_some_and(|t| t.0.chars().count() == 1),
            _ => true,
        }
    }

    /// The qubit channel applied to each qubit, if the model is a product.
    pub fn single_qubit<T: Real>(&self) -> Result<Option<QuantumChannel<T>>, ChannelError> {
        if !self.is_per_qubit() {
            return Ok(None);
        }
        Ok(Some(match &self.kind {
            ChannelKind::AmplitudeDamping { gamma } => amplitude_damping(T::lit(*gamma))?,
            ChannelKind::PureStateRotation { theta, phi } => pure_state_rotation(T::lit(*theta), T::lit(*phi))?.channel,
            ChannelKind::Depolarizing { p } => depolarizing(T::lit(*p))?,
            ChannelKind::Pauli { terms } => pauli_channel(&cast_terms(terms))?,
        }))
    }

    /// Factored form; `None` for correlated Pauli channels.
    pub fn product<T: Real>(&self) -> Result<Option<ProductChannel<T>>, ChannelError> {
        match self.single_qubit::<T>()? {
            Some(ch) => Ok(Some(ProductChannel::uniform(&ch, self.qubits)?)),
            None => Ok(None),
        }
    }

    /// Channel on the whole register in a form suitable for composing with
    /// an encoding: either factored or a dense correlated Pauli channel.
    pub fn register_channel<T: Real>(&self) -> Result<RegisterChannel<T>, ChannelError> {
        match self.product::<T>()? {
            Some(p) => Ok(RegisterChannel::Product(p)),
            None => match &self.kind {
                ChannelKind::Pauli { terms } => Ok(RegisterChannel::Dense(pauli_channel(&cast_terms(terms))?)),
                _ => unreachable!("only Pauli channels are correlated"),
            },
        }
    }

    /// Kraus operators `E_j U` of the noise applied after the encoding isometry `U`.
    pub fn after_encoding<T: Real>(&self, u: &qer_linalg::Matrix<T>) -> Result<QuantumChannel<T>, ChannelError> {
        match self.register_channel::<T>()? {
            RegisterChannel::Product(p) => p.after_isometry(u),
            RegisterChannel::Dense(ch) => {
                if ch.d_in() != u.rows() {
                    return Err(ChannelError::InvalidParameter(format!(
                        "channel on {} dimensions, encoding into {}",
                        ch.d_in(),
                        u.rows()
                    )));
                }
                Ok(QuantumChannel::new(ch.kraus().iter().map(|e| e.matmul(u)).collect())?)
            }
        }
    }
}

/// Noise on an n-qubit register.
#[derive(Clone, Debug)]
pub enum RegisterChannel<T: Real> {
    Product(ProductChannel<T>),
    Dense(QuantumChannel<T>),
}

fn cast_terms<T: Real>(terms: &[(String, f64)]) -> Vec<(String, T)> {
    terms.iter().map(|(l, p)| (l.clone(), T::lit(*p))).collect()
}
