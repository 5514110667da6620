use qer_channels::{ChannelKind, ChannelSpec};
use qer_linalg::Matrix;
use qer_stabilizer::{code_library, encoding_isometry, generalized_adc_code, hamming_7_4, linear_adc_code, StabilizerCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ExperimentError;

/// Code under test. Library codes are addressed by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CodeSpec {
    FiveQubit,
    Steane,
    Shor,
    #[serde(rename = "leung_41")]
    Leung41,
    #[serde(rename = "gottesman_83")]
    Gottesman83,
    /// The `[2(M+1), M]` amplitude-damping family.
    GeneralizedAdc { m: usize },
    /// Code from an even-row parity-check matrix; Hamming(7,4) by default.
    LinearAdc {
        #[serde(default)]
        h: Option<Vec<Vec<u8>>>,
    },
    /// Haar-random `[n, k]` encoding drawn from the experiment seed.
    Random { n: usize, k: usize },
}

/// Encoding with its stabilizer description when there is one.
#[derive(Clone, Debug)]
pub struct CodeInstance {
    pub label: String,
    pub n: usize,
    pub k: usize,
    pub encoding: Matrix<f64>,
    pub stabilizer: Option<StabilizerCode>,
}

impl CodeSpec {
    pub fn build(&self, seed: u64) -> Result<CodeInstance, ExperimentError> {
        let code = match self {
            CodeSpec::FiveQubit => code_library("five_qubit")?,
            CodeSpec::Steane => code_library("steane")?,
            CodeSpec::Shor => code_library("shor")?,
            CodeSpec::Leung41 => code_library("leung_41")?,
            CodeSpec::Gottesman83 => code_library("gottesman_83")?,
            CodeSpec::GeneralizedAdc { m } => generalized_adc_code(*m)?,
            CodeSpec::LinearAdc { h } => linear_adc_code(h.as_deref().unwrap_or(&hamming_7_4()))?,
            CodeSpec::Random { n, k } => {
                if *k == 0 || k >= n || *n > 10 {
                    return Err(ExperimentError::Spec(format!("random [{n},{k}] code is out of range")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                return Ok(CodeInstance {
                    label: format!("random_{n}_{k}"),
                    n: *n,
                    k: *k,
                    encoding: qer_ops::random::isometry(1 << n, 1 << k, &mut rng),
                    stabilizer: None,
                });
            }
        };
        Ok(CodeInstance {
            label: code.name.clone(),
            n: code.n(),
            k: code.k(),
            encoding: encoding_isometry(&code)?,
            stabilizer: Some(code),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualSpec {
    Eigqer,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Gersgorin weights over the EigQER partition.
    Gersgorin,
    /// SVD weights over the EigQER partition.
    Svd,
    /// `λ_max` block weights over the EigQER partition, then iterative repair.
    Iterative,
    /// BlockEigQER (M = 2) subspace duals with iterated block repair.
    Block,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Optimal,
    GenericQec,
    MlPauli,
    Eigqer,
    BlockEigqer { m: usize },
    Orderqer {
        order: usize,
        #[serde(default = "default_residual")]
        residual: ResidualSpec,
    },
    AdcFamily,
    Leung,
    DualBounds { bound: BoundKind },
}

fn default_residual() -> ResidualSpec {
    ResidualSpec::Eigqer
}

impl Method {
    /// Column label used in tables.
    pub fn label(&self) -> String {
        match self {
            Method::Optimal => "optimal".into(),
            Method::GenericQec => "generic_qec".into(),
            Method::MlPauli => "ml_pauli".into(),
            Method::Eigqer => "eigqer".into(),
            Method::BlockEigqer { m } => format!("block_eigqer_m{m}"),
            Method::Orderqer { order, residual } => match residual {
                ResidualSpec::Eigqer => format!("orderqer_{order}"),
                ResidualSpec::None => format!("orderqer_{order}_only"),
            },
            Method::AdcFamily => "adc_family".into(),
            Method::Leung => "leung".into(),
            Method::DualBounds { bound } => match bound {
                BoundKind::Gersgorin => "dual_gersgorin".into(),
                BoundKind::Svd => "dual_svd".into(),
                BoundKind::Iterative => "dual_iterative".into(),
                BoundKind::Block => "dual_block".into(),
            },
        }
    }

    /// Whether the method produces an upper bound rather than a recovery.
    pub fn is_bound(&self) -> bool {
        matches!(self, Method::DualBounds { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleSpec {
    /// `ρ = I / d_S`.
    #[default]
    MaximallyMixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values(Vec<f64>),
    Spaced { from: f64, to: f64, points: usize, spacing: Spacing },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Values(v) => v.clone(),
            GridSpec::Spaced { from, to, points, spacing } => spaced(*from, *to, *points, *spacing),
        }
    }
}

pub fn spaced(from: f64, to: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    if points < 2 {
        return vec![from; points];
    }
    let t = |i: usize| i as f64 / (points - 1) as f64;
    match spacing {
        Spacing::Linear => (0..points).map(|i| from + (to - from) * t(i)).collect(),
        Spacing::Log => (0..points).map(|i| (from.ln() + (to.ln() - from.ln()) * t(i)).exp()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSpec {
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_range")]
    pub range: (f64, f64),
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_degree() -> usize {
    2
}

fn default_range() -> (f64, f64) {
    (0.005, 0.1)
}

fn default_points() -> usize {
    20
}

impl Default for FitSpec {
    fn default() -> Self {
        Self {
            degree: default_degree(),
            range: default_range(),
            points: default_points(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub code: CodeSpec,
    /// Noise model; its parameter is replaced by each grid value.
    pub channel: ChannelSpec,
    #[serde(default)]
    pub methods: Vec<Method>,
    /// Defaults to the fit grid: `fit.points` log-spaced values over `fit.range`.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub ensemble: EnsembleSpec,
    #[serde(default)]
    pub fit: Option<FitSpec>,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn grid_values(&self) -> Vec<f64> {
        match &self.grid {
            Some(g) => g.values(),
            None => {
                let f = self.fit.clone().unwrap_or_default();
                spaced(f.range.0, f.range.1, f.points, Spacing::Log)
            }
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.channel
            .validate()
            .map_err(|e| ExperimentError::Spec(format!("channel: {e}")))?;
        let grid = self.grid_values();
        if grid.is_empty() {
            return Err(ExperimentError::Spec("empty grid".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ExperimentError::Spec("grid must be strictly increasing".into()));
        }
        if matches!(self.channel.kind, ChannelKind::Pauli { .. }) && grid.len() > 1 {
            return Err(ExperimentError::Spec("Pauli channels have no sweep parameter".into()));
        }
        if self.channel.parameter_name().is_some() {
            for &x in &grid {
                self.channel
                    .with_parameter(x)
                    .map_err(|e| ExperimentError::Spec(format!("grid value {x}: {e}")))?;
            }
        }
        let code = self.code.build(self.seed)?;
        if code.n != self.channel.qubits {
            return Err(ExperimentError::Spec(format!(
                "channel on {} qubits for a {}-qubit code",
                self.channel.qubits, code.n
            )));
        }
        let (d_s, d_c) = (1usize << code.k, 1usize << code.n);
        for m in &self.methods {
            let needs_code = matches!(m, Method::GenericQec | Method::MlPauli | Method::AdcFamily | Method::Leung);
            if needs_code && code.stabilizer.is_none() {
                return Err(ExperimentError::Spec(format!("{} needs a stabilizer code", m.label())));
            }
            if *m == Method::Optimal
                && (d_s * d_c > qer_optimal::MAX_SDP_DIM || d_c > qer_optimal::MAX_CONSTRAINT_DIM)
            {
                return Err(ExperimentError::Spec(format!(
                    "optimal recovery refused for d_S = {d_s}, d_C = {d_c}"
                )));
            }
            if let Method::BlockEigqer { m: 0 } = m {
                return Err(ExperimentError::Spec("block size must be positive".into()));
            }
            if let Method::Orderqer { order, .. } = m {
                if !(1..=2).contains(order) {
                    return Err(ExperimentError::Spec("OrderQER order must be 1 or 2".into()));
                }
            }
        }
        Ok(())
    }
}
