use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{linear_grid, log_grid, DEFAULT_BETA_MAX, DEFAULT_BETA_MIN, DEFAULT_BETA_POINTS};
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{gibbs_state, DensityMatrix, Hamiltonian};

pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    EnergyEntropyDiagram,
    BetaSweep,
    EntropyGainScatter,
    CrossingClassify,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::EnergyEntropyDiagram => "energy_entropy_diagram",
            ExperimentKind::BetaSweep => "beta_sweep",
            ExperimentKind::EntropyGainScatter => "entropy_gain_scatter",
            ExperimentKind::CrossingClassify => "crossing_classify",
        }
    }
}

/// Row-major matrix of `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Gibbs { gibbs_beta: f64 },
    Matrix(ComplexRows),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Diagonal(Vec<f64>),
    Matrix(ComplexRows),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "default_true")]
    pub log: bool,
}

fn default_true() -> bool {
    true
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

impl Default for BetaGrid {
    fn default() -> Self {
        BetaGrid {
            min: DEFAULT_BETA_MIN,
            max: DEFAULT_BETA_MAX,
            points: DEFAULT_BETA_POINTS,
            log: true,
        }
    }
}

impl BetaGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.log {
            log_grid(self.min, self.max, self.points)
        } else {
            linear_grid(self.min, self.max, self.points)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<StateSpec>,
    pub h: OperatorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_prime: Option<OperatorSpec>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_grid: Option<BetaGrid>,
    /// Inverse temperature of the thermal input for `entropy_gain_scatter`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    /// Optional extra channel, as Kraus operators, applied to the initial
    /// state of an energy-entropy diagram.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<Vec<ComplexRows>>,
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Validation(msg) => Error::Validation(format!("{path}: {msg}")),
        Error::Domain(msg) => Error::Domain(format!("{path}: {msg}")),
        Error::Invariant(_) => e,
        other => Error::Validation(format!("{path}: {other}")),
    }
}

fn complex_matrix(path: &str, rows: &ComplexRows) -> Result<ComplexMatrix> {
    let converted: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    if let Some((i, j)) = converted
        .iter()
        .enumerate()
        .find_map(|(i, r)| r.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()).map(|j| (i, j)))
    {
        return Err(Error::validation(format!("{path}[{i}][{j}]: entry is not finite")));
    }
    ComplexMatrix::from_rows(&converted).map_err(|e| at(path, e))
}

fn hamiltonian(path: &str, spec: &OperatorSpec) -> Result<Hamiltonian> {
    match spec {
        OperatorSpec::Diagonal(diag) => Hamiltonian::diagonal(diag),
        OperatorSpec::Matrix(rows) => Hamiltonian::new(complex_matrix(path, rows)?),
    }
    .map_err(|e| at(path, e))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::validation(format!("config: {e}")))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config is serializable")
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        hamiltonian("h", &self.h)
    }

    /// H′, defaulting to H.
    pub fn final_hamiltonian(&self) -> Result<Hamiltonian> {
        let hp = match &self.h_prime {
            Some(spec) => hamiltonian("h_prime", spec)?,
            None => return self.hamiltonian(),
        };
        if hp.dim() != self.hamiltonian()?.dim() {
            return Err(Error::validation(format!(
                "h_prime: dimension {} does not match h",
                hp.dim()
            )));
        }
        Ok(hp)
    }

    /// The initial state; a Gibbs spec is resolved against H.
    pub fn initial_state(&self) -> Result<Option<DensityMatrix>> {
        let h = self.hamiltonian()?;
        let rho = match &self.rho {
            None => return Ok(None),
            Some(StateSpec::Gibbs { gibbs_beta }) => gibbs_state(&h, *gibbs_beta).map_err(|e| at("rho.gibbs_beta", e))?,
            Some(StateSpec::Matrix(rows)) => {
                DensityMatrix::new(complex_matrix("rho", rows)?).map_err(|e| at("rho", e))?
            }
        };
        if rho.dim() != h.dim() {
            return Err(Error::validation(format!("rho: dimension {} does not match h ({})", rho.dim(), h.dim())));
        }
        Ok(Some(rho))
    }

    pub fn channel(&self) -> Result<Option<KrausChannel>> {
        let Some(ops) = &self.channel else {
            return Ok(None);
        };
        let ms = ops
            .iter()
            .enumerate()
            .map(|(i, rows)| complex_matrix(&format!("channel[{i}]"), rows))
            .collect::<Result<Vec<_>>>()?;
        KrausChannel::new(ms).map(Some).map_err(|e| at("channel", e))
    }

    pub fn beta_values(&self) -> Result<Vec<f64>> {
        self.beta_grid.unwrap_or_default().values().map_err(|e| at("beta_grid", e))
    }

    /// Checks fields that do not depend on the physics of the inputs.
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::validation("samples: must be at least 1"));
        }
        self.hamiltonian()?;
        self.final_hamiltonian()?;
        self.initial_state()?;
        self.channel()?;
        let grid = self.beta_values()?;
        let needs_positive = matches!(self.kind, ExperimentKind::BetaSweep | ExperimentKind::CrossingClassify);
        if needs_positive && grid[0] <= 0.0 {
            return Err(Error::validation("beta_grid.min: must be positive for this experiment"));
        }
        Ok(())
    }
}
