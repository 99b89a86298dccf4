//! Seeded Monte-Carlo experiments producing CSV data files.
//!
//! Every sample owns a [`RandomStream`] substream keyed by its task index,
//! so results do not depend on how rayon schedules the work.

mod check;
mod config;
mod crossing;
mod diagram;
mod output;
mod scatter;
mod sweep;

pub use check::{run_check, CheckLog, CheckOutcome};
pub use config::{BetaGrid, ComplexRows, ExperimentConfig, ExperimentKind, OperatorSpec, StateSpec, DEFAULT_SAMPLES};
pub use crossing::{classify_crossing_pattern, crossing_report, CrossingPattern, CrossingReport};
pub use diagram::run_energy_entropy_diagram;
pub use output::{format_f64, ExperimentOutput, Row, SCHEMA_VERSION};
pub use scatter::run_entropy_gain_scatter;
pub use sweep::run_beta_sweep;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::channels::{sample_projective_feedback, sample_uhlmann_unital};
use crate::error::{Error, Result};
use crate::linalg::RandomStream;
use crate::states::DensityMatrix;

/// Which random channel family a sample is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// Uhlmann mixture of d! Haar unitaries.
    Unital,
    /// Rank-one projective measurement with Haar feedback unitaries.
    Feedback,
}

impl SampleKind {
    pub fn series(self) -> &'static str {
        match self {
            SampleKind::Unital => "unital_sample",
            SampleKind::Feedback => "feedback_sample",
        }
    }
}

/// Draws one channel of the given family and applies it to `rho`.
pub fn sample_output(kind: SampleKind, rho: &DensityMatrix, rng: &mut RandomStream) -> Result<DensityMatrix> {
    match kind {
        SampleKind::Unital => sample_uhlmann_unital(rho.dim(), rng)?.apply(rho),
        SampleKind::Feedback => sample_projective_feedback(rho.dim(), rng)?.apply(rho),
    }
}

/// `n` independent channel outputs; sample `i` uses substream `first_task + i`.
pub fn sample_outputs(
    kind: SampleKind,
    rho: &DensityMatrix,
    n: usize,
    root: &RandomStream,
    first_task: u64,
) -> Result<Vec<DensityMatrix>> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = root.substream(first_task + i as u64);
            sample_output(kind, rho, &mut rng)
        })
        .collect()
}

fn require_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.kind != kind {
        return Err(Error::validation(format!(
            "kind: expected {}, got {}",
            kind.as_str(),
            cfg.kind.as_str()
        )));
    }
    cfg.validate()
}

fn base_metadata(cfg: &ExperimentConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("kind".into(), json!(cfg.kind.as_str()));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("samples".into(), json!(cfg.samples));
    m.insert("config".into(), cfg.to_json());
    m.insert(
        "units".into(),
        json!({"energy": "epsilon", "entropy": "nats", "beta": "1/epsilon"}),
    );
    m
}

/// Inverse temperatures for a Gibbs curve over both signs, ordered from
/// the coldest positive β to the most negative one (energy increasing).
fn two_sided_betas(grid: &[f64]) -> Vec<f64> {
    let mut betas: Vec<f64> = grid.iter().rev().copied().collect();
    betas.push(0.0);
    betas.extend(grid.iter().map(|b| -b));
    betas
}

fn emission_check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invariant(what()))
    }
}

/// Tolerance applied when re-checking emitted samples against bounds.
const EMIT_TOL: f64 = 1e-9;
