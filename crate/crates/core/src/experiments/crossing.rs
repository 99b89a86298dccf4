use serde::Serialize;
use serde_json::{json, Value};

use super::{base_metadata, require_kind, ExperimentConfig, ExperimentKind, ExperimentOutput, Row};
use crate::bounds::{free_energy_gain, nonunital_bounds};
use crate::error::Result;
use crate::states::{gibbs_state, von_neumann_entropy, Hamiltonian};

/// Shape of ΔF_β against the nonunital lower bound ε′₁ − E(ρ_β).
///
/// The trend is that of ΔF_β at small β; the count is the number of times
/// the two curves cross on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingPattern {
    NoCrossDecreasing,
    OneCrossDecreasing,
    NoCrossIncreasing,
    OneCrossIncreasing,
    TwoCrossings,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingReport {
    pub pattern: CrossingPattern,
    pub crossing_betas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Below this magnitude a grid value with no sign change counts as a
/// possible touch that the grid could not resolve.
const NEAR_CROSSING: f64 = 1e-8;

/// Bisection stops once the bracket is narrower than this.
const BETA_RESOLUTION: f64 = 1e-7;

/// ΔF_β − (ε′₁ − E(ρ_β))
fn gap(h: &Hamiltonian, h_prime: &Hamiltonian, beta: f64) -> Result<f64> {
    let rho = gibbs_state(h, beta)?;
    let (lower, _) = nonunital_bounds(&rho, h, h_prime)?;
    Ok(free_energy_gain(h, h_prime, beta)? - lower)
}

fn bisect(h: &Hamiltonian, h_prime: &Hamiltonian, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let positive_at_lo = f_lo > 0.0;
    while hi - lo > BETA_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if (gap(h, h_prime, mid)? > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sign changes of ΔF_β − (ε′₁ − E(ρ_β)) over an ascending positive grid,
/// each refined by bisection.
pub fn crossing_report(h: &Hamiltonian, h_prime: &Hamiltonian, grid: &[f64]) -> Result<CrossingReport> {
    let values = grid.iter().map(|&b| gap(h, h_prime, b)).collect::<Result<Vec<_>>>()?;
    let mut crossing_betas = Vec::new();
    for i in 1..grid.len() {
        if (values[i - 1] > 0.0) != (values[i] > 0.0) {
            crossing_betas.push(bisect(h, h_prime, grid[i - 1], grid[i], values[i - 1])?);
        }
    }

    let mut warnings = Vec::new();
    // interior local minima of |gap| that never change sign
    for i in 1..grid.len().saturating_sub(1) {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        let same_sign = (a > 0.0) == (b > 0.0) && (b > 0.0) == (c > 0.0);
        if same_sign && b.abs() < NEAR_CROSSING && b.abs() <= a.abs() && b.abs() <= c.abs() {
            warnings.push(format!("possible unresolved crossing near beta = {}", grid[i]));
        }
    }
    if crossing_betas.len() > 2 {
        warnings.push(format!("{} crossings found; reported as two_crossings", crossing_betas.len()));
    }

    // dΔF/dβ = β⁻²[S(ρ′_β) − S(ρ_β)]; a flat start counts as decreasing
    let beta0 = grid[0];
    let trend = von_neumann_entropy(&gibbs_state(h_prime, beta0)?) - von_neumann_entropy(&gibbs_state(h, beta0)?);
    let increasing = trend > 0.0;
    let pattern = match (crossing_betas.len(), increasing) {
        (0, false) => CrossingPattern::NoCrossDecreasing,
        (1, false) => CrossingPattern::OneCrossDecreasing,
        (0, true) => CrossingPattern::NoCrossIncreasing,
        (1, true) => CrossingPattern::OneCrossIncreasing,
        _ => CrossingPattern::TwoCrossings,
    };
    Ok(CrossingReport {
        pattern,
        crossing_betas,
        warning: if warnings.is_empty() { None } else { Some(warnings.join("; ")) },
    })
}

/// Classifies the crossing pattern for the configured H, H′ and β grid and
/// tabulates both curves.
pub fn classify_crossing_pattern(cfg: &ExperimentConfig) -> Result<(CrossingReport, ExperimentOutput)> {
    require_kind(cfg, ExperimentKind::CrossingClassify)?;
    let h = cfg.hamiltonian()?;
    let hp = cfg.final_hamiltonian()?;
    let grid = cfg.beta_values()?;
    let report = crossing_report(&h, &hp, &grid)?;

    let mut rows = Vec::new();
    for &beta in &grid {
        let rho = gibbs_state(&h, beta)?;
        let (lower, _) = nonunital_bounds(&rho, &h, &hp)?;
        let df = free_energy_gain(&h, &hp, beta)?;
        rows.push(Row::new("delta_f", beta, df));
        rows.push(Row::new("nonunital_lower", beta, lower));
        rows.push(Row::new("difference", beta, df - lower));
    }
    for &b in &report.crossing_betas {
        rows.push(Row::new("crossing", b, free_energy_gain(&h, &hp, b)?));
    }

    let mut meta = base_metadata(cfg);
    meta.insert("report".into(), serde_json::to_value(&report).expect("serializable"));
    meta.insert("asymptote".into(), json!(hp.ground_energy() - h.ground_energy()));
    Ok((
        report,
        ExperimentOutput {
            metadata: Value::Object(meta),
            rows,
        },
    ))
}
