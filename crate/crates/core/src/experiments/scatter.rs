use serde_json::{json, Value};

use super::diagram::check_sample;
use super::{
    base_metadata, emission_check, require_kind, sample_outputs, two_sided_betas, ExperimentConfig, ExperimentKind,
    ExperimentOutput, Row, SampleKind, StateSpec, EMIT_TOL,
};
use crate::bounds::{second_law_rhs, BoundsReport};
use crate::error::{Error, Result};
use crate::linalg::RandomStream;
use crate::states::{energy, gibbs_state, von_neumann_entropy};

fn scatter_beta(cfg: &ExperimentConfig) -> Result<f64> {
    let from_state = match &cfg.rho {
        None => None,
        Some(StateSpec::Gibbs { gibbs_beta }) => Some(*gibbs_beta),
        Some(StateSpec::Matrix(_)) => {
            return Err(Error::validation("rho: entropy_gain_scatter needs a thermal input, use {\"gibbs_beta\": b}"))
        }
    };
    let beta = match (cfg.beta, from_state) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::validation(format!("beta: {a} disagrees with rho.gibbs_beta {b}")))
        }
        (Some(b), _) | (None, Some(b)) => b,
        (None, None) => return Err(Error::validation("beta: required for entropy_gain_scatter")),
    };
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::validation(format!("beta: must be positive, got {beta}")));
    }
    Ok(beta)
}

/// (ΔE, ΔS) pairs for unital and feedback channels applied to ρ_β, with the
/// maximum-entropy boundary for H′ and the free-energy line
/// ΔE = ΔF_β + ΔS/β.
pub fn run_entropy_gain_scatter(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    require_kind(cfg, ExperimentKind::EntropyGainScatter)?;
    let beta = scatter_beta(cfg)?;
    let h = cfg.hamiltonian()?;
    let hp = cfg.final_hamiltonian()?;
    let rho = gibbs_state(&h, beta)?;
    let e0 = energy(&rho, &h)?;
    let s0 = von_neumann_entropy(&rho);
    let report = BoundsReport::new(&rho, &h, &hp, Some(beta))?;
    let df = report.free_energy_gain.expect("beta supplied");

    let root = RandomStream::new(cfg.seed);
    let n = cfg.samples;
    let mut rows = Vec::new();
    let (mut ds_min, mut ds_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (kind, first_task) in [(SampleKind::Unital, 0), (SampleKind::Feedback, n as u64)] {
        for (i, out) in sample_outputs(kind, &rho, n, &root, first_task)?.iter().enumerate() {
            let de = energy(out, &hp)? - e0;
            let ds = von_neumann_entropy(out) - s0;
            check_sample(kind, i, de, ds, &report)?;
            let rhs = second_law_rhs(out, &h, &hp, beta)?;
            emission_check(de >= rhs - EMIT_TOL, || {
                format!("{} {i}: energy gain {de} below second-law bound {rhs}", kind.series())
            })?;
            ds_min = ds_min.min(ds);
            ds_max = ds_max.max(ds);
            rows.push(Row::with_extra(kind.series(), de, ds, i));
        }
    }

    for gamma in two_sided_betas(&cfg.beta_values()?) {
        let g = gibbs_state(&hp, gamma)?;
        rows.push(Row::with_extra(
            "max_entropy_boundary",
            energy(&g, &hp)? - e0,
            von_neumann_entropy(&g) - s0,
            super::format_f64(gamma),
        ));
    }
    for ds in [ds_min.min(-s0), ds_max.max((hp.dim() as f64).ln() - s0)] {
        rows.push(Row::new("free_energy_line", df + ds / beta, ds));
    }

    let mut meta = base_metadata(cfg);
    meta.insert("beta".into(), json!(beta));
    meta.insert(
        "beta_note".into(),
        json!("beta is an inverse energy in units of 1/epsilon; a quoted value of 2 means beta = 2/epsilon"),
    );
    meta.insert("initial_energy".into(), json!(e0));
    meta.insert("initial_entropy".into(), json!(s0));
    meta.insert("delta_f".into(), json!(df));
    meta.insert("unital_bounds".into(), json!([report.unital_lower, report.unital_upper]));
    meta.insert("nonunital_bounds".into(), json!([report.nonunital_lower, report.nonunital_upper]));
    Ok(ExperimentOutput {
        metadata: Value::Object(meta),
        rows,
    })
}
