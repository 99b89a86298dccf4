use serde_json::{json, Value};

use super::diagram::check_sample;
use super::{
    base_metadata, crossing_report, emission_check, require_kind, sample_outputs, ExperimentConfig, ExperimentKind,
    ExperimentOutput, Row, SampleKind,
};
use crate::bounds::BoundsReport;
use crate::error::Result;
use crate::linalg::RandomStream;
use crate::states::{energy, gibbs_state, von_neumann_entropy};

const CHAIN_TOL: f64 = 1e-10;

/// Bounds and sampled energy gains for thermal inputs ρ_β across a β grid.
///
/// Samples at grid index k use substreams starting at 2·N·k, unital first.
pub fn run_beta_sweep(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    require_kind(cfg, ExperimentKind::BetaSweep)?;
    let h = cfg.hamiltonian()?;
    let hp = cfg.final_hamiltonian()?;
    let grid = cfg.beta_values()?;
    let root = RandomStream::new(cfg.seed);
    let n = cfg.samples;

    let mut rows = Vec::new();
    for (k, &beta) in grid.iter().enumerate() {
        let rho = gibbs_state(&h, beta)?;
        let report = BoundsReport::new(&rho, &h, &hp, Some(beta))?;
        let df = report.free_energy_gain.expect("beta supplied");
        emission_check(report.unital_lower >= df - CHAIN_TOL, || {
            format!("beta {beta}: unital lower bound {} below free-energy gain {df}", report.unital_lower)
        })?;
        for (series, v) in [
            ("delta_f", df),
            ("unital_lower", report.unital_lower),
            ("unital_upper", report.unital_upper),
            ("nonunital_lower", report.nonunital_lower),
            ("nonunital_upper", report.nonunital_upper),
        ] {
            rows.push(Row::new(series, beta, v));
        }

        let e0 = energy(&rho, &h)?;
        let s0 = von_neumann_entropy(&rho);
        let first = 2 * (n as u64) * k as u64;
        for (kind, offset) in [(SampleKind::Unital, 0), (SampleKind::Feedback, n as u64)] {
            for (i, out) in sample_outputs(kind, &rho, n, &root, first + offset)?.iter().enumerate() {
                let de = energy(out, &hp)? - e0;
                check_sample(kind, i, de, von_neumann_entropy(out) - s0, &report)?;
                rows.push(Row::with_extra(kind.series(), beta, de, i));
            }
        }
    }

    let crossings = crossing_report(&h, &hp, &grid)?;
    let beta_max = *grid.last().expect("non-empty grid");
    let rho_max = gibbs_state(&h, beta_max)?;
    let at_max = BoundsReport::new(&rho_max, &h, &hp, Some(beta_max))?;

    let mut meta = base_metadata(cfg);
    meta.insert("asymptote".into(), json!(hp.ground_energy() - h.ground_energy()));
    meta.insert("beta_max".into(), json!(beta_max));
    meta.insert("delta_f_at_beta_max".into(), json!(at_max.free_energy_gain));
    meta.insert("nonunital_lower_at_beta_max".into(), json!(at_max.nonunital_lower));
    meta.insert("crossing_betas".into(), json!(crossings.crossing_betas));
    Ok(ExperimentOutput {
        metadata: Value::Object(meta),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(h_prime: &str, samples: usize, points: usize) -> ExperimentConfig {
        ExperimentConfig::from_json(&format!(
            r#"{{"kind": "beta_sweep", "h": [0, 0.5, 1], "h_prime": {h_prime}, "samples": {samples}, "seed": 3,
                "beta_grid": {{"min": 0.01, "max": 50, "points": {points}}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn compressed_spectrum_sweep() {
        let out = run_beta_sweep(&config("[0, 0.1, 0.2]", 20, 40)).unwrap();
        let df: Vec<f64> = out.series("delta_f").map(|r| r.y).collect();
        let lower: Vec<f64> = out.series("unital_lower").map(|r| r.y).collect();
        assert_eq!(df.len(), 40);
        for (l, f) in lower.iter().zip(&df) {
            assert!(*l >= f - 1e-10);
        }
        assert_eq!(out.series("unital_sample").count(), 800);
        let meta = &out.metadata;
        assert_eq!(meta["crossing_betas"].as_array().unwrap().len(), 1);
        let asym = meta["asymptote"].as_f64().unwrap();
        assert!((meta["delta_f_at_beta_max"].as_f64().unwrap() - asym).abs() <= 1e-3);
        assert!((meta["nonunital_lower_at_beta_max"].as_f64().unwrap() - asym).abs() <= 1e-3);
    }

    #[test]
    fn cyclic_sweep_is_flat() {
        let out = run_beta_sweep(&config("[0, 0.5, 1]", 5, 10)).unwrap();
        for r in out.series("delta_f").chain(out.series("unital_lower")) {
            assert!(r.y.abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let cfg = config("[0, 0.1, 0.2]", 30, 5);
        assert_eq!(run_beta_sweep(&cfg).unwrap().to_csv(), run_beta_sweep(&cfg).unwrap().to_csv());
    }
}
