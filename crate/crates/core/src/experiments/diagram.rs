use serde_json::{json, Value};

use super::{
    base_metadata, emission_check, require_kind, sample_outputs, two_sided_betas, ExperimentConfig,
    ExperimentKind, ExperimentOutput, Row, SampleKind, EMIT_TOL,
};
use crate::bounds::{active_energy, passive_energy, BoundsReport};
use crate::error::{Error, Result};
use crate::linalg::RandomStream;
use crate::states::{energy, gibbs_state, von_neumann_entropy, Hamiltonian};

/// Energy–entropy diagram for a cyclic drive (H′ = H): the initial point,
/// unital and feedback sample clouds, the Gibbs boundary and the
/// ergotropy, charging and equientropic lines.
pub fn run_energy_entropy_diagram(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    require_kind(cfg, ExperimentKind::EnergyEntropyDiagram)?;
    if cfg.h_prime.is_some() {
        return Err(Error::validation("h_prime: the energy-entropy diagram uses a cyclic drive, omit h_prime"));
    }
    let h = cfg.hamiltonian()?;
    let rho = cfg
        .initial_state()?
        .ok_or_else(|| Error::validation("rho: required for energy_entropy_diagram"))?;
    let d = h.dim();
    let max_entropy = (d as f64).ln();
    let e0 = energy(&rho, &h)?;
    let s0 = von_neumann_entropy(&rho);
    let report = BoundsReport::new(&rho, &h, &h, None)?;
    let e_passive = passive_energy(&rho, &h)?;
    let e_active = active_energy(&rho, &h)?;

    let mut rows = vec![Row::new("initial", e0, s0)];

    let root = RandomStream::new(cfg.seed);
    let n = cfg.samples;
    for (kind, first_task) in [(SampleKind::Unital, 0), (SampleKind::Feedback, n as u64)] {
        let outputs = sample_outputs(kind, &rho, n, &root, first_task)?;
        for (i, out) in outputs.iter().enumerate() {
            let e = energy(out, &h)?;
            let s = von_neumann_entropy(out);
            check_sample(kind, i, e - e0, s - s0, &report)?;
            emission_check(s <= max_entropy + EMIT_TOL, || {
                format!("{} {i}: entropy {s} exceeds ln d", kind.series())
            })?;
            rows.push(Row::with_extra(kind.series(), e, s, i));
        }
    }

    let channel_point = match cfg.channel()? {
        Some(ch) => {
            let out = ch.apply(&rho)?;
            let (e, s) = (energy(&out, &h)?, von_neumann_entropy(&out));
            let unital = ch.is_unital(1e-9);
            let kind = if unital { SampleKind::Unital } else { SampleKind::Feedback };
            check_sample(kind, 0, e - e0, s - s0, &report)?;
            rows.push(Row::with_extra("channel_output", e, s, if unital { "unital" } else { "nonunital" }));
            Some(json!({"energy": e, "entropy": s, "unital": unital}))
        }
        None => None,
    };

    for beta in two_sided_betas(&cfg.beta_values()?) {
        let g = gibbs_state(&h, beta)?;
        rows.push(Row::with_extra("gibbs_curve", energy(&g, &h)?, von_neumann_entropy(&g), super::format_f64(beta)));
    }
    rows.extend(boundary_rows(&h));

    for (series, x) in [("ergotropy_line", e_passive), ("charging_line", e_active)] {
        rows.push(Row::new(series, x, 0.0));
        rows.push(Row::new(series, x, max_entropy));
    }
    rows.push(Row::new("equientropic_line", h.ground_energy(), s0));
    rows.push(Row::new("equientropic_line", h.top_energy(), s0));

    let mut meta = base_metadata(cfg);
    meta.insert("dim".into(), json!(d));
    meta.insert("initial_energy".into(), json!(e0));
    meta.insert("initial_entropy".into(), json!(s0));
    meta.insert("max_entropy".into(), json!(max_entropy));
    meta.insert("ergotropy".into(), json!(report.ergotropy_minus));
    meta.insert("charging".into(), json!(report.ergotropy_plus));
    meta.insert("ergotropy_line".into(), json!(e_passive));
    meta.insert("charging_line".into(), json!(e_active));
    meta.insert("unital_bounds".into(), json!([report.unital_lower, report.unital_upper]));
    meta.insert("nonunital_bounds".into(), json!([report.nonunital_lower, report.nonunital_upper]));
    meta.insert(
        "gibbs_curve".into(),
        json!("beta over both signs; beta = +-inf limits are gibbs_endpoint rows, degenerate_border rows are not part of the curve"),
    );
    if let Some(p) = channel_point {
        meta.insert("channel_output".into(), p);
    }
    Ok(ExperimentOutput {
        metadata: Value::Object(meta),
        rows,
    })
}

pub(super) fn check_sample(kind: SampleKind, i: usize, de: f64, ds: f64, report: &BoundsReport) -> Result<()> {
    match kind {
        SampleKind::Unital => {
            emission_check(report.contains_unital(de, EMIT_TOL), || {
                format!(
                    "unital sample {i}: energy gain {de} outside [{}, {}]",
                    report.unital_lower, report.unital_upper
                )
            })?;
            emission_check(ds >= -EMIT_TOL, || format!("unital sample {i}: entropy decreased by {}", -ds))
        }
        SampleKind::Feedback => emission_check(report.contains_nonunital(de, EMIT_TOL), || {
            format!(
                "feedback sample {i}: energy gain {de} outside [{}, {}]",
                report.nonunital_lower, report.nonunital_upper
            )
        }),
    }
}

/// β → ±∞ limit points and, for degenerate extremal levels, the vertical
/// border of states mixed within that level.
fn boundary_rows(h: &Hamiltonian) -> Vec<Row> {
    let mut rows = Vec::new();
    let levels = [
        (h.ground_energy(), h.ground_degeneracy(), "+inf", "ground"),
        (h.top_energy(), h.top_degeneracy(), "-inf", "top"),
    ];
    for &(e, g, beta, _) in &levels {
        rows.push(Row::with_extra("gibbs_endpoint", e, (g as f64).ln(), beta));
    }
    for &(e, g, _, label) in &levels {
        if g > 1 {
            rows.push(Row::with_extra("degenerate_border", e, 0.0, label));
            rows.push(Row::with_extra("degenerate_border", e, (g as f64).ln(), label));
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::invert_gibbs_energy;

    fn config(rho: &str, h: &str, samples: usize) -> ExperimentConfig {
        ExperimentConfig::from_json(&format!(
            r#"{{"kind": "energy_entropy_diagram", "rho": {rho}, "h": {h}, "samples": {samples}, "seed": 5}}"#
        ))
        .unwrap()
    }

    const REFERENCE_RHO: &str = "[[[0.8,0],[0,0],[0,0]],[[0,0],[0.03,0],[0,0]],[[0,0],[0,0],[0.17,0]]]";

    #[test]
    fn unital_cloud_between_lines() {
        let out = run_energy_entropy_diagram(&config(REFERENCE_RHO, "[0,0,1]", 2000)).unwrap();
        assert_eq!(out.series("unital_sample").count(), 2000);
        assert_eq!(out.series("feedback_sample").count(), 2000);
        for r in out.series("unital_sample") {
            assert!(r.x >= 0.03 - 1e-9 && r.x <= 0.8 + 1e-9);
        }
        let lines: Vec<f64> = out.series("ergotropy_line").map(|r| r.x).collect();
        assert!((lines[0] - 0.03).abs() < 1e-15);
        // degenerate ground level gets a border at E = 0 up to ln 2
        let border: Vec<&Row> = out.series("degenerate_border").collect();
        assert_eq!(border.len(), 2);
        assert!((border[1].y - 2f64.ln()).abs() < 1e-15);
        assert_eq!(out.series("gibbs_curve").count(), 401);
    }

    #[test]
    fn ergotropy_line_through_passive_point() {
        let rho = "[[[0.8,0],[0,0],[0,0]],[[0,0],[0.17,0],[0,0]],[[0,0],[0,0],[0.03,0]]]";
        let out = run_energy_entropy_diagram(&config(rho, "[0,0,1]", 10)).unwrap();
        let initial = out.series("initial").next().unwrap();
        let line = out.series("ergotropy_line").next().unwrap();
        assert!((initial.x - line.x).abs() < 1e-12);
    }

    #[test]
    fn lines_meet_gibbs_curve_at_initial_entropy() {
        let cfg = config("[[[0.5,0],[-0.4,0]],[[-0.4,0],[0.5,0]]]", "[0,1]", 10);
        let out = run_energy_entropy_diagram(&cfg).unwrap();
        let h = cfg.hamiltonian().unwrap();
        let s0 = out.series("initial").next().unwrap().y;
        for series in ["ergotropy_line", "charging_line"] {
            let e = out.series(series).next().unwrap().x;
            let beta = invert_gibbs_energy(&h, e).unwrap();
            let s = von_neumann_entropy(&gibbs_state(&h, beta).unwrap());
            assert!((s - s0).abs() < 1e-6, "{series}: {s} vs {s0}");
        }
    }

    #[test]
    fn rejects_missing_state_and_h_prime() {
        let cfg = ExperimentConfig::from_json(r#"{"kind": "energy_entropy_diagram", "h": [0, 1]}"#).unwrap();
        assert!(run_energy_entropy_diagram(&cfg).unwrap_err().to_string().contains("rho"));
        let cfg = ExperimentConfig::from_json(
            r#"{"kind": "energy_entropy_diagram", "h": [0, 1], "h_prime": [0, 1], "rho": {"gibbs_beta": 1}}"#,
        )
        .unwrap();
        assert!(run_energy_entropy_diagram(&cfg).is_err());
    }

    #[test]
    fn channel_output_point() {
        let cfg = ExperimentConfig::from_json(&format!(
            r#"{{"kind": "energy_entropy_diagram", "rho": {REFERENCE_RHO}, "h": [0,0,1], "samples": 1,
                "channel": [[[[0,0],[0,0],[1,0]],[[0,0],[1,0],[0,0]],[[1,0],[0,0],[0,0]]]]}}"#
        ))
        .unwrap();
        let out = run_energy_entropy_diagram(&cfg).unwrap();
        let p = out.series("channel_output").next().unwrap();
        assert!((p.x - 0.8).abs() < 1e-12);
        assert_eq!(p.extra, "unital");
    }

    #[test]
    fn output_is_deterministic() {
        let cfg = config(REFERENCE_RHO, "[0,0,1]", 300);
        let a = run_energy_entropy_diagram(&cfg).unwrap().to_csv();
        let b = run_energy_entropy_diagram(&cfg).unwrap().to_csv();
        assert_eq!(a, b);
    }
}
