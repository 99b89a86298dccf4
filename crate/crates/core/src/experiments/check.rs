use std::fmt::Write as _;

use rand::Rng;

use super::crossing_report;
use crate::bounds::{
    active_energy, default_beta_grid, ergotropy_minus, ergotropy_plus, log_grid, negative_beta_chain,
    passive_energy, rearrangement_bounds, second_law_rhs, tightness_chain, BoundsReport,
};
use crate::channels::{
    birkhoff_decompose, random_kraus_channel, sample_projective_feedback, sample_uhlmann_unital, transition_matrix,
    unital_no_feedback_representation,
};
use crate::error::Result;
use crate::linalg::{
    dot, haar_unitary, hermitian_eigendecompose, polar_decompose, random_ginibre, random_hermitian, sorted_ascending,
    ComplexMatrix, RandomStream,
};
use crate::states::{
    energy, equilibrium_free_energy, gibbs_state, invert_gibbs_energy, majorizes, nonequilibrium_free_energy,
    relative_entropy, von_neumann_entropy, DensityMatrix, Hamiltonian,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Result of the invariant suite. Rendering contains no timings, so equal
/// seeds give byte-identical logs.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLog {
    pub seed: u64,
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckLog {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn render(&self) -> String {
        let mut out = format!("ergokit check seed={}\n", self.seed);
        for o in &self.outcomes {
            let tag = if o.passed { "PASS" } else { "FAIL" };
            writeln!(out, "[{tag}] {}: {}", o.name, o.detail).unwrap();
        }
        writeln!(
            out,
            "summary: {} passed, {} failed",
            self.outcomes.len() - self.failures(),
            self.failures()
        )
        .unwrap();
        out
    }
}

type Check = fn(&mut RandomStream) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("eigen_round_trip", eigen_round_trip),
    ("polar_round_trip", polar_round_trip),
    ("haar_unitarity", haar_unitarity),
    ("free_energy_gaps", free_energy_gaps),
    ("maximum_entropy", maximum_entropy),
    ("reference_ergotropy", reference_ergotropy),
    ("unitary_sandwich", unitary_sandwich),
    ("rearrangement", rearrangement),
    ("unital_confinement", unital_confinement),
    ("feedback_confinement", feedback_confinement),
    ("feedback_form_fidelity", feedback_form_fidelity),
    ("schur_horn_reconstruction", schur_horn_reconstruction),
    ("birkhoff_reconstruction", birkhoff_reconstruction),
    ("tightness_chain", tightness_chain_grid),
    ("negative_beta_chain", negative_beta_chain_grid),
    ("second_law", second_law),
    ("gibbs_passivity", gibbs_passivity),
];

/// Runs every invariant check with its own substream of `seed`.
pub fn run_check(seed: u64) -> CheckLog {
    let root = RandomStream::new(seed);
    let outcomes = CHECKS
        .iter()
        .enumerate()
        .map(|(k, &(name, check))| {
            let mut rng = root.substream(k as u64);
            let (passed, detail) = check(&mut rng).unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckOutcome { name, passed, detail }
        })
        .collect();
    CheckLog { seed, outcomes }
}

fn reference_state() -> (DensityMatrix, Hamiltonian) {
    (
        DensityMatrix::from_diagonal(&[0.8, 0.03, 0.17]).expect("valid state"),
        Hamiltonian::diagonal(&[0.0, 0.0, 1.0]).expect("valid Hamiltonian"),
    )
}

fn random_hamiltonian(d: usize, rng: &mut RandomStream) -> Result<Hamiltonian> {
    Hamiltonian::new(random_hermitian(d, rng))
}

fn verdict(ok: bool, detail: String) -> Result<(bool, String)> {
    Ok((ok, detail))
}

fn eigen_round_trip(rng: &mut RandomStream) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for trial in 0..500 {
        let m = random_hermitian(2 + trial % 5, rng);
        let e = hermitian_eigendecompose(&m)?;
        worst = worst.max(e.reconstruct().max_abs_diff(&m)).max(e.eigenvectors.unitarity_defect());
    }
    verdict(worst <= 1e-9, format!("500 matrices, max error {worst:.3e}"))
}

fn polar_round_trip(rng: &mut RandomStream) -> Result<(bool, String)> {
    let (mut worst, mut min_eig): (f64, f64) = (0.0, f64::INFINITY);
    for trial in 0..500 {
        let d = 2 + trial % 4;
        let mut k = random_ginibre(d, rng);
        if trial % 2 == 0 {
            // rank-deficient: project out one direction
            let v = haar_unitary(d, rng)?.column(0);
            let p = &ComplexMatrix::identity(d) - &ComplexMatrix::outer(&v, &v);
            k = &k * &p;
        }
        let f = polar_decompose(&k)?;
        worst = worst
            .max((&f.unitary * &f.positive_part).max_abs_diff(&k))
            .max(f.unitary.unitarity_defect());
        min_eig = min_eig.min(hermitian_eigendecompose(&f.positive_part)?.eigenvalues[0]);
    }
    verdict(
        worst <= 1e-9 && min_eig >= -1e-12,
        format!("500 matrices, max error {worst:.3e}, min eigenvalue of M {min_eig:.3e}"),
    )
}

fn haar_unitarity(rng: &mut RandomStream) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for trial in 0..600 {
        worst = worst.max(haar_unitary(1 + trial % 6, rng)?.unitarity_defect());
    }
    verdict(worst <= 1e-12, format!("600 unitaries, max defect {worst:.3e}"))
}

fn free_energy_gaps(rng: &mut RandomStream) -> Result<(bool, String)> {
    let (mut min_gap, mut worst_identity, mut min_negative) = (f64::INFINITY, 0.0_f64, f64::INFINITY);
    for trial in 0..500 {
        let d = 2 + trial % 3;
        let rho = DensityMatrix::random(d, rng)?;
        let h = random_hamiltonian(d, rng)?;
        let beta = rng.random_range(0.1..5.0);
        let gap = nonequilibrium_free_energy(&rho, &h, beta)? - equilibrium_free_energy(&h, beta)?;
        let d_rel = relative_entropy(&rho, &gibbs_state(&h, beta)?)?;
        min_gap = min_gap.min(gap);
        worst_identity = worst_identity.max((gap - d_rel / beta).abs());
        let neg = equilibrium_free_energy(&h, -beta)? - nonequilibrium_free_energy(&rho, &h, -beta)?;
        min_negative = min_negative.min(neg);
    }
    verdict(
        min_gap >= -1e-10 && worst_identity <= 1e-9 && min_negative >= -1e-10,
        format!(
            "500 cases, min f-F {min_gap:.3e}, max |gap - D/beta| {worst_identity:.3e}, min F-f at -beta {min_negative:.3e}"
        ),
    )
}

fn maximum_entropy(rng: &mut RandomStream) -> Result<(bool, String)> {
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..300 {
        let d = 2 + trial % 3;
        let rho = DensityMatrix::random(d, rng)?;
        let h = random_hamiltonian(d, rng)?;
        let beta = invert_gibbs_energy(&h, energy(&rho, &h)?)?;
        worst = worst.max(von_neumann_entropy(&rho) - von_neumann_entropy(&gibbs_state(&h, beta)?));
    }
    verdict(worst <= 1e-9, format!("300 states, max S(rho) - S(gibbs) {worst:.3e}"))
}

fn reference_ergotropy(_: &mut RandomStream) -> Result<(bool, String)> {
    let (rho, h) = reference_state();
    let em = ergotropy_minus(&rho, &h)?;
    let ep = ergotropy_plus(&rho, &h)?;
    let passive = DensityMatrix::from_diagonal(&[0.8, 0.17, 0.03])?;
    let ep0 = ergotropy_minus(&passive, &h)?;
    verdict(
        (em - 0.14).abs() <= 1e-12 && (ep - 0.63).abs() <= 1e-12 && ep0 <= 1e-12,
        format!("ergotropy {em:.12}, charging {ep:.12}, passive ergotropy {ep0:.3e}"),
    )
}

fn unitary_sandwich(rng: &mut RandomStream) -> Result<(bool, String)> {
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..2000 {
        let d = 2 + trial % 3;
        let rho = DensityMatrix::random(d, rng)?;
        let hp = random_hamiltonian(d, rng)?;
        let u = haar_unitary(d, rng)?;
        let e = energy(&DensityMatrix::new(rho.matrix().conjugate_by(&u))?, &hp)?;
        worst = worst.max(passive_energy(&rho, &hp)? - e).max(e - active_energy(&rho, &hp)?);
    }
    verdict(worst <= 1e-9, format!("2000 unitaries, max excursion {worst:.3e}"))
}

fn rearrangement(rng: &mut RandomStream) -> Result<(bool, String)> {
    use rand::seq::SliceRandom;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..2000 {
        let n = rng.random_range(1..8);
        let x: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
        let mut y: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
        let (lo, hi) = rearrangement_bounds(&x, &y)?;
        y.shuffle(rng);
        let v = dot(&sorted_ascending(&x), &y);
        worst = worst.max(lo - v).max(v - hi);
    }
    verdict(worst <= 1e-12, format!("2000 permutations, max excursion {worst:.3e}"))
}

fn unital_confinement(rng: &mut RandomStream) -> Result<(bool, String)> {
    let (rho, h) = reference_state();
    let report = BoundsReport::new(&rho, &h, &h, None)?;
    let (e0, s0) = (energy(&rho, &h)?, von_neumann_entropy(&rho));
    let (mut outside, mut min_ds, mut not_majorized) = (0, f64::INFINITY, 0);
    for _ in 0..2000 {
        let out = sample_uhlmann_unital(3, rng)?.apply(&rho)?;
        if !report.contains_unital(energy(&out, &h)? - e0, 1e-9) {
            outside += 1;
        }
        min_ds = min_ds.min(von_neumann_entropy(&out) - s0);
        if !majorizes(&rho.populations_descending(), &out.populations_descending())? {
            not_majorized += 1;
        }
    }
    verdict(
        outside == 0 && min_ds >= -1e-9 && not_majorized == 0,
        format!("2000 maps, {outside} outside unital bounds, {not_majorized} not majorized, min dS {min_ds:.3e}"),
    )
}

fn feedback_confinement(rng: &mut RandomStream) -> Result<(bool, String)> {
    let (rho, h) = reference_state();
    let report = BoundsReport::new(&rho, &h, &h, None)?;
    let e0 = energy(&rho, &h)?;
    let (mut outside_nonunital, mut outside_unital) = (0, 0);
    for _ in 0..2000 {
        let de = energy(&sample_projective_feedback(3, rng)?.apply(&rho)?, &h)? - e0;
        if !report.contains_nonunital(de, 1e-9) {
            outside_nonunital += 1;
        }
        if de < report.unital_lower || de > report.unital_upper {
            outside_unital += 1;
        }
    }
    verdict(
        outside_nonunital == 0,
        format!("2000 maps, {outside_nonunital} outside nonunital bounds, {outside_unital} beyond unital bounds"),
    )
}

fn feedback_form_fidelity(rng: &mut RandomStream) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for trial in 0..300 {
        let d = 2 + trial % 3;
        let ch = random_kraus_channel(d, 1 + trial % 4, rng)?;
        let rho = DensityMatrix::random(d, rng)?;
        let direct = ch.apply(&rho)?;
        worst = worst.max(ch.to_feedback_form()?.apply(&rho)?.matrix().max_abs_diff(direct.matrix()));
    }
    verdict(worst <= 1e-9, format!("300 channels, max error {worst:.3e}"))
}

fn schur_horn_reconstruction(rng: &mut RandomStream) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for trial in 0..300 {
        let d = 2 + trial % 3;
        let rho = DensityMatrix::random(d, rng)?;
        let out = sample_uhlmann_unital(d, rng)?.apply(&rho)?;
        let rep = unital_no_feedback_representation(&out, &rho)?;
        worst = worst.max(rep.apply(&rho)?.matrix().max_abs_diff(out.matrix()));
    }
    verdict(worst <= 1e-8, format!("300 pairs, max error {worst:.3e}"))
}

fn birkhoff_reconstruction(rng: &mut RandomStream) -> Result<(bool, String)> {
    let (mut worst, mut most_terms, mut worst_energy) = (0.0_f64, 0, 0.0_f64);
    let mut too_many = false;
    for trial in 0..300 {
        let d = 2 + trial % 3;
        let rho = DensityMatrix::random(d, rng)?;
        let hp = random_hamiltonian(d, rng)?;
        let u = haar_unitary(d, rng)?;
        let b = transition_matrix(&u, &rho, &hp)?;
        let dec = birkhoff_decompose(&b)?;
        worst = worst.max((dec.reconstruct(d) - &b).abs().max());
        most_terms = most_terms.max(dec.len());
        too_many |= dec.len() > d * d;
        let r = nalgebra::DVector::from_vec(rho.spectrum().eigenvalues.clone());
        let predicted = dot(hp.energies(), (&b * r).as_slice());
        let e = energy(&DensityMatrix::new(rho.matrix().conjugate_by(&u))?, &hp)?;
        worst_energy = worst_energy.max((e - predicted).abs());
    }
    verdict(
        worst <= 1e-9 && !too_many && worst_energy <= 1e-10,
        format!("300 matrices, max error {worst:.3e}, most terms {most_terms}, max energy error {worst_energy:.3e}"),
    )
}

fn tightness_chain_grid(_: &mut RandomStream) -> Result<(bool, String)> {
    let h = Hamiltonian::diagonal(&[0.0, 0.5, 1.0])?;
    let hp = Hamiltonian::diagonal(&[0.0, 0.1, 0.2])?;
    let grid = default_beta_grid();
    let mut min_gap = f64::INFINITY;
    for &beta in &grid {
        let chain = tightness_chain(&h, &hp, beta)?;
        min_gap = min_gap.min(chain.ergotropy_lower - chain.free_energy_lower);
    }
    let crossings = crossing_report(&h, &hp, &grid)?.crossing_betas;
    verdict(
        min_gap >= -1e-10 && crossings.len() == 1,
        format!(
            "{} betas, min unital-minus-free-energy gap {min_gap:.3e}, crossings {:?}",
            grid.len(),
            crossings.iter().map(|b| format!("{b:.6}")).collect::<Vec<_>>()
        ),
    )
}

fn negative_beta_chain_grid(rng: &mut RandomStream) -> Result<(bool, String)> {
    let grid = log_grid(0.01, 50.0, 50)?;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let levels = |rng: &mut RandomStream| {
            let mut e: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0)).collect();
            e.sort_by(f64::total_cmp);
            Hamiltonian::diagonal(&e)
        };
        let h = levels(rng)?;
        let hp = levels(rng)?;
        for &beta in &grid {
            let chain = negative_beta_chain(&h, &hp, beta)?;
            worst = worst.max(chain.ergotropy_upper - chain.free_energy_upper);
        }
    }
    verdict(worst <= 1e-10, format!("50 pairs x 50 betas, max excess {worst:.3e}"))
}

fn second_law(rng: &mut RandomStream) -> Result<(bool, String)> {
    let h = Hamiltonian::diagonal(&[0.0, 0.5, 1.0])?;
    let hp = Hamiltonian::diagonal(&[0.0, 0.0, 2.0])?;
    let beta = 2.0;
    let rho = gibbs_state(&h, beta)?;
    let e0 = energy(&rho, &h)?;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let out = sample_projective_feedback(3, rng)?.apply(&rho)?;
        let de = energy(&out, &hp)? - e0;
        worst = worst.max(second_law_rhs(&out, &h, &hp, beta)? - de);
    }
    verdict(worst <= 1e-9, format!("1000 feedback maps, max violation {worst:.3e}"))
}

fn gibbs_passivity(rng: &mut RandomStream) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let h = random_hamiltonian(2 + trial % 4, rng)?;
        let beta = rng.random_range(0.01..10.0);
        worst = worst.max(ergotropy_minus(&gibbs_state(&h, beta)?, &h)?);
    }
    verdict(worst <= 1e-10, format!("100 Hamiltonians, max ergotropy {worst:.3e}"))
}
