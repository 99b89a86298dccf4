//! Density matrices, Hamiltonians, Gibbs states, entropies and free energies.
//!
//! Energies are in units of a reference quantum ε = 1, entropies in nats.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::ergotropy_minus;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{
    c, diagonal_eigensystem, hermitian_eigendecompose_with, random_ginibre, sorted_descending,
    ComplexMatrix, HermitianEigenSystem, NumericPolicy, RandomStream,
};

/// Relative tolerance used when deciding whether two energy levels coincide.
const DEGENERACY_TOL: f64 = 1e-10;

/// A validated quantum state with its spectrum cached.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    spectrum: HermitianEigenSystem,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(matrix, &NumericPolicy::DEFAULT)
    }

    /// Checks Hermiticity, unit trace and positivity, all at `policy.validation`.
    pub fn new_with(matrix: ComplexMatrix, policy: &NumericPolicy) -> Result<Self> {
        let spectrum = hermitian_eigendecompose_with(&matrix, policy)?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > policy.validation || trace.im.abs() > policy.validation {
            return Err(Error::validation(format!(
                "density matrix trace is {}{:+}i, expected 1",
                trace.re, trace.im
            )));
        }
        let min = spectrum.eigenvalues[0];
        if min < -policy.validation {
            return Err(Error::validation(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(DensityMatrix {
            matrix: matrix.hermitian_part(),
            spectrum,
        })
    }

    /// Diagonal state with the given populations.
    pub fn from_diagonal(populations: &[f64]) -> Result<Self> {
        if populations.is_empty() {
            return Err(Error::validation("density matrix dimension must be at least 1"));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > NumericPolicy::DEFAULT.validation {
            return Err(Error::validation(format!("populations sum to {total}, expected 1")));
        }
        if let Some(p) = populations.iter().find(|&&p| !(p >= -NumericPolicy::DEFAULT.validation)) {
            return Err(Error::validation(format!("negative population {p}")));
        }
        Ok(DensityMatrix {
            matrix: ComplexMatrix::from_real_diagonal(populations),
            spectrum: diagonal_eigensystem(populations),
        })
    }

    /// I/d
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation("density matrix dimension must be at least 1"));
        }
        Self::from_diagonal(&vec![1.0 / dim as f64; dim])
    }

    /// |ψ⟩⟨ψ| for a unit vector ψ.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NumericPolicy::DEFAULT.validation {
            return Err(Error::validation(format!("state vector has norm {norm}, expected 1")));
        }
        Self::new(ComplexMatrix::outer(ket, ket))
    }

    /// Σᵢ pᵢ|vᵢ⟩⟨vᵢ| for orthonormal columns vᵢ of `basis`.
    pub(crate) fn from_spectral_parts(populations: &[f64], basis: &ComplexMatrix) -> Self {
        let dim = populations.len();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| populations[a].total_cmp(&populations[b]));
        let vectors = ComplexMatrix::from_nalgebra_unchecked(DMatrix::from_fn(dim, dim, |i, j| {
            basis.get(i, order[j])
        }));
        let spectrum = HermitianEigenSystem {
            eigenvalues: order.iter().map(|&k| populations[k]).collect(),
            eigenvectors: vectors,
        };
        DensityMatrix {
            matrix: spectrum.reconstruct().hermitian_part(),
            spectrum,
        }
    }

    /// Hilbert–Schmidt random state G·G†/Tr(G·G†).
    pub fn random(dim: usize, rng: &mut RandomStream) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation("density matrix dimension must be at least 1"));
        }
        let g = random_ginibre(dim, rng);
        let gg = g.mul_adjoint(&g);
        let t = gg.trace().re;
        Self::new(gg.scale(c(1.0 / t)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &HermitianEigenSystem {
        &self.spectrum
    }

    /// Eigenvalues r↑, with numerical noise in [-tol, 0] clamped to 0.
    pub fn populations_ascending(&self) -> Vec<f64> {
        self.spectrum.eigenvalues.iter().map(|&r| r.max(0.0)).collect()
    }

    /// Eigenvalues r↓, clamped like [`populations_ascending`](Self::populations_ascending).
    pub fn populations_descending(&self) -> Vec<f64> {
        sorted_descending(&self.populations_ascending())
    }
}

/// A validated Hermitian operator with its spectrum cached.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
    spectrum: HermitianEigenSystem,
}

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(matrix, &NumericPolicy::DEFAULT)
    }

    pub fn new_with(matrix: ComplexMatrix, policy: &NumericPolicy) -> Result<Self> {
        let spectrum = hermitian_eigendecompose_with(&matrix, policy)?;
        Ok(Hamiltonian {
            matrix: matrix.hermitian_part(),
            spectrum,
        })
    }

    pub fn diagonal(energies: &[f64]) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::validation("Hamiltonian dimension must be at least 1"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::validation("Hamiltonian has non-finite energies"));
        }
        Ok(Hamiltonian {
            matrix: ComplexMatrix::from_real_diagonal(energies),
            spectrum: diagonal_eigensystem(energies),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &HermitianEigenSystem {
        &self.spectrum
    }

    /// ε↑
    pub fn energies(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn ground_energy(&self) -> f64 {
        self.spectrum.eigenvalues[0]
    }

    pub fn top_energy(&self) -> f64 {
        *self.spectrum.eigenvalues.last().expect("non-empty spectrum")
    }

    fn level_tol(&self) -> f64 {
        DEGENERACY_TOL * (1.0 + self.ground_energy().abs().max(self.top_energy().abs()))
    }

    /// Multiplicity of the lowest level.
    pub fn ground_degeneracy(&self) -> usize {
        let tol = self.level_tol();
        let e0 = self.ground_energy();
        self.energies().iter().take_while(|&&e| e - e0 <= tol).count()
    }

    /// Multiplicity of the highest level.
    pub fn top_degeneracy(&self) -> usize {
        let tol = self.level_tol();
        let top = self.top_energy();
        self.energies().iter().rev().take_while(|&&e| top - e <= tol).count()
    }

    /// Tr(H)/d
    pub fn mean_energy(&self) -> f64 {
        self.energies().iter().sum::<f64>() / self.dim() as f64
    }
}

/// Provenance of a point on the energy-entropy diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointTag {
    Initial,
    UnitalSample,
    FeedbackSample,
    GibbsCurve,
}

impl PointTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PointTag::Initial => "initial",
            PointTag::UnitalSample => "unital_sample",
            PointTag::FeedbackSample => "feedback_sample",
            PointTag::GibbsCurve => "gibbs_curve",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyEntropyPoint {
    pub energy: f64,
    pub entropy: f64,
    pub tag: PointTag,
}

impl EnergyEntropyPoint {
    pub fn of(rho: &DensityMatrix, h: &Hamiltonian, tag: PointTag) -> Result<Self> {
        Ok(EnergyEntropyPoint {
            energy: energy(rho, h)?,
            entropy: von_neumann_entropy(rho),
            tag,
        })
    }
}

/// Tr(H·ρ)
pub fn energy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    check_dim(h.dim(), rho.dim())?;
    let d = rho.dim();
    let hm = h.matrix().as_nalgebra();
    let rm = rho.matrix().as_nalgebra();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += hm[(i, j)] * rm[(j, i)];
        }
    }
    Ok(acc.re)
}

/// -Σ rᵢ ln rᵢ in nats, with 0·ln 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.populations_ascending())
}

pub(crate) fn shannon_entropy(p: &[f64]) -> f64 {
    let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum();
    s.max(0.0)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(format!("inverse temperature must be finite, got {beta}")))
    }
}

/// Boltzmann weights e^{-β(εᵢ - shift)} normalized to sum one, together with
/// ln Z. The shift is the extremal level that keeps every exponent ≤ 0.
pub(crate) fn boltzmann(energies: &[f64], beta: f64) -> (Vec<f64>, f64) {
    let shift = if beta >= 0.0 {
        energies.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        energies.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    let w: Vec<f64> = energies.iter().map(|&e| (-beta * (e - shift)).exp()).collect();
    let z: f64 = w.iter().sum();
    let log_z = z.ln() - beta * shift;
    (w.into_iter().map(|x| x / z).collect(), log_z)
}

/// Mean energy of the Gibbs state at `beta`, from the spectrum alone.
pub(crate) fn gibbs_energy(energies: &[f64], beta: f64) -> f64 {
    let (p, _) = boltzmann(energies, beta);
    energies.iter().zip(&p).map(|(e, q)| e * q).sum()
}

/// e^{-βH}/Tr e^{-βH}; β = 0 gives I/d exactly. Negative β is allowed.
pub fn gibbs_state(h: &Hamiltonian, beta: f64) -> Result<DensityMatrix> {
    check_beta(beta)?;
    let d = h.dim();
    let populations = if beta == 0.0 {
        vec![1.0 / d as f64; d]
    } else {
        boltzmann(h.energies(), beta).0
    };
    let rho = DensityMatrix::from_spectral_parts(&populations, &h.spectrum().eigenvectors);
    if beta == 0.0 {
        return Ok(DensityMatrix {
            matrix: ComplexMatrix::identity(d).scale(c(1.0 / d as f64)),
            spectrum: rho.spectrum,
        });
    }
    Ok(rho)
}

/// ln Tr e^{-βH}
pub fn log_partition(h: &Hamiltonian, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(boltzmann(h.energies(), beta).1)
}

fn check_nonzero_beta(beta: f64) -> Result<()> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Err(Error::domain("free energy is undefined at beta = 0"));
    }
    Ok(())
}

/// F_β = -β⁻¹ ln Z_β
pub fn equilibrium_free_energy(h: &Hamiltonian, beta: f64) -> Result<f64> {
    check_nonzero_beta(beta)?;
    Ok(-log_partition(h, beta)? / beta)
}

/// f_β(ρ, H) = Tr(Hρ) - S(ρ)/β
pub fn nonequilibrium_free_energy(rho: &DensityMatrix, h: &Hamiltonian, beta: f64) -> Result<f64> {
    check_nonzero_beta(beta)?;
    Ok(energy(rho, h)? - von_neumann_entropy(rho) / beta)
}

/// Eigenvalues of σ at or below this are treated as outside its support.
const SUPPORT_TOL: f64 = 1e-10;

/// D(ρ‖σ) = Tr[ρ(ln ρ - ln σ)].
///
/// Returns [`Error::InfiniteRelativeEntropy`] when ρ puts weight on the
/// kernel of σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(sigma.dim(), rho.dim())?;
    let neg_s = -von_neumann_entropy(rho);
    let spec = sigma.spectrum();
    let rm = rho.matrix().as_nalgebra();
    let mut cross = 0.0;
    let mut outside = 0.0;
    for (j, &s) in spec.eigenvalues.iter().enumerate() {
        let v = spec.eigenvectors.as_nalgebra().column(j);
        // ⟨s_j|ρ|s_j⟩
        let w = (v.adjoint() * rm * v)[(0, 0)].re;
        if s <= SUPPORT_TOL {
            outside += w;
        } else {
            cross += w * s.ln();
        }
    }
    if outside > SUPPORT_TOL {
        return Err(Error::InfiniteRelativeEntropy { weight: outside });
    }
    Ok(neg_s - cross)
}

/// True iff no cyclic unitary can extract more than `tol` from ρ.
pub fn is_passive(rho: &DensityMatrix, h: &Hamiltonian, tol: f64) -> Result<bool> {
    Ok(ergotropy_minus(rho, h)? < tol)
}

/// True iff `r` majorizes `rp`: every descending prefix sum of `r`
/// dominates that of `rp` up to 1e-10.
pub fn majorizes(r: &[f64], rp: &[f64]) -> Result<bool> {
    if r.len() != rp.len() {
        return Err(Error::validation(format!(
            "majorization needs equal lengths, got {} and {}",
            r.len(),
            rp.len()
        )));
    }
    let (sr, srp): (f64, f64) = (r.iter().sum(), rp.iter().sum());
    if (sr - srp).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "majorization needs equal totals, got {sr} and {srp}"
        )));
    }
    let a = sorted_descending(r);
    let b = sorted_descending(rp);
    let mut pa = 0.0;
    let mut pb = 0.0;
    for (x, y) in a.iter().zip(&b) {
        pa += x;
        pb += y;
        if pa < pb - 1e-10 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Inverse temperature β with Tr(H ρ_β) = `target_energy`.
///
/// Brackets β by doubling and then bisects; E(ρ_β) is decreasing in β.
pub fn invert_gibbs_energy(h: &Hamiltonian, target_energy: f64) -> Result<f64> {
    let energies = h.energies();
    let (lo_e, hi_e) = (h.ground_energy(), h.top_energy());
    if !(target_energy > lo_e && target_energy < hi_e) {
        return Err(Error::domain(format!(
            "target energy {target_energy} is outside the open interval ({lo_e}, {hi_e})"
        )));
    }
    let mean = h.mean_energy();
    if target_energy == mean {
        return Ok(0.0);
    }
    // positive β lowers the energy below the mean
    let sign = if target_energy < mean { 1.0 } else { -1.0 };
    let f = |b: f64| sign * (gibbs_energy(energies, sign * b) - target_energy);

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::domain(format!(
                "could not bracket an inverse temperature for energy {target_energy}"
            )));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    Ok(sign * beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho_reference() -> DensityMatrix {
        DensityMatrix::from_diagonal(&[0.8, 0.03, 0.17]).unwrap()
    }

    fn rho_coherent() -> DensityMatrix {
        let e = [c(0.5), c(-0.4), c(-0.4), c(0.5)];
        DensityMatrix::new(ComplexMatrix::from_row_major(2, &e).unwrap()).unwrap()
    }

    #[test]
    fn density_validation() {
        let bad_trace = ComplexMatrix::from_real_diagonal(&[0.5, 0.4]);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::Validation(_))));
        let negative = ComplexMatrix::from_real_diagonal(&[1.2, -0.2]);
        assert!(DensityMatrix::new(negative).is_err());
        let noisy = ComplexMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11]);
        let rho = DensityMatrix::new(noisy).unwrap();
        assert_eq!(rho.populations_ascending()[0], 0.0);
        let nonherm = ComplexMatrix::from_row_major(2, &[c(0.5), c(0.1), c(0.0), c(0.5)]).unwrap();
        assert!(matches!(DensityMatrix::new(nonherm), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn energy_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 0.0, 1.0]).unwrap();
        assert!((energy(&rho_reference(), &h).unwrap() - 0.17).abs() < 1e-15);

        let h3 = Hamiltonian::diagonal(&[0.3, -1.0, 2.5]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!((energy(&mixed, &h3).unwrap() - 1.8 / 3.0).abs() < 1e-15);

        let h2 = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        assert!((energy(&rho_coherent(), &h2).unwrap() - 0.5).abs() < 1e-15);

        assert!(matches!(energy(&rho_coherent(), &h), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn entropy_examples() {
        let pure = DensityMatrix::pure(&[c(0.6), Complex64::new(0.0, 0.8)]).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!((von_neumann_entropy(&mixed) - 3f64.ln()).abs() < 1e-15);
        let direct = -(0.8 * 0.8f64.ln() + 0.03 * 0.03f64.ln() + 0.17 * 0.17f64.ln());
        assert!((von_neumann_entropy(&rho_reference()) - direct).abs() < 1e-15);
        assert!((direct - 0.584944241099386).abs() < 1e-12);
    }

    #[test]
    fn gibbs_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 0.5, 1.0]).unwrap();
        let rho0 = gibbs_state(&h, 0.0).unwrap();
        assert!(rho0.matrix().approx_eq(&ComplexMatrix::identity(3).scale(c(1.0 / 3.0)), 0.0));

        let cold = gibbs_state(&h, 1e4).unwrap();
        assert!(cold.matrix().approx_eq(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]), 1e-10));

        let rho = gibbs_state(&h, 2.0).unwrap();
        let z = 1.0 + (-1.0f64).exp() + (-2.0f64).exp();
        let expected = [1.0 / z, (-1.0f64).exp() / z, (-2.0f64).exp() / z];
        for (i, p) in expected.iter().enumerate() {
            assert!((rho.matrix().get(i, i).re - p).abs() < 1e-15);
        }
        assert!((expected[0] - 0.6652).abs() < 1e-4 && (expected[2] - 0.0900).abs() < 1e-4);

        assert!(gibbs_state(&h, f64::NAN).is_err());
        assert!(gibbs_state(&h, f64::INFINITY).is_err());
    }

    #[test]
    fn gibbs_of_non_diagonal_hamiltonian_commutes() {
        let i = Complex64::i();
        let hm = ComplexMatrix::from_row_major(2, &[c(0.2), i * 0.3, -i * 0.3, c(-0.4)]).unwrap();
        let h = Hamiltonian::new(hm.clone()).unwrap();
        let rho = gibbs_state(&h, 1.3).unwrap();
        let comm = &(&hm * rho.matrix()) - &(rho.matrix() * &hm);
        assert!(comm.max_abs() < 1e-14);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn negative_beta_overflow_guard() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0, 500.0]).unwrap();
        let hot = gibbs_state(&h, -10.0).unwrap();
        assert!((hot.matrix().get(2, 2).re - 1.0).abs() < 1e-12);
        assert!(log_partition(&h, -10.0).unwrap().is_finite());
    }

    #[test]
    fn free_energy_examples() {
        let zero = Hamiltonian::diagonal(&[0.0; 4]).unwrap();
        assert!((equilibrium_free_energy(&zero, 2.0).unwrap() + 4f64.ln() / 2.0).abs() < 1e-15);

        let h = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        let f1 = equilibrium_free_energy(&h, 1.0).unwrap();
        assert!((f1 + (1.0 + (-1.0f64).exp()).ln()).abs() < 1e-15);
        assert!((f1 + 0.31326168751822286).abs() < 1e-12);
        let fm1 = equilibrium_free_energy(&h, -1.0).unwrap();
        assert!((fm1 - (1.0 + 1f64.exp()).ln()).abs() < 1e-14);
        assert!(matches!(equilibrium_free_energy(&h, 0.0), Err(Error::Domain(_))));

        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let f = nonequilibrium_free_energy(&mixed, &h, 1.0).unwrap();
        assert!((f - (0.5 - 2f64.ln())).abs() < 1e-15);
        assert!(matches!(nonequilibrium_free_energy(&mixed, &h, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn gibbs_free_energy_equality_and_ground_state() {
        let h = Hamiltonian::diagonal(&[0.0, 0.5, 1.0]).unwrap();
        for beta in [0.3, 1.0, 7.0] {
            let rho = gibbs_state(&h, beta).unwrap();
            let f = nonequilibrium_free_energy(&rho, &h, beta).unwrap();
            assert!((f - equilibrium_free_energy(&h, beta).unwrap()).abs() < 1e-10);
        }
        let ground = DensityMatrix::from_diagonal(&[1.0, 0.0, 0.0]).unwrap();
        for beta in [-2.0, 0.5, 3.0] {
            assert!(nonequilibrium_free_energy(&ground, &h, beta).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = rho_reference();
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((relative_entropy(&pure, &mixed).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(
            relative_entropy(&mixed, &pure),
            Err(Error::InfiniteRelativeEntropy { .. })
        ));
    }

    #[test]
    fn relative_entropy_nonnegative_on_random_pairs() {
        let mut rng = RandomStream::new(101);
        for trial in 0..1000 {
            let d = 2 + trial % 4;
            let rho = DensityMatrix::random(d, &mut rng).unwrap();
            let sigma = DensityMatrix::random(d, &mut rng).unwrap();
            assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn passivity_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 0.0, 1.0]).unwrap();
        assert!(is_passive(&gibbs_state(&h, 1.5).unwrap(), &h, 1e-10).unwrap());
        let passive = DensityMatrix::from_diagonal(&[0.8, 0.17, 0.03]).unwrap();
        assert!(is_passive(&passive, &h, 1e-10).unwrap());
        assert!(!is_passive(&rho_reference(), &h, 1e-10).unwrap());
    }

    #[test]
    fn majorization_examples() {
        let r = [0.5, 0.3, 0.2];
        assert!(majorizes(&r, &r).unwrap());
        assert!(majorizes(&[1.0, 0.0, 0.0], &[1.0 / 3.0; 3]).unwrap());
        assert!(!majorizes(&r, &[0.6, 0.2, 0.2]).unwrap());
        assert!(majorizes(&[0.2, 0.5, 0.3], &[0.35, 0.35, 0.3]).unwrap());
        assert!(majorizes(&r, &[0.5, 0.5]).is_err());
        assert!(majorizes(&r, &[0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn invert_gibbs_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        assert_eq!(invert_gibbs_energy(&h, 0.5).unwrap(), 0.0);
        // e^{-β}/(1+e^{-β}) = 1/4  ⇒  β = ln 3
        let beta = invert_gibbs_energy(&h, 0.25).unwrap();
        assert!((beta - 3f64.ln()).abs() < 1e-10);
        let beta = invert_gibbs_energy(&h, 0.75).unwrap();
        assert!((beta + 3f64.ln()).abs() < 1e-10);
        assert!(matches!(invert_gibbs_energy(&h, 0.0), Err(Error::Domain(_))));
        assert!(matches!(invert_gibbs_energy(&h, 1.2), Err(Error::Domain(_))));
        let flat = Hamiltonian::diagonal(&[0.3, 0.3]).unwrap();
        assert!(invert_gibbs_energy(&flat, 0.3).is_err());
    }

    #[test]
    fn invert_gibbs_round_trip() {
        let mut rng = RandomStream::new(7);
        for _ in 0..100 {
            let h = Hamiltonian::new(crate::linalg::random_hermitian(3, &mut rng)).unwrap();
            let u: f64 = rand::Rng::random_range(&mut rng, 0.001..0.999);
            let target = h.ground_energy() + u * (h.top_energy() - h.ground_energy());
            let beta = invert_gibbs_energy(&h, target).unwrap();
            let e = energy(&gibbs_state(&h, beta).unwrap(), &h).unwrap();
            assert!((e - target).abs() <= 1e-10, "target {target} got {e}");
        }
    }

    #[test]
    fn degeneracy_counts() {
        let h = Hamiltonian::diagonal(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(h.ground_degeneracy(), 2);
        assert_eq!(h.top_degeneracy(), 1);
    }
}
