//! Energy-gain bounds for unitary, unital and general operations, and the
//! free-energy comparisons for thermal inputs.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, ComplexMatrix};
use crate::states::{
    energy, equilibrium_free_energy, gibbs_state, von_neumann_entropy, DensityMatrix, Hamiltonian,
};

/// Absolute slack below zero still reported as a vanishing ergotropy.
const CLAMP_TOL: f64 = 1e-12;

/// Slack allowed when checking the ordering of bound endpoints.
const ORDER_TOL: f64 = 1e-10;

/// State distance under which the two thermal lower bounds coincide.
const COINCIDE_TOL: f64 = 1e-8;

/// Indices of `v` sorted by value, ties kept in index order.
fn stable_order(v: &[f64], descending: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    if descending {
        idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    } else {
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    }
    idx
}

fn clamp_nonnegative(value: f64, scale: f64, what: &str) -> Result<f64> {
    let tol = CLAMP_TOL * scale.max(1.0);
    if value >= 0.0 {
        Ok(value)
    } else if value >= -tol {
        Ok(0.0)
    } else {
        Err(Error::invariant(format!("{what} is negative: {value:e}")))
    }
}

fn energy_scale(h: &Hamiltonian) -> f64 {
    h.ground_energy().abs().max(h.top_energy().abs())
}

/// 𝛆′↑·𝐫↓, the lowest energy reachable under `h_prime` by a unitary.
pub fn passive_energy(rho: &DensityMatrix, h_prime: &Hamiltonian) -> Result<f64> {
    check_dim(h_prime.dim(), rho.dim())?;
    Ok(dot(h_prime.energies(), &rho.populations_descending()))
}

/// 𝛆′↑·𝐫↑, the highest energy reachable under `h_prime` by a unitary.
pub fn active_energy(rho: &DensityMatrix, h_prime: &Hamiltonian) -> Result<f64> {
    check_dim(h_prime.dim(), rho.dim())?;
    Ok(dot(h_prime.energies(), &rho.populations_ascending()))
}

/// Ergotropy 𝓔⁻ = Tr(Hρ) − 𝛆↑·𝐫↓.
pub fn ergotropy_minus(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    let value = energy(rho, h)? - passive_energy(rho, h)?;
    clamp_nonnegative(value, energy_scale(h), "ergotropy")
}

/// Charging capacity 𝓔⁺ = 𝛆↑·𝐫↑ − Tr(Hρ).
pub fn ergotropy_plus(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    let value = active_energy(rho, h)? - energy(rho, h)?;
    clamp_nonnegative(value, energy_scale(h), "charging capacity")
}

/// Range of ΔE reachable by unital operations that switch H to H′:
/// (𝛆′↑·𝐫↓ − Tr(Hρ), 𝛆′↑·𝐫↑ − Tr(Hρ)).
pub fn unital_bounds(rho: &DensityMatrix, h: &Hamiltonian, h_prime: &Hamiltonian) -> Result<(f64, f64)> {
    check_dim(h.dim(), h_prime.dim())?;
    let e = energy(rho, h)?;
    Ok((passive_energy(rho, h_prime)? - e, active_energy(rho, h_prime)? - e))
}

/// Range of ΔE reachable by any operation: (ε′₁ − Tr(Hρ), ε′_d − Tr(Hρ)).
pub fn nonunital_bounds(rho: &DensityMatrix, h: &Hamiltonian, h_prime: &Hamiltonian) -> Result<(f64, f64)> {
    check_dim(h.dim(), h_prime.dim())?;
    let e = energy(rho, h)?;
    Ok((h_prime.ground_energy() - e, h_prime.top_energy() - e))
}

/// Σᵢ |aᵢ⟩⟨bᵢ| for the columns of `a` and `b` taken in the given orders.
fn basis_map(a: &ComplexMatrix, a_order: &[usize], b: &ComplexMatrix, b_order: &[usize]) -> ComplexMatrix {
    let d = a.dim();
    let an = a.as_nalgebra();
    let bn = b.as_nalgebra();
    let m = DMatrix::from_fn(d, d, |row, col| {
        (0..d)
            .map(|i| an[(row, a_order[i])] * bn[(col, b_order[i])].conj())
            .sum()
    });
    ComplexMatrix::from_nalgebra_unchecked(m)
}

fn saturating_unitary(rho: &DensityMatrix, h_prime: &Hamiltonian, populations_descending: bool) -> Result<ComplexMatrix> {
    check_dim(h_prime.dim(), rho.dim())?;
    let levels = stable_order(h_prime.energies(), false);
    let pops = stable_order(&rho.spectrum().eigenvalues, populations_descending);
    Ok(basis_map(
        &h_prime.spectrum().eigenvectors,
        &levels,
        &rho.spectrum().eigenvectors,
        &pops,
    ))
}

/// U⁻ = Σᵢ |ε′ᵢ↑⟩⟨rᵢ↓|: sends the most populated eigenvector of ρ to the
/// ground state of H′, and so on, reaching 𝛆′↑·𝐫↓.
pub fn optimal_extraction_unitary(rho: &DensityMatrix, h_prime: &Hamiltonian) -> Result<ComplexMatrix> {
    saturating_unitary(rho, h_prime, true)
}

/// U⁺ = Σᵢ |ε′ᵢ↑⟩⟨rᵢ↑|, reaching 𝛆′↑·𝐫↑.
pub fn optimal_charging_unitary(rho: &DensityMatrix, h_prime: &Hamiltonian) -> Result<ComplexMatrix> {
    saturating_unitary(rho, h_prime, false)
}

/// ΔF_β = F′_β − F_β.
pub fn free_energy_gain(h: &Hamiltonian, h_prime: &Hamiltonian, beta: f64) -> Result<f64> {
    check_dim(h.dim(), h_prime.dim())?;
    Ok(equilibrium_free_energy(h_prime, beta)? - equilibrium_free_energy(h, beta)?)
}

fn require_positive_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("inverse temperature must be positive, got {beta}")))
    }
}

/// ΔF_β + [S(ρ_out) − S(ρ_β)]/β, the lower bound on ΔE for the thermal input
/// ρ_β that ends in `rho_out`.
pub fn second_law_rhs(rho_out: &DensityMatrix, h: &Hamiltonian, h_prime: &Hamiltonian, beta: f64) -> Result<f64> {
    require_positive_beta(beta)?;
    check_dim(h.dim(), rho_out.dim())?;
    let rho_beta = gibbs_state(h, beta)?;
    let ds = von_neumann_entropy(rho_out) - von_neumann_entropy(&rho_beta);
    Ok(free_energy_gain(h, h_prime, beta)? + ds / beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightnessChain {
    /// 𝛆′↑·𝐫↓_β − E(ρ_β)
    pub ergotropy_lower: f64,
    /// ΔF_β
    pub free_energy_lower: f64,
    /// Whether U⁻ρ_βU⁻† equals the final Gibbs state.
    pub coincide: bool,
}

/// Lower bounds on ΔE for the Gibbs input ρ_β, β > 0: the unital bound and
/// the (looser) free-energy bound.
pub fn tightness_chain(h: &Hamiltonian, h_prime: &Hamiltonian, beta: f64) -> Result<TightnessChain> {
    require_positive_beta(beta)?;
    let rho = gibbs_state(h, beta)?;
    let (ergotropy_lower, _) = unital_bounds(&rho, h, h_prime)?;
    let free_energy_lower = free_energy_gain(h, h_prime, beta)?;
    if ergotropy_lower < free_energy_lower - ORDER_TOL {
        return Err(Error::invariant(format!(
            "unital lower bound {ergotropy_lower} below free-energy bound {free_energy_lower} at beta {beta}"
        )));
    }
    let u = optimal_extraction_unitary(&rho, h_prime)?;
    let out = rho.matrix().conjugate_by(&u);
    let target = gibbs_state(h_prime, beta)?;
    Ok(TightnessChain {
        ergotropy_lower,
        free_energy_lower,
        coincide: out.max_abs_diff(target.matrix()) <= COINCIDE_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativeBetaChain {
    /// 𝛆′↑·𝐫↑_{−β} − E(ρ_{−β})
    pub ergotropy_upper: f64,
    /// ΔF_{−β}
    pub free_energy_upper: f64,
}

/// Upper bounds on ΔE for the population-inverted input ρ_{−β}, β > 0.
pub fn negative_beta_chain(h: &Hamiltonian, h_prime: &Hamiltonian, beta: f64) -> Result<NegativeBetaChain> {
    require_positive_beta(beta)?;
    let rho = gibbs_state(h, -beta)?;
    let (_, ergotropy_upper) = unital_bounds(&rho, h, h_prime)?;
    let free_energy_upper = free_energy_gain(h, h_prime, -beta)?;
    if ergotropy_upper > free_energy_upper + ORDER_TOL {
        return Err(Error::invariant(format!(
            "unital upper bound {ergotropy_upper} above free-energy bound {free_energy_upper} at beta -{beta}"
        )));
    }
    Ok(NegativeBetaChain {
        ergotropy_upper,
        free_energy_upper,
    })
}

/// Every bound for one (ρ, H, H′) instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub ergotropy_minus: f64,
    pub ergotropy_plus: f64,
    pub unital_lower: f64,
    pub unital_upper: f64,
    pub nonunital_lower: f64,
    pub nonunital_upper: f64,
    pub free_energy_gain: Option<f64>,
}

impl BoundsReport {
    pub fn new(rho: &DensityMatrix, h: &Hamiltonian, h_prime: &Hamiltonian, beta: Option<f64>) -> Result<Self> {
        let (unital_lower, unital_upper) = unital_bounds(rho, h, h_prime)?;
        let (nonunital_lower, nonunital_upper) = nonunital_bounds(rho, h, h_prime)?;
        let report = BoundsReport {
            ergotropy_minus: ergotropy_minus(rho, h)?,
            ergotropy_plus: ergotropy_plus(rho, h)?,
            unital_lower,
            unital_upper,
            nonunital_lower,
            nonunital_upper,
            free_energy_gain: beta.map(|b| free_energy_gain(h, h_prime, b)).transpose()?,
        };
        report.check_ordering()?;
        Ok(report)
    }

    /// nonunital_lower ≤ unital_lower ≤ unital_upper ≤ nonunital_upper.
    pub fn check_ordering(&self) -> Result<()> {
        let chain = [
            ("nonunital_lower", self.nonunital_lower),
            ("unital_lower", self.unital_lower),
            ("unital_upper", self.unital_upper),
            ("nonunital_upper", self.nonunital_upper),
        ];
        for w in chain.windows(2) {
            if w[0].1 > w[1].1 + ORDER_TOL {
                return Err(Error::invariant(format!(
                    "{} = {} exceeds {} = {}",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(())
    }

    pub fn contains_unital(&self, delta_e: f64, tol: f64) -> bool {
        delta_e >= self.unital_lower - tol && delta_e <= self.unital_upper + tol
    }

    pub fn contains_nonunital(&self, delta_e: f64, tol: f64) -> bool {
        delta_e >= self.nonunital_lower - tol && delta_e <= self.nonunital_upper + tol
    }
}

/// (x↑·y↓, x↑·y↑): the extreme values of x·Πy over permutations Π.
pub fn rearrangement_bounds(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    check_dim(x.len(), y.len())?;
    let xs = crate::linalg::sorted_ascending(x);
    let up = crate::linalg::sorted_ascending(y);
    let down = crate::linalg::sorted_descending(y);
    Ok((dot(&xs, &down), dot(&xs, &up)))
}

/// `points` values from `min` to `max` inclusive, geometrically spaced.
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max >= min && max.is_finite()) {
        return Err(Error::validation(format!("log grid needs 0 < min <= max, got [{min}, {max}]")));
    }
    let mut g: Vec<f64> = grid(min.ln(), max.ln(), points)?.into_iter().map(f64::exp).collect();
    g[0] = min;
    if points > 1 {
        g[points - 1] = max;
    }
    Ok(g)
}

/// `points` values from `min` to `max` inclusive, evenly spaced.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && max >= min) {
        return Err(Error::validation(format!("grid needs min <= max, got [{min}, {max}]")));
    }
    grid(min, max, points)
}

fn grid(a: f64, b: f64, points: usize) -> Result<Vec<f64>> {
    match points {
        0 => Err(Error::validation("grid needs at least one point")),
        1 => Ok(vec![a]),
        n => Ok((0..n)
            .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect()),
    }
}

pub const DEFAULT_BETA_MIN: f64 = 1e-2;
pub const DEFAULT_BETA_MAX: f64 = 50.0;
pub const DEFAULT_BETA_POINTS: usize = 200;

/// 200 log-spaced inverse temperatures over [0.01, 50].
pub fn default_beta_grid() -> Vec<f64> {
    log_grid(DEFAULT_BETA_MIN, DEFAULT_BETA_MAX, DEFAULT_BETA_POINTS).expect("valid default grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, haar_unitary, RandomStream};

    fn h_reference() -> Hamiltonian {
        Hamiltonian::diagonal(&[0.0, 0.0, 1.0]).unwrap()
    }

    fn rho_reference() -> DensityMatrix {
        DensityMatrix::from_diagonal(&[0.8, 0.03, 0.17]).unwrap()
    }

    fn rho_coherent() -> DensityMatrix {
        let e = [c(0.5), c(-0.4), c(-0.4), c(0.5)];
        DensityMatrix::new(ComplexMatrix::from_row_major(2, &e).unwrap()).unwrap()
    }

    fn post_energy(rho: &DensityMatrix, u: &ComplexMatrix, h: &Hamiltonian) -> f64 {
        energy(&DensityMatrix::new(rho.matrix().conjugate_by(u)).unwrap(), h).unwrap()
    }

    #[test]
    fn ergotropy_examples() {
        let h = h_reference();
        assert!((ergotropy_minus(&rho_reference(), &h).unwrap() - 0.14).abs() < 1e-12);
        assert!((ergotropy_plus(&rho_reference(), &h).unwrap() - 0.63).abs() < 1e-12);
        let passive = DensityMatrix::from_diagonal(&[0.8, 0.17, 0.03]).unwrap();
        assert!(ergotropy_minus(&passive, &h).unwrap() <= 1e-12);
        let h2 = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        assert!((ergotropy_minus(&rho_coherent(), &h2).unwrap() - 0.4).abs() < 1e-12);
        assert!((ergotropy_plus(&rho_coherent(), &h2).unwrap() - 0.4).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(ergotropy_plus(&mixed, &h).unwrap().abs() < 1e-15);
        assert!(ergotropy_minus(&rho_coherent(), &h).is_err());
    }

    #[test]
    fn unital_and_nonunital_examples() {
        let h = h_reference();
        let (lo, hi) = unital_bounds(&rho_reference(), &h, &h).unwrap();
        assert!((lo + 0.14).abs() < 1e-12 && (hi - 0.63).abs() < 1e-12);
        let (lo, hi) = nonunital_bounds(&rho_reference(), &h, &h).unwrap();
        assert!((lo + 0.17).abs() < 1e-12 && (hi - 0.83).abs() < 1e-12);

        let h3 = Hamiltonian::diagonal(&[0.3, -1.0, 2.5]).unwrap();
        let hp = Hamiltonian::diagonal(&[1.0, 0.2, 0.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        let (lo, hi) = unital_bounds(&mixed, &h3, &hp).unwrap();
        let want = 1.2 / 3.0 - 1.8 / 3.0;
        assert!((lo - want).abs() < 1e-15 && (hi - want).abs() < 1e-15);

        let ground = DensityMatrix::from_diagonal(&[1.0, 0.0, 0.0]).unwrap();
        let (lo, hi) = nonunital_bounds(&ground, &h, &h).unwrap();
        assert_eq!((lo, hi), (0.0, 1.0));
    }

    #[test]
    fn compressed_spectrum_bounds_at_beta_two() {
        let h = Hamiltonian::diagonal(&[0.0, 0.5, 1.0]).unwrap();
        let hp = Hamiltonian::diagonal(&[0.0, 0.1, 0.2]).unwrap();
        let rho = gibbs_state(&h, 2.0).unwrap();
        let (lo, hi) = unital_bounds(&rho, &h, &hp).unwrap();
        // reference values from an independent float evaluation
        assert!((lo + 0.16991584695822343).abs() < 1e-12);
        assert!((hi + 0.05487377043733513).abs() < 1e-12);
        let cold = gibbs_state(&h, 1e4).unwrap();
        let (lo, hi) = nonunital_bounds(&cold, &h, &hp).unwrap();
        assert!(lo.abs() < 1e-12 && (hi - 0.2).abs() < 1e-12);
    }

    #[test]
    fn saturating_unitary_examples() {
        let h = h_reference();
        let u = optimal_extraction_unitary(&rho_reference(), &h).unwrap();
        assert!(u.is_unitary(1e-12));
        assert!((post_energy(&rho_reference(), &u, &h) - 0.03).abs() < 1e-12);
        let u = optimal_charging_unitary(&rho_reference(), &h).unwrap();
        assert!((post_energy(&rho_reference(), &u, &h) - 0.8).abs() < 1e-12);

        let h5 = Hamiltonian::diagonal(&[0.0, 0.5, 1.0]).unwrap();
        let gibbs = gibbs_state(&h5, 1.7).unwrap();
        let u = optimal_extraction_unitary(&gibbs, &h5).unwrap();
        let e0 = energy(&gibbs, &h5).unwrap();
        assert!((post_energy(&gibbs, &u, &h5) - e0).abs() < 1e-10);

        let pure = DensityMatrix::pure(&[c(0.6), c(0.0), c(0.8)]).unwrap();
        let u = optimal_charging_unitary(&pure, &h5).unwrap();
        assert!((post_energy(&pure, &u, &h5) - 1.0).abs() < 1e-10);

        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        let u = optimal_charging_unitary(&mixed, &h5).unwrap();
        assert!((post_energy(&mixed, &u, &h5) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn saturation_on_random_instances() {
        let mut rng = RandomStream::new(31);
        for trial in 0..200 {
            let d = 2 + trial % 3;
            let rho = DensityMatrix::random(d, &mut rng).unwrap();
            let hp = Hamiltonian::new(crate::linalg::random_hermitian(d, &mut rng)).unwrap();
            let lo = passive_energy(&rho, &hp).unwrap();
            let hi = active_energy(&rho, &hp).unwrap();
            let um = optimal_extraction_unitary(&rho, &hp).unwrap();
            let up = optimal_charging_unitary(&rho, &hp).unwrap();
            assert!((post_energy(&rho, &um, &hp) - lo).abs() <= 1e-10);
            assert!((post_energy(&rho, &up, &hp) - hi).abs() <= 1e-10);
            let passive = DensityMatrix::new(rho.matrix().conjugate_by(&um)).unwrap();
            assert!(ergotropy_minus(&passive, &hp).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn unitary_sandwich() {
        let mut rng = RandomStream::new(37);
        for trial in 0..2000 {
            let d = 2 + trial % 3;
            let rho = DensityMatrix::random(d, &mut rng).unwrap();
            let hp = Hamiltonian::new(crate::linalg::random_hermitian(d, &mut rng)).unwrap();
            let u = haar_unitary(d, &mut rng).unwrap();
            let e = post_energy(&rho, &u, &hp);
            assert!(e >= passive_energy(&rho, &hp).unwrap() - 1e-9);
            assert!(e <= active_energy(&rho, &hp).unwrap() + 1e-9);
        }
    }

    #[test]
    fn free_energy_gain_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 0.5, 1.0]).unwrap();
        let hp = Hamiltonian::diagonal(&[0.0, 0.1, 0.2]).unwrap();
        for beta in [-1.0, 0.3, 4.0] {
            assert!(free_energy_gain(&h, &h, beta).unwrap().abs() < 1e-15);
        }
        let z = 1.0 + (-0.5f64).exp() + (-1.0f64).exp();
        let zp = 1.0 + (-0.1f64).exp() + (-0.2f64).exp();
        let df = free_energy_gain(&h, &hp, 1.0).unwrap();
        assert!((df + (zp / z).ln()).abs() < 1e-14);
        assert!((df + 0.3216731775875095).abs() < 1e-12);
        assert!(free_energy_gain(&h, &hp, 1e4).unwrap().abs() < 1e-3);
        assert!(matches!(free_energy_gain(&h, &hp, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn second_law_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 0.5, 1.0]).unwrap();
        let hp = Hamiltonian::diagonal(&[0.0, 0.0, 2.0]).unwrap();
        let beta = 2.0;
        let rho = gibbs_state(&h, beta).unwrap();
        let out = gibbs_state(&hp, beta).unwrap();
        let de = energy(&out, &hp).unwrap() - energy(&rho, &h).unwrap();
        assert!((second_law_rhs(&out, &h, &hp, beta).unwrap() - de).abs() < 1e-9);
        assert!(second_law_rhs(&rho, &h, &h, beta).unwrap().abs() < 1e-14);
        let pure = DensityMatrix::from_diagonal(&[0.0, 1.0, 0.0]).unwrap();
        let rhs = second_law_rhs(&pure, &h, &h, beta).unwrap();
        assert!((rhs + von_neumann_entropy(&rho) / beta).abs() < 1e-14);
        assert!(matches!(second_law_rhs(&rho, &h, &h, -1.0), Err(Error::Domain(_))));
        assert!(second_law_rhs(&rho, &h, &h, 0.0).is_err());
    }

    #[test]
    fn tightness_chain_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 0.5, 1.0]).unwrap();
        let chain = tightness_chain(&h, &h, 1.3).unwrap();
        assert!(chain.ergotropy_lower.abs() < 1e-14 && chain.free_energy_lower.abs() < 1e-14);
        assert!(chain.coincide);

        let hp = Hamiltonian::diagonal(&[0.0, 0.1, 0.2]).unwrap();
        for beta in default_beta_grid() {
            let chain = tightness_chain(&h, &hp, beta).unwrap();
            assert!(chain.ergotropy_lower >= chain.free_energy_lower - 1e-10);
            let gap = chain.ergotropy_lower - chain.free_energy_lower;
            assert_eq!(gap <= 1e-9, chain.coincide, "beta {beta} gap {gap}");
        }
        // H′ = 2H: U⁻ρ_β is ρ_{β/2}-like, not the H′ Gibbs state at β
        let h2 = Hamiltonian::diagonal(&[0.0, 1.0, 2.0]).unwrap();
        assert!(!tightness_chain(&h, &h2, 1.0).unwrap().coincide);
        assert!(matches!(tightness_chain(&h, &hp, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn negative_beta_chain_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        let chain = negative_beta_chain(&h, &h, 0.7).unwrap();
        assert!(chain.ergotropy_upper.abs() < 1e-14 && chain.free_energy_upper.abs() < 1e-14);
        let hp = Hamiltonian::diagonal(&[0.0, 2.0]).unwrap();
        let chain = negative_beta_chain(&h, &hp, 1.0).unwrap();
        assert!(chain.ergotropy_upper <= chain.free_energy_upper + 1e-10);
        assert!(negative_beta_chain(&h, &hp, -1.0).is_err());
    }

    #[test]
    fn report_ordering() {
        let h = h_reference();
        let report = BoundsReport::new(&rho_reference(), &h, &h, Some(1.0)).unwrap();
        assert_eq!(report.free_energy_gain, Some(0.0));
        assert!(report.contains_unital(0.0, 0.0));
        assert!(!report.contains_unital(-0.15, 1e-9));
        assert!(report.contains_nonunital(-0.15, 1e-9));
        let broken = BoundsReport { unital_lower: -0.5, ..report };
        assert!(matches!(broken.check_ordering(), Err(Error::Invariant(_))));
    }

    #[test]
    fn rearrangement_on_random_instances() {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let mut rng = RandomStream::new(41);
        for _ in 0..10_000 {
            let n = rng.random_range(1..8);
            let x: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
            let mut y: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
            let (lo, hi) = rearrangement_bounds(&x, &y).unwrap();
            y.shuffle(&mut rng);
            let v = dot(&crate::linalg::sorted_ascending(&x), &y);
            assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }

    #[test]
    fn grids() {
        let g = default_beta_grid();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[199], 50.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(linear_grid(-1.0, 1.0, 3).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!(log_grid(0.0, 1.0, 5).is_err());
        assert!(log_grid(1.0, 2.0, 0).is_err());
    }
}
