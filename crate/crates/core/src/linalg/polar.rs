use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi::one_sided_jacobi;
use super::matrix::{c, ComplexMatrix};
use crate::error::Result;

/// k = unitary · positive_part, with positive_part = (k†k)^{1/2}.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub positive_part: ComplexMatrix,
}

/// Singular values at or below this fraction of the largest one are treated
/// as zero when completing the unitary factor.
const RANK_CUTOFF: f64 = 1e-12;

/// Left polar decomposition via the SVD k = V·Σ·W†: U = V·W†, M = W·Σ·W†.
/// The SVD is computed by one-sided Jacobi, which keeps tiny singular
/// values accurate to roughly machine precision times ‖k‖.
///
/// Columns of V belonging to zero singular values are not determined by k.
/// They are replaced by the null-space columns of W projected onto the
/// orthogonal complement of range(k) (falling back to the standard basis),
/// so that a positive semidefinite k yields U = I.
pub fn polar_decompose(k: &ComplexMatrix) -> Result<PolarFactors> {
    let dim = k.dim();
    let (kw, w) = one_sided_jacobi(k.as_nalgebra().clone());
    let w_adj = w.adjoint();
    let sigma: Vec<f64> = (0..dim).map(|j| kw.column(j).norm()).collect();
    // left singular vectors for the nonzero singular values
    let v = DMatrix::from_fn(dim, dim, |r, j| if sigma[j] > 0.0 { kw[(r, j)] / sigma[j] } else { c(0.0) });

    let scale = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = RANK_CUTOFF * scale.max(1.0);
    let (range, null): (Vec<usize>, Vec<usize>) = (0..dim).partition(|&i| sigma[i] > cutoff);

    let mut basis: Vec<Vec<Complex64>> = range.iter().map(|&i| v.column(i).iter().copied().collect()).collect();
    let mut completed = vec![Vec::new(); dim];
    for &i in &range {
        completed[i] = v.column(i).iter().copied().collect();
    }
    let candidates = null
        .iter()
        .map(|&i| w.column(i).iter().copied().collect::<Vec<_>>())
        .chain((0..dim).map(|e| unit_vector(dim, e)));
    let mut slots = null.iter();
    let mut next = slots.next();
    for cand in candidates {
        let Some(&slot) = next else { break };
        if let Some(q) = orthonormalize_against(&cand, &basis) {
            basis.push(q.clone());
            completed[slot] = q;
            next = slots.next();
        }
    }

    let v_full = DMatrix::from_fn(dim, dim, |r, col| completed[col][r]);
    let unitary = &v_full * &w_adj;
    let sigma_c = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, sigma.iter().map(|&x| c(x))));
    let positive = &w * sigma_c * &w_adj;
    let positive = ComplexMatrix::from_nalgebra_unchecked(positive).hermitian_part();

    Ok(PolarFactors {
        unitary: ComplexMatrix::from_nalgebra_unchecked(unitary),
        positive_part: positive,
    })
}

fn unit_vector(dim: usize, e: usize) -> Vec<Complex64> {
    (0..dim).map(|i| if i == e { c(1.0) } else { c(0.0) }).collect()
}

/// Gram–Schmidt step (applied twice for stability); None when the candidate
/// lies in the span of `basis`.
fn orthonormalize_against(cand: &[Complex64], basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    let mut x = cand.to_vec();
    for _ in 0..2 {
        for b in basis {
            let overlap: Complex64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= overlap * bi;
            }
        }
    }
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-6 {
        return None;
    }
    Some(x.into_iter().map(|z| z / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen::hermitian_eigendecompose;
    use crate::linalg::random::{haar_unitary, RandomStream};
    use rand::Rng;

    fn real(dim: usize, entries: &[f64]) -> ComplexMatrix {
        let e: Vec<Complex64> = entries.iter().map(|&x| c(x)).collect();
        ComplexMatrix::from_row_major(dim, &e).unwrap()
    }

    fn check(k: &ComplexMatrix) {
        let p = polar_decompose(k).unwrap();
        assert!(p.unitary.is_unitary(1e-10), "not unitary: {:?}", p.unitary);
        assert!(p.positive_part.is_hermitian(1e-12));
        let e = hermitian_eigendecompose(&p.positive_part).unwrap();
        assert!(e.eigenvalues[0] >= -1e-12);
        assert!((&p.unitary * &p.positive_part).max_abs_diff(k) <= 1e-9);
    }

    #[test]
    fn unitary_input() {
        let mut rng = RandomStream::new(3);
        let u = haar_unitary(3, &mut rng).unwrap();
        let p = polar_decompose(&u).unwrap();
        assert!(p.unitary.approx_eq(&u, 1e-12));
        assert!(p.positive_part.approx_eq(&ComplexMatrix::identity(3), 1e-12));
    }

    #[test]
    fn positive_input_gives_identity_unitary() {
        let m = real(3, &[2.0, 0.5, 0.0, 0.5, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let p = polar_decompose(&m).unwrap();
        assert!(p.unitary.approx_eq(&ComplexMatrix::identity(3), 1e-12));
        assert!(p.positive_part.approx_eq(&m, 1e-12));

        let proj = real(2, &[0.5, 0.5, 0.5, 0.5]);
        let p = polar_decompose(&proj).unwrap();
        assert!(p.unitary.approx_eq(&ComplexMatrix::identity(2), 1e-12));
    }

    #[test]
    fn nilpotent_example() {
        // k†k = diag(0,1), so M = diag(0,1) and U must swap the basis.
        let k = real(2, &[0.0, 1.0, 0.0, 0.0]);
        let p = polar_decompose(&k).unwrap();
        assert!(p.positive_part.approx_eq(&real(2, &[0.0, 0.0, 0.0, 1.0]), 1e-14));
        assert!(p.unitary.approx_eq(&real(2, &[0.0, 1.0, 1.0, 0.0]), 1e-14));
        check(&k);
    }

    #[test]
    fn zero_matrix() {
        let p = polar_decompose(&ComplexMatrix::zeros(3)).unwrap();
        assert!(p.unitary.approx_eq(&ComplexMatrix::identity(3), 1e-14));
        assert!(p.positive_part.max_abs() == 0.0);
    }

    #[test]
    fn random_round_trip_including_singular() {
        let mut rng = RandomStream::new(5);
        for trial in 0..1000 {
            let d = 2 + trial % 4;
            let rank = 1 + trial % d;
            // product of a d×rank and a rank×d Gaussian factor
            let a = DMatrix::from_fn(d, rank, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let b = DMatrix::from_fn(rank, d, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            check(&ComplexMatrix::from_nalgebra(a * b).unwrap());
        }
    }
}
