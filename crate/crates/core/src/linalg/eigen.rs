use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi::hermitian_jacobi;
use super::matrix::{c, ComplexMatrix, NumericPolicy};
use crate::error::{Error, Result};

/// Spectrum of a Hermitian matrix with eigenvalues in ascending order.
///
/// Column `i` of `eigenvectors` belongs to `eigenvalues[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i)
    }

    /// Eigenvalues sorted in decreasing order.
    pub fn eigenvalues_descending(&self) -> Vec<f64> {
        self.eigenvalues.iter().rev().copied().collect()
    }

    /// V·diag(λ)·V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        lambda.conjugate_by(&self.eigenvectors)
    }

    /// V·diag(f(λ))·V†
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_real_diagonal(&mapped).conjugate_by(&self.eigenvectors)
    }
}

pub fn hermitian_eigendecompose(m: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    hermitian_eigendecompose_with(m, &NumericPolicy::DEFAULT)
}

/// Eigendecomposition of a Hermitian matrix; the input is symmetrized before
/// decomposing. Degenerate eigenvalues keep the solver's internal order.
pub fn hermitian_eigendecompose_with(
    m: &ComplexMatrix,
    policy: &NumericPolicy,
) -> Result<HermitianEigenSystem> {
    let asym = m.max_asymmetry();
    if !(asym <= policy.validation) {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
            tolerance: policy.validation,
        });
    }
    if m.as_nalgebra().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::validation("matrix has non-finite entries"));
    }
    let sym = m.hermitian_part().into_nalgebra();
    let dim = sym.nrows();
    let (values, vecs) = hermitian_jacobi(sym);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |i, j| vecs[(i, order[j])]);
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_nalgebra_unchecked(vectors),
    })
}

/// Eigensystem of a real diagonal matrix, built without iteration.
pub(crate) fn diagonal_eigensystem(diag: &[f64]) -> HermitianEigenSystem {
    let dim = diag.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let vectors = DMatrix::from_fn(dim, dim, |i, j| if i == order[j] { c(1.0) } else { c(0.0) });
    HermitianEigenSystem {
        eigenvalues: order.iter().map(|&k| diag[k]).collect(),
        eigenvectors: ComplexMatrix::from_nalgebra_unchecked(vectors),
    }
}
