//! Dense complex linear algebra and random sampling primitives.

mod eigen;
mod jacobi;
mod matrix;
mod polar;
mod random;

pub use eigen::{hermitian_eigendecompose, hermitian_eigendecompose_with, HermitianEigenSystem};
pub(crate) use eigen::diagonal_eigensystem;
pub use matrix::{ComplexMatrix, NumericPolicy};
pub(crate) use matrix::c;
pub use polar::{polar_decompose, PolarFactors};
pub use random::{
    haar_unitary, random_ginibre, random_hermitian, random_probability_vector, RandomStream,
};

/// Dot product of two real vectors.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Copy of `v` sorted ascending.
pub fn sorted_ascending(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Copy of `v` sorted descending.
pub fn sorted_descending(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
