use itertools::Itertools;
use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{DensityMatrix, Hamiltonian};

/// Largest dimension for the exhaustive matching search (6! = 720 candidates).
pub const MAX_BIRKHOFF_DIM: usize = 6;

const STOCHASTIC_TOL: f64 = 1e-9;

/// B = Σₖ pₖ Πₖ, where permutation `π` stands for the matrix with ones at
/// (i, π[i]).
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffDecomposition {
    pub weights: Vec<f64>,
    pub permutations: Vec<Vec<usize>>,
}

impl BirkhoffDecomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn reconstruct(&self, dim: usize) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(dim, dim);
        for (w, perm) in self.weights.iter().zip(&self.permutations) {
            for (i, &j) in perm.iter().enumerate() {
                b[(i, j)] += w;
            }
        }
        b
    }
}

fn check_doubly_stochastic(b: &DMatrix<f64>) -> Result<()> {
    let d = b.nrows();
    if let Some(x) = b.iter().find(|&&x| !(x >= -STOCHASTIC_TOL)) {
        return Err(Error::validation(format!("matrix has negative entry {x}")));
    }
    let mut worst: Option<(&'static str, usize, f64)> = None;
    let sums = (0..d)
        .map(|i| ("row", i, b.row(i).sum()))
        .chain((0..d).map(|j| ("column", j, b.column(j).sum())));
    for (axis, index, sum) in sums {
        if worst.is_none_or(|(_, _, w)| (sum - 1.0).abs() > (w - 1.0).abs()) {
            worst = Some((axis, index, sum));
        }
    }
    match worst {
        Some((axis, index, sum)) if (sum - 1.0).abs() > STOCHASTIC_TOL => Err(Error::NotDoublyStochastic {
            axis,
            index,
            sum,
            tolerance: STOCHASTIC_TOL,
        }),
        _ => Ok(()),
    }
}

/// Greedy Birkhoff–von Neumann decomposition of a doubly stochastic matrix.
///
/// Each step takes the permutation whose smallest residual entry is largest
/// (lexicographically first on ties), subtracts it with that weight, and
/// stops once the residual mass is negligible. Every step zeroes at least
/// one entry, so there are at most d² terms.
pub fn birkhoff_decompose(b: &DMatrix<f64>) -> Result<BirkhoffDecomposition> {
    let d = b.nrows();
    if b.ncols() != d || d == 0 {
        return Err(Error::validation(format!(
            "Birkhoff decomposition needs a non-empty square matrix, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    if d > MAX_BIRKHOFF_DIM {
        return Err(Error::validation(format!(
            "Birkhoff decomposition supports d <= {MAX_BIRKHOFF_DIM}, got {d}"
        )));
    }
    check_doubly_stochastic(b)?;

    let candidates: Vec<Vec<usize>> = (0..d).permutations(d).collect();
    let mut residual = b.map(|x| x.max(0.0));
    let mut out = BirkhoffDecomposition {
        weights: Vec::new(),
        permutations: Vec::new(),
    };
    while out.len() < d * d {
        let mass = residual.sum() / d as f64;
        if mass <= 1e-14 {
            break;
        }
        let (perm, weight) = candidates
            .iter()
            .map(|p| (p, p.iter().enumerate().map(|(i, &j)| residual[(i, j)]).fold(f64::INFINITY, f64::min)))
            .fold((&candidates[0], f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        if weight <= 0.0 {
            break;
        }
        for (i, &j) in perm.iter().enumerate() {
            residual[(i, j)] -= weight;
        }
        out.weights.push(weight);
        out.permutations.push(perm.clone());
    }
    Ok(out)
}

/// Bᵢⱼ = |⟨ε′ᵢ|U|rⱼ⟩|², with both bases in ascending eigenvalue order.
/// Doubly stochastic for any unitary U.
pub fn transition_matrix(u: &ComplexMatrix, rho: &DensityMatrix, h_prime: &Hamiltonian) -> Result<DMatrix<f64>> {
    check_dim(rho.dim(), u.dim())?;
    check_dim(rho.dim(), h_prime.dim())?;
    let e = h_prime.spectrum().eigenvectors.as_nalgebra();
    let r = rho.spectrum().eigenvectors.as_nalgebra();
    let amplitudes = e.adjoint() * u.as_nalgebra() * r;
    Ok(amplitudes.map(|z| z.norm_sqr()))
}
