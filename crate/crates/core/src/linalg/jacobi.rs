//! Cyclic Jacobi routines for small dense complex matrices.
//!
//! Both solvers reduce to the same 2×2 step: given a Hermitian block
//! `[[a, b], [conj(b), d]]`, find a unitary `G` with `G†·block·G` diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// Entries of the unitary G = diag(1, e^{-iφ})·[[c, s], [-s, c]] that
/// diagonalizes `[[a, b], [conj(b), d]]`, returned as (g_pp, g_pq, g_qp, g_qq).
fn rotation(a: f64, d: f64, b: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let beta = b.norm();
    let phase = b / beta;
    let zeta = (d - a) / (2.0 * beta);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = phase.conj();
    (
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        -e * s,
        e * c,
    )
}

/// M ← M·G restricted to columns p, q.
fn rotate_columns(m: &mut DMatrix<Complex64>, p: usize, q: usize, g: (Complex64, Complex64, Complex64, Complex64)) {
    let (gpp, gpq, gqp, gqq) = g;
    for k in 0..m.nrows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * gpp + mq * gqp;
        m[(k, q)] = mp * gpq + mq * gqq;
    }
}

/// M ← G†·M restricted to rows p, q.
fn rotate_rows(m: &mut DMatrix<Complex64>, p: usize, q: usize, g: (Complex64, Complex64, Complex64, Complex64)) {
    let (gpp, gpq, gqp, gqq) = g;
    for k in 0..m.ncols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = gpp.conj() * mp + gqp.conj() * mq;
        m[(q, k)] = gpq.conj() * mp + gqq.conj() * mq;
    }
}

/// Eigenvalues (unsorted) and eigenvectors (columns) of a Hermitian matrix.
pub(crate) fn hermitian_jacobi(mut a: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = a.nrows();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-16 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                if b.norm() <= 1e-300 {
                    continue;
                }
                let g = rotation(a[(p, p)].re, a[(q, q)].re, b);
                rotate_columns(&mut a, p, q, g);
                rotate_rows(&mut a, p, q, g);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                rotate_columns(&mut v, p, q, g);
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// One-sided (Hestenes) Jacobi SVD: returns (A·W, W) where the columns of
/// A·W are mutually orthogonal; their norms are the singular values and W
/// holds the right singular vectors.
pub(crate) fn one_sided_jacobi(mut a: DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = a.ncols();
    let mut w = DMatrix::<Complex64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = a.column(p).iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a.column(q).iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = a.column(p).iter().zip(a.column(q).iter()).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() <= 1e-300 {
                    continue;
                }
                rotated = true;
                let g = rotation(alpha, beta, gamma);
                rotate_columns(&mut a, p, q, g);
                rotate_columns(&mut w, p, q, g);
            }
        }
        if !rotated {
            break;
        }
    }
    (a, w)
}
