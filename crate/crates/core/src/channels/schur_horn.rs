//! Rebuilding the action of a unital map on one state as a projective
//! measurement followed by a single unitary, via the Schur–Horn theorem.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{KrausChannel, OUTPUT_POLICY};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{c, ComplexMatrix};
use crate::states::DensityMatrix;

/// Largest prefix-sum excess of `target` over `source` (both sorted
/// descending first); non-positive iff `source` majorizes `target`.
fn majorization_defect(source: &[f64], target: &[f64]) -> f64 {
    let a = crate::linalg::sorted_descending(source);
    let b = crate::linalg::sorted_descending(target);
    let (mut pa, mut pb, mut worst) = (0.0, 0.0, f64::NEG_INFINITY);
    for (x, y) in a.iter().zip(&b) {
        pa += x;
        pb += y;
        worst = f64::max(worst, pb - pa);
    }
    worst
}

/// Projective measurement {|ψᵢ⟩⟨ψᵢ|} and unitary U with
/// Σᵢ U PᵢρPᵢ U† equal to a prescribed output state.
#[derive(Debug, Clone)]
pub struct NoFeedbackRepresentation {
    pub projections: Vec<ComplexMatrix>,
    pub unitary: ComplexMatrix,
}

impl NoFeedbackRepresentation {
    /// Kraus operators U·Pᵢ.
    pub fn to_kraus(&self) -> Result<KrausChannel> {
        KrausChannel::new(self.projections.iter().map(|p| &self.unitary * p).collect())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(self.unitary.dim(), rho.dim())?;
        let dim = rho.dim();
        let dephased = self
            .projections
            .iter()
            .fold(ComplexMatrix::zeros(dim), |acc, p| &acc + &rho.matrix().conjugate_by(p));
        DensityMatrix::new_with(dephased.conjugate_by(&self.unitary), &OUTPUT_POLICY)
    }
}

/// Real orthogonal V such that X = V·diag(r)·Vᵀ has diagonal entries equal
/// to `targets` (as a multiset). Returns V and, for each row i of X, the
/// index into `targets` that landed on X_ii.
///
/// Targets are placed largest first. Each step rotates the two free diagonal
/// entries that most tightly bracket the target, pinning the target on one
/// of them; the free block of X stays diagonal throughout, so each step is a
/// plain T-transform on the free diagonal.
fn schur_horn_rotations(r: &[f64], targets: &[f64]) -> (DMatrix<f64>, Vec<usize>) {
    let d = r.len();
    let mut v = DMatrix::<f64>::identity(d, d);
    let mut diag = r.to_vec();
    let mut free: Vec<bool> = vec![true; d];
    let mut placed = vec![usize::MAX; d];

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| targets[b].total_cmp(&targets[a]));

    for &k in &order {
        let t = targets[k];
        // smallest free value ≥ t and largest free value ≤ t, lowest index on ties
        let mut above: Option<usize> = None;
        let mut below: Option<usize> = None;
        for i in (0..d).filter(|&i| free[i]) {
            if diag[i] >= t && above.is_none_or(|p| diag[i] < diag[p]) {
                above = Some(i);
            }
        }
        for i in (0..d).filter(|&i| free[i] && Some(i) != above) {
            if diag[i] <= t && below.is_none_or(|q| diag[i] > diag[q]) {
                below = Some(i);
            }
        }
        let pin = match (above, below) {
            (Some(p), Some(q)) if diag[p] > diag[q] && diag[p] != t => {
                let (ap, aq) = (diag[p], diag[q]);
                let c2 = ((t - aq) / (ap - aq)).clamp(0.0, 1.0);
                let (cs, sn) = (c2.sqrt(), (1.0 - c2).sqrt());
                // rows p, q of V ← G·V with G = [[c, s], [-s, c]]
                for j in 0..d {
                    let (vp, vq) = (v[(p, j)], v[(q, j)]);
                    v[(p, j)] = cs * vp + sn * vq;
                    v[(q, j)] = -sn * vp + cs * vq;
                }
                diag[p] = t;
                diag[q] = ap + aq - t;
                p
            }
            (Some(p), _) => p,
            // only reachable through sub-tolerance majorization slack
            (None, _) => (0..d)
                .filter(|&i| free[i])
                .max_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(b.cmp(&a)))
                .expect("a free index remains"),
        };
        free[pin] = false;
        placed[pin] = k;
    }
    (v, placed)
}

/// Projective measurement plus one unitary reproducing `ch_output` from
/// `rho`, for any output whose spectrum is majorized by that of `rho`.
///
/// With ρ = Σⱼ rⱼ|rⱼ⟩⟨rⱼ| and ch_output = Σₖ r′ₖ|r′ₖ⟩⟨r′ₖ|, the measurement
/// vectors are |ψᵢ⟩ = Σⱼ Vᵢⱼ|rⱼ⟩ for the V of a Hermitian matrix with
/// spectrum 𝐫 and diagonal 𝐫′, so that ⟨ψᵢ|ρ|ψᵢ⟩ = r′ᵢ; U then sends each
/// |ψᵢ⟩ to the matching |r′ᵢ⟩.
pub fn unital_no_feedback_representation(
    ch_output: &DensityMatrix,
    rho: &DensityMatrix,
) -> Result<NoFeedbackRepresentation> {
    check_dim(rho.dim(), ch_output.dim())?;
    let d = rho.dim();
    let r = rho.populations_ascending();
    let rp = ch_output.populations_ascending();
    let defect = majorization_defect(&r, &rp);
    if defect > 1e-9 {
        return Err(Error::domain(format!(
            "output spectrum is not majorized by the input spectrum (excess {defect:e}); \
             it is not the image of a unital map"
        )));
    }
    let (v, placed) = schur_horn_rotations(&r, &rp);

    let rho_vecs = rho.spectrum().eigenvectors.as_nalgebra();
    let out_vecs = ch_output.spectrum().eigenvectors.as_nalgebra();
    let psi: Vec<Vec<Complex64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|row| (0..d).map(|j| rho_vecs[(row, j)] * c(v[(i, j)])).sum())
                .collect()
        })
        .collect();
    let unitary = ComplexMatrix::from_nalgebra_unchecked(DMatrix::from_fn(d, d, |row, col| {
        (0..d)
            .map(|i| out_vecs[(row, placed[i])] * psi[i][col].conj())
            .sum()
    }));
    Ok(NoFeedbackRepresentation {
        projections: psi.iter().map(|p| ComplexMatrix::outer(p, p)).collect(),
        unitary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::sample_uhlmann_unital;
    use crate::linalg::RandomStream;

    #[test]
    fn identity_map() {
        let mut rng = RandomStream::new(1);
        let rho = DensityMatrix::random(3, &mut rng).unwrap();
        let rep = unital_no_feedback_representation(&rho, &rho).unwrap();
        assert!(rep.apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) <= 1e-12);
        // measurement vectors are the eigenvectors of ρ
        for (p, j) in rep.projections.iter().zip(0..3) {
            let e = rho.spectrum().eigenvector(j);
            assert!(p.approx_eq(&ComplexMatrix::outer(&e, &e), 1e-12));
        }
    }

    #[test]
    fn pure_to_mixed_qubit() {
        let rho = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let out = DensityMatrix::maximally_mixed(2).unwrap();
        let rep = unital_no_feedback_representation(&out, &rho).unwrap();
        assert!(rep.apply(&rho).unwrap().matrix().max_abs_diff(out.matrix()) <= 1e-10);
        for p in &rep.projections {
            // |⟨0|ψ⟩|² = |⟨1|ψ⟩|² = 1/2
            assert!((p.get(0, 0).re - 0.5).abs() < 1e-12);
            assert!((p.get(1, 1).re - 0.5).abs() < 1e-12);
        }
        assert!(rep.to_kraus().unwrap().is_unital(1e-12));
    }

    #[test]
    fn rejects_non_majorized_output() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let out = DensityMatrix::from_diagonal(&[0.9, 0.1]).unwrap();
        assert!(matches!(unital_no_feedback_representation(&out, &rho), Err(Error::Domain(_))));
    }

    #[test]
    fn reconstructs_uhlmann_images() {
        let mut rng = RandomStream::new(2);
        for trial in 0..300 {
            let d = 2 + trial % 3;
            let rho = DensityMatrix::random(d, &mut rng).unwrap();
            let out = sample_uhlmann_unital(d, &mut rng).unwrap().apply(&rho).unwrap();
            let rep = unital_no_feedback_representation(&out, &rho).unwrap();
            assert!(rep.unitary.is_unitary(1e-10));
            let err = rep.apply(&rho).unwrap().matrix().max_abs_diff(out.matrix());
            assert!(err <= 1e-8, "trial {trial}: error {err:e}");
            assert!(rep.to_kraus().unwrap().is_unital(1e-10));
        }
    }

    #[test]
    fn degenerate_spectra() {
        let rho = DensityMatrix::from_diagonal(&[0.5, 0.5, 0.0]).unwrap();
        let out = DensityMatrix::from_diagonal(&[0.25, 0.5, 0.25]).unwrap();
        let rep = unital_no_feedback_representation(&out, &rho).unwrap();
        assert!(rep.apply(&rho).unwrap().matrix().max_abs_diff(out.matrix()) <= 1e-12);
        let flat = DensityMatrix::maximally_mixed(3).unwrap();
        let rep = unital_no_feedback_representation(&flat, &flat).unwrap();
        assert!(rep.apply(&flat).unwrap().matrix().max_abs_diff(flat.matrix()) <= 1e-12);
    }
}
