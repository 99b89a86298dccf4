//! Quantum channels in Kraus form and their feedback, Uhlmann, no-feedback
//! and Birkhoff presentations.

mod birkhoff;
mod schur_horn;

pub use birkhoff::{birkhoff_decompose, transition_matrix, BirkhoffDecomposition, MAX_BIRKHOFF_DIM};
pub use schur_horn::{unital_no_feedback_representation, NoFeedbackRepresentation};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{
    c, haar_unitary, hermitian_eigendecompose, polar_decompose, random_ginibre,
    random_probability_vector, ComplexMatrix, NumericPolicy, RandomStream,
};
use crate::states::DensityMatrix;

/// Tolerance for Σ Kᵢ†Kᵢ = I and Σ Mᵢ² = I.
pub const TRACE_PRESERVING_TOL: f64 = 1e-9;

/// Largest dimension accepted by [`sample_uhlmann_unital`]; the mixture has d! terms.
pub const MAX_UHLMANN_DIM: usize = 6;

/// Channel outputs are checked at the trace-preservation tolerance, since
/// that is the accuracy the Kraus operators themselves are held to.
const OUTPUT_POLICY: NumericPolicy = NumericPolicy {
    validation: TRACE_PRESERVING_TOL,
    construction: 1e-12,
};

fn check_square_family(ops: &[ComplexMatrix], what: &str) -> Result<usize> {
    let first = ops
        .first()
        .ok_or_else(|| Error::validation(format!("{what} needs at least one operator")))?;
    let dim = first.dim();
    for op in ops {
        check_dim(dim, op.dim())?;
    }
    Ok(dim)
}

/// Σᵢ Aᵢ†Aᵢ
fn sum_adjoint_products(ops: &[ComplexMatrix]) -> ComplexMatrix {
    let dim = ops[0].dim();
    ops.iter()
        .fold(ComplexMatrix::zeros(dim), |acc, k| &acc + &(&k.adjoint() * k))
}

fn conjugation_sum<'a>(ops: impl Iterator<Item = &'a ComplexMatrix>, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dim = rho.dim();
    let out = ops.fold(ComplexMatrix::zeros(dim), |acc, k| &acc + &rho.matrix().conjugate_by(k));
    DensityMatrix::new_with(out, &OUTPUT_POLICY)
}

/// A trace-preserving completely positive map Φ(ρ) = Σᵢ KᵢρKᵢ†.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = check_square_family(&ops, "Kraus channel")?;
        let defect = sum_adjoint_products(&ops).max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > TRACE_PRESERVING_TOL {
            return Err(Error::validation(format!(
                "Kraus operators are not trace preserving: |sum K^dag K - I|_max = {defect:e}"
            )));
        }
        Ok(KrausChannel { dim, ops })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(vec![ComplexMatrix::identity(dim)])
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Complete dephasing in the orthonormal basis given by the columns of `basis`.
    pub fn dephasing(basis: &ComplexMatrix) -> Result<Self> {
        let ops = (0..basis.dim())
            .map(|i| {
                let v = basis.column(i);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        Self::new(ops)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(self.dim, rho.dim())?;
        conjugation_sum(self.ops.iter(), rho)
    }

    /// Σᵢ KᵢKᵢ†
    pub fn image_of_identity(&self) -> ComplexMatrix {
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, k| &acc + &k.mul_adjoint(k))
    }

    /// ‖Σᵢ KᵢKᵢ† − I‖_max ≤ tol
    pub fn is_unital(&self, tol: f64) -> bool {
        self.image_of_identity().max_abs_diff(&ComplexMatrix::identity(self.dim)) <= tol
    }

    /// Polar-decomposes every Kraus operator Kᵢ = UᵢMᵢ.
    pub fn to_feedback_form(&self) -> Result<FeedbackForm> {
        let outcomes = self
            .ops
            .iter()
            .map(|k| {
                let p = polar_decompose(k)?;
                Ok(FeedbackOutcome {
                    measurement: p.positive_part,
                    feedback: p.unitary,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FeedbackForm::new(outcomes)
    }
}

pub fn apply(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

pub fn is_unital(ch: &KrausChannel, tol: f64) -> bool {
    ch.is_unital(tol)
}

pub fn to_feedback_form(ch: &KrausChannel) -> Result<FeedbackForm> {
    ch.to_feedback_form()
}

/// Random channel with `n_ops` Kraus operators: Ginibre matrices Gᵢ
/// normalised as Kᵢ = Gᵢ S^{-1/2} with S = Σ Gᵢ†Gᵢ.
pub fn random_kraus_channel(dim: usize, n_ops: usize, rng: &mut RandomStream) -> Result<KrausChannel> {
    if dim == 0 || n_ops == 0 {
        return Err(Error::validation("random channel needs dim >= 1 and at least one operator"));
    }
    let gs: Vec<ComplexMatrix> = (0..n_ops).map(|_| random_ginibre(dim, rng)).collect();
    let s = hermitian_eigendecompose(&sum_adjoint_products(&gs))?;
    let inv_sqrt = s.map_eigenvalues(|x| 1.0 / x.sqrt());
    KrausChannel::new(gs.iter().map(|g| g * &inv_sqrt).collect())
}

/// One measurement outcome: a positive operator Mᵢ followed by the unitary Uᵢ.
#[derive(Debug, Clone)]
pub struct FeedbackOutcome {
    pub measurement: ComplexMatrix,
    pub feedback: ComplexMatrix,
}

/// Measure-then-correct presentation Φ(ρ) = Σᵢ UᵢMᵢρMᵢUᵢ†.
#[derive(Debug, Clone)]
pub struct FeedbackForm {
    dim: usize,
    outcomes: Vec<FeedbackOutcome>,
}

impl FeedbackForm {
    pub fn new(outcomes: Vec<FeedbackOutcome>) -> Result<Self> {
        let ms: Vec<ComplexMatrix> = outcomes.iter().map(|o| o.measurement.clone()).collect();
        let dim = check_square_family(&ms, "feedback form")?;
        let tol = NumericPolicy::DEFAULT.validation;
        for (i, o) in outcomes.iter().enumerate() {
            check_dim(dim, o.feedback.dim())?;
            if !o.feedback.is_unitary(tol) {
                return Err(Error::validation(format!("feedback operator {i} is not unitary")));
            }
            let spectrum = hermitian_eigendecompose(&o.measurement)
                .map_err(|_| Error::validation(format!("measurement operator {i} is not Hermitian")))?;
            if spectrum.eigenvalues[0] < -tol {
                return Err(Error::validation(format!(
                    "measurement operator {i} has negative eigenvalue {:e}",
                    spectrum.eigenvalues[0]
                )));
            }
        }
        let defect = sum_adjoint_products(&ms).max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > TRACE_PRESERVING_TOL {
            return Err(Error::validation(format!(
                "measurement operators do not resolve the identity: |sum M^2 - I|_max = {defect:e}"
            )));
        }
        Ok(FeedbackForm { dim, outcomes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> &[FeedbackOutcome] {
        &self.outcomes
    }

    /// Kraus operators Kᵢ = UᵢMᵢ.
    pub fn kraus_ops(&self) -> Vec<ComplexMatrix> {
        self.outcomes.iter().map(|o| &o.feedback * &o.measurement).collect()
    }

    pub fn to_kraus(&self) -> Result<KrausChannel> {
        KrausChannel::new(self.kraus_ops())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(self.dim, rho.dim())?;
        conjugation_sum(self.kraus_ops().iter(), rho)
    }

    /// Outcome probabilities Tr(Mᵢ²ρ).
    pub fn outcome_probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        check_dim(self.dim, rho.dim())?;
        Ok(self
            .outcomes
            .iter()
            .map(|o| (&(&o.measurement * &o.measurement) * rho.matrix()).trace().re)
            .collect())
    }
}

/// Σᵢ pᵢ UᵢρUᵢ†
#[derive(Debug, Clone)]
pub struct UnitalMixture {
    weights: Vec<f64>,
    unitaries: Vec<ComplexMatrix>,
}

impl UnitalMixture {
    pub fn new(weights: Vec<f64>, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        if weights.len() != unitaries.len() {
            return Err(Error::validation(format!(
                "{} weights for {} unitaries",
                weights.len(),
                unitaries.len()
            )));
        }
        check_square_family(&unitaries, "unital mixture")?;
        if let Some(w) = weights.iter().find(|&&w| !(w >= 0.0)) {
            return Err(Error::validation(format!("negative mixture weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::validation(format!("mixture weights sum to {total}")));
        }
        if let Some(i) = unitaries.iter().position(|u| !u.is_unitary(NumericPolicy::DEFAULT.validation)) {
            return Err(Error::validation(format!("mixture element {i} is not unitary")));
        }
        Ok(UnitalMixture { weights, unitaries })
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].dim()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Kraus operators √pᵢ Uᵢ.
    pub fn to_kraus(&self) -> Result<KrausChannel> {
        let ops = self
            .weights
            .iter()
            .zip(&self.unitaries)
            .map(|(&p, u)| u.scale(c(p.sqrt())))
            .collect();
        KrausChannel::new(ops)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(self.dim(), rho.dim())?;
        let out = self
            .weights
            .iter()
            .zip(&self.unitaries)
            .fold(ComplexMatrix::zeros(rho.dim()), |acc, (&p, u)| {
                &acc + &rho.matrix().conjugate_by(u).scale(c(p))
            });
        DensityMatrix::new_with(out, &OUTPUT_POLICY)
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Random unital map: d! Haar unitaries mixed with flat-Dirichlet weights.
pub fn sample_uhlmann_unital(d: usize, rng: &mut RandomStream) -> Result<UnitalMixture> {
    if !(2..=MAX_UHLMANN_DIM).contains(&d) {
        return Err(Error::validation(format!(
            "Uhlmann sampler supports 2 <= d <= {MAX_UHLMANN_DIM}, got {d}"
        )));
    }
    let n = factorial(d);
    let weights = random_probability_vector(n, rng)?;
    let unitaries = (0..n).map(|_| haar_unitary(d, rng)).collect::<Result<Vec<_>>>()?;
    UnitalMixture::new(weights, unitaries)
}

/// Random feedback process: a rank-one projective measurement in a Haar
/// basis, followed by an independent Haar unitary per outcome.
pub fn sample_projective_feedback(d: usize, rng: &mut RandomStream) -> Result<FeedbackForm> {
    if d < 2 {
        return Err(Error::validation(format!("projective feedback needs d >= 2, got {d}")));
    }
    let basis = haar_unitary(d, rng)?;
    let outcomes = (0..d)
        .map(|i| {
            let v = basis.column(i);
            Ok(FeedbackOutcome {
                measurement: ComplexMatrix::outer(&v, &v),
                feedback: haar_unitary(d, rng)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FeedbackForm::new(outcomes)
}
