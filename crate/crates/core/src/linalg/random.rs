use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Exp1, StandardNormal};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Seeded, counter-based random source.
///
/// Substreams derived from the same seed with different task indices are
/// independent ChaCha streams, so parallel tasks can each own one without
/// changing the output of any other task.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream: u64,
    rng: ChaCha12Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomStream { seed, stream, rng }
    }

    /// Independent stream for task `task_index`; stream 0 is the root.
    pub fn substream(&self, task_index: u64) -> Self {
        Self::with_stream(self.seed, task_index.wrapping_add(1))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Complex Gaussian with E|z|² = 1.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.standard_normal() * s, self.standard_normal() * s)
    }

    pub fn exponential(&mut self) -> f64 {
        self.rng.sample(Exp1)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Haar-distributed unitary: the Q factor of a complex Ginibre matrix, with
/// R's diagonal fixed to be real positive.
pub fn haar_unitary(d: usize, rng: &mut RandomStream) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::validation("Haar unitary dimension must be at least 1"));
    }
    let z = DMatrix::from_fn(d, d, |_, _| rng.complex_normal());
    // Gram–Schmidt is QR with a positive real diagonal in R, so no phase
    // correction is needed afterwards. Orthogonalize twice for stability.
    let mut q = z;
    for j in 0..d {
        for _ in 0..2 {
            for k in 0..j {
                let overlap: Complex64 = (0..d).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
                for i in 0..d {
                    let qik = q[(i, k)];
                    q[(i, j)] -= overlap * qik;
                }
            }
        }
        let norm = q.column(j).norm();
        for i in 0..d {
            q[(i, j)] /= norm;
        }
    }
    Ok(ComplexMatrix::from_nalgebra_unchecked(q))
}

/// Uniform point on the probability simplex (flat Dirichlet).
pub fn random_probability_vector(n: usize, rng: &mut RandomStream) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::validation("probability vector length must be at least 1"));
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let x: Vec<f64> = (0..n).map(|_| rng.exponential()).collect();
    let total: f64 = x.iter().sum();
    Ok(x.into_iter().map(|v| v / total).collect())
}

/// (G + G†)/2 for a complex Ginibre G; used for test and check sampling.
pub fn random_hermitian(d: usize, rng: &mut RandomStream) -> ComplexMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| rng.complex_normal());
    ComplexMatrix::from_nalgebra_unchecked(g).hermitian_part()
}

/// Ginibre matrix G with iid complex normal entries.
pub fn random_ginibre(d: usize, rng: &mut RandomStream) -> ComplexMatrix {
    ComplexMatrix::from_nalgebra_unchecked(DMatrix::from_fn(d, d, |_, _| rng.complex_normal()))
}
