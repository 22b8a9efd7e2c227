//! Seeded random Hermitian / positive semidefinite pairs.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

fn ginibre(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut g = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            g[(i, j)] = Complex::new(re * s, im * s);
        }
    }
    g
}

/// `A = (G + G*)/2` and `B = H H*/n` with independent complex Ginibre `G`, `H`.
pub fn random_pair(n: usize, seed: u64) -> Result<(ComplexMatrix<f64>, ComplexMatrix<f64>)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("instance size must be at least 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(n, &mut rng);
    let h = ginibre(n, &mut rng);
    let a = (&g + &g.adjoint()).scale_real(0.5);
    let b = (&h * &h.adjoint()).scale_real(1.0 / n as f64).hermitian_part();
    Ok((a, b))
}

/// Both matrices positive semidefinite: `A = G G*/n`, `B = H H*/n`.
pub fn random_psd_pair(n: usize, seed: u64) -> Result<(ComplexMatrix<f64>, ComplexMatrix<f64>)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("instance size must be at least 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(n, &mut rng);
    let h = ginibre(n, &mut rng);
    let a = (&g * &g.adjoint()).scale_real(1.0 / n as f64).hermitian_part();
    let b = (&h * &h.adjoint()).scale_real(1.0 / n as f64).hermitian_part();
    Ok((a, b))
}
