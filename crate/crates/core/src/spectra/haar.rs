//! Haar-distributed unitaries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{Matrix, UnitaryMatrix};

/// Draws a Haar-random unitary of size `dim`, deterministic in `seed`.
///
/// QR of a complex Ginibre matrix, with the phases of `R`'s diagonal pushed
/// into `Q` so that the law is exactly Haar.
pub fn haar_unitary(dim: usize, seed: u64) -> UnitaryMatrix {
    assert!(dim >= 1, "unitary dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_with(dim, &mut rng)
}

pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let a = Matrix::from_fn(dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = a.to_nalgebra().qr();
    let (q, r) = (qr.q(), qr.r());
    // A = QR = (QD)(D^*R) with D = diag(phase(R_kk)) makes the factor unique
    let q = Matrix::from_fn(dim, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { rjj / rjj.norm() };
        q[(i, j)] * phase
    });
    UnitaryMatrix::new(q).expect("Householder QR produced a non-unitary factor")
}
