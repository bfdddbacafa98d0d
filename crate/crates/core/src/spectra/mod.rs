//! Dense Hermitian linear algebra and the two-projection block reduction.

mod eigen;
mod haar;
mod matrix;
mod projections;

pub use eigen::{eig_sym, eigh, Eigen};
pub use haar::{haar_unitary, haar_unitary_with};
pub use matrix::{
    kron, unitarity_defect, HermitianMatrix, Matrix, UnitaryMatrix, HERMITIAN_TOLERANCE,
    UNITARY_TOLERANCE,
};
pub use projections::{
    block_diagonal_pair, p_block, q_block, two_projection_blocks, ProjectionPair,
    PROJECTION_TOLERANCE,
};

use crate::error::{check_unit_interval, Result};

/// The coefficient matrices `a1 = diag(1, -1)` and
/// `a2(s) = [[2s-1, 2√(s(1-s))], [2√(s(1-s)), 1-2s]]`.
pub fn coefficient_pair(s: f64) -> Result<(HermitianMatrix, HermitianMatrix)> {
    check_unit_interval("s", s)?;
    let off = 2.0 * (s * (1.0 - s)).sqrt();
    let a1 = HermitianMatrix::diagonal(&[1.0, -1.0]);
    let a2 = HermitianMatrix::from_real_rows(&[&[2.0 * s - 1.0, off], &[off, 1.0 - 2.0 * s]])?;
    Ok((a1, a2))
}

/// The 4×4 block `a1 ⊗ p + a2 ⊗ q` for one reducing block with parameter `t`,
/// written in the ordered basis `(e0⊗e0, e1⊗e0, e0⊗e1, e1⊗e1)`:
///
/// ```text
/// [ -1+2s+t   2√((1-s)s)   √((1-t)t)    0         ]
/// [ 2√((1-s)s) 1-2s-t      0            -√((1-t)t) ]
/// [ √((1-t)t)  0           1-t          0          ]
/// [ 0          -√((1-t)t)  0            -1+t       ]
/// ```
pub fn sum_matrix(s: f64, t: f64) -> Result<HermitianMatrix> {
    check_unit_interval("s", s)?;
    check_unit_interval("t", t)?;
    let u = 2.0 * ((1.0 - s) * s).sqrt();
    let v = ((1.0 - t) * t).sqrt();
    HermitianMatrix::from_real_rows(&[
        &[-1.0 + 2.0 * s + t, u, v, 0.0],
        &[u, 1.0 - 2.0 * s - t, 0.0, -v],
        &[v, 0.0, 1.0 - t, 0.0],
        &[0.0, -v, 0.0, -1.0 + t],
    ])
}

/// `a1 ⊗ p + a2 ⊗ q` in the plain Kronecker basis.
pub fn sum_matrix_kron(s: f64, t: f64) -> Result<HermitianMatrix> {
    let (a1, a2) = coefficient_pair(s)?;
    check_unit_interval("t", t)?;
    Ok(&a1.kron(&p_block(t)) + &a2.kron(&q_block()))
}

/// Commutator `[a, b]`.
pub fn commutator(a: &HermitianMatrix, b: &HermitianMatrix) -> Matrix {
    &(a.matrix() * b.matrix()) - &(b.matrix() * a.matrix())
}

#[cfg(test)]
pub(crate) fn permutation_matrix(perm: &[usize]) -> Matrix {
    use num_complex::Complex64;
    Matrix::from_fn(perm.len(), |i, j| {
        if perm[i] == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn coefficient_endpoints() {
        let (a1, a2) = coefficient_pair(1.0).unwrap();
        assert_eq!(a2.matrix(), a1.matrix());
        let (_, a2) = coefficient_pair(0.0).unwrap();
        assert!(a2
            .matrix()
            .max_abs_diff(HermitianMatrix::diagonal(&[-1.0, 1.0]).matrix())
            < 1e-15);
        let (_, a2) = coefficient_pair(0.5).unwrap();
        let swap = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert!(a2.matrix().max_abs_diff(swap.matrix()) < 1e-15);
    }

    #[test]
    fn coefficients_are_self_adjoint_unitaries() {
        for s in [0.0, 0.1, 0.25, 0.5, 0.9, 1.0] {
            let (a1, a2) = coefficient_pair(s).unwrap();
            for a in [&a1, &a2] {
                assert!(unitarity_defect(a.matrix()) < 1e-14);
                assert!(close(&eig_sym(a), &[1.0, -1.0], 1e-14));
            }
            let commutes = commutator(&a1, &a2).max_abs() < 1e-14;
            assert_eq!(commutes, s == 0.0 || s == 1.0, "s = {s}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(coefficient_pair(1.5).is_err());
        assert!(sum_matrix(0.5, -0.1).is_err());
    }

    #[test]
    fn displayed_matrix_is_permuted_kronecker_sum() {
        let perm = permutation_matrix(&[0, 2, 1, 3]);
        for &(s, t) in &[(0.3, 0.6), (0.5, 0.5), (0.9, 0.05)] {
            let shown = sum_matrix(s, t).unwrap();
            let kron_form = sum_matrix_kron(s, t).unwrap();
            let permuted = kron_form.matrix().conjugate_by(&perm);
            assert!(permuted.max_abs_diff(shown.matrix()) < 1e-15);
            assert!((shown.matrix()[(0, 0)].re - (-1.0 + 2.0 * s + t)).abs() < 1e-15);
            assert!(shown.trace().abs() < 1e-15);
        }
    }

    #[test]
    fn endpoint_spectra() {
        let ev = eig_sym(&sum_matrix(0.5, 0.0).unwrap());
        assert!(close(&ev, &[1.0, 1.0, -1.0, -1.0], 1e-12));
        // s = 1 commutes: eigenvalues 1 ± √t and -1 ± √t
        for t in [0.0, 0.16, 0.5, 1.0] {
            let r = f64::sqrt(t);
            let mut expected = vec![1.0 + r, 1.0 - r, -1.0 + r, -1.0 - r];
            expected.sort_by(|a, b| b.total_cmp(a));
            assert!(close(&eig_sym(&sum_matrix(1.0, t).unwrap()), &expected, 1e-12));
        }
    }
}
