//! Dense Hermitian eigendecomposition.

use nalgebra::SymmetricEigen;

use super::matrix::{HermitianMatrix, Matrix};

/// Eigenvalues in nonincreasing order with matching orthonormal eigenvectors
/// (column `j` of `vectors` belongs to `values[j]`).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    /// `Q Λ Q^*`.
    pub fn reconstruct(&self) -> Matrix {
        let lambda = Matrix::from_real_diagonal(&self.values);
        &(&self.vectors * &lambda) * &self.vectors.adjoint()
    }
}

/// Full eigendecomposition.
pub fn eigh(h: &HermitianMatrix) -> Eigen {
    let eig = SymmetricEigen::new(h.matrix().to_nalgebra());
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    Eigen { values, vectors }
}

/// Eigenvalue sequence (nonincreasing, repeated by multiplicity).
pub fn eig_sym(h: &HermitianMatrix) -> Vec<f64> {
    eigh(h).values
}
