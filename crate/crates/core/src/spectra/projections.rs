//! Canonical form of a pair of half-trace projections.
//!
//! Two projections `p, q` of rank `d` in dimension `2d` split the space into
//! `d` two-dimensional subspaces reducing both. In a suitable orthonormal
//! basis each block is
//!
//! ```text
//! q_i = [[1, 0], [0, 0]]      p_i = [[t_i, √(t_i(1-t_i))], [√(t_i(1-t_i)), 1-t_i]]
//! ```
//!
//! The `t_i` are the eigenvalues of the compression of `p` to the range of `q`.

use num_complex::Complex64;

use super::eigen::eigh;
use super::matrix::{HermitianMatrix, Matrix, UnitaryMatrix};
use crate::error::{Error, Result};

pub const PROJECTION_TOLERANCE: f64 = 1e-10;

/// Threshold below which a block parameter is treated as 0 (resp. above 1 - it, as 1).
const DEGENERATE_BLOCK: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ProjectionPair {
    pub block_params: Vec<f64>,
    /// Columns `2i, 2i+1` span block `i`.
    pub basis: UnitaryMatrix,
}

impl ProjectionPair {
    pub fn dim(&self) -> usize {
        2 * self.block_params.len()
    }

    /// `(p, q)` rebuilt from the block form.
    pub fn reconstruct(&self) -> Result<(HermitianMatrix, HermitianMatrix)> {
        let (p, q) = block_diagonal_pair(&self.block_params)?;
        Ok((p.conjugate_by(&self.basis)?, q.conjugate_by(&self.basis)?))
    }
}

/// The printed block `p_i` for parameter `t`.
pub fn p_block(t: f64) -> HermitianMatrix {
    let off = (t * (1.0 - t)).max(0.0).sqrt();
    HermitianMatrix::diagonal(&[t, 1.0 - t]).with_offdiag(off)
}

/// The printed block `q_i = diag(1, 0)`.
pub fn q_block() -> HermitianMatrix {
    HermitianMatrix::diagonal(&[1.0, 0.0])
}

impl HermitianMatrix {
    fn with_offdiag(self, x: f64) -> HermitianMatrix {
        let mut m = self.into_matrix();
        m[(0, 1)] = Complex64::new(x, 0.0);
        m[(1, 0)] = Complex64::new(x, 0.0);
        HermitianMatrix::new(m).expect("real symmetric block")
    }
}

/// `(⊕ p_i, ⊕ q_i)` for the given parameters.
pub fn block_diagonal_pair(params: &[f64]) -> Result<(HermitianMatrix, HermitianMatrix)> {
    for &t in params {
        crate::error::check_unit_interval("t_i", t)?;
    }
    let ps: Vec<Matrix> = params.iter().map(|&t| p_block(t).into_matrix()).collect();
    let qs: Vec<Matrix> = params.iter().map(|_| q_block().into_matrix()).collect();
    Ok((
        HermitianMatrix::new(Matrix::direct_sum(&ps))?,
        HermitianMatrix::new(Matrix::direct_sum(&qs))?,
    ))
}

fn check_half_trace_projection(name: &str, m: &HermitianMatrix) -> Result<()> {
    let n = m.dim();
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::NotProjectionPair(format!(
            "{name} has odd or zero dimension {n}"
        )));
    }
    let defect = (m.matrix() * m.matrix()).max_abs_diff(m.matrix());
    if defect > PROJECTION_TOLERANCE {
        return Err(Error::NotProjectionPair(format!(
            "{name} is not idempotent: max |{name}^2 - {name}| = {defect:e}"
        )));
    }
    let normalized = m.trace() / n as f64;
    if (normalized - 0.5).abs() > PROJECTION_TOLERANCE {
        return Err(Error::NotProjectionPair(format!(
            "{name} has normalized trace {normalized}, expected 1/2"
        )));
    }
    Ok(())
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalized(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let n = dot(&v, &v).re.sqrt();
    for z in v.iter_mut() {
        *z /= n;
    }
    v
}

/// Orthonormal eigenvectors of the projection `m` above (range) or below (kernel) 1/2.
fn split_by_eigenvalue(m: &HermitianMatrix, upper: bool) -> Vec<Vec<Complex64>> {
    let e = eigh(m);
    (0..m.dim())
        .filter(|&j| (e.values[j] > 0.5) == upper)
        .map(|j| e.vectors.column(j))
        .collect()
}

/// Compression `B^* m B` of `m` to the span of the orthonormal columns `basis`.
fn compress(m: &Matrix, basis: &[Vec<Complex64>]) -> Result<HermitianMatrix> {
    let k = basis.len();
    let images: Vec<Vec<Complex64>> = basis.iter().map(|b| m.apply(b)).collect();
    HermitianMatrix::new(Matrix::from_fn(k, |i, j| dot(&basis[i], &images[j])))
}

fn lift(basis: &[Vec<Complex64>], coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = basis[0].len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (b, c) in basis.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Decomposes a pair of half-trace projections into 2×2 reducing blocks.
pub fn two_projection_blocks(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<ProjectionPair> {
    if p.dim() != q.dim() {
        return Err(Error::NotProjectionPair(format!(
            "dimensions differ: {} vs {}",
            p.dim(),
            q.dim()
        )));
    }
    check_half_trace_projection("p", p)?;
    check_half_trace_projection("q", q)?;

    let range_q = split_by_eigenvalue(q, true);
    let kernel_q = split_by_eigenvalue(q, false);

    // t_i and f_i ∈ ran q from the compression of p to ran q
    let on_range = eigh(&compress(p.matrix(), &range_q)?);
    // spare vectors of ker q: eigenvalue ~1 spans ran p ∩ ker q, ~0 spans ker p ∩ ker q
    let on_kernel = eigh(&compress(p.matrix(), &kernel_q)?);
    let mut in_p_kernel_q: Vec<Vec<Complex64>> = Vec::new();
    let mut out_p_kernel_q: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..kernel_q.len() {
        let v = lift(&kernel_q, &on_kernel.vectors.column(j));
        if on_kernel.values[j] >= 1.0 - DEGENERATE_BLOCK {
            in_p_kernel_q.push(v);
        } else if on_kernel.values[j] <= DEGENERATE_BLOCK {
            out_p_kernel_q.push(v);
        }
    }

    let n = p.dim();
    let mut params = Vec::with_capacity(n / 2);
    let mut columns = Vec::with_capacity(n);
    for j in 0..range_q.len() {
        let mut t = on_range.values[j].clamp(0.0, 1.0);
        let f = lift(&range_q, &on_range.vectors.column(j));
        let g = if t <= DEGENERATE_BLOCK {
            t = 0.0;
            in_p_kernel_q.pop()
        } else if t >= 1.0 - DEGENERATE_BLOCK {
            t = 1.0;
            out_p_kernel_q.pop()
        } else {
            // g = (1 - q) p f / ‖·‖
            let pf = p.matrix().apply(&f);
            let qpf = q.matrix().apply(&pf);
            Some(normalized(pf.iter().zip(&qpf).map(|(a, b)| a - b).collect()))
        };
        let g = g.ok_or_else(|| {
            Error::NotProjectionPair(format!(
                "no partner vector in ker q for degenerate block t = {t}"
            ))
        })?;
        params.push(t);
        columns.push(f);
        columns.push(g);
    }

    let basis = UnitaryMatrix::new(Matrix::from_columns(&columns)?).map_err(|_| {
        Error::NotProjectionPair("reducing basis failed to be orthonormal".into())
    })?;
    Ok(ProjectionPair {
        block_params: params,
        basis,
    })
}
