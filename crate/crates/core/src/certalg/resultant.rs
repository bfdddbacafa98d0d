//! Sylvester resultants with fraction-free elimination.

use rayon::prelude::*;

use super::poly::{RatPoly, Var};
use crate::error::{Error, Result};

/// Sylvester matrix of `p` and `q` as polynomials in `v`, rows of `p` first.
pub fn sylvester_matrix(p: &RatPoly, q: &RatPoly, v: Var) -> Vec<Vec<RatPoly>> {
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let mut rows = vec![vec![RatPoly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in pc.iter().enumerate() {
            rows[i][i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in qc.iter().enumerate() {
            rows[n + i][i + n - k] = c.clone();
        }
    }
    rows
}

/// Determinant by Bareiss elimination; every division is exact.
pub fn bareiss_determinant(mut a: Vec<Vec<RatPoly>>) -> Result<RatPoly> {
    let n = a.len();
    if n == 0 {
        return Ok(RatPoly::one());
    }
    let mut negate = false;
    let mut previous = RatPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(RatPoly::zero());
            };
            a.swap(k, pivot);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        tail.par_iter_mut().try_for_each(|row| -> Result<()> {
            for j in k + 1..n {
                let num = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                row[j] = num.div_exact(&previous)?;
            }
            row[k] = RatPoly::zero();
            Ok(())
        })?;
        previous = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// `Res_t(p, q)`, a polynomial in the remaining variables.
///
/// A zero result means `p` and `q` share a factor of positive degree in `t`.
pub fn resultant_t(p: &RatPoly, q: &RatPoly) -> Result<RatPoly> {
    for (name, f) in [("first", p), ("second", q)] {
        if let Some(v) = [Var::Lambda, Var::U, Var::V, Var::Y]
            .into_iter()
            .find(|&v| f.mentions(v))
        {
            return Err(Error::Polynomial(format!(
                "{name} argument still contains {}",
                v.name()
            )));
        }
        if f.degree_in(Var::T) == 0 {
            return Err(Error::Polynomial(format!(
                "{name} argument has degree 0 in t"
            )));
        }
    }
    bareiss_determinant(sylvester_matrix(p, q, Var::T))
}
