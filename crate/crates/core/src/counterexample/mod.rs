//! The rank-one-projection example with `α = β = (1, 0)` and coefficients
//! `a1 = diag(1, -1)`, `a2(s)`.
//!
//! Every block of the two-projection reduction contributes the spectrum
//! `±λ1(s,t), ±λ2(s,t)`, so the asymptotic body is the EV-image of the affine
//! map `Φ_s : δ_t ↦ ν_t`. The target `σ` is the pointwise `r`-combination of
//! `EV(ν_1)` and `EV(ν_0)`; the gap and scan routines test whether it lies in
//! that image.

mod gap;
mod scan;

pub use gap::{membership_gap, membership_gap_with_budget, GapReport, DEFAULT_GAP_BUDGET};
pub use scan::{support_residual, support_scan, DEFAULT_SCAN_GRID, DEFAULT_SCAN_TOL};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::eigenfunc::{affine_combine_ev, ev_of_measure, measure_of_ev, mixture, DiscreteMeasure};
use crate::error::{check_unit_interval, Error, Result};
use crate::scalar::{Scalar, Surd};

/// Slack allowed when checking that a measure lives on `[0, 1]`.
const SUPPORT_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub s: f64,
    pub r: f64,
}

impl CounterexampleParams {
    pub fn new(s: f64, r: f64) -> Result<Self> {
        check_unit_interval("s", s)?;
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: "(0, 1)",
            });
        }
        Ok(CounterexampleParams { s, r })
    }
}

/// `(λ1, λ2, -λ2, -λ1)`, the spectrum of the 4×4 block with parameter `t`.
pub fn lambda_quadruple(s: f64, t: f64) -> Result<[f64; 4]> {
    check_unit_interval("s", s)?;
    check_unit_interval("t", t)?;
    let w = (s * t - s * t * t + s * s * t * t).max(0.0).sqrt();
    let c = 1.0 - t + 2.0 * s * t;
    let l1 = (c + 2.0 * w).max(0.0).sqrt();
    // λ1·λ2 = 1 - t avoids cancellation in c - 2w
    let l2 = if l1 > 0.0 { ((1.0 - t) / l1).min(l1) } else { 0.0 };
    Ok([l1, l2, -l2, -l1])
}

/// `ν_t = ¼ Σ δ_{λ_i(s,t)}`.
pub fn nu_t(s: f64, t: f64) -> Result<DiscreteMeasure> {
    DiscreteMeasure::uniform(lambda_quadruple(s, t)?.to_vec())
}

/// `Φ_s(μ) = Σ_j w_j ν_{t_j}` for `μ = Σ_j w_j δ_{t_j}` on `[0, 1]`.
pub fn phi(s: f64, mu: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    check_unit_interval("s", s)?;
    if *mu.min_atom() < -SUPPORT_SLACK || *mu.max_atom() > 1.0 + SUPPORT_SLACK {
        return Err(Error::InvalidMeasure(format!(
            "support [{}, {}] is not inside [0, 1]",
            mu.min_atom(),
            mu.max_atom()
        )));
    }
    let parts = mu
        .atoms()
        .iter()
        .map(|&t| nu_t(s, t.clamp(0.0, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    mixture(&parts, mu.weights())
}

/// `¼(δ_a + δ_b + δ_{-b} + δ_{-a})` with `a = 1 - r + 2r√s`, `b = 1 - r`.
pub fn sigma_target(params: &CounterexampleParams) -> DiscreteMeasure {
    let CounterexampleParams { s, r } = *params;
    let a = 1.0 - r + 2.0 * r * s.sqrt();
    let b = 1.0 - r;
    DiscreteMeasure::uniform(vec![a, b, -b, -a]).expect("finite atoms")
}

fn check_exact_unit(name: &'static str, q: &BigRational, open: bool) -> Result<()> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let ok = if open {
        *q > zero && *q < one
    } else {
        *q >= zero && *q <= one
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: q.to_f64(),
            range: if open { "(0, 1)" } else { "[0, 1]" },
        })
    }
}

/// `ν_0 = ½δ_1 + ½δ_{-1}`.
pub fn nu_zero_exact() -> DiscreteMeasure<Surd> {
    DiscreteMeasure::uniform(vec![Surd::one(), -Surd::one()]).expect("two atoms")
}

/// `ν_1 = ¼δ_{2√s} + ½δ_0 + ¼δ_{-2√s}`.
pub fn nu_one_exact(s: &BigRational) -> Result<DiscreteMeasure<Surd>> {
    check_exact_unit("s", s, false)?;
    let top = Surd::sqrt_of(s) * Surd::from_ratio(2, 1);
    DiscreteMeasure::uniform(vec![top.clone(), Surd::zero(), Surd::zero(), -top])
}

/// The printed four-atom formula for `σ`, exactly.
pub fn sigma_target_exact(s: &BigRational, r: &BigRational) -> Result<DiscreteMeasure<Surd>> {
    check_exact_unit("s", s, false)?;
    check_exact_unit("r", r, true)?;
    let r = Surd::from_rational(r.clone());
    let b = Surd::one() - r.clone();
    let a = b.clone() + Surd::from_ratio(2, 1) * r * Surd::sqrt_of(s);
    DiscreteMeasure::uniform(vec![a.clone(), b.clone(), -b, -a])
}

/// `σ` obtained the other way: `measure_of_ev(r·EV(ν_1) + (1-r)·EV(ν_0))`.
pub fn sigma_from_combination(s: &BigRational, r: &BigRational) -> Result<DiscreteMeasure<Surd>> {
    check_exact_unit("r", r, true)?;
    let f = ev_of_measure(&nu_one_exact(s)?);
    let g = ev_of_measure(&nu_zero_exact());
    Ok(measure_of_ev(&affine_combine_ev(
        &f,
        &g,
        &Surd::from_rational(r.clone()),
    )?))
}

/// Values of the eigenvalue functions on the quarters of `[0, 1)`: rows are
/// `EV(ν_1)`, `EV(ν_0)` and `r·row1 + (1-r)·row2`.
pub fn table1(s: f64, r: f64) -> Result<[[f64; 4]; 3]> {
    CounterexampleParams::new(s, r)?;
    let f = ev_of_measure(&nu_t(s, 1.0)?);
    let g = ev_of_measure(&nu_t(s, 0.0)?);
    let h = affine_combine_ev(&f, &g, &r)?;
    let quarter = |e: &crate::eigenfunc::EigenvalueFunction| {
        [0.0, 0.25, 0.5, 0.75].map(|x| e.value_at(&x))
    };
    Ok([quarter(&f), quarter(&g), quarter(&h)])
}

/// Exact form of [`table1`]; entries are rational whenever `√s` is.
pub fn table1_exact(s: &BigRational, r: &BigRational) -> Result<[[Surd; 4]; 3]> {
    check_exact_unit("r", r, true)?;
    let f = ev_of_measure(&nu_one_exact(s)?);
    let g = ev_of_measure(&nu_zero_exact());
    let h = affine_combine_ev(&f, &g, &Surd::from_rational(r.clone()))?;
    let quarter = |e: &crate::eigenfunc::EigenvalueFunction<Surd>| {
        [(0, 1), (1, 4), (1, 2), (3, 4)].map(|(n, d)| e.value_at(&Surd::from_ratio(n, d)))
    };
    Ok([quarter(&f), quarter(&g), quarter(&h)])
}
