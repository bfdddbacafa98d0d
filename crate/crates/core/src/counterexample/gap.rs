//! Distance from a target measure to the image of `Φ_s`, as a linear program.
//!
//! CDFs are sampled at the midpoints `x_k = -2 + (k + ½)Δx` of an `x_grid`-cell
//! partition of `[-2, 2]`, and a candidate image point is a mixture of
//! `ν_{t_j}` over an equispaced `t_grid`. The fit minimizes
//! `Σ_k Δx·|Σ_j w_j F_j(x_k) - G(x_k)|` over the weight simplex. Cells where
//! no CDF jumps are merged into segments, and the model CDF is carried as a
//! free variable per segment linked to its predecessor by the jump masses,
//! which keeps the constraint matrix sparse.

use std::time::Duration;

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, SolveOutcome};
use serde::{Deserialize, Serialize};

use super::lambda_quadruple;
use crate::eigenfunc::DiscreteMeasure;
use crate::error::{check_unit_interval, Error, Result};

/// Half-width of the window the targets must live in.
const WINDOW: f64 = 2.0;
const WINDOW_SLACK: f64 = 1e-12;

/// Wall-clock budget for a single solve.
pub const DEFAULT_GAP_BUDGET: Duration = Duration::from_secs(600);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub s: f64,
    /// Combination ratio of the target, when it is a `σ`.
    pub r: Option<f64>,
    pub t_grid_size: usize,
    pub x_grid_size: usize,
    pub gap: f64,
    /// Weight on `t_j = j / (t_grid_size - 1)`.
    pub optimal_weights: Vec<f64>,
    /// Simplex pivots.
    pub iterations: u64,
    /// False when the budget ran out before optimality was proven.
    pub converged: bool,
}

impl GapReport {
    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    /// Grid values of `t` carrying weight above `threshold`.
    pub fn support(&self, threshold: f64) -> Vec<(f64, f64)> {
        let denom = (self.t_grid_size - 1) as f64;
        self.optimal_weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > threshold)
            .map(|(j, w)| (j as f64 / denom, *w))
            .collect()
    }
}

/// First cell whose midpoint lies at or right of `a`.
fn start_cell(a: f64, x_grid: usize) -> usize {
    let k = ((a + WINDOW) * x_grid as f64 / (2.0 * WINDOW) - 0.5).ceil();
    (k.max(0.0) as usize).min(x_grid)
}

/// Sparse jump structure shared by the LP and the direct evaluation.
struct Layout {
    /// Starting cells of the segments, then `x_grid`.
    events: Vec<usize>,
    /// `(column, mass)` jumps entering at each segment.
    jumps: Vec<Vec<(usize, f64)>>,
    /// Target CDF on each segment.
    target: Vec<f64>,
    dx: f64,
}

impl Layout {
    fn new(s: f64, target: &DiscreteMeasure, t_grid: usize, x_grid: usize) -> Result<Self> {
        let step = 1.0 / (t_grid - 1) as f64;
        let columns = (0..t_grid)
            .map(|j| {
                lambda_quadruple(s, (j as f64 * step).min(1.0))
                    .map(|q| q.map(|a| start_cell(a, x_grid)))
            })
            .collect::<Result<Vec<_>>>()?;
        let target_cells: Vec<(usize, f64)> = target
            .atoms()
            .iter()
            .zip(target.weights())
            .map(|(&a, &w)| (start_cell(a, x_grid), w))
            .collect();

        let mut events: Vec<usize> = columns
            .iter()
            .flatten()
            .copied()
            .chain(target_cells.iter().map(|c| c.0))
            .chain([0, x_grid])
            .collect();
        events.sort_unstable();
        events.dedup();

        let segments = events.len() - 1;
        let index = |cell: usize| events.binary_search(&cell).expect("cell is an event");
        let mut jumps: Vec<Vec<(usize, f64)>> = vec![Vec::new(); segments];
        for (j, cells) in columns.iter().enumerate() {
            for &cell in cells {
                let i = index(cell);
                if i < segments {
                    match jumps[i].last_mut() {
                        Some((col, mass)) if *col == j => *mass += 0.25,
                        _ => jumps[i].push((j, 0.25)),
                    }
                }
            }
        }
        let mut increments = vec![0.0; segments];
        for &(cell, w) in &target_cells {
            let i = index(cell);
            if i < segments {
                increments[i] += w;
            }
        }
        let target = increments
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Ok(Layout {
            events,
            jumps,
            target,
            dx: 2.0 * WINDOW / x_grid as f64,
        })
    }

    fn segments(&self) -> usize {
        self.events.len() - 1
    }

    fn length(&self, i: usize) -> f64 {
        (self.events[i + 1] - self.events[i]) as f64 * self.dx
    }

    /// Objective at the given weights, without the solver.
    fn evaluate(&self, weights: &[f64]) -> f64 {
        let mut model = 0.0;
        let mut total = 0.0;
        for i in 0..self.segments() {
            model += self.jumps[i].iter().map(|&(j, m)| m * weights[j]).sum::<f64>();
            total += self.length(i) * (model - self.target[i]).abs();
        }
        total
    }
}

/// [`membership_gap_with_budget`] with [`DEFAULT_GAP_BUDGET`].
pub fn membership_gap(
    s: f64,
    target: &DiscreteMeasure,
    t_grid: usize,
    x_grid: usize,
) -> Result<GapReport> {
    membership_gap_with_budget(s, target, t_grid, x_grid, DEFAULT_GAP_BUDGET)
}

/// Best W1 fit (on the grids) of `target` by a point of the image of `Φ_s`.
///
/// When the budget runs out the report carries `converged = false` and the
/// objective of the uniform weights, which is still a valid upper bound.
pub fn membership_gap_with_budget(
    s: f64,
    target: &DiscreteMeasure,
    t_grid: usize,
    x_grid: usize,
    budget: Duration,
) -> Result<GapReport> {
    check_unit_interval("s", s)?;
    if t_grid < 2 || x_grid < 2 {
        return Err(Error::OutOfRange {
            name: "grid size",
            value: t_grid.min(x_grid) as f64,
            range: "at least 2",
        });
    }
    if *target.min_atom() < -WINDOW - WINDOW_SLACK || *target.max_atom() > WINDOW + WINDOW_SLACK {
        return Err(Error::InvalidMeasure(format!(
            "target support [{}, {}] leaves [-2, 2]",
            target.min_atom(),
            target.max_atom()
        )));
    }
    let layout = Layout::new(s, target, t_grid, x_grid)?;
    let segments = layout.segments();

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    lp.set_time_limit(budget);
    let w: Vec<_> = (0..t_grid).map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let m: Vec<_> = (0..segments)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    for i in 0..segments {
        let e = lp.add_var(layout.length(i), (0.0, f64::INFINITY));
        let g = layout.target[i];
        lp.add_constraint([(e, 1.0), (m[i], -1.0)], ComparisonOp::Ge, -g);
        lp.add_constraint([(e, 1.0), (m[i], 1.0)], ComparisonOp::Ge, g);
        let mut link = LinearExpr::empty();
        link.add(m[i], 1.0);
        if i > 0 {
            link.add(m[i - 1], -1.0);
        }
        for &(j, mass) in &layout.jumps[i] {
            link.add(w[j], -mass);
        }
        lp.add_constraint(link, ComparisonOp::Eq, 0.0);
    }
    let simplex: Vec<_> = w.iter().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(simplex.as_slice(), ComparisonOp::Eq, 1.0);

    let outcome = lp
        .solve()
        .map_err(|e| Error::Solver(format!("membership LP: {e}")))?;
    let converged = outcome.is_optimal();
    let iterations = outcome.stats().lp_iterations;
    let mut weights = match &outcome {
        SolveOutcome::Solution(sol) => w.iter().map(|&v| sol.var_value(v).max(0.0)).collect(),
        SolveOutcome::Interrupted(_) => vec![1.0; t_grid],
    };
    let total: f64 = weights.iter().sum();
    for x in weights.iter_mut() {
        *x /= total;
    }
    Ok(GapReport {
        s,
        r: None,
        t_grid_size: t_grid,
        x_grid_size: x_grid,
        gap: layout.evaluate(&weights),
        optimal_weights: weights,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::{nu_t, phi, sigma_target, CounterexampleParams};

    #[test]
    fn start_cells() {
        assert_eq!(start_cell(-2.0, 4), 0);
        assert_eq!(start_cell(-1.5, 4), 0);
        assert_eq!(start_cell(-1.4, 4), 1);
        assert_eq!(start_cell(2.0, 4), 4);
    }

    #[test]
    fn image_points_fit() {
        let r = membership_gap(0.5, &nu_t(0.5, 0.0).unwrap(), 101, 1024).unwrap();
        assert!(r.gap <= 1e-8, "{r:?}");
        assert!(r.optimal_weights[0] > 1.0 - 1e-8);
        let mu = DiscreteMeasure::new(vec![0.2, 0.8], vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let r = membership_gap(0.5, &phi(0.5, &mu).unwrap(), 101, 1024).unwrap();
        assert!(r.gap <= 2.0 * 4.0 / 1024.0, "{}", r.gap);
        assert!(r.converged);
    }

    #[test]
    fn sigma_is_away() {
        let sig = sigma_target(&CounterexampleParams::new(0.5, 0.5).unwrap());
        let r = membership_gap(0.5, &sig, 101, 1024).unwrap();
        assert!(r.gap > 0.03, "{}", r.gap);
        assert!((r.optimal_weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        let far = DiscreteMeasure::dirac(2.5);
        assert!(membership_gap(0.5, &far, 11, 64).is_err());
        assert!(membership_gap(0.5, &DiscreteMeasure::dirac(0.0), 1, 64).is_err());
    }
}
