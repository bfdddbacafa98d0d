//! Search for block parameters `t` whose spectrum fits inside `supp(σ)`.

use super::{lambda_quadruple, sigma_target, CounterexampleParams};

pub const DEFAULT_SCAN_GRID: usize = 1001;
pub const DEFAULT_SCAN_TOL: f64 = 1e-9;

/// Hits closer than this are reported once.
const DUPLICATE_HIT: f64 = 1e-7;
const GOLDEN_ITERATIONS: usize = 120;

/// `max_i dist(λ_i(s,t), supp σ)`: zero exactly when `supp ν_t ⊆ supp σ`.
pub fn support_residual(params: &CounterexampleParams, t: f64) -> f64 {
    let sigma = sigma_target(params);
    residual(params.s, sigma.atoms(), t)
}

fn residual(s: f64, support: &[f64], t: f64) -> f64 {
    let lambdas = lambda_quadruple(s, t.clamp(0.0, 1.0)).expect("parameters already validated");
    lambdas
        .iter()
        .map(|l| {
            support
                .iter()
                .map(|a| (l - a).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Values of `t ∈ [0, 1]` with `supp ν_t ⊆ supp σ` up to `tol`.
///
/// The residual is sampled on `t_grid` equispaced points; every local
/// minimum is refined by golden-section search on its two neighbouring cells
/// and kept when the refined residual is at most `tol`.
pub fn support_scan(params: &CounterexampleParams, t_grid: usize, tol: f64) -> Vec<f64> {
    let t_grid = t_grid.max(2);
    let sigma = sigma_target(params);
    let support = sigma.atoms();
    let f = |t: f64| residual(params.s, support, t);
    let step = 1.0 / (t_grid - 1) as f64;
    let samples: Vec<f64> = (0..t_grid).map(|j| f(j as f64 * step)).collect();

    let mut hits: Vec<f64> = Vec::new();
    for j in 0..t_grid {
        let left = if j > 0 { samples[j - 1] } else { f64::INFINITY };
        let right = samples.get(j + 1).copied().unwrap_or(f64::INFINITY);
        if samples[j] > left || samples[j] > right {
            continue;
        }
        let t0 = j as f64 * step;
        let (t, value) = if samples[j] == 0.0 {
            (t0, 0.0)
        } else {
            let lo = (t0 - step).max(0.0);
            let hi = (t0 + step).min(1.0);
            let (t, v) = golden_min(&f, lo, hi);
            if v <= samples[j] { (t, v) } else { (t0, samples[j]) }
        };
        if value <= tol {
            hits.push(t);
        }
    }
    hits.sort_by(f64::total_cmp);
    hits.dedup_by(|a, b| (*a - *b).abs() < DUPLICATE_HIT);
    hits
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if b - a < 1e-15 {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    // endpoints matter when the minimum sits on t = 0 or t = 1
    [(a, f(a)), (b, f(b)), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_branch_hits_only_zero() {
        for r in [0.2, 0.5, 0.8] {
            let p = CounterexampleParams::new(0.25, r).unwrap();
            assert_eq!(support_scan(&p, DEFAULT_SCAN_GRID, DEFAULT_SCAN_TOL), vec![0.0]);
        }
    }

    #[test]
    fn generic_parameters_have_no_hit() {
        let p = CounterexampleParams::new(0.5, 0.5).unwrap();
        assert!(support_scan(&p, DEFAULT_SCAN_GRID, DEFAULT_SCAN_TOL).is_empty());
    }

    #[test]
    fn commuting_endpoint_hit_off_grid() {
        // s = 1: ν_t has atoms ±1 ± √t, and σ has ±(1 + r), ±(1 - r), so t = r²
        let p = CounterexampleParams::new(1.0, 0.3).unwrap();
        let hits = support_scan(&p, 997, DEFAULT_SCAN_TOL);
        assert_eq!(hits.len(), 1, "{hits:?}");
        assert!((hits[0] - 0.09).abs() < 1e-8);
    }
}
