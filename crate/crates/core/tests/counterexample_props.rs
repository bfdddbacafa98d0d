use proptest::prelude::*;
use qhorn_core::certalg::{printed, Var};
use qhorn_core::counterexample::*;
use qhorn_core::eigenfunc::{affine_combine_ev, ev_of_measure, measure_of_ev, DiscreteMeasure};
use qhorn_core::scalar::{ratio, Surd};
use qhorn_core::spectra::{eig_sym, sum_matrix};

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| i as f64 / (n - 1) as f64)
}

#[test]
fn closed_form_matches_eigensolver() {
    let mut worst: f64 = 0.0;
    for s in grid(21) {
        for t in grid(21) {
            let numeric = eig_sym(&sum_matrix(s, t).unwrap());
            let closed = lambda_quadruple(s, t).unwrap();
            for (a, b) in numeric.iter().zip(closed) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    assert!(worst <= 1e-10, "max deviation {worst:e}");
}

#[test]
fn quadruple_solves_printed_charpoly() {
    let p = printed::charpoly();
    for s in grid(21) {
        for t in grid(21) {
            let q = lambda_quadruple(s, t).unwrap();
            assert!(q.windows(2).all(|w| w[0] >= w[1]));
            assert!(q[1] >= 0.0 && q[3] == -q[0] && q[2] == -q[1]);
            for l in q {
                let value = p.eval_f64(&[(Var::S, s), (Var::T, t), (Var::Lambda, l)]);
                assert!(value.abs() <= 1e-10, "P({l}) = {value:e} at s={s}, t={t}");
            }
        }
    }
}

proptest! {
    #[test]
    fn nu_is_symmetric(s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let nu = nu_t(s, t).unwrap();
        let n = nu.len();
        for k in 0..n {
            prop_assert!((nu.atoms()[k] + nu.atoms()[n - 1 - k]).abs() <= 1e-15);
            prop_assert_eq!(nu.weights()[k], nu.weights()[n - 1 - k]);
        }
    }

    #[test]
    fn phi_is_affine_at_cdf_level(s in 0.0f64..=1.0, ts in prop::array::uniform3(0.0f64..=1.0)) {
        // dyadic weights keep every CDF value exact in floating point
        let ws = [0.5, 0.25, 0.25];
        prop_assume!(ts[0] != ts[1] && ts[1] != ts[2] && ts[0] != ts[2]);
        let mu = DiscreteMeasure::new(ts.to_vec(), ws.to_vec()).unwrap();
        let image = phi(s, &mu).unwrap();
        let parts: Vec<_> = ts.iter().map(|&t| nu_t(s, t).unwrap()).collect();
        for x in [-2.0, -1.3, -0.5, -1e-3, 0.0, 0.4, 1.0, 1.7, 2.0] {
            let expected: f64 = ws.iter().zip(&parts).map(|(w, p)| w * p.cdf(&x)).sum();
            prop_assert_eq!(image.cdf(&x), expected);
        }
    }

    #[test]
    fn phi_of_dirac_is_nu(s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        prop_assert_eq!(phi(s, &DiscreteMeasure::dirac(t)).unwrap(), nu_t(s, t).unwrap());
    }
}

#[test]
fn sigma_routes_agree_on_rational_grid() {
    let values = [(1, 9), (1, 4), (1, 2), (2, 3), (9, 10)];
    for &(sn, sd) in &values {
        for &(rn, rd) in &values {
            let (s, r) = (ratio(sn, sd), ratio(rn, rd));
            let printed = sigma_target_exact(&s, &r).unwrap();
            let combined = sigma_from_combination(&s, &r).unwrap();
            assert_eq!(printed, combined, "s={s} r={r}");
            let table = table1_exact(&s, &r).unwrap();
            let root = Surd::sqrt_of(&s);
            let two = Surd::from_rational(ratio(2, 1));
            let rr = Surd::from_rational(r.clone());
            let one = Surd::from_rational(ratio(1, 1));
            let top = two.clone() * root.clone();
            let zero = Surd::from_rational(ratio(0, 1));
            assert_eq!(table[0], [top.clone(), zero.clone(), zero, -top]);
            assert_eq!(table[1], [one.clone(), one.clone(), -one.clone(), -one.clone()]);
            let b = one - rr.clone();
            let a = b.clone() + two * rr * root;
            assert_eq!(table[2], [a.clone(), b.clone(), -b, -a]);
        }
    }
}

#[test]
fn sigma_is_the_pointwise_combination_numerically() {
    let p = CounterexampleParams::new(0.37, 0.61).unwrap();
    let f = ev_of_measure(&nu_t(p.s, 1.0).unwrap());
    let g = ev_of_measure(&nu_t(p.s, 0.0).unwrap());
    let combined = measure_of_ev(&affine_combine_ev(&f, &g, &p.r).unwrap());
    let direct = sigma_target(&p);
    for (a, b) in combined.atoms().iter().zip(direct.atoms()) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn support_scan_cases() {
    for r in [0.1, 0.37, 0.5, 0.93] {
        let p = CounterexampleParams::new(0.25, r).unwrap();
        assert_eq!(support_scan(&p, DEFAULT_SCAN_GRID, DEFAULT_SCAN_TOL), vec![0.0], "r={r}");
    }
    let p = CounterexampleParams::new(0.5, 0.5).unwrap();
    assert!(support_scan(&p, DEFAULT_SCAN_GRID, DEFAULT_SCAN_TOL).is_empty());
    for s in [0.1, 0.3, 0.7, 0.9] {
        for r in [0.2, 0.5, 0.8] {
            let p = CounterexampleParams::new(s, r).unwrap();
            assert!(support_scan(&p, DEFAULT_SCAN_GRID, DEFAULT_SCAN_TOL).is_empty(), "s={s} r={r}");
        }
    }
}

#[test]
fn support_scan_finds_commuting_solutions() {
    // at s = 1 both support equations hold exactly on t = r²
    for r in [0.15, 0.3, 0.77] {
        let p = CounterexampleParams::new(1.0, r).unwrap();
        let hits = support_scan(&p, DEFAULT_SCAN_GRID, DEFAULT_SCAN_TOL);
        assert_eq!(hits.len(), 1, "r={r}: {hits:?}");
        assert!((hits[0] - r * r).abs() < 1e-8);
        assert!(support_residual(&p, r * r) < 1e-12);
    }
}

#[test]
fn gap_does_not_increase_under_refinement() {
    let sigma = sigma_target(&CounterexampleParams::new(0.5, 0.5).unwrap());
    let mut previous = f64::INFINITY;
    for n in 6..=11 {
        let report = membership_gap(0.5, &sigma, (1 << n) + 1, 4096).unwrap();
        assert!(report.converged);
        assert!(report.gap <= previous + 1e-12, "n={n}: {} > {previous}", report.gap);
        previous = report.gap;
    }
}

#[test]
fn image_points_have_grid_sized_gaps() {
    let mu = DiscreteMeasure::new(vec![0.2, 0.8], vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
    let image = phi(0.5, &mu).unwrap();
    let report = membership_gap(0.5, &image, 401, 4096).unwrap();
    assert!(report.gap <= 2.0 * 4.0 / 4096.0, "{}", report.gap);
    let report = membership_gap(0.5, &nu_t(0.5, 0.0).unwrap(), 401, 4096).unwrap();
    assert!(report.gap <= 1e-8);
    assert!(report.optimal_weights[0] > 1.0 - 1e-8);
}

#[test]
fn some_sigma_is_far_from_every_image_point() {
    let s = 0.5;
    let images: Vec<f64> = [0.1, 0.45, 0.9]
        .iter()
        .map(|&t| membership_gap(s, &nu_t(s, t).unwrap(), 401, 4096).unwrap().gap)
        .collect();
    let worst_image = images.iter().cloned().fold(0.0, f64::max);
    let witness = (1..100).map(|i| i as f64 / 100.0).find(|&r| {
        let sigma = sigma_target(&CounterexampleParams::new(s, r).unwrap());
        let gap = membership_gap(s, &sigma, 401, 4096).unwrap().gap;
        gap > 10.0 * worst_image && gap > 1e-3
    });
    assert!(witness.is_some());
}

#[test]
fn report_serializes() {
    let report = membership_gap(0.5, &nu_t(0.5, 1.0).unwrap(), 5, 64).unwrap().with_r(0.5);
    let json: serde_json::Value = serde_json::to_value(&report).unwrap();
    for key in ["s", "r", "t_grid_size", "x_grid_size", "gap", "optimal_weights", "iterations", "converged"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(report.support(0.5), vec![(1.0, 1.0)]);
}
