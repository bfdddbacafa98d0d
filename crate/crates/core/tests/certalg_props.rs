use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use qhorn_core::certalg::*;
use qhorn_core::scalar::ratio;
use qhorn_core::spectra::{sum_matrix, Matrix};

const VARS: [Var; 6] = [Var::R, Var::S, Var::T, Var::U, Var::V, Var::Y];

fn poly(max_var: usize) -> impl Strategy<Value = RatPoly> {
    let term = (
        -6i64..6,
        1i64..4,
        prop::collection::vec((0..max_var, 0u32..3), 0..3),
    );
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        terms.into_iter().fold(RatPoly::zero(), |acc, (n, d, powers)| {
            let mono = powers.into_iter().fold(RatPoly::constant(ratio(n, d)), |m, (v, k)| {
                &m * &RatPoly::var(VARS[v]).pow(k)
            });
            &acc + &mono
        })
    })
}

proptest! {
    #[test]
    fn ring_laws(a in poly(6), b in poly(6), c in poly(6)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &RatPoly::one(), a.clone());
    }

    #[test]
    fn radicals_stay_reduced(a in poly(6), b in poly(6)) {
        let product = &a * &b;
        for (v, top) in [(Var::U, 1), (Var::V, 1), (Var::Y, 1)] {
            prop_assert!(product.degree_in(v) <= top);
        }
    }

    #[test]
    fn display_parses_back(a in poly(6)) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(3), b in poly(3), r in -5i64..5, s in -5i64..5, t in -5i64..5) {
        let at = Assignment::new()
            .with(Var::R, ratio(r, 3))
            .with(Var::S, ratio(s, 2))
            .with(Var::T, ratio(t, 5));
        let ea = a.eval_exact(&at).unwrap();
        let eb = b.eval_exact(&at).unwrap();
        prop_assert_eq!((&a * &b).eval_exact(&at).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval_exact(&at).unwrap(), ea + eb);
    }

    #[test]
    fn division_identity(a in poly(3), b in poly(3)) {
        prop_assume!(!b.is_zero());
        let (q, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &rem, a.clone());
        prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
    }
}

#[test]
fn radical_rules() {
    assert_eq!(parse("u^2").unwrap(), parse("s - s^2").unwrap());
    assert_eq!(parse("v^3").unwrap(), parse("(t - t^2)*v").unwrap());
    assert_eq!(parse("y^4").unwrap(), parse("s^2").unwrap());
}

#[test]
fn charpoly_matches_numeric_determinant() {
    let p = charpoly_symbolic().unwrap();
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..100 {
        let (s, t, lambda): (f64, f64, f64) = (rng.random(), rng.random(), rng.random_range(-2.0..2.0));
        let m = sum_matrix(s, t).unwrap();
        let shifted = &Matrix::identity(4).scale(Complex64::new(lambda, 0.0)) - m.matrix();
        let det = shifted.determinant();
        let value = p.eval_f64(&[(Var::S, s), (Var::T, t), (Var::Lambda, lambda)]);
        assert!(det.im.abs() < 1e-12);
        assert!((det.re - value).abs() <= 1e-9, "{} vs {value}", det.re);
    }
}

fn charpoly_f64(lambda: f64, s: f64, t: f64) -> f64 {
    let c = 1.0 - t + 2.0 * s * t;
    lambda.powi(4) - 2.0 * c * lambda * lambda + (1.0 - t) * (1.0 - t)
}

#[test]
fn derived_pair_matches_direct_evaluation() {
    let (p1, p2) = build_p1_p2().unwrap();
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..50 {
        let (r, s, t): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        let at = [(Var::R, r), (Var::S, s), (Var::T, t)];
        let inner = charpoly_f64(1.0 - r, s, t);
        let shift = 2.0 * r * s.sqrt();
        let outer = charpoly_f64(1.0 - r + shift, s, t) * charpoly_f64(1.0 - r - shift, s, t);
        assert!((p1.eval_f64(&at) - inner).abs() <= 1e-9);
        assert!((p2.eval_f64(&at) - outer).abs() <= 1e-9);
    }
}

#[test]
fn derived_pair_vanishes_on_its_atoms() {
    // 1 - r = λ2 puts the inner atom on the spectrum
    let (p1, p2) = build_p1_p2().unwrap();
    for (s, t) in [(0.3f64, 0.6f64), (0.8, 0.2), (0.55, 0.9)] {
        let c = 1.0 - t + 2.0 * s * t;
        let w = (s * t - s * t * t + s * s * t * t).sqrt();
        let l1 = (c + 2.0 * w).sqrt();
        let r = 1.0 - (1.0 - t) / l1;
        assert!(p1.eval_f64(&[(Var::R, r), (Var::S, s), (Var::T, t)]).abs() < 1e-12);
    }
    for r in [0.2, 0.45, 0.9] {
        let at = [(Var::R, r), (Var::S, 1.0), (Var::T, r * r)];
        assert!(p1.eval_f64(&at).abs() < 1e-12);
        assert!(p2.eval_f64(&at).abs() < 1e-12);
    }
}

fn rational_determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k].clone();
        for i in k + 1..n {
            let factor = &a[i][k] / &a[k][k];
            for j in k..n {
                let sub = &factor * &a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

fn specialized_resultant(p: &RatPoly, q: &RatPoly, at: &Assignment) -> BigRational {
    let coeffs = |f: &RatPoly| -> Vec<BigRational> {
        f.coefficients_in(Var::T)
            .iter()
            .map(|c| c.eval_exact(at).unwrap())
            .collect()
    };
    let (pc, qc) = (coeffs(p), coeffs(q));
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    let mut rows = vec![vec![BigRational::zero(); m + n]; m + n];
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
    rational_determinant(rows)
}

fn sample_points() -> Vec<(BigRational, BigRational)> {
    let mut rng = StdRng::seed_from_u64(3);
    (0..20)
        .map(|_| (ratio(rng.random_range(1..98), 98), ratio(rng.random_range(1..90), 90)))
        .collect()
}

#[test]
fn resultant_agrees_with_specialized_elimination() {
    let (p1, p2) = build_p1_p2().unwrap();
    let res = support_resultant().unwrap();
    let printed_res = resultant_t(&printed::p1(), &printed::p2()).unwrap();
    for (r, s) in sample_points() {
        let at = Assignment::new().with(Var::R, r.clone()).with(Var::S, s.clone());
        assert_eq!(res.eval_exact(&at).unwrap(), specialized_resultant(&p1, &p2, &at), "r={r} s={s}");
        assert_eq!(
            printed_res.eval_exact(&at).unwrap(),
            specialized_resultant(&printed::p1(), &printed::p2(), &at)
        );
    }
}

#[test]
fn resultant_vanishes_on_commuting_solutions() {
    let res = support_resultant().unwrap();
    for (n, d) in [(1, 7), (1, 2), (5, 6), (17, 19)] {
        let at = Assignment::new().with(Var::R, ratio(n, d)).with(Var::S, ratio(1, 1));
        assert!(res.eval_exact(&at).unwrap().is_zero());
    }
}

#[test]
fn printed_pair_resultant_contains_eliminant() {
    let check = eliminant_check().unwrap();
    assert!(check.divides());
    assert!(check.failing_factors.is_empty());
    assert_eq!(check.quotient, parse("(r-1)^2").unwrap());
}

#[test]
fn first_printed_equation_carries_extra_term() {
    let check = transcription_check().unwrap();
    assert_eq!(check.p1_difference(), parse("4*s*(1-s)*(1-t)^2").unwrap());
    assert!(!check.matches());
}

#[test]
fn certificates_are_reproducible() {
    for (s, r) in [(ratio(1, 2), ratio(1, 2)), (ratio(1, 3), ratio(2, 7)), (ratio(1, 4), ratio(1, 3))] {
        let a = certify(&s, &r).unwrap();
        let b = certify(&s, &r).unwrap();
        assert_eq!(a, b);
        assert!(a.certified);
    }
    let quarter = certify(&ratio(1, 4), &ratio(1, 3)).unwrap();
    assert_eq!(quarter.verdict, Verdict::SpecialSQuarter);
    let half = certify(&ratio(1, 2), &ratio(1, 2)).unwrap();
    assert_eq!(half.verdict, Verdict::CertifiedNotConvex);
    assert_eq!(half.resultant_value, ratio(1, 64));
}

#[test]
fn certificate_near_an_eliminant_root() {
    let s = ratio(1, 10);
    let e = printed::eliminant();
    let value = |r: f64| {
        let at = [(Var::R, r), (Var::S, 0.1)];
        e.eval_f64(&at)
    };
    let (mut lo, mut hi) = (0.2, 0.3);
    assert!(value(lo).signum() != value(hi).signum());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if value(mid).signum() == value(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let denom = 1_000_000_000i64;
    let r = BigRational::new(BigInt::from((lo * denom as f64).round() as i64), BigInt::from(denom));
    let cert = certify(&s, &r).unwrap();
    assert!(cert.eliminant_value.abs().to_f64().unwrap() < 1e-6);
    assert!(!cert.resultant_value.is_zero());
    assert!(cert.certified);
}
