//! Exact polynomial certificates that `σ` lies outside the asymptotic body.
//!
//! If `supp ν_t ⊆ supp σ` and `s ≠ 1/4`, the two atoms `1 - r + 2r√s` and
//! `1 - r` of `σ` are `λ1(s,t)` and `λ2(s,t)`, so both are roots of the
//! characteristic polynomial `P`. That gives two polynomial equations in
//! `(r, s, t)`: `P(1 - r) = 0` and the norm `P(1 - r + 2r√s)·P(1 - r - 2r√s) = 0`.
//! Squaring can only add solutions, so a nonzero resultant in `t` at `(r, s)`
//! rules out every `t`, real or complex. Only `Res = 0` would call for
//! re-checking signs, and that case is reported as inconclusive.

pub mod poly;
pub mod printed;
mod resultant;

pub use poly::{parse, Assignment, Monomial, RatPoly, Var};
pub use resultant::{bareiss_determinant, resultant_t, sylvester_matrix};

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::counterexample::{nu_zero_exact, sigma_target_exact};
use crate::error::{Error, Result};
use crate::scalar::ratio;

fn v(var: Var) -> RatPoly {
    RatPoly::var(var)
}

fn c(n: i64) -> RatPoly {
    RatPoly::integer(n)
}

/// The block `a1 ⊗ p + a2 ⊗ q` with `u = √(s - s²)`, `v = √(t - t²)`.
pub fn symbolic_block() -> [[RatPoly; 4]; 4] {
    let (s, t, u, w) = (v(Var::S), v(Var::T), v(Var::U), v(Var::V));
    let two_u = &c(2) * &u;
    [
        [&(&c(-1) + &(&c(2) * &s)) + &t, two_u.clone(), w.clone(), c(0)],
        [two_u, &(&c(1) - &(&c(2) * &s)) - &t, c(0), -&w],
        [w.clone(), c(0), &c(1) - &t, c(0)],
        [c(0), -&w, c(0), &c(-1) + &t],
    ]
}

/// `det(λ·1 - M)` for the symbolic block, expanded over all 24 permutations.
pub fn charpoly_symbolic() -> Result<RatPoly> {
    let m = symbolic_block();
    let lambda = v(Var::Lambda);
    let entry = |i: usize, j: usize| -> RatPoly {
        if i == j {
            &lambda - &m[i][j]
        } else {
            -&m[i][j]
        }
    };
    let mut det = RatPoly::zero();
    for perm in permutations4() {
        let mut term = RatPoly::integer(perm_sign(&perm));
        for (i, &j) in perm.iter().enumerate() {
            term = &term * &entry(i, j);
        }
        det = &det + &term;
    }
    if det.mentions(Var::U) || det.mentions(Var::V) {
        return Err(Error::Polynomial(format!(
            "radicals survive in the characteristic polynomial: {det}"
        )));
    }
    Ok(det)
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|k| p.contains(&k)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn perm_sign(p: &[usize; 4]) -> i64 {
    let inversions = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `P(1 - r)`: the inner atom equation squared twice. Degree 2 in `t`.
pub fn inner_atom_polynomial() -> Result<RatPoly> {
    let p = charpoly_symbolic()?;
    Ok(p.substitute(Var::Lambda, &(&c(1) - &v(Var::R))))
}

/// `P(1 - r + 2r√s)·P(1 - r - 2r√s)`: the outer atom equation with `√s`
/// eliminated. Degree 4 in `t`.
pub fn outer_atom_polynomial() -> Result<RatPoly> {
    let p = charpoly_symbolic()?;
    let base = &c(1) - &v(Var::R);
    let shift = &(&c(2) * &v(Var::R)) * &v(Var::Y);
    let plus = p.substitute(Var::Lambda, &(&base + &shift));
    let minus = p.substitute(Var::Lambda, &(&base - &shift));
    let norm = &plus * &minus;
    if norm.mentions(Var::Y) {
        return Err(Error::Polynomial("√s survives in the norm".into()));
    }
    Ok(norm)
}

/// The squared-out support equations, ordered by degree in `t` like the
/// reference pair: the inner-atom polynomial first, then the outer one.
pub fn build_p1_p2() -> Result<(RatPoly, RatPoly)> {
    Ok((inner_atom_polynomial()?, outer_atom_polynomial()?))
}

/// Comparison of [`build_p1_p2`] with the reference expansions.
#[derive(Clone, Debug)]
pub struct TranscriptionCheck {
    pub derived: (RatPoly, RatPoly),
    pub printed: (RatPoly, RatPoly),
}

impl TranscriptionCheck {
    pub fn p1_difference(&self) -> RatPoly {
        &self.derived.0 - &self.printed.0
    }

    pub fn p2_difference(&self) -> RatPoly {
        &self.derived.1 - &self.printed.1
    }

    pub fn matches(&self) -> bool {
        self.p1_difference().is_zero() && self.p2_difference().is_zero()
    }
}

pub fn transcription_check() -> Result<TranscriptionCheck> {
    Ok(TranscriptionCheck {
        derived: build_p1_p2()?,
        printed: (printed::p1(), printed::p2()),
    })
}

/// `Res_t` of the derived pair, computed once per process.
pub fn support_resultant() -> Result<&'static RatPoly> {
    static CACHE: OnceLock<std::result::Result<RatPoly, Error>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let (p1, p2) = build_p1_p2()?;
            resultant_t(&p1, &p2)
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// Trial division of `Res_t(p1, p2)` of the reference pair by the reference eliminant.
#[derive(Clone, Debug)]
pub struct EliminantCheck {
    pub resultant: RatPoly,
    pub eliminant: RatPoly,
    pub quotient: RatPoly,
    pub remainder: RatPoly,
    /// Indices of printed factors that do not divide the resultant.
    pub failing_factors: Vec<usize>,
}

impl EliminantCheck {
    pub fn divides(&self) -> bool {
        self.remainder.is_zero()
    }
}

pub fn eliminant_check() -> Result<EliminantCheck> {
    resultant_division(&resultant_t(&printed::p1(), &printed::p2())?)
}

/// Divides `resultant` by the reference eliminant and by each factor separately.
pub fn resultant_division(resultant: &RatPoly) -> Result<EliminantCheck> {
    if resultant.is_zero() {
        return Err(Error::Polynomial("resultant vanishes identically".into()));
    }
    let eliminant = printed::eliminant();
    let (quotient, remainder) = resultant.div_rem(&eliminant)?;
    let mut failing_factors = Vec::new();
    for (k, f) in printed::eliminant_factors().iter().enumerate() {
        if !resultant.div_rem(f)?.1.is_zero() {
            failing_factors.push(k);
        }
    }
    Ok(EliminantCheck {
        resultant: resultant.clone(),
        eliminant,
        quotient,
        remainder,
        failing_factors,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    CertifiedNotConvex,
    Inconclusive,
    SpecialSQuarter,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(serialize_with = "as_string")]
    pub s: BigRational,
    #[serde(serialize_with = "as_string")]
    pub r: BigRational,
    /// `Res_t` of the support equations at `(r, s)`.
    #[serde(serialize_with = "as_string")]
    pub resultant_value: BigRational,
    /// The reference eliminant at `(r, s)`, for reference.
    #[serde(serialize_with = "as_string")]
    pub eliminant_value: BigRational,
    pub verdict: Verdict,
    /// Whether the verdict proves that `σ` is outside the body.
    pub certified: bool,
}

fn as_string<S: Serializer>(q: &BigRational, out: S) -> std::result::Result<S::Ok, S::Error> {
    out.serialize_str(&q.to_string())
}

/// Decides non-membership of `σ(s, r)` exactly.
pub fn certify(s: &BigRational, r: &BigRational) -> Result<Certificate> {
    for (name, q) in [("s", s), ("r", r)] {
        if !(*q > BigRational::zero() && *q < BigRational::one()) {
            return Err(Error::OutOfRange {
                name,
                value: crate::scalar::ratio_to_f64(q),
                range: "(0, 1)",
            });
        }
    }
    let at = Assignment::new()
        .with(Var::R, r.clone())
        .with(Var::S, s.clone());
    let resultant_value = support_resultant()?.eval_exact(&at)?;
    let eliminant_value = printed::eliminant().eval_exact(&at)?;
    let (verdict, certified) = if resultant_value.is_zero() {
        (Verdict::Inconclusive, false)
    } else if *s == ratio(1, 4) {
        // only t = 0 remains, and ν_0 = σ would need 1 - r = ±1
        let distinct = sigma_target_exact(s, r)? != nu_zero_exact();
        (Verdict::SpecialSQuarter, distinct)
    } else {
        (Verdict::CertifiedNotConvex, true)
    };
    Ok(Certificate {
        s: s.clone(),
        r: r.clone(),
        resultant_value,
        eliminant_value,
        verdict,
        certified,
    })
}
