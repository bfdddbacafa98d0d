//! Number types usable as atoms, weights and breakpoints.
//!
//! Measures and eigenvalue functions are generic over [`Scalar`] so that the
//! same code runs in floating point (sampling, fitting) and exactly (the
//! closed-form table and the target measure). [`Surd`] covers the numbers
//! `a + b·√d` with rational `a, b` and a fixed rational radicand `d`, which
//! is all the exact path needs since every value there is affine in `√s`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Absolute threshold under which two floating-point atoms are treated as one.
pub const MERGE_TOLERANCE: f64 = 1e-11;

/// Tolerance on the total mass of a floating-point measure.
pub const MASS_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// Whether two atoms should be merged into one.
    fn coincides(&self, other: &Self) -> bool;

    /// Whether a total mass counts as one.
    fn is_unit_mass(&self) -> bool;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn coincides(&self, other: &Self) -> bool {
        (self - other).abs() <= MERGE_TOLERANCE
    }
    fn is_unit_mass(&self) -> bool {
        (self - 1.0).abs() <= MASS_TOLERANCE
    }
}

impl Scalar for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(numer.into(), denom.into())
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn coincides(&self, other: &Self) -> bool {
        self == other
    }
    fn is_unit_mass(&self) -> bool {
        num_traits::One::is_one(self)
    }
}

pub(crate) fn ratio_to_f64(q: &BigRational) -> f64 {
    ToPrimitive::to_f64(q).unwrap_or_else(|| {
        // numerator/denominator overflow f64 individually; scale down first
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000) as usize;
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact square root of a nonnegative rational, if it is rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// An element `rational + surd·√radicand` of a real quadratic field.
///
/// Values with a zero surd part are plain rationals and combine with any
/// radicand. Combining two values with nonzero surd parts over different
/// radicands is a logic error and panics.
#[derive(Clone, Debug)]
pub struct Surd {
    rational: BigRational,
    surd: BigRational,
    radicand: Option<BigRational>,
}

impl Surd {
    pub fn from_rational(q: BigRational) -> Self {
        Surd {
            rational: q,
            surd: BigRational::zero(),
            radicand: None,
        }
    }

    /// `√d`, folded to a rational when `d` is a perfect square.
    pub fn sqrt_of(d: &BigRational) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        match rational_sqrt(d) {
            Some(root) => Surd::from_rational(root),
            None => Surd {
                rational: BigRational::zero(),
                surd: BigRational::one(),
                radicand: Some(d.clone()),
            },
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    /// The exact rational value, when the surd part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.surd.is_zero().then_some(&self.rational)
    }

    fn merged_radicand(&self, other: &Surd) -> Option<BigRational> {
        match (&self.radicand, &other.radicand) {
            (Some(a), Some(b)) => {
                if !self.surd.is_zero() && !other.surd.is_zero() {
                    assert_eq!(a, b, "surds over different radicands");
                }
                Some(if self.surd.is_zero() { b.clone() } else { a.clone() })
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&BigRational::zero());
        let b = self.surd.cmp(&BigRational::zero());
        if b == Ordering::Equal {
            return a;
        }
        if a == Ordering::Equal || a == b {
            return b;
        }
        // opposite signs: compare a^2 against b^2·d
        let d = self.radicand.as_ref().expect("nonzero surd without radicand");
        let lhs = &self.rational * &self.rational;
        let rhs = &self.surd * &self.surd * d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).signum() == Ordering::Equal
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum())
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        let radicand = self.merged_radicand(&rhs);
        Surd {
            rational: self.rational + rhs.rational,
            surd: self.surd + rhs.surd,
            radicand,
        }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rational: -self.rational,
            surd: -self.surd,
            radicand: self.radicand,
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let radicand = self.merged_radicand(&rhs);
        let cross = &self.surd * &rhs.surd;
        let folded = match &radicand {
            Some(d) if !cross.is_zero() => cross * d,
            _ => BigRational::zero(),
        };
        Surd {
            rational: &self.rational * &rhs.rational + folded,
            surd: &self.rational * &rhs.surd + &self.surd * &rhs.rational,
            radicand,
        }
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::from_rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::from_rational(BigRational::one())
    }
}

impl Scalar for Surd {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Surd::from_rational(BigRational::new(numer.into(), denom.into()))
    }
    fn to_f64(&self) -> f64 {
        let root = self
            .radicand
            .as_ref()
            .map(|d| ratio_to_f64(d).sqrt())
            .unwrap_or(0.0);
        ratio_to_f64(&self.rational) + ratio_to_f64(&self.surd) * root
    }
    fn coincides(&self, other: &Self) -> bool {
        self == other
    }
    fn is_unit_mass(&self) -> bool {
        *self == Self::one()
    }
}

impl fmt::Display for Surd {
    /// Exact rendering when rational, decimal otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{}", q),
            None => write!(f, "{}", self.to_f64()),
        }
    }
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
