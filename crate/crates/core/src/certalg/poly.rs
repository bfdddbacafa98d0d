//! Sparse multivariate polynomials over ℚ with auxiliary radicals.
//!
//! The variables are fixed: `r, s, t, λ` and the radicals `u = √(s-s²)`,
//! `v = √(t-t²)`, `y = √s`. Every product is reduced by `u² → s - s²`,
//! `v² → t - t²`, `y² → s`, so radicals appear with exponent at most one.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_sqrt, ratio_to_f64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    R = 0,
    S = 1,
    T = 2,
    Lambda = 3,
    U = 4,
    V = 5,
    Y = 6,
}

pub const VAR_COUNT: usize = 7;

impl Var {
    pub const ALL: [Var; VAR_COUNT] = [Var::R, Var::S, Var::T, Var::Lambda, Var::U, Var::V, Var::Y];

    pub fn name(self) -> &'static str {
        match self {
            Var::R => "r",
            Var::S => "s",
            Var::T => "t",
            Var::Lambda => "lambda",
            Var::U => "u",
            Var::V => "v",
            Var::Y => "y",
        }
    }

    fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }

    fn is_radical(self) -> bool {
        matches!(self, Var::U | Var::V | Var::Y)
    }
}

/// Exponents indexed by [`Var`]; compared lexicographically with `r` most significant.
pub type Monomial = [u32; VAR_COUNT];

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly::default()
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RatPoly::zero();
        p.add_term([0; VAR_COUNT], c);
        p
    }

    pub fn integer(n: i64) -> Self {
        RatPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        let mut m = [0; VAR_COUNT];
        m[v as usize] = 1;
        let mut p = RatPoly::zero();
        p.add_term(m, BigRational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = RatPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p.reduced()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The rational value of a constant polynomial.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .get(&[0; VAR_COUNT])
                .cloned(),
            _ => None,
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m[v as usize]).max().unwrap_or(0)
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m[v as usize] > 0)
    }

    pub fn variables(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.mentions(v)).collect()
    }

    /// Coefficients `c_k` with `self = Σ_k c_k·v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<RatPoly> {
        let mut out = vec![RatPoly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let k = m[v as usize] as usize;
            let mut rest = *m;
            rest[v as usize] = 0;
            out[k].add_term(rest, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> RatPoly {
        let mut base = self.clone();
        let mut acc = RatPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces `v` by `value` everywhere.
    pub fn substitute(&self, v: Var, value: &RatPoly) -> RatPoly {
        let parts = self.coefficients_in(v);
        let mut acc = RatPoly::zero();
        for c in parts.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    fn reduced(self) -> RatPoly {
        if !self
            .terms
            .keys()
            .any(|m| Var::ALL.iter().any(|&v| v.is_radical() && m[v as usize] >= 2))
        {
            return self;
        }
        let s = RatPoly::var(Var::S);
        let t = RatPoly::var(Var::T);
        let u2 = &s - &(&s * &s);
        let v2 = &t - &(&t * &t);
        let mut out = RatPoly::zero();
        let mut work: Vec<(Monomial, BigRational)> = self.terms.into_iter().collect();
        while let Some((m, c)) = work.pop() {
            let radical = [(Var::U, &u2), (Var::V, &v2), (Var::Y, &s)]
                .into_iter()
                .find(|(v, _)| m[*v as usize] >= 2);
            match radical {
                None => out.add_term(m, c),
                Some((v, replacement)) => {
                    let mut rest = m;
                    rest[v as usize] -= 2;
                    for (rm, rc) in &replacement.terms {
                        let mut nm = rest;
                        for k in 0..VAR_COUNT {
                            nm[k] += rm[k];
                        }
                        work.push((nm, &c * rc));
                    }
                }
            }
        }
        out
    }

    /// Largest monomial in lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Multivariate division by a single divisor in lex order.
    ///
    /// The remainder is zero exactly when `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let (lead_m, lead_c) = divisor
            .leading_term()
            .ok_or_else(|| Error::Polynomial("division by the zero polynomial".into()))?;
        let (lead_m, lead_c) = (*lead_m, lead_c.clone());
        let mut rest = self.clone();
        let mut quotient = RatPoly::zero();
        let mut remainder = RatPoly::zero();
        while let Some((m, c)) = rest.terms.pop_last() {
            if divides(&lead_m, &m) {
                let mut qm = m;
                for k in 0..VAR_COUNT {
                    qm[k] -= lead_m[k];
                }
                let qc = &c / &lead_c;
                // rest -= qc·x^qm·(divisor - lead), the lead cancels c·x^m
                for (dm, dc) in divisor.terms.iter().rev().skip(1) {
                    let mut nm = qm;
                    for k in 0..VAR_COUNT {
                        nm[k] += dm[k];
                    }
                    rest.add_term(nm, -(&qc * dc));
                }
                quotient.add_term(qm, qc);
            } else {
                remainder.add_term(m, c);
            }
        }
        Ok((quotient, remainder))
    }

    /// Exact quotient; fails when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &RatPoly) -> Result<RatPoly> {
        let (q, rem) = self.div_rem(divisor)?;
        if rem.is_zero() {
            Ok(q)
        } else {
            Err(Error::Polynomial(format!(
                "inexact division: remainder has {} terms",
                rem.len()
            )))
        }
    }

    /// Exact value at rational arguments.
    ///
    /// A radical present in `self` is evaluated only when its radicand is the
    /// square of a rational; otherwise the result is [`Error::Irrational`].
    pub fn eval_exact(&self, point: &Assignment) -> Result<BigRational> {
        let mut values: [Option<BigRational>; VAR_COUNT] = Default::default();
        for v in [Var::R, Var::S, Var::T, Var::Lambda] {
            values[v as usize] = point.get(v).cloned();
        }
        for v in [Var::U, Var::V, Var::Y] {
            if !self.mentions(v) {
                continue;
            }
            let radicand = point.radicand(v)?;
            let root = rational_sqrt(&radicand).ok_or_else(|| {
                Error::Irrational(format!(
                    "{} = √({radicand}) is not rational; eliminate it first",
                    v.name()
                ))
            })?;
            values[v as usize] = Some(if point.negative(v) { -root } else { root });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = values[k].as_ref().ok_or_else(|| {
                    Error::Polynomial(format!("no value for {}", Var::ALL[k].name()))
                })?;
                term *= num_traits::pow(x.clone(), e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Floating-point value; radicals are taken from the point when given,
    /// otherwise from their radicands.
    pub fn eval_f64(&self, point: &[(Var, f64)]) -> f64 {
        let mut values = [f64::NAN; VAR_COUNT];
        for &(v, x) in point {
            values[v as usize] = x;
        }
        let s = values[Var::S as usize];
        let t = values[Var::T as usize];
        let defaults = [
            (Var::U, (s - s * s).max(0.0).sqrt()),
            (Var::V, (t - t * t).max(0.0).sqrt()),
            (Var::Y, s.max(0.0).sqrt()),
        ];
        for (v, x) in defaults {
            if values[v as usize].is_nan() {
                values[v as usize] = x;
            }
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .fold(ratio_to_f64(c), |acc, (k, &e)| acc * values[k].powi(e as i32))
            })
            .sum()
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| ratio_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Rational values for `r, s, t, λ` and sign choices for the radicals.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    values: BTreeMap<Var, BigRational>,
    negative: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn with(mut self, v: Var, value: BigRational) -> Self {
        assert!(!v.is_radical(), "radicals are determined by their radicands");
        self.values.insert(v, value);
        self
    }

    /// Uses the negative square root for radical `v`.
    pub fn with_negative_root(mut self, v: Var) -> Self {
        self.negative.insert(v, true);
        self
    }

    pub fn get(&self, v: Var) -> Option<&BigRational> {
        self.values.get(&v)
    }

    fn negative(&self, v: Var) -> bool {
        self.negative.get(&v).copied().unwrap_or(false)
    }

    fn need(&self, v: Var) -> Result<&BigRational> {
        self.get(v)
            .ok_or_else(|| Error::Polynomial(format!("no value for {}", v.name())))
    }

    fn radicand(&self, v: Var) -> Result<BigRational> {
        Ok(match v {
            Var::U => {
                let s = self.need(Var::S)?;
                s - s * s
            }
            Var::V => {
                let t = self.need(Var::T)?;
                t - t * t
            }
            Var::Y => self.need(Var::S)?.clone(),
            _ => unreachable!("not a radical"),
        })
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        let mut out = RatPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = *ma;
                for k in 0..VAR_COUNT {
                    m[k] += mb[k];
                }
                out.add_term(m, ca * cb);
            }
        }
        out.reduced()
    }
}

macro_rules! by_value {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $f(self, rhs: RatPoly) -> RatPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
by_value!(Add add, Sub sub, Mul mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl fmt::Display for RatPoly {
    /// Terms in descending lex order, e.g. `r^4 - 4*r^3*s + 1/2*t - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = Var::ALL
                .iter()
                .filter(|v| m[**v as usize] > 0)
                .map(|v| match m[*v as usize] {
                    1 => v.name().to_string(),
                    e => format!("{}^{e}", v.name()),
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for RatPoly {
    type Err = Error;
    fn from_str(text: &str) -> Result<RatPoly> {
        parse(text)
    }
}

/// Parses sums of products of integers, fractions `p/q`, variables,
/// powers `x^k` and parenthesised subexpressions.
pub fn parse(text: &str) -> Result<RatPoly> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Polynomial(format!(
            "unexpected {:?} in {text:?}",
            parser.tokens[parser.pos]
        )));
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Number(digits.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push(Token::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Polynomial(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                -self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek_op() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.power()?.as_constant().filter(|d| !d.is_zero()).ok_or_else(
                        || Error::Polynomial("division only by nonzero constants".into()),
                    )?;
                    acc = acc.scale(&d.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RatPoly> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Token::Number(n)) => {
                    let e = n
                        .to_u32()
                        .ok_or_else(|| Error::Polynomial(format!("exponent {n} too large")))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                other => Err(Error::Polynomial(format!("expected exponent, got {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatPoly> {
        let token = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match token {
            Some(Token::Number(n)) => Ok(RatPoly::constant(BigRational::from_integer(n))),
            Some(Token::Name(name)) => Var::from_name(&name)
                .map(RatPoly::var)
                .ok_or_else(|| Error::Polynomial(format!("unknown variable {name:?}"))),
            Some(Token::Op('(')) => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Polynomial("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(Error::Polynomial(format!("unexpected {other:?}"))),
        }
    }
}
