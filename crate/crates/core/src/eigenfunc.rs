//! Discrete probability measures and their eigenvalue functions.
//!
//! The eigenvalue function of a measure `μ` is the right-continuous,
//! nonincreasing step function `λ(t) = sup{x : μ((x, ∞)) > t}` on `[0, 1)`.
//! Two affine structures live here and they are different: pointwise
//! combination of eigenvalue functions ([`affine_combine_ev`]) and mixture
//! of measures ([`mixture`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default resolution for discretizing a general nonincreasing function.
pub const DEFAULT_DISCRETIZATION: usize = 4096;

/// Finitely many atoms (strictly increasing) with positive weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "MeasureRecord<T>",
    bound(deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct DiscreteMeasure<T = f64> {
    atoms: Vec<T>,
    weights: Vec<T>,
}

#[derive(Deserialize)]
struct MeasureRecord<T> {
    atoms: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> TryFrom<MeasureRecord<T>> for DiscreteMeasure<T> {
    type Error = Error;
    fn try_from(raw: MeasureRecord<T>) -> Result<Self> {
        DiscreteMeasure::new(raw.atoms, raw.weights)
    }
}

impl<T: Scalar> DiscreteMeasure<T> {
    /// Sorts atoms, merges coincident ones and checks the weights.
    pub fn new(atoms: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidMeasure(format!("nonpositive weight {w:?}")));
        }
        let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        if !total.is_unit_mass() {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total:?}, not 1"
            )));
        }
        Self::collect(atoms.into_iter().zip(weights))
    }

    /// Builds from `(atom, weight)` pairs with positive weights, merging
    /// coincident atoms; mass is not rechecked.
    fn collect(pairs: impl IntoIterator<Item = (T, T)>) -> Result<Self> {
        let mut pairs: Vec<(T, T)> = pairs.into_iter().collect();
        if pairs
            .iter()
            .any(|(a, _)| a.partial_cmp(&T::zero()).is_none())
        {
            return Err(Error::InvalidMeasure("atom is not a number".into()));
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut atoms: Vec<T> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<T> = Vec::with_capacity(pairs.len());
        for (a, w) in pairs {
            match atoms.last() {
                Some(last) if last.coincides(&a) => {
                    let merged = weights.pop().unwrap() + w;
                    weights.push(merged);
                }
                _ => {
                    atoms.push(a);
                    weights.push(w);
                }
            }
        }
        Ok(DiscreteMeasure { atoms, weights })
    }

    pub fn dirac(x: T) -> Self {
        DiscreteMeasure {
            atoms: vec![x],
            weights: vec![T::one()],
        }
    }

    /// Equal weights `1/n` on the given points (repeats allowed).
    pub fn uniform(points: Vec<T>) -> Result<Self> {
        let n = points.len() as i64;
        let w = T::from_ratio(1, n.max(1));
        Self::new(points, vec![w; n as usize])
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `μ((-∞, x])`.
    pub fn cdf(&self, x: &T) -> T {
        self.atoms
            .iter()
            .zip(&self.weights)
            .take_while(|(a, _)| *a <= x)
            .fold(T::zero(), |acc, (_, w)| acc + w.clone())
    }

    pub fn min_atom(&self) -> &T {
        &self.atoms[0]
    }

    pub fn max_atom(&self) -> &T {
        self.atoms.last().unwrap()
    }

    /// Whether every atom lies within `tol` of some atom of `other`.
    pub fn support_within(&self, other: &DiscreteMeasure<T>, tol: &T) -> bool {
        self.atoms
            .iter()
            .all(|a| other.atoms.iter().any(|b| (a.clone() - b.clone()).abs() <= *tol))
    }

    pub fn to_f64(&self) -> DiscreteMeasure<f64> {
        DiscreteMeasure::<f64>::collect(
            self.atoms
                .iter()
                .map(Scalar::to_f64)
                .zip(self.weights.iter().map(Scalar::to_f64)),
        )
        .expect("finite atoms")
    }
}

/// Right-continuous nonincreasing step function on `[0, 1)`: value
/// `values[j]` on `[breakpoints[j], breakpoints[j+1])`, the last step ending at 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "FunctionRecord<T>",
    bound(deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct EigenvalueFunction<T = f64> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

#[derive(Deserialize)]
struct FunctionRecord<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> TryFrom<FunctionRecord<T>> for EigenvalueFunction<T> {
    type Error = Error;
    fn try_from(raw: FunctionRecord<T>) -> Result<Self> {
        EigenvalueFunction::new(raw.breakpoints, raw.values)
    }
}

impl<T: Scalar> EigenvalueFunction<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != T::zero() {
            return Err(Error::InvalidFunction("first breakpoint must be 0".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || *breakpoints.last().unwrap() >= T::one()
        {
            return Err(Error::InvalidFunction(
                "breakpoints must increase strictly inside [0, 1)".into(),
            ));
        }
        if let Some(index) = values.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::Unsorted { index: index + 1 });
        }
        Ok(Self::canonical(breakpoints, values))
    }

    /// Drops breakpoints where the value does not change.
    fn canonical(breakpoints: Vec<T>, values: Vec<T>) -> Self {
        let mut bs: Vec<T> = Vec::with_capacity(breakpoints.len());
        let mut vs: Vec<T> = Vec::with_capacity(values.len());
        for (b, v) in breakpoints.into_iter().zip(values) {
            match vs.last() {
                Some(last) if last.coincides(&v) => {}
                _ => {
                    bs.push(b);
                    vs.push(v);
                }
            }
        }
        EigenvalueFunction {
            breakpoints: bs,
            values: vs,
        }
    }

    pub fn constant(c: T) -> Self {
        EigenvalueFunction {
            breakpoints: vec![T::zero()],
            values: vec![c],
        }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `(start, end, value)` for each step.
    pub fn steps(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        (0..self.values.len()).map(move |j| {
            let end = self
                .breakpoints
                .get(j + 1)
                .cloned()
                .unwrap_or_else(T::one);
            (self.breakpoints[j].clone(), end, self.values[j].clone())
        })
    }

    pub fn value_at(&self, t: &T) -> T {
        let j = self.breakpoints.partition_point(|b| b <= t);
        self.values[j.saturating_sub(1)].clone()
    }

    /// `∫₀¹ λ(t) dt`.
    pub fn mean(&self) -> T {
        self.steps()
            .fold(T::zero(), |acc, (a, b, v)| acc + (b - a) * v)
    }

    pub fn to_f64(&self) -> EigenvalueFunction<f64> {
        EigenvalueFunction::canonical(
            self.breakpoints.iter().map(Scalar::to_f64).collect(),
            self.values.iter().map(Scalar::to_f64).collect(),
        )
    }
}

impl EigenvalueFunction<f64> {
    /// Step approximation of a nonincreasing function sampled at the
    /// midpoints of an `m`-cell uniform grid.
    pub fn discretize(f: impl Fn(f64) -> f64, m: usize) -> Result<Self> {
        let m = m.max(1);
        let breakpoints = (0..m).map(|j| j as f64 / m as f64).collect();
        let values = (0..m).map(|j| f((j as f64 + 0.5) / m as f64)).collect();
        Self::new(breakpoints, values)
    }
}

/// Eigenvalue function of a measure: the top atom first, each step as wide as its weight.
pub fn ev_of_measure<T: Scalar>(mu: &DiscreteMeasure<T>) -> EigenvalueFunction<T> {
    let mut breakpoints = Vec::with_capacity(mu.len());
    let mut values = Vec::with_capacity(mu.len());
    let mut acc = T::zero();
    for (a, w) in mu.atoms.iter().zip(&mu.weights).rev() {
        breakpoints.push(acc.clone());
        values.push(a.clone());
        acc = acc + w.clone();
    }
    EigenvalueFunction::canonical(breakpoints, values)
}

/// Distribution of an eigenvalue function: one atom per level with the
/// Lebesgue measure of the level set as weight.
pub fn measure_of_ev<T: Scalar>(f: &EigenvalueFunction<T>) -> DiscreteMeasure<T> {
    DiscreteMeasure::collect(f.steps().map(|(a, b, v)| (v, b - a)))
        .expect("eigenvalue functions have ordered values")
}

/// Step function with steps of width `1/N` for a nonincreasing sequence of length `N`.
pub fn ev_of_spectrum<T: Scalar>(values: &[T]) -> Result<EigenvalueFunction<T>> {
    if values.is_empty() {
        return Err(Error::InvalidFunction("empty spectrum".into()));
    }
    if let Some(index) = values.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::Unsorted { index: index + 1 });
    }
    let n = values.len() as i64;
    let breakpoints = (0..n).map(|j| T::from_ratio(j, n)).collect();
    Ok(EigenvalueFunction::canonical(breakpoints, values.to_vec()))
}

/// Wasserstein-1 distance `∫ |F_μ - F_ν| dx`.
pub fn w1_distance<T: Scalar>(mu: &DiscreteMeasure<T>, nu: &DiscreteMeasure<T>) -> T {
    let (mut i, mut j) = (0, 0);
    let (mut fm, mut fn_) = (T::zero(), T::zero());
    let mut total = T::zero();
    let mut prev: Option<T> = None;
    while i < mu.len() || j < nu.len() {
        let next = match (mu.atoms.get(i), nu.atoms.get(j)) {
            (Some(a), Some(b)) => {
                if a <= b {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        };
        if let Some(p) = prev {
            total = total + (fm.clone() - fn_.clone()).abs() * (next.clone() - p);
        }
        while i < mu.len() && mu.atoms[i] <= next {
            fm = fm + mu.weights[i].clone();
            i += 1;
        }
        while j < nu.len() && nu.atoms[j] <= next {
            fn_ = fn_ + nu.weights[j].clone();
            j += 1;
        }
        prev = Some(next);
    }
    total
}

/// `∫₀¹ |f - g| dt`.
pub fn l1_distance<T: Scalar>(f: &EigenvalueFunction<T>, g: &EigenvalueFunction<T>) -> T {
    let grid = merged_breakpoints(f, g);
    let mut total = T::zero();
    for (k, start) in grid.iter().enumerate() {
        let end = grid.get(k + 1).cloned().unwrap_or_else(T::one);
        let diff = (f.value_at(start) - g.value_at(start)).abs();
        total = total + diff * (end - start.clone());
    }
    total
}

fn merged_breakpoints<T: Scalar>(f: &EigenvalueFunction<T>, g: &EigenvalueFunction<T>) -> Vec<T> {
    let mut grid: Vec<T> = f
        .breakpoints
        .iter()
        .chain(&g.breakpoints)
        .cloned()
        .collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| a == b);
    grid
}

/// Pointwise `r·f + (1-r)·g`.
pub fn affine_combine_ev<T: Scalar>(
    f: &EigenvalueFunction<T>,
    g: &EigenvalueFunction<T>,
    r: &T,
) -> Result<EigenvalueFunction<T>> {
    if *r < T::zero() || *r > T::one() {
        return Err(Error::OutOfRange {
            name: "r",
            value: r.to_f64(),
            range: "[0, 1]",
        });
    }
    let grid = merged_breakpoints(f, g);
    let complement = T::one() - r.clone();
    let values = grid
        .iter()
        .map(|x| r.clone() * f.value_at(x) + complement.clone() * g.value_at(x))
        .collect();
    Ok(EigenvalueFunction::canonical(grid, values))
}

/// `Σ w_j μ_j`; its CDF is `Σ w_j F_j`.
pub fn mixture<T: Scalar>(
    measures: &[DiscreteMeasure<T>],
    weights: &[T],
) -> Result<DiscreteMeasure<T>> {
    if measures.len() != weights.len() || measures.is_empty() {
        return Err(Error::InvalidMeasure(format!(
            "{} measures for {} mixture weights",
            measures.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| **w < T::zero()) {
        return Err(Error::InvalidMeasure(format!("negative mixture weight {w:?}")));
    }
    let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
    if !total.is_unit_mass() {
        return Err(Error::InvalidMeasure(format!(
            "mixture weights sum to {total:?}, not 1"
        )));
    }
    DiscreteMeasure::collect(
        measures
            .iter()
            .zip(weights)
            .filter(|(_, w)| w.is_positive())
            .flat_map(|(m, w)| {
                m.atoms
                    .iter()
                    .zip(&m.weights)
                    .map(move |(a, mw)| (a.clone(), w.clone() * mw.clone()))
            }),
    )
}

/// `∫ g dμ = Σ w·g(atom)`.
pub fn integrate<T: Scalar>(g: impl Fn(&T) -> T, mu: &DiscreteMeasure<T>) -> T {
    mu.atoms
        .iter()
        .zip(&mu.weights)
        .fold(T::zero(), |acc, (a, w)| acc + w.clone() * g(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn m(atoms: &[f64], weights: &[f64]) -> DiscreteMeasure {
        DiscreteMeasure::new(atoms.to_vec(), weights.to_vec()).unwrap()
    }

    #[test]
    fn two_point_measure() {
        let f = ev_of_measure(&m(&[1.0, -1.0], &[0.5, 0.5]));
        assert_eq!(f.breakpoints(), &[0.0, 0.5]);
        assert_eq!(f.values(), &[1.0, -1.0]);
        assert_eq!(f.value_at(&0.4999), 1.0);
        assert_eq!(f.value_at(&0.5), -1.0);
    }

    #[test]
    fn point_mass_is_constant() {
        let f = ev_of_measure(&DiscreteMeasure::dirac(0.3));
        assert_eq!(f, EigenvalueFunction::constant(0.3));
        assert_eq!(measure_of_ev(&EigenvalueFunction::constant(0.0)), DiscreteMeasure::dirac(0.0));
    }

    #[test]
    fn three_point_measure() {
        let f = ev_of_measure(&m(&[1.0, 0.0, -1.0], &[0.25, 0.5, 0.25]));
        assert_eq!(f.breakpoints(), &[0.0, 0.25, 0.75]);
        assert_eq!(f.values(), &[1.0, 0.0, -1.0]);
    }

    #[test]
    fn validation() {
        assert!(DiscreteMeasure::new(vec![0.0], vec![0.9]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0], vec![]).is_err());
        let merged = m(&[0.0, 1e-13, 1.0], &[0.25, 0.25, 0.5]);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn spectrum_functions() {
        let a = ev_of_spectrum(&[1.0, -1.0]).unwrap();
        let b = ev_of_spectrum(&[1.0, 1.0, -1.0, -1.0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.values(), &[1.0, -1.0]);
        assert!(matches!(
            ev_of_spectrum(&[0.0, 1.0]),
            Err(Error::Unsorted { index: 1 })
        ));
    }

    #[test]
    fn w1_examples() {
        assert_eq!(w1_distance(&DiscreteMeasure::dirac(0.0), &DiscreteMeasure::dirac(1.0)), 1.0);
        let mu = m(&[-1.0, 0.5, 2.0], &[0.25, 0.25, 0.5]);
        assert_eq!(w1_distance(&mu, &mu), 0.0);
    }

    #[test]
    fn affine_extremes() {
        let f = ev_of_spectrum(&[1.0, 0.0, -2.0]).unwrap();
        let g = ev_of_spectrum(&[3.0, -3.0]).unwrap();
        assert_eq!(affine_combine_ev(&f, &g, &1.0).unwrap(), f);
        let half = affine_combine_ev(
            &EigenvalueFunction::constant(1.0),
            &EigenvalueFunction::constant(-1.0),
            &0.5,
        )
        .unwrap();
        assert_eq!(half, EigenvalueFunction::constant(0.0));
        assert!(affine_combine_ev(&f, &g, &1.5).is_err());
    }

    #[test]
    fn mixture_examples() {
        let mu = m(&[0.0, 1.0], &[0.5, 0.5]);
        assert_eq!(mixture(std::slice::from_ref(&mu), &[1.0]).unwrap(), mu);
        let nu0 = mixture(
            &[DiscreteMeasure::dirac(1.0), DiscreteMeasure::dirac(-1.0)],
            &[0.5, 0.5],
        )
        .unwrap();
        assert_eq!(nu0, m(&[-1.0, 1.0], &[0.5, 0.5]));
        assert!(mixture(std::slice::from_ref(&mu), &[0.5]).is_err());
        assert!(mixture(&[mu.clone(), mu], &[1.5, -0.5]).is_err());
    }

    #[test]
    fn integrate_examples() {
        let nu0 = m(&[-1.0, 1.0], &[0.5, 0.5]);
        assert_eq!(integrate(|_| 1.0, &nu0), 1.0);
        assert_eq!(integrate(|x| *x, &nu0), 0.0);
    }

    #[test]
    fn exact_round_trip() {
        let mu = DiscreteMeasure::new(
            vec![ratio(-2, 3), ratio(1, 5), ratio(7, 4)],
            vec![ratio(1, 3), ratio(1, 6), ratio(1, 2)],
        )
        .unwrap();
        let f = ev_of_measure(&mu);
        assert_eq!(f.breakpoints(), &[ratio(0, 1), ratio(1, 2), ratio(2, 3)]);
        assert_eq!(measure_of_ev(&f), mu);
        let w: BigRational = w1_distance(&mu, &DiscreteMeasure::dirac(ratio(0, 1)));
        assert_eq!(w, l1_distance(&f, &EigenvalueFunction::constant(ratio(0, 1))));
    }

    #[test]
    fn json_schema() {
        let mu = m(&[-1.0, 1.0], &[0.5, 0.5]);
        let text = serde_json::to_string(&mu).unwrap();
        assert_eq!(text, r#"{"atoms":[-1.0,1.0],"weights":[0.5,0.5]}"#);
        let back: DiscreteMeasure = serde_json::from_str(&text).unwrap();
        assert_eq!(back, mu);
        let f = ev_of_measure(&mu);
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"breakpoints":[0.0,0.5],"values":[1.0,-1.0]}"#
        );
        let bad: std::result::Result<DiscreteMeasure, _> =
            serde_json::from_str(r#"{"atoms":[0.0],"weights":[0.2]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn discretized_function_is_step() {
        let f = EigenvalueFunction::discretize(|t| 1.0 - 2.0 * t, 8).unwrap();
        assert_eq!(f.values().len(), 8);
        assert!((f.mean() - 0.0).abs() < 1e-15);
    }
}
