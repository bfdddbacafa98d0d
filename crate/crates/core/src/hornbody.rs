//! Finite-multiplicity quantum Horn bodies by Monte Carlo.
//!
//! A point of the level-`d` body is the eigenvalue function of
//! `a1 ⊗ diag(α) ⊗ 1_d + a2 ⊗ U (diag(β) ⊗ 1_d) U*` for a unitary `U` of size
//! `N·d`. Points are drawn with `U` Haar distributed.

use std::io::{BufRead, Write};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counterexample::membership_gap;
use crate::eigenfunc::{ev_of_spectrum, measure_of_ev, EigenvalueFunction};
use crate::error::{Error, Result};
use crate::spectra::{coefficient_pair, eig_sym, haar_unitary, HermitianMatrix, UnitaryMatrix};

/// Entrywise tolerance when recognising the counterexample coefficients.
const SPEC_MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct BodySpec {
    a1: HermitianMatrix,
    a2: HermitianMatrix,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    d: usize,
}

impl BodySpec {
    pub fn new(
        a1: HermitianMatrix,
        a2: HermitianMatrix,
        alpha: Vec<f64>,
        beta: Vec<f64>,
        d: usize,
    ) -> Result<Self> {
        if a1.dim() != a2.dim() {
            return Err(Error::Dimension(format!(
                "coefficients are {}x{} and {}x{}",
                a1.dim(),
                a1.dim(),
                a2.dim(),
                a2.dim()
            )));
        }
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(Error::Dimension(format!(
                "alpha has {} entries, beta {}",
                alpha.len(),
                beta.len()
            )));
        }
        for v in [&alpha, &beta] {
            if let Some(index) = v.windows(2).position(|w| w[1] > w[0]) {
                return Err(Error::Unsorted { index: index + 1 });
            }
        }
        if d == 0 {
            return Err(Error::Dimension("multiplicity must be at least 1".into()));
        }
        Ok(BodySpec {
            a1,
            a2,
            alpha,
            beta,
            d,
        })
    }

    /// `a1 = a2 = (1)`: ordinary sums `diag(α) + U diag(β) U*`.
    pub fn scalar(alpha: Vec<f64>, beta: Vec<f64>, d: usize) -> Result<Self> {
        let one = HermitianMatrix::diagonal(&[1.0]);
        Self::new(one.clone(), one, alpha, beta, d)
    }

    /// Coefficients `a1, a2(s)` with `α = β = (1, 0)`.
    pub fn counterexample(s: f64, d: usize) -> Result<Self> {
        let (a1, a2) = coefficient_pair(s)?;
        Self::new(a1, a2, vec![1.0, 0.0], vec![1.0, 0.0], d)
    }

    pub fn a1(&self) -> &HermitianMatrix {
        &self.a1
    }

    pub fn a2(&self) -> &HermitianMatrix {
        &self.a2
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn multiplicity(&self) -> usize {
        self.d
    }

    /// Size `n` of the coefficients.
    pub fn coefficient_dim(&self) -> usize {
        self.a1.dim()
    }

    /// Size `N·d` of the unitaries.
    pub fn unitary_dim(&self) -> usize {
        self.alpha.len() * self.d
    }

    /// Size `n·N·d` of the assembled matrix.
    pub fn dim(&self) -> usize {
        self.coefficient_dim() * self.unitary_dim()
    }

    pub fn with_multiplicity(&self, d: usize) -> Result<Self> {
        Self::new(
            self.a1.clone(),
            self.a2.clone(),
            self.alpha.clone(),
            self.beta.clone(),
            d,
        )
    }

    /// `(Tr a1·Σα + Tr a2·Σβ) / (nN)`, the mean of every point.
    pub fn trace_mean(&self) -> f64 {
        let sa: f64 = self.alpha.iter().sum();
        let sb: f64 = self.beta.iter().sum();
        (self.a1.trace() * sa + self.a2.trace() * sb)
            / (self.coefficient_dim() * self.alpha.len()) as f64
    }

    /// Whether this is [`BodySpec::counterexample`] for `s` at some multiplicity.
    pub fn is_counterexample(&self, s: f64) -> bool {
        let Ok(reference) = Self::counterexample(s, self.d) else {
            return false;
        };
        self.a1.dim() == 2
            && self.alpha == reference.alpha
            && self.beta == reference.beta
            && self.a1.matrix().max_abs_diff(reference.a1.matrix()) <= SPEC_MATCH_TOLERANCE
            && self.a2.matrix().max_abs_diff(reference.a2.matrix()) <= SPEC_MATCH_TOLERANCE
    }

    fn amplified_diagonal(&self, v: &[f64]) -> HermitianMatrix {
        let entries: Vec<f64> = v
            .iter()
            .flat_map(|&x| std::iter::repeat_n(x, self.d))
            .collect();
        HermitianMatrix::diagonal(&entries)
    }

    /// `a1 ⊗ diag(α) ⊗ 1_d + a2 ⊗ U (diag(β) ⊗ 1_d) U*`.
    pub fn assemble(&self, u: &UnitaryMatrix) -> Result<HermitianMatrix> {
        if u.dim() != self.unitary_dim() {
            return Err(Error::Dimension(format!(
                "unitary is {}x{}, expected {}",
                u.dim(),
                u.dim(),
                self.unitary_dim()
            )));
        }
        let p = self.amplified_diagonal(&self.alpha);
        let q = self.amplified_diagonal(&self.beta).conjugate_by(u)?;
        Ok(&self.a1.kron(&p) + &self.a2.kron(&q))
    }
}

/// One sampled point with its seed and full eigenvalue sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudPoint {
    pub seed: u64,
    /// Nonincreasing, length `n·N·d`.
    pub spectrum: Vec<f64>,
    #[serde(flatten)]
    pub ev: EigenvalueFunction,
}

pub fn point_for_unitary(spec: &BodySpec, u: &UnitaryMatrix, seed: u64) -> Result<CloudPoint> {
    let spectrum = eig_sym(&spec.assemble(u)?);
    let ev = ev_of_spectrum(&spectrum)?;
    Ok(CloudPoint { seed, spectrum, ev })
}

/// Eigenvalue function at a Haar unitary drawn from `seed`.
pub fn sample_point(spec: &BodySpec, seed: u64) -> Result<EigenvalueFunction> {
    Ok(sample_cloud_point(spec, seed)?.ev)
}

pub fn sample_cloud_point(spec: &BodySpec, seed: u64) -> Result<CloudPoint> {
    point_for_unitary(spec, &haar_unitary(spec.unitary_dim(), seed), seed)
}

/// Seed of sample `index`: first output of ChaCha8 seeded with `master` on stream `index`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

#[derive(Clone, Debug)]
pub struct BodyCloud {
    pub spec: BodySpec,
    pub points: Vec<CloudPoint>,
}

impl BodyCloud {
    pub fn seeds(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.seed).collect()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for p in &self.points {
            serde_json::to_writer(&mut out, p)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads points written by [`BodyCloud::write_jsonl`]; blank lines are skipped.
    pub fn read_jsonl<R: BufRead>(spec: BodySpec, input: R) -> Result<Self> {
        let mut points = Vec::new();
        for (k, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::InvalidFunction(format!("line {}: {e}", k + 1)))?;
            if line.trim().is_empty() {
                continue;
            }
            let p: CloudPoint = serde_json::from_str(&line)
                .map_err(|e| Error::InvalidFunction(format!("line {}: {e}", k + 1)))?;
            if p.spectrum.len() != spec.dim() {
                return Err(Error::SpecMismatch(format!(
                    "line {}: spectrum of length {} for a body of dimension {}",
                    k + 1,
                    p.spectrum.len(),
                    spec.dim()
                )));
            }
            points.push(p);
        }
        Ok(BodyCloud { spec, points })
    }
}

/// `count` points with seeds [`derive_seed`]`(seed, i)`, in index order.
pub fn sample_cloud(spec: &BodySpec, count: usize, seed: u64) -> Result<BodyCloud> {
    let points = (0..count as u64)
        .into_par_iter()
        .map(|i| sample_cloud_point(spec, derive_seed(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BodyCloud {
        spec: spec.clone(),
        points,
    })
}

/// The point at `U ⊗ 1_k` in the level `k·d` body.
pub fn nested_point(spec: &BodySpec, u: &UnitaryMatrix, k: usize) -> Result<CloudPoint> {
    point_for_unitary(&spec.with_multiplicity(spec.multiplicity() * k)?, &u.amplify(k), 0)
}

/// Classical Horn conditions for `N = 2`: trace equality and
/// `max(α1+β2, α2+β1) ≤ γ1 ≤ α1+β1`.
pub fn horn2_check(alpha: [f64; 2], beta: [f64; 2], gamma: [f64; 2], tol: f64) -> bool {
    let trace = (gamma[0] + gamma[1] - (alpha[0] + alpha[1] + beta[0] + beta[1])).abs() <= tol;
    let lower = (alpha[0] + beta[1]).max(alpha[1] + beta[0]) - tol <= gamma[0];
    let upper = gamma[0] <= alpha[0] + beta[0] + tol;
    trace && lower && upper
}

/// Membership gap of every point against the image of `Φ_s`.
pub fn cloud_vs_phi_fit(
    cloud: &BodyCloud,
    s: f64,
    t_grid: usize,
    x_grid: usize,
) -> Result<Vec<f64>> {
    if !cloud.spec.is_counterexample(s) {
        return Err(Error::SpecMismatch(format!(
            "cloud was not sampled from the counterexample body at s = {s}"
        )));
    }
    cloud
        .points
        .par_iter()
        .map(|p| membership_gap(s, &measure_of_ev(&p.ev), t_grid, x_grid).map(|r| r.gap))
        .collect()
}
