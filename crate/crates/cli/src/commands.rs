use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::time::Duration;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use qhorn_core::certalg::{certify, Verdict};
use qhorn_core::counterexample::{
    membership_gap_with_budget, nu_t, sigma_target, table1, table1_exact, CounterexampleParams,
    GapReport,
};
use qhorn_core::hornbody::{cloud_vs_phi_fit, sample_cloud, BodyCloud, BodySpec};
use qhorn_core::scalar::rational_sqrt;

use crate::args::{Command, Format, Target};
use crate::output::{csv_bytes, emit, json_bytes};
use crate::rational::to_f64;
use crate::{exit, CliError, CliResult};

pub const INTERVALS: [&str; 4] = ["[0,1/4)", "[1/4,1/2)", "[1/2,3/4)", "[3/4,1)"];
pub const ROW_LABELS: [&str; 3] = ["EV(nu_1)", "EV(nu_0)", "r*EV(nu_1)+(1-r)*EV(nu_0)"];

pub fn dispatch(command: &Command) -> CliResult<u8> {
    match command {
        Command::Table { s, r, format, output } => run_table(s, r, *format, output.as_deref()),
        Command::Certify { s, r, output } => run_certify(s, r, output.as_deref()),
        Command::Probe {
            s,
            r,
            r_sweep,
            target,
            t,
            t_grid,
            x_grid,
            budget_secs,
            output,
        } => {
            let budget = budget(*budget_secs)?;
            let plan = ProbePlan::new(s, r.as_ref(), *r_sweep, *target, t.as_ref())?;
            run_probe(&plan, *t_grid, *x_grid, budget, output.as_deref())
        }
        Command::Sample {
            s,
            d,
            count,
            seed,
            output,
        } => run_sample(s, *d, *count, *seed, output.as_deref()),
        Command::Fit {
            cloud,
            s,
            d,
            t_grid,
            x_grid,
            output,
        } => run_fit(cloud, s, *d, *t_grid, *x_grid, output.as_deref()),
    }
}

fn budget(secs: f64) -> CliResult<Duration> {
    Duration::try_from_secs_f64(secs)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| CliError::Usage(format!("--budget-secs {secs} is not a positive duration")))
}

#[derive(Debug, Serialize)]
pub struct TableRow {
    pub label: &'static str,
    pub values: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TableReport {
    pub s: String,
    pub r: String,
    /// Whether every entry is an exact rational.
    pub exact: bool,
    pub intervals: [&'static str; 4],
    pub rows: Vec<TableRow>,
}

/// The 3×4 table, exact when `√s` is rational.
pub fn table_report(s: &BigRational, r: &BigRational) -> CliResult<TableReport> {
    let exact = rational_sqrt(s).is_some();
    let cells: Vec<Vec<String>> = if exact {
        table1_exact(s, r)?
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect()
    } else {
        table1(to_f64(s), to_f64(r))?
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect()
    };
    Ok(TableReport {
        s: s.to_string(),
        r: r.to_string(),
        exact,
        intervals: INTERVALS,
        rows: ROW_LABELS
            .iter()
            .zip(cells)
            .map(|(&label, values)| TableRow { label, values })
            .collect(),
    })
}

fn run_table(s: &BigRational, r: &BigRational, format: Format, output: Option<&Path>) -> CliResult<u8> {
    let report = table_report(s, r)?;
    let bytes = match format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => {
            let header: Vec<&str> = std::iter::once("row").chain(INTERVALS).collect();
            csv_bytes(
                &header,
                report
                    .rows
                    .iter()
                    .map(|row| std::iter::once(row.label.to_string()).chain(row.values.clone())),
            )?
        }
    };
    emit(output, &bytes)?;
    Ok(exit::SUCCESS)
}

fn run_certify(s: &BigRational, r: &BigRational, output: Option<&Path>) -> CliResult<u8> {
    let cert = certify(s, r)?;
    emit(output, &json_bytes(&cert)?)?;
    let verdict = serde_json::to_value(cert.verdict)?;
    eprintln!(
        "s = {}, r = {}: {} (resultant {})",
        cert.s,
        cert.r,
        verdict.as_str().unwrap_or_default(),
        cert.resultant_value
    );
    Ok(match cert.verdict {
        Verdict::Inconclusive => exit::INCONCLUSIVE,
        Verdict::CertifiedNotConvex | Verdict::SpecialSQuarter => exit::SUCCESS,
    })
}

/// What `probe` will solve: one target per entry of `values`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbePlan {
    pub s: f64,
    pub target: Target,
    /// `r` values for sigma targets, `t` values for image targets.
    pub values: Vec<f64>,
}

impl ProbePlan {
    pub fn new(
        s: &BigRational,
        r: Option<&BigRational>,
        r_sweep: Option<usize>,
        target: Target,
        t: Option<&BigRational>,
    ) -> CliResult<Self> {
        let values = match target {
            Target::Sigma => {
                if t.is_some() {
                    return Err(CliError::Usage("--t only applies to --target image".into()));
                }
                match (r, r_sweep) {
                    (Some(r), None) => vec![to_f64(r)],
                    (None, Some(n)) => (1..=n).map(|i| i as f64 / (n + 1) as f64).collect(),
                    _ => return Err(CliError::Usage("sigma targets need --r or --r-sweep".into())),
                }
            }
            Target::Image => {
                if r.is_some() || r_sweep.is_some() {
                    return Err(CliError::Usage("--r and --r-sweep only apply to --target sigma".into()));
                }
                let t = t.ok_or_else(|| CliError::Usage("image targets need --t".into()))?;
                vec![to_f64(t)]
            }
        };
        let s = to_f64(s);
        for &v in &values {
            match target {
                Target::Sigma => drop(CounterexampleParams::new(s, v)?),
                Target::Image => drop(nu_t(s, v)?),
            }
        }
        Ok(ProbePlan { s, target, values })
    }
}

#[derive(Debug, Serialize)]
pub struct ProbeSummary {
    pub target: &'static str,
    pub max_gap: f64,
    pub converged: bool,
    pub reports: Vec<GapReport>,
}

pub fn probe(plan: &ProbePlan, t_grid: usize, x_grid: usize, budget: Duration) -> CliResult<ProbeSummary> {
    let reports = plan
        .values
        .par_iter()
        .map(|&v| match plan.target {
            Target::Sigma => {
                let params = CounterexampleParams::new(plan.s, v)?;
                membership_gap_with_budget(plan.s, &sigma_target(&params), t_grid, x_grid, budget)
                    .map(|rep| rep.with_r(v))
            }
            Target::Image => {
                membership_gap_with_budget(plan.s, &nu_t(plan.s, v)?, t_grid, x_grid, budget)
            }
        })
        .collect::<qhorn_core::Result<Vec<_>>>()?;
    Ok(ProbeSummary {
        target: match plan.target {
            Target::Sigma => "sigma",
            Target::Image => "image",
        },
        max_gap: reports.iter().map(|r| r.gap).fold(0.0, f64::max),
        converged: reports.iter().all(|r| r.converged),
        reports,
    })
}

fn run_probe(
    plan: &ProbePlan,
    t_grid: usize,
    x_grid: usize,
    budget: Duration,
    output: Option<&Path>,
) -> CliResult<u8> {
    let summary = probe(plan, t_grid, x_grid, budget)?;
    if let Some(path) = output {
        let key = match plan.target {
            Target::Sigma => "r",
            Target::Image => "t",
        };
        let rows = plan.values.iter().zip(&summary.reports).map(|(v, rep)| {
            vec![
                v.to_string(),
                rep.gap.to_string(),
                rep.converged.to_string(),
                rep.iterations.to_string(),
            ]
        });
        emit(Some(path), &csv_bytes(&[key, "gap", "converged", "iterations"], rows)?)?;
    }
    emit(None, &json_bytes(&summary)?)?;
    if summary.converged {
        Ok(exit::SUCCESS)
    } else {
        let stalled = summary.reports.iter().filter(|r| !r.converged).count();
        eprintln!("warning: {stalled} solve(s) hit the budget; their gaps are upper bounds");
        Ok(exit::BUDGET)
    }
}

fn counterexample_spec(s: &BigRational, d: usize) -> CliResult<BodySpec> {
    Ok(BodySpec::counterexample(to_f64(s), d)?)
}

fn run_sample(s: &BigRational, d: usize, count: usize, seed: u64, output: Option<&Path>) -> CliResult<u8> {
    let spec = counterexample_spec(s, d)?;
    let cloud = sample_cloud(&spec, count, seed)?;
    let mut bytes = Vec::new();
    cloud.write_jsonl(&mut bytes)?;
    emit(output, &bytes)?;
    eprintln!("{count} point(s) of dimension {} from seed {seed}", spec.dim());
    Ok(exit::SUCCESS)
}

#[derive(Debug, Serialize)]
pub struct FitSummary {
    pub s: f64,
    pub d: usize,
    pub count: usize,
    pub t_grid_size: usize,
    pub x_grid_size: usize,
    pub max_gap: f64,
    pub mean_gap: f64,
    pub gaps: Vec<f64>,
}

fn run_fit(
    path: &Path,
    s: &BigRational,
    d: usize,
    t_grid: usize,
    x_grid: usize,
    output: Option<&Path>,
) -> CliResult<u8> {
    let spec = counterexample_spec(s, d)?;
    let file = File::open(path)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
    let cloud = BodyCloud::read_jsonl(spec, BufReader::new(file))?;
    if cloud.points.is_empty() {
        return Err(CliError::Usage(format!("{} holds no points", path.display())));
    }
    let s = to_f64(s);
    let gaps = cloud_vs_phi_fit(&cloud, s, t_grid, x_grid)?;
    if let Some(out) = output {
        let rows = cloud.points.iter().zip(&gaps).enumerate().map(|(i, (p, g))| {
            vec![i.to_string(), p.seed.to_string(), g.to_string()]
        });
        emit(Some(out), &csv_bytes(&["index", "seed", "gap"], rows)?)?;
    }
    let summary = FitSummary {
        s,
        d,
        count: gaps.len(),
        t_grid_size: t_grid,
        x_grid_size: x_grid,
        max_gap: gaps.iter().cloned().fold(0.0, f64::max),
        mean_gap: gaps.iter().sum::<f64>() / gaps.len() as f64,
        gaps,
    };
    emit(None, &json_bytes(&summary)?)?;
    Ok(exit::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_tables() {
        let t = table_report(&q(1, 4), &q(1, 2)).unwrap();
        assert!(t.exact);
        assert_eq!(t.rows[0].values, ["1", "0", "0", "-1"]);
        assert_eq!(t.rows[1].values, ["1", "1", "-1", "-1"]);
        assert_eq!(t.rows[2].values, ["1", "1/2", "-1/2", "-1"]);
        let t = table_report(&q(9, 16), &q(1, 3)).unwrap();
        assert_eq!(t.rows[0].values, ["3/2", "0", "0", "-3/2"]);
    }

    #[test]
    fn irrational_table_is_decimal() {
        let t = table_report(&q(1, 2), &q(1, 2)).unwrap();
        assert!(!t.exact);
        let top: f64 = t.rows[0].values[0].parse().unwrap();
        assert!((top - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sweep_plan() {
        let plan = ProbePlan::new(&q(1, 2), None, Some(3), Target::Sigma, None).unwrap();
        assert_eq!(plan.values, vec![0.25, 0.5, 0.75]);
        assert!(ProbePlan::new(&q(1, 2), None, None, Target::Sigma, None).is_err());
        assert!(ProbePlan::new(&q(1, 2), Some(&q(1, 2)), None, Target::Image, Some(&q(1, 3))).is_err());
        assert!(ProbePlan::new(&q(1, 2), None, None, Target::Image, Some(&q(3, 2))).is_err());
        assert!(ProbePlan::new(&q(1, 2), Some(&q(1, 1)), None, Target::Sigma, None).is_err());
    }
}
