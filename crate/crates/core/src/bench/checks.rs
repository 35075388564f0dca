//! Pass/fail checks over a finished benchmark run.

use std::fmt;

use serde::Serialize;

use super::config::{BenchConfig, OrderingCheck, SlopeCheck};
use super::fit::{fit_loglog, SlopeFit, ERROR_WINDOW};
use super::run::{BenchRecord, BenchReport};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Least-squares slope of `log error` against `log gates` inside [`ERROR_WINDOW`].
pub fn fit_slope(records: &[&BenchRecord]) -> Result<SlopeFit> {
    if records.is_empty() {
        return Err(Error::Precondition("no records to fit".into()));
    }
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.gates as f64, r.error)).collect();
    fit_loglog(&pts, ERROR_WINDOW)
}

fn slope_check(report: &BenchReport, c: &SlopeCheck) -> CheckOutcome {
    let name = format!("slope {}", c.series);
    match fit_slope(&report.series(&c.series)) {
        Ok(f) => CheckOutcome {
            name,
            passed: f.slope >= c.min && f.slope <= c.max,
            detail: format!(
                "slope {:.3} (R² {:.4}, {} points), target [{}, {}]",
                f.slope, f.r_squared, f.points, c.min, c.max
            ),
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn in_window(e: f64) -> bool {
    e >= ERROR_WINDOW.0 && e <= ERROR_WINDOW.1
}

/// Ratios `better / worse` at shared grid points inside the window.
pub fn ordering_ratios(report: &BenchReport, better: &str, worse: &str) -> Vec<(usize, f64)> {
    let w = report.series(worse);
    report
        .series(better)
        .into_iter()
        .filter_map(|b| {
            let o = w.iter().find(|r| r.n_steps == b.n_steps)?;
            (in_window(b.error) && in_window(o.error)).then(|| (b.n_steps, b.error / o.error))
        })
        .collect()
}

fn ordering_check(report: &BenchReport, c: &OrderingCheck) -> CheckOutcome {
    let name = format!("ordering {} <= {}", c.better, c.worse);
    let ratios = ordering_ratios(report, &c.better, &c.worse);
    if ratios.is_empty() {
        return CheckOutcome {
            name,
            passed: false,
            detail: "no shared grid points inside the error window".into(),
        };
    }
    let wins = ratios.iter().filter(|r| r.1 <= 1.0).count();
    let frac = wins as f64 / ratios.len() as f64;
    let list: Vec<String> = ratios.iter().map(|(n, r)| format!("N={n}:{r:.3}")).collect();
    CheckOutcome {
        name,
        passed: frac >= c.min_fraction,
        detail: format!(
            "{wins}/{} points ({:.0}%, need {:.0}%); ratios {}",
            ratios.len(),
            100.0 * frac,
            100.0 * c.min_fraction,
            list.join(" ")
        ),
    }
}

fn monotone_check(report: &BenchReport, series: &str) -> CheckOutcome {
    let errs: Vec<(usize, f64)> = report
        .series(series)
        .iter()
        .filter(|r| in_window(r.error))
        .map(|r| (r.n_steps, r.error))
        .collect();
    let bad: Vec<String> = errs
        .windows(2)
        .filter(|w| w[1].1 >= w[0].1)
        .map(|w| format!("N={}→{}", w[0].0, w[1].0))
        .collect();
    CheckOutcome {
        name: format!("monotone {series}"),
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} points in window", errs.len())
        } else {
            format!("error increases at {}", bad.join(", "))
        },
    }
}

/// Evaluates the configured checks; a run with failed records always fails.
pub fn evaluate_checks(config: &BenchConfig, report: &BenchReport) -> Vec<CheckOutcome> {
    let mut out = vec![CheckOutcome {
        name: "records".into(),
        passed: report.failures.is_empty(),
        detail: format!("{} records, {} failed combinations", report.records.len(), report.failures.len()),
    }];
    out.extend(config.checks.slope.iter().map(|c| slope_check(report, c)));
    out.extend(config.checks.ordering.iter().map(|c| ordering_check(report, c)));
    if config.checks.monotone {
        out.extend(config.series_ids().iter().map(|s| monotone_check(report, s)));
    }
    out
}
