// SPDX-License-Identifier: Apache-2.0

use crate::forecast::{forecast, select_config, ForecastConfig, SeriesView};
use crate::quadrature::SegmentScheme;
use crate::tasks::integrals::{integral_task_score, IntegralManifest, Split};
use crate::tasks::{builtin_tasks, evaluate_integral, IntegralOutcome};

use super::ReportError;

/// Fractional error below which an integral counts as solved.
pub const SOLVED_FRACTIONAL_ERROR: f64 = 0.03;

#[derive(Debug, Clone)]
pub struct IntegralsReport {
    pub outcomes: Vec<IntegralOutcome>,
    /// Mean per-integral score over `outcomes`.
    pub score: f64,
    pub solved: usize,
}

/// Integrate every manifest entry, or just one split, with `scheme`.
pub fn eval_integrals(
    manifest: &IntegralManifest,
    split: Option<Split>,
    scheme: SegmentScheme,
    tol: f64,
) -> Result<IntegralsReport, ReportError> {
    let outcomes = manifest
        .integrals
        .iter()
        .filter(|s| split.is_none_or(|want| s.split == want))
        .map(|s| evaluate_integral(s, scheme, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let scores: Vec<f64> = outcomes.iter().map(|o| o.score).collect();
    let solved = outcomes
        .iter()
        .filter(|o| o.fractional_error < SOLVED_FRACTIONAL_ERROR)
        .count();
    Ok(IntegralsReport {
        score: integral_task_score(&scores),
        solved,
        outcomes,
    })
}

/// CSV rows per integral followed by `#`-prefixed summary lines.
pub fn integrals_table(report: &IntegralsReport) -> String {
    let mut out = String::from("spec_id,split,value,reference,fractional_error,method_used\n");
    for o in &report.outcomes {
        out.push_str(&format!(
            "{},{},{},{},{:.3e},{}\n",
            o.spec_id,
            o.split,
            o.value,
            o.reference,
            o.fractional_error,
            o.method_used.as_str()
        ));
    }
    out.push_str(&format!("# task_score {}\n", report.score));
    out.push_str(&format!(
        "# solved {}/{} (fractional error < {SOLVED_FRACTIONAL_ERROR})\n",
        report.solved,
        report.outcomes.len()
    ));
    out
}

#[derive(Debug, Clone)]
pub struct ForecastReport {
    /// `config,mase,error` for every candidate config, best marked.
    pub selection_csv: String,
    /// `timestamp,forecast` from the chosen config refitted on the full series.
    pub forecast_csv: String,
    pub best_name: String,
    pub warnings: Vec<String>,
}

pub fn forecast_report(
    series: &SeriesView,
    configs: &[ForecastConfig],
    horizon: usize,
    validation_fraction: f64,
) -> Result<ForecastReport, ReportError> {
    let selection = select_config(series, configs, horizon, validation_fraction)?;
    let mut selection_csv = String::from("config,mase,selected,error\n");
    for (i, s) in selection.scores.iter().enumerate() {
        selection_csv.push_str(&format!(
            "{},{},{},{}\n",
            s.name,
            s.mase.map(|m| m.to_string()).unwrap_or_default(),
            i == selection.best_index,
            s.error.as_deref().unwrap_or("").replace([',', '\n'], ";")
        ));
    }
    let out = forecast(series, &selection.best, horizon)?;
    let mut forecast_csv = String::from("timestamp,forecast\n");
    for (t, v) in out.timestamps.iter().zip(&out.values) {
        forecast_csv.push_str(&format!("{},{}\n", t.to_rfc3339(), v));
    }
    Ok(ForecastReport {
        selection_csv,
        forecast_csv,
        best_name: selection.best.name.clone(),
        warnings: out.warnings,
    })
}

pub fn tasks_table() -> String {
    let mut out = String::new();
    for (id, description) in builtin_tasks() {
        out.push_str(&format!("{id:<10} {description}\n"));
    }
    out
}
