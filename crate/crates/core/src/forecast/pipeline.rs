// SPDX-License-Identifier: Apache-2.0

use chrono::{DateTime, FixedOffset};
use serde::Serialize;

use super::components::{fit_base, fit_residual_correction, fit_seasonal, fit_trend, ComponentFit};
use super::config::ComponentSpec;
use super::datetime::{fit_datetime, DateFeature};
use super::series::{preprocess, SeriesView};
use super::{ForecastConfig, ForecastError};

/// One component's contribution, in transformed units.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTrace {
    pub kind: &'static str,
    pub fitted: Vec<f64>,
    pub forecast: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastOutput {
    pub timestamps: Vec<DateTime<FixedOffset>>,
    /// Final forecasts in original units.
    pub values: Vec<f64>,
    /// Training values after imputation and the optional log transform.
    pub preprocessed: Vec<f64>,
    pub components: Vec<ComponentTrace>,
    /// What is left of `preprocessed` after every component's fit.
    pub residuals: Vec<f64>,
    pub warnings: Vec<String>,
}

fn fit_component(
    spec: &ComponentSpec,
    residuals: &[f64],
    series: &SeriesView,
    candidates: &[usize],
) -> Result<ComponentFit, ForecastError> {
    match spec {
        ComponentSpec::Base { .. } => fit_base(
            residuals,
            spec.base_method().expect("base spec"),
            candidates,
        ),
        ComponentSpec::Trend {
            degree,
            damping_factor,
            ..
        } => fit_trend(residuals, *degree, *damping_factor),
        ComponentSpec::Seasonal {
            window_multiplier, ..
        } => fit_seasonal(residuals, candidates, *window_multiplier),
        ComponentSpec::Datetime { features } => {
            let features = features
                .iter()
                .map(DateFeature::from_spec)
                .collect::<Result<Vec<_>, _>>()?;
            fit_datetime(residuals, &series.timestamps, &features)
        }
        ComponentSpec::Residual {
            window_size,
            decay_factor,
            ..
        } => fit_residual_correction(residuals, *window_size, *decay_factor),
    }
}

/// Fit `config` to `series` and forecast `horizon` steps.
///
/// Components are fitted in config order, each on what the previous ones
/// left unexplained; their forecasts are summed, the log transform is
/// undone and, for non-negative configs, negatives are clamped to zero.
pub fn forecast(
    series: &SeriesView,
    config: &ForecastConfig,
    horizon: usize,
) -> Result<ForecastOutput, ForecastError> {
    if horizon == 0 {
        return Err(ForecastError::InvalidHorizon);
    }
    config.validate()?;
    let preprocessed = preprocess(&series.values, config.transform_log)?;
    let future = series.future_timestamps(horizon)?;
    let candidates = series.frequency.cycle_candidates();

    let mut residuals = preprocessed.clone();
    let mut total = vec![0.0; horizon];
    let mut components = Vec::with_capacity(config.components.len());
    let mut warnings = Vec::new();
    for spec in &config.components {
        let fit = fit_component(spec, &residuals, series, &candidates)?;
        for (r, f) in residuals.iter_mut().zip(&fit.fitted) {
            *r -= f;
        }
        let fc = fit.model.forecast(&future);
        for (t, f) in total.iter_mut().zip(&fc) {
            *t += f;
        }
        warnings.extend(
            fit.warnings
                .iter()
                .map(|w| format!("{}: {w}", spec.type_name())),
        );
        components.push(ComponentTrace {
            kind: spec.type_name(),
            fitted: fit.fitted,
            forecast: fc,
        });
    }

    let values = total
        .into_iter()
        .map(|v| if config.transform_log { v.exp_m1() } else { v })
        .map(|v| if config.non_negative { v.max(0.0) } else { v })
        .collect();
    Ok(ForecastOutput {
        timestamps: future,
        values,
        preprocessed,
        components,
        residuals,
        warnings,
    })
}

/// Mean absolute forecast error over the in-sample MAE of the one-step
/// seasonal-naive predictor `y[t - season_length]`.
pub fn mase(
    forecast: &[f64],
    actuals: &[f64],
    training: &[f64],
    season_length: usize,
) -> Result<f64, ForecastError> {
    if forecast.len() != actuals.len() || forecast.is_empty() {
        return Err(ForecastError::InvalidHorizon);
    }
    let m = season_length.max(1);
    if training.len() < m + 1 {
        return Err(ForecastError::TooShort {
            needed: m + 1,
            got: training.len(),
        });
    }
    let scale = (m..training.len())
        .map(|t| (training[t] - training[t - m]).abs())
        .sum::<f64>()
        / (training.len() - m) as f64;
    if scale == 0.0 || !scale.is_finite() {
        return Err(ForecastError::ZeroScale);
    }
    let mae = forecast
        .iter()
        .zip(actuals)
        .map(|(f, a)| (f - a).abs())
        .sum::<f64>()
        / forecast.len() as f64;
    Ok(mae / scale)
}

/// Validation outcome of one config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigScore {
    pub name: String,
    pub mase: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub best_index: usize,
    pub best: ForecastConfig,
    pub scores: Vec<ConfigScore>,
    pub validation_len: usize,
}

/// Points held back for validation: `max(2 * horizon, ceil(fraction * n))`.
pub fn validation_len(n: usize, horizon: usize, validation_fraction: f64) -> usize {
    (2 * horizon).max((validation_fraction * n as f64).ceil() as usize)
}

/// Score each config on a held-back tail and return the lowest-MASE one
/// (earliest on ties). Configs only ever see data before the split.
pub fn select_config(
    series: &SeriesView,
    configs: &[ForecastConfig],
    horizon: usize,
    validation_fraction: f64,
) -> Result<Selection, ForecastError> {
    if configs.is_empty() {
        return Err(ForecastError::AllConfigsFailed("no configs given".into()));
    }
    if horizon == 0 {
        return Err(ForecastError::InvalidHorizon);
    }
    let n = series.len();
    let v = validation_len(n, horizon, validation_fraction);
    if v >= n {
        return Err(ForecastError::TooShort {
            needed: v + 2,
            got: n,
        });
    }
    let head = series.head(n - v);
    let head_values = preprocess(&head.values, false)?;
    let tail: Vec<Option<f64>> = series.values[n - v..].to_vec();
    let mut season = series.frequency.season_length();
    if head_values.len() <= season {
        season = 1;
    }

    let mut scores = Vec::with_capacity(configs.len());
    let mut best: Option<(usize, f64)> = None;
    for (i, config) in configs.iter().enumerate() {
        let outcome = forecast(&head, config, v).and_then(|out| {
            let (fc, actual): (Vec<f64>, Vec<f64>) = out
                .values
                .iter()
                .zip(&tail)
                .filter_map(|(f, a)| a.map(|a| (*f, a)))
                .unzip();
            mase(&fc, &actual, &head_values, season)
        });
        match outcome {
            Ok(score) if score.is_finite() => {
                if best.is_none_or(|(_, b)| score < b) {
                    best = Some((i, score));
                }
                scores.push(ConfigScore {
                    name: config.name.clone(),
                    mase: Some(score),
                    error: None,
                });
            }
            Ok(score) => scores.push(ConfigScore {
                name: config.name.clone(),
                mase: None,
                error: Some(format!("non-finite MASE {score}")),
            }),
            Err(e) => scores.push(ConfigScore {
                name: config.name.clone(),
                mase: None,
                error: Some(e.to_string()),
            }),
        }
    }
    let Some((best_index, _)) = best else {
        let listing = scores
            .iter()
            .map(|s| format!("{}: {}", s.name, s.error.as_deref().unwrap_or("?")))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(ForecastError::AllConfigsFailed(listing));
    };
    Ok(Selection {
        best_index,
        best: configs[best_index].clone(),
        scores,
        validation_len: v,
    })
}
