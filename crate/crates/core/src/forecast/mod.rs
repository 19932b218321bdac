// SPDX-License-Identifier: Apache-2.0

//! Iterative decomposition forecaster: a base level, then trend, seasonal,
//! calendar and residual components, each fitted to what the previous ones
//! left over. Forecasts are the sum of component forecasts.

mod components;
mod config;
mod datetime;
mod pipeline;
mod series;

use thiserror::Error;

pub use components::{
    detect_cycle, fit_base, fit_residual_correction, fit_seasonal, fit_trend, ComponentFit,
    ComponentModel,
};
pub use config::{
    builtin_presets, load_configs, BaseMethodName, ComponentSpec, ForecastConfig, ResidualMethod,
    SeasonalMethod, TrendMethod,
};
pub use datetime::{fit_datetime, DateFeature, FeatureSpec, HolidayCalendar, HOLIDAY_FEATURE};
pub use pipeline::{
    forecast, mase, select_config, validation_len, ComponentTrace, ConfigScore, ForecastOutput,
    Selection,
};
pub use series::{preprocess, Frequency, SeriesView};

/// Share of the training series held back by [`select_config`] unless twice the horizon is larger.
pub const DEFAULT_VALIDATION_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseMethod {
    SeasonalNaiveAdaptive,
    MedianAll,
    RollingMedian { window: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum ForecastError {
    #[error("series too short: need {needed} points, have {got}")]
    TooShort { needed: usize, got: usize },
    #[error("bad timestamps: {0}")]
    Timestamps(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("log transform needs non-negative values, found {0}")]
    NegativeForLog(f64),
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("unknown datetime feature `{0}`")]
    UnknownFeature(String),
    #[error("no holiday calendar for country `{0}`")]
    UnknownCountry(String),
    #[error("seasonal-naive scale is zero (constant training series)")]
    ZeroScale,
    #[error("horizon must be >= 1 and match the actuals")]
    InvalidHorizon,
    #[error("every config failed: {0}")]
    AllConfigsFailed(String),
}

/// Median with the mean of the middle pair for even lengths. Panics on empty input.
pub(crate) fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}
