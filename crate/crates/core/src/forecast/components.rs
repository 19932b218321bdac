// SPDX-License-Identifier: Apache-2.0

//! Component fitters. Each takes the residuals left by earlier components
//! and returns in-sample fitted values plus a model that extrapolates.

use std::collections::BTreeMap;

use chrono::{DateTime, FixedOffset};

use super::datetime::DateFeature;
use super::{median, BaseMethod, ForecastError};

/// A fitted component able to produce out-of-sample values.
#[derive(Debug, Clone, PartialEq)]
pub enum ComponentModel {
    Constant(f64),
    /// Repeats `cycle` from its first element onwards.
    RepeatCycle(Vec<f64>),
    Trend {
        /// Coefficients of the polynomial in `u = t / scale`.
        coefficients: Vec<f64>,
        scale: f64,
        last_index: usize,
        damping_factor: f64,
    },
    Seasonal {
        /// Mean per phase, phase 0 being the first observation.
        phase_means: Vec<f64>,
        next_index: usize,
    },
    Datetime(Vec<(DateFeature, BTreeMap<Vec<i64>, f64>)>),
    Decay {
        level: f64,
        decay_factor: f64,
    },
    Zero,
}

fn poly(coefficients: &[f64], u: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

impl ComponentModel {
    /// Values for steps `1..=future.len()` past the end of the fitted data.
    pub fn forecast(&self, future: &[DateTime<FixedOffset>]) -> Vec<f64> {
        let horizon = future.len();
        match self {
            ComponentModel::Constant(c) => vec![*c; horizon],
            ComponentModel::RepeatCycle(cycle) => {
                (0..horizon).map(|i| cycle[i % cycle.len()]).collect()
            }
            ComponentModel::Trend {
                coefficients,
                scale,
                last_index,
                damping_factor,
            } => {
                let last = poly(coefficients, *last_index as f64 / scale);
                (1..=horizon)
                    .map(|h| {
                        let ahead = poly(coefficients, (last_index + h) as f64 / scale);
                        last + damping_factor.powi(h as i32) * (ahead - last)
                    })
                    .collect()
            }
            ComponentModel::Seasonal {
                phase_means,
                next_index,
            } => (0..horizon)
                .map(|i| phase_means[(next_index + i) % phase_means.len()])
                .collect(),
            ComponentModel::Datetime(tables) => future
                .iter()
                .map(|t| {
                    tables
                        .iter()
                        .map(|(feature, table)| {
                            table.get(&feature.category(t)).copied().unwrap_or(0.0)
                        })
                        .sum()
                })
                .collect(),
            ComponentModel::Decay {
                level,
                decay_factor,
            } => (1..=horizon)
                .map(|h| level * decay_factor.powi(h as i32))
                .collect(),
            ComponentModel::Zero => vec![0.0; horizon],
        }
    }
}

/// In-sample fit plus the extrapolating model.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentFit {
    pub fitted: Vec<f64>,
    pub model: ComponentModel,
    pub warnings: Vec<String>,
}

impl ComponentFit {
    fn new(fitted: Vec<f64>, model: ComponentModel) -> Self {
        Self {
            fitted,
            model,
            warnings: Vec::new(),
        }
    }

    fn zero(n: usize, warning: String) -> Self {
        Self {
            fitted: vec![0.0; n],
            model: ComponentModel::Zero,
            warnings: vec![warning],
        }
    }
}

fn autocorrelation(x: &[f64], lag: usize) -> f64 {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let denom: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    if denom == 0.0 {
        return 0.0;
    }
    let num: f64 = (0..n - lag)
        .map(|i| (x[i] - mean) * (x[i + lag] - mean))
        .sum();
    num / denom
}

/// Candidate cycle with the largest autocorrelation among those that fit at
/// least twice into the series. Ties keep the earlier candidate.
pub fn detect_cycle(values: &[f64], candidates: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &p in candidates {
        if p < 2 || values.len() < 2 * p {
            continue;
        }
        let acf = autocorrelation(values, p);
        if best.is_none_or(|(_, b)| acf > b) {
            best = Some((p, acf));
        }
    }
    best.map(|(p, _)| p)
}

fn fit_median_all(values: &[f64]) -> ComponentFit {
    let m = median(values);
    ComponentFit::new(vec![m; values.len()], ComponentModel::Constant(m))
}

/// Base level of the series.
///
/// `seasonal_naive_adaptive` repeats the last full cycle, with the cycle
/// chosen as in [`fit_seasonal`]; if no candidate cycle fits it settles for
/// the first candidate that fits once, and failing that for `median_all`.
pub fn fit_base(
    values: &[f64],
    method: BaseMethod,
    candidates: &[usize],
) -> Result<ComponentFit, ForecastError> {
    let n = values.len();
    if n == 0 {
        return Err(ForecastError::TooShort { needed: 1, got: 0 });
    }
    match method {
        BaseMethod::MedianAll => Ok(fit_median_all(values)),
        BaseMethod::RollingMedian { window } => {
            if window == 0 {
                return Err(ForecastError::InvalidComponent(
                    "rolling median window must be >= 1".into(),
                ));
            }
            if n < window {
                return Err(ForecastError::TooShort {
                    needed: window,
                    got: n,
                });
            }
            let fitted = (0..n)
                .map(|i| median(&values[(i + 1).saturating_sub(window)..=i]))
                .collect();
            Ok(ComponentFit::new(
                fitted,
                ComponentModel::Constant(median(&values[n - window..])),
            ))
        }
        BaseMethod::SeasonalNaiveAdaptive => {
            let cycle = detect_cycle(values, candidates)
                .or_else(|| candidates.iter().copied().find(|&p| p >= 2 && p <= n));
            let Some(p) = cycle else {
                let mut fit = fit_median_all(values);
                fit.warnings.push(format!(
                    "no seasonal cycle fits {n} points; seasonal naive fell back to the median"
                ));
                return Ok(fit);
            };
            let fitted = (0..n)
                .map(|i| if i >= p { values[i - p] } else { values[i] })
                .collect();
            Ok(ComponentFit::new(
                fitted,
                ComponentModel::RepeatCycle(values[n - p..].to_vec()),
            ))
        }
    }
}

/// Solve the small dense system `a x = b` by Gaussian elimination with
/// partial pivoting. `None` when singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Least-squares polynomial in the time index whose forecast increments
/// beyond the last fitted value shrink by `damping_factor^h`.
pub fn fit_trend(
    residuals: &[f64],
    degree: usize,
    damping_factor: f64,
) -> Result<ComponentFit, ForecastError> {
    if degree > 2 {
        return Err(ForecastError::InvalidComponent(format!(
            "trend degree must be 0, 1 or 2, got {degree}"
        )));
    }
    if !(damping_factor > 0.0 && damping_factor <= 1.0) {
        return Err(ForecastError::InvalidComponent(format!(
            "damping factor must be in (0, 1], got {damping_factor}"
        )));
    }
    let n = residuals.len();
    if n < degree + 1 {
        return Err(ForecastError::TooShort {
            needed: degree + 1,
            got: n,
        });
    }
    // scaling time onto [0, 1] keeps the normal equations well conditioned
    let scale = (n.max(2) - 1) as f64;
    let m = degree + 1;
    let mut ata = vec![vec![0.0; m]; m];
    let mut atb = vec![0.0; m];
    for (t, y) in residuals.iter().enumerate() {
        let u = t as f64 / scale;
        let powers: Vec<f64> = (0..m).map(|k| u.powi(k as i32)).collect();
        for i in 0..m {
            atb[i] += powers[i] * y;
            for j in 0..m {
                ata[i][j] += powers[i] * powers[j];
            }
        }
    }
    let coefficients = solve(ata, atb).ok_or(ForecastError::TooShort {
        needed: degree + 1,
        got: n,
    })?;
    let fitted = (0..n)
        .map(|t| poly(&coefficients, t as f64 / scale))
        .collect();
    Ok(ComponentFit::new(
        fitted,
        ComponentModel::Trend {
            coefficients,
            scale,
            last_index: n - 1,
            damping_factor,
        },
    ))
}

/// Per-phase means over the last `ceil(window_multiplier)` cycles.
pub fn fit_seasonal(
    residuals: &[f64],
    candidates: &[usize],
    window_multiplier: f64,
) -> Result<ComponentFit, ForecastError> {
    if !(window_multiplier > 0.0 && window_multiplier.is_finite()) {
        return Err(ForecastError::InvalidComponent(format!(
            "window multiplier must be positive, got {window_multiplier}"
        )));
    }
    let n = residuals.len();
    let Some(p) = detect_cycle(residuals, candidates) else {
        return Ok(ComponentFit::zero(
            n,
            format!("no candidate cycle {candidates:?} fits twice into {n} points; seasonal component is zero"),
        ));
    };
    let cycles = window_multiplier.ceil() as usize;
    let start = n.saturating_sub(cycles * p);
    let mut sums = vec![0.0; p];
    let mut counts = vec![0usize; p];
    for (i, r) in residuals.iter().enumerate().skip(start) {
        sums[i % p] += r;
        counts[i % p] += 1;
    }
    let phase_means: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, c)| if *c == 0 { 0.0 } else { s / *c as f64 })
        .collect();
    let fitted = (0..n).map(|i| phase_means[i % p]).collect();
    Ok(ComponentFit::new(
        fitted,
        ComponentModel::Seasonal {
            phase_means,
            next_index: n,
        },
    ))
}

/// Median of the last `window_size` residuals, fading by `decay_factor^h`.
/// Contributes nothing in-sample.
pub fn fit_residual_correction(
    residuals: &[f64],
    window_size: usize,
    decay_factor: f64,
) -> Result<ComponentFit, ForecastError> {
    if window_size == 0 {
        return Err(ForecastError::InvalidComponent(
            "residual window must be >= 1".into(),
        ));
    }
    if !(decay_factor > 0.0 && decay_factor <= 1.0) {
        return Err(ForecastError::InvalidComponent(format!(
            "decay factor must be in (0, 1], got {decay_factor}"
        )));
    }
    let n = residuals.len();
    if n == 0 {
        return Err(ForecastError::TooShort { needed: 1, got: 0 });
    }
    let level = median(&residuals[n.saturating_sub(window_size)..]);
    Ok(ComponentFit::new(
        vec![0.0; n],
        ComponentModel::Decay {
            level,
            decay_factor,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{TimeDelta, TimeZone, Utc};

    fn future(h: usize) -> Vec<DateTime<FixedOffset>> {
        let t0 = Utc
            .with_ymd_and_hms(2024, 1, 1, 0, 0, 0)
            .unwrap()
            .fixed_offset();
        (1..=h).map(|i| t0 + TimeDelta::days(i as i64)).collect()
    }

    #[test]
    fn constant_series_any_base() {
        let v = vec![3.5; 30];
        for method in [
            BaseMethod::MedianAll,
            BaseMethod::RollingMedian { window: 5 },
            BaseMethod::SeasonalNaiveAdaptive,
        ] {
            let fit = fit_base(&v, method, &[7]).unwrap();
            assert_eq!(fit.model.forecast(&future(10)), vec![3.5; 10]);
        }
    }

    #[test]
    fn median_all_base() {
        let fit = fit_base(&[1.0, 2.0, 100.0], BaseMethod::MedianAll, &[]).unwrap();
        assert_eq!(fit.model, ComponentModel::Constant(2.0));
    }

    #[test]
    fn seasonal_naive_repeats_last_cycle() {
        let v: Vec<f64> = (0..40)
            .map(|i| ((i * 37) % 11) as f64 + (i % 7) as f64 * 10.0)
            .collect();
        let fit = fit_base(&v, BaseMethod::SeasonalNaiveAdaptive, &[7]).unwrap();
        let fc = fit.model.forecast(&future(20));
        for h in 1..=20 {
            // brute force: walk back whole cycles until inside the data
            let mut idx = v.len() - 1 + h;
            while idx >= v.len() {
                idx -= 7;
            }
            assert_eq!(fc[h - 1], v[idx]);
        }
    }

    #[test]
    fn seasonal_naive_short_series_falls_back() {
        let fit = fit_base(&[1.0, 5.0, 3.0], BaseMethod::SeasonalNaiveAdaptive, &[7]).unwrap();
        assert_eq!(fit.model, ComponentModel::Constant(3.0));
        assert_eq!(fit.warnings.len(), 1);
    }

    #[test]
    fn trend_exact_and_damped() {
        let slope = 0.75;
        let r: Vec<f64> = (0..20).map(|t| 2.0 + slope * t as f64).collect();
        let last = r[19];
        let undamped = fit_trend(&r, 1, 1.0).unwrap().model.forecast(&future(5));
        let damped = fit_trend(&r, 1, 0.5).unwrap().model.forecast(&future(5));
        for h in 1..=5 {
            let inc = slope * h as f64;
            assert!((undamped[h - 1] - (last + inc)).abs() < 1e-10);
            assert!((damped[h - 1] - (last + 0.5f64.powi(h as i32) * inc)).abs() < 1e-10);
        }
        let zero = fit_trend(&[0.0; 10], 2, 0.9).unwrap();
        assert!(zero
            .model
            .forecast(&future(3))
            .iter()
            .all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn trend_errors() {
        assert!(matches!(
            fit_trend(&[1.0], 1, 1.0),
            Err(ForecastError::TooShort { .. })
        ));
        assert!(fit_trend(&[1.0; 5], 1, 0.0).is_err());
        assert!(fit_trend(&[1.0; 5], 3, 1.0).is_err());
    }

    #[test]
    fn quadratic_trend_recovered() {
        let r: Vec<f64> = (0..30)
            .map(|t| 1.0 - 0.2 * t as f64 + 0.01 * (t * t) as f64)
            .collect();
        let fit = fit_trend(&r, 2, 1.0).unwrap();
        for (a, b) in fit.fitted.iter().zip(&r) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn seasonal_reproduces_pure_pattern() {
        let pattern = [3.0, -1.0, 0.5, 2.0, -2.5, 1.0, -3.0];
        let r: Vec<f64> = (0..35).map(|i| pattern[i % 7]).collect();
        let fit = fit_seasonal(&r, &[7, 30, 365], 5.0).unwrap();
        assert_eq!(fit.fitted, r);
        let fc = fit.model.forecast(&future(14));
        for (h, v) in fc.iter().enumerate() {
            assert_eq!(*v, pattern[(35 + h) % 7]);
        }
    }

    #[test]
    fn seasonal_too_short_is_zero() {
        let fit = fit_seasonal(&[1.0; 10], &[7], 2.0).unwrap();
        assert_eq!(fit.model, ComponentModel::Zero);
        assert_eq!(fit.warnings.len(), 1);
    }

    #[test]
    fn residual_decay() {
        let fit = fit_residual_correction(&[5.0, 1.0, 2.0, 3.0], 3, 0.9).unwrap();
        let fc = fit.model.forecast(&future(2));
        assert!((fc[0] - 1.8).abs() < 1e-12);
        assert!((fc[1] - 1.62).abs() < 1e-12);
        let flat = fit_residual_correction(&[2.0; 4], 2, 1.0).unwrap();
        assert_eq!(flat.model.forecast(&future(3)), vec![2.0; 3]);
        let zero = fit_residual_correction(&[0.0; 4], 2, 0.5).unwrap();
        assert_eq!(zero.model.forecast(&future(3)), vec![0.0; 3]);
    }

    #[test]
    fn cycle_detection_prefers_true_period() {
        let r: Vec<f64> = (0..200).map(|i| ((i % 7) as f64).sin()).collect();
        assert_eq!(detect_cycle(&r, &[30, 7, 365]), Some(7));
        assert_eq!(detect_cycle(&r[..10], &[7]), None);
    }
}
