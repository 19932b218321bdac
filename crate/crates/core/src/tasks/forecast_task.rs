// SPDX-License-Identifier: Apache-2.0

use chrono::{TimeDelta, TimeZone, Utc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::forecast::{
    forecast, mase, BaseMethodName, ComponentSpec, ForecastConfig, Frequency, ResidualMethod,
    SeasonalMethod, SeriesView, TrendMethod,
};
use crate::mutation::{Candidate, MutationSchedule, ParamConfig, ParamValue, StepLaw};

use super::{choice, number, InputFile, ScorableTask, SplitPolicy, TaskError};

pub(super) const DESCRIPTION: &str =
    "Tune a decomposition forecaster (base, damped trend, seasonal, residual) on \
three synthetic series; score is minus the geometric mean of validation MASE.";

/// Minus the geometric mean of per-dataset MASE, so that higher is better.
pub fn forecast_task_score(per_dataset_mase: &[f64]) -> Result<f64, TaskError> {
    if per_dataset_mase.is_empty() {
        return Err(TaskError::Invalid("no MASE values to aggregate".into()));
    }
    if let Some(bad) = per_dataset_mase
        .iter()
        .find(|m| !(**m > 0.0 && m.is_finite()))
    {
        return Err(TaskError::Invalid(format!(
            "MASE must be positive and finite, got {bad}"
        )));
    }
    let mean_log =
        per_dataset_mase.iter().map(|m| m.ln()).sum::<f64>() / per_dataset_mase.len() as f64;
    Ok(-mean_log.exp())
}

#[derive(Debug, Clone)]
struct Dataset {
    name: &'static str,
    series: SeriesView,
    horizon: usize,
}

fn synthetic_datasets() -> Vec<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let t0 = Utc
        .with_ymd_and_hms(2022, 1, 3, 0, 0, 0)
        .unwrap()
        .fixed_offset();
    let two_pi = std::f64::consts::TAU;

    let noise = Normal::new(0.0, 4.0).expect("valid normal");
    let hourly: Vec<f64> = (0..24 * 7 * 6)
        .map(|i| {
            let hour = (i % 24) as f64;
            let weekend = ((i / 24) % 7) >= 5;
            let level = if weekend { 80.0 } else { 100.0 };
            level + 25.0 * (two_pi * (hour - 6.0) / 24.0).sin() + noise.sample(&mut rng)
        })
        .collect();

    let noise = Normal::new(0.0, 3.0).expect("valid normal");
    let weekly = [0.0, 2.0, 4.0, 3.0, 6.0, 14.0, 11.0];
    let daily: Vec<f64> = (0..420)
        .map(|i| (40.0 + 0.05 * i as f64 + weekly[i % 7] + noise.sample(&mut rng)).max(0.0))
        .collect();

    let noise = Normal::new(0.0, 2.0).expect("valid normal");
    let monthly_values: Vec<f64> = (0..144)
        .map(|i| {
            200.0
                + 0.8 * i as f64
                + 15.0 * (two_pi * (i % 12) as f64 / 12.0).cos()
                + noise.sample(&mut rng)
        })
        .collect();
    let monthly_stamps = (0..monthly_values.len())
        .map(|i| Frequency::Months(1).advance(t0, i).expect("in range"))
        .collect();
    let monthly = SeriesView::new(
        monthly_stamps,
        monthly_values.into_iter().map(Some).collect(),
    )
    .expect("monthly series");

    vec![
        Dataset {
            name: "hourly_load",
            series: SeriesView::regular(t0, TimeDelta::hours(1), &hourly),
            horizon: 24,
        },
        Dataset {
            name: "daily_sales",
            series: SeriesView::regular(t0, TimeDelta::days(1), &daily),
            horizon: 14,
        },
        Dataset {
            name: "monthly_demand",
            series: monthly,
            horizon: 12,
        },
    ]
}

/// Hill-climbs forecaster settings. Each built-in series loses its last
/// `horizon` points as a holdout at construction; the scorer validates on
/// the final `horizon` points of what remains.
#[derive(Debug, Clone)]
pub struct ForecastTask {
    train: Vec<Dataset>,
}

impl ForecastTask {
    pub fn builtin() -> Self {
        let train = synthetic_datasets()
            .into_iter()
            .map(|d| Dataset {
                series: d.series.head(d.series.len() - d.horizon),
                ..d
            })
            .collect();
        Self { train }
    }

    /// `(name, training series, horizon)` for each dataset the scorer sees.
    pub fn datasets(&self) -> impl Iterator<Item = (&str, &SeriesView, usize)> {
        self.train.iter().map(|d| (d.name, &d.series, d.horizon))
    }

    /// Forecaster config described by a task config.
    pub fn forecast_config(config: &ParamConfig) -> Result<ForecastConfig, TaskError> {
        let base = match choice(config, "base")? {
            "median_all" => BaseMethodName::MedianAll,
            "rolling_median" => BaseMethodName::RollingMedian,
            "seasonal_naive_adaptive" => BaseMethodName::SeasonalNaiveAdaptive,
            other => return Err(TaskError::Invalid(format!("unknown base method `{other}`"))),
        };
        let transform_log = match choice(config, "transform_log")? {
            "on" => true,
            "off" => false,
            other => {
                return Err(TaskError::Invalid(format!(
                    "transform_log must be on/off, got `{other}`"
                )))
            }
        };
        let cfg = ForecastConfig {
            name: "tuned".into(),
            description: String::new(),
            components: vec![
                ComponentSpec::Base {
                    method: base,
                    window: None,
                },
                ComponentSpec::Trend {
                    method: TrendMethod::Polynomial,
                    degree: 1,
                    damping_factor: number(config, "damping_factor")?,
                },
                ComponentSpec::Seasonal {
                    method: SeasonalMethod::Average,
                    window_multiplier: number(config, "window_multiplier")?,
                },
                ComponentSpec::Residual {
                    method: ResidualMethod::Median,
                    window_size: number(config, "residual_window")?.round().max(1.0) as usize,
                    decay_factor: number(config, "decay_factor")?,
                },
            ],
            transform_log,
            non_negative: transform_log,
            version: 4,
        };
        cfg.validate()
            .map_err(|e| TaskError::Invalid(e.to_string()))?;
        Ok(cfg)
    }
}

impl ScorableTask for ForecastTask {
    fn task_id(&self) -> &str {
        "forecast"
    }

    fn description(&self) -> &str {
        DESCRIPTION
    }

    fn split_policy(&self) -> SplitPolicy {
        SplitPolicy::TrainHoldout
    }

    fn inputs(&self) -> Vec<InputFile> {
        self.train
            .iter()
            .map(|d| {
                let mut text = String::from("timestamp,value\n");
                for (t, v) in d.series.timestamps.iter().zip(&d.series.values) {
                    text.push_str(&format!(
                        "{},{}\n",
                        t.to_rfc3339(),
                        v.map(|x| x.to_string()).unwrap_or_default()
                    ));
                }
                InputFile {
                    name: format!("{}.csv", d.name),
                    bytes: text.into_bytes(),
                }
            })
            .collect()
    }

    fn root_candidate(&self) -> Candidate {
        let cfg: ParamConfig = [
            ("base", ParamValue::from("median_all")),
            ("transform_log", ParamValue::from("off")),
            ("damping_factor", ParamValue::Number(0.9)),
            ("window_multiplier", ParamValue::Number(5.0)),
            ("residual_window", ParamValue::Number(18.0)),
            ("decay_factor", ParamValue::Number(0.9)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Candidate::config(cfg).expect("valid root")
    }

    fn mutation_schedule(&self) -> MutationSchedule {
        let unit = |steps: Vec<f64>, lower, upper| StepLaw::Additive {
            steps,
            lower,
            upper,
        };
        MutationSchedule::default()
            .with(
                "base",
                StepLaw::Categorical {
                    choices: vec![
                        "median_all".into(),
                        "rolling_median".into(),
                        "seasonal_naive_adaptive".into(),
                    ],
                },
            )
            .with(
                "transform_log",
                StepLaw::Categorical {
                    choices: vec!["off".into(), "on".into()],
                },
            )
            .with("damping_factor", unit(vec![0.05, 0.02], 0.5, 1.0))
            .with("window_multiplier", unit(vec![1.0, 0.5], 1.0, 12.0))
            .with("residual_window", unit(vec![4.0, 1.0], 1.0, 60.0))
            .with("decay_factor", unit(vec![0.05, 0.02], 0.5, 1.0))
    }

    fn score_config(&self, config: &ParamConfig) -> Result<f64, TaskError> {
        let fc_config = Self::forecast_config(config)?;
        let mut scores = Vec::with_capacity(self.train.len());
        for d in &self.train {
            let n = d.series.len();
            let head = d.series.head(n - d.horizon);
            let out = forecast(&head, &fc_config, d.horizon)
                .map_err(|e| TaskError::Invalid(format!("{}: {e}", d.name)))?;
            let actual: Vec<f64> = d.series.values[n - d.horizon..]
                .iter()
                .map(|v| v.unwrap_or(f64::NAN))
                .collect();
            let training: Vec<f64> = head.values.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
            let m = mase(
                &out.values,
                &actual,
                &training,
                d.series.frequency.season_length(),
            )
            .map_err(|e| TaskError::Invalid(format!("{}: {e}", d.name)))?;
            // a perfect validation forecast would make the geometric mean degenerate
            scores.push(m.max(f64::MIN_POSITIVE));
        }
        forecast_task_score(&scores)
    }
}
