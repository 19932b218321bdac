// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::datetime::{FeatureSpec, HOLIDAY_FEATURE};
use super::{BaseMethod, ForecastError};

const DEFAULT_ROLLING_WINDOW: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseMethodName {
    SeasonalNaiveAdaptive,
    MedianAll,
    RollingMedian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendMethod {
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeasonalMethod {
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualMethod {
    Median,
}

fn one() -> f64 {
    1.0
}

/// One stage of the decomposition, in config-file form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ComponentSpec {
    Base {
        method: BaseMethodName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<usize>,
    },
    Trend {
        method: TrendMethod,
        degree: usize,
        #[serde(default = "one")]
        damping_factor: f64,
    },
    Seasonal {
        method: SeasonalMethod,
        window_multiplier: f64,
    },
    Datetime {
        features: Vec<FeatureSpec>,
    },
    Residual {
        method: ResidualMethod,
        window_size: usize,
        #[serde(default = "one")]
        decay_factor: f64,
    },
}

impl ComponentSpec {
    pub fn type_name(&self) -> &'static str {
        match self {
            ComponentSpec::Base { .. } => "base",
            ComponentSpec::Trend { .. } => "trend",
            ComponentSpec::Seasonal { .. } => "seasonal",
            ComponentSpec::Datetime { .. } => "datetime",
            ComponentSpec::Residual { .. } => "residual",
        }
    }

    pub fn base_method(&self) -> Option<BaseMethod> {
        match self {
            ComponentSpec::Base { method, window } => Some(match method {
                BaseMethodName::SeasonalNaiveAdaptive => BaseMethod::SeasonalNaiveAdaptive,
                BaseMethodName::MedianAll => BaseMethod::MedianAll,
                BaseMethodName::RollingMedian => BaseMethod::RollingMedian {
                    window: window.unwrap_or(DEFAULT_ROLLING_WINDOW),
                },
            }),
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), ForecastError> {
        let bad = |msg: String| Err(ForecastError::InvalidComponent(msg));
        match self {
            ComponentSpec::Base {
                window: Some(0), ..
            } => bad("rolling median window must be >= 1".into()),
            ComponentSpec::Trend {
                degree,
                damping_factor,
                ..
            } => {
                if *degree > 2 {
                    bad(format!("trend degree must be 0, 1 or 2, got {degree}"))
                } else if !(*damping_factor > 0.0 && *damping_factor <= 1.0) {
                    bad(format!(
                        "damping factor must be in (0, 1], got {damping_factor}"
                    ))
                } else {
                    Ok(())
                }
            }
            ComponentSpec::Seasonal {
                window_multiplier, ..
            } if !(*window_multiplier > 0.0 && window_multiplier.is_finite()) => bad(format!(
                "window multiplier must be positive, got {window_multiplier}"
            )),
            ComponentSpec::Residual {
                window_size,
                decay_factor,
                ..
            } => {
                if *window_size == 0 {
                    bad("residual window must be >= 1".into())
                } else if !(*decay_factor > 0.0 && *decay_factor <= 1.0) {
                    bad(format!(
                        "decay factor must be in (0, 1], got {decay_factor}"
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// A named preset of the decomposition forecaster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub components: Vec<ComponentSpec>,
    pub transform_log: bool,
    pub non_negative: bool,
    pub version: u32,
}

impl ForecastConfig {
    pub fn validate(&self) -> Result<(), ForecastError> {
        let mut seen = Vec::new();
        for c in &self.components {
            c.validate()?;
            if seen.contains(&c.type_name()) {
                return Err(ForecastError::InvalidComponent(format!(
                    "config `{}` has more than one {} component",
                    self.name,
                    c.type_name()
                )));
            }
            seen.push(c.type_name());
        }
        Ok(())
    }
}

/// Parse a JSON list of configs (a single object is accepted too).
pub fn load_configs(text: &str) -> Result<Vec<ForecastConfig>, ForecastError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<ForecastConfig>),
        One(ForecastConfig),
    }
    let configs =
        match serde_json::from_str(text).map_err(|e| ForecastError::Parse(e.to_string()))? {
            OneOrMany::Many(v) => v,
            OneOrMany::One(c) => vec![c],
        };
    if configs.is_empty() {
        return Err(ForecastError::Parse("config list is empty".into()));
    }
    configs.iter().try_for_each(ForecastConfig::validate)?;
    Ok(configs)
}

fn holiday_countries() -> Vec<String> {
    ["US", "DE", "CN", "GB", "CA", "AU"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn names(list: &[&str]) -> Vec<FeatureSpec> {
    list.iter()
        .map(|n| FeatureSpec::Name(n.to_string()))
        .collect()
}

fn calendar_features() -> Vec<FeatureSpec> {
    let mut f = vec![FeatureSpec::Cross(vec!["dayofweek".into(), "hour".into()])];
    f.extend(names(&[
        "month",
        "is_month_start",
        "weekofyear",
        "is_weekend",
        "is_quarter_start",
    ]));
    f.push(FeatureSpec::Holiday {
        name: HOLIDAY_FEATURE.into(),
        country_codes: holiday_countries(),
    });
    f
}

fn base(method: BaseMethodName) -> ComponentSpec {
    ComponentSpec::Base {
        method,
        window: None,
    }
}

fn trend(degree: usize, damping_factor: f64) -> ComponentSpec {
    ComponentSpec::Trend {
        method: TrendMethod::Polynomial,
        degree,
        damping_factor,
    }
}

fn seasonal(window_multiplier: f64) -> ComponentSpec {
    ComponentSpec::Seasonal {
        method: SeasonalMethod::Average,
        window_multiplier,
    }
}

fn residual(window_size: usize, decay_factor: f64) -> ComponentSpec {
    ComponentSpec::Residual {
        method: ResidualMethod::Median,
        window_size,
        decay_factor,
    }
}

fn preset(
    name: &str,
    description: &str,
    components: Vec<ComponentSpec>,
    transform_log: bool,
) -> ForecastConfig {
    ForecastConfig {
        name: name.into(),
        description: description.into(),
        components,
        transform_log,
        non_negative: transform_log,
        version: 4,
    }
}

/// The eight shipped presets: a seasonal-naive baseline, then calendar-heavy
/// and trend-heavy designs, each with and without the log transform.
pub fn builtin_presets() -> Vec<ForecastConfig> {
    vec![
        preset(
            "seasonal_naive_baseline",
            "Repeat the last detected cycle.",
            vec![base(BaseMethodName::SeasonalNaiveAdaptive)],
            false,
        ),
        preset(
            "additive_damped_linear_LogTransform",
            "Median level, damped linear trend, averaged seasonality and decaying residual correction on log1p values.",
            vec![
                base(BaseMethodName::MedianAll),
                trend(1, 0.90),
                seasonal(5.0),
                residual(18, 0.90),
            ],
            true,
        ),
        preset(
            "date_features_seasonal",
            "Median level plus calendar and holiday effects, averaged seasonality and residual correction.",
            vec![
                base(BaseMethodName::MedianAll),
                ComponentSpec::Datetime {
                    features: calendar_features(),
                },
                seasonal(4.0),
                residual(14, 0.92),
            ],
            false,
        ),
        preset(
            "additive_damped_linear",
            "Damped linear trend model on raw values.",
            vec![
                base(BaseMethodName::MedianAll),
                trend(1, 0.90),
                seasonal(5.0),
                residual(18, 0.90),
            ],
            false,
        ),
        preset(
            "date_features_seasonal_LogTransform",
            "Calendar and holiday effects on log1p values.",
            vec![
                base(BaseMethodName::MedianAll),
                ComponentSpec::Datetime {
                    features: calendar_features(),
                },
                seasonal(4.0),
                residual(14, 0.92),
            ],
            true,
        ),
        preset(
            "quadratic_damped_trend",
            "Rolling-median level with a strongly damped quadratic trend.",
            vec![
                ComponentSpec::Base {
                    method: BaseMethodName::RollingMedian,
                    window: Some(28),
                },
                trend(2, 0.80),
                seasonal(3.0),
                residual(7, 0.85),
            ],
            false,
        ),
        preset(
            "quadratic_damped_trend_LogTransform",
            "Strongly damped quadratic trend on log1p values.",
            vec![
                base(BaseMethodName::MedianAll),
                trend(2, 0.80),
                seasonal(3.0),
                residual(7, 0.85),
            ],
            true,
        ),
        preset(
            "calendar_rolling_median",
            "Rolling-median level with day-of-week, hour and holiday effects only.",
            vec![
                ComponentSpec::Base {
                    method: BaseMethodName::RollingMedian,
                    window: Some(14),
                },
                ComponentSpec::Datetime {
                    features: vec![
                        FeatureSpec::Cross(vec!["dayofweek".into(), "hour".into()]),
                        FeatureSpec::Name("is_weekend".into()),
                        FeatureSpec::Holiday {
                            name: HOLIDAY_FEATURE.into(),
                            country_codes: holiday_countries(),
                        },
                    ],
                },
                residual(7, 0.90),
            ],
            false,
        ),
    ]
}
