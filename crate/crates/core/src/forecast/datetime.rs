// SPDX-License-Identifier: Apache-2.0

//! Calendar features and the median-effect datetime component.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use chrono::{DateTime, Datelike, FixedOffset, NaiveDate, Timelike, Weekday};
use serde::{Deserialize, Serialize};

use super::components::{ComponentFit, ComponentModel};
use super::{median, ForecastError};

/// Name under which the holiday feature appears in config files.
pub const HOLIDAY_FEATURE: &str = "_is_holiday_flag";

/// Years covered by the bundled holiday tables; dates outside count as ordinary days.
const HOLIDAY_YEARS: std::ops::Range<i32> = 2000..2031;

/// Union of holiday dates for a set of countries.
#[derive(Debug, Clone, PartialEq)]
pub struct HolidayCalendar {
    countries: Vec<String>,
    dates: Arc<HashSet<NaiveDate>>,
}

impl HolidayCalendar {
    pub fn new(country_codes: &[String]) -> Result<Self, ForecastError> {
        static CACHE: OnceLock<Mutex<HashMap<Vec<String>, Arc<HashSet<NaiveDate>>>>> =
            OnceLock::new();

        let mut key: Vec<String> = country_codes
            .iter()
            .map(|c| c.to_ascii_uppercase())
            .collect();
        key.sort();
        key.dedup();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(dates) = cache.lock().expect("holiday cache").get(&key) {
            return Ok(Self {
                countries: key,
                dates: Arc::clone(dates),
            });
        }

        let countries = key
            .iter()
            .map(|c| {
                holidays::Country::from_str(c).map_err(|_| ForecastError::UnknownCountry(c.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let map = holidays::Builder::new()
            .countries(&countries)
            .years(HOLIDAY_YEARS)
            .build()
            .map_err(|e| ForecastError::InvalidComponent(format!("holiday tables: {e}")))?;
        let dates: HashSet<NaiveDate> = map
            .values()
            .flat_map(|years| years.values())
            .flat_map(|days| days.keys().copied())
            .collect();
        let dates = Arc::new(dates);
        cache
            .lock()
            .expect("holiday cache")
            .insert(key.clone(), Arc::clone(&dates));
        Ok(Self {
            countries: key,
            dates,
        })
    }

    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.dates.contains(&date)
    }
}

/// One categorical calendar feature, or a crossing of several.
#[derive(Debug, Clone, PartialEq)]
pub enum DateFeature {
    DayOfWeek,
    Hour,
    Month,
    WeekOfYear,
    IsWeekend,
    IsMonthStart,
    IsQuarterStart,
    Holiday(HolidayCalendar),
    Cross(Vec<DateFeature>),
}

impl DateFeature {
    pub fn from_name(name: &str) -> Result<Self, ForecastError> {
        Ok(match name {
            "dayofweek" => DateFeature::DayOfWeek,
            "hour" => DateFeature::Hour,
            "month" => DateFeature::Month,
            "weekofyear" => DateFeature::WeekOfYear,
            "is_weekend" => DateFeature::IsWeekend,
            "is_month_start" => DateFeature::IsMonthStart,
            "is_quarter_start" => DateFeature::IsQuarterStart,
            other => return Err(ForecastError::UnknownFeature(other.to_string())),
        })
    }

    pub fn from_spec(spec: &FeatureSpec) -> Result<Self, ForecastError> {
        match spec {
            FeatureSpec::Name(name) => Self::from_name(name),
            FeatureSpec::Cross(names) => {
                if names.len() < 2 {
                    return Err(ForecastError::InvalidComponent(
                        "a feature crossing needs two or more names".into(),
                    ));
                }
                Ok(DateFeature::Cross(
                    names
                        .iter()
                        .map(|n| Self::from_name(n))
                        .collect::<Result<_, _>>()?,
                ))
            }
            FeatureSpec::Holiday {
                name,
                country_codes,
            } => {
                if name != HOLIDAY_FEATURE {
                    return Err(ForecastError::UnknownFeature(name.clone()));
                }
                Ok(DateFeature::Holiday(HolidayCalendar::new(country_codes)?))
            }
        }
    }

    /// Category key of timestamp `t`, read in its own UTC offset.
    pub fn category(&self, t: &DateTime<FixedOffset>) -> Vec<i64> {
        let local = t.naive_local();
        let flag = |b: bool| vec![b as i64];
        match self {
            DateFeature::DayOfWeek => vec![local.weekday().num_days_from_monday() as i64],
            DateFeature::Hour => vec![local.hour() as i64],
            DateFeature::Month => vec![local.month() as i64],
            DateFeature::WeekOfYear => vec![local.iso_week().week() as i64],
            DateFeature::IsWeekend => flag(matches!(local.weekday(), Weekday::Sat | Weekday::Sun)),
            DateFeature::IsMonthStart => flag(local.day() == 1),
            DateFeature::IsQuarterStart => {
                flag(local.day() == 1 && local.month0().is_multiple_of(3))
            }
            DateFeature::Holiday(cal) => flag(cal.contains(local.date())),
            DateFeature::Cross(parts) => parts.iter().flat_map(|p| p.category(t)).collect(),
        }
    }
}

/// Serialized form of a feature, mirroring the config-file grammar:
/// a bare name, a list of names to cross, or the holiday object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureSpec {
    Name(String),
    Cross(Vec<String>),
    Holiday {
        name: String,
        country_codes: Vec<String>,
    },
}

/// Median residual per category of each feature. Features are fitted
/// independently on the same residuals and their effects summed; a category
/// never seen in training contributes 0.
pub fn fit_datetime(
    residuals: &[f64],
    timestamps: &[DateTime<FixedOffset>],
    features: &[DateFeature],
) -> Result<ComponentFit, ForecastError> {
    assert_eq!(
        residuals.len(),
        timestamps.len(),
        "one timestamp per residual"
    );
    let keys: Vec<Vec<Vec<i64>>> = features
        .iter()
        .map(|f| timestamps.iter().map(|t| f.category(t)).collect())
        .collect();
    let mut tables = Vec::with_capacity(features.len());
    for (feature, feature_keys) in features.iter().zip(&keys) {
        let mut groups: BTreeMap<Vec<i64>, Vec<f64>> = BTreeMap::new();
        for (k, r) in feature_keys.iter().zip(residuals) {
            groups.entry(k.clone()).or_default().push(*r);
        }
        let table: BTreeMap<Vec<i64>, f64> =
            groups.into_iter().map(|(k, v)| (k, median(&v))).collect();
        tables.push((feature.clone(), table));
    }
    let fitted = (0..residuals.len())
        .map(|i| {
            tables
                .iter()
                .zip(&keys)
                .map(|((_, table), k)| table[&k[i]])
                .sum()
        })
        .collect();
    Ok(ComponentFit {
        fitted,
        model: ComponentModel::Datetime(tables),
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{TimeDelta, TimeZone, Utc};

    fn days(start: (i32, u32, u32), n: usize) -> Vec<DateTime<FixedOffset>> {
        let t0 = Utc
            .with_ymd_and_hms(start.0, start.1, start.2, 0, 0, 0)
            .unwrap()
            .fixed_offset();
        (0..n).map(|i| t0 + TimeDelta::days(i as i64)).collect()
    }

    #[test]
    fn weekend_effect() {
        let ts = days((2024, 1, 1), 28);
        let r: Vec<f64> = ts
            .iter()
            .map(|t| {
                if t.weekday().number_from_monday() >= 6 {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let fit = fit_datetime(&r, &ts, &[DateFeature::IsWeekend]).unwrap();
        assert_eq!(fit.fitted, r);
        let future = days((2024, 1, 29), 7);
        let fc = fit.model.forecast(&future);
        for (t, v) in future.iter().zip(fc) {
            let weekend = t.weekday().number_from_monday() >= 6;
            assert_eq!(v, if weekend { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn empty_feature_list_is_zero() {
        let ts = days((2024, 1, 1), 5);
        let fit = fit_datetime(&[1.0; 5], &ts, &[]).unwrap();
        assert_eq!(fit.fitted, vec![0.0; 5]);
        assert_eq!(fit.model.forecast(&ts), vec![0.0; 5]);
    }

    #[test]
    fn unseen_category_contributes_nothing() {
        let ts = days((2024, 1, 1), 10);
        let fit = fit_datetime(&[2.0; 10], &ts, &[DateFeature::Month]).unwrap();
        assert_eq!(fit.model.forecast(&days((2024, 3, 1), 2)), vec![0.0, 0.0]);
    }

    #[test]
    fn holiday_calendar_covers_requested_countries() {
        let codes: Vec<String> = ["US", "DE", "CN", "GB", "CA", "AU"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let cal = HolidayCalendar::new(&codes).unwrap();
        let d = |y, m, day| NaiveDate::from_ymd_opt(y, m, day).unwrap();
        assert!(cal.contains(d(2022, 7, 4))); // US independence day
        assert!(cal.contains(d(2022, 10, 3))); // German unity day
        assert!(cal.contains(d(2022, 7, 1))); // Canada day
        assert!(cal.contains(d(2022, 1, 26))); // Australia day
        assert!(!cal.contains(d(2022, 7, 5)));
        let us_only = HolidayCalendar::new(&["us".to_string()]).unwrap();
        assert!(!us_only.contains(d(2022, 10, 3)));
        assert!(matches!(
            HolidayCalendar::new(&["ZZ".to_string()]),
            Err(ForecastError::UnknownCountry(_))
        ));
    }

    #[test]
    fn crossing_and_spec_parsing() {
        let spec: FeatureSpec = serde_json::from_str(r#"["dayofweek","hour"]"#).unwrap();
        let f = DateFeature::from_spec(&spec).unwrap();
        let t = Utc
            .with_ymd_and_hms(2024, 1, 3, 13, 0, 0)
            .unwrap()
            .fixed_offset();
        assert_eq!(f.category(&t), vec![2, 13]);
        assert!(matches!(
            DateFeature::from_name("fortnight"),
            Err(ForecastError::UnknownFeature(_))
        ));
        let q = DateFeature::IsQuarterStart;
        assert_eq!(
            q.category(
                &Utc.with_ymd_and_hms(2024, 4, 1, 0, 0, 0)
                    .unwrap()
                    .fixed_offset()
            ),
            vec![1]
        );
        assert_eq!(
            q.category(
                &Utc.with_ymd_and_hms(2024, 5, 1, 0, 0, 0)
                    .unwrap()
                    .fixed_offset()
            ),
            vec![0]
        );
    }
}
