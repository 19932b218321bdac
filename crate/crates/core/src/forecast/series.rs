// SPDX-License-Identifier: Apache-2.0

use std::io::Read;

use chrono::{DateTime, Datelike, FixedOffset, Months, TimeDelta, Timelike};
use serde::Deserialize;

use super::{median, ForecastError};

/// Sampling interval of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frequency {
    /// A fixed wall-clock step.
    Fixed(TimeDelta),
    /// A step of this many calendar months (1 monthly, 3 quarterly, 12 yearly).
    Months(u32),
}

impl Frequency {
    /// Cycle lengths worth testing for this frequency, most natural first.
    pub fn cycle_candidates(&self) -> Vec<usize> {
        const HOUR: i64 = 3_600;
        const DAY: i64 = 86_400;
        const WEEK: i64 = 7 * DAY;
        match *self {
            Frequency::Fixed(step) => {
                let secs = step.num_seconds();
                if secs <= 0 {
                    return Vec::new();
                }
                let per = |span: i64| {
                    (span % secs == 0 && span / secs > 1).then(|| (span / secs) as usize)
                };
                match secs {
                    s if s < HOUR => [per(DAY), per(HOUR)].into_iter().flatten().collect(),
                    s if s < DAY => [per(DAY), per(WEEK)].into_iter().flatten().collect(),
                    DAY => vec![7, 30, 365],
                    WEEK => vec![52, 4],
                    _ => Vec::new(),
                }
            }
            Frequency::Months(k) => match k {
                1 => vec![12, 3],
                k if k > 0 && 12 % k == 0 && 12 / k > 1 => vec![(12 / k) as usize],
                _ => Vec::new(),
            },
        }
    }

    /// Season length used for MASE scaling; 1 when the frequency has no natural cycle.
    pub fn season_length(&self) -> usize {
        self.cycle_candidates().first().copied().unwrap_or(1)
    }

    /// Timestamp `steps` intervals after `t`.
    pub fn advance(&self, t: DateTime<FixedOffset>, steps: usize) -> Option<DateTime<FixedOffset>> {
        match *self {
            Frequency::Fixed(step) => t.checked_add_signed(step * i32::try_from(steps).ok()?),
            Frequency::Months(k) => {
                t.checked_add_months(Months::new(k.checked_mul(u32::try_from(steps).ok()?)?))
            }
        }
    }
}

fn month_index(t: &DateTime<FixedOffset>) -> i64 {
    t.year() as i64 * 12 + t.month0() as i64
}

fn infer_frequency(timestamps: &[DateTime<FixedOffset>]) -> Result<Frequency, ForecastError> {
    if timestamps.len() < 2 {
        return Ok(Frequency::Fixed(TimeDelta::days(1)));
    }
    let gaps: Vec<TimeDelta> = timestamps.windows(2).map(|w| w[1] - w[0]).collect();
    if let Some(bad) = gaps.iter().position(|g| *g <= TimeDelta::zero()) {
        return Err(ForecastError::Timestamps(format!(
            "timestamps must be strictly increasing (row {})",
            bad + 2
        )));
    }
    let step = *gaps.iter().min().expect("at least one gap");
    let step_ns = step.num_nanoseconds();
    let fixed_ok = step_ns.is_some_and(|s| {
        gaps.iter()
            .all(|g| g.num_nanoseconds().is_some_and(|n| n % s == 0))
    });
    if fixed_ok && gaps.iter().all(|g| *g == step) {
        return Ok(Frequency::Fixed(step));
    }

    // calendar months vary in length; accept series anchored on the same
    // day-of-month and time of day whose month gaps share a common step
    let anchored = timestamps.iter().all(|t| {
        t.day() == timestamps[0].day() && t.time() == timestamps[0].time() && t.nanosecond() == 0
    });
    if anchored {
        let month_gaps: Vec<i64> = timestamps
            .windows(2)
            .map(|w| month_index(&w[1]) - month_index(&w[0]))
            .collect();
        let k = *month_gaps.iter().min().expect("at least one gap");
        if k > 0 && month_gaps.iter().all(|g| g % k == 0) {
            return Ok(Frequency::Months(k as u32));
        }
    }
    if fixed_ok {
        return Ok(Frequency::Fixed(step));
    }
    Err(ForecastError::Timestamps(
        "timestamp gaps are not integer multiples of a common step".into(),
    ))
}

/// Time-indexed values, `None` marking a missing observation.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesView {
    pub timestamps: Vec<DateTime<FixedOffset>>,
    pub values: Vec<Option<f64>>,
    pub frequency: Frequency,
}

#[derive(Deserialize)]
struct Row {
    timestamp: String,
    value: Option<String>,
}

impl SeriesView {
    pub fn new(
        timestamps: Vec<DateTime<FixedOffset>>,
        values: Vec<Option<f64>>,
    ) -> Result<Self, ForecastError> {
        if timestamps.len() != values.len() {
            return Err(ForecastError::Timestamps(format!(
                "{} timestamps but {} values",
                timestamps.len(),
                values.len()
            )));
        }
        if timestamps.is_empty() {
            return Err(ForecastError::TooShort { needed: 1, got: 0 });
        }
        let frequency = infer_frequency(&timestamps)?;
        Ok(Self {
            timestamps,
            values,
            frequency,
        })
    }

    /// Regular series starting at `start` with a fixed `step`.
    pub fn regular(start: DateTime<FixedOffset>, step: TimeDelta, values: &[f64]) -> Self {
        let timestamps = (0..values.len()).map(|i| start + step * i as i32).collect();
        Self {
            timestamps,
            values: values.iter().map(|v| Some(*v)).collect(),
            frequency: Frequency::Fixed(step),
        }
    }

    /// Parse `timestamp,value` text with RFC 3339 timestamps. An empty value
    /// field (or `NaN`) is a missing observation.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, ForecastError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| ForecastError::Parse(e.to_string()))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["timestamp", "value"] {
            return Err(ForecastError::Parse(format!(
                "expected header `timestamp,value`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut timestamps = Vec::new();
        let mut values = Vec::new();
        for (i, row) in rdr.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| ForecastError::Parse(format!("row {}: {e}", i + 2)))?;
            let t = DateTime::parse_from_rfc3339(&row.timestamp).map_err(|e| {
                ForecastError::Parse(format!(
                    "row {}: bad timestamp `{}`: {e}",
                    i + 2,
                    row.timestamp
                ))
            })?;
            let v = match row.value.as_deref() {
                None | Some("") => None,
                Some(text) => {
                    let v: f64 = text.parse().map_err(|_| {
                        ForecastError::Parse(format!("row {}: bad value `{text}`", i + 2))
                    })?;
                    v.is_finite().then_some(v)
                }
            };
            timestamps.push(t);
            values.push(v);
        }
        Self::new(timestamps, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First `n` observations.
    pub fn head(&self, n: usize) -> Self {
        Self {
            timestamps: self.timestamps[..n].to_vec(),
            values: self.values[..n].to_vec(),
            frequency: self.frequency,
        }
    }

    /// Timestamps of the next `horizon` steps.
    pub fn future_timestamps(
        &self,
        horizon: usize,
    ) -> Result<Vec<DateTime<FixedOffset>>, ForecastError> {
        let last = *self.timestamps.last().expect("non-empty series");
        (1..=horizon)
            .map(|h| {
                self.frequency
                    .advance(last, h)
                    .ok_or_else(|| ForecastError::Timestamps("forecast timestamps overflow".into()))
            })
            .collect()
    }
}

/// Fill missing values with the median of the observed ones, then map
/// through `ln(1 + v)` when `transform_log` is set.
pub fn preprocess(values: &[Option<f64>], transform_log: bool) -> Result<Vec<f64>, ForecastError> {
    let observed: Vec<f64> = values.iter().flatten().copied().collect();
    if observed.is_empty() {
        return Err(ForecastError::TooShort { needed: 1, got: 0 });
    }
    let fill = median(&observed);
    let filled: Vec<f64> = values.iter().map(|v| v.unwrap_or(fill)).collect();
    if !transform_log {
        return Ok(filled);
    }
    if let Some(bad) = filled.iter().find(|v| **v < 0.0) {
        return Err(ForecastError::NegativeForLog(*bad));
    }
    Ok(filled.iter().map(|v| v.ln_1p()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> DateTime<FixedOffset> {
        DateTime::parse_from_rfc3339(s).unwrap()
    }

    #[test]
    fn median_imputation() {
        assert_eq!(
            preprocess(&[Some(1.0), None, Some(3.0)], false).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(
            preprocess(&[Some(4.0), Some(5.0)], false).unwrap(),
            vec![4.0, 5.0]
        );
    }

    #[test]
    fn log_transform() {
        let out = preprocess(&[Some(0.0), Some(std::f64::consts::E - 1.0)], true).unwrap();
        assert_eq!(out[0], 0.0);
        assert!((out[1] - 1.0).abs() < 1e-15);
        assert_eq!(
            preprocess(&[Some(-1.0)], true),
            Err(ForecastError::NegativeForLog(-1.0))
        );
    }

    #[test]
    fn all_missing_is_an_error() {
        assert!(preprocess(&[None, None], false).is_err());
    }

    #[test]
    fn hourly_and_monthly_inference() {
        let hourly = SeriesView::new(
            vec![
                ts("2024-01-01T00:00:00Z"),
                ts("2024-01-01T01:00:00Z"),
                ts("2024-01-01T03:00:00Z"),
            ],
            vec![Some(1.0); 3],
        )
        .unwrap();
        assert_eq!(hourly.frequency, Frequency::Fixed(TimeDelta::hours(1)));
        assert_eq!(hourly.frequency.cycle_candidates(), vec![24, 168]);

        let monthly = SeriesView::new(
            vec![
                ts("2023-01-01T00:00:00Z"),
                ts("2023-02-01T00:00:00Z"),
                ts("2023-03-01T00:00:00Z"),
            ],
            vec![Some(1.0); 3],
        )
        .unwrap();
        assert_eq!(monthly.frequency, Frequency::Months(1));
        assert_eq!(
            monthly.future_timestamps(2).unwrap()[1],
            ts("2023-05-01T00:00:00Z")
        );
    }

    #[test]
    fn rejects_unordered_timestamps() {
        let r = SeriesView::new(
            vec![ts("2024-01-02T00:00:00Z"), ts("2024-01-01T00:00:00Z")],
            vec![Some(1.0); 2],
        );
        assert!(matches!(r, Err(ForecastError::Timestamps(_))));
    }

    #[test]
    fn csv_with_missing_values() {
        let text = "timestamp,value\n2024-01-01T00:00:00Z,1.5\n2024-01-02T00:00:00Z,\n2024-01-03T00:00:00Z,2\n";
        let s = SeriesView::from_csv(text.as_bytes()).unwrap();
        assert_eq!(s.values, vec![Some(1.5), None, Some(2.0)]);
        assert_eq!(s.frequency, Frequency::Fixed(TimeDelta::days(1)));
        assert!(SeriesView::from_csv("time,value\n".as_bytes()).is_err());
    }
}
