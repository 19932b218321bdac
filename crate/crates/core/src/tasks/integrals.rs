// SPDX-License-Identifier: Apache-2.0

//! The oscillatory-integral benchmark: 38 semi-infinite integrals with frozen
//! parameter draws and extended-precision reference answers.
//!
//! The manifest (`data/integrals.json`) is produced by
//! `tools/integrals_oracle.py`; answers are stored as 30-significant-digit
//! decimal strings and parsed to the nearest `f64`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::TaskError;

const MANIFEST_JSON: &str = include_str!("../../data/integrals.json");

/// Below this magnitude the fractional error is replaced by the absolute error.
pub const NEAR_ZERO_ANSWER: f64 = 1e-12;

pub type Integrand = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl std::str::FromStr for Split {
    type Err = TaskError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(TaskError::Invalid(format!("unknown split `{other}`"))),
        }
    }
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub spec_id: String,
    pub split: Split,
    pub lower_limit: f64,
    pub params: BTreeMap<String, f64>,
    /// Decimal text as frozen in the manifest (30 significant digits).
    #[serde(rename = "reference_answer")]
    pub reference_text: String,
    #[serde(default)]
    pub condition: f64,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegralManifest {
    pub schema_version: u32,
    pub description: String,
    pub parameter_draw: serde_json::Value,
    pub integrals: Vec<IntegralSpec>,
}

impl IntegralManifest {
    pub fn builtin() -> Self {
        Self::from_json(MANIFEST_JSON).expect("bundled integral manifest is valid")
    }

    pub fn builtin_json() -> &'static str {
        MANIFEST_JSON
    }

    pub fn from_json(text: &str) -> Result<Self, TaskError> {
        let manifest: Self = serde_json::from_str(text)
            .map_err(|e| TaskError::Invalid(format!("integral manifest: {e}")))?;
        for spec in &manifest.integrals {
            let answer = spec.reference_answer();
            if !answer.is_finite() || answer == 0.0 {
                return Err(TaskError::Invalid(format!(
                    "integral {} has unusable reference answer `{}`",
                    spec.spec_id, spec.reference_text
                )));
            }
            spec.integrand()?;
        }
        Ok(manifest)
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &IntegralSpec> {
        self.integrals.iter().filter(move |s| s.split == split)
    }
}

impl IntegralSpec {
    pub fn reference_answer(&self) -> f64 {
        self.reference_text.trim().parse().unwrap_or(f64::NAN)
    }

    fn p(&self, name: &str) -> Result<f64, TaskError> {
        self.params.get(name).copied().ok_or_else(|| {
            TaskError::Invalid(format!(
                "integral {} is missing parameter `{name}`",
                self.spec_id
            ))
        })
    }

    /// Integrand with this spec's parameters bound.
    pub fn integrand(&self) -> Result<Integrand, TaskError> {
        let id = self.spec_id.as_str();
        let f: Integrand = match id {
            "445.001" => Arc::new(|x: f64| (x * x).sin()),
            "445.017" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| (a * x * x).sin() * (2.0 * b * x).cos())
            }
            "447.012" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| (a * x * x + b * b / a).sin() * (2.0 * b * x).cos())
            }
            "458.031" => {
                let (a, beta, gamma) = (self.p("a")?, self.p("beta")?, self.p("gamma")?);
                let b2 = beta * beta;
                Arc::new(move |x: f64| {
                    let (u, v) = (gamma + x, gamma - x);
                    (u / (b2 + u * u) - v / (b2 + v * v)) * (a * x).sin()
                })
            }
            "462.034" => {
                let (a, b, c) = (self.p("a")?, self.p("b")?, self.p("c")?);
                Arc::new(move |x: f64| x * (a * x).sin() * (b * x).cos() / (c * c + x * x))
            }
            "477.049" => {
                let a = self.p("a")?;
                Arc::new(move |x: f64| (x * (a * x).sin() + (a * x).cos()) / (x * x + 1.0))
            }
            "478.036" | "505.023" => {
                let (a, n, m) = (self.p("a")?, self.p("n")?, self.p("m")?);
                let ca = a.cos();
                Arc::new(move |x: f64| (ca - (a * n * x).cos()) * (m * x).sin() / x)
            }
            "487.011" | "487.026" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                let with_cos2 = id == "487.026";
                Arc::new(move |x: f64| {
                    let (s, c) = x.sin_cos();
                    let den = a * a * c * c + b * b * s * s;
                    let num = if with_cos2 { s * c * c } else { s };
                    num / (x * den * den)
                })
            }
            "488.014" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| {
                    let (s, c) = x.sin_cos();
                    let (s2, c2) = (2.0 * x).sin_cos();
                    let den = a * a * c2 * c2 + b * b * s2 * s2;
                    s * s * s * c / (x * den.powi(4))
                })
            }
            "491.004" => {
                let (a, m) = (self.p("a")?, self.p("m")?);
                let e = (2.0 * m) as i32;
                Arc::new(move |x: f64| x.cos().powi(e) / (a * a + x * x))
            }
            "491.006" => {
                let (a, m) = (self.p("a")?, self.p("m")?);
                let e = (2.0 * m + 1.0) as i32;
                Arc::new(move |x: f64| x.cos().powi(e) / (a * a + x * x))
            }
            "491.014" => {
                let (a, b, beta) = (self.p("a")?, self.p("b")?, self.p("beta")?);
                Arc::new(move |x: f64| {
                    x * (2.0 * a * x).sin() * (b * x).cos().powi(2) / (beta * beta + x * x)
                })
            }
            "493.056" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| (2.0 * a * x).sin() * (b * x).cos().powi(2) / x)
            }
            "495.029" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| (a * x).sin().powi(3) * (b * x).sin().powi(2) / x)
            }
            "504.057" | "504.061" => {
                let use_cos = id == "504.057";
                Arc::new(move |x: f64| {
                    let (s, c) = x.sin_cos();
                    let (s2, c2) = (2.0 * x).sin_cos();
                    let inner = if use_cos { c2 } else { s2 };
                    s * s * s * c / (x * (inner * inner + 1.0).sqrt())
                })
            }
            "512.029" | "512.037" => {
                let (a, b, p) = (self.p("a")?, self.p("b")?, self.p("p")?);
                let c2 = if id == "512.029" {
                    self.p("c")?.powi(2)
                } else {
                    a * a
                };
                Arc::new(move |x: f64| {
                    (b * x).cos() * (p * (a * a + x * x).sqrt()).cos() / (c2 + x * x)
                })
            }
            "550.003" => {
                let a = self.p("a")?;
                Arc::new(move |x: f64| {
                    if x == 0.0 {
                        // limit of sin(ax) coth(pi x / 2)
                        2.0 * a / PI
                    } else {
                        (a * x).sin() / (PI * x / 2.0).tanh() / (x * x + 1.0)
                    }
                })
            }
            "446.021" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| (a * x * x).sin().powi(4) - (b * x * x).sin().powi(4))
            }
            "446.045" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| x * (a * x * x).cos() * (2.0 * b * x).cos())
            }
            "449.013" => {
                let (a, b, mu) = (self.p("a")?, self.p("b")?, self.p("mu")?);
                Arc::new(move |x: f64| x.powf(mu - 1.0) * (a * x).sin() * (b * x).cos())
            }
            "465.002" => {
                let a = self.p("a")?;
                Arc::new(move |x: f64| {
                    let s2 = (a * x).sin().powi(2);
                    (3.0 - 4.0 * s2) * s2 / x
                })
            }
            "465.013" => {
                let (a, m) = (self.p("a")?, self.p("m")?);
                let e = (2.0 * m + 1.0) as i32;
                let n = 6.0 * m + 3.0;
                Arc::new(move |x: f64| x.sin().powi(e) * (n * x).sin() / (a * a + x * x))
            }
            "467.025" => Arc::new(|x: f64| {
                let (s, c) = x.sin_cos();
                s * c / (x * (s * s + 1.0).sqrt())
            }),
            "478.031" => {
                let (a, p) = (self.p("a")?, self.p("p")?);
                let e = p as i32;
                Arc::new(move |x: f64| (a * x.powi(e)).sin())
            }
            "478.050" => {
                let (a, u) = (self.p("a")?, self.p("u")?);
                Arc::new(move |x: f64| (a * x).cos() / (x - u).sqrt())
            }
            "484.059" => {
                let a = self.p("a")?;
                Arc::new(move |x: f64| {
                    let t = a - x * x;
                    t.sin() + t.cos()
                })
            }
            "487.068" => {
                let (a, n) = (self.p("a")?, self.p("n")?);
                Arc::new(move |x: f64| {
                    let (s, c) = x.sin_cos();
                    c * (a * c).cos() * (2.0 * n * x).cos() * (a * s).sinh() / x
                })
            }
            "494.006" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| x * (2.0 * b * x).sin() * (a * x * x).cos())
            }
            "496.037" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| {
                    let (s, c) = x.sin_cos();
                    let den = a * a * c * c + b * b * s * s;
                    s * s * s / (den.powi(3) * x)
                })
            }
            "504.025" => {
                let (a, p) = (self.p("a")?, self.p("p")?);
                let e = p as i32;
                Arc::new(move |x: f64| (a * x.powi(e)).sin() / x)
            }
            "505.006" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| {
                    let r = (b * b + x * x).sqrt();
                    // r - b rewritten to avoid cancellation near the origin
                    let inner = x * x / (r + b);
                    inner.sqrt() * (a * x).sin() / r
                })
            }
            "505.008" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| {
                    let (s, c) = x.sin_cos();
                    s / (x * (a * a * s * s + b * b * c * c))
                })
            }
            "513.033" => {
                let (a, b) = (self.p("a")?, self.p("b")?);
                Arc::new(move |x: f64| (a * x).sin().powi(3) * (3.0 * b * x).cos() / (x * x))
            }
            "551.027" => {
                let a = self.p("a")?;
                let a2 = a * a;
                Arc::new(move |x: f64| (a2 * x * x).sin().powi(3) / (x * x))
            }
            other => {
                return Err(TaskError::Invalid(format!(
                    "no integrand registered for spec `{other}`"
                )))
            }
        };
        Ok(f)
    }
}

/// `-ln(1 + |(response - answer) / answer|)`: zero for an exact answer,
/// negative otherwise, `-inf` for a non-finite response.
///
/// When `|answer|` is below [`NEAR_ZERO_ANSWER`] the absolute error is used
/// in place of the fractional error.
pub fn integral_score(response: f64, answer: f64) -> f64 {
    if !response.is_finite() || !answer.is_finite() {
        return f64::NEG_INFINITY;
    }
    let err = if answer.abs() < NEAR_ZERO_ANSWER {
        (response - answer).abs()
    } else {
        ((response - answer) / answer).abs()
    };
    -err.ln_1p()
}

/// Mean of per-integral scores; any `-inf` (or NaN) makes the whole score `-inf`.
pub fn integral_task_score(per_integral: &[f64]) -> f64 {
    assert!(!per_integral.is_empty(), "need at least one integral score");
    if per_integral.iter().any(|s| !s.is_finite()) {
        return f64::NEG_INFINITY;
    }
    per_integral.iter().sum::<f64>() / per_integral.len() as f64
}

/// Absolute fractional error used for pass/fail reporting.
pub fn fractional_error(response: f64, answer: f64) -> f64 {
    if !response.is_finite() {
        return f64::INFINITY;
    }
    ((response - answer) / answer).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn manifest_shape() {
        let m = IntegralManifest::builtin();
        assert_eq!(m.integrals.len(), 38);
        assert_eq!(m.split(Split::Train).count(), 19);
        assert_eq!(m.split(Split::Test).count(), 19);
        let mut ids: Vec<_> = m.integrals.iter().map(|s| s.spec_id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 38);
        for s in &m.integrals {
            let digits = s
                .reference_text
                .chars()
                .filter(|c| c.is_ascii_digit())
                .count();
            assert!(digits >= 30, "{} has only {digits} digits", s.spec_id);
        }
    }

    #[test]
    fn fresnel_reference_matches_closed_form() {
        let m = IntegralManifest::builtin();
        let s = m.integrals.iter().find(|s| s.spec_id == "445.001").unwrap();
        assert_eq!(s.split, Split::Train);
        assert!((s.reference_answer() - (PI / 8.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn integrands_are_finite_on_their_domain() {
        for s in IntegralManifest::builtin().integrals {
            let f = s.integrand().unwrap();
            for k in 1..400 {
                let x = s.lower_limit + 0.0137 * k as f64 * (1.0 + k as f64 / 50.0);
                assert!(f(x).is_finite(), "{} at {x}", s.spec_id);
            }
        }
    }

    #[test]
    fn unknown_integrand_is_an_error() {
        let mut s = IntegralManifest::builtin().integrals[0].clone();
        s.spec_id = "999.999".into();
        assert!(s.integrand().is_err());
    }

    #[test]
    fn score_spot_values() {
        assert_eq!(integral_score(1.5, 1.5), 0.0);
        assert!((integral_score(2.0, 1.0) + std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(integral_score(f64::NAN, 1.0), f64::NEG_INFINITY);
        assert_eq!(integral_score(f64::INFINITY, 1.0), f64::NEG_INFINITY);
        // near-zero guard falls back to absolute error
        assert!((integral_score(1e-13 + 0.5, 1e-13) + 0.5f64.ln_1p()).abs() < 1e-15);
    }

    #[test]
    fn task_score_aggregation() {
        assert_eq!(integral_task_score(&[0.0, 0.0, 0.0]), 0.0);
        let ln2 = std::f64::consts::LN_2;
        assert!((integral_task_score(&[0.0, -ln2]) + ln2 / 2.0).abs() < 1e-15);
        assert_eq!(
            integral_task_score(&[0.0, f64::NEG_INFINITY]),
            f64::NEG_INFINITY
        );
    }

    proptest! {
        #[test]
        fn score_is_nonpositive_and_decreasing(answer in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3], d1 in 0.0f64..10.0, d2 in 0.0f64..10.0) {
            let (near, far) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
            let s_near = integral_score(answer + near * answer.abs(), answer);
            let s_far = integral_score(answer + far * answer.abs(), answer);
            prop_assert!(s_near <= 0.0);
            prop_assert!(s_far <= s_near);
        }
    }
}
