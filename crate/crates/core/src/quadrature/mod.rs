// SPDX-License-Identifier: Apache-2.0

//! Numerical integration: an adaptive Gauss-Kronrod baseline plus a
//! segment-and-accelerate fallback for oscillatory integrands on `[a, ∞)`.

mod euler;
mod gauss_kronrod;
mod oscillatory;
mod segments;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use euler::{euler_accelerate, EulerEstimate};
pub use gauss_kronrod::{adaptive_quad, baseline_quad, AdaptiveOptions, DEFAULT_LIMIT};
pub use oscillatory::{
    integrate_oscillatory, integrate_oscillatory_with, needs_fallback, OscillatoryOptions,
};
pub use segments::{segment_bounds, SegmentScheme};

#[derive(Debug, Error, PartialEq)]
pub enum QuadratureError {
    #[error("invalid segment scheme: {0}")]
    InvalidScheme(String),
}

/// Which path produced a [`QuadResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Baseline,
    SegmentedEuler,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::SegmentedEuler => "segmented_euler",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why an integration did not converge cleanly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadFault {
    NonFiniteSample,
    SubdivisionLimit,
    RoundOff,
    /// Segmented path ran out of segments before the series settled.
    SegmentLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub method_used: Method,
    pub segments_used: usize,
    /// When false the value may be unreliable.
    pub converged: bool,
    pub fault: Option<QuadFault>,
}
