// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::QuadratureError;

/// Partition of `[a, ∞)` into contiguous finite segments whose lengths grow
/// geometrically: segment `k` has length `first_length * growth_ratio^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentScheme {
    pub first_length: f64,
    pub growth_ratio: f64,
    pub max_segments: usize,
}

impl Default for SegmentScheme {
    fn default() -> Self {
        Self {
            first_length: std::f64::consts::PI,
            growth_ratio: 1.15,
            max_segments: 60,
        }
    }
}

impl SegmentScheme {
    pub fn new(
        first_length: f64,
        growth_ratio: f64,
        max_segments: usize,
    ) -> Result<Self, QuadratureError> {
        let scheme = Self {
            first_length,
            growth_ratio,
            max_segments,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.first_length.is_finite() && self.first_length > 0.0) {
            return Err(QuadratureError::InvalidScheme(format!(
                "first segment length must be positive and finite, got {}",
                self.first_length
            )));
        }
        if !(self.growth_ratio.is_finite() && self.growth_ratio >= 1.0) {
            return Err(QuadratureError::InvalidScheme(format!(
                "growth ratio must be >= 1, got {}",
                self.growth_ratio
            )));
        }
        if self.max_segments == 0 {
            return Err(QuadratureError::InvalidScheme(
                "max_segments must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Distance from the lower limit to the start of segment `k`.
    fn offset(&self, k: usize) -> f64 {
        let r = self.growth_ratio;
        if r == 1.0 {
            self.first_length * k as f64
        } else {
            self.first_length * (r.powi(k as i32) - 1.0) / (r - 1.0)
        }
    }

    /// `[start, end]` of segment `k`. Consecutive segments share endpoints
    /// exactly because both come from the same offset formula.
    pub fn bounds(&self, a: f64, k: usize) -> (f64, f64) {
        (a + self.offset(k), a + self.offset(k + 1))
    }

    /// Right end of the region covered by the first `count` segments.
    pub fn covered_to(&self, a: f64, count: usize) -> f64 {
        a + self.offset(count)
    }
}

/// Bounds of segment `k` of `scheme` starting from `a`.
///
/// Panics if `k >= scheme.max_segments`.
pub fn segment_bounds(a: f64, scheme: &SegmentScheme, k: usize) -> (f64, f64) {
    assert!(
        k < scheme.max_segments,
        "segment index {k} out of range (max_segments = {})",
        scheme.max_segments
    );
    scheme.bounds(a, k)
}
