// SPDX-License-Identifier: Apache-2.0

use super::euler::euler_accelerate;
use super::gauss_kronrod::{adaptive_quad, baseline_quad, AdaptiveOptions};
use super::segments::SegmentScheme;
use super::{Method, QuadFault, QuadResult};

/// Knobs for [`integrate_oscillatory_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryOptions {
    pub scheme: SegmentScheme,
    pub tol: f64,
    /// Baseline is abandoned when its error estimate exceeds this fraction of |value|.
    pub fallback_rel_error: f64,
    /// Segments integrated before the stability test may stop the series.
    pub min_segments: usize,
    /// Subdivision budget for each finite segment.
    pub segment_limit: usize,
}

impl OscillatoryOptions {
    pub fn new(scheme: SegmentScheme, tol: f64) -> Self {
        Self {
            scheme,
            tol,
            fallback_rel_error: 0.01,
            min_segments: 8,
            segment_limit: 200,
        }
    }
}

/// True when a baseline result should be replaced by the segmented method.
pub fn needs_fallback(result: &QuadResult, fallback_rel_error: f64) -> bool {
    !result.value.is_finite()
        || !result.error_estimate.is_finite()
        || result.fault == Some(QuadFault::NonFiniteSample)
        || result.error_estimate > fallback_rel_error * result.value.abs()
}

/// Integrate `f` over `[a, ∞)`.
///
/// The baseline quadrature runs first and its result is returned untouched
/// unless it looks unreliable. Otherwise the domain is cut into segments by
/// `scheme`, each segment is integrated with the baseline rule, and the
/// sequence of segment integrals is summed with Euler acceleration until
/// the accelerated value is stable to `tol` (relative).
pub fn integrate_oscillatory<F>(f: F, a: f64, scheme: SegmentScheme, tol: f64) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    integrate_oscillatory_with(f, a, OscillatoryOptions::new(scheme, tol))
}

pub fn integrate_oscillatory_with<F>(f: F, a: f64, opts: OscillatoryOptions) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    assert!(opts.tol > 0.0, "tolerance must be positive");
    let baseline = baseline_quad(&f, a, f64::INFINITY, opts.tol, opts.tol);
    if !needs_fallback(&baseline, opts.fallback_rel_error) {
        return baseline;
    }

    let scheme = opts.scheme;
    let mut terms: Vec<f64> = Vec::with_capacity(scheme.max_segments);
    let mut estimate = f64::NAN;
    let mut stability = f64::INFINITY;
    let mut converged = false;
    let mut fault = Some(QuadFault::SegmentLimit);
    // magnitude used to judge segment accuracy; cancelling segments are
    // measured against the running total, not against themselves
    let mut scale = 0.0f64;

    for k in 0..scheme.max_segments {
        let (lo, hi) = scheme.bounds(a, k);
        let abs_tol = (opts.tol * scale).max(f64::MIN_POSITIVE);
        let seg = adaptive_quad(
            &f,
            lo,
            hi,
            AdaptiveOptions::new(abs_tol, opts.tol).with_limit(opts.segment_limit),
        );
        if !seg.value.is_finite() || seg.fault == Some(QuadFault::NonFiniteSample) {
            fault = Some(QuadFault::NonFiniteSample);
            break;
        }
        scale = scale.max(seg.value.abs());
        if !seg.converged && seg.error_estimate > opts.fallback_rel_error * scale {
            // the rule can no longer resolve this segment; further terms would only add noise
            fault = Some(QuadFault::SubdivisionLimit);
            break;
        }
        terms.push(seg.value);
        if terms.len() < 2 {
            estimate = seg.value;
            continue;
        }
        let e = euler_accelerate(&terms);
        estimate = e.estimate;
        stability = e.stability;
        scale = scale.max(estimate.abs());
        if terms.len() >= opts.min_segments && stability <= opts.tol * estimate.abs() {
            converged = true;
            fault = None;
            break;
        }
    }

    if fault == Some(QuadFault::NonFiniteSample) {
        converged = false;
    }
    QuadResult {
        value: estimate,
        error_estimate: stability,
        method_used: Method::SegmentedEuler,
        segments_used: terms.len(),
        converged,
        fault,
    }
}
