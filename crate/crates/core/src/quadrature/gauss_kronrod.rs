// SPDX-License-Identifier: Apache-2.0

//! Adaptive 7-point Gauss / 15-point Kronrod quadrature with interval bisection.
//!
//! The error model follows the classic QUADPACK heuristics: the raw
//! Gauss-Kronrod difference is rescaled by the integral of `|f - mean|`
//! over the interval, and floored at a small multiple of machine epsilon
//! times the integral of `|f|`.

use super::{Method, QuadFault, QuadResult};

/// Kronrod abscissae on [-1, 1], descending; odd indices are shared with
/// the embedded 7-point Gauss rule, the last entry is the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default subdivision budget for [`baseline_quad`].
pub const DEFAULT_LIMIT: usize = 50;

/// Result of one 15-point rule application.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RuleEstimate {
    pub value: f64,
    pub error: f64,
    /// Set when any sample came back NaN or infinite.
    pub non_finite: bool,
}

pub(crate) fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> RuleEstimate {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_centre = f(centre);
    let mut non_finite = !f_centre.is_finite();
    let mut gauss = f_centre * WG[3];
    let mut kronrod = f_centre * WGK[7];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let y1 = f(centre - x);
        let y2 = f(centre + x);
        non_finite |= !y1.is_finite() || !y2.is_finite();
        fv1[j] = y1;
        fv2[j] = y2;
        let sum = y1 + y2;
        kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (y1.abs() + y2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (f_centre - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    RuleEstimate {
        value,
        error,
        non_finite,
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Tunables for the adaptive driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals kept by the bisection.
    pub limit: usize,
}

impl AdaptiveOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            limit: DEFAULT_LIMIT,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit.max(1);
        self
    }
}

/// Integrate `f` over `[a, b]` where `b` may be `f64::INFINITY`.
///
/// A semi-infinite range is mapped onto `[0, 1)` by `x = a + t / (1 - t)`.
/// The result reports `converged` when the error estimate is within
/// `max(abs_tol, rel_tol * |value|)` and the value is finite.
pub fn baseline_quad<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    adaptive_quad(f, a, b, AdaptiveOptions::new(abs_tol, rel_tol))
}

pub fn adaptive_quad<F>(f: F, a: f64, b: f64, opts: AdaptiveOptions) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    assert!(
        opts.abs_tol > 0.0 && opts.rel_tol > 0.0,
        "tolerances must be positive"
    );
    if b.is_infinite() && b > 0.0 {
        let mapped = |t: f64| {
            let s = 1.0 - t;
            // a node rounded onto t = 1 sits at x = ∞ and carries no weight
            if s <= 0.0 {
                return 0.0;
            }
            f(a + t / s) / (s * s)
        };
        return bisect(&mapped, 0.0, 1.0, opts);
    }
    bisect(&f, a, b, opts)
}

fn bisect<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, opts: AdaptiveOptions) -> QuadResult {
    let first = gk15(f, a, b);
    if first.non_finite {
        return fail(first.value, first.error, QuadFault::NonFiniteSample);
    }
    let mut pieces = vec![Piece {
        a,
        b,
        value: first.value,
        error: first.error,
    }];
    let mut total = first.value;
    let mut total_err = first.error;
    let mut fault = None;

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if pieces.len() >= opts.limit {
            fault = Some(QuadFault::SubdivisionLimit);
            break;
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one piece");
        let p = pieces[worst];
        let mid = 0.5 * (p.a + p.b);
        // stop once the interval can no longer be split in floating point
        if mid <= p.a || mid >= p.b || (p.b - p.a) <= 4.0 * f64::EPSILON * p.a.abs().max(p.b.abs())
        {
            fault = Some(QuadFault::RoundOff);
            break;
        }
        let left = gk15(f, p.a, mid);
        let right = gk15(f, mid, p.b);
        if left.non_finite || right.non_finite {
            return fail(total, total_err, QuadFault::NonFiniteSample);
        }
        pieces[worst] = Piece {
            a: p.a,
            b: mid,
            value: left.value,
            error: left.error,
        };
        pieces.push(Piece {
            a: mid,
            b: p.b,
            value: right.value,
            error: right.error,
        });
        // re-sum from scratch so the total never drifts from the pieces
        total = pieces.iter().map(|p| p.value).sum();
        total_err = pieces.iter().map(|p| p.error).sum();
    }

    let target = opts.abs_tol.max(opts.rel_tol * total.abs());
    QuadResult {
        value: total,
        error_estimate: total_err,
        method_used: Method::Baseline,
        segments_used: 0,
        converged: total.is_finite() && total_err <= target,
        fault,
    }
}

fn fail(value: f64, error: f64, fault: QuadFault) -> QuadResult {
    QuadResult {
        value,
        error_estimate: if error.is_finite() {
            error
        } else {
            f64::INFINITY
        },
        method_used: Method::Baseline,
        segments_used: 0,
        converged: false,
        fault: Some(fault),
    }
}
