//! Complex logarithm and dilogarithm on pinned branches.
//!
//! [`clog`] is the principal logarithm with imaginary part in `(-π, π]`. A
//! point on the negative real axis maps to `+π` whatever the sign of its zero
//! imaginary part.
//!
//! [`li2`] is the principal dilogarithm, cut along `[1, ∞)`. On the cut it
//! takes the limit from below, `Im li2(x) = -π ln x` for `x > 1`, which is the
//! value `-∫ clog(1 - t)/t dt` produces under the `clog` convention above.
//!
//! [`Li2Continuation`] and [`LogContinuation`] follow the same functions
//! analytically along a polygonal path, counting cut crossings.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use thiserror::Error;

pub type Complex = Complex64;

const PI2_6: f64 = PI * PI / 6.0;
const TWO_PI_I: Complex = Complex::new(0.0, 2.0 * PI);

/// Power series cap and relative cutoff.
const SERIES_MAX_TERMS: usize = 10_000;
const SERIES_REL_CUTOFF: f64 = 1e-17;

/// A continuation step may be at most this fraction of the distance from its
/// start point to the nearest singular point.
pub const STEP_FRACTION: f64 = 0.5;

/// Segments closer than this to a branch point are rejected.
const BRANCH_POINT_GUARD: f64 = 1e-12;

/// `B_{2k} / (2k+1)!` for k = 1.., the odd part of the Bernoulli expansion of
/// `Li2(1 - e^{-u})`.
const BERNOULLI_LI2: [f64; 22] = [
    2.777_777_777_777_777_8e-2,
    -2.777_777_777_777_777_8e-4,
    4.724_111_866_969_009_8e-6,
    -9.185_773_074_661_964e-8,
    1.897_886_998_897_100_1e-9,
    -4.064_761_645_144_225_6e-11,
    8.921_691_020_456_452_3e-13,
    -1.993_929_586_072_107_4e-14,
    4.518_980_029_619_918_3e-16,
    -1.035_651_761_218_124_7e-17,
    2.395_218_621_026_187e-19,
    -5.581_785_874_325_009e-21,
    1.309_150_755_418_321_3e-22,
    -3.087_419_802_426_740_3e-24,
    7.315_975_652_702_203e-26,
    -1.740_845_657_234_000_9e-27,
    4.157_635_644_613_9e-29,
    -9.962_148_488_284_622e-31,
    2.394_034_424_896_165_2e-32,
    -5.768_347_355_367_39e-34,
    1.393_179_479_647_008e-35,
    -3.372_121_965_485_089_4e-37,
];

/// `2^{2n-1} |B_{2n}| / (n (2n)! (2n+1))`, the Taylor coefficients of
/// `Λ(θ) - θ(1 - ln 2θ)`.
const LOBACHEVSKY_TAYLOR: [f64; 29] = [
    5.555_555_555_555_555_2e-2,
    1.111_111_111_111_111_1e-3,
    5.039_052_658_100_277e-5,
    2.939_447_383_891_828_5e-6,
    1.943_436_286_870_630_3e-7,
    1.387_438_641_542_562_3e-8,
    1.044_092_754_851_132_3e-9,
    8.167_135_584_551_352e-11,
    6.581_241_671_581_577e-12,
    5.429_797_905_855_281_3e-13,
    4.566_488_655_929_372_5e-14,
    3.901_951_136_637_480_4e-15,
    3.379_062_307_725_591_8e-16,
    2.959_903_366_170_899_7e-17,
    2.618_489_680_557_351_4e-18,
    2.336_523_489_126_143_6e-19,
    2.100_812_837_917_715e-20,
    1.901_648_975_781_257_6e-21,
    1.731_755_715_440_370_1e-22,
    1.585_591_247_569_346_1e-23,
    1.458_873_369_000_764_2e-24,
    1.348_249_931_392_623_8e-25,
    1.251_065_828_912_595_3e-26,
    1.165_195_473_796_748e-27,
    1.088_920_516_594_683_8e-28,
    1.020_839_350_022_452_6e-29,
    9.597_992_823_337_683e-31,
    9.048_451_066_886_513e-32,
    8.551_796_823_342_126e-33,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DilogError {
    #[error("logarithm of zero")]
    ZeroArgument,
    #[error("non-finite argument {0}")]
    NonFinite(Complex),
    #[error("empty continuation path")]
    EmptyPath,
    #[error("continuation path touches the branch point {0}")]
    BranchPoint(Complex),
    #[error("continuation step {from} -> {to} is too long to certify the branch")]
    StepTooLong { from: Complex, to: Complex },
}

fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn principal_log(z: Complex) -> Complex {
    let arg = if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.im.atan2(z.re)
    };
    Complex::new(z.norm().ln(), arg)
}

/// Principal logarithm, imaginary part in `(-π, π]`.
pub fn clog(z: Complex) -> Result<Complex, DilogError> {
    if !is_finite(z) {
        return Err(DilogError::NonFinite(z));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(DilogError::ZeroArgument);
    }
    Ok(principal_log(z))
}

/// Principal branch of the dilogarithm.
///
/// Arguments with `|z| <= 1/2` are summed directly; the rest are mapped into
/// the closed unit disk by inversion, then by reflection into `Re z <= 1/2`,
/// where the Bernoulli series in `-ln(1 - z)` converges geometrically.
pub fn li2(z: Complex) -> Complex {
    if z.im == 0.0 {
        if z.re == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        if z.re == 1.0 {
            return Complex::new(PI2_6, 0.0);
        }
    }
    if z.norm() <= 1.0 {
        return li2_unit_disk(z);
    }
    let l = principal_log(-z);
    -PI2_6 - 0.5 * l * l - li2_unit_disk(z.inv())
}

fn li2_unit_disk(z: Complex) -> Complex {
    if z.norm() <= 0.5 {
        return li2_power_series(z);
    }
    if z.re > 0.5 {
        let w = 1.0 - z;
        if w.re == 0.0 && w.im == 0.0 {
            return Complex::new(PI2_6, 0.0);
        }
        let rest = if w.norm() <= 0.5 {
            li2_power_series(w)
        } else {
            li2_bernoulli(w)
        };
        return PI2_6 - principal_log(z) * principal_log(w) - rest;
    }
    li2_bernoulli(z)
}

fn li2_power_series(z: Complex) -> Complex {
    let mut sum = Complex::new(0.0, 0.0);
    let mut power = z;
    for k in 1..=SERIES_MAX_TERMS {
        let kf = k as f64;
        let term = power / (kf * kf);
        sum += term;
        if term.norm() <= SERIES_REL_CUTOFF * sum.norm() {
            break;
        }
        power *= z;
    }
    sum
}

/// Valid for `|z| <= 1`, `Re z <= 1/2`, where `|ln(1 - z)| < 1.8`.
fn li2_bernoulli(z: Complex) -> Complex {
    let u = -principal_log(1.0 - z);
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut power = u * u2;
    for c in BERNOULLI_LI2 {
        let term = c * power;
        sum += term;
        if term.norm() <= SERIES_REL_CUTOFF * sum.norm() {
            break;
        }
        power *= u2;
    }
    sum
}

/// Which side of a horizontal cut a point belongs to. Points exactly on the
/// real axis are assigned to the side whose limit the principal function
/// takes there.
fn above_li2_cut(w: Complex) -> bool {
    w.im > 0.0
}

fn above_log_cut(w: Complex) -> bool {
    w.im >= 0.0
}

/// Real-axis abscissa where the segment `a -> b` crosses, if the sides differ.
fn axis_crossing(a: Complex, b: Complex) -> f64 {
    if a.im == b.im {
        return a.re;
    }
    a.re + (b.re - a.re) * a.im / (a.im - b.im)
}

/// Distance from `p` to the segment `a -> b`.
fn segment_distance(a: Complex, b: Complex, p: Complex) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * d.re + (p - a).im * d.im) / len2;
    (a + d * t.clamp(0.0, 1.0) - p).norm()
}

/// The logarithm continued along a polygonal path.
#[derive(Debug, Clone, Copy)]
pub struct LogContinuation {
    point: Complex,
    winding: i64,
}

impl LogContinuation {
    pub fn new(start: Complex) -> Result<Self, DilogError> {
        clog(start)?;
        Ok(Self {
            point: start,
            winding: 0,
        })
    }

    pub fn step(&mut self, to: Complex) -> Result<(), DilogError> {
        if !is_finite(to) {
            return Err(DilogError::NonFinite(to));
        }
        let from = self.point;
        if (to - from).norm() > STEP_FRACTION * from.norm() {
            return Err(DilogError::StepTooLong { from, to });
        }
        let (up0, up1) = (above_log_cut(from), above_log_cut(to));
        if up0 != up1 && axis_crossing(from, to) < 0.0 {
            self.winding += if up0 { 1 } else { -1 };
        }
        self.point = to;
        Ok(())
    }

    pub fn point(&self) -> Complex {
        self.point
    }

    /// Number of extra `2πi` added to the principal value.
    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn value(&self) -> Complex {
        principal_log(self.point) + TWO_PI_I * self.winding as f64
    }
}

/// The dilogarithm continued along a polygonal path from its principal
/// branch at the start point.
///
/// On sheet `n` the continued value is `li2(w) - 2πi n L(w)`, with `L` the
/// logarithm continued along the same path; crossing `(1, ∞)` downwards
/// lowers `n` by one. The continued `log(1 - w)` is `clog(1 - w) + 2πi n`.
#[derive(Debug, Clone, Copy)]
pub struct Li2Continuation {
    sheet: i64,
    log: LogContinuation,
}

impl Li2Continuation {
    pub fn new(start: Complex) -> Result<Self, DilogError> {
        if !is_finite(start) {
            return Err(DilogError::NonFinite(start));
        }
        if (start - 1.0).norm() < BRANCH_POINT_GUARD {
            return Err(DilogError::BranchPoint(start));
        }
        // The log is only consulted off the principal sheet, so a start at
        // the origin is allowed.
        Ok(Self {
            sheet: 0,
            log: LogContinuation {
                point: start,
                winding: 0,
            },
        })
    }

    /// Starts at any point other than exactly 1, without the branch-point
    /// guard. Later steps still enforce it.
    pub fn principal(start: Complex) -> Result<Self, DilogError> {
        if !is_finite(start) {
            return Err(DilogError::NonFinite(start));
        }
        if start == Complex::new(1.0, 0.0) {
            return Err(DilogError::BranchPoint(start));
        }
        Ok(Self {
            sheet: 0,
            log: LogContinuation {
                point: start,
                winding: 0,
            },
        })
    }

    pub fn step(&mut self, to: Complex) -> Result<(), DilogError> {
        if !is_finite(to) {
            return Err(DilogError::NonFinite(to));
        }
        let from = self.log.point;
        let one = Complex::new(1.0, 0.0);
        if segment_distance(from, to, one) < BRANCH_POINT_GUARD {
            return Err(DilogError::BranchPoint(one));
        }
        let mut reach = (from - one).norm();
        if self.sheet != 0 {
            reach = reach.min(from.norm());
        }
        if (to - from).norm() > STEP_FRACTION * reach {
            return Err(DilogError::StepTooLong { from, to });
        }

        let (up0, up1) = (above_li2_cut(from), above_li2_cut(to));
        if up0 != up1 && axis_crossing(from, to) > 1.0 {
            self.sheet += if up0 { -1 } else { 1 };
        }
        let (up0, up1) = (above_log_cut(from), above_log_cut(to));
        if up0 != up1 && axis_crossing(from, to) < 0.0 {
            if self.sheet != 0
                && segment_distance(from, to, Complex::new(0.0, 0.0)) < BRANCH_POINT_GUARD
            {
                return Err(DilogError::BranchPoint(Complex::new(0.0, 0.0)));
            }
            self.log.winding += if up0 { 1 } else { -1 };
        }
        self.log.point = to;
        Ok(())
    }

    pub fn point(&self) -> Complex {
        self.log.point
    }

    /// Net number of counterclockwise turns around 1.
    pub fn sheet(&self) -> i64 {
        self.sheet
    }

    pub fn value(&self) -> Complex {
        let w = self.log.point;
        let base = li2(w);
        if self.sheet == 0 {
            base
        } else {
            base - TWO_PI_I * self.sheet as f64 * self.log.value()
        }
    }

    /// `log(1 - w)` continued consistently with [`Li2Continuation::value`].
    pub fn log_one_minus(&self) -> Complex {
        principal_log(1.0 - self.log.point) + TWO_PI_I * self.sheet as f64
    }
}

/// Analytic continuation of `li2` along the polygon through `path`, starting
/// on the principal branch at `path[0]`.
///
/// Each segment must be shorter than [`STEP_FRACTION`] of the distance from
/// its start to 1 (and to 0 once off the principal sheet).
pub fn li2_continued(path: &[Complex]) -> Result<Complex, DilogError> {
    let (first, rest) = path.split_first().ok_or(DilogError::EmptyPath)?;
    let mut cont = Li2Continuation::new(*first)?;
    for &w in rest {
        cont.step(w)?;
    }
    Ok(cont.value())
}

/// Lobachevsky function `Λ(θ) = -∫₀^θ ln|2 sin t| dt`.
///
/// π-periodic and odd. The argument is reduced to `(-π/2, π/2]` and summed
/// from the Taylor expansion of `ln(sin t / t)`, which converges like
/// `(θ/π)^{2n}`. Returns NaN for non-finite input.
pub fn lobachevsky(theta: f64) -> f64 {
    if !theta.is_finite() {
        return f64::NAN;
    }
    let mut t = theta.rem_euclid(PI);
    if t > FRAC_PI_2 {
        t -= PI;
    }
    if t == 0.0 {
        return 0.0;
    }
    let (sign, t) = (t.signum(), t.abs());
    let t2 = t * t;
    let mut sum = t * (1.0 - (2.0 * t).ln());
    let mut power = t * t2;
    for c in LOBACHEVSKY_TAYLOR {
        let term = c * power;
        sum += term;
        if term <= SERIES_REL_CUTOFF * sum.abs() {
            break;
        }
        power *= t2;
    }
    sign * sum
}
