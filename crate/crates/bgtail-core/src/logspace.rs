//! Log-domain scalars and log-sum-exp accumulation.
//!
//! Probabilities in the far tail underflow `f64` (e.g. `e^{-w}` is zero
//! past `w ≈ 745`), so every tail quantity in this crate is carried as
//! its natural logarithm and only combined through the helpers here.

use crate::fmath;
use crate::{Error, Result};

/// Natural log of a nonnegative real. `-inf` encodes zero.
///
/// The value is finite or `-inf`, never NaN or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogReal(f64);

impl LogReal {
    /// Log of zero.
    pub const ZERO: LogReal = LogReal(f64::NEG_INFINITY);
    /// Log of one.
    pub const ONE: LogReal = LogReal(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value == f64::INFINITY {
            return Err(Error::Domain("log value must be finite or -inf"));
        }
        Ok(LogReal(value))
    }

    /// Internal constructor for values already known to be valid.
    #[inline]
    pub(crate) fn raw(value: f64) -> Self {
        debug_assert!(!value.is_nan() && value != f64::INFINITY);
        LogReal(value)
    }

    /// The stored logarithm.
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Exponentiates back to the linear scale (may underflow to 0.0).
    #[inline]
    pub fn exp(self) -> f64 {
        fmath::exp(self.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

/// Natural log of a probability-scale quantity; the universal return
/// type for tail computations.
///
/// Exact tail operations clamp roundoff so the value never strays above
/// `ln 1 = 0`; the closed-form asymptotic is exempt (it is an
/// approximation and may exceed 1 at small thresholds).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    /// Log of the impossible event.
    pub const NEVER: LogProb = LogProb(f64::NEG_INFINITY);
    /// Log of the certain event.
    pub const CERTAIN: LogProb = LogProb(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value == f64::INFINITY {
            return Err(Error::Domain("log probability must be finite or -inf"));
        }
        Ok(LogProb(value))
    }

    #[inline]
    pub(crate) fn raw(value: f64) -> Self {
        debug_assert!(!value.is_nan() && value != f64::INFINITY);
        LogProb(value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn exp(self) -> f64 {
        fmath::exp(self.0)
    }

    #[inline]
    pub fn is_never(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl From<LogProb> for LogReal {
    fn from(p: LogProb) -> LogReal {
        LogReal(p.0)
    }
}

/// `ln(e^x + e^y)` without leaving log space.
pub fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + fmath::ln_1p(fmath::exp(lo - hi))
}

/// `ln|e^x - e^y|`; `-inf` when the two agree exactly.
pub fn log_abs_diff_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == lo {
        return f64::NEG_INFINITY;
    }
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + fmath::ln(-fmath::exp_m1(lo - hi))
}

/// `ln Σ e^{x_i}` by pairwise reduction.
///
/// Pairwise (rather than left-to-right) accumulation keeps the rounding
/// error growth logarithmic in the number of terms and makes the result
/// independent of any panel evaluation order.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => f64::NEG_INFINITY,
        1 => terms[0],
        2 => log_add_exp(terms[0], terms[1]),
        n => {
            let (left, right) = terms.split_at(n / 2);
            log_add_exp(log_sum_exp(left), log_sum_exp(right))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_and_diff_roundtrip() {
        let x = 0.2_f64.ln();
        let y = 0.3_f64.ln();
        assert!((log_add_exp(x, y).exp() - 0.5).abs() < 1e-15);
        assert!((log_abs_diff_exp(x, y).exp() - 0.1).abs() < 1e-15);
        assert!((log_abs_diff_exp(y, x).exp() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn neg_infinity_is_absorbing_zero() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, -3.0), -3.0);
        assert_eq!(
            log_add_exp(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
        assert_eq!(log_abs_diff_exp(-3.0, f64::NEG_INFINITY), -3.0);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn deep_tail_sums_stay_in_range() {
        // e^{-10000} underflows, but its log arithmetic must not.
        let s = log_add_exp(-10_000.0, -10_000.0);
        assert!((s - (-10_000.0 + core::f64::consts::LN_2)).abs() < 1e-12);
        let terms = [-5_000.0f64, -5_001.0, -5_002.0, -5_003.0];
        let direct: f64 = terms.iter().map(|t| (t + 5_000.0).exp()).sum();
        assert!((log_sum_exp(&terms) - (direct.ln() - 5_000.0)).abs() < 1e-12);
    }

    #[test]
    fn constructors_reject_nan() {
        assert!(LogReal::new(f64::NAN).is_err());
        assert!(LogReal::new(f64::INFINITY).is_err());
        assert!(LogReal::new(f64::NEG_INFINITY).is_ok());
        assert!(LogProb::new(-1.0).is_ok());
    }
}
