//! Ground-truth evaluation of `ln P(B·Z > t)` by adaptive quadrature.
//!
//! With `W = Z^p ~ Gamma(c/p, 1)` and `w = t^p`, the event `{B·Z > t}`
//! is `{B^p W > w}` and
//!
//! ```text
//! P(B^p W > w) = ∫_w^∞ f_W(x) · P(B > (w/x)^{1/p}) dx .
//! ```
//!
//! The integral is taken over the overshoot `u = x - w`, assembled in
//! log space, and accumulated by log-sum-exp, so thresholds far past
//! the underflow point of `e^{-w}` are exact. The same probability can
//! also be integrated on the original `Z` scale; the two routes share
//! no integrand code and serve as mutual cross-checks.

use crate::distributions::{gga_log_pdf, gga_log_tail, BetaParams, GGaParams};
use crate::fmath;
use crate::logspace::LogProb;
use crate::quadrature::{integrate_log_semi_infinite, QuadConfig, QuadReport};
use crate::specfun;
use crate::{Error, Result};

/// Largest admissible transformed threshold `w = t^p`.
const MAX_W: f64 = 1e8;

/// A fully validated tail query: parameters plus the threshold on both
/// the original scale (`t`) and the transformed scale (`w = t^p`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailQuery {
    beta: BetaParams,
    gga: GGaParams,
    t: f64,
    w: f64,
}

impl TailQuery {
    pub fn new(beta: BetaParams, gga: GGaParams, t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain("tail threshold must be nonnegative and finite"));
        }
        let w = fmath::powf(t, gga.p());
        if w > MAX_W {
            return Err(Error::Domain("transformed threshold w = t^p exceeds 1e8"));
        }
        Ok(TailQuery { beta, gga, t, w })
    }

    /// Build a query from the transformed threshold `w` directly
    /// (`t = w^{1/p}`); the stored `w` is exactly the one given.
    pub fn from_transformed_threshold(beta: BetaParams, gga: GGaParams, w: f64) -> Result<Self> {
        if !(w >= 0.0) || w > MAX_W {
            return Err(Error::Domain("transformed threshold must lie in [0, 1e8]"));
        }
        let t = fmath::powf(w, 1.0 / gga.p());
        Ok(TailQuery { beta, gga, t, w })
    }

    pub fn beta(&self) -> BetaParams {
        self.beta
    }

    pub fn gga(&self) -> GGaParams {
        self.gga
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn w(&self) -> f64 {
        self.w
    }
}

/// ln P(B·Z > t) to relative accuracy `cfg.rel_tol`.
pub fn log_tail_exact(query: &TailQuery, cfg: &QuadConfig) -> Result<LogProb> {
    Ok(log_tail_exact_with_report(query, cfg)?.0)
}

/// Same as [`log_tail_exact`], also returning the quadrature report
/// (achieved error estimate and refinement diagnostics).
pub fn log_tail_exact_with_report(
    query: &TailQuery,
    cfg: &QuadConfig,
) -> Result<(LogProb, QuadReport)> {
    if query.w == 0.0 {
        return Ok((
            LogProb::CERTAIN,
            QuadReport {
                log_value: 0.0,
                log_rel_err_est: f64::NEG_INFINITY,
                refinement_delta_log: f64::NEG_INFINITY,
                panels: 0,
                domain_end: 0.0,
            },
        ));
    }
    let (a, b) = (query.beta.a(), query.beta.b());
    let (p, w) = (query.gga.p(), query.w);
    let r = query.gga.gamma_shape().r();
    let log_gamma_r = specfun::log_gamma_raw(r);

    // Integrand on the overshoot u = x - w:
    //   ln f_W(w + u) + ln P(B > (w/(w+u))^{1/p}).
    // The beta argument sits next to 1, so its complement is produced
    // directly: 1 - (1 + u/w)^{-1/p} = -expm1(-log1p(u/w)/p).
    let log_f = |u: f64| -> Result<f64> {
        let x = w + u;
        let log_density = (r - 1.0) * fmath::ln(x) - x - log_gamma_r;
        let cx = -fmath::exp_m1(-fmath::ln_1p(u / w) / p);
        let log_beta_tail = specfun::log_reg_beta_upper_from_complement(a, b, cx)?;
        Ok(log_density + log_beta_tail.value())
    };
    // Mass beyond u is at most P(W > w + u).
    let tail_bound = |u: f64| match specfun::log_reg_gamma_upper(r, w + u) {
        Ok(q) => q.value(),
        Err(_) => f64::NEG_INFINITY,
    };

    let report = integrate_log_semi_infinite(log_f, tail_bound, 64.0 * r.max(1.0), &[], cfg)?;
    Ok((LogProb::raw(report.log_value.min(0.0)), report))
}

/// ln P(B·Z > t) integrated on the original `Z` scale:
/// `∫_t^∞ f_Z(z) · P(B > t/z) dz`.
///
/// Independent route kept alongside the transformed-scale one; the two
/// must agree to quadrature tolerance.
pub fn log_tail_exact_zscale(query: &TailQuery, cfg: &QuadConfig) -> Result<LogProb> {
    if query.w == 0.0 {
        return Ok(LogProb::CERTAIN);
    }
    let (a, b) = (query.beta.a(), query.beta.b());
    let (t, gga) = (query.t, query.gga);
    let r = gga.gamma_shape().r();

    let log_f = |u: f64| -> Result<f64> {
        let z = t + u;
        let log_density = gga_log_pdf(gga, z)?.value();
        // 1 - t/z with both terms sharing the denominator exactly.
        let cx = u / z;
        let log_beta_tail = specfun::log_reg_beta_upper_from_complement(a, b, cx)?;
        Ok(log_density + log_beta_tail.value())
    };
    let tail_bound = |u: f64| match gga_log_tail(gga, t + u) {
        Ok(q) => q.value(),
        Err(_) => f64::NEG_INFINITY,
    };

    // Window sized so that (t + u)^p - t^p spans the usual 64·max(1,r).
    let window = fmath::powf(query.w + 64.0 * r.max(1.0), 1.0 / gga.p()) - t;
    let window = if window > 0.0 { window } else { t.max(1.0) };
    let report = integrate_log_semi_infinite(log_f, tail_bound, window, &[], cfg)?;
    Ok(LogProb::raw(report.log_value.min(0.0)))
}

/// ln P(B^p W > w | W > w): the exact tail with the gamma-tail factor
/// divided out.
pub fn log_conditional_tail(query: &TailQuery, cfg: &QuadConfig) -> Result<LogProb> {
    if !(query.w > 0.0) {
        return Err(Error::Domain("conditional tail requires t > 0"));
    }
    let joint = log_tail_exact(query, cfg)?;
    let given = gga_log_tail(query.gga, query.t)?;
    // Roundoff may push the log ratio a hair above zero; it is a
    // probability, so pin it.
    Ok(LogProb::raw((joint.value() - given.value()).min(0.0)))
}
