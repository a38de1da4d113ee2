//! The closed-form tail asymptotic, the four-step approximation chain
//! it rests on, and rigorous closed-form bounds on every gap in that
//! chain.
//!
//! Write `r = c/p`, `w = t^p`, and let `E` be a standard exponential.
//! Conditioning on `{W > w}` and replacing, step by step, the overshoot
//! by its exponential limit, the beta argument by its linearization,
//! and the beta tail by its boundary law gives the chain
//!
//! ```text
//! T1 = P(B^p W > w | W > w)
//! T2 = P(B^p (w + E) > w)
//! T3 = P(1 - B < E/(pw))
//! T4 = Γ(b) / (B(a,b) · (pw)^b)
//! ```
//!
//! whose product with `P(W > w)` at the last link is the asymptotic
//! formula of [`log_tail_asymptotic`]. T2 and T3 are pinned to concrete
//! expectations over the exponential density, so each gap `|Ti - Tj|`
//! is a well-defined number; [`bound_12`], [`bound_23`] and
//! [`bound_34`] return closed-form upper bounds on those gaps that hold
//! at every `w` in their stated domain, not merely asymptotically. The
//! elementary inequalities the bounds lean on are exposed as
//! predicates so they can be property-tested exhaustively.

use crate::distributions::{BetaParams, GGaParams, GammaParams};
use crate::exact_tail::{log_conditional_tail, TailQuery};
use crate::fmath;
use crate::logspace::LogProb;
use crate::quadrature::{integrate_log_semi_infinite, QuadConfig};
use crate::specfun::{self, log_beta_raw, log_gamma_raw};
use crate::{Error, Result};

use core::f64::consts::LN_2;

/// ln of the closed-form asymptotic for `P(B·Z > t)` as `t → ∞`:
///
/// ```text
/// Γ(a+b) / (Γ(c/p)·Γ(a)) · p^{-b} · t^{c-(b+1)p} · e^{-t^p}
/// ```
///
/// Unlike the exact tail this is an approximation; at small `t` its log
/// may exceed 0.
pub fn log_tail_asymptotic(query: &TailQuery) -> Result<LogProb> {
    let t = query.t();
    if !(t > 0.0) {
        return Err(Error::Domain("asymptotic formula requires t > 0"));
    }
    let (a, b) = (query.beta().a(), query.beta().b());
    let (c, p) = (query.gga().c(), query.gga().p());
    let v = log_gamma_raw(a + b) - log_gamma_raw(c / p) - log_gamma_raw(a) - b * fmath::ln(p)
        + (c - (b + 1.0) * p) * fmath::ln(t)
        - query.w();
    Ok(LogProb::raw(v))
}

/// The four chain quantities at one `w`, plus the gap bounds, all on
/// the probability scale where bounds are concerned (they decay
/// polynomially, so they do not underflow).
#[derive(Debug, Clone, Copy)]
pub struct ApproxChainReport {
    pub w: f64,
    pub log_t1: LogProb,
    pub log_t2: LogProb,
    pub log_t3: LogProb,
    pub log_t4: LogProb,
    pub bound_12: f64,
    pub bound_23: f64,
    pub bound_34: f64,
}

impl ApproxChainReport {
    /// Measured |T1 - T2| on the probability scale.
    pub fn gap_12(&self) -> f64 {
        fmath::abs(self.log_t1.exp() - self.log_t2.exp())
    }

    pub fn gap_23(&self) -> f64 {
        fmath::abs(self.log_t2.exp() - self.log_t3.exp())
    }

    pub fn gap_34(&self) -> f64 {
        fmath::abs(self.log_t3.exp() - self.log_t4.exp())
    }

    /// True when every measured gap sits below its bound.
    pub fn bounds_hold(&self) -> bool {
        self.gap_12() <= self.bound_12
            && self.gap_23() <= self.bound_23
            && self.gap_34() <= self.bound_34
    }
}

/// Evaluates the whole chain at one `(a, b, r, p, w)` point.
///
/// T1 comes from the exact conditional tail; T2 and T3 are 1-D
/// log-space quadratures over the exponential density; T4 is closed
/// form. The bounds come from the three `bound_*` evaluators, so the
/// preconditions of [`bound_12`] (`w ≥ max(4, 2r)`) apply here too.
pub fn chain_evaluate(
    beta: BetaParams,
    shape: GammaParams,
    p: f64,
    w: f64,
    cfg: &QuadConfig,
) -> Result<ApproxChainReport> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain("chain requires p > 0 and finite"));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::Domain("chain requires w > 0 and finite"));
    }
    let r = shape.r();
    let (a, b) = (beta.a(), beta.b());

    let gga = GGaParams::new(r * p, p)?;
    let query = TailQuery::from_transformed_threshold(beta, gga, w)?;
    let log_t1 = log_conditional_tail(&query, cfg)?;

    // T2 = ∫ e^{-z} P(B > (1/(1+z/w))^{1/p}) dz
    let f2 = |z: f64| -> Result<f64> {
        let cx = -fmath::exp_m1(-fmath::ln_1p(z / w) / p);
        let tail = specfun::log_reg_beta_upper_from_complement(a, b, cx)?;
        Ok(-z + tail.value())
    };
    let t2 = integrate_log_semi_infinite(f2, |u| -u, 64.0, &[], cfg)?;
    let log_t2 = LogProb::raw(t2.log_value.min(0.0));

    // T3 = ∫ e^{-z} P(1 - B < z/(pw)) dz; the beta factor saturates at
    // z = pw, which is handed to the quadrature as a breakpoint.
    let pw = p * w;
    let f3 = |z: f64| -> Result<f64> {
        if z >= pw {
            return Ok(-z);
        }
        let tail = specfun::log_reg_beta_upper_from_complement(a, b, z / pw)?;
        Ok(-z + tail.value())
    };
    let t3 = integrate_log_semi_infinite(f3, |u| -u, 64.0, &[pw], cfg)?;
    let log_t3 = LogProb::raw(t3.log_value.min(0.0));

    // T4 = Γ(b) / (B(a,b)·(pw)^b), by construction in log form.
    let log_t4 = LogProb::raw(log_gamma_raw(b) - log_beta_raw(a, b) - b * fmath::ln(pw));

    Ok(ApproxChainReport {
        w,
        log_t1,
        log_t2,
        log_t3,
        log_t4,
        bound_12: bound_12(shape, beta, p, w, log_t2)?,
        bound_23: bound_23(beta, p, w)?,
        bound_34: bound_34(beta, p, w)?,
    })
}

/// Rigorous upper bound on |T3 - T4|, valid for every `w > 0`.
///
/// Writing `X = pw` and `B = B(a,b)`, the bound is the sum of five
/// closed-form terms, each covering one elementary estimate in the
/// comparison of the two integrals:
///
/// 1. `e^{-X/2}` — cutting the outer exponential integral at `u = 1/2`
///    (the inner CDF is at most 1);
/// 2. `max{a,2}·Γ(b+2) / (B·(b+1)·X^{b+1})` — dropping the
///    `(1-x)^{a-1}` factor from the inner beta integrand on `(0, 1/2)`,
///    via `|1 - (1-x)^{a-1}| ≤ max{a,2}·x` (see
///    [`drop_factor_bound_holds`]);
/// 3. `e^{-X/2} / (B·2^b·b)` — the boundary term left by integrating
///    the simplified inner integral by parts at `u = 1/2`;
/// 4. `e^{-X/2}·(2/X + 2^{b-1}·Γ(b)/X^b) / B` — the tail
///    `∫_{1/2}^∞ u^{b-1} e^{-Xu} du`, via
///    `(1/2+v)^{b-1} ≤ 2 + (2v)^{b-1}` (see
///    [`shifted_power_bound_holds`]);
/// 5. `e^{-X}` — the exponential exceeding `X`, where the linearized
///    probability saturates at 1.
pub fn bound_34(beta: BetaParams, p: f64, w: f64) -> Result<f64> {
    check_pw(p, w)?;
    let (a, b) = (beta.a(), beta.b());
    let x = p * w;
    let ln_x = fmath::ln(x);
    let ln_beta = log_beta_raw(a, b);

    let cut_outer = fmath::exp(-x / 2.0);
    let drop = fmath::exp(
        fmath::ln(a.max(2.0)) + log_gamma_raw(b + 2.0)
            - ln_beta
            - fmath::ln(b + 1.0)
            - (b + 1.0) * ln_x,
    );
    let cut_mid = fmath::exp(-x / 2.0 - ln_beta - b * LN_2 - fmath::ln(b));
    let far = fmath::exp(-x / 2.0 - ln_beta)
        * (2.0 / x + fmath::exp((b - 1.0) * LN_2 + log_gamma_raw(b) - b * ln_x));
    let neglected = fmath::exp(-x);

    Ok(cut_outer + drop + cut_mid + far + neglected)
}

/// Rigorous upper bound on |T2 - T3|, valid for every `w > 0`:
///
/// ```text
/// max{1, (p/(p+1))^{a-1}} / B(a,b) · (p+1)(b+1)Γ(b+2) / (2b·p^{b+1}) · w^{-(b+1)}
///   + 2·e^{-pw/(p+1)}
/// ```
///
/// The polynomial term tracks the event that `B` lands between the
/// linearized threshold `1 - E/(pw)` and the true one
/// `(1+E/w)^{-1/p}` (the sandwich of [`power_sandwich_holds`]); the
/// exponential term covers `E > pw/(p+1)`, beyond which the sandwich
/// interval is no longer controlled.
pub fn bound_23(beta: BetaParams, p: f64, w: f64) -> Result<f64> {
    check_pw(p, w)?;
    let (a, b) = (beta.a(), beta.b());
    let prefactor = fmath::exp((a - 1.0) * fmath::ln(p / (p + 1.0))).max(1.0);
    let lead = prefactor
        * fmath::exp(
            fmath::ln((p + 1.0) * (b + 1.0) / (2.0 * b)) + log_gamma_raw(b + 2.0)
                - log_beta_raw(a, b)
                - (b + 1.0) * fmath::ln(p)
                - (b + 1.0) * fmath::ln(w),
        );
    Ok(lead + 2.0 * fmath::exp(-p * w / (p + 1.0)))
}

/// Rigorous upper bound on |T1 - T2| for `w ≥ max(4, 2r)`.
///
/// T1 equals `N · ∫ P(B^p(w+z) > w)(1+z/w)^{r-1} e^{-z} dz` with
/// `N = w^{r-1} e^{-w} / ∫_w^∞ x^{r-1} e^{-x} dx` the normalizing
/// ratio, so `|T1 - T2| ≤ max(N,1)·|K - T2| + |N-1|·T2` and the bound
/// is assembled from three pieces:
///
/// 1. `max{1/√w, e^{r/√w} - 1} · T2` — the integral over `z ≤ √w`,
///    where `|(1+z/w)^{r-1} - 1|` is that constant at worst;
/// 2. the far tail over `z > √w`, with the probability factor bounded
///    by 1: `(√w+1)/w · e^{-√w}` for `r < 1`, else `2·e^{-√w/2}`
///    (this is where `w ≥ 2r` is needed);
/// 3. `|N - 1| · T2`, with `N` evaluated through
///    [`specfun::log_reg_gamma_upper`]. For `r = 1` the ratio is
///    exactly 1 and T1 = T2 identically; the bound then reduces to
///    pieces 1 and 2.
///
/// The beta parameters and `p` influence the bound only through the
/// supplied `t2`.
pub fn bound_12(
    shape: GammaParams,
    _beta: BetaParams,
    p: f64,
    w: f64,
    t2: LogProb,
) -> Result<f64> {
    let r = shape.r();
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain("bound_12 requires p > 0 and finite"));
    }
    if !w.is_finite() || w < 4.0f64.max(2.0 * r) {
        return Err(Error::Domain("bound_12 requires w >= max(4, 2r)"));
    }
    let sqrt_w = fmath::sqrt(w);
    let t2_lin = t2.exp();

    // ln N = (r-1)·ln w - w - ln Γ(r) - ln Q(r, w).
    let ln_ratio = (r - 1.0) * fmath::ln(w) - w - log_gamma_raw(r)
        - specfun::log_reg_gamma_upper(r, w)?.value();
    let ratio_dev = fmath::abs(fmath::exp_m1(ln_ratio));
    let ratio_cap = fmath::exp(ln_ratio).max(1.0);

    let near = (1.0 / sqrt_w).max(fmath::exp_m1(r / sqrt_w)) * t2_lin;
    let far = if r < 1.0 {
        (sqrt_w + 1.0) / w * fmath::exp(-sqrt_w)
    } else {
        2.0 * fmath::exp(-sqrt_w / 2.0)
    };
    Ok(ratio_cap * (near + far) + ratio_dev * t2_lin)
}

fn check_pw(p: f64, w: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() || !(w > 0.0) || !w.is_finite() {
        return Err(Error::Domain("bounds require p > 0 and w > 0, both finite"));
    }
    Ok(())
}

/// `1 - x/p ≤ (1+x)^{-1/p} < 1 - x/p + (p+1)/(2p²)·x²` for `x, p > 0`.
pub fn power_sandwich_holds(x: f64, p: f64) -> bool {
    let f = fmath::exp(-fmath::ln_1p(x) / p);
    let lo = 1.0 - x / p;
    let hi = 1.0 - x / p + (p + 1.0) / (2.0 * p * p) * x * x;
    lo <= f && f < hi
}

/// `(1/2 + v)^{b-1} ≤ 2 + (2v)^{b-1}` for `b, v > 0`.
pub fn shifted_power_bound_holds(b: f64, v: f64) -> bool {
    fmath::powf(0.5 + v, b - 1.0) <= 2.0 + fmath::powf(2.0 * v, b - 1.0)
}

/// `|1 - (1-x)^{a-1}| ≤ max{a,2}·x` for `a > 0`, `x ∈ (0, 1/2)`.
pub fn drop_factor_bound_holds(a: f64, x: f64) -> bool {
    fmath::abs(1.0 - fmath::powf(1.0 - x, a - 1.0)) <= a.max(2.0) * x
}

/// Truth values of the three elementary inequalities at one sample
/// point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InequalityChecks {
    pub power_sandwich: bool,
    pub shifted_power_bound: bool,
    pub drop_factor_bound: bool,
}

impl InequalityChecks {
    pub fn all_hold(&self) -> bool {
        self.power_sandwich && self.shifted_power_bound && self.drop_factor_bound
    }
}

/// Evaluates all three elementary inequalities at `(x, p, a, b, v)`.
///
/// `x` must lie in `(0, 1/2)` (required by the drop-factor inequality);
/// the remaining arguments must be positive.
pub fn check_elementary_inequalities(
    x: f64,
    p: f64,
    a: f64,
    b: f64,
    v: f64,
) -> Result<InequalityChecks> {
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::Domain("inequality checks require x in (0, 1/2)"));
    }
    for (arg, what) in [
        (p, "inequality checks require p > 0"),
        (a, "inequality checks require a > 0"),
        (b, "inequality checks require b > 0"),
        (v, "inequality checks require v > 0"),
    ] {
        if !(arg > 0.0) || !arg.is_finite() {
            return Err(Error::Domain(what));
        }
    }
    Ok(InequalityChecks {
        power_sandwich: power_sandwich_holds(x, p),
        shifted_power_bound: shifted_power_bound_holds(b, v),
        drop_factor_bound: drop_factor_bound_holds(a, x),
    })
}
