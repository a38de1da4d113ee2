//! Adaptive Gauss-Kronrod quadrature for nonnegative integrands on
//! `[0, ∞)`, carried out entirely in log space.
//!
//! Panel values and error estimates are log-sum-exp accumulations of
//! `ln w_i + ln f(x_i)`, so an integral of magnitude `e^{-100000}` is as
//! routine as one of magnitude 1. The semi-infinite domain is truncated
//! at a finite end that keeps doubling until a caller-supplied bound on
//! the discarded mass drops below the truncation tolerance.

use alloc::vec::Vec;

use crate::fmath;
use crate::logspace::{log_abs_diff_exp, log_sum_exp};
use crate::{Error, Result};

/// 15-point Kronrod abscissae (positive half; index 7 is the origin).
/// Odd indices are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_7,
    0.949_107_912_342_758_524_526_189_7,
    0.864_864_423_359_769_072_789_712_8,
    0.741_531_185_599_394_439_863_864_8,
    0.586_087_235_467_691_130_294_144_8,
    0.405_845_151_377_397_166_906_606_4,
    0.207_784_955_007_898_467_600_689_4,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_0,
    0.063_092_092_629_978_553_290_700_7,
    0.104_790_010_322_250_183_839_876_3,
    0.140_653_259_715_525_918_745_189_6,
    0.169_004_726_639_267_902_826_583_4,
    0.190_350_578_064_785_409_913_256_4,
    0.204_432_940_075_298_892_414_162_0,
    0.209_482_141_084_727_828_012_999_2,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_4,
    0.279_705_391_489_276_667_901_467_8,
    0.381_830_050_505_118_944_950_369_8,
    0.417_959_183_673_469_387_755_102_0,
];

/// Cap on domain doublings while chasing the truncation tolerance.
const MAX_EXTENSIONS: u32 = 48;

/// Tolerances and truncation policy for all quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Target relative error of the integral (a probability).
    pub rel_tol: f64,
    /// Refinement-pass budget per domain extension.
    pub max_refinements: u32,
    /// Stop extending the domain once the log of the discarded mass is
    /// below the accumulated log value plus this (negative) offset.
    pub truncation_log_tol: f64,
}

impl QuadConfig {
    /// Config with `rel_tol` and the default truncation policy
    /// (discarded mass below `rel_tol/10` of the accumulated value).
    pub fn with_rel_tol(rel_tol: f64) -> Result<Self> {
        let cfg = QuadConfig {
            rel_tol,
            max_refinements: 30,
            truncation_log_tol: fmath::ln(rel_tol / 10.0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::Domain("rel_tol must lie in (0, 1e-3]"));
        }
        if self.max_refinements < 4 {
            return Err(Error::Domain("max_refinements must be at least 4"));
        }
        if !self.truncation_log_tol.is_finite() || self.truncation_log_tol >= 0.0 {
            return Err(Error::Domain("truncation_log_tol must be finite and negative"));
        }
        Ok(())
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-10,
            max_refinements: 30,
            truncation_log_tol: fmath::ln(1e-11),
        }
    }
}

/// Outcome of an adaptive integration, all in log scale.
#[derive(Debug, Clone, Copy)]
pub struct QuadReport {
    /// ln of the integral.
    pub log_value: f64,
    /// ln of the Gauss-Kronrod error estimate relative to the value.
    pub log_rel_err_est: f64,
    /// ln of the relative change between the last two refinement
    /// levels; `-inf` when a single level already converged.
    pub refinement_delta_log: f64,
    /// Panels in the final subdivision.
    pub panels: usize,
    /// Where the semi-infinite domain was truncated.
    pub domain_end: f64,
}

struct Panel {
    lo: f64,
    hi: f64,
    log_val: f64,
    log_err: f64,
}

/// Integrates `exp(log_f)` over `[0, ∞)`.
///
/// `log_tail_bound(u)` must return an upper bound on
/// `ln ∫_u^∞ exp(log_f)`; it controls domain truncation. `initial_end`
/// sizes the first window and `breakpoints` force panel edges (e.g. at
/// kinks of the integrand).
pub fn integrate_log_semi_infinite<F, T>(
    mut log_f: F,
    log_tail_bound: T,
    initial_end: f64,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadReport>
where
    F: FnMut(f64) -> Result<f64>,
    T: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(initial_end > 0.0) || !initial_end.is_finite() {
        return Err(Error::Domain("initial_end must be positive and finite"));
    }

    let mut end = initial_end.max(1.0);
    let mut panels = initial_panels(&mut log_f, end, breakpoints)?;
    let mut report;

    let mut extensions = 0;
    loop {
        report = refine(&mut log_f, &mut panels, cfg)?;
        report.domain_end = end;
        if log_tail_bound(end) <= report.log_value + cfg.truncation_log_tol {
            break;
        }
        if extensions == MAX_EXTENSIONS {
            return Err(Error::Convergence("quadrature domain extension stalled"));
        }
        extensions += 1;
        // Grow the window geometrically from the current end.
        let new_end = end * 2.0;
        let mut lo = end;
        for k in 1..=4 {
            let hi = end + (new_end - end) * k as f64 / 4.0;
            panels.push(eval_panel(&mut log_f, lo, hi)?);
            lo = hi;
        }
        end = new_end;
    }
    Ok(report)
}

fn initial_panels<F>(log_f: &mut F, end: f64, breakpoints: &[f64]) -> Result<Vec<Panel>>
where
    F: FnMut(f64) -> Result<f64>,
{
    // Geometrically refined toward the origin, where the integrands
    // here concentrate: 0, end/2^J, ..., end/2, end.
    let mut edges: Vec<f64> = Vec::new();
    edges.push(0.0);
    let levels = fmath::ln(end).max(0.0) / core::f64::consts::LN_2;
    let levels = (levels.min(48.0) as u32).max(1);
    for j in (0..=levels).rev() {
        edges.push(end / (1u64 << j) as f64);
    }
    for &b in breakpoints {
        if b > 0.0 && b < end {
            edges.push(b);
        }
    }
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup();

    let mut panels = Vec::with_capacity(edges.len() - 1);
    for pair in edges.windows(2) {
        if pair[1] > pair[0] {
            panels.push(eval_panel(log_f, pair[0], pair[1])?);
        }
    }
    Ok(panels)
}

/// Refine until the summed Kronrod error estimate is below
/// `rel_tol` times the accumulated value.
fn refine<F>(log_f: &mut F, panels: &mut Vec<Panel>, cfg: &QuadConfig) -> Result<QuadReport>
where
    F: FnMut(f64) -> Result<f64>,
{
    let log_rel_tol = fmath::ln(cfg.rel_tol);
    let mut level_totals: Vec<f64> = Vec::new();

    for _pass in 0..=cfg.max_refinements {
        panels.sort_by(|p, q| p.lo.partial_cmp(&q.lo).unwrap());
        let vals: Vec<f64> = panels.iter().map(|p| p.log_val).collect();
        let errs: Vec<f64> = panels.iter().map(|p| p.log_err).collect();
        let total = log_sum_exp(&vals);
        let err_total = log_sum_exp(&errs);
        level_totals.push(total);

        if err_total <= total + log_rel_tol || total == f64::NEG_INFINITY {
            let (rel_err, delta) = if total == f64::NEG_INFINITY {
                (f64::NEG_INFINITY, f64::NEG_INFINITY)
            } else {
                let delta = match level_totals.len() {
                    0 | 1 => f64::NEG_INFINITY,
                    n => log_abs_diff_exp(level_totals[n - 1], level_totals[n - 2]) - total,
                };
                (err_total - total, delta)
            };
            return Ok(QuadReport {
                log_value: total,
                log_rel_err_est: rel_err,
                refinement_delta_log: delta,
                panels: panels.len(),
                domain_end: 0.0,
            });
        }

        // Split every panel holding more than its fair share of the
        // error budget.
        let share = total + log_rel_tol - fmath::ln(2.0 * panels.len() as f64);
        let mut split: Vec<Panel> = Vec::new();
        let mut any = false;
        for panel in panels.drain(..) {
            if panel.log_err > share {
                let mid = 0.5 * (panel.lo + panel.hi);
                if mid > panel.lo && mid < panel.hi {
                    any = true;
                    split.push(eval_panel(log_f, panel.lo, mid)?);
                    split.push(eval_panel(log_f, mid, panel.hi)?);
                    continue;
                }
            }
            split.push(panel);
        }
        *panels = split;
        if !any {
            // Panels can no longer be bisected in f64; the estimate
            // will not improve.
            break;
        }
    }
    Err(Error::Convergence("adaptive quadrature stalled before tolerance"))
}

fn eval_panel<F>(log_f: &mut F, lo: f64, hi: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let half = 0.5 * (hi - lo);
    let center = 0.5 * (lo + hi);
    let mut k_terms = [f64::NEG_INFINITY; 15];
    let mut g_terms = [f64::NEG_INFINITY; 7];
    let mut ki = 0;
    let mut gi = 0;
    for (i, &x) in XGK.iter().enumerate() {
        if i == 7 {
            let f0 = log_f(center)?;
            k_terms[ki] = fmath::ln(WGK[7]) + f0;
            ki += 1;
            g_terms[gi] = fmath::ln(WG[3]) + f0;
            gi += 1;
        } else {
            let fp = log_f(center + half * x)?;
            let fm = log_f(center - half * x)?;
            k_terms[ki] = fmath::ln(WGK[i]) + fp;
            k_terms[ki + 1] = fmath::ln(WGK[i]) + fm;
            ki += 2;
            if i % 2 == 1 {
                let w = fmath::ln(WG[(i - 1) / 2]);
                g_terms[gi] = w + fp;
                g_terms[gi + 1] = w + fm;
                gi += 2;
            }
        }
    }
    let log_half = fmath::ln(half);
    let log_k = log_half + log_sum_exp(&k_terms);
    let log_g = log_half + log_sum_exp(&g_terms);
    Ok(Panel {
        lo,
        hi,
        log_val: log_k,
        log_err: log_abs_diff_exp(log_k, log_g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run<F: FnMut(f64) -> Result<f64>, T: Fn(f64) -> f64>(
        f: F,
        tail: T,
        end: f64,
    ) -> QuadReport {
        integrate_log_semi_infinite(f, tail, end, &[], &QuadConfig::default()).unwrap()
    }

    #[test]
    fn integrates_exponential() {
        // ∫ e^{-u} du = 1
        let r = run(|u| Ok(-u), |u| -u, 64.0);
        assert!(r.log_value.abs() < 1e-12, "{}", r.log_value);
    }

    #[test]
    fn integrates_scaled_exponential() {
        // ∫ e^{-3u} du = 1/3
        let r = run(|u| Ok(-3.0 * u), |u| -3.0 * u, 64.0);
        assert!((r.log_value - (1.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn integrates_gamma_density() {
        // ∫ u^{r-1} e^{-u} du = Γ(r), including a fractional shape with
        // a corner at the origin.
        for &shape in &[2.5, 1.0, 1.7] {
            let r = run(
                |u| Ok((shape - 1.0) * u.ln() - u),
                |u| {
                    // crude but valid bound for u >= 2 shape: poly < e^{u/2}
                    (shape - 1.0) * u.max(1.0).ln() - u
                },
                64.0,
            );
            let want = crate::specfun::log_gamma_raw(shape);
            assert!(
                (r.log_value - want).abs() < 1e-10,
                "shape {shape}: got {} want {want}",
                r.log_value
            );
        }
    }

    #[test]
    fn deep_tail_magnitude() {
        // ∫ e^{-u-K} du = e^{-K} with K far below underflow.
        let k = 50_000.0;
        let r = run(|u| Ok(-u - k), |u| -u - k, 64.0);
        assert!((r.log_value + k).abs() < 1e-11);
    }

    #[test]
    fn honors_breakpoints_at_kinks() {
        // f = e^{-u} for u < 10, 0 beyond: ∫ = 1 - e^{-10}.
        let f = |u: f64| {
            Ok(if u < 10.0 { -u } else { f64::NEG_INFINITY })
        };
        let r = integrate_log_semi_infinite(
            f,
            |_| f64::NEG_INFINITY,
            64.0,
            &[10.0],
            &QuadConfig::default(),
        )
        .unwrap();
        let want = (-(-10.0f64).exp()).ln_1p();
        assert!((r.log_value - want).abs() < 1e-11, "{}", r.log_value);
    }

    #[test]
    fn extends_domain_when_truncation_bound_demands() {
        // Slowly decaying rate: initial window of 1 is far too short.
        let r = run(|u| Ok(-0.05 * u), |u| -0.05 * u, 1.0);
        assert!((r.log_value - 20.0f64.ln()).abs() < 1e-10);
        assert!(r.domain_end > 300.0);
    }

    #[test]
    fn config_validation() {
        assert!(QuadConfig::with_rel_tol(1e-8).is_ok());
        assert!(QuadConfig::with_rel_tol(0.0).is_err());
        assert!(QuadConfig::with_rel_tol(1e-2).is_err());
        let bad = QuadConfig {
            max_refinements: 2,
            ..QuadConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn propagates_integrand_errors() {
        let res = integrate_log_semi_infinite(
            |_| Err(Error::Convergence("boom")),
            |_| f64::NEG_INFINITY,
            8.0,
            &[],
            &QuadConfig::default(),
        );
        assert!(res.is_err());
    }
}
