//! Monte Carlo estimators of `P(B·Z > t)`: naive simulation, and a
//! conditional estimator that stays useful arbitrarily deep in the
//! tail.
//!
//! The conditional estimator factors the event through `{W > w}`:
//! `P(B^p W > w) = P(W > w)·P(B^p W > w | W > w)`. The first factor is
//! computed in closed form (no sampling); only the bounded conditional
//! indicator is averaged, with `(W - w | W > w)` drawn exactly by the
//! overshoot sampler. Its relative standard error therefore does not
//! depend on how far out `w` sits — where naive simulation needs
//! `1/P(B·Z > t)` samples per hit.
//!
//! Seeding: both estimators derive substreams of the user seed via the
//! documented counter offsets of [`RngState::substream`] — stream 0 for
//! the naive estimator, stream 1 for the conditional one — so mixed
//! runs stay reproducible and independent.

use crate::distributions::{sample_beta, sample_gamma_overshoot, sample_gga};
use crate::exact_tail::TailQuery;
use crate::fmath;
use crate::logspace::LogProb;
use crate::rng::RngState;
use crate::specfun;
use crate::{Error, Result};

/// Substream indices for the two estimators.
const NAIVE_STREAM: u64 = 0;
const CONDITIONAL_STREAM: u64 = 1;

/// Fewer positive indicator samples than this flags the estimate as
/// undersampled.
const MIN_HITS: u64 = 100;

/// Sample count and seed for one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub n: u64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(n: u64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("sample count must be at least 1"));
        }
        Ok(McConfig { n, seed })
    }
}

/// A Monte Carlo estimate in log scale with its relative standard
/// error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// ln of the estimated probability (`-inf` when no sample hit).
    pub log_mean: LogProb,
    /// Standard error divided by the estimate (`inf` when no sample
    /// hit).
    pub stderr_rel: f64,
    pub n: u64,
    pub seed: u64,
    /// Set when fewer than 100 samples contributed a hit; the standard
    /// error is then unreliable.
    pub undersampled: bool,
}

fn estimate_from_hits(hits: u64, log_factor: f64, cfg: &McConfig) -> McEstimate {
    let n = cfg.n as f64;
    if hits == 0 {
        return McEstimate {
            log_mean: LogProb::NEVER,
            stderr_rel: f64::INFINITY,
            n: cfg.n,
            seed: cfg.seed,
            undersampled: true,
        };
    }
    let p_hat = hits as f64 / n;
    McEstimate {
        log_mean: LogProb::raw(log_factor + fmath::ln(p_hat)),
        // Bernoulli mean: se/mean = sqrt((1-p)/(n·p)); the closed-form
        // factor contributes no variance.
        stderr_rel: fmath::sqrt((1.0 - p_hat) / (n * p_hat)),
        n: cfg.n,
        seed: cfg.seed,
        undersampled: hits < MIN_HITS,
    }
}

/// Naive estimator: the mean of `n` indicators `1{B·Z > t}`.
///
/// Unbiased for `P(B·Z > t)`; useless once the target is far below
/// `1/n` (it then reports `-inf` and `undersampled`).
pub fn mc_naive(query: &TailQuery, cfg: &McConfig) -> Result<McEstimate> {
    let mut rng = RngState::substream(cfg.seed, NAIVE_STREAM);
    let t = query.t();
    let mut hits = 0u64;
    for _ in 0..cfg.n {
        let b = sample_beta(query.beta(), &mut rng);
        let z = sample_gga(query.gga(), &mut rng);
        if b * z > t {
            hits += 1;
        }
    }
    Ok(estimate_from_hits(hits, 0.0, cfg))
}

/// Conditional (overshoot) estimator:
/// `P(W > w) · mean of 1{B^p(w + O) > w}` with `O` an exact overshoot
/// draw and the gamma-tail factor from [`specfun::log_reg_gamma_upper`].
///
/// Unbiased for `P(B^p W > w)` and valid arbitrarily deep in the tail;
/// requires `w > 0` and (from the overshoot envelope) `c/p < w + 1`.
pub fn mc_conditional(query: &TailQuery, cfg: &McConfig) -> Result<McEstimate> {
    let w = query.w();
    if !(w > 0.0) {
        return Err(Error::Domain("conditional estimator requires t > 0"));
    }
    let shape = query.gga().gamma_shape();
    let p = query.gga().p();
    let (a_params, log_q) = (
        query.beta(),
        specfun::log_reg_gamma_upper(shape.r(), w)?.value(),
    );

    let mut rng = RngState::substream(cfg.seed, CONDITIONAL_STREAM);
    let mut hits = 0u64;
    for _ in 0..cfg.n {
        let overshoot = sample_gamma_overshoot(shape, w, &mut rng)?;
        let b = sample_beta(a_params, &mut rng);
        // B^p(w + O) > w  <=>  ln B > -log1p(O/w)/p, kept in logs so
        // deep thresholds cost no precision.
        if fmath::ln(b) > -fmath::ln_1p(overshoot / w) / p {
            hits += 1;
        }
    }
    Ok(estimate_from_hits(hits, log_q, cfg))
}
