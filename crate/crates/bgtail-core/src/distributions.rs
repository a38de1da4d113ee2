//! Parameter bundles, log-densities, tails, and exact samplers for the
//! three distribution families, plus the power transform `W = Z^p` that
//! turns a generalized gamma into a plain gamma.

use crate::fmath;
use crate::logspace::{LogProb, LogReal};
use crate::rng::RngState;
use crate::specfun;
use crate::{Error, Result};

/// Validated shape parameters of a `Beta(a, b)` distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    a: f64,
    b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !(b > 0.0) || !b.is_finite() {
            return Err(Error::Domain("beta parameters must be positive and finite"));
        }
        Ok(BetaParams { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Validated parameters of a generalized gamma `GGa(c, p)` distribution
/// with density `p x^{c-1} e^{-x^p} / Γ(c/p)` on `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGaParams {
    c: f64,
    p: f64,
}

impl GGaParams {
    pub fn new(c: f64, p: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() || !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain("generalized gamma parameters must be positive and finite"));
        }
        Ok(GGaParams { c, p })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Shape of the transformed variable: `Z^p ~ Gamma(c/p, 1)`.
    pub fn gamma_shape(&self) -> GammaParams {
        GammaParams { r: self.c / self.p }
    }
}

/// Validated shape of a unit-scale `Gamma(r, 1)` distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    r: f64,
}

impl GammaParams {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain("gamma shape must be positive and finite"));
        }
        Ok(GammaParams { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// ln of the `Beta(a, b)` density at `x`.
///
/// At the endpoints the exact limit is returned when it exists
/// (including `-inf` for a vanishing density); a diverging density is a
/// domain error. Never NaN.
pub fn beta_log_pdf(params: BetaParams, x: f64) -> Result<LogReal> {
    let (a, b) = (params.a, params.b);
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain("beta density requires x in [0, 1]"));
    }
    if x == 0.0 {
        return boundary_density(a, b);
    }
    if x == 1.0 {
        return boundary_density(b, a);
    }
    let v = (a - 1.0) * fmath::ln(x) + (b - 1.0) * fmath::ln_1p(-x) - specfun::log_beta_raw(a, b);
    Ok(LogReal::raw(v))
}

/// Density limit at the endpoint whose exponent is `edge - 1`.
fn boundary_density(edge: f64, other: f64) -> Result<LogReal> {
    if edge < 1.0 {
        Err(Error::Domain("beta density diverges at this endpoint"))
    } else if edge == 1.0 {
        Ok(LogReal::raw(-specfun::log_beta_raw(edge, other)))
    } else {
        Ok(LogReal::ZERO)
    }
}

/// ln of the `GGa(c, p)` density at `x > 0`:
/// `ln p + (c-1) ln x - x^p - ln Γ(c/p)`.
pub fn gga_log_pdf(params: GGaParams, x: f64) -> Result<LogReal> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("generalized gamma density requires x > 0"));
    }
    let (c, p) = (params.c, params.p);
    let v = fmath::ln(p) + (c - 1.0) * fmath::ln(x) - fmath::powf(x, p)
        - specfun::log_gamma_raw(c / p);
    Ok(LogReal::raw(v))
}

/// ln P(Z > t) for `Z ~ GGa(c, p)`, via the transform `W = Z^p`:
/// exactly `log_reg_gamma_upper(c/p, t^p)`.
pub fn gga_log_tail(params: GGaParams, t: f64) -> Result<LogProb> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain("tail threshold must be nonnegative and finite"));
    }
    specfun::log_reg_gamma_upper(params.c / params.p, fmath::powf(t, params.p))
}

/// Unit-scale gamma draw: Marsaglia-Tsang rejection against a squared
/// normal (no squeeze step, the log test is always evaluated), with the
/// `U^{1/r}` boost for shapes below 1.
pub fn sample_gamma(params: GammaParams, rng: &mut RngState) -> f64 {
    sample_gamma_shape(params.r, rng)
}

fn sample_gamma_shape(r: f64, rng: &mut RngState) -> f64 {
    if r < 1.0 {
        let x = sample_gamma_shape(r + 1.0, rng);
        let u = rng.next_open01();
        return x * fmath::powf(u, 1.0 / r);
    }
    let d = r - 1.0 / 3.0;
    let c = 1.0 / fmath::sqrt(9.0 * d);
    loop {
        let x = rng.next_normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.next_open01();
        if fmath::ln(u) < 0.5 * x * x + d - d * v + d * fmath::ln(v) {
            return d * v;
        }
    }
}

/// Draw from `Beta(a, b)` as `G_a / (G_a + G_b)` with two unit-scale
/// gamma draws.
pub fn sample_beta(params: BetaParams, rng: &mut RngState) -> f64 {
    loop {
        let ga = sample_gamma_shape(params.a, rng);
        let gb = sample_gamma_shape(params.b, rng);
        let sum = ga + gb;
        if sum > 0.0 {
            return ga / sum;
        }
    }
}

/// Draw from `GGa(c, p)`: sample `W ~ Gamma(c/p)` and return `W^{1/p}`.
pub fn sample_gga(params: GGaParams, rng: &mut RngState) -> f64 {
    fmath::powf(sample_gamma_shape(params.c / params.p, rng), 1.0 / params.p)
}

/// Exact draw from the gamma overshoot law `(W - w | W > w)` for
/// `W ~ Gamma(r, 1)`, whose density is proportional to
/// `(1 + u/w)^{r-1} e^{-u}` on `u ≥ 0`.
///
/// Rejection envelopes: `Exp(1)` for `r ≤ 1` (the density ratio is at
/// most 1), and `Exp(1 - (r-1)/w)` for `1 < r < w + 1` using
/// `(1 + u/w)^{r-1} ≤ e^{(r-1)u/w}`. Shapes `r ≥ w + 1` make that
/// envelope rate nonpositive and are rejected.
pub fn sample_gamma_overshoot(params: GammaParams, w: f64, rng: &mut RngState) -> Result<f64> {
    let r = params.r;
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::Domain("overshoot requires w > 0 and finite"));
    }
    if r >= w + 1.0 {
        return Err(Error::Domain("overshoot envelope requires r < w + 1"));
    }
    if r == 1.0 {
        // Memoryless case: the overshoot is exactly Exp(1).
        return Ok(-fmath::ln(rng.next_open01()));
    }
    if r < 1.0 {
        loop {
            let u = -fmath::ln(rng.next_open01());
            let v = rng.next_open01();
            if fmath::ln(v) < (r - 1.0) * fmath::ln_1p(u / w) {
                return Ok(u);
            }
        }
    }
    let rate = 1.0 - (r - 1.0) / w;
    loop {
        let u = -fmath::ln(rng.next_open01()) / rate;
        let v = rng.next_open01();
        if fmath::ln(v) < (r - 1.0) * (fmath::ln_1p(u / w) - u / w) {
            return Ok(u);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol * want.abs().max(1.0),
            "got {got}, want {want}"
        );
    }

    #[test]
    fn beta_pdf_known_values() {
        let uniform = BetaParams::new(1.0, 1.0).unwrap();
        close(beta_log_pdf(uniform, 0.3).unwrap().value(), 0.0, 1e-14);
        let b21 = BetaParams::new(2.0, 1.0).unwrap();
        close(beta_log_pdf(b21, 0.5).unwrap().value(), 0.0, 1e-14);
        // density 6x(1-x) at 1/2 is 1.5
        let b22 = BetaParams::new(2.0, 2.0).unwrap();
        close(beta_log_pdf(b22, 0.5).unwrap().value(), 1.5f64.ln(), 1e-13);
    }

    #[test]
    fn beta_pdf_boundaries_never_nan() {
        // Exponent negative: diverges -> domain error.
        let p = BetaParams::new(0.5, 1.0).unwrap();
        assert!(beta_log_pdf(p, 0.0).is_err());
        assert!(beta_log_pdf(p, 1.0).is_ok()); // b = 1: finite limit
        // a = 1: density at 0 is 1/B(1,b) = b.
        let p = BetaParams::new(1.0, 3.0).unwrap();
        close(beta_log_pdf(p, 0.0).unwrap().value(), 3.0f64.ln(), 1e-13);
        // a > 1: density vanishes.
        let p = BetaParams::new(2.0, 3.0).unwrap();
        assert!(beta_log_pdf(p, 0.0).unwrap().is_zero());
        assert!(beta_log_pdf(p, 1.5).is_err());
    }

    #[test]
    fn gga_pdf_known_values() {
        // (c=1, p=1) is Exp(1).
        let e = GGaParams::new(1.0, 1.0).unwrap();
        for &x in &[0.1, 1.0, 7.0] {
            close(gga_log_pdf(e, x).unwrap().value(), -x, 1e-13);
        }
        // (c=2, p=2): density 2x e^{-x^2}, at 1: ln 2 - 1.
        let g = GGaParams::new(2.0, 2.0).unwrap();
        close(gga_log_pdf(g, 1.0).unwrap().value(), 2.0f64.ln() - 1.0, 1e-13);
        // (c=3, p=1): Gamma(3) density x^2 e^{-x}/2, at 2: ln 2 - 2.
        let g = GGaParams::new(3.0, 1.0).unwrap();
        close(gga_log_pdf(g, 2.0).unwrap().value(), 2.0f64.ln() - 2.0, 1e-13);
        assert!(gga_log_pdf(g, 0.0).is_err());
        assert!(gga_log_pdf(g, -1.0).is_err());
    }

    #[test]
    fn gga_pdf_reduces_to_gamma_at_p1() {
        for &c in &[0.5, 1.0, 2.5, 7.0] {
            let g = GGaParams::new(c, 1.0).unwrap();
            for &x in &[0.05f64, 0.8, 3.0, 20.0] {
                let want = (c - 1.0) * x.ln() - x - crate::specfun::log_gamma_raw(c);
                close(gga_log_pdf(g, x).unwrap().value(), want, 1e-13);
            }
        }
    }

    #[test]
    fn gga_tail_is_the_transformed_gamma_tail() {
        // Defined as the composition; check bit-for-bit.
        for &(c, p) in &[(2.0, 2.0), (0.5, 1.7), (3.0, 0.5)] {
            let g = GGaParams::new(c, p).unwrap();
            for &t in &[0.3, 1.0, 4.0] {
                let lhs = gga_log_tail(g, t).unwrap().value();
                let rhs = crate::specfun::log_reg_gamma_upper(c / p, libm::pow(t, p))
                    .unwrap()
                    .value();
                assert_eq!(lhs.to_bits(), rhs.to_bits());
            }
        }
        // c = p means r = 1: P(Z > t) = e^{-t^p}.
        for &p in &[0.5, 1.0, 2.0] {
            let g = GGaParams::new(p, p).unwrap();
            close(gga_log_tail(g, 1.7).unwrap().value(), -libm::pow(1.7, p), 1e-12);
        }
        let g = GGaParams::new(2.0, 1.0).unwrap();
        close(
            gga_log_tail(g, 1.0).unwrap().value(),
            (2.0f64 / core::f64::consts::E).ln(),
            1e-13,
        );
        assert_eq!(gga_log_tail(g, 0.0).unwrap().value(), 0.0);
    }

    #[test]
    fn samplers_are_reproducible() {
        let beta = BetaParams::new(2.0, 3.0).unwrap();
        let gga = GGaParams::new(2.2, 0.7).unwrap();
        let mut r1 = RngState::new(99);
        let mut r2 = RngState::new(99);
        for _ in 0..10 {
            assert_eq!(sample_beta(beta, &mut r1), sample_beta(beta, &mut r2));
            assert_eq!(sample_gga(gga, &mut r1), sample_gga(gga, &mut r2));
        }
    }

    #[test]
    fn beta_sample_mean() {
        // E[Beta(2,3)] = 0.4, sd = 0.2.
        let p = BetaParams::new(2.0, 3.0).unwrap();
        let mut rng = RngState::new(4);
        let n = 20_000;
        let mean = (0..n).map(|_| sample_beta(p, &mut rng)).sum::<f64>() / n as f64;
        let stderr = 0.2 / (n as f64).sqrt();
        assert!((mean - 0.4).abs() < 4.0 * stderr, "mean {mean}");
    }

    #[test]
    fn gga_sample_moments() {
        // E[Z^s] = Γ((c+s)/p) / Γ(c/p).
        for &(c, p) in &[(1.0, 1.0), (2.0, 2.0), (3.0, 1.5), (0.9, 0.8)] {
            let g = GGaParams::new(c, p).unwrap();
            let mut rng = RngState::new(11);
            let n = 50_000usize;
            let (mut s1, mut s2, mut s4) = (0.0, 0.0, 0.0);
            for _ in 0..n {
                let z = sample_gga(g, &mut rng);
                s1 += z;
                s2 += z * z;
                s4 += z * z * z * z;
            }
            let lg = |x: f64| crate::specfun::log_gamma_raw(x);
            for (k, sum, sumsq) in [(1.0, s1, s2), (2.0, s2, s4)] {
                let want = ((lg((c + k) / p) - lg(c / p)) as f64).exp();
                let mean = sum / n as f64;
                let var = (sumsq / n as f64 - mean * mean).max(0.0);
                let stderr = (var / n as f64).sqrt();
                assert!(
                    (mean - want).abs() < 4.0 * stderr + 1e-12,
                    "c={c} p={p} moment {k}: mean {mean}, want {want}, stderr {stderr}"
                );
            }
        }
    }

    #[test]
    fn uniform_beta_passes_ks() {
        // Beta(1,1) draws against the uniform CDF, level 0.001.
        let p = BetaParams::new(1.0, 1.0).unwrap();
        let mut rng = RngState::new(21);
        let n = 10_000usize;
        let mut xs: Vec<f64> = (0..n).map(|_| sample_beta(p, &mut rng)).collect();
        xs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d = d.max((x - lo).abs()).max((hi - x).abs());
        }
        // c(0.001) = sqrt(-ln(0.0005)/2)
        let crit = (-(0.0005f64.ln()) / 2.0).sqrt() / (n as f64).sqrt();
        assert!(d < crit, "KS statistic {d} >= {crit}");
    }

    #[test]
    fn overshoot_memoryless_case() {
        let r1 = GammaParams::new(1.0, ).unwrap();
        let mut rng = RngState::new(5);
        let n = 50_000;
        let mean = (0..n)
            .map(|_| sample_gamma_overshoot(r1, 3.0, &mut rng).unwrap())
            .sum::<f64>()
            / n as f64;
        let stderr = 1.0 / (n as f64).sqrt();
        assert!((mean - 1.0).abs() < 4.0 * stderr, "mean {mean}");
    }

    #[test]
    fn overshoot_mean_r2_w10() {
        // First moment of the overshoot density for r=2, w=10 is
        // (w+2)/(w+1) = 12/11.
        let p = GammaParams::new(2.0).unwrap();
        let mut rng = RngState::new(6);
        let n = 50_000usize;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let u = sample_gamma_overshoot(p, 10.0, &mut rng).unwrap();
            s1 += u;
            s2 += u * u;
        }
        let mean = s1 / n as f64;
        let var = s2 / n as f64 - mean * mean;
        let stderr = (var / n as f64).sqrt();
        assert!(
            (mean - 12.0 / 11.0).abs() < 4.0 * stderr,
            "mean {mean}, stderr {stderr}"
        );
    }

    #[test]
    fn overshoot_rejects_invalid_envelope() {
        let p = GammaParams::new(5.0).unwrap();
        let mut rng = RngState::new(1);
        assert!(sample_gamma_overshoot(p, 3.0, &mut rng).is_err());
        assert!(sample_gamma_overshoot(p, 0.0, &mut rng).is_err());
        assert!(sample_gamma_overshoot(p, 4.5, &mut rng).is_ok());
    }

    #[test]
    fn param_validation() {
        assert!(BetaParams::new(0.0, 1.0).is_err());
        assert!(BetaParams::new(1.0, f64::NAN).is_err());
        assert!(GGaParams::new(-1.0, 2.0).is_err());
        assert!(GGaParams::new(2.0, 0.0).is_err());
        assert!(GammaParams::new(f64::INFINITY).is_err());
    }
}
