//! Cross-checks against independent oracles: a self-contained adaptive
//! Simpson integrator (sharing no code with the crate's quadrature) for
//! overshoot-law and conditional-tail integrals, and distributional
//! checks of the Monte Carlo estimators against closed forms.

use bgtail_core::distributions::{sample_gamma_overshoot, BetaParams, GGaParams, GammaParams};
use bgtail_core::exact_tail::{log_tail_exact, TailQuery};
use bgtail_core::montecarlo::{mc_conditional, mc_naive, McConfig};
use bgtail_core::quadrature::QuadConfig;
use bgtail_core::rng::RngState;
use bgtail_core::specfun::{log_gamma, log_reg_gamma_upper};

/// Plain adaptive Simpson on a finite interval; deliberately naive so
/// it is independent of the crate's Gauss-Kronrod machinery.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Unnormalized overshoot density (1 + u/w)^{r-1} e^{-u}.
fn overshoot_density(r: f64, w: f64) -> impl Fn(f64) -> f64 {
    move |u: f64| (1.0 + u / w).powf(r - 1.0) * (-u).exp()
}

#[test]
fn overshoot_density_normalization_matches_gamma_tail() {
    // ∫_0^∞ (1+u/w)^{r-1} e^{-u} du = Γ(r)·e^w·w^{1-r}·Q(r, w)
    //                               = P(W > w) / f_W(w).
    for &(r, w) in &[(0.5, 20.0), (1.0, 7.0), (2.0, 10.0), (3.5, 30.0), (6.0, 15.0)] {
        let integral = simpson(&overshoot_density(r, w), 0.0, 250.0, 1e-13);
        let log_want = log_reg_gamma_upper(r, w).unwrap().value()
            + log_gamma(r).unwrap().value()
            + w
            - (r - 1.0) * w.ln();
        let got = integral.ln();
        assert!(
            (got - log_want).abs() <= 1e-9 * log_want.abs().max(1.0),
            "r={r} w={w}: ln integral {got} vs {log_want}"
        );
    }
}

#[test]
fn overshoot_sampler_matches_quadrature_cdf() {
    // KS test at level 0.001 against the numerically integrated CDF,
    // for the fractional-shape case r = 0.5, w = 20.
    let (r, w) = (0.5, 20.0);
    let params = GammaParams::new(r).unwrap();
    let n = 10_000usize;
    let mut rng = RngState::new(314);
    let mut xs: Vec<f64> = (0..n)
        .map(|_| sample_gamma_overshoot(params, w, &mut rng).unwrap())
        .collect();
    xs.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let density = overshoot_density(r, w);
    let norm = simpson(&density, 0.0, 250.0, 1e-12);
    // Cumulative oracle CDF at each sorted sample.
    let mut d_stat: f64 = 0.0;
    let mut cum = 0.0;
    let mut prev = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        cum += simpson(&density, prev, x, 1e-12);
        prev = x;
        let cdf = cum / norm;
        d_stat = d_stat
            .max((cdf - i as f64 / n as f64).abs())
            .max(((i + 1) as f64 / n as f64 - cdf).abs());
    }
    // c(0.001)/sqrt(n) with c = sqrt(-ln(0.0005)/2)
    let crit = (-(0.0005f64.ln()) / 2.0).sqrt() / (n as f64).sqrt();
    assert!(d_stat < crit, "KS statistic {d_stat} >= critical {crit}");
}

#[test]
fn conditional_estimator_unbiased_over_seeds() {
    // 50 independent seeds at n = 1e4; the mean of the estimates must
    // sit within 4 pooled standard errors of the quadrature value.
    let query = TailQuery::new(
        BetaParams::new(1.0, 1.0).unwrap(),
        GGaParams::new(1.0, 1.0).unwrap(),
        2.0,
    )
    .unwrap();
    let exact = log_tail_exact(&query, &QuadConfig::default())
        .unwrap()
        .value()
        .exp();

    let seeds = 50u64;
    let mut sum = 0.0;
    let mut var_sum = 0.0;
    for seed in 0..seeds {
        let est = mc_conditional(&query, &McConfig::new(10_000, seed).unwrap()).unwrap();
        let p = est.log_mean.value().exp();
        sum += p;
        var_sum += (est.stderr_rel * p).powi(2);
    }
    let mean = sum / seeds as f64;
    let pooled_se = var_sum.sqrt() / seeds as f64;
    assert!(
        (mean - exact).abs() <= 4.0 * pooled_se,
        "mean {mean} vs exact {exact} (pooled se {pooled_se})"
    );
}

#[test]
fn estimators_agree_when_naive_is_viable() {
    // P(BZ > 2) ≈ 0.14: naive has plenty of hits, so the two unbiased
    // estimators must agree within joint error bars.
    let query = TailQuery::new(
        BetaParams::new(1.0, 1.0).unwrap(),
        GGaParams::new(2.0, 1.0).unwrap(),
        2.0,
    )
    .unwrap();
    let cfg = McConfig::new(20_000, 77).unwrap();
    let naive = mc_naive(&query, &cfg).unwrap();
    let cond = mc_conditional(&query, &cfg).unwrap();
    assert!(!naive.undersampled);
    let p1 = naive.log_mean.value().exp();
    let p2 = cond.log_mean.value().exp();
    let joint = ((naive.stderr_rel * p1).powi(2) + (cond.stderr_rel * p2).powi(2)).sqrt();
    assert!(
        (p1 - p2).abs() <= 4.0 * joint,
        "naive {p1} vs conditional {p2} (joint se {joint})"
    );
}

#[test]
fn conditional_estimator_variance_advantage() {
    // At w = 30 and n = 1e4 the conditional estimator resolves the tail
    // with tight relative error while the naive one sees nothing.
    let query = TailQuery::new(
        BetaParams::new(1.0, 1.0).unwrap(),
        GGaParams::new(2.0, 1.0).unwrap(),
        30.0,
    )
    .unwrap();
    let cfg = McConfig::new(10_000, 5).unwrap();
    let cond = mc_conditional(&query, &cfg).unwrap();
    assert!(!cond.undersampled);
    assert!(cond.stderr_rel <= 0.1, "stderr_rel {}", cond.stderr_rel);
    let naive = mc_naive(&query, &cfg).unwrap();
    assert!(naive.undersampled);
}

#[test]
fn exact_tail_oracle_equivalence_grid() {
    // Beta(a,b)·Gamma(a+b) =d Gamma(a) across a parameter grid.
    let cfg = QuadConfig::default();
    for &a in &[1.0, 2.0, 0.5, 3.7] {
        for &b in &[1.0, 2.5] {
            for &t in &[0.5, 1.0, 5.0, 10.0, 30.0] {
                let query = TailQuery::new(
                    BetaParams::new(a, b).unwrap(),
                    GGaParams::new(a + b, 1.0).unwrap(),
                    t,
                )
                .unwrap();
                let got = log_tail_exact(&query, &cfg).unwrap().value();
                let want = log_reg_gamma_upper(a, t).unwrap().value();
                assert!(
                    (got - want).abs() <= 1e-8,
                    "a={a} b={b} t={t}: {got} vs {want}"
                );
            }
        }
    }
}
