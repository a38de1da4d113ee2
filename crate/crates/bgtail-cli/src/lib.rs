//! Command-line front end: single tail evaluations, threshold sweeps to
//! CSV, approximation-chain verification, and Monte Carlo runs.
//!
//! The command logic lives here (writing to any `io::Write`) so it can
//! be tested without spawning the binary; `main` only parses arguments
//! and maps errors to exit codes (2 for bad flags or parameters, 3 for
//! numeric non-convergence, 1 when a chain bound is violated).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bgtail_core::asymptotics::{chain_evaluate, log_tail_asymptotic};
use bgtail_core::distributions::{BetaParams, GGaParams, GammaParams};
use bgtail_core::exact_tail::{log_tail_exact, TailQuery};
use bgtail_core::montecarlo::{mc_conditional, mc_naive, McConfig, McEstimate};
use bgtail_core::quadrature::QuadConfig;
use bgtail_core::Error as CoreError;

/// Frozen CSV header for `sweep`; kept byte-identical so sweeps from
/// different implementations are drop-in comparable.
pub const SWEEP_HEADER: &str =
    "a,b,c,p,t,w,log_exact,log_claim1,log_ratio,mc_log_mean,mc_stderr_rel,n,seed";

/// Linear-scale values are printed only above this log threshold
/// (`ln 1e-300`); below it the linear column reads 0 and a
/// `*_log_only = 1` line is added.
const LOG_LINEAR_FLOOR: f64 = -690.775527898213705205;

#[derive(Parser, Debug)]
#[command(name = "bgtail", version, about = "Tail probabilities of beta times generalized gamma products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate P(B·Z > t) at a single threshold.
    Tail(TailArgs),
    /// Sweep a threshold grid and emit one CSV row per point.
    Sweep(SweepArgs),
    /// Evaluate the approximation chain T1..T4 on a w-grid and check
    /// every gap against its closed-form bound.
    VerifyChain(ChainArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Adaptive quadrature of the defining integral.
    Exact,
    /// Closed-form large-t asymptotic.
    Claim1,
    /// Naive Monte Carlo.
    McNaive,
    /// Conditional (overshoot) rare-event Monte Carlo.
    McCond,
    /// Everything above.
    All,
}

#[derive(Args, Debug)]
pub struct TailArgs {
    /// First beta shape parameter.
    #[arg(long)]
    pub a: f64,
    /// Second beta shape parameter.
    #[arg(long)]
    pub b: f64,
    /// Generalized gamma power-law parameter.
    #[arg(long)]
    pub c: f64,
    /// Generalized gamma stretch exponent.
    #[arg(long)]
    pub p: f64,
    /// Threshold on the original scale (t >= 0).
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Target relative error of the quadrature.
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub p: f64,
    /// Threshold grid: comma list `t1,t2,...` or geometric `lo:hi:count`.
    #[arg(long)]
    pub t_grid: String,
    /// Which columns to fill beyond exact/claim1: `mc-naive` or
    /// `mc-cond`/`all` select the Monte Carlo columns.
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Stretch exponent p.
    #[arg(long)]
    pub p: f64,
    /// Generalized gamma power-law parameter; the gamma shape is r = c/p.
    #[arg(long)]
    pub c: Option<f64>,
    /// Gamma shape r directly (default 1, the memoryless case).
    #[arg(long)]
    pub r: Option<f64>,
    /// Transformed-threshold grid: comma list or geometric `lo:hi:count`.
    #[arg(long)]
    pub w_grid: String,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
}

/// CLI failure, tagged with the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or parameter values (exit 2).
    Usage(String),
    /// Numeric non-convergence (exit 3).
    Numeric(String),
    /// I/O failure (exit 1).
    Io(String),
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Domain(_) => CliError::Usage(err.to_string()),
            CoreError::Convergence(_) => CliError::Numeric(err.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }
}

/// Renders a float with 12 significant digits (the frozen sweep format).
pub fn fmt_g12(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// Parses a grid spec: either a comma list of values or a geometric
/// progression `lo:hi:count` (count points from lo to hi inclusive).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |detail: &str| CliError::Usage(format!("malformed grid '{spec}': {detail}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("geometric spec needs lo:hi:count"));
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = parts[1].parse().map_err(|_| bad("hi is not a number"))?;
        let count: usize = parts[2].parse().map_err(|_| bad("count is not an integer"))?;
        if !(lo > 0.0) || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(bad("need 0 < lo < hi"));
        }
        if count < 2 {
            return Err(bad("count must be at least 2"));
        }
        let ratio = hi / lo;
        return Ok((0..count)
            .map(|i| lo * ratio.powf(i as f64 / (count - 1) as f64))
            .collect());
    }
    let mut grid = Vec::new();
    for item in spec.split(',') {
        let v: f64 = item
            .trim()
            .parse()
            .map_err(|_| bad("entry is not a number"))?;
        if !v.is_finite() || v < 0.0 {
            return Err(bad("entries must be finite and nonnegative"));
        }
        grid.push(v);
    }
    if grid.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(grid)
}

fn quad_config(rel_tol: f64) -> Result<QuadConfig, CliError> {
    QuadConfig::with_rel_tol(rel_tol).map_err(CliError::from)
}

fn build_query(a: f64, b: f64, c: f64, p: f64, t: f64) -> Result<TailQuery, CliError> {
    let beta = BetaParams::new(a, b)?;
    let gga = GGaParams::new(c, p)?;
    Ok(TailQuery::new(beta, gga, t)?)
}

fn write_pair(out: &mut String, log_name: &str, lin_name: &str, log_value: f64) {
    let _ = writeln!(out, "{log_name} = {}", fmt_g12(log_value));
    if log_value >= LOG_LINEAR_FLOOR {
        let _ = writeln!(out, "{lin_name} = {}", fmt_g12(log_value.exp()));
    } else {
        let _ = writeln!(out, "{lin_name} = 0");
        let _ = writeln!(out, "{lin_name}_log_only = 1");
    }
}

fn write_scalar(out: &mut String, name: &str, log_value: f64) {
    write_pair(out, &format!("log_{name}"), name, log_value);
}

fn write_mc(out: &mut String, name: &str, est: &McEstimate) {
    write_pair(
        out,
        &format!("{name}_log_mean"),
        &format!("{name}_mean"),
        est.log_mean.value(),
    );
    let _ = writeln!(out, "{name}_stderr_rel = {}", fmt_g12(est.stderr_rel));
    let _ = writeln!(out, "{name}_n = {}", est.n);
    let _ = writeln!(out, "{name}_seed = {}", est.seed);
    let _ = writeln!(out, "{name}_undersampled = {}", u8::from(est.undersampled));
}

/// `tail`: one threshold, any combination of methods.
pub fn run_tail(args: &TailArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = quad_config(args.rel_tol)?;
    let query = build_query(args.a, args.b, args.c, args.p, args.t)?;
    let method = args.method;
    let mut text = String::new();

    let wants = |m: Method| method == m || method == Method::All;

    let log_exact = if wants(Method::Exact) {
        let v = log_tail_exact(&query, &cfg)?.value();
        write_scalar(&mut text, "exact", v);
        Some(v)
    } else {
        None
    };
    let log_claim1 = if wants(Method::Claim1) {
        let v = log_tail_asymptotic(&query)?.value();
        write_scalar(&mut text, "claim1", v);
        Some(v)
    } else {
        None
    };
    if let (Some(e), Some(c)) = (log_exact, log_claim1) {
        let _ = writeln!(text, "log_ratio = {}", fmt_g12(e - c));
    }
    let mc_cfg = McConfig::new(args.n, args.seed)?;
    if wants(Method::McNaive) {
        let est = mc_naive(&query, &mc_cfg)?;
        write_mc(&mut text, "mc_naive", &est);
    }
    if wants(Method::McCond) {
        let est = mc_conditional(&query, &mc_cfg)?;
        write_mc(&mut text, "mc_cond", &est);
    }

    out.write_all(text.as_bytes())?;
    Ok(())
}

/// `sweep`: renders the full CSV for a threshold grid.
///
/// `log_exact` and `log_claim1` are always computed; the Monte Carlo
/// columns are filled by the estimator the method selects (`mc-naive`,
/// or the conditional one for `mc-cond`/`all`).
pub fn render_sweep(args: &SweepArgs) -> Result<String, CliError> {
    let cfg = quad_config(args.rel_tol)?;
    let grid = parse_grid(&args.t_grid)?;
    let mc_cfg = McConfig::new(args.n, args.seed)?;

    let mut csv = String::new();
    let _ = writeln!(csv, "{SWEEP_HEADER}");
    for &t in &grid {
        let query = build_query(args.a, args.b, args.c, args.p, t)?;
        let log_exact = log_tail_exact(&query, &cfg)?.value();
        // The asymptotic and the conditional estimator are undefined at
        // t = 0; their columns stay empty there.
        let log_claim1 = if t > 0.0 {
            Some(log_tail_asymptotic(&query)?.value())
        } else {
            None
        };
        let mc = match args.method {
            Method::McNaive => Some(mc_naive(&query, &mc_cfg)?),
            Method::McCond | Method::All => {
                if t == 0.0 {
                    return Err(CliError::Usage(
                        "mc-cond requires every grid threshold to be positive".into(),
                    ));
                }
                Some(mc_conditional(&query, &mc_cfg)?)
            }
            Method::Exact | Method::Claim1 => None,
        };

        let ratio = log_claim1.map(|c| log_exact - c);
        let row = [
            fmt_g12(args.a),
            fmt_g12(args.b),
            fmt_g12(args.c),
            fmt_g12(args.p),
            fmt_g12(t),
            fmt_g12(query.w()),
            fmt_g12(log_exact),
            log_claim1.map(fmt_g12).unwrap_or_default(),
            ratio.map(fmt_g12).unwrap_or_default(),
            mc.map(|e| fmt_g12(e.log_mean.value())).unwrap_or_default(),
            mc.map(|e| fmt_g12(e.stderr_rel)).unwrap_or_default(),
            mc.map(|e| e.n.to_string()).unwrap_or_default(),
            mc.map(|e| e.seed.to_string()).unwrap_or_default(),
        ];
        let _ = writeln!(csv, "{}", row.join(","));
    }
    Ok(csv)
}

pub fn run_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let csv = render_sweep(args)?;
    match &args.out {
        Some(path) => fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

/// `verify-chain`: per-w chain quantities, measured gaps, bounds, and a
/// PASS/FAIL verdict per bound. Returns whether every bound held.
pub fn run_verify_chain(args: &ChainArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let cfg = quad_config(args.rel_tol)?;
    let beta = BetaParams::new(args.a, args.b)?;
    let r = match (args.c, args.r) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either --c or --r, not both".into()))
        }
        (Some(c), None) => {
            if !(args.p > 0.0) {
                return Err(CliError::Usage("p must be positive".into()));
            }
            c / args.p
        }
        (None, Some(r)) => r,
        (None, None) => 1.0,
    };
    let shape = GammaParams::new(r)?;
    let grid = parse_grid(&args.w_grid)?;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "a = {} b = {} p = {} r = {}",
        args.a, args.b, args.p, r
    );
    let _ = writeln!(
        text,
        "w,log_t1,log_t2,log_t3,log_t4,gap_12,bound_12,ok_12,gap_23,bound_23,ok_23,gap_34,bound_34,ok_34"
    );
    let mut all_pass = true;
    for &w in &grid {
        let rep = chain_evaluate(beta, shape, args.p, w, &cfg)?;
        let checks = [
            (rep.gap_12(), rep.bound_12),
            (rep.gap_23(), rep.bound_23),
            (rep.gap_34(), rep.bound_34),
        ];
        let mut row = vec![
            fmt_g12(w),
            fmt_g12(rep.log_t1.value()),
            fmt_g12(rep.log_t2.value()),
            fmt_g12(rep.log_t3.value()),
            fmt_g12(rep.log_t4.value()),
        ];
        for (gap, bound) in checks {
            let ok = gap <= bound;
            all_pass &= ok;
            row.push(fmt_g12(gap));
            row.push(fmt_g12(bound));
            row.push(if ok { "PASS" } else { "FAIL" }.to_string());
        }
        let _ = writeln!(text, "{}", row.join(","));
    }
    let _ = writeln!(text, "overall: {}", if all_pass { "PASS" } else { "FAIL" });
    out.write_all(text.as_bytes())?;
    Ok(all_pass)
}

/// Dispatches a parsed command line; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Tail(args) => run_tail(args, out).map(|()| 0),
        Command::Sweep(args) => run_sweep(args, out).map(|()| 0),
        Command::VerifyChain(args) => {
            run_verify_chain(args, out).map(|all_pass| if all_pass { 0 } else { 1 })
        }
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    }
}
