//! The `subdiff` command line: `ml`, `forward`, `inverse` and `verify`.
//!
//! Exit codes: 0 success, 1 evaluation error, 2 usage error, 3 solvability refusal.
//! Every file-producing run writes `resolved.cfg` to its output directory; passing
//! it back through `--config` repeats the run.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{join_list, RunConfig};
use crate::error::Error;
use crate::grid::GridSpec;
use crate::inverse::{recover_rho, recover_rho_sigma, InverseObservation, RecoveryResult, RecoverySpec};
use crate::mlfunc::{eval_ml, eval_ml_regime, MLParams, Regime};
use crate::solver::{forward_solve_with, write_solution_csv, ForwardProblem, SolveOptions};
use crate::symbol::{symbol_eval, EllipticSymbol, InitialData};
use crate::verify::{all_pass, emit_report, run_checks, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVABILITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "subdiff", version, about = "Time-fractional subdiffusion: forward solves, inverse recovery, bound checks")]
pub struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate E_rho(z), or E_rho(-lambda t^rho).
    #[command(allow_negative_numbers = true)]
    Ml(MlArgs),
    /// Solve the forward problem on a periodic grid and write CSV slices.
    #[command(allow_negative_numbers = true)]
    Forward(ForwardArgs),
    /// Recover rho, or (rho, sigma), from Fourier-point observations.
    #[command(allow_negative_numbers = true)]
    Inverse(InverseArgs),
    /// Check the derivative estimates and constants numerically.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct MlArgs {
    #[arg(long)]
    pub rho: f64,
    #[arg(long, conflicts_with_all = ["lambda", "t"], required_unless_present_all = ["lambda", "t"])]
    pub z: Option<f64>,
    #[arg(long, requires = "t")]
    pub lambda: Option<f64>,
    #[arg(long, requires = "lambda")]
    pub t: Option<f64>,
    /// Force series, asymptotic, hankel or exponential.
    #[arg(long)]
    pub regime: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a configuration key, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ForwardArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Comma-separated evaluation times.
    #[arg(long)]
    pub times: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis (power of two).
    #[arg(long)]
    pub n: Option<usize>,
    /// Half width L of the box [-L, L]^N.
    #[arg(long)]
    pub half_extent: Option<f64>,
    /// Symbol file, lines `alpha_1 .. alpha_N coefficient` (default: Laplacian).
    #[arg(long)]
    pub symbol: Option<PathBuf>,
    /// Gaussian width of the initial data.
    #[arg(long)]
    pub width: Option<f64>,
    /// Treat an under-resolved initial spectrum as an error instead of a warning.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct InverseArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// `rho` or `rho-sigma`.
    #[arg(long)]
    pub mode: Option<String>,
    /// CSV lines `xi_1,..,xi_N,t,d`.
    #[arg(long)]
    pub observations: Option<PathBuf>,
    #[arg(long)]
    pub rho0: Option<f64>,
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long)]
    pub symbol: Option<PathBuf>,
    #[arg(long)]
    pub width: Option<f64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, conflicts_with = "release")]
    pub quick: bool,
    #[arg(long)]
    pub release: bool,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Run(e) if matches!(e.root(), Error::SolvabilityFailed { .. }) => EXIT_SOLVABILITY,
            CliError::Run(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(Error::Io(e))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, out, err)),
            Err(e) => Err(CliError::Usage(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<i32> {
    match cmd {
        Command::Ml(a) => cmd_ml(a, out),
        Command::Forward(a) => cmd_forward(a, out, err),
        Command::Inverse(a) => cmd_inverse(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
    }
}

pub fn cmd_ml(a: &MlArgs, out: &mut (dyn Write + Send)) -> CliResult<i32> {
    let z = match (a.z, a.lambda, a.t) {
        (Some(z), _, _) => z,
        (None, Some(l), Some(t)) => {
            if !(l >= 0.0 && t >= 0.0) {
                return Err(CliError::Usage("lambda and t must be nonnegative".into()));
            }
            -l * t.powf(a.rho)
        }
        _ => return Err(CliError::Usage("give --z or both --lambda and --t".into())),
    };
    let params = MLParams::new(a.rho, z);
    params.validate().map_err(usage)?;
    let r = match &a.regime {
        Some(s) => {
            let regime: Regime = s.parse().map_err(usage)?;
            eval_ml_regime(&params, regime)?
        }
        None => eval_ml(&params)?,
    };
    writeln!(out, "{},{},{:e}", r.value, r.regime, r.err_estimate)?;
    Ok(EXIT_OK)
}

fn load_config(run: &RunArgs, command: &str) -> CliResult<RunConfig> {
    let mut cfg = match &run.config {
        Some(p) => RunConfig::load(p).map_err(usage)?,
        None => RunConfig::new(),
    };
    for s in &run.set {
        cfg.apply(s).map_err(usage)?;
    }
    if let Some(p) = &run.out {
        cfg.set("output.dir", p.display());
    }
    cfg.default_to("output.dir", "subdiff-out");
    if let Some(c) = cfg.raw("command") {
        if c != command {
            return Err(CliError::Usage(format!("configuration is for `{c}`, not `{command}`")));
        }
    }
    cfg.set("command", command);
    Ok(cfg)
}

fn require<T: std::str::FromStr>(cfg: &RunConfig, key: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    cfg.require(key).map_err(usage)
}

fn output_dir(cfg: &RunConfig) -> CliResult<PathBuf> {
    let dir = PathBuf::from(cfg.raw("output.dir").unwrap_or("subdiff-out"));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Symbol terms travel inside the configuration as `;`-separated lines so that
/// `resolved.cfg` does not depend on the symbol file staying unchanged.
fn resolve_symbol(cfg: &mut RunConfig, file: Option<&Path>, dim: usize) -> CliResult<EllipticSymbol> {
    if let Some(p) = file {
        let text = fs::read_to_string(p)?;
        let sym = EllipticSymbol::parse(&text).map_err(usage)?;
        cfg.set("symbol.terms", encode_symbol(&sym));
    }
    let sym = match cfg.raw("symbol.terms") {
        Some(t) => EllipticSymbol::parse(&t.replace(';', "\n")).map_err(usage)?,
        None => EllipticSymbol::laplacian(dim),
    };
    cfg.set("symbol.terms", encode_symbol(&sym));
    Ok(sym)
}

fn encode_symbol(sym: &EllipticSymbol) -> String {
    sym.to_string().lines().collect::<Vec<_>>().join("; ")
}

fn resolve_gaussian(cfg: &mut RunConfig, width: Option<f64>, dim: usize) -> CliResult<InitialData> {
    if let Some(w) = width {
        cfg.set("init.width", w);
    }
    cfg.default_to("init.kind", "gaussian");
    if cfg.raw("init.kind") != Some("gaussian") {
        return Err(CliError::Usage("only init.kind = gaussian is supported from the command line".into()));
    }
    cfg.default_to("init.center", join_list(&vec![0.0; dim]));
    cfg.default_to("init.width", 1.0);
    cfg.default_to("init.amplitude", 1.0);
    cfg.default_to("init.tau", dim as f64);
    let center: Vec<f64> = cfg.list("init.center").map_err(usage)?.unwrap_or_default();
    if center.len() != dim {
        return Err(usage(Error::DimensionMismatch { expected: dim, got: center.len() }));
    }
    let width: f64 = require(cfg, "init.width")?;
    let amplitude: f64 = require(cfg, "init.amplitude")?;
    let tau: f64 = require(cfg, "init.tau")?;
    if !(width > 0.0) || !amplitude.is_finite() || !tau.is_finite() {
        return Err(CliError::Usage("init.width must be positive, amplitude and tau finite".into()));
    }
    Ok(InitialData::gaussian(center, width, amplitude, tau))
}

/// 64-bit FNV-1a, printed in hex; identifies a symbol in the metadata.
pub fn fnv1a(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

pub fn cmd_forward(a: &ForwardArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<i32> {
    let mut cfg = load_config(&a.run, "forward")?;
    if let Some(v) = a.rho {
        cfg.set("model.rho", v);
    }
    if let Some(v) = a.sigma {
        cfg.set("model.sigma", v);
    }
    if let Some(v) = &a.times {
        cfg.set("times", v);
    }
    if let Some(v) = a.dim {
        cfg.set("grid.dim", v);
    }
    if let Some(v) = a.n {
        cfg.set("grid.n", v);
    }
    if let Some(v) = a.half_extent {
        cfg.set("grid.half_extent", v);
    }
    if a.strict {
        cfg.set("solver.strict", true);
    }
    cfg.default_to("grid.dim", 1);
    cfg.default_to("grid.n", 256);
    cfg.default_to("grid.half_extent", 20.0);
    cfg.default_to("model.sigma", 1.0);
    cfg.default_to("solver.strict", false);

    let grid = GridSpec::new(require(&cfg, "grid.dim")?, require(&cfg, "grid.half_extent")?, require(&cfg, "grid.n")?)
        .map_err(usage)?;
    let sym = resolve_symbol(&mut cfg, a.symbol.as_deref(), grid.dim)?;
    if sym.dim() != grid.dim {
        return Err(usage(Error::DimensionMismatch { expected: grid.dim, got: sym.dim() }));
    }
    let phi = resolve_gaussian(&mut cfg, a.width, grid.dim)?;
    let times: Vec<f64> = cfg.list("times").map_err(usage)?.unwrap_or_default();
    let problem = ForwardProblem {
        sym,
        rho: require(&cfg, "model.rho")?,
        sigma: require(&cfg, "model.sigma")?,
        phi,
        times,
    };
    problem.validate().map_err(usage)?;
    let strict: bool = require(&cfg, "solver.strict")?;

    let dir = output_dir(&cfg)?;
    cfg.write(&dir.join("resolved.cfg"))?;
    let sol = forward_solve_with(&problem, &grid, SolveOptions { allow_coarse: !strict })?;

    let sym_hash = fnv1a(&problem.sym.to_string());
    let base_meta = vec![
        ("grid".to_string(), format!("dim={} n={} L={}", grid.dim, grid.points_per_axis, grid.half_extent)),
        ("symbol_hash".to_string(), sym_hash.clone()),
        ("rho".to_string(), problem.rho.to_string()),
        ("sigma".to_string(), problem.sigma.to_string()),
    ];
    let mut meta = fs::File::create(dir.join("meta.txt")).map(BufWriter::new)?;
    writeln!(meta, "grid.dim = {}", grid.dim)?;
    writeln!(meta, "grid.n = {}", grid.points_per_axis)?;
    writeln!(meta, "grid.half_extent = {}", grid.half_extent)?;
    writeln!(meta, "symbol.hash = {sym_hash}")?;
    writeln!(meta, "symbol.terms = {}", encode_symbol(&problem.sym))?;
    writeln!(meta, "rho = {}", problem.rho)?;
    writeln!(meta, "sigma = {}", problem.sigma)?;
    for (i, (&t, u)) in sol.times.iter().zip(&sol.fields).enumerate() {
        let name = format!("solution_{i:03}.csv");
        let mut m = base_meta.clone();
        m.push(("t".to_string(), t.to_string()));
        let mut w = fs::File::create(dir.join(&name)).map(BufWriter::new)?;
        write_solution_csv(&mut w, &grid, t, u, &m)?;
        w.flush()?;
        let b = sol.boundary[i];
        writeln!(meta, "boundary_decay.{i:03} = t={t} shell_max={:e} sup={:e} flagged={}", b.max_modulus, b.sup, b.flagged)?;
        writeln!(out, "{name},t={t},shell_max={:e},sup={:e}", b.max_modulus, b.sup)?;
    }
    for w in &sol.warnings {
        writeln!(meta, "warning = {w}")?;
        writeln!(err, "warning: {w}")?;
    }
    meta.flush()?;
    Ok(EXIT_OK)
}

/// Reads `xi_1,..,xi_N,t,d` rows; blank lines and `#` comments are skipped.
pub fn read_observations(text: &str) -> crate::error::Result<Vec<InverseObservation>> {
    let mut obs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = match line.split(',').map(|s| s.trim().parse::<f64>()).collect() {
            Ok(v) => v,
            // a header row
            Err(_) if obs.is_empty() && lineno == 0 => continue,
            Err(e) => return Err(Error::Parse(format!("observation line {}: {e}", lineno + 1))),
        };
        if vals.len() < 3 {
            return Err(Error::Parse(format!("observation line {}: need xi_1..xi_N, t, d", lineno + 1)));
        }
        let n = vals.len();
        let o = InverseObservation::new(vals[..n - 2].to_vec(), vals[n - 2], vals[n - 1]);
        if let Some(first) = obs.first() {
            let f: &InverseObservation = first;
            if f.xi.len() != o.xi.len() {
                return Err(Error::DimensionMismatch { expected: f.xi.len(), got: o.xi.len() });
            }
        }
        obs.push(o);
    }
    Ok(obs)
}

fn phi_magnitude(phi: &InitialData, xi: &[f64]) -> f64 {
    phi.gaussian_hat(xi).map(|c| c.norm()).unwrap_or(f64::NAN)
}

pub fn cmd_inverse(a: &InverseArgs, out: &mut (dyn Write + Send)) -> CliResult<i32> {
    let mut cfg = load_config(&a.run, "inverse")?;
    if let Some(v) = &a.mode {
        cfg.set("inverse.mode", v);
    }
    if let Some(v) = &a.observations {
        cfg.set("inverse.observations", v.display());
    }
    if let Some(v) = a.rho0 {
        cfg.set("inverse.rho0", v);
    }
    if let Some(v) = a.sigma0 {
        cfg.set("inverse.sigma0", v);
    }
    cfg.default_to("inverse.mode", "rho");
    cfg.default_to("inverse.sigma0", 0.5);
    let defaults = RecoverySpec::new(0.5, 0.5);
    cfg.default_to("inverse.tol", defaults.tol);
    cfg.default_to("inverse.max_iter", defaults.max_iter);

    let mode = cfg.raw("inverse.mode").unwrap_or("rho").to_string();
    if mode != "rho" && mode != "rho-sigma" {
        return Err(CliError::Usage(format!("inverse.mode = {mode}: expected rho or rho-sigma")));
    }
    let path: String = require(&cfg, "inverse.observations")?;
    let text = fs::read_to_string(&path)?;
    let obs = read_observations(&text).map_err(usage)?;
    let want = if mode == "rho" { 1 } else { 2 };
    if obs.len() != want {
        return Err(CliError::Usage(format!("mode {mode} needs {want} observation row(s), found {}", obs.len())));
    }
    for o in &obs {
        o.validate().map_err(usage)?;
    }
    let dim = obs[0].xi.len();
    let sym = resolve_symbol(&mut cfg, a.symbol.as_deref(), dim)?;
    if sym.dim() != dim {
        return Err(usage(Error::DimensionMismatch { expected: dim, got: sym.dim() }));
    }
    let phi = resolve_gaussian(&mut cfg, a.width, dim)?;
    let mut spec = RecoverySpec::new(require(&cfg, "inverse.rho0")?, require(&cfg, "inverse.sigma0")?);
    spec.tol = require(&cfg, "inverse.tol")?;
    spec.max_iter = require(&cfg, "inverse.max_iter")?;
    spec.validate().map_err(usage)?;

    let dir = output_dir(&cfg)?;
    cfg.write(&dir.join("resolved.cfg"))?;
    let mags: Vec<f64> = obs.iter().map(|o| phi_magnitude(&phi, &o.xi)).collect();
    let result = if mode == "rho" {
        let lambda0 = symbol_eval(&sym, &obs[0].xi)?;
        recover_rho(&obs[0], mags[0], lambda0, &spec)
    } else {
        recover_rho_sigma(&sym, &obs[0], &obs[1], (mags[0], mags[1]), &spec)
    }?;
    let rows = recovery_rows(&result);
    let mut w = fs::File::create(dir.join("recovery.csv")).map(BufWriter::new)?;
    writeln!(w, "quantity,value")?;
    for (k, v) in &rows {
        writeln!(w, "{k},{v}")?;
        writeln!(out, "{k} = {v}")?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn recovery_rows(r: &RecoveryResult) -> Vec<(String, String)> {
    let mut rows = vec![("rho".to_string(), r.rho_star.to_string())];
    if let Some(s) = r.sigma_star {
        rows.push(("sigma".into(), s.to_string()));
    }
    rows.push(("residual".into(), format!("{:e}", r.residual)));
    rows.push(("iterations".into(), r.iterations.to_string()));
    let name = if r.sigma_star.is_some() { "Lambda1" } else { "T0" };
    rows.push((name.into(), r.threshold.to_string()));
    if r.sigma_star.is_some() {
        rows.push(("T0".into(), r.t0_threshold.to_string()));
    }
    for (i, c) in r.solvability.iter().enumerate() {
        let p = if i == 0 { "rho_step" } else { "sigma_step" };
        rows.push((format!("{p}.ratio"), c.ratio.to_string()));
        rows.push((format!("{p}.lower"), c.lower.to_string()));
        rows.push((format!("{p}.upper"), c.upper.to_string()));
        if c.lower_stated.is_finite() {
            rows.push((format!("{p}.lower_stated"), c.lower_stated.to_string()));
        }
        rows.push((format!("{p}.value_at_search_max"), c.value_at_search_max.to_string()));
    }
    rows
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<i32> {
    let mut cfg = load_config(&a.run, "verify")?;
    if a.quick {
        cfg.set("verify.mode", "quick");
    }
    if a.release {
        cfg.set("verify.mode", "release");
    }
    cfg.default_to("verify.mode", "quick");
    let mut vc = match cfg.raw("verify.mode") {
        Some("quick") => VerifyConfig::quick(),
        Some("release") => VerifyConfig::release(),
        Some(m) => return Err(CliError::Usage(format!("verify.mode = {m}: expected quick or release"))),
        None => unreachable!(),
    };
    cfg.default_to("verify.fd_h", vc.fd_h);
    cfg.default_to("verify.fd_tol", vc.fd_tol);
    vc.fd_h = require(&cfg, "verify.fd_h")?;
    vc.fd_tol = require(&cfg, "verify.fd_tol")?;
    if !(vc.fd_h > 0.0 && vc.fd_h < 1e-2) || !(vc.fd_tol > 0.0) {
        return Err(CliError::Usage("verify.fd_h must lie in (0, 0.01) and fd_tol be positive".into()));
    }

    let dir = output_dir(&cfg)?;
    cfg.write(&dir.join("resolved.cfg"))?;
    let checks = run_checks(&vc)?;
    let mut w = fs::File::create(dir.join("report.csv")).map(BufWriter::new)?;
    emit_report(&checks, &mut w)?;
    w.flush()?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.expected_failure && !c.pass()).collect();
    for c in &failed {
        writeln!(err, "FAIL {} (max_violation {:e})", c.label(), c.max_violation)?;
    }
    writeln!(out, "{} checks, {} failed, report at {}", checks.len(), failed.len(), dir.join("report.csv").display())?;
    Ok(if all_pass(&checks) { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run(std::iter::once("subdiff").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn ml_exponential() {
        let (code, out, _) = run_capture(&["ml", "--rho", "1", "--z", "-1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("0.36787944117"), "{out}");
        assert_eq!(out.trim().split(',').count(), 3);
    }

    #[test]
    fn ml_rejects_bad_order_as_usage() {
        let (code, _, err) = run_capture(&["ml", "--rho", "1.5", "--z", "-1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("(0, 1]"), "{err}");
        let (code, _, _) = run_capture(&["ml", "--rho", "0.5"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["ml", "--rho", "0.5", "--z", "-1", "--regime", "bogus"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn observations_parse() {
        let o = read_observations("xi_1,t,d\n1.0, 2.0, 0.3\n# c\n\n0.5,3,0.1\n").unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o[1].xi, vec![0.5]);
        assert_eq!(o[1].t, 3.0);
        assert!(read_observations("1,2\n").is_err());
        assert!(read_observations("1,2,3\n1,1,2,3\n").is_err());
    }

    #[test]
    fn exit_codes() {
        let sf = CliError::Run(Error::Step {
            step: crate::error::RecoveryStep::Power,
            source: Box::new(Error::SolvabilityFailed { ratio: 2.0, lower: 0.1, upper: 1.0 }),
        });
        assert_eq!(sf.exit_code(), EXIT_SOLVABILITY);
        assert_eq!(CliError::Run(Error::LambdaEqualsOne).exit_code(), EXIT_FAILURE);
        assert_eq!(CliError::Usage(String::new()).exit_code(), EXIT_USAGE);
    }

    #[test]
    fn fnv_known_value() {
        assert_eq!(fnv1a(""), "cbf29ce484222325");
        assert_eq!(fnv1a("a"), "af63dc4c8601ec8c");
    }
}
