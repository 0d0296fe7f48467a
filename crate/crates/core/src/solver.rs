//! Forward problem: `u(., t)` is the inverse transform of
//! `E_rho(-A^sigma(xi) t^rho) phi_hat(xi)` on the frequency lattice.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{physical_l2_norm_sq, transform_inverse, GridSpec, SpectralField};
use crate::mlfunc::{eval_ml_neg, validate_order};
use crate::symbol::{check_ellipticity, symbol_power, EllipticSymbol, InitialData};

/// Fraction of `max |phi_hat|` tolerated on the outermost lattice layer.
pub const SPECTRAL_BOUNDARY_LIMIT: f64 = 1e-8;

/// Relative size of `max |u|` on the outer physical shell that gets flagged.
pub const PHYSICAL_BOUNDARY_LIMIT: f64 = 1e-6;

const ELLIPTICITY_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardProblem {
    pub sym: EllipticSymbol,
    pub rho: f64,
    /// Power of the operator; `1` gives the plain equation.
    pub sigma: f64,
    pub phi: InitialData,
    pub times: Vec<f64>,
}

impl ForwardProblem {
    pub fn validate(&self) -> Result<()> {
        validate_order(self.rho)?;
        if !(self.sigma > 0.0 && self.sigma <= 1.0) {
            return Err(Error::InvalidParameter(format!("sigma = {} must lie in (0, 1]", self.sigma)));
        }
        if self.times.is_empty() {
            return Err(Error::InvalidParameter("no evaluation times".into()));
        }
        if let Some(t) = self.times.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
            return Err(Error::InvalidParameter(format!("time {t} must be positive")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    /// Downgrade `GridTooCoarse` to a warning.
    pub allow_coarse: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardSolution {
    pub grid: GridSpec,
    pub times: Vec<f64>,
    /// Physical samples, one array per time.
    pub fields: Vec<Vec<Complex64>>,
    pub warnings: Vec<String>,
    pub boundary: Vec<BoundaryReport>,
}

/// `E_rho(-lambda t^rho)` with `lambda = A^sigma(xi) >= 0`.
pub fn multiplier(rho: f64, lambda: f64, t: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(1.0);
    }
    Ok(eval_ml_neg(rho, lambda, t)?.value)
}

/// One Fourier mode at time `t`.
pub fn mode_evolution(
    sym: &EllipticSymbol,
    rho: f64,
    sigma: f64,
    xi: &[f64],
    t: f64,
    phi_hat: Complex64,
) -> Result<Complex64> {
    validate_order(rho)?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    let lambda = symbol_power(sym, sigma, xi)?;
    Ok(phi_hat * multiplier(rho, lambda, t)?)
}

/// Largest `|u|` on points with some `|x_j| >= 0.9 L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryReport {
    pub max_modulus: f64,
    pub sup: f64,
    pub flagged: bool,
}

pub fn boundary_decay_report(solution: &[Complex64], grid: &GridSpec) -> BoundaryReport {
    let mut max_modulus: f64 = 0.0;
    let mut sup: f64 = 0.0;
    for (i, u) in solution.iter().enumerate() {
        let m = u.norm();
        sup = sup.max(m);
        if grid.in_outer_shell(i) {
            max_modulus = max_modulus.max(m);
        }
    }
    BoundaryReport { max_modulus, sup, flagged: max_modulus > PHYSICAL_BOUNDARY_LIMIT * sup }
}

/// Ratio of `max |phi_hat|` on the outermost lattice layer to the overall maximum.
pub fn spectral_boundary_ratio(field: &SpectralField) -> f64 {
    let mut edge: f64 = 0.0;
    let mut max: f64 = 0.0;
    for (i, c) in field.coeffs.iter().enumerate() {
        let m = c.norm();
        max = max.max(m);
        if field.grid.on_frequency_boundary(i) {
            edge = edge.max(m);
        }
    }
    if max == 0.0 {
        0.0
    } else {
        edge / max
    }
}

/// Multipliers `E_rho(-A^sigma(xi) t^rho)` for every lattice frequency.
pub fn lattice_multipliers(problem: &ForwardProblem, grid: &GridSpec, t: f64) -> Result<Vec<f64>> {
    let lambdas = lattice_symbol_powers(problem, grid)?;
    lambdas
        .par_iter()
        .map(|&lambda| multiplier(problem.rho, lambda, t))
        .collect()
}

fn lattice_symbol_powers(problem: &ForwardProblem, grid: &GridSpec) -> Result<Vec<f64>> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| symbol_power(&problem.sym, problem.sigma, &grid.frequency(i)))
        .collect()
}

/// Solution samples at each requested time.
pub fn forward_solve(problem: &ForwardProblem, grid: &GridSpec) -> Result<Vec<Vec<Complex64>>> {
    Ok(forward_solve_with(problem, grid, SolveOptions::default())?.fields)
}

pub fn forward_solve_with(problem: &ForwardProblem, grid: &GridSpec, opts: SolveOptions) -> Result<ForwardSolution> {
    problem.validate()?;
    grid.validate()?;
    if problem.sym.dim() != grid.dim {
        return Err(Error::DimensionMismatch { expected: grid.dim, got: problem.sym.dim() });
    }
    check_ellipticity(&problem.sym, ELLIPTICITY_SAMPLES)?;
    let mut warnings = Vec::new();
    if problem.phi.tau <= grid.dim as f64 / 2.0 {
        warnings.push(format!(
            "tau = {} <= N/2 = {}: classical regularity of the series is not guaranteed",
            problem.phi.tau,
            grid.dim as f64 / 2.0
        ));
    }
    let phi_hat = problem.phi.spectral(grid)?;
    let ratio = spectral_boundary_ratio(&phi_hat);
    if ratio > SPECTRAL_BOUNDARY_LIMIT {
        if opts.allow_coarse {
            warnings.push(format!(
                "GridTooCoarse: |phi_hat| on the lattice boundary is {ratio:.3e} of its maximum"
            ));
        } else {
            return Err(Error::GridTooCoarse { ratio, limit: SPECTRAL_BOUNDARY_LIMIT });
        }
    }
    let phi_norm = phi_hat.l2_norm_sq();
    let lambdas = lattice_symbol_powers(problem, grid)?;
    let mut fields = Vec::with_capacity(problem.times.len());
    let mut boundary = Vec::with_capacity(problem.times.len());
    for &t in &problem.times {
        let mults: Vec<f64> = lambdas
            .par_iter()
            .map(|&lambda| multiplier(problem.rho, lambda, t))
            .collect::<Result<_>>()?;
        for (&m, &lambda) in mults.iter().zip(&lambdas) {
            let positive_ok = m > 0.0 || problem.rho == 1.0;
            if !((0.0..=1.0).contains(&m) && positive_ok) {
                return Err(Error::InvariantViolation(format!(
                    "multiplier {m} outside (0, 1] at A^sigma = {lambda}, t = {t}"
                )));
            }
        }
        let coeffs = phi_hat.coeffs.iter().zip(&mults).map(|(c, &m)| c * m).collect();
        let field = SpectralField { grid: grid.clone(), coeffs };
        if field.l2_norm_sq() > phi_norm * (1.0 + 1e-12) {
            return Err(Error::InvariantViolation(format!("L2 norm grew at t = {t}")));
        }
        let u = transform_inverse(&field)?;
        let report = boundary_decay_report(&u, grid);
        if report.flagged {
            warnings.push(format!(
                "t = {t}: |u| on the outer shell reaches {:.3e} (sup {:.3e}); domain may be too small",
                report.max_modulus, report.sup
            ));
        }
        boundary.push(report);
        fields.push(u);
    }
    Ok(ForwardSolution { grid: grid.clone(), times: problem.times.clone(), fields, warnings, boundary })
}

/// Relative gap `|E(t1 + t2) - E(t1) E(t2)| / E(t1 + t2)` for `E(t) = E_rho(-lambda t^rho)`.
/// Zero at `rho = 1`; positive otherwise, since the evolution has memory.
pub fn semigroup_gap(rho: f64, lambda: f64, t1: f64, t2: f64) -> Result<f64> {
    let whole = eval_ml_neg(rho, lambda, t1 + t2)?.value;
    let split = eval_ml_neg(rho, lambda, t1)?.value * eval_ml_neg(rho, lambda, t2)?.value;
    Ok((whole - split).abs() / whole)
}

/// Discrete `||u||_2^2` of a physical field.
pub fn l2_norm_sq(samples: &[Complex64], grid: &GridSpec) -> f64 {
    physical_l2_norm_sq(samples, grid)
}

/// Writes one time slice as CSV: `#` metadata lines, then
/// `time,x_1,..,x_N,re_u,im_u`.
pub fn write_solution_csv<W: Write>(
    mut w: W,
    grid: &GridSpec,
    t: f64,
    samples: &[Complex64],
    meta: &[(String, String)],
) -> Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k} = {v}")?;
    }
    let mut header = String::from("time");
    for j in 1..=grid.dim {
        header.push_str(&format!(",x_{j}"));
    }
    header.push_str(",re_u,im_u");
    writeln!(w, "{header}")?;
    for (i, u) in samples.iter().enumerate() {
        let mut line = format!("{t:.16e}");
        for x in grid.point(i) {
            line.push_str(&format!(",{x:.16e}"));
        }
        line.push_str(&format!(",{:.16e},{:.16e}", u.re, u.im));
        writeln!(w, "{line}")?;
    }
    Ok(())
}
