//! Recovery of the order `rho`, and of the pair `(rho, sigma)`, from the
//! modulus of one Fourier coefficient observed at one time.
//!
//! The observed quantity is `d = |u_hat(xi, t)| = E_rho(-A^sigma(xi) t^rho) |phi_hat(xi)|`.
//! Past the time threshold `T0` the map `rho -> E_rho(-lambda t^rho)` is
//! strictly decreasing, and past the frequency threshold `Lambda1` the map
//! `sigma -> E_rho(-lambda^sigma t^rho)` is; both roots are found by bisection.

use crate::error::{Error, RecoveryStep, Result};
use crate::mlfunc::{eval_ml_neg, RHO_SEARCH_MAX};
use crate::special::gamma;
use crate::symbol::{symbol_eval, EllipticSymbol};

pub const B1: f64 = 43.0;
pub const B2: f64 = 4.6;
/// Above this value of `rho0 * lambda0` the time threshold may be taken as 2.
pub const T0_SHORTCUT_PRODUCT: f64 = 0.0075;
pub const T0_SHORTCUT: f64 = 2.0;
/// Upper end of the `sigma` search.
pub const SIGMA_SEARCH_MAX: f64 = 1.0 - 1e-6;

const UPPER_SLACK: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct InverseObservation {
    pub xi: Vec<f64>,
    pub t: f64,
    pub d: f64,
}

impl InverseObservation {
    pub fn new(xi: Vec<f64>, t: f64, d: f64) -> Self {
        InverseObservation { xi, t, d }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::InvalidParameter(format!("observation time {} must be positive", self.t)));
        }
        if !(self.d >= 0.0) || !self.d.is_finite() {
            return Err(Error::InvalidParameter(format!("observed modulus {} must be >= 0", self.d)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoverySpec {
    pub rho0: f64,
    pub sigma0: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub b1: f64,
    pub b2: f64,
}

impl RecoverySpec {
    pub fn new(rho0: f64, sigma0: f64) -> Self {
        RecoverySpec { rho0, sigma0, tol: 1e-10, max_iter: 200, b1: B1, b2: B2 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho0 > 0.0 && self.rho0 < 1.0) {
            return Err(Error::InvalidParameter(format!("rho0 = {} must lie in (0, 1)", self.rho0)));
        }
        if !(self.sigma0 > 0.0 && self.sigma0 < 1.0) {
            return Err(Error::InvalidParameter(format!("sigma0 = {} must lie in (0, 1)", self.sigma0)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Result of a solvability test: the ratio `d / |phi_hat|` against the interval
/// of values the forward map can produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolvabilityCheck {
    pub solvable: bool,
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    /// Lower endpoint written without the time dependence, `e^{-lambda0}`
    /// (rho problem only; NaN otherwise). Kept for comparison with `lower`.
    pub lower_stated: f64,
    /// `E_rho(-lambda t^rho)` at the top of the search range, `rho = 1 - 1e-6`.
    pub value_at_search_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub rho_star: f64,
    pub sigma_star: Option<f64>,
    /// `|E(...) |phi_hat| - d|` at the returned parameters of the last step.
    pub residual: f64,
    pub iterations: usize,
    /// `Lambda1` for the two-parameter problem, `T0` otherwise.
    pub threshold: f64,
    pub t0_threshold: f64,
    /// One check per recovery step.
    pub solvability: Vec<SolvabilityCheck>,
}

/// Observation-time threshold beyond which `rho -> E_rho(-lambda t^rho)` is decreasing.
pub fn compute_t0(lambda0: f64, rho0: f64, spec: &RecoverySpec) -> Result<f64> {
    if !(lambda0 > 0.0) || !lambda0.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda0 = {lambda0} must be positive")));
    }
    if !(rho0 > 0.0 && rho0 < 1.0) {
        return Err(Error::InvalidParameter(format!("rho0 = {rho0} must lie in (0, 1)")));
    }
    if rho0 * lambda0 > T0_SHORTCUT_PRODUCT {
        return Ok(T0_SHORTCUT);
    }
    let floor = spec.b1 / (spec.b2 * rho0);
    let step = |k: f64| floor.max((2.0 * spec.b2 * k / lambda0).ln() / rho0);
    let mut k = floor;
    for _ in 0..spec.max_iter {
        let next = step(k);
        if !next.is_finite() {
            break;
        }
        if (next - k).abs() <= 1e-14 * next {
            let t0 = (next * (1.0 + 1e-9)).exp();
            if !t0.is_finite() {
                return Err(Error::NoConvergence(format!("T0 = e^{next} overflows")));
            }
            return Ok(t0);
        }
        k = next;
    }
    Err(Error::NoConvergence(format!(
        "T0 fixed point did not settle in {} iterations (lambda0 = {lambda0}, rho0 = {rho0})",
        spec.max_iter
    )))
}

fn ml(rho: f64, lambda: f64, t: f64) -> Result<f64> {
    if rho == 1.0 {
        return Ok((-lambda * t).exp());
    }
    Ok(eval_ml_neg(rho, lambda, t)?.value)
}

fn check_magnitude(phi_hat_mag: f64) -> Result<()> {
    if !(phi_hat_mag > 0.0) || !phi_hat_mag.is_finite() {
        return Err(Error::InvalidParameter(format!("|phi_hat| = {phi_hat_mag} must be positive")));
    }
    Ok(())
}

/// Solvability of the order problem: `e^{-lambda0 t} < d/|phi_hat| <= E_{rho0}(-lambda0 t^{rho0})`.
pub fn check_solvability_rho(
    obs: &InverseObservation,
    phi_hat_mag: f64,
    lambda0: f64,
    spec: &RecoverySpec,
) -> Result<SolvabilityCheck> {
    spec.validate()?;
    obs.validate()?;
    check_magnitude(phi_hat_mag)?;
    let t0 = compute_t0(lambda0, spec.rho0, spec)?;
    if obs.t < t0 {
        return Err(Error::ObservationTimeTooEarly { t: obs.t, t0 });
    }
    let ratio = obs.d / phi_hat_mag;
    let upper = ml(spec.rho0, lambda0, obs.t)?;
    let lower = (-lambda0 * obs.t).exp();
    let solvable = ratio > lower && ratio <= upper * (1.0 + UPPER_SLACK);
    Ok(SolvabilityCheck {
        solvable,
        ratio,
        lower,
        upper,
        lower_stated: (-lambda0).exp(),
        value_at_search_max: ml(RHO_SEARCH_MAX, lambda0, obs.t)?,
    })
}

struct Root {
    x: f64,
    residual: f64,
    iterations: usize,
}

/// Bisection for a decreasing `g` with `g(lo) >= 0`. If `g(hi) > 0` the bracket
/// is extended to `edge`, where `g(edge) < 0` is known from the solvability check.
fn bisect_decreasing<G>(g: G, lo: f64, hi: f64, edge: f64, tol: f64, max_iter: usize) -> Result<Root>
where
    G: Fn(f64) -> Result<f64>,
{
    let g_lo = g(lo)?;
    if g_lo <= 0.0 {
        // root at the lower end, within the upper-endpoint slack
        return Ok(Root { x: lo, residual: g_lo.abs(), iterations: 0 });
    }
    let g_hi = g(hi)?;
    let (mut a, mut b) = if g_hi > 0.0 {
        let g_edge = g(edge)?;
        if g_edge > 0.0 {
            return Err(Error::BracketError { g_lo, g_hi: g_edge });
        }
        (hi, edge)
    } else {
        (lo, hi)
    };
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (a + b);
        let gm = g(mid)?;
        iterations += 1;
        if gm == 0.0 || b - a < tol {
            return Ok(Root { x: mid, residual: gm.abs(), iterations });
        }
        if iterations >= max_iter {
            return Err(Error::NoConvergence(format!("bisection stopped after {max_iter} iterations")));
        }
        if gm > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
}

/// Recover `rho` from `d0 = E_rho(-lambda0 t0^rho) |phi_hat(xi0)|`.
pub fn recover_rho(
    obs: &InverseObservation,
    phi_hat_mag: f64,
    lambda0: f64,
    spec: &RecoverySpec,
) -> Result<RecoveryResult> {
    let check = check_solvability_rho(obs, phi_hat_mag, lambda0, spec)?;
    if !check.solvable {
        return Err(Error::SolvabilityFailed { ratio: check.ratio, lower: check.lower, upper: check.upper });
    }
    let g = |rho: f64| Ok(ml(rho, lambda0, obs.t)? * phi_hat_mag - obs.d);
    let root = bisect_decreasing(g, spec.rho0, RHO_SEARCH_MAX, 1.0, spec.tol, spec.max_iter)?;
    let t0 = compute_t0(lambda0, spec.rho0, spec)?;
    Ok(RecoveryResult {
        rho_star: root.x,
        sigma_star: None,
        residual: root.residual,
        iterations: root.iterations,
        threshold: t0,
        t0_threshold: t0,
        solvability: vec![check],
    })
}

/// `Lambda1 = e^n`, `n = max(ln(5 Gamma(1 - rho*)) / sigma0, 0) + 1e-9`.
pub fn compute_lambda1(rho_star: f64, sigma0: f64, t0: f64) -> Result<f64> {
    if !(rho_star > 0.0 && rho_star < 1.0) {
        return Err(Error::InvalidParameter(format!("rho* = {rho_star} must lie in (0, 1)")));
    }
    if rho_star > 1.0 - 1e-12 {
        return Err(Error::OrderTooCloseToOne(rho_star));
    }
    if !(t0 > 1.0) {
        return Err(Error::InvalidParameter(format!("observation time {t0} must exceed 1")));
    }
    lambda1_from_gamma(gamma(1.0 - rho_star), sigma0)
}

/// `Lambda1` from a given value of `Gamma(1 - rho*)`.
pub fn lambda1_from_gamma(gamma_value: f64, sigma0: f64) -> Result<f64> {
    if !(sigma0 > 0.0 && sigma0 <= 1.0) {
        return Err(Error::InvalidParameter(format!("sigma0 = {sigma0} must lie in (0, 1]")));
    }
    if !(gamma_value > 0.0) || !gamma_value.is_finite() {
        return Err(Error::OrderTooCloseToOne(f64::NAN));
    }
    let n = ((5.0 * gamma_value).ln() / sigma0).max(0.0) + 1e-9;
    Ok(n.exp())
}

/// Solvability of the power problem:
/// `E_rho(-lambda1 t1^rho) < d1/|phi_hat| < E_rho(-lambda1^{sigma0} t1^rho)`.
pub fn check_solvability_sigma(
    obs1: &InverseObservation,
    phi_hat_mag1: f64,
    lambda1: f64,
    rho_star: f64,
    sigma0: f64,
) -> Result<SolvabilityCheck> {
    obs1.validate()?;
    check_magnitude(phi_hat_mag1)?;
    if lambda1 == 1.0 {
        return Err(Error::LambdaEqualsOne);
    }
    if !(obs1.t > 1.0) {
        return Err(Error::ObservationTimeTooEarly { t: obs1.t, t0: 1.0 });
    }
    let threshold = compute_lambda1(rho_star, sigma0, obs1.t)?;
    if lambda1 < threshold {
        return Err(Error::LambdaBelowThreshold { lambda: lambda1, threshold });
    }
    let ratio = obs1.d / phi_hat_mag1;
    let lower = ml(rho_star, lambda1, obs1.t)?;
    let upper = ml(rho_star, lambda1.powf(sigma0), obs1.t)?;
    Ok(SolvabilityCheck {
        solvable: ratio > lower && ratio < upper,
        ratio,
        lower,
        upper,
        lower_stated: f64::NAN,
        value_at_search_max: ml(rho_star, lambda1.powf(SIGMA_SEARCH_MAX), obs1.t)?,
    })
}

fn in_step<T>(step: RecoveryStep, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Step { step, source: Box::new(e) })
}

/// Two-step recovery: `rho` from the observation at `xi0` (where `A(xi0) = 1`,
/// so the data do not depend on `sigma`), then `sigma` from the one at `xi1`.
pub fn recover_rho_sigma(
    sym: &EllipticSymbol,
    obs0: &InverseObservation,
    obs1: &InverseObservation,
    phi_hats: (f64, f64),
    spec: &RecoverySpec,
) -> Result<RecoveryResult> {
    spec.validate()?;
    let a0 = symbol_eval(sym, &obs0.xi)?;
    if (a0 - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NormalizationError(a0));
    }
    let first = in_step(RecoveryStep::Order, recover_rho(obs0, phi_hats.0, 1.0, spec))?;
    let rho_star = first.rho_star;

    let second = in_step(RecoveryStep::Power, (|| {
        let lambda1 = symbol_eval(sym, &obs1.xi)?;
        let check = check_solvability_sigma(obs1, phi_hats.1, lambda1, rho_star, spec.sigma0)?;
        if !check.solvable {
            return Err(Error::SolvabilityFailed { ratio: check.ratio, lower: check.lower, upper: check.upper });
        }
        let threshold = compute_lambda1(rho_star, spec.sigma0, obs1.t)?;
        let g = |sigma: f64| Ok(ml(rho_star, lambda1.powf(sigma), obs1.t)? * phi_hats.1 - obs1.d);
        let root = bisect_decreasing(g, spec.sigma0, SIGMA_SEARCH_MAX, 1.0, spec.tol, spec.max_iter)?;
        Ok((root, check, threshold))
    })())?;
    let (root, check, threshold) = second;
    let mut solvability = first.solvability;
    solvability.push(check);
    Ok(RecoveryResult {
        rho_star,
        sigma_star: Some(root.x),
        residual: root.residual,
        iterations: first.iterations + root.iterations,
        threshold,
        t0_threshold: first.t0_threshold,
        solvability,
    })
}

/// Count of non-decreasing steps of `rho -> E_rho(-lambda t^rho)` over `n`
/// points of `[rho0, 1 - 1e-6]`, and the smallest value seen.
pub fn rho_monotonicity_scan(lambda: f64, rho0: f64, t: f64, n: usize) -> Result<(usize, f64)> {
    scan(n, rho0, RHO_SEARCH_MAX, |rho| ml(rho, lambda, t))
}

/// Same for `sigma -> E_rho(-lambda^sigma t^rho)` over `[sigma0, 1 - 1e-6]`.
pub fn sigma_monotonicity_scan(lambda: f64, rho: f64, sigma0: f64, t: f64, n: usize) -> Result<(usize, f64)> {
    scan(n, sigma0, SIGMA_SEARCH_MAX, |s| ml(rho, lambda.powf(s), t))
}

fn scan<F: Fn(f64) -> Result<f64>>(n: usize, lo: f64, hi: f64, f: F) -> Result<(usize, f64)> {
    let mut violations = 0;
    let mut min = f64::INFINITY;
    let mut prev = f64::INFINITY;
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let v = f(x)?;
        if v >= prev {
            violations += 1;
        }
        min = min.min(v);
        prev = v;
    }
    Ok((violations, min))
}
