//! Independent reference computations used by the tests and the verification
//! harness:
//!
//! * [`ml_series_highprec`]: the Mittag-Leffler series summed in double-double;
//! * [`ml_integral_oracle`]: the real-line integral representation of `E_rho(-x)`,
//!   which stays accurate where the series loses everything to cancellation;
//! * [`l1_solve_mode`]: the L1 time stepper for `D_t^rho w + lambda w = 0`;
//! * [`verify_lemma4_constants`]: quadrature of the moment integrals bounding the
//!   `rho`-derivatives of the Mittag-Leffler function.

pub mod dd;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mlfunc::validate_order;
use crate::quadrature::{adaptive, adaptive_pieces, Integral};
use crate::special::gamma;
use dd::{ln_gamma_dd, DD, DD_EPS};

/// Relative error the series oracle must certify before returning.
pub const SERIES_ORACLE_BUDGET: f64 = 1e-15;

const SERIES_ORACLE_MAX_TERMS: usize = 200_000;

/// Series value with its estimated relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub rel_error: f64,
    pub terms: usize,
}

/// `E_rho(z)` for `z <= 0` summed in double-double arithmetic.
///
/// Terms are added until they fall below `10^-digits` (at most 32 digits are
/// meaningful). Fails with `PrecisionLoss` when the alternating series cancels
/// more than the extended precision can absorb.
pub fn ml_series_highprec(rho: f64, z: f64, digits: u32) -> Result<f64> {
    ml_series_highprec_detailed(rho, z, digits).map(|s| s.value)
}

pub fn ml_series_highprec_detailed(rho: f64, z: f64, digits: u32) -> Result<SeriesValue> {
    validate_order(rho)?;
    if !(z <= 0.0) || !z.is_finite() {
        return Err(Error::InvalidParameter(format!("series oracle needs z <= 0, got {z}")));
    }
    if z < -30.0 {
        return Err(Error::InvalidParameter(format!("series oracle needs |z| <= 30, got {z}")));
    }
    if digits == 0 || digits > 50 {
        return Err(Error::InvalidParameter(format!("digits = {digits} not in 1..=50")));
    }
    if z == 0.0 {
        return Ok(SeriesValue { value: 1.0, rel_error: 0.0, terms: 1 });
    }
    let cutoff = 10f64.powi(-(digits.min(32) as i32));
    let x = -z;
    if rho == 1.0 {
        // e^{-x} = 1 / sum x^k / k!, with no cancellation
        let (sum, terms) = positive_exp_series(x, cutoff);
        let value = (DD::ONE / sum).to_f64();
        return Ok(SeriesValue { value, rel_error: 4.0 * DD_EPS * terms as f64, terms });
    }
    let ln_x = DD::new(x).ln();
    let mut sum = DD::ONE;
    let mut abs_sum = 1.0;
    let mut k = 1usize;
    loop {
        if k > SERIES_ORACLE_MAX_TERMS {
            return Err(Error::NoConvergence(format!(
                "series oracle exceeded {SERIES_ORACLE_MAX_TERMS} terms at z = {z}"
            )));
        }
        let kf = k as f64;
        let lg = ln_gamma_dd(DD::new(rho) * DD::new(kf) + DD::ONE);
        let mag = (ln_x * DD::new(kf) - lg).exp();
        let term = if k % 2 == 1 { -mag } else { mag };
        sum = sum + term;
        abs_sum += mag.hi;
        // 0 < E_rho(-x) <= 1, so the rounding floor is already known to be too high
        if 8.0 * DD_EPS * abs_sum > SERIES_ORACLE_BUDGET {
            return Err(Error::PrecisionLoss {
                estimate: 8.0 * DD_EPS * abs_sum,
                budget: SERIES_ORACLE_BUDGET,
            });
        }
        // past the peak the terms decrease monotonically
        let peak_passed = kf * rho > 1.0 && mag.hi < abs_sum * 1e-3;
        if peak_passed && mag.hi < cutoff * sum.hi.abs() {
            break;
        }
        k += 1;
    }
    let value = sum.to_f64();
    let rel_error = (8.0 * DD_EPS * abs_sum + cutoff * value.abs()) / value.abs();
    if !(rel_error <= SERIES_ORACLE_BUDGET) {
        return Err(Error::PrecisionLoss { estimate: rel_error, budget: SERIES_ORACLE_BUDGET });
    }
    Ok(SeriesValue { value, rel_error, terms: k + 1 })
}

fn positive_exp_series(x: f64, cutoff: f64) -> (DD, usize) {
    let mut sum = DD::ONE;
    let mut term = DD::ONE;
    let mut k = 1;
    loop {
        term = term * DD::new(x) / DD::new(k as f64);
        sum = sum + term;
        if k as f64 > x && term.hi < cutoff * sum.hi {
            return (sum, k + 1);
        }
        k += 1;
    }
}

/// `E_rho(-x)` from the integral
/// `(sin(pi rho) / (pi rho)) ∫_0^∞ exp(-(u x)^{1/rho}) / (u^2 + 2u cos(pi rho) + 1) du`,
/// valid for `0 < rho < 1`, `x > 0`. The integrand is positive, so there is no
/// cancellation at any `x`.
pub fn ml_integral_oracle(rho: f64, x: f64) -> Result<Integral> {
    validate_order(rho)?;
    if rho == 1.0 {
        return Err(Error::InvalidParameter("integral oracle needs rho < 1".into()));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("integral oracle needs x > 0, got {x}")));
    }
    let c = (PI * rho).cos();
    let inv = 1.0 / rho;
    let near = |u: f64| (-(u * x).powf(inv)).exp() / (u * u + 2.0 * u * c + 1.0);
    // u = 1/v on the tail
    let far = |v: f64| {
        if v == 0.0 {
            0.0
        } else {
            (-(x / v).powf(inv)).exp() / (1.0 + 2.0 * v * c + v * v)
        }
    };
    let peak = (-c).max(0.0);
    let split = 2.0f64.max(2.0 / x).max(2.0 * peak);
    let mut breaks = vec![0.0, split];
    for b in [peak, 1.0 / x, 0.5 / x, 2.0 / x] {
        if b > 0.0 && b < split {
            breaks.push(b);
        }
    }
    if peak > 0.0 {
        // the denominator has a near-double root at u = -cos(pi rho) when rho -> 1
        let width = (PI * rho).sin();
        for b in [peak - 4.0 * width, peak + 4.0 * width] {
            if b > 0.0 && b < split {
                breaks.push(b);
            }
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let tol = 1e-13;
    let head = adaptive_pieces(near, &breaks, 1e-300, tol)?;
    let tail = adaptive(far, 0.0, 1.0 / split, 1e-300, tol, 2000)?;
    let scale = (PI * rho).sin() / (PI * rho);
    Ok(Integral {
        value: scale * (head.value + tail.value),
        error: scale * (head.error + tail.error),
        evaluations: head.evaluations + tail.evaluations,
    })
}

/// Settings of the L1 time stepper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1SchemeConfig {
    pub steps: usize,
    pub t_final: f64,
    pub rho: f64,
    /// Subtract `lambda w0 / 2` from the first step. The solution behaves like
    /// `1 - c t^rho` near the origin; without this the error at fixed `t`
    /// decays only like `h`.
    pub first_step_correction: bool,
}

impl L1SchemeConfig {
    pub fn new(rho: f64, t_final: f64, steps: usize) -> Self {
        L1SchemeConfig { steps, t_final, rho, first_step_correction: true }
    }

    pub fn step(&self) -> f64 {
        self.t_final / self.steps as f64
    }

    pub fn validate(&self) -> Result<()> {
        validate_order(self.rho)?;
        if self.steps < 10 {
            return Err(Error::InvalidParameter(format!("L1 scheme needs M >= 10, got {}", self.steps)));
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidParameter("t_final must be positive".into()));
        }
        Ok(())
    }
}

/// L1 discretization of `D_t^rho w + lambda w = 0`, `w(0) = w0`, on a uniform mesh.
/// Returns `w` at `t_n = n h`, `n = 0..=M`.
pub fn l1_solve_mode(lambda: f64, w0: Complex64, cfg: &L1SchemeConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be nonnegative")));
    }
    let m = cfg.steps;
    if lambda == 0.0 {
        return Ok(vec![w0; m + 1]);
    }
    let rho = cfg.rho;
    let h = cfg.step();
    let c = h.powf(-rho) / gamma(2.0 - rho);
    let b: Vec<f64> = (0..m)
        .map(|j| {
            let j = j as f64;
            (j + 1.0).powf(1.0 - rho) - j.powf(1.0 - rho)
        })
        .collect();
    // the equation is real and linear: step the unit solution, then scale
    let mut w = vec![0.0; m + 1];
    let mut inc = vec![0.0; m + 1];
    w[0] = 1.0;
    for n in 1..=m {
        let history: f64 = (1..n).map(|j| b[j] * inc[n - j]).sum();
        let mut rhs = c * w[n - 1] - c * history;
        if n == 1 && cfg.first_step_correction {
            rhs -= 0.5 * lambda * w[0];
        }
        w[n] = rhs / (c + lambda);
        inc[n] = w[n] - w[n - 1];
    }
    Ok(w.into_iter().map(|v| w0 * v).collect())
}

/// Errors of the L1 final value against a reference over a sequence of step counts.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Convergence {
    pub steps: Vec<usize>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `-log err` against `log M`.
    pub order: f64,
}

pub fn l1_convergence(
    rho: f64,
    lambda: f64,
    t_final: f64,
    steps: &[usize],
    reference: f64,
) -> Result<L1Convergence> {
    let mut errors = Vec::with_capacity(steps.len());
    for &m in steps {
        let cfg = L1SchemeConfig::new(rho, t_final, m);
        let w = l1_solve_mode(lambda, Complex64::new(1.0, 0.0), &cfg)?;
        errors.push((w[m].re - reference).abs());
    }
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .zip(&errors)
        .map(|(&m, &e)| ((m as f64).ln(), e.max(f64::MIN_POSITIVE).ln()))
        .collect();
    Ok(L1Convergence { steps: steps.to_vec(), errors, order: -slope(&pts) })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Constants `C_0, C_1, C_2` as stated alongside the moment bound.
pub const LEMMA4_STATED: [f64; 3] = [3.0, 14.72, 94.2];

/// `sup_{0 < rho <= 1} I_m(rho) = ∫_1^∞ e^{-r/2} r^{m+1} dr`, in closed form.
pub fn lemma4_supremum(m: u32) -> f64 {
    // ∫_1^∞ e^{-r/2} r^n dr = e^{-1/2} sum_{k=0}^{n} n!/(n-k)! 2^{k+1}
    let n = m + 1;
    let mut falling = 1.0;
    let mut total = 0.0;
    for k in 0..=n {
        if k > 0 {
            falling *= (n - k + 1) as f64;
        }
        total += falling * 2f64.powi(k as i32 + 1);
    }
    (-0.5f64).exp() * total
}

/// `I_m(rho) = ∫_1^∞ e^{-r/2} r^{m-1+2rho} dr`.
pub fn lemma4_integral(rho: f64, m: u32) -> Result<Integral> {
    validate_order(rho)?;
    // truncate where e^{-R/2} R^{m+1} < 1e-14
    let mut r_max: f64 = 10.0;
    while (-0.5 * r_max).exp() * r_max.powi(m as i32 + 1) >= 1e-14 {
        r_max += 1.0;
    }
    let p = m as f64 - 1.0 + 2.0 * rho;
    let mid = (2.0 * p).max(2.0).min(r_max - 1.0);
    adaptive_pieces(|r| (-0.5 * r).exp() * r.powf(p), &[1.0, mid, r_max], 1e-13, 1e-12)
}

/// Largest `I_m(rho)` over the grid, with the order at which it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma4Max {
    pub m: u32,
    pub max: f64,
    pub argmax: f64,
}

pub fn verify_lemma4_constants(rho_grid: &[f64], m: u32) -> Result<Lemma4Max> {
    if m > 2 {
        return Err(Error::InvalidParameter(format!("m = {m} not in {{0, 1, 2}}")));
    }
    if rho_grid.is_empty() {
        return Err(Error::InvalidParameter("empty rho grid".into()));
    }
    let mut best = Lemma4Max { m, max: f64::NEG_INFINITY, argmax: f64::NAN };
    for &rho in rho_grid {
        let v = lemma4_integral(rho, m)?.value;
        if v > best.max {
            best = Lemma4Max { m, max: v, argmax: rho };
        }
    }
    Ok(best)
}
