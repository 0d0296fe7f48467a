//! The one-parameter Mittag-Leffler function `E_rho(z) = sum z^k / Gamma(rho k + 1)`
//! for `0 < rho <= 1`, with the argument on (or near) the negative real axis.
//!
//! Three evaluation routes are available and cross-check each other:
//!
//! * the power series, used for small `|z|`;
//! * the algebraic asymptotic expansion
//!   `E_rho(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(1 - rho k)`, truncated where
//!   its remainder bound is smallest;
//! * quadrature along the Hankel path (two rays at angle `±beta` joined by the
//!   unit arc), which is valid for every `x > 0`.
//!
//! [`eval_ml`] picks the series below `crossover` and the asymptotic expansion
//! above it. When the chosen route cannot certify `series_tol` (small orders
//! near the crossover, orders close to one) it falls back to the contour.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::special::{ln_gamma, rgamma, sinpi};

const EPS: f64 = f64::EPSILON;

/// Largest order for which the inverse searches still treat `rho` as fractional.
pub const RHO_SEARCH_MAX: f64 = 1.0 - 1e-6;

/// Evaluation route that produced an [`MLResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Series,
    Asymptotic,
    Hankel,
    Exponential,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Series => "series",
            Regime::Asymptotic => "asymptotic",
            Regime::Hankel => "hankel",
            Regime::Exponential => "exponential",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Regime::Series),
            "asymptotic" => Ok(Regime::Asymptotic),
            "hankel" => Ok(Regime::Hankel),
            "exponential" => Ok(Regime::Exponential),
            other => Err(Error::Parse(format!("unknown regime '{other}'"))),
        }
    }
}

/// Inputs for one evaluation of `E_rho(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub rho: f64,
    pub z: f64,
    /// Relative tolerance a route must certify before it is accepted.
    pub series_tol: f64,
    pub max_terms: usize,
    /// `|z|` below which the series is tried first.
    pub crossover: f64,
}

impl MLParams {
    pub fn new(rho: f64, z: f64) -> Self {
        MLParams { rho, z, series_tol: 1e-13, max_terms: 4000, crossover: 5.0 }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.series_tol = tol;
        self
    }

    pub fn with_crossover(mut self, crossover: f64) -> Self {
        self.crossover = crossover;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_order(self.rho)?;
        if !self.z.is_finite() {
            return Err(Error::InvalidParameter(format!("z = {} is not finite", self.z)));
        }
        if !(self.series_tol > 0.0) {
            return Err(Error::InvalidParameter("series_tol must be positive".into()));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidParameter("max_terms must be at least 1".into()));
        }
        if !(self.crossover > 0.0) {
            return Err(Error::InvalidParameter("crossover must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn validate_order(rho: f64) -> Result<()> {
    if rho > 0.0 && rho <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder(rho))
    }
}

/// Value of `E_rho(z)` with the route used and an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLResult {
    pub value: f64,
    pub regime: Regime,
    /// Absolute error estimate (truncation plus rounding, or quadrature).
    pub err_estimate: f64,
}

impl MLResult {
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.err_estimate / self.value.abs()
        }
    }
}

/// The Hankel path: rays `arg zeta = ±beta`, `|zeta| >= radius`, joined by the arc `|zeta| = radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelContour {
    pub beta: f64,
    pub radius: f64,
    /// Truncation length of the rays, in units of `|zeta|`.
    pub ray_cutoff: f64,
    pub n_arc: usize,
    pub n_ray: usize,
}

const PANEL_NODES: usize = 16;
const CHECK_NODES: usize = 12;
const RAY_PANEL_WIDTH: f64 = 2.5;

impl HankelContour {
    /// Contour with `beta = 3 pi rho / 4` and rays long enough that the
    /// truncation bound `e^{-R^{1/rho}/2} R^{1/rho+1}` is below `tol`.
    pub fn for_order(rho: f64, tol: f64) -> Self {
        let beta = 0.75 * PI * rho;
        // work in s = R^{1/rho}; the bound reads e^{-s/2} s^{1+rho}
        let target = (tol * 1e-2).max(1e-300);
        let mut s: f64 = 2.0;
        while (-0.5 * s).exp() * s.powf(1.0 + rho) > target {
            s *= 1.1;
        }
        let panels = ((s - 1.0) / RAY_PANEL_WIDTH).ceil().max(1.0) as usize;
        HankelContour {
            beta,
            radius: 1.0,
            ray_cutoff: s.powf(rho),
            n_arc: 2 * PANEL_NODES,
            n_ray: panels * PANEL_NODES,
        }
    }

    pub fn validate(&self, rho: f64) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < PI) {
            return Err(Error::InvalidParameter(format!("contour angle {} not in (0, pi)", self.beta)));
        }
        if self.radius != 1.0 {
            return Err(Error::InvalidParameter("contour radius must be 1".into()));
        }
        if !(self.ray_cutoff > self.radius) {
            return Err(Error::InvalidParameter("ray cutoff must exceed the radius".into()));
        }
        if self.n_arc < 2 || self.n_ray < 2 {
            return Err(Error::InvalidParameter("contour needs at least two nodes per piece".into()));
        }
        if (self.beta / rho).cos() >= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "exp(zeta^(1/rho)) does not decay on rays at beta = {} for rho = {rho}",
                self.beta
            )));
        }
        Ok(())
    }

    /// Upper bound on the neglected ray tails, `e^{-c R^{1/rho}} R^{1/rho+1}` with `c <= 1/2`.
    pub fn tail_bound(&self, rho: f64) -> f64 {
        let decay = (-(self.beta / rho).cos()).min(0.5);
        let s = self.ray_cutoff.powf(1.0 / rho);
        (-decay * s).exp() * self.ray_cutoff.powf(1.0 / rho + 1.0)
    }
}

/// `f1 + f2` split of `E_rho(-x)` on the Hankel path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelParts {
    /// `1 / (x Gamma(1 - rho))`.
    pub f1: f64,
    /// The contour term `-(1 / (2 pi i rho x)) ∫ e^{zeta^{1/rho}} zeta / (zeta + x) dzeta`.
    pub f2: f64,
    pub f2_err: f64,
}

/// Evaluate `E_rho(z)`.
pub fn eval_ml(params: &MLParams) -> Result<MLResult> {
    params.validate()?;
    let MLParams { rho, z, series_tol, max_terms, crossover } = *params;
    if rho == 1.0 {
        let v = z.exp();
        return Ok(MLResult { value: v, regime: Regime::Exponential, err_estimate: EPS * v });
    }
    if z == 0.0 {
        return Ok(MLResult { value: 1.0, regime: Regime::Series, err_estimate: 0.0 });
    }
    if z > 0.0 {
        return series(rho, z, series_tol, max_terms);
    }
    let x = -z;
    let accept = |r: &MLResult| r.relative_error() <= series_tol;
    if x < crossover {
        if let Ok(r) = series(rho, z, series_tol, max_terms) {
            if accept(&r) {
                return Ok(r);
            }
        }
    }
    let asym = asymptotic(rho, x);
    if accept(&asym) {
        return Ok(asym);
    }
    let contour = HankelContour::for_order(rho, series_tol);
    hankel_direct(rho, x, &contour)
}

/// Evaluate `E_rho(z)` by a prescribed route, without fallback.
pub fn eval_ml_regime(params: &MLParams, regime: Regime) -> Result<MLResult> {
    params.validate()?;
    let MLParams { rho, z, series_tol, max_terms, .. } = *params;
    match regime {
        Regime::Exponential => {
            if rho != 1.0 {
                return Err(Error::InvalidParameter("exponential regime requires rho = 1".into()));
            }
            eval_ml(params)
        }
        Regime::Series => series(rho, z, series_tol, max_terms),
        Regime::Asymptotic => {
            if z >= 0.0 || rho == 1.0 {
                return Err(Error::InvalidParameter(
                    "asymptotic regime needs z < 0 and rho < 1".into(),
                ));
            }
            Ok(asymptotic(rho, -z))
        }
        Regime::Hankel => {
            if z > 0.0 {
                return Err(Error::InvalidParameter("hankel regime needs z <= 0".into()));
            }
            if z == 0.0 {
                return Ok(MLResult { value: 1.0, regime: Regime::Hankel, err_estimate: 0.0 });
            }
            let contour = HankelContour::for_order(rho, series_tol);
            hankel_direct(rho, -z, &contour)
        }
    }
}

/// `e_lambda(rho) = E_rho(-lambda t^rho)`.
pub fn eval_ml_neg(rho: f64, lambda: f64, t: f64) -> Result<MLResult> {
    validate_order(rho)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be positive")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    eval_ml(&MLParams::new(rho, -lambda * t.powf(rho)))
}

/// Hankel-path evaluation returning `f1 + f2` for `x = lambda t^rho`.
pub fn eval_hankel(params: &MLParams, contour: &HankelContour, lambda: f64, t: f64) -> Result<MLResult> {
    params.validate()?;
    let parts = hankel_parts(params.rho, lambda * t.powf(params.rho), contour, params.series_tol)?;
    let value = parts.f1 + parts.f2;
    let err = parts.f2_err + EPS * (parts.f1.abs() + parts.f2.abs());
    Ok(MLResult { value, regime: Regime::Hankel, err_estimate: err })
}

/// The `f1`, `f2` split at `x = lambda t^rho > 0`.
pub fn hankel_parts(rho: f64, x: f64, contour: &HankelContour, tol: f64) -> Result<HankelParts> {
    validate_order(rho)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("x = {x} must be positive")));
    }
    contour.validate(rho)?;
    let tail = contour.tail_bound(rho);
    if tail > tol {
        return Err(Error::ContourError { estimate: tail, tol });
    }
    let f1 = rgamma(1.0 - rho) / x;
    let q = contour_integral(rho, x, contour, |zeta, ez| ez * zeta / (zeta + x));
    let f2 = -q.value / x;
    let f2_err = (q.err + tail) / x;
    Ok(HankelParts { f1, f2, f2_err })
}

/// Central difference of `rho -> E_rho(-lambda t^rho)`.
pub fn ml_drho(rho: f64, lambda: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step h = {h} must be positive")));
    }
    if rho + h >= 1.0 || rho - h <= 0.0 {
        return Err(Error::StepTooLarge { lo: rho - h, hi: rho + h });
    }
    let up = eval_ml_neg(rho + h, lambda, t)?.value;
    let down = eval_ml_neg(rho - h, lambda, t)?.value;
    Ok((up - down) / (2.0 * h))
}

/// Central differences at `h` and `h/2` plus their Richardson combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeEstimate {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
}

pub fn ml_drho_richardson(rho: f64, lambda: f64, t: f64, h: f64) -> Result<DerivativeEstimate> {
    let coarse = ml_drho(rho, lambda, t, h)?;
    let fine = ml_drho(rho, lambda, t, 0.5 * h)?;
    Ok(DerivativeEstimate { coarse, fine, extrapolated: (4.0 * fine - coarse) / 3.0 })
}

fn series_term(rho: f64, z: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let arg = rho * k as f64 + 1.0;
    let log_mag = k as f64 * z.abs().ln();
    if arg < 170.0 && log_mag < 700.0 && k < i32::MAX as usize {
        z.powi(k as i32) * rgamma(arg)
    } else {
        let sign = if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        sign * (log_mag - ln_gamma(arg)).exp()
    }
}

fn series(rho: f64, z: f64, tol: f64, max_terms: usize) -> Result<MLResult> {
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 0..max_terms {
        let t = series_term(rho, z, k);
        sum += t;
        abs_sum += t.abs();
        if !abs_sum.is_finite() {
            break;
        }
        let small = t.abs() <= 0.1 * tol * sum.abs() || t == 0.0 && k > 0 && prev == 0.0;
        if k > 0 && small && t.abs() <= prev {
            let err = 2.0 * t.abs() + 4.0 * EPS * abs_sum;
            return Ok(MLResult { value: sum, regime: Regime::Series, err_estimate: err });
        }
        prev = t.abs();
    }
    Err(Error::NonConvergent { terms: max_terms, z: z.abs() })
}

/// Remainder bound after `k_max` terms, from deforming the path onto rays at
/// angle `frac * pi * rho` through the origin.
fn asymptotic_bound(rho: f64, x: f64, k_max: usize, frac: f64) -> f64 {
    let decay = -(frac * PI).cos();
    let gap = PI * (1.0 - frac * rho);
    let dist = if gap < 0.5 * PI { gap.sin() } else { 1.0 };
    let a = rho * (k_max as f64 + 1.0);
    let log_b = ln_gamma(a) - a * decay.ln() - (k_max as f64 + 1.0) * x.ln();
    log_b.exp() / (PI * dist)
}

fn asymptotic(rho: f64, x: f64) -> MLResult {
    const FRACTIONS: [f64; 4] = [1.0, 0.9, 0.75, 0.6];
    const K_CAP: usize = 600;
    let mut best_k = 1;
    let mut best_bound = f64::INFINITY;
    for k in 1..=K_CAP {
        let b = FRACTIONS
            .iter()
            .map(|&c| asymptotic_bound(rho, x, k, c))
            .fold(f64::INFINITY, f64::min);
        if b < best_bound {
            best_bound = b;
            best_k = k;
        } else if b > 1e6 * best_bound {
            break;
        }
    }
    let lx = x.ln();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for k in 1..=best_k {
        let a = rho * k as f64;
        // 1/Gamma(1 - a) = Gamma(a) sin(pi a) / pi
        let s = sinpi(a);
        if s == 0.0 {
            continue;
        }
        let mag = (ln_gamma(a) - k as f64 * lx).exp() * s.abs() / PI;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 } * s.signum();
        sum += sign * mag;
        abs_sum += mag;
    }
    MLResult { value: sum, regime: Regime::Asymptotic, err_estimate: best_bound + 4.0 * EPS * abs_sum }
}

struct ContourSum {
    value: f64,
    err: f64,
}

/// `(1 / (2 pi i rho)) ∫ g(zeta) dzeta` over the contour for integrands with
/// conjugate symmetry. `g` receives `zeta` and `exp(zeta^{1/rho})`.
fn contour_integral<G>(rho: f64, x: f64, contour: &HankelContour, g: G) -> ContourSum
where
    G: Fn(Complex64, Complex64) -> Complex64,
{
    let _ = x;
    let fine = GaussLegendre::new(PANEL_NODES);
    let coarse = GaussLegendre::new(CHECK_NODES);
    let beta = contour.beta;

    // arc: zeta = e^{i rho phi}, phi in [0, beta/rho]; zeta^{1/rho} = e^{i phi}
    let arc = |phi: f64| {
        let zeta = Complex64::from_polar(1.0, rho * phi);
        let ez = Complex64::from_polar(1.0, phi).exp();
        (g(zeta, ez) * zeta).re
    };
    // ray: zeta = s^rho e^{i beta}; zeta^{1/rho} = s e^{i beta/rho}
    let dir = Complex64::from_polar(1.0, beta);
    let rot = Complex64::from_polar(1.0, beta / rho);
    let ray = |s: f64| {
        let zeta = dir * s.powf(rho);
        let ez = (rot * s).exp();
        (g(zeta, ez) * dir).im * s.powf(rho - 1.0)
    };

    let arc_panels = (contour.n_arc / PANEL_NODES).max(1);
    let ray_panels = (contour.n_ray / PANEL_NODES).max(1);
    let phi_end = beta / rho;
    let s_end = contour.ray_cutoff.powf(1.0 / rho);

    let mut total = 0.0;
    let mut check = 0.0;
    let mut magnitude = 0.0;
    let mut run = |a: f64, b: f64, panels: usize, f: &dyn Fn(f64) -> f64| {
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (t, w) in fine.on(lo, lo + h) {
                let v = f(t);
                total += w * v;
                magnitude += (w * v).abs();
            }
            check += coarse.integrate(lo, lo + h, f);
        }
    };
    run(0.0, phi_end, arc_panels, &arc);
    run(1.0, s_end, ray_panels, &ray);
    ContourSum {
        value: total / PI,
        err: ((total - check).abs() + 4.0 * EPS * magnitude) / PI,
    }
}

fn hankel_direct(rho: f64, x: f64, contour: &HankelContour) -> Result<MLResult> {
    contour.validate(rho)?;
    let q = contour_integral(rho, x, contour, |zeta, ez| ez / (zeta + x));
    let err = q.err + contour.tail_bound(rho) / x.max(1.0);
    Ok(MLResult { value: q.value, regime: Regime::Hankel, err_estimate: err })
}
