//! Homogeneous elliptic symbols `A(xi) = sum_{|alpha| = m} a_alpha xi^alpha`,
//! their fractional powers, and initial data with its Sobolev norms.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::grid::{transform_forward, GridSpec, SpectralField};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    /// `|alpha|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `xi^alpha`.
    pub fn monomial(&self, xi: &[f64]) -> f64 {
        self.0.iter().zip(xi).map(|(&a, &x)| x.powi(a as i32)).product()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticSymbol {
    dim: usize,
    order: u32,
    terms: BTreeMap<MultiIndex, f64>,
}

impl EllipticSymbol {
    /// Validates dimension, even order and homogeneity. Ellipticity itself is
    /// checked separately by [`check_ellipticity`].
    pub fn new(dim: usize, order: u32, terms: BTreeMap<MultiIndex, f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("symbol dimension must be at least 1".into()));
        }
        if order < 2 || order % 2 != 0 {
            return Err(Error::InvalidParameter(format!("symbol order {order} must be even and >= 2")));
        }
        if terms.is_empty() {
            return Err(Error::InvalidParameter("symbol has no terms".into()));
        }
        for (alpha, &c) in &terms {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: alpha.dim() });
            }
            if alpha.order() != order {
                return Err(Error::InvalidParameter(format!(
                    "multi-index {:?} has order {}, expected {order}",
                    alpha.0,
                    alpha.order()
                )));
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!("coefficient {c} is not finite")));
            }
        }
        Ok(EllipticSymbol { dim, order, terms })
    }

    /// `|xi|^2` in `dim` dimensions.
    pub fn laplacian(dim: usize) -> Self {
        let terms = (0..dim)
            .map(|j| {
                let mut a = vec![0; dim];
                a[j] = 2;
                (MultiIndex(a), 1.0)
            })
            .collect();
        EllipticSymbol { dim, order: 2, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.terms
    }

    /// Parses lines `alpha_1 ... alpha_N coefficient`; `#` starts a comment.
    /// The dimension is taken from the first line and the order from `|alpha|`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = BTreeMap::new();
        let mut dim = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 2 {
                return Err(Error::Parse(format!("line {}: expected indices and a coefficient", lineno + 1)));
            }
            let (idx, coef) = fields.split_at(fields.len() - 1);
            let alpha = idx
                .iter()
                .map(|s| s.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            let c: f64 = coef[0]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            match dim {
                None => dim = Some(alpha.len()),
                Some(d) if d != alpha.len() => {
                    return Err(Error::DimensionMismatch { expected: d, got: alpha.len() })
                }
                _ => {}
            }
            *terms.entry(MultiIndex(alpha)).or_insert(0.0) += c;
        }
        let dim = dim.ok_or_else(|| Error::Parse("symbol specification is empty".into()))?;
        let order = terms.keys().next().map(MultiIndex::order).unwrap_or(0);
        EllipticSymbol::new(dim, order, terms)
    }

    /// Like [`EllipticSymbol::parse`], additionally requiring a dimension and order.
    pub fn parse_expecting(text: &str, dim: usize, order: u32) -> Result<Self> {
        let s = EllipticSymbol::parse(text)?;
        if s.dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: s.dim });
        }
        if s.order != order {
            return Err(Error::InvalidParameter(format!("symbol order {} != expected {order}", s.order)));
        }
        Ok(s)
    }
}

impl fmt::Display for EllipticSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (alpha, c) in &self.terms {
            for a in &alpha.0 {
                write!(f, "{a} ")?;
            }
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for EllipticSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EllipticSymbol::parse(s)
    }
}

pub fn symbol_eval(sym: &EllipticSymbol, xi: &[f64]) -> Result<f64> {
    if xi.len() != sym.dim {
        return Err(Error::DimensionMismatch { expected: sym.dim, got: xi.len() });
    }
    Ok(sym.terms.iter().map(|(a, &c)| c * a.monomial(xi)).sum())
}

/// `A(xi)^sigma` for `sigma` in `(0, 1]`.
pub fn symbol_power(sym: &EllipticSymbol, sigma: f64, xi: &[f64]) -> Result<f64> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} must lie in (0, 1]")));
    }
    let a = symbol_eval(sym, xi)?;
    if a < 0.0 {
        return Err(Error::NotElliptic { min: a });
    }
    if sigma == 1.0 {
        Ok(a)
    } else {
        Ok(a.powf(sigma))
    }
}

/// Quasi-uniform points on the unit sphere in `R^dim`.
pub fn sphere_points(dim: usize, n: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..n)
                .map(|_| {
                    let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    v.into_iter().map(|x| x / norm).collect()
                })
                .collect()
        }
    }
}

/// Minimum of `A` over sampled unit directions. Positive minimum certifies
/// ellipticity up to the sampling resolution.
pub fn check_ellipticity(sym: &EllipticSymbol, n_samples: usize) -> Result<f64> {
    if n_samples < 100 {
        return Err(Error::InvalidParameter(format!("n_samples = {n_samples} must be >= 100")));
    }
    let mut min = f64::INFINITY;
    for p in sphere_points(sym.dim, n_samples) {
        min = min.min(symbol_eval(sym, &p)?);
    }
    if min <= 0.0 {
        return Err(Error::NotElliptic { min });
    }
    Ok(min)
}

/// Best constants `c1, c2` with `c1 (1+|xi|^2)^{tau m} <= 1 + A(xi)^{2 tau} <= c2 (1+|xi|^2)^{tau m}`
/// over the given frequencies.
pub fn symbol_equivalence_constants(sym: &EllipticSymbol, tau: f64, xis: &[Vec<f64>]) -> Result<(f64, f64)> {
    let m = sym.order as f64;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for xi in xis {
        let a = symbol_eval(sym, xi)?;
        if a < 0.0 {
            return Err(Error::NotElliptic { min: a });
        }
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let ratio = (1.0 + a.powf(2.0 * tau)) / (1.0 + r2).powf(tau * m);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialKind {
    /// `amplitude * exp(-|x - center|^2 / (2 width^2))`.
    Gaussian { center: Vec<f64>, width: f64, amplitude: f64 },
    /// Physical samples on the grid, row-major.
    GridSamples(Vec<Complex64>),
    /// Fourier coefficients on the lattice, FFT order.
    FourierCoeffs(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub kind: InitialKind,
    /// Sobolev smoothness exponent.
    pub tau: f64,
}

impl InitialData {
    pub fn gaussian(center: Vec<f64>, width: f64, amplitude: f64, tau: f64) -> Self {
        InitialData { kind: InitialKind::Gaussian { center, width, amplitude }, tau }
    }

    /// Unit-variance Gaussian centred at the origin.
    pub fn standard_gaussian(dim: usize) -> Self {
        InitialData::gaussian(vec![0.0; dim], 1.0, 1.0, dim as f64)
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        match &self.kind {
            InitialKind::Gaussian { center, width, amplitude } => {
                if center.len() != grid.dim {
                    return Err(Error::DimensionMismatch { expected: grid.dim, got: center.len() });
                }
                if !(*width > 0.0) || !amplitude.is_finite() {
                    return Err(Error::InvalidParameter("Gaussian width must be positive".into()));
                }
            }
            InitialKind::GridSamples(v) | InitialKind::FourierCoeffs(v) => {
                if v.len() != grid.len() {
                    return Err(Error::SizeMismatch { expected: grid.len(), got: v.len() });
                }
            }
        }
        Ok(())
    }

    /// Closed-form transform of a Gaussian at one frequency, or `None` for sampled data.
    pub fn gaussian_hat(&self, xi: &[f64]) -> Option<Complex64> {
        match &self.kind {
            InitialKind::Gaussian { center, width, amplitude } => {
                let n = xi.len() as f64;
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                let phase: f64 = center.iter().zip(xi).map(|(c, x)| c * x).sum();
                let mag = amplitude * (width * width / (2.0 * PI)).powf(0.5 * n)
                    * (-0.5 * width * width * r2).exp();
                Some(Complex64::from_polar(mag, -phase))
            }
            _ => None,
        }
    }

    /// Fourier coefficients on the lattice.
    pub fn spectral(&self, grid: &GridSpec) -> Result<SpectralField> {
        self.validate(grid)?;
        match &self.kind {
            InitialKind::Gaussian { .. } => {
                let coeffs = (0..grid.len())
                    .map(|i| self.gaussian_hat(&grid.frequency(i)).unwrap_or_default())
                    .collect();
                Ok(SpectralField { grid: grid.clone(), coeffs })
            }
            InitialKind::GridSamples(v) => transform_forward(v, grid),
            InitialKind::FourierCoeffs(v) => Ok(SpectralField { grid: grid.clone(), coeffs: v.clone() }),
        }
    }

    /// Physical samples on the grid.
    pub fn samples(&self, grid: &GridSpec) -> Result<Vec<Complex64>> {
        self.validate(grid)?;
        match &self.kind {
            InitialKind::Gaussian { center, width, amplitude } => Ok((0..grid.len())
                .map(|i| {
                    let r2: f64 = grid.point(i).iter().zip(center).map(|(x, c)| (x - c).powi(2)).sum();
                    Complex64::new(amplitude * (-r2 / (2.0 * width * width)).exp(), 0.0)
                })
                .collect()),
            InitialKind::GridSamples(v) => Ok(v.clone()),
            InitialKind::FourierCoeffs(_) => crate::grid::transform_inverse(&self.spectral(grid)?),
        }
    }
}

/// Relative size allowed for the Sobolev integrand on the lattice boundary.
pub const BOUNDARY_FRACTION: f64 = 1e-8;

/// `( (2 pi)^N ∫ (1 + |xi|^2)^a |phi_hat|^2 dxi )^{1/2}` on the lattice.
pub fn sobolev_norm(phi: &InitialData, a: f64, grid: &GridSpec) -> Result<f64> {
    let field = phi.spectral(grid)?;
    let n = grid.dim as i32;
    let cell = (2.0 * PI).powi(n) * grid.dxi().powi(n);
    let mut total = 0.0;
    let mut edge: f64 = 0.0;
    for (i, c) in field.coeffs.iter().enumerate() {
        let xi = grid.frequency(i);
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let v = (1.0 + r2).powf(a) * c.norm_sqr() * cell;
        total += v;
        if grid.on_frequency_boundary(i) {
            edge = edge.max(v);
        }
    }
    if total > 0.0 && edge > BOUNDARY_FRACTION * total {
        return Err(Error::GridTooCoarse { ratio: edge / total, limit: BOUNDARY_FRACTION });
    }
    Ok(total.sqrt())
}
