//! Forward and inverse problems for the subdiffusion equation
//! `D_t^rho u + A^sigma u = 0` on `R^N`, driven by a Fourier symbol `A(xi)`.
//!
//! The forward solution is the Fourier multiplier
//! `u(x, t) = ∫ E_rho(-A^sigma(xi) t^rho) phi_hat(xi) e^{i x xi} dxi`,
//! so everything rests on an accurate Mittag-Leffler evaluator ([`mlfunc`]).
//! The inverse routines recover `rho`, and then `sigma`, from a single Fourier
//! coefficient of the solution observed at one time.

pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod inverse;
pub mod mlfunc;
pub mod oracle;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod symbol;
pub mod verify;

pub use error::{Error, RecoveryStep, Result};
pub use mlfunc::{eval_ml, eval_ml_neg, eval_ml_regime, MLParams, MLResult, Regime};
