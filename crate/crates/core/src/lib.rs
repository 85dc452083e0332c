//! Distribution of linear combinations of independent Tsallis q-Gaussian
//! random variables.
//!
//! The characteristic function of `Y = Σ c_k X_k` is available in closed form
//! (see [`qmodel`]); [`inversion`] turns it into a PDF, CDF and quantiles with
//! the Gil-Pelaez formulae, and [`mcm`] provides a Monte Carlo oracle built on
//! the exact stochastic representations of the q-Gaussian.

// Coefficient tables keep their published digits; `!(a < b)` guards also reject NaN.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
mod extrap;
pub mod inversion;
pub mod mcm;
pub mod qmodel;
mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use inversion::{Backend, DistResult, InversionOptions};
pub use mcm::{McmOptions, McmResult};
pub use qmodel::{CharFn, ClosureCf, LinearModel, QGaussianParams, Regime};
