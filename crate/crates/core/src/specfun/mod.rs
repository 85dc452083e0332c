//! Real-argument special functions used by the q-Gaussian characteristic
//! function: Γ, Bessel J and K of fractional order, and ₀F₁.
//!
//! Every public function returns a [`SpecFunResult`] that pairs the value
//! with a status, so callers can tell a genuine zero from an underflow and
//! a domain violation from an overflow.
//!
//! Crossovers:
//!
//! | function | small argument              | large argument                         |
//! |----------|-----------------------------|----------------------------------------|
//! | Γ        | Lanczos (g = 7), exact ints | same, split power to avoid overflow    |
//! | J_ν      | power series                | Steed CF1/CF2 (Temme for x < 2)        |
//! | K_ν      | Temme series (x ≤ 2)        | Steed CF2, upward recurrence in ν      |
//! | ₀F₁      | power series                | Bessel-J identity, Debye for large b   |

mod bessel;
mod gamma;
mod hyp;

pub use bessel::{bessel_j, bessel_k, matern};
pub use gamma::{gamma_fn, ln_gamma};
pub use hyp::hyp0f1;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    UnderflowToZero,
    Overflow,
    DomainError,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub status: Status,
}

impl SpecFunResult {
    pub fn ok(value: f64) -> Self {
        debug_assert!(value.is_finite());
        Self { value, status: Status::Ok }
    }

    pub fn underflow() -> Self {
        Self { value: 0.0, status: Status::UnderflowToZero }
    }

    pub fn overflow(sign: f64) -> Self {
        Self { value: f64::INFINITY.copysign(sign), status: Status::Overflow }
    }

    pub fn domain() -> Self {
        Self { value: f64::NAN, status: Status::DomainError }
    }

    /// Builds a result from `sign · exp(ln_abs)`, classifying under/overflow.
    pub(crate) fn from_log(ln_abs: f64, sign: f64) -> Self {
        if ln_abs.is_nan() {
            Self::domain()
        } else if ln_abs > f64::MAX.ln() {
            Self::overflow(sign)
        } else if ln_abs < f64::MIN_POSITIVE.ln() {
            Self::underflow()
        } else {
            Self::ok(sign * ln_abs.exp())
        }
    }

    /// Value usable in further arithmetic: the number itself for `Ok` and
    /// underflow, `None` for overflow and domain errors.
    pub fn finite(self) -> Option<f64> {
        match self.status {
            Status::Ok | Status::UnderflowToZero => Some(self.value),
            _ => None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}
