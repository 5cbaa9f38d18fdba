//! Equation of state closures rho(p, S).
//!
//! Two built-ins:
//! - `Exponential`: rho = exp((p - S)/kappa), positive with positive rho_p for
//!   every (p, S).
//! - `Polytropic`: rho = (p e^{-S/c_v})^{1/gamma}, defined for p > 0 only.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EquationOfState<T> {
    Exponential { kappa: T },
    Polytropic { gamma: T, c_v: T },
}

impl<T: Scalar> EquationOfState<T> {
    pub fn exponential(kappa: f64) -> Self {
        EquationOfState::Exponential {
            kappa: T::from_f64(kappa),
        }
    }

    pub fn polytropic(gamma: f64, c_v: f64) -> Self {
        EquationOfState::Polytropic {
            gamma: T::from_f64(gamma),
            c_v: T::from_f64(c_v),
        }
    }

    /// rho and rho_p at (p, S).
    pub fn density(&self, p: T, s: T) -> Result<(T, T)> {
        match *self {
            EquationOfState::Exponential { kappa } => {
                let rho = ((p - s) / kappa).exp();
                Ok((rho, rho / kappa))
            }
            EquationOfState::Polytropic { gamma, c_v } => {
                if !(p.value() > 0.0) {
                    return Err(Error::EosDomain(format!(
                        "polytropic law requires p > 0, got p = {:.6e}",
                        p.value()
                    )));
                }
                let rho = (p * (-s / c_v).exp()).powf(T::one() / gamma);
                let rho_p = rho / (gamma * p);
                Ok((rho, rho_p))
            }
        }
    }

    /// Same closure over a different scalar type.
    pub fn cast<U: Scalar>(&self) -> EquationOfState<U> {
        match *self {
            EquationOfState::Exponential { kappa } => EquationOfState::Exponential {
                kappa: U::from_f64(kappa.value()),
            },
            EquationOfState::Polytropic { gamma, c_v } => EquationOfState::Polytropic {
                gamma: U::from_f64(gamma.value()),
                c_v: U::from_f64(c_v.value()),
            },
        }
    }
}
