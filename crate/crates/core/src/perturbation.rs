//! Expansion of the potential about the centre equilibrium.
//!
//! About `x_c = 2√μ/α` the cubic is exactly
//! `V(x) = −D + √μ (x − x_c)² + (α/3)(x − x_c)³`, a harmonic well of angular
//! frequency `ω = √(2√μ/m)` plus a cubic perturbation. Dropping the cubic term
//! gives the level estimate `Eₙ ≈ −D + ħω(n + ½)`.

use crate::classical::{depth, ModelParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicApprox {
    pub center: f64,
    pub offset: f64,
    pub omega: f64,
    pub quadratic_coeff: f64,
    pub cubic_coeff: f64,
}

impl HarmonicApprox {
    /// The expansion evaluated at `x`; equal to the potential up to rounding.
    pub fn eval(&self, x: f64) -> f64 {
        let y = x - self.center;
        self.offset + self.quadratic_coeff * y * y + self.cubic_coeff * y * y * y
    }
}

pub fn expand_about_centre(params: &ModelParams) -> Result<HarmonicApprox> {
    if params.mu() <= 0.0 {
        return Err(Error::config(
            "no centre equilibrium at mu = 0 (saddle-node bifurcation point)",
        ));
    }
    let root_mu = params.mu().sqrt();
    Ok(HarmonicApprox {
        center: params.centre_position(),
        offset: -depth(params),
        omega: (2.0 * root_mu / params.mass()).sqrt(),
        quadratic_coeff: root_mu,
        cubic_coeff: params.alpha() / 3.0,
    })
}

/// `−D + ħω(n + ½)`.
pub fn harmonic_energy_estimate(params: &ModelParams, n: usize) -> Result<f64> {
    let h = expand_about_centre(params)?;
    Ok(h.offset + params.hbar() * h.omega * (n as f64 + 0.5))
}
