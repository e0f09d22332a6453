//! The classical saddle-node Hamiltonian `H(x, p) = p²/2m − √μ x² + (α/3) x³`.
//!
//! The saddle sits at the origin with energy 0; for `μ > 0` a centre sits at
//! `x = 2√μ/α` with energy `−D`, where `D = 4μ^{3/2}/(3α²)` is the well depth.
//! At `μ = 0` the two collide (saddle-node bifurcation).

use crate::discretize::SpatialGrid;
use crate::error::{Error, Result};

/// Relative tolerance used when inverting `H = e` for the momentum.
pub const CONTOUR_TOL: f64 = 1e-10;

/// Physical parameters of one instance of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    mu: f64,
    alpha: f64,
    hbar: f64,
    mass: f64,
}

impl ModelParams {
    /// Parameters with `ħ = m = 1`.
    pub fn new(mu: f64, alpha: f64) -> Result<Self> {
        Self::with_units(mu, alpha, 1.0, 1.0)
    }

    pub fn with_units(mu: f64, alpha: f64, hbar: f64, mass: f64) -> Result<Self> {
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::config(format!("mu must be finite and >= 0, got {mu}")));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::config(format!("alpha must be finite and > 0, got {alpha}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::config(format!("hbar must be finite and > 0, got {hbar}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::config(format!("mass must be finite and > 0, got {mass}")));
        }
        Ok(Self {
            mu,
            alpha,
            hbar,
            mass,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Same parameters with a different well-depth parameter.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::with_units(self.mu, alpha, self.hbar, self.mass)
    }

    /// x-coordinate of the centre equilibrium, `2√μ/α` (0 at the bifurcation).
    pub fn centre_position(&self) -> f64 {
        2.0 * self.mu.sqrt() / self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    Saddle,
    Centre,
    /// Saddle and centre coincide (`μ = 0`).
    Degenerate,
}

/// An equilibrium of the Hamiltonian vector field; its momentum is always 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub position: f64,
    pub kind: EquilibriumKind,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Reactive,
    NonReactive,
}

pub fn potential(params: &ModelParams, x: f64) -> f64 {
    -params.mu.sqrt() * x * x + params.alpha / 3.0 * x * x * x
}

/// Second derivative of the potential, `−2√μ + 2αx`.
pub fn potential_curvature(params: &ModelParams, x: f64) -> f64 {
    -2.0 * params.mu.sqrt() + 2.0 * params.alpha * x
}

pub fn hamiltonian(params: &ModelParams, x: f64, p: f64) -> f64 {
    p * p / (2.0 * params.mass) + potential(params, x)
}

/// Well depth `D = 4μ^{3/2}/(3α²)`.
pub fn depth(params: &ModelParams) -> f64 {
    4.0 * params.mu.powf(1.5) / (3.0 * params.alpha * params.alpha)
}

/// Equilibria ordered by position. Two entries for `μ > 0`, one degenerate
/// entry at the bifurcation point `μ = 0`.
pub fn equilibria(params: &ModelParams) -> Vec<Equilibrium> {
    if params.mu == 0.0 {
        return vec![Equilibrium {
            position: 0.0,
            kind: EquilibriumKind::Degenerate,
            energy: 0.0,
        }];
    }
    vec![
        Equilibrium {
            position: 0.0,
            kind: EquilibriumKind::Saddle,
            energy: 0.0,
        },
        Equilibrium {
            position: params.centre_position(),
            kind: EquilibriumKind::Centre,
            energy: -depth(params),
        },
    ]
}

/// Energy-based classification: only trajectories above the saddle energy
/// can cross `x = 0`. The separatrix `e = 0` counts as nonreactive.
pub fn classify_energy(e: f64) -> Regime {
    if e > 0.0 {
        Regime::Reactive
    } else {
        Regime::NonReactive
    }
}

/// Points of the level set `H(x, p) = e` sampled at the grid abscissae.
///
/// Each classically allowed grid point yields `(x, +p)` and `(x, −p)`; a
/// turning point (`p = 0`) yields a single entry. Points where `e − V(x)` is
/// within rounding of zero are treated as turning points.
pub fn contour_points(params: &ModelParams, e: f64, grid: &SpatialGrid) -> Vec<(f64, f64)> {
    let slack = CONTOUR_TOL * e.abs().max(1.0);
    let mut out = Vec::new();
    for x in grid.points() {
        let kinetic = e - potential(params, x);
        if kinetic < -slack {
            continue;
        }
        if kinetic <= slack {
            out.push((x, 0.0));
            continue;
        }
        let p = (2.0 * params.mass * kinetic).sqrt();
        out.push((x, p));
        out.push((x, -p));
    }
    out
}
