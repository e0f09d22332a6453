//! Position statistics of eigenstates by plain Riemann-sum quadrature.
//!
//! The rule `Σ_j f(x_j)·dx` matches the eigensolver normalization exactly, so
//! the zeroth moment of a solved state is 1 up to rounding.

use crate::classical::{depth, ModelParams};
use crate::discretize::SpatialGrid;
use crate::eigensolve::{EigenState, NORM_TOL};
use crate::error::{Error, Result};

/// Variances down to this negative value are treated as rounding and clamped.
pub const VARIANCE_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRecord {
    pub state_index: usize,
    pub mean_x: f64,
    pub mean_x2: f64,
    pub sigma_x: f64,
    pub depth: f64,
    pub params: ModelParams,
}

fn check_grid(state: &EigenState, grid: &SpatialGrid) -> Result<()> {
    if state.values().len() != grid.len() {
        return Err(Error::Dimension {
            expected: grid.len(),
            found: state.values().len(),
        });
    }
    Ok(())
}

fn raw_moment(state: &EigenState, grid: &SpatialGrid, power: i32) -> f64 {
    state
        .values()
        .iter()
        .zip(grid.points())
        .map(|(psi, x)| psi * psi * x.powi(power))
        .sum::<f64>()
        * grid.dx()
}

/// `⟨x^power⟩ = Σ_j ψ(x_j)² x_j^power dx`.
pub fn moment(state: &EigenState, grid: &SpatialGrid, power: u32) -> Result<f64> {
    check_grid(state, grid)?;
    let norm = raw_moment(state, grid, 0);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Contract(format!(
            "state {} is not normalized on this grid (sum psi^2 dx = {norm})",
            state.index()
        )));
    }
    if power == 0 {
        return Ok(norm);
    }
    let power = i32::try_from(power).map_err(|_| Error::config("moment power too large"))?;
    Ok(raw_moment(state, grid, power))
}

fn sigma_from(mean: f64, mean2: f64, index: usize) -> Result<f64> {
    let variance = mean2 - mean * mean;
    if variance < VARIANCE_FLOOR {
        return Err(Error::Numeric(format!(
            "negative position variance {variance:e} for state {index}"
        )));
    }
    Ok(variance.max(0.0).sqrt())
}

/// `(Δx) = √(⟨x²⟩ − ⟨x⟩²)`.
pub fn uncertainty(state: &EigenState, grid: &SpatialGrid) -> Result<f64> {
    let mean = moment(state, grid, 1)?;
    let mean2 = moment(state, grid, 2)?;
    sigma_from(mean, mean2, state.index())
}

pub fn observe(state: &EigenState, grid: &SpatialGrid, params: &ModelParams) -> Result<ObservableRecord> {
    let mean_x = moment(state, grid, 1)?;
    let mean_x2 = moment(state, grid, 2)?;
    Ok(ObservableRecord {
        state_index: state.index(),
        mean_x,
        mean_x2,
        sigma_x: sigma_from(mean_x, mean_x2, state.index())?,
        depth: depth(params),
        params: *params,
    })
}
