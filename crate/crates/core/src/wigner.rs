//! Discrete Wigner transform of real eigenstates and phase-space integrals.
//!
//! With the step `Δη = 2Δx` both evaluation points `x_j ± η_l/2 = x_{j±l}`
//! land on grid nodes, so
//!
//! ```text
//! ρ(x_j, p_k) = (Δx/πħ) Σ_l ψ(x_{j−l}) ψ(x_{j+l}) cos(p_k η_l / ħ),  η_l = 2lΔx
//! ```
//!
//! where `l` runs over every integer keeping both indices on the grid (ψ is
//! zero outside `[a, b]`). The summand is even in `l`, so the sum is folded to
//! `l ≥ 0`. The sine part vanishes for real ψ and is never formed.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::classical::{hamiltonian, ModelParams};
use crate::discretize::{SpatialGrid, MIN_POINTS};
use crate::eigensolve::{EigenState, Spectrum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    c: f64,
    d: f64,
    n_points: usize,
    dp: f64,
}

/// Uniform grid of `n` momenta on `[c, d]`, endpoints included.
pub fn make_momentum_grid(c: f64, d: f64, n: usize) -> Result<MomentumGrid> {
    if !(c.is_finite() && d.is_finite() && c < d) {
        return Err(Error::config(format!(
            "momentum bounds must satisfy c < d, got [{c}, {d}]"
        )));
    }
    if n < MIN_POINTS {
        return Err(Error::config(format!(
            "momentum grid needs at least {MIN_POINTS} points, got {n}"
        )));
    }
    Ok(MomentumGrid {
        c,
        d,
        n_points: n,
        dp: (d - c) / (n - 1) as f64,
    })
}

impl MomentumGrid {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dp(&self) -> f64 {
        self.dp
    }

    /// `p_k = c + k·dp`, evaluated from the nearer endpoint so that a grid
    /// with `c = −d` satisfies `p_{N−1−k} = −p_k` bit for bit.
    pub fn point(&self, k: usize) -> f64 {
        if 2 * k < self.n_points - 1 {
            self.c + k as f64 * self.dp
        } else {
            self.d - (self.n_points - 1 - k) as f64 * self.dp
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(|k| self.point(k))
    }
}

/// `ρ(x_j, p_k)` tabulated on the product grid, stored row-major with one
/// row per `x_j`. Values may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    values: Vec<f64>,
    state_index: usize,
    energy: f64,
    hbar: f64,
    params: Option<ModelParams>,
    x_grid: SpatialGrid,
    p_grid: MomentumGrid,
}

impl WignerField {
    /// Reassemble a field from stored parts (e.g. a file).
    pub fn from_parts(
        values: Vec<f64>,
        state_index: usize,
        energy: f64,
        hbar: f64,
        params: Option<ModelParams>,
        x_grid: SpatialGrid,
        p_grid: MomentumGrid,
    ) -> Result<Self> {
        let expected = x_grid.len() * p_grid.len();
        if values.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: values.len(),
            });
        }
        Ok(Self {
            values,
            state_index,
            energy,
            hbar,
            params,
            x_grid,
            p_grid,
        })
    }

    /// Field of all zeros, mostly useful as a neutral element in tests.
    pub fn zeros(x_grid: SpatialGrid, p_grid: MomentumGrid, hbar: f64) -> Self {
        Self {
            values: vec![0.0; x_grid.len() * p_grid.len()],
            state_index: 0,
            energy: 0.0,
            hbar,
            params: None,
            x_grid,
            p_grid,
        }
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[j * self.p_grid.len() + k]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let np = self.p_grid.len();
        &self.values[j * np..(j + 1) * np]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn state_index(&self) -> usize {
        self.state_index
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn params(&self) -> Option<&ModelParams> {
        self.params.as_ref()
    }

    pub fn x_grid(&self) -> &SpatialGrid {
        &self.x_grid
    }

    pub fn p_grid(&self) -> &MomentumGrid {
        &self.p_grid
    }

    pub fn with_params(mut self, params: ModelParams) -> Self {
        self.params = Some(params);
        self
    }

    /// `Σ ρ·dx·dp` over the whole grid.
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.x_grid.dx() * self.p_grid.dp()
    }
}

/// Wigner function of a real state tabulated on `xg`.
pub fn wigner_transform(
    state: &EigenState,
    xg: &SpatialGrid,
    pg: &MomentumGrid,
    hbar: f64,
) -> Result<WignerField> {
    let psi = state.values();
    let nx = xg.len();
    if psi.len() != nx {
        return Err(Error::Dimension {
            expected: nx,
            found: psi.len(),
        });
    }
    if !(hbar > 0.0) {
        return Err(Error::config("hbar must be positive"));
    }
    let np = pg.len();
    let dx = xg.dx();
    let max_shift = (nx - 1) / 2;

    // cos(p_k η_l / ħ) for l = 0..=max_shift, one row per momentum
    let cosines: Vec<f64> = (0..np)
        .into_par_iter()
        .flat_map_iter(|k| {
            let p = pg.point(k);
            (0..=max_shift).map(move |l| {
                let eta = 2.0 * l as f64 * dx;
                (p * eta / hbar).cos()
            })
        })
        .collect();

    let prefactor = dx / (PI * hbar);
    let width = max_shift + 1;
    let mut values = vec![0.0; nx * np];
    values
        .par_chunks_mut(np)
        .enumerate()
        .for_each(|(j, row)| {
            let reach = j.min(nx - 1 - j);
            let products: Vec<f64> = (0..=reach).map(|l| psi[j - l] * psi[j + l]).collect();
            for (k, out) in row.iter_mut().enumerate() {
                let cos_row = &cosines[k * width..k * width + reach + 1];
                let tail: f64 = products[1..]
                    .iter()
                    .zip(&cos_row[1..])
                    .map(|(a, b)| a * b)
                    .sum();
                *out = prefactor * (products[0] + 2.0 * tail);
            }
        });

    Ok(WignerField {
        values,
        state_index: state.index(),
        energy: state.energy(),
        hbar,
        params: None,
        x_grid: *xg,
        p_grid: *pg,
    })
}

/// Wigner function of state `n` of a solved spectrum, carrying its provenance.
pub fn spectrum_wigner(spectrum: &Spectrum, n: usize, pg: &MomentumGrid) -> Result<WignerField> {
    let state = spectrum.state(n).ok_or_else(|| {
        Error::config(format!("state {n} not in spectrum of {} states", spectrum.len()))
    })?;
    let mut field = wigner_transform(state, spectrum.grid(), pg, spectrum.hbar())?;
    field.params = spectrum.params().copied();
    Ok(field)
}

/// Position marginal `Σ_k ρ(x_j, p_k)·dp`.
pub fn marginal_x(w: &WignerField) -> Vec<f64> {
    let dp = w.p_grid.dp();
    (0..w.x_grid.len())
        .map(|j| w.row(j).iter().sum::<f64>() * dp)
        .collect()
}

/// `Σ ρ(x_j, p_k)·dx·dp` over grid nodes with `H(x_j, p_k) ≤ 0`.
///
/// Not clamped to `[0, 1]`: ρ is a quasiprobability.
pub fn nonreactive_probability(w: &WignerField, params: &ModelParams) -> f64 {
    let mut sum = 0.0;
    for (j, x) in w.x_grid.points().enumerate() {
        let row = w.row(j);
        for (k, p) in w.p_grid.points().enumerate() {
            if hamiltonian(params, x, p) <= 0.0 {
                sum += row[k];
            }
        }
    }
    sum * w.x_grid.dx() * w.p_grid.dp()
}
