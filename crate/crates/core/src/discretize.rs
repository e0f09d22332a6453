//! Uniform grids and the three-point finite-difference Hamiltonian.
//!
//! `N` counts every grid point including both endpoints. Dirichlet conditions
//! `ψ(a) = ψ(b) = 0` eliminate the endpoints, leaving an `(N−2) × (N−2)`
//! symmetric tridiagonal matrix over the interior points `x_1 … x_{N−2}`.
//!
//! States with appreciable amplitude next to `b` (or `a`) feel the box rather
//! than the potential; see [`crate::eigensolve::EigenState::boundary_amplitude`].

use crate::classical::{potential, ModelParams};
use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    a: f64,
    b: f64,
    n_points: usize,
    dx: f64,
}

/// Uniform grid of `n` points on `[a, b]`, endpoints included.
pub fn make_grid(a: f64, b: f64, n: usize) -> Result<SpatialGrid> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::config(format!("grid bounds must satisfy a < b, got [{a}, {b}]")));
    }
    if n < MIN_POINTS {
        return Err(Error::config(format!(
            "grid needs at least {MIN_POINTS} points, got {n}"
        )));
    }
    Ok(SpatialGrid {
        a,
        b,
        n_points: n,
        dx: (b - a) / (n - 1) as f64,
    })
}

impl SpatialGrid {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// `x_j = a + j·dx`.
    pub fn point(&self, j: usize) -> f64 {
        self.a + j as f64 * self.dx
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(|j| self.point(j))
    }

    pub fn interior_len(&self) -> usize {
        self.n_points - 2
    }
}

/// Symmetric tridiagonal FD Hamiltonian over the interior grid points.
///
/// Only one off-diagonal is stored; every entry equals `−ħ²/(2m·dx²)`.
#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
    grid: SpatialGrid,
    hbar: f64,
    mass: f64,
    params: Option<ModelParams>,
}

impl DiscreteHamiltonian {
    /// Assemble for an arbitrary potential sampled at the interior points.
    pub fn from_potential<V>(grid: &SpatialGrid, hbar: f64, mass: f64, v: V) -> Result<Self>
    where
        V: Fn(f64) -> f64,
    {
        if !(hbar > 0.0 && mass > 0.0) {
            return Err(Error::config("hbar and mass must be positive"));
        }
        let dx2 = grid.dx * grid.dx;
        let kinetic = hbar * hbar / (mass * dx2);
        let coupling = -hbar * hbar / (2.0 * mass * dx2);
        let m = grid.interior_len();
        let diagonal = (1..=m).map(|j| kinetic + v(grid.point(j))).collect();
        let off_diagonal = vec![coupling; m - 1];
        Ok(Self {
            diagonal,
            off_diagonal,
            grid: *grid,
            hbar,
            mass,
            params: None,
        })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Model parameters, when built by [`assemble`].
    pub fn params(&self) -> Option<&ModelParams> {
        self.params.as_ref()
    }

    /// Matrix dimension `N − 2`.
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let m = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..m {
            let mut r = 0.0;
            if i > 0 {
                r += self.off_diagonal[i - 1].abs();
            }
            if i + 1 < m {
                r += self.off_diagonal[i].abs();
            }
            lo = lo.min(self.diagonal[i] - r);
            hi = hi.max(self.diagonal[i] + r);
        }
        (lo, hi)
    }

    /// Infinity norm of the matrix.
    pub fn norm_inf(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    #[cfg(test)]
    pub(crate) fn zero_coupling(&mut self, i: usize) {
        self.off_diagonal[i] = 0.0;
    }

    /// `y = H̃ v` for an interior-length vector.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let m = self.dim();
        if v.len() != m {
            return Err(Error::Dimension {
                expected: m,
                found: v.len(),
            });
        }
        let e = &self.off_diagonal;
        Ok((0..m)
            .map(|i| {
                let mut y = self.diagonal[i] * v[i];
                if i > 0 {
                    y += e[i - 1] * v[i - 1];
                }
                if i + 1 < m {
                    y += e[i] * v[i + 1];
                }
                y
            })
            .collect())
    }
}

/// The saddle-node Hamiltonian on `grid`.
pub fn assemble(params: &ModelParams, grid: &SpatialGrid) -> DiscreteHamiltonian {
    let mut h = DiscreteHamiltonian::from_potential(grid, params.hbar(), params.mass(), |x| {
        potential(params, x)
    })
    .expect("ModelParams guarantees positive hbar and mass");
    h.params = Some(*params);
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_grid_spacing() {
        let g = make_grid(-1.0, 9.0, 599).unwrap();
        assert_eq!(g.dx(), 10.0 / 598.0);
        assert!((g.dx() - 0.016722).abs() < 1e-6);
        assert_eq!(g.point(0), -1.0);
        assert!((g.point(598) - 9.0).abs() < 1e-13);
    }

    #[test]
    fn five_point_grid() {
        let g = make_grid(0.0, 1.0, 5).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(matches!(make_grid(-1.0, 9.0, 2), Err(Error::Config(_))));
        assert!(make_grid(-1.0, 9.0, 4).is_err());
        assert!(make_grid(1.0, 1.0, 10).is_err());
        assert!(make_grid(2.0, 1.0, 10).is_err());
        assert!(make_grid(0.0, f64::INFINITY, 10).is_err());
    }

    #[test]
    fn stencil_entries() {
        let p = ModelParams::new(4.0, 1.0).unwrap();
        let g = make_grid(0.0, 1.0, 5).unwrap();
        let h = assemble(&p, &g);
        assert_eq!(h.dim(), 3);
        assert_eq!(h.off_diagonal(), &[-8.0, -8.0]);
        // 16 + V(0.25) with V(0.25) = -2/16 + (1/3)/64, hand-evaluated
        let expected = 16.0 - 0.125 + 0.015625 / 3.0;
        assert!((h.diagonal()[0] - expected).abs() < 1e-13);
        assert!((h.diagonal()[0] - 15.880208333333334).abs() < 1e-12);
    }

    #[test]
    fn matches_dense_construction() {
        // Independent route: dense N×N second-difference operator with the
        // boundary rows and columns struck out.
        let p = ModelParams::with_units(4.0, 1.7, 0.8, 1.3).unwrap();
        let g = make_grid(-1.0, 9.0, 41).unwrap();
        let n = g.len();
        let c = -p.hbar() * p.hbar() / (2.0 * p.mass());
        let mut dense = vec![vec![0.0; n]; n];
        for j in 0..n {
            let x = g.a() + j as f64 * (g.b() - g.a()) / (n as f64 - 1.0);
            dense[j][j] = -2.0 * c / (g.dx() * g.dx()) + potential(&p, x);
            if j + 1 < n {
                dense[j][j + 1] = c / (g.dx() * g.dx());
                dense[j + 1][j] = c / (g.dx() * g.dx());
            }
        }
        let h = assemble(&p, &g);
        for i in 0..h.dim() {
            assert!((h.diagonal()[i] - dense[i + 1][i + 1]).abs() < 1e-10);
            if i + 1 < h.dim() {
                assert_eq!(h.off_diagonal()[i], dense[i + 1][i + 2]);
                assert_eq!(h.off_diagonal()[i], dense[i + 2][i + 1]);
            }
        }
        assert!(h.off_diagonal().iter().all(|&e| e < 0.0));
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let g = make_grid(0.0, 1.0, 5).unwrap();
        let h = DiscreteHamiltonian::from_potential(&g, 1.0, 1.0, |_| 0.0).unwrap();
        assert!(matches!(h.apply(&[1.0; 5]), Err(Error::Dimension { expected: 3, found: 5 })));
        assert_eq!(h.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![8.0, 0.0, 8.0]);
    }
}
