//! Lowest eigenpairs of the tridiagonal FD Hamiltonian.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from shifted
//! inverse iteration with a pivoted tridiagonal LU. Memory is `O(N·k)` and the
//! result is bit-for-bit reproducible for identical inputs.
//!
//! Returned states satisfy `Σ_j ψ(x_j)²·dx = 1`, vanish at both endpoints, and
//! have their largest-magnitude entry (leftmost on ties) positive.

use crate::classical::ModelParams;
use crate::discretize::{DiscreteHamiltonian, SpatialGrid};
use crate::error::{Error, Result};

/// Residual bound of the solve contract, relative to `‖H̃‖∞·‖ψ‖∞`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Eigenvalues closer than this (relative to `max(|E|, 1)`) form a cluster
/// whose vectors are explicitly orthogonalized against each other.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Maximum deviation of `Σψ²dx` from 1 accepted as "normalized".
pub const NORM_TOL: f64 = 1e-6;

const MAX_INVERSE_ITERATIONS: usize = 10;
const TARGET_RESIDUAL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenState {
    index: usize,
    energy: f64,
    values: Vec<f64>,
    boundary_amplitude: f64,
}

impl EigenState {
    /// Wrap a full-grid tabulation (boundary entries included) without
    /// normalizing or solving anything.
    pub fn new(index: usize, energy: f64, values: Vec<f64>) -> Self {
        let boundary_amplitude = if values.len() >= 2 {
            values[values.len() - 2].abs()
        } else {
            0.0
        };
        Self {
            index,
            energy,
            values,
            boundary_amplitude,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// `ψ(x_j)` for every grid point, endpoints included.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `|ψ|` at the last interior point. Large values flag states shaped by
    /// the right Dirichlet wall rather than by the potential.
    pub fn boundary_amplitude(&self) -> f64 {
        self.boundary_amplitude
    }

    /// `Σ_j ψ(x_j)²·dx`.
    pub fn norm_sq(&self, dx: f64) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * dx
    }

    /// Interior sign changes, skipping entries whose magnitude is at most
    /// `rel_threshold · max|ψ|`.
    pub fn sign_changes(&self, rel_threshold: f64) -> usize {
        let peak = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cut = rel_threshold * peak;
        let mut last = 0.0f64;
        let mut changes = 0;
        for &v in &self.values {
            if v.abs() <= cut {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                changes += 1;
            }
            last = v;
        }
        changes
    }
}

/// The lowest `k` eigenstates on one grid.
#[derive(Debug, Clone)]
pub struct Spectrum {
    states: Vec<EigenState>,
    grid: SpatialGrid,
    hbar: f64,
    mass: f64,
    params: Option<ModelParams>,
}

impl Spectrum {
    pub fn states(&self) -> &[EigenState] {
        &self.states
    }

    pub fn state(&self, n: usize) -> Option<&EigenState> {
        self.states.get(n)
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
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

    pub fn params(&self) -> Option<&ModelParams> {
        self.params.as_ref()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Number of eigenvalues strictly below `x`, from the LDLᵀ pivots of `T − xI`.
fn sturm_count(d: &[f64], e2: &[f64], x: f64, pivmin: f64) -> usize {
    let mut q = d[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    let mut count = usize::from(q < 0.0);
    for i in 1..d.len() {
        q = d[i] - x - e2[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `i`-th smallest eigenvalue (0-based) by bisection on `[lo, hi]`.
fn bisect(d: &[f64], e2: &[f64], i: usize, mut lo: f64, mut hi: f64, pivmin: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        if width <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + pivmin || mid == lo || mid == hi
        {
            return mid;
        }
        if sturm_count(d, e2, mid, pivmin) > i {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Pivoted LU of `T − λI` (tridiagonal, LAPACK `gttrf` layout).
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, tiny: f64) -> Self {
        let m = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; m.saturating_sub(2)];
        let mut swapped = vec![false; m.saturating_sub(1)];
        for i in 0..m.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < m {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        // an exact eigenvalue makes U singular; nudge zero pivots
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let m = self.d.len();
        for i in 0..m - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[m - 1] /= self.d[m - 1];
        if m >= 2 {
            b[m - 2] = (b[m - 2] - self.du[m - 2] * b[m - 1]) / self.d[m - 2];
        }
        for i in (0..m.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Deterministic start vector with no special symmetry.
fn start_vector(m: usize, seed: u64) -> Vec<f64> {
    let mut state = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(0xD1B5_4A32_D192_ED03);
    (0..m)
        .map(|_| {
            // xorshift64*
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            let r = state.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 11;
            0.5 + r as f64 / (1u64 << 53) as f64
        })
        .collect()
}

fn normalize_unit(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= n;
    }
}

fn residual_inf(h: &DiscreteHamiltonian, v: &[f64], lambda: f64) -> f64 {
    let d = h.diagonal();
    let e = h.off_diagonal();
    let m = d.len();
    let mut worst = 0.0f64;
    for i in 0..m {
        let mut r = (d[i] - lambda) * v[i];
        if i > 0 {
            r += e[i - 1] * v[i - 1];
        }
        if i + 1 < m {
            r += e[i] * v[i + 1];
        }
        worst = worst.max(r.abs());
    }
    worst
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Index of the largest-magnitude entry, leftmost on ties.
fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

/// The `k` lowest eigenpairs of `h`, ascending.
pub fn solve(h: &DiscreteHamiltonian, k: usize) -> Result<Spectrum> {
    let m = h.dim();
    if k == 0 || k > m {
        return Err(Error::config(format!(
            "number of states must be in 1..={m}, got {k}"
        )));
    }
    let d = h.diagonal();
    let e = h.off_diagonal();
    let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
    let pivmin = f64::MIN_POSITIVE * e2.iter().fold(1.0f64, |a, &b| a.max(b));
    let norm = h.norm_inf();
    let (glo, ghi) = h.gershgorin();
    let pad = 2.0 * f64::EPSILON * norm + pivmin;
    let (glo, ghi) = (glo - pad, ghi + pad);

    let mut energies = Vec::with_capacity(k);
    let mut lo = glo;
    for i in 0..k {
        let lambda = bisect(d, &e2, i, lo, ghi, pivmin);
        energies.push(lambda);
        // eigenvalues are ascending, so the next one is no smaller
        lo = lambda.min(ghi) - pad;
        lo = lo.max(glo);
    }

    let tiny = f64::EPSILON * norm;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut cluster_start = 0;
    for (i, &lambda) in energies.iter().enumerate() {
        if i > 0 && (lambda - energies[i - 1]).abs() >= CLUSTER_TOL * lambda.abs().max(1.0) {
            cluster_start = i;
        }
        let lu = ShiftedLu::factor(d, e, lambda, tiny);
        let mut v = start_vector(m, i as u64);
        normalize_unit(&mut v);
        let mut converged = false;
        let mut last_residual = f64::INFINITY;
        for iteration in 0..MAX_INVERSE_ITERATIONS {
            lu.solve(&mut v);
            for prev in &vectors[cluster_start..i] {
                let dot: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
                for (x, p) in v.iter_mut().zip(prev) {
                    *x -= dot * p;
                }
            }
            normalize_unit(&mut v);
            last_residual = residual_inf(h, &v, lambda) / (norm * max_abs(&v));
            if iteration >= 1 && last_residual <= TARGET_RESIDUAL {
                converged = true;
                break;
            }
        }
        if !converged && !(last_residual <= RESIDUAL_TOL) {
            return Err(Error::Convergence {
                index: i,
                reason: format!("relative residual {last_residual:e} exceeds {RESIDUAL_TOL:e}"),
            });
        }
        vectors.push(v);
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = energies.into_iter().zip(vectors).collect();
    order_clusters(&mut pairs);

    let dx = h.grid().dx();
    let states = pairs
        .into_iter()
        .enumerate()
        .map(|(index, (energy, interior))| {
            let scale = 1.0 / (interior.iter().map(|x| x * x).sum::<f64>() * dx).sqrt();
            let sign = if interior[argmax_abs(&interior)] < 0.0 {
                -scale
            } else {
                scale
            };
            let mut values = Vec::with_capacity(m + 2);
            values.push(0.0);
            values.extend(interior.iter().map(|x| x * sign));
            values.push(0.0);
            EigenState::new(index, energy, values)
        })
        .collect();

    Ok(Spectrum {
        states,
        grid: *h.grid(),
        hbar: h.hbar(),
        mass: h.mass(),
        params: h.params().copied(),
    })
}

/// Within each near-degenerate run, order states by the position of their
/// largest-amplitude grid point.
fn order_clusters(pairs: &mut [(f64, Vec<f64>)]) {
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() {
            let (a, b) = (pairs[end - 1].0, pairs[end].0);
            if (b - a).abs() >= CLUSTER_TOL * b.abs().max(1.0) {
                break;
            }
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by_key(|(_, v)| argmax_abs(v));
        }
        start = end;
    }
}

/// `max_j |(H̃ψ − Eψ)_j|` over the interior points.
pub fn eigenvalue_residual(h: &DiscreteHamiltonian, s: &EigenState) -> Result<f64> {
    let n = h.grid().len();
    if s.values().len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: s.values().len(),
        });
    }
    let norm = s.norm_sq(h.grid().dx());
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Contract(format!(
            "state {} is not normalized (sum psi^2 dx = {norm})",
            s.index()
        )));
    }
    Ok(residual_inf(h, &s.values()[1..n - 1], s.energy()))
}
