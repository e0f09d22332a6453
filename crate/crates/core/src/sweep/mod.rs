//! Batch α-sweeps at fixed μ.
//!
//! Each α is an independent work item: assemble, solve, observables, then
//! optionally Wigner fields and nonreactive probabilities. Per-α files are
//! written by the worker that owns the point; `records.csv` is written once,
//! in α order, after every point has finished. Output is therefore
//! byte-identical for any worker count.

pub mod config;
pub mod output;

use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::classical::{contour_points, depth, ModelParams};
use crate::discretize::{assemble, make_grid, SpatialGrid};
use crate::eigensolve::solve;
use crate::error::{Error, Result};
use crate::observables::observe;
use crate::perturbation::harmonic_energy_estimate;
use crate::wigner::{make_momentum_grid, nonreactive_probability, spectrum_wigner, MomentumGrid};

pub use config::{AlphaSpec, OutputKind, SweepConfig};
use output::{Contour, Metadata};

/// One row of `records.csv`, for one `(α, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub alpha: f64,
    pub depth: f64,
    pub state_index: usize,
    pub energy: f64,
    pub mean_x: f64,
    pub sigma_x: f64,
    /// Present when probabilities or Wigner grids were requested.
    pub nonreactive_prob: Option<f64>,
    pub boundary_amplitude: f64,
    /// `−D + ħω(n + ½)`; absent at the bifurcation point.
    pub harmonic_estimate: Option<f64>,
}

#[derive(Debug)]
pub struct PointFailure {
    pub alpha: f64,
    pub state_index: Option<usize>,
    pub error: Error,
}

impl std::fmt::Display for PointFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.state_index {
            Some(n) => write!(f, "alpha={} n={}: {}", self.alpha, n, self.error),
            None => write!(f, "alpha={}: {}", self.alpha, self.error),
        }
    }
}

#[derive(Debug, Default)]
pub struct SweepOutcome {
    /// Sorted by `(alpha, state_index)`.
    pub records: Vec<SweepRecord>,
    pub failures: Vec<PointFailure>,
}

impl SweepOutcome {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Filename fragment for an α value (shortest round-trip decimal).
pub fn alpha_tag(alpha: f64) -> String {
    alpha.to_string()
}

struct Plan<'a> {
    cfg: &'a SweepConfig,
    x_grid: SpatialGrid,
    p_grid: MomentumGrid,
}

impl Plan<'_> {
    fn base_metadata(&self, params: &ModelParams) -> Metadata {
        let mut m = Metadata::default();
        m.params(params)
            .push("depth", depth(params))
            .push("x_min", self.x_grid.a())
            .push("x_max", self.x_grid.b())
            .push("x_points", self.x_grid.len())
            .push("n_states", self.cfg.n_states);
        m
    }

    fn out(&self, name: String) -> PathBuf {
        self.cfg.output_dir.join(name)
    }

    fn run_point(&self, alpha: f64) -> std::result::Result<Vec<SweepRecord>, PointFailure> {
        let cfg = self.cfg;
        let fail = |state_index: Option<usize>| {
            move |error: Error| PointFailure {
                alpha,
                state_index,
                error,
            }
        };
        let params =
            ModelParams::with_units(cfg.mu, alpha, cfg.hbar, cfg.mass).map_err(fail(None))?;
        let spectrum = solve(&assemble(&params, &self.x_grid), cfg.n_states).map_err(fail(None))?;
        let tag = alpha_tag(alpha);
        let meta = self.base_metadata(&params);

        if cfg.wants(OutputKind::Spectrum) {
            output::write_spectrum(&self.out(format!("spectrum_{tag}.csv")), &meta, &spectrum)
                .map_err(fail(None))?;
        }

        let need_wigner = cfg.wants(OutputKind::Wigner) || cfg.wants(OutputKind::Probability);
        let mut records = Vec::with_capacity(spectrum.len());
        for state in spectrum.states() {
            let n = state.index();
            let obs = observe(state, &self.x_grid, &params).map_err(fail(Some(n)))?;
            let nonreactive_prob = if need_wigner {
                let field = spectrum_wigner(&spectrum, n, &self.p_grid).map_err(fail(Some(n)))?;
                if cfg.wants(OutputKind::Wigner) {
                    output::emit_wigner_grid(&field, &self.out(format!("wigner_{tag}_n{n}.dat")))
                        .map_err(fail(Some(n)))?;
                }
                Some(nonreactive_probability(&field, &params))
            } else {
                None
            };
            records.push(SweepRecord {
                alpha,
                depth: obs.depth,
                state_index: n,
                energy: state.energy(),
                mean_x: obs.mean_x,
                sigma_x: obs.sigma_x,
                nonreactive_prob,
                boundary_amplitude: state.boundary_amplitude(),
                harmonic_estimate: harmonic_energy_estimate(&params, n).ok(),
            });
        }

        if cfg.wants(OutputKind::Contours) {
            let mut contours: Vec<Contour> = spectrum
                .states()
                .iter()
                .map(|s| Contour {
                    state_index: Some(s.index()),
                    energy: s.energy(),
                    points: contour_points(&params, s.energy(), &self.x_grid),
                })
                .collect();
            contours.extend(cfg.contour_energies.iter().map(|&e| Contour {
                state_index: None,
                energy: e,
                points: contour_points(&params, e, &self.x_grid),
            }));
            output::write_contours(&self.out(format!("contours_{tag}.csv")), &meta, &contours)
                .map_err(fail(None))?;
        }
        Ok(records)
    }
}

fn sweep_metadata(cfg: &SweepConfig) -> Metadata {
    let mut m = Metadata::default();
    let alphas: Vec<String> = cfg.alpha_values().iter().map(|a| a.to_string()).collect();
    m.push("mu", cfg.mu)
        .push("alpha", alphas.join(" "))
        .push("hbar", cfg.hbar)
        .push("mass", cfg.mass)
        .push("domain", format!("{} {}", cfg.domain.0, cfg.domain.1))
        .push("pdomain", format!("{} {}", cfg.momentum_domain.0, cfg.momentum_domain.1))
        .push("n_points", cfg.n_points)
        .push("p_points", cfg.point_count())
        .push("n_states", cfg.n_states);
    m
}

/// Run the sweep described by `cfg`, writing files under `cfg.output_dir`.
///
/// Configuration and output-directory problems are returned as `Err`; errors
/// at individual α points are collected in [`SweepOutcome::failures`] and the
/// remaining points still run unless `fail_fast` is set.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let plan = Plan {
        cfg,
        x_grid: make_grid(cfg.domain.0, cfg.domain.1, cfg.n_points)?,
        p_grid: make_momentum_grid(cfg.momentum_domain.0, cfg.momentum_domain.1, cfg.point_count())?,
    };
    fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;

    let alphas = cfg.alpha_values();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        if cfg.fail_fast {
            // stop scheduling new points after the first failure
            let stop = std::sync::atomic::AtomicBool::new(false);
            alphas
                .par_iter()
                .map(|&a| {
                    if stop.load(std::sync::atomic::Ordering::Relaxed) {
                        return None;
                    }
                    let r = plan.run_point(a);
                    if r.is_err() {
                        stop.store(true, std::sync::atomic::Ordering::Relaxed);
                    }
                    Some(r)
                })
                .collect()
        } else {
            alphas.par_iter().map(|&a| Some(plan.run_point(a))).collect()
        }
    });

    let mut order: Vec<usize> = (0..alphas.len()).collect();
    order.sort_by(|&i, &j| alphas[i].total_cmp(&alphas[j]));
    let mut slots: Vec<_> = results.into_iter().map(Some).collect();
    let mut outcome = SweepOutcome::default();
    for i in order {
        match slots[i].take().flatten() {
            Some(Ok(records)) => outcome.records.extend(records),
            Some(Err(failure)) => {
                outcome.failures.push(failure);
                if cfg.fail_fast {
                    break;
                }
            }
            None => {}
        }
    }

    if cfg.wants(OutputKind::Observables) || cfg.wants(OutputKind::Probability) {
        output::write_records(
            &cfg.output_dir.join("records.csv"),
            &sweep_metadata(cfg),
            &outcome.records,
        )?;
    }
    Ok(outcome)
}
