//! Batch α-sweep driver.
//!
//! Exit status: 0 when every point succeeds, 1 when any point fails (or an
//! output file cannot be written), 2 on configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use saddlenode::sweep::{run_sweep, SweepConfig};
use saddlenode::Error;

#[derive(Parser, Debug)]
#[command(name = "saddlenode", version, about = "Sweep the well-depth parameter of the saddle-node Hamiltonian")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Flat `key = value` config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    mu: Option<f64>,

    /// Well-depth parameter; repeat for several points.
    #[arg(long, conflicts_with = "alpha_range")]
    alpha: Vec<f64>,

    /// Evenly spaced alpha values, endpoints included.
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "COUNT"])]
    alpha_range: Option<Vec<String>>,

    /// Position window.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    domain: Option<Vec<f64>>,

    /// Momentum window for Wigner grids.
    #[arg(long, num_args = 2, value_names = ["C", "D"])]
    pdomain: Option<Vec<f64>>,

    /// Total grid points, endpoints included.
    #[arg(long)]
    n_points: Option<usize>,

    /// Momentum grid points (defaults to --n-points).
    #[arg(long)]
    p_points: Option<usize>,

    /// Number of eigenstates per alpha.
    #[arg(long)]
    n_states: Option<usize>,

    #[arg(long)]
    hbar: Option<f64>,

    #[arg(long)]
    mass: Option<f64>,

    /// Comma-separated subset of spectrum,observables,wigner,probability,contours (or `all`).
    #[arg(long)]
    outputs: Option<String>,

    /// Extra classical energy for the contour files; repeatable.
    #[arg(long)]
    contour_energy: Vec<f64>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Stop at the first failing point.
    #[arg(long)]
    fail_fast: bool,

    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut kv = Vec::new();
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        if let Some(mu) = self.mu {
            kv.push(("mu", mu.to_string()));
        }
        for a in &self.alpha {
            kv.push(("alpha", a.to_string()));
        }
        if let Some(r) = &self.alpha_range {
            kv.push(("alpha_range", r.join(" ")));
        }
        if let Some(d) = &self.domain {
            kv.push(("domain", join(d)));
        }
        if let Some(d) = &self.pdomain {
            kv.push(("pdomain", join(d)));
        }
        if let Some(n) = self.n_points {
            kv.push(("n_points", n.to_string()));
        }
        if let Some(n) = self.p_points {
            kv.push(("p_points", n.to_string()));
        }
        if let Some(n) = self.n_states {
            kv.push(("n_states", n.to_string()));
        }
        if let Some(h) = self.hbar {
            kv.push(("hbar", h.to_string()));
        }
        if let Some(m) = self.mass {
            kv.push(("mass", m.to_string()));
        }
        if let Some(o) = &self.outputs {
            kv.push(("outputs", o.clone()));
        }
        for e in &self.contour_energy {
            kv.push(("contour_energy", e.to_string()));
        }
        if let Some(out) = &self.out {
            kv.push(("out", out.display().to_string()));
        }
        if self.fail_fast {
            kv.push(("fail_fast", "true".to_string()));
        }
        if let Some(t) = self.threads {
            kv.push(("threads", t.to_string()));
        }
        kv
    }

    fn config(&self) -> saddlenode::Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => SweepConfig::from_file(path)?,
            None => SweepConfig::default(),
        };
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        cfg.apply_overrides(self.overrides())?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("saddlenode: {e}");
            return ExitCode::from(2);
        }
    };
    match run_sweep(&cfg) {
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("saddlenode: point failed: {f}");
            }
            println!(
                "{} records written to {} ({} failed points)",
                outcome.records.len(),
                cfg.output_dir.display(),
                outcome.failures.len()
            );
            if outcome.is_success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ (Error::Config(_) | Error::Parse { .. })) => {
            eprintln!("saddlenode: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("saddlenode: {e}");
            ExitCode::from(1)
        }
    }
}
