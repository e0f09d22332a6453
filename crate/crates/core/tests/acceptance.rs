//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use saddlenode::classical::depth;
use saddlenode::discretize::{assemble, make_grid, DiscreteHamiltonian};
use saddlenode::eigensolve::{solve, Spectrum};
use saddlenode::observables::observe;
use saddlenode::sweep::output::read_wigner_grid;
use saddlenode::sweep::{run_sweep, AlphaSpec, OutputKind, SweepConfig};
use saddlenode::wigner::{
    make_momentum_grid, marginal_x, nonreactive_probability, spectrum_wigner, wigner_transform,
};
use saddlenode::ModelParams;

const MU: f64 = 4.0;

struct Report {
    failed: usize,
}

impl Report {
    fn check(&mut self, id: &str, name: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {name}: {detail}");
        if !ok {
            self.failed += 1;
        }
    }
}

fn reference_grid() -> saddlenode::SpatialGrid {
    make_grid(-1.0, 9.0, 599).unwrap()
}

fn saddle_spectrum(alpha: f64, k: usize) -> (ModelParams, Spectrum) {
    let p = ModelParams::new(MU, alpha).unwrap();
    (p, solve(&assemble(&p, &reference_grid()), k).unwrap())
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + i as f64 * (b - a) / (n - 1) as f64 })
        .collect()
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let got: Vec<f64> = [1.0, 2.0, 5.0]
        .iter()
        .map(|&a| depth(&ModelParams::new(MU, a).unwrap()))
        .collect();
    let elapsed = start.elapsed();
    let printed: Vec<String> = got.iter().map(|d| format!("{d:.2}")).collect();
    let ok = printed == ["10.67", "2.67", "0.43"] && elapsed < Duration::from_millis(1);
    r.check("1", "depth values", ok, format!("{printed:?} in {elapsed:?}"));
}

fn criterion_2(r: &mut Report) {
    let centre = 2.0;
    let omega: f64 = 1.0;
    let g = make_grid(centre - 10.0, centre + 10.0, 1201).unwrap();
    let h = DiscreteHamiltonian::from_potential(&g, 1.0, 1.0, |x| {
        0.5 * omega * omega * (x - centre) * (x - centre)
    })
    .unwrap();
    let e = solve(&h, 5).unwrap().energies();
    let osc_err = (0..5)
        .map(|n| (e[n] - omega * (n as f64 + 0.5)).abs())
        .fold(0.0f64, f64::max);

    let g = make_grid(0.0, 1.0, 1201).unwrap();
    let h = DiscreteHamiltonian::from_potential(&g, 1.0, 1.0, |_| 0.0).unwrap();
    let e = solve(&h, 3).unwrap().energies();
    let box_err = (0..3)
        .map(|i| {
            let n = (i + 1) as f64;
            let exact = n * n * PI * PI / 2.0;
            ((e[i] - exact) / exact).abs()
        })
        .fold(0.0f64, f64::max);
    r.check(
        "2",
        "analytic oracles",
        osc_err <= 1e-3 && box_err <= 1e-3,
        format!("oscillator max |dE| = {osc_err:.2e} (tol 1e-3), box max rel err = {box_err:.2e} (tol 1e-3)"),
    );
}

fn criterion_3(r: &mut Report) {
    let (_, spec) = saddle_spectrum(1.0, 6);
    let counts: Vec<usize> = spec.states().iter().map(|s| s.sign_changes(0.0)).collect();
    let ok = counts.iter().enumerate().all(|(n, &c)| c == n);
    r.check("3", "Sturm oscillation (alpha=1, n=0..5)", ok, format!("sign changes {counts:?}"));
}

fn criterion_4(r: &mut Report) {
    let start = Instant::now();
    let alphas = linspace(1.0, 5.0, 20);
    // rows ordered by increasing alpha, i.e. decreasing depth
    let mut energy = vec![Vec::new(); 3];
    let mut mean = vec![Vec::new(); 3];
    let mut between = true;
    let mut width_order = true;
    for &alpha in &alphas {
        let (p, spec) = saddle_spectrum(alpha, 3);
        let g = reference_grid();
        let obs: Vec<_> = spec.states().iter().map(|s| observe(s, &g, &p).unwrap()).collect();
        for n in 0..3 {
            energy[n].push(spec.states()[n].energy());
            mean[n].push(obs[n].mean_x);
            between &= obs[n].mean_x > 0.0 && obs[n].mean_x < p.centre_position();
        }
        width_order &= obs[0].sigma_x < obs[1].sigma_x && obs[1].sigma_x < obs[2].sigma_x;
    }
    let elapsed = start.elapsed();

    let energy_ok: Vec<bool> = energy.iter().map(|e| e.windows(2).all(|w| w[1] > w[0])).collect();
    let mean_ok: Vec<bool> = mean.iter().map(|m| m.windows(2).all(|w| w[1] < w[0])).collect();
    let violations: Vec<String> = (0..3)
        .flat_map(|n| {
            let m = &mean[n];
            let alphas = &alphas;
            (1..m.len())
                .filter(move |&i| m[i] >= m[i - 1])
                .map(move |i| format!("n={n} alpha {:.3}->{:.3}: {:.4}->{:.4}", alphas[i - 1], alphas[i], m[i - 1], m[i]))
        })
        .collect();

    r.check(
        "4a",
        "E_n strictly decreasing in D (n=0..2)",
        energy_ok.iter().all(|&b| b),
        format!("per state {energy_ok:?}"),
    );
    r.check(
        "4b",
        "<x>_n increasing in D (n=0..2)",
        mean_ok.iter().all(|&b| b),
        if violations.is_empty() {
            "monotone".to_string()
        } else {
            format!("violations: {}", violations.join("; "))
        },
    );
    r.check("4c", "0 < <x>_n < x_centre", between, String::new());
    r.check("4d", "sigma_0 < sigma_1 < sigma_2 at fixed D", width_order, String::new());
    r.check(
        "4e",
        "monotonicity suite runtime",
        elapsed < Duration::from_secs(60),
        format!("{elapsed:?} (limit 60 s)"),
    );
}

fn criterion_5(r: &mut Report) {
    let pts: Vec<(f64, f64)> = linspace(1.0, 2.0, 11)
        .into_iter()
        .map(|a| {
            let (p, spec) = saddle_spectrum(a, 1);
            (depth(&p), spec.states()[0].energy())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    r.check(
        "5",
        "linear E_0-D slope over alpha in [1,2]",
        (slope + 1.0).abs() <= 0.15,
        format!("slope = {slope:.4} (target -1 +/- 0.15)"),
    );
}

fn criterion_6(r: &mut Report) {
    // analytic Gaussian
    let g = make_grid(-10.0, 10.0, 1201).unwrap();
    let h = DiscreteHamiltonian::from_potential(&g, 1.0, 1.0, |x| 0.5 * x * x).unwrap();
    let spec = solve(&h, 1).unwrap();
    let pg = make_momentum_grid(-3.0, 3.0, 121).unwrap();
    let w = wigner_transform(&spec.states()[0], &g, &pg, 1.0).unwrap();
    let wide = make_momentum_grid(-6.0, 6.0, 599).unwrap();
    let harmonic = wigner_transform(&spec.states()[0], &g, &wide, 1.0).unwrap();
    let harmonic_norm = (harmonic.total() - 1.0).abs();
    let harmonic_marginal = marginal_x(&harmonic)
        .iter()
        .zip(spec.states()[0].values())
        .fold(0.0f64, |a, (m, v)| a.max((m - v * v).abs()));
    let mut gauss_err = 0.0f64;
    for (j, x) in g.points().enumerate() {
        if x.abs() <= 3.0 + 1e-9 {
            for (k, p) in pg.points().enumerate() {
                gauss_err = gauss_err.max((w.get(j, k) - (-(x * x + p * p)).exp() / PI).abs());
            }
        }
    }

    // structural properties on the reference saddle-node fields
    let xg = reference_grid();
    let pg = make_momentum_grid(-6.0, 6.0, 599).unwrap();
    let mut symmetric = true;
    let mut norm_err = (0.0f64, String::new());
    let mut marginal_err = (0.0f64, String::new());
    let mut bound_excess = f64::NEG_INFINITY;
    let mut slowest = Duration::ZERO;
    for alpha in [1.0, 2.0, 5.0] {
        let (_, spec) = saddle_spectrum(alpha, 5);
        for n in 0..5 {
            let start = Instant::now();
            let w = spectrum_wigner(&spec, n, &pg).unwrap();
            slowest = slowest.max(start.elapsed());
            for j in 0..xg.len() {
                let row = w.row(j);
                symmetric &= (0..pg.len()).all(|k| row[k].to_bits() == row[pg.len() - 1 - k].to_bits());
            }
            let tag = format!("alpha={alpha} n={n}");
            let e = (w.total() - 1.0).abs();
            if e > norm_err.0 {
                norm_err = (e, tag.clone());
            }
            let psi = spec.states()[n].values();
            for (j, (m, v)) in marginal_x(&w).iter().zip(psi).enumerate() {
                let e = (m - v * v).abs();
                if e > marginal_err.0 {
                    marginal_err = (e, format!("{tag} x={:.3}", xg.point(j + 1)));
                }
            }
            let peak = w.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
            bound_excess = bound_excess.max(peak - 1.0 / PI);
        }
    }
    r.check("6a", "harmonic ground state vs analytic", gauss_err <= 1e-3, format!("max |drho| = {gauss_err:.2e} (tol 1e-3)"));
    r.check("6b", "p-symmetry bit-exact", symmetric, "alpha in {1,2,5}, n=0..4".into());
    r.check(
        "6c",
        "normalization, harmonic field",
        harmonic_norm <= 1e-2,
        format!("|sum rho dx dp - 1| = {harmonic_norm:.2e} (tol 1e-2)"),
    );
    r.check(
        "6d",
        "x-marginal vs psi^2, harmonic field",
        harmonic_marginal <= 1e-2,
        format!("max abs err = {harmonic_marginal:.2e} (tol 1e-2)"),
    );
    r.check(
        "6e",
        "normalization, saddle-node fields",
        norm_err.0 <= 1e-2,
        format!("worst {:.2e} at {} (tol 1e-2)", norm_err.0, norm_err.1),
    );
    r.check(
        "6f",
        "x-marginal vs psi^2, saddle-node fields",
        marginal_err.0 <= 1e-2,
        format!("worst {:.2e} at {} (tol 1e-2)", marginal_err.0, marginal_err.1),
    );
    r.check("6g", "|rho| <= 1/(pi hbar) + 1e-6", bound_excess <= 1e-6, format!("max |rho| - 1/pi = {bound_excess:.2e}"));
    r.check("6h", "N=599 field runtime", slowest < Duration::from_secs(10), format!("slowest field {slowest:?}"));
}

fn criterion_7(r: &mut Report) {
    let xg = reference_grid();
    let pg = make_momentum_grid(-6.0, 6.0, 599).unwrap();
    let probs = |alpha: f64| -> Vec<f64> {
        let (p, spec) = saddle_spectrum(alpha, 5);
        assert_eq!(spec.grid(), &xg);
        (0..5)
            .map(|n| nonreactive_probability(&spectrum_wigner(&spec, n, &pg).unwrap(), &p))
            .collect()
    };
    let deep = probs(1.0);
    let shallow = probs(5.0);
    r.check("7a", "P(alpha=1, n=0) >= 0.9", deep[0] >= 0.9, format!("{:.4}", deep[0]));
    r.check(
        "7b",
        "P(alpha=5, n=1..4) <= 0.2",
        shallow[1..].iter().all(|&v| v <= 0.2),
        format!("{:.4?}", &shallow[1..]),
    );
    r.check(
        "7c",
        "P decreasing in n at alpha=1",
        deep.windows(2).all(|w| w[1] < w[0]),
        format!("{deep:.4?}"),
    );
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    entries.sort();
    entries
}

fn criteria_8_9(r: &mut Report) {
    let serial = tempfile::tempdir().unwrap();
    let parallel = tempfile::tempdir().unwrap();
    let mut cfg = SweepConfig {
        alphas: AlphaSpec::List(vec![1.0, 2.0, 5.0]),
        outputs: OutputKind::ALL.into_iter().collect(),
        output_dir: serial.path().to_path_buf(),
        threads: Some(1),
        ..SweepConfig::default()
    };
    let a = run_sweep(&cfg).unwrap();
    cfg.output_dir = parallel.path().to_path_buf();
    cfg.threads = None;
    let b = run_sweep(&cfg).unwrap();
    let (ta, tb) = (tree(serial.path()), tree(parallel.path()));
    let depths: Vec<String> = a.records.iter().step_by(5).map(|r| format!("{:.2}", r.depth)).collect();
    r.check(
        "8",
        "serial vs parallel byte-identical",
        a.is_success() && b.is_success() && a.records.len() == 15 && ta == tb,
        format!("{} files, {} records, depths {depths:?}", ta.len(), a.records.len()),
    );

    let mut worst = 0.0f64;
    let mut files = 0;
    let mut ok = true;
    for (name, _) in &ta {
        if !name.starts_with("wigner_") {
            continue;
        }
        files += 1;
        match read_wigner_grid(&serial.path().join(name)) {
            Ok(f) => {
                let recomputed = nonreactive_probability(&f.field, &f.params);
                worst = worst.max((recomputed - f.nonreactive_probability).abs());
            }
            Err(_) => ok = false,
        }
    }
    r.check(
        "9",
        "Wigner file round-trip",
        ok && files == 15 && worst <= 1e-12,
        format!("{files} files, max |dP| = {worst:.1e} (tol 1e-12)"),
    );
}

fn main() {
    let mut report = Report { failed: 0 };
    criterion_1(&mut report);
    criterion_2(&mut report);
    criterion_3(&mut report);
    criterion_4(&mut report);
    criterion_5(&mut report);
    criterion_6(&mut report);
    criterion_7(&mut report);
    criteria_8_9(&mut report);
    if report.failed > 0 {
        println!("{} acceptance check(s) failed", report.failed);
        std::process::exit(1);
    }
    println!("all acceptance checks passed");
}
