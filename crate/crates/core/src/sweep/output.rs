//! File formats written by the sweep.
//!
//! Tabular files are CSV preceded by `# key=value` metadata lines. Wigner grids
//! use the same metadata prelude followed by one whitespace-separated row of
//! `ρ(x_j, p_k)` per `x_j` (columns run over `p_k`). Floats are printed in
//! shortest round-trip form, so reading a file back recovers every value bit
//! for bit.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::classical::{potential, ModelParams};
use crate::discretize::make_grid;
use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};
use crate::wigner::{make_momentum_grid, nonreactive_probability, WignerField};

use super::SweepRecord;

pub const WIGNER_FORMAT: &str = "saddlenode-wigner 1";

pub const RECORD_COLUMNS: [&str; 9] = [
    "alpha",
    "depth",
    "state_index",
    "energy",
    "mean_x",
    "sigma_x",
    "nonreactive_prob",
    "boundary_amplitude",
    "harmonic_estimate",
];

/// Shortest round-trip decimal, switching to exponent form for very small or
/// very large magnitudes.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Ordered `key=value` metadata written as comment lines.
#[derive(Debug, Clone, Default)]
pub struct Metadata(Vec<(String, String)>);

impl Metadata {
    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push_f64(&mut self, key: &str, value: f64) -> &mut Self {
        self.push(key, fmt_f64(value))
    }

    pub fn params(&mut self, p: &ModelParams) -> &mut Self {
        self.push("mu", p.mu())
            .push("alpha", p.alpha())
            .push("hbar", p.hbar())
            .push("mass", p.mass())
    }

    fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (k, v) in &self.0 {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    };
    Error::io(path, source)
}

fn write_csv<I>(path: &Path, meta: &Metadata, header: &[String], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = create(path)?;
    meta.write_to(&mut out).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn write_records(path: &Path, meta: &Metadata, records: &[SweepRecord]) -> Result<()> {
    let header: Vec<String> = RECORD_COLUMNS.iter().map(|s| s.to_string()).collect();
    let rows = records.iter().map(|r| {
        vec![
            fmt_f64(r.alpha),
            fmt_f64(r.depth),
            r.state_index.to_string(),
            fmt_f64(r.energy),
            fmt_f64(r.mean_x),
            fmt_f64(r.sigma_x),
            opt(r.nonreactive_prob),
            fmt_f64(r.boundary_amplitude),
            opt(r.harmonic_estimate),
        ]
    });
    write_csv(path, meta, &header, rows)
}

/// Grid abscissae, the potential, and one `psi_n` column per state.
pub fn write_spectrum(path: &Path, meta: &Metadata, spectrum: &Spectrum) -> Result<()> {
    let mut meta = meta.clone();
    for s in spectrum.states() {
        meta.push_f64(&format!("energy_{}", s.index()), s.energy());
    }
    let mut header = vec!["x".to_string(), "potential".to_string()];
    header.extend(spectrum.states().iter().map(|s| format!("psi_{}", s.index())));
    let grid = *spectrum.grid();
    let params = spectrum.params().copied();
    let rows = grid.points().enumerate().map(|(j, x)| {
        let mut row = vec![fmt_f64(x)];
        row.push(params.map(|p| fmt_f64(potential(&p, x))).unwrap_or_default());
        row.extend(spectrum.states().iter().map(|s| fmt_f64(s.values()[j])));
        row
    });
    write_csv(path, &meta, &header, rows)
}

/// One level set of the classical Hamiltonian.
pub struct Contour {
    pub state_index: Option<usize>,
    pub energy: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn write_contours(path: &Path, meta: &Metadata, contours: &[Contour]) -> Result<()> {
    let header: Vec<String> = ["state_index", "energy", "x", "p"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows = contours.iter().flat_map(|c| {
        c.points.iter().map(move |&(x, p)| {
            vec![
                c.state_index.map(|n| n.to_string()).unwrap_or_default(),
                fmt_f64(c.energy),
                fmt_f64(x),
                fmt_f64(p),
            ]
        })
    });
    write_csv(path, meta, &header, rows)
}

/// Write a Wigner grid with enough metadata to rebuild the field, its grids,
/// the model parameters and the classical overlay at `e = Eₙ`.
pub fn emit_wigner_grid(w: &WignerField, path: &Path) -> Result<()> {
    let params = w.params().ok_or_else(|| {
        Error::Contract("Wigner field has no model parameters attached".into())
    })?;
    let mut meta = Metadata::default();
    meta.push("format", WIGNER_FORMAT)
        .params(params)
        .push("state_index", w.state_index())
        .push_f64("energy", w.energy())
        .push("x_min", w.x_grid().a())
        .push("x_max", w.x_grid().b())
        .push("x_points", w.x_grid().len())
        .push("p_min", w.p_grid().c())
        .push("p_max", w.p_grid().d())
        .push("p_points", w.p_grid().len())
        .push_f64("nonreactive_probability", nonreactive_probability(w, params))
        .push("layout", "rows=x columns=p");
    let mut out = create(path)?;
    let io = |e| Error::io(path, e);
    meta.write_to(&mut out).map_err(io)?;
    let mut line = String::new();
    for j in 0..w.x_grid().len() {
        line.clear();
        for (k, v) in w.row(j).iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            line.push_str(&fmt_f64(*v));
        }
        line.push('\n');
        out.write_all(line.as_bytes()).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// A Wigner grid file read back from disk.
#[derive(Debug, Clone)]
pub struct WignerFile {
    pub field: WignerField,
    pub params: ModelParams,
    /// The nonreactive probability stored in the header.
    pub nonreactive_probability: f64,
    pub metadata: BTreeMap<String, String>,
}

pub fn read_wigner_grid(path: &Path) -> Result<WignerFile> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut meta = BTreeMap::new();
    let mut values = Vec::new();
    let mut rows = 0usize;
    let mut width: Option<usize> = None;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if let Some(rest) = line.strip_prefix('#') {
            let Some((k, v)) = rest.trim().split_once('=') else {
                return Err(parse_err(i + 1, format!("bad header line '{line}'")));
            };
            meta.insert(k.trim().to_string(), v.trim().to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let before = values.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(i + 1, format!("bad value '{tok}'")))?;
            values.push(v);
        }
        let n = values.len() - before;
        match width {
            None => width = Some(n),
            Some(w) if w != n => {
                return Err(parse_err(i + 1, format!("row has {n} values, expected {w}")))
            }
            _ => {}
        }
        rows += 1;
    }

    let get = |key: &str| -> Result<&String> {
        meta.get(key)
            .ok_or_else(|| parse_err(0, format!("missing header key '{key}'")))
    };
    let num = |key: &str| -> Result<f64> {
        get(key)?
            .parse()
            .map_err(|_| parse_err(0, format!("header key '{key}' is not a number")))
    };
    let count = |key: &str| -> Result<usize> {
        get(key)?
            .parse()
            .map_err(|_| parse_err(0, format!("header key '{key}' is not an integer")))
    };
    if get("format")? != WIGNER_FORMAT {
        return Err(parse_err(0, format!("unsupported format '{}'", get("format")?)));
    }
    let params = ModelParams::with_units(num("mu")?, num("alpha")?, num("hbar")?, num("mass")?)?;
    let xg = make_grid(num("x_min")?, num("x_max")?, count("x_points")?)?;
    let pg = make_momentum_grid(num("p_min")?, num("p_max")?, count("p_points")?)?;
    if rows != xg.len() || width.unwrap_or(0) != pg.len() {
        return Err(parse_err(
            0,
            format!(
                "grid is {rows}x{}, header says {}x{}",
                width.unwrap_or(0),
                xg.len(),
                pg.len()
            ),
        ));
    }
    let field = WignerField::from_parts(
        values,
        count("state_index")?,
        num("energy")?,
        params.hbar(),
        Some(params),
        xg,
        pg,
    )?;
    Ok(WignerFile {
        field,
        params,
        nonreactive_probability: num("nonreactive_probability")?,
        metadata: meta,
    })
}
