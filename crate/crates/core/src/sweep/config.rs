//! Sweep configuration: flat `key = value` files plus flag overrides.
//!
//! Repeatable keys (`alpha`, `contour_energy`) accumulate one value per line.
//! Overrides replace a repeatable key's whole list the first time they set it.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputKind {
    Spectrum,
    Observables,
    Wigner,
    Probability,
    Contours,
}

impl OutputKind {
    pub const ALL: [OutputKind; 5] = [
        OutputKind::Spectrum,
        OutputKind::Observables,
        OutputKind::Wigner,
        OutputKind::Probability,
        OutputKind::Contours,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Spectrum => "spectrum",
            OutputKind::Observables => "observables",
            OutputKind::Wigner => "wigner",
            OutputKind::Probability => "probability",
            OutputKind::Contours => "contours",
        }
    }
}

impl fmt::Display for OutputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OutputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OutputKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config(format!("unknown output kind '{s}'")))
    }
}

/// Parse a comma- or whitespace-separated list of output kinds; `all` selects
/// every kind.
pub fn parse_outputs(s: &str) -> Result<BTreeSet<OutputKind>> {
    let mut set = BTreeSet::new();
    for item in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        if item == "all" {
            set.extend(OutputKind::ALL);
        } else {
            set.insert(item.parse()?);
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    List(Vec<f64>),
    /// `count` evenly spaced values from `start` to `stop` inclusive.
    Range { start: f64, stop: f64, count: usize },
}

impl AlphaSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            AlphaSpec::List(ref v) => v.clone(),
            AlphaSpec::Range { start, stop, count } => {
                if count == 1 {
                    return vec![start];
                }
                let step = (stop - start) / (count - 1) as f64;
                (0..count)
                    .map(|i| if i + 1 == count { stop } else { start + i as f64 * step })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mu: f64,
    pub alphas: AlphaSpec,
    pub domain: (f64, f64),
    pub momentum_domain: (f64, f64),
    pub n_points: usize,
    /// Momentum grid size; `None` uses `n_points`.
    pub p_points: Option<usize>,
    pub n_states: usize,
    pub hbar: f64,
    pub mass: f64,
    pub outputs: BTreeSet<OutputKind>,
    pub output_dir: PathBuf,
    /// Extra classical energies whose level sets go into the contour files.
    pub contour_energies: Vec<f64>,
    pub fail_fast: bool,
    /// Worker count; `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            mu: 4.0,
            alphas: AlphaSpec::List(vec![1.0, 2.0, 5.0]),
            domain: (-1.0, 9.0),
            momentum_domain: (-6.0, 6.0),
            n_points: 599,
            p_points: None,
            n_states: 5,
            hbar: 1.0,
            mass: 1.0,
            outputs: [
                OutputKind::Spectrum,
                OutputKind::Observables,
                OutputKind::Probability,
                OutputKind::Contours,
            ]
            .into_iter()
            .collect(),
            output_dir: PathBuf::from("out"),
            contour_energies: vec![2.0, -2.0, -5.0],
            fail_fast: false,
            threads: None,
        }
    }
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::config(format!("{key}: expected a number, got '{s}'")))
}

fn parse_usize(key: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::config(format!("{key}: expected a non-negative integer, got '{s}'")))
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(Error::config(format!("{key}: expected a boolean, got '{other}'"))),
    }
}

fn parse_pair(key: &str, s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    match parts.as_slice() {
        [a, b] => Ok((parse_f64(key, a)?, parse_f64(key, b)?)),
        _ => Err(Error::config(format!("{key}: expected two numbers, got '{s}'"))),
    }
}

/// Tracks which repeatable keys a layer of settings has already reset.
#[derive(Default)]
struct Layer {
    alpha_list: Option<Vec<f64>>,
    contour_energies: Option<Vec<f64>>,
}

impl SweepConfig {
    pub fn point_count(&self) -> usize {
        self.p_points.unwrap_or(self.n_points)
    }

    pub fn alpha_values(&self) -> Vec<f64> {
        self.alphas.values()
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.contains(&kind)
    }

    /// Defaults overlaid with a config file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text, path)?;
        Ok(cfg)
    }

    /// Overlay `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, origin: &Path) -> Result<()> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line: i + 1,
                    message: format!("expected 'key = value', got '{line}'"),
                });
            };
            pairs.push((i + 1, key.trim().to_string(), value.trim().to_string()));
        }
        let mut layer = Layer::default();
        let mut saw_list = false;
        let mut saw_range = false;
        for (line, key, value) in pairs {
            match key.as_str() {
                "alpha" => saw_list = true,
                "alpha_range" => saw_range = true,
                _ => {}
            }
            if saw_list && saw_range {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line,
                    message: "alpha and alpha_range are mutually exclusive".into(),
                });
            }
            self.set(&mut layer, &key, &value).map_err(|e| Error::Parse {
                path: origin.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
        }
        self.finish(layer);
        Ok(())
    }

    /// Overlay `(key, value)` pairs, e.g. from command-line flags.
    pub fn apply_overrides<'a, I>(&mut self, pairs: I) -> Result<()>
    where
        I: IntoIterator<Item = (&'a str, String)>,
    {
        let mut layer = Layer::default();
        for (key, value) in pairs {
            self.set(&mut layer, key, &value)?;
        }
        self.finish(layer);
        Ok(())
    }

    fn finish(&mut self, layer: Layer) {
        if let Some(list) = layer.alpha_list {
            self.alphas = AlphaSpec::List(list);
        }
        if let Some(list) = layer.contour_energies {
            self.contour_energies = list;
        }
    }

    fn set(&mut self, layer: &mut Layer, key: &str, value: &str) -> Result<()> {
        match key {
            "mu" => self.mu = parse_f64(key, value)?,
            "alpha" => {
                let list = layer.alpha_list.get_or_insert_with(Vec::new);
                for v in value.split_whitespace() {
                    list.push(parse_f64(key, v)?);
                }
            }
            "alpha_range" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                let [start, stop, count] = parts.as_slice() else {
                    return Err(Error::config(format!(
                        "alpha_range: expected START STOP COUNT, got '{value}'"
                    )));
                };
                layer.alpha_list = None;
                self.alphas = AlphaSpec::Range {
                    start: parse_f64(key, start)?,
                    stop: parse_f64(key, stop)?,
                    count: parse_usize(key, count)?,
                };
            }
            "domain" => self.domain = parse_pair(key, value)?,
            "pdomain" => self.momentum_domain = parse_pair(key, value)?,
            "n_points" => self.n_points = parse_usize(key, value)?,
            "p_points" => self.p_points = Some(parse_usize(key, value)?),
            "n_states" => self.n_states = parse_usize(key, value)?,
            "hbar" => self.hbar = parse_f64(key, value)?,
            "mass" => self.mass = parse_f64(key, value)?,
            "outputs" => self.outputs = parse_outputs(value)?,
            "out" | "output_dir" => self.output_dir = PathBuf::from(value),
            "contour_energy" => {
                let list = layer.contour_energies.get_or_insert_with(Vec::new);
                for v in value.split_whitespace() {
                    list.push(parse_f64(key, v)?);
                }
            }
            "fail_fast" => self.fail_fast = parse_bool(key, value)?,
            "threads" => {
                let t = parse_usize(key, value)?;
                self.threads = if t == 0 { None } else { Some(t) };
            }
            other => return Err(Error::config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu >= 0.0) {
            return Err(Error::config(format!("mu must be >= 0, got {}", self.mu)));
        }
        if let AlphaSpec::Range { count, start, stop } = self.alphas {
            if count == 0 {
                return Err(Error::config("alpha_range count must be >= 1"));
            }
            if !(start.is_finite() && stop.is_finite()) {
                return Err(Error::config("alpha_range bounds must be finite"));
            }
        }
        let alphas = self.alpha_values();
        if alphas.is_empty() {
            return Err(Error::config("no alpha values given"));
        }
        if let Some(a) = alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::config(format!("alpha values must be > 0, got {a}")));
        }
        let mut sorted = alphas.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("alpha values must be distinct"));
        }
        if self.n_states == 0 {
            return Err(Error::config("n_states must be >= 1"));
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0 && self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::config("hbar and mass must be positive"));
        }
        let x = crate::discretize::make_grid(self.domain.0, self.domain.1, self.n_points)?;
        crate::wigner::make_momentum_grid(
            self.momentum_domain.0,
            self.momentum_domain.1,
            self.point_count(),
        )?;
        if self.n_states > x.interior_len() {
            return Err(Error::config(format!(
                "n_states = {} exceeds the {} interior grid points",
                self.n_states,
                x.interior_len()
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads must be >= 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_figure_captions() {
        let c = SweepConfig::default();
        assert_eq!(c.mu, 4.0);
        assert_eq!(c.domain, (-1.0, 9.0));
        assert_eq!(c.momentum_domain, (-6.0, 6.0));
        assert_eq!(c.n_points, 599);
        assert_eq!(c.n_states, 5);
        assert_eq!(c.alpha_values(), vec![1.0, 2.0, 5.0]);
        c.validate().unwrap();
    }

    #[test]
    fn range_endpoints_exact() {
        let r = AlphaSpec::Range { start: 1.0, stop: 5.0, count: 20 };
        let v = r.values();
        assert_eq!(v.len(), 20);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[19], 5.0);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(AlphaSpec::Range { start: 2.0, stop: 3.0, count: 1 }.values(), vec![2.0]);
    }

    #[test]
    fn file_with_repeated_keys() {
        let text = "# comment\nmu = 3\nalpha = 1\nalpha = 2.5   # trailing\nalpha = 4\n\
                    domain = -2 10\noutputs = spectrum, wigner\nfail_fast = yes\n";
        let mut c = SweepConfig::default();
        c.apply_text(text, Path::new("t.cfg")).unwrap();
        assert_eq!(c.mu, 3.0);
        assert_eq!(c.alpha_values(), vec![1.0, 2.5, 4.0]);
        assert_eq!(c.domain, (-2.0, 10.0));
        assert!(c.wants(OutputKind::Wigner) && c.wants(OutputKind::Spectrum));
        assert!(!c.wants(OutputKind::Contours));
        assert!(c.fail_fast);
    }

    #[test]
    fn overrides_replace_lists() {
        let mut c = SweepConfig::default();
        c.apply_text("alpha = 1\nalpha = 2\nn_points = 301\n", Path::new("t")).unwrap();
        c.apply_overrides([("alpha", "3".to_string()), ("alpha", "4".to_string())]).unwrap();
        assert_eq!(c.alpha_values(), vec![3.0, 4.0]);
        assert_eq!(c.n_points, 301);
        c.apply_overrides([("alpha_range", "1 5 3".to_string())]).unwrap();
        assert_eq!(c.alpha_values(), vec![1.0, 3.0, 5.0]);
    }

    #[test]
    fn bad_input_reports_line() {
        let mut c = SweepConfig::default();
        let err = c.apply_text("mu = 4\nbogus = 1\n", Path::new("x.cfg")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = c.apply_text("mu 4\n", Path::new("x.cfg")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = c
            .apply_text("alpha = 1\nalpha_range = 1 2 3\n", Path::new("x.cfg"))
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_outputs("spectrum,nope").is_err());
        assert_eq!(parse_outputs("all").unwrap().len(), 5);
    }

    #[test]
    fn validation() {
        let mut c = SweepConfig::default();
        c.alphas = AlphaSpec::List(vec![1.0, -1.0]);
        assert!(c.validate().is_err());
        let mut c = SweepConfig::default();
        c.alphas = AlphaSpec::Range { start: 1.0, stop: 2.0, count: 0 };
        assert!(c.validate().is_err());
        let mut c = SweepConfig::default();
        c.n_states = 0;
        assert!(c.validate().is_err());
        let mut c = SweepConfig::default();
        c.n_points = 4;
        assert!(c.validate().is_err());
        let mut c = SweepConfig::default();
        c.n_points = 10;
        c.n_states = 9;
        assert!(c.validate().is_err());
        let mut c = SweepConfig::default();
        c.alphas = AlphaSpec::List(vec![]);
        assert!(c.validate().is_err());
    }
}
