//! Flat `key = value` run configuration.
//!
//! ```text
//! # full default sweep
//! n = 512
//! ratios = 0.125,0.25,0.375,0.5,0.625,0.75,0.875,1
//! trials = 40
//! methods = LS,T-L1,F-L1,L1-L1
//! source = dual_sparse
//! ```
//!
//! Unknown and repeated keys are rejected. Every key has a default, so an
//! empty file is a valid configuration.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::{Lambda2Scale, SignalKind, SignalSource, TrialSpec};

/// Everything needed to run a sweep from the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: TrialSpec,
    pub source: SignalKind,
    pub k_time: usize,
    pub k_freq: usize,
    pub burst_width: usize,
    pub noise_floor: f64,
    /// Signal file for `source = file`.
    pub input: Option<PathBuf>,
    pub offset: usize,
    pub out_csv: Option<PathBuf>,
    /// Emit `mean_seconds` in the CSV (makes the output run-dependent).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let src = SignalSource::synthetic(SignalKind::SyntheticDualSparse, 0);
        Self {
            spec: TrialSpec::default(),
            source: src.kind,
            k_time: src.k_time,
            k_freq: src.k_freq,
            burst_width: src.burst_width,
            noise_floor: src.noise_floor,
            input: None,
            offset: 0,
            out_csv: None,
            timing: false,
        }
    }
}

const KEYS: &[&str] = &[
    "n",
    "ratios",
    "trials",
    "epsilon_frac",
    "lambda2",
    "lambda2_scale",
    "methods",
    "base_seed",
    "source",
    "k_time",
    "k_freq",
    "burst_width",
    "noise_floor",
    "input",
    "offset",
    "out_csv",
    "timing",
    "rho",
    "max_iters",
    "abs_tol",
    "rel_tol",
    "over_relaxation",
    "adaptive_rho",
];

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("line {line}: invalid value '{value}' for '{key}'")))
}

fn parse_list<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|v| parse_value(key, v.trim(), line))
        .collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line}: expected 'key = value'")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {line}: unknown key '{key}'")));
            }
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {line}: duplicate key '{key}'")));
            }
            cfg.set(key, value, line)?;
        }
        Ok(cfg)
    }

    /// Applies one `key = value` assignment (used by both the file parser
    /// and command-line overrides).
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let s = &mut self.spec;
        match key {
            "n" => s.n = parse_value(key, value, line)?,
            "ratios" => s.ratios = parse_list(key, value, line)?,
            "trials" => s.trial_count = parse_value(key, value, line)?,
            "epsilon_frac" => s.epsilon_frac = parse_value(key, value, line)?,
            "lambda2" => s.lambda2 = parse_value(key, value, line)?,
            "lambda2_scale" => s.lambda2_scale = parse_value::<Lambda2Scale>(key, value, line)?,
            "methods" => s.methods = parse_list(key, value, line)?,
            "base_seed" => s.base_seed = parse_value(key, value, line)?,
            "rho" => s.solver.rho = parse_value(key, value, line)?,
            "max_iters" => s.solver.max_iters = parse_value(key, value, line)?,
            "abs_tol" => s.solver.abs_tol = parse_value(key, value, line)?,
            "rel_tol" => s.solver.rel_tol = parse_value(key, value, line)?,
            "over_relaxation" => s.solver.over_relaxation = parse_value(key, value, line)?,
            "adaptive_rho" => s.solver.adaptive_rho = parse_value(key, value, line)?,
            "source" => self.source = parse_value(key, value, line)?,
            "k_time" => self.k_time = parse_value(key, value, line)?,
            "k_freq" => self.k_freq = parse_value(key, value, line)?,
            "burst_width" => self.burst_width = parse_value(key, value, line)?,
            "noise_floor" => self.noise_floor = parse_value(key, value, line)?,
            "input" => self.input = (!value.is_empty()).then(|| PathBuf::from(value)),
            "offset" => self.offset = parse_value(key, value, line)?,
            "out_csv" => self.out_csv = (!value.is_empty()).then(|| PathBuf::from(value)),
            "timing" => self.timing = parse_value(key, value, line)?,
            _ => return Err(Error::Config(format!("line {line}: unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Renders every key in canonical order. Floats use the shortest
    /// representation that parses back to the same bits.
    pub fn serialize(&self) -> String {
        let s = &self.spec;
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("n", s.n.to_string());
        kv("ratios", join(&s.ratios));
        kv("trials", s.trial_count.to_string());
        kv("epsilon_frac", s.epsilon_frac.to_string());
        kv("lambda2", s.lambda2.to_string());
        kv("lambda2_scale", s.lambda2_scale.name().to_string());
        kv("methods", join(&s.methods));
        kv("base_seed", s.base_seed.to_string());
        kv("source", self.source.name().to_string());
        kv("k_time", self.k_time.to_string());
        kv("k_freq", self.k_freq.to_string());
        kv("burst_width", self.burst_width.to_string());
        kv("noise_floor", self.noise_floor.to_string());
        kv("input", path(&self.input));
        kv("offset", self.offset.to_string());
        kv("out_csv", path(&self.out_csv));
        kv("timing", self.timing.to_string());
        kv("rho", s.solver.rho.to_string());
        kv("max_iters", s.solver.max_iters.to_string());
        kv("abs_tol", s.solver.abs_tol.to_string());
        kv("rel_tol", s.solver.rel_tol.to_string());
        kv("over_relaxation", s.solver.over_relaxation.to_string());
        kv("adaptive_rho", s.solver.adaptive_rho.to_string());
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Builds the signal source, reading the input file when `source = file`.
    pub fn signal_source(&self) -> Result<SignalSource> {
        let base = match self.source {
            SignalKind::FileTrace => {
                let path = self
                    .input
                    .as_ref()
                    .ok_or_else(|| Error::Config("source = file requires 'input'".into()))?;
                SignalSource::trace(super::read_signal_file(path)?)
            }
            kind => SignalSource::synthetic(kind, 0),
        };
        Ok(base
            .with_k_time(self.k_time)
            .with_k_freq(self.k_freq)
            .with_burst_width(self.burst_width)
            .with_noise_floor(self.noise_floor)
            .with_offset(self.offset))
    }
}
