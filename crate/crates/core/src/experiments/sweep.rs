//! Monte Carlo sweeps over the sub-sampling ratio.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::rmse::relative_error;
use super::signals::{generate_signal, SignalKind, SignalSource};
use crate::error::{Error, Result};
use crate::operators::{MeasurementKind, MeasurementMatrix, Signal};
use crate::rng;
use crate::solvers::{
    solve_f_l1, solve_l1_l1, solve_ls_baseline, solve_t_l1, SolveReport, SolverConfig,
};

const SIGNAL_TAG: u64 = 0x5349_474E;
const MATRIX_TAG: u64 = 0x5048_4921;

/// Recovery methods compared in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Minimum-norm least squares.
    Ls,
    TL1,
    FL1,
    L1L1,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Ls, Method::TL1, Method::FL1, Method::L1L1];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ls => "LS",
            Method::TL1 => "T-L1",
            Method::FL1 => "F-L1",
            Method::L1L1 => "L1-L1",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ls" => Ok(Method::Ls),
            "t-l1" | "tl1" | "t_l1" => Ok(Method::TL1),
            "f-l1" | "fl1" | "f_l1" => Ok(Method::FL1),
            "l1-l1" | "l1l1" | "l1_l1" => Ok(Method::L1L1),
            _ => Err(Error::Config(format!("unknown method '{s}'"))),
        }
    }
}

/// How `lambda2` is converted into the weight on the unitary-DFT term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Lambda2Scale {
    /// Weight is `lambda2`.
    Constant,
    /// Weight is `lambda2 * sqrt(N)`, i.e. `lambda2` applied to the
    /// unnormalized DFT.
    #[default]
    SqrtN,
}

impl Lambda2Scale {
    pub fn name(self) -> &'static str {
        match self {
            Lambda2Scale::Constant => "constant",
            Lambda2Scale::SqrtN => "sqrt_n",
        }
    }

    pub fn weight(self, lambda2: f64, n: usize) -> f64 {
        match self {
            Lambda2Scale::Constant => lambda2,
            Lambda2Scale::SqrtN => lambda2 * (n as f64).sqrt(),
        }
    }
}

impl FromStr for Lambda2Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Lambda2Scale::Constant),
            "sqrt_n" => Ok(Lambda2Scale::SqrtN),
            _ => Err(Error::Config(format!("unknown lambda2_scale '{s}'"))),
        }
    }
}

pub const DEFAULT_RATIOS: [f64; 8] = [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0];

/// Monte Carlo protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSpec {
    pub n: usize,
    /// Strictly increasing values of `M/N` in `(0, 1]`.
    pub ratios: Vec<f64>,
    pub trial_count: usize,
    /// `epsilon = epsilon_frac * ||y||_2`.
    pub epsilon_frac: f64,
    pub lambda2: f64,
    pub lambda2_scale: Lambda2Scale,
    pub methods: Vec<Method>,
    pub base_seed: u64,
    pub solver: SolverConfig,
}

impl Default for TrialSpec {
    fn default() -> Self {
        Self {
            n: 512,
            ratios: DEFAULT_RATIOS.to_vec(),
            trial_count: 40,
            epsilon_frac: 0.05,
            lambda2: 0.05,
            lambda2_scale: Lambda2Scale::default(),
            methods: Method::ALL.to_vec(),
            base_seed: 0,
            solver: SolverConfig::default(),
        }
    }
}

impl TrialSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.ratios.is_empty() {
            return Err(Error::Config("at least one ratio is required".into()));
        }
        for &r in &self.ratios {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::Config(format!("ratio {r} is outside (0, 1]")));
            }
            if measurement_count(r, self.n) == 0 {
                return Err(Error::Config(format!(
                    "ratio {r} gives no measurements at n={}",
                    self.n
                )));
            }
        }
        if self.ratios.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("ratios must be strictly increasing".into()));
        }
        if self.trial_count == 0 {
            return Err(Error::Config("trial_count must be positive".into()));
        }
        if !(self.epsilon_frac.is_finite() && self.epsilon_frac >= 0.0) {
            return Err(Error::Config("epsilon_frac must be finite and nonnegative".into()));
        }
        if !(self.lambda2.is_finite() && self.lambda2 >= 0.0) {
            return Err(Error::Config("lambda2 must be finite and nonnegative".into()));
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return Err(Error::Config("methods must not repeat".into()));
        }
        self.solver.validate()
    }

    /// Weight of the DFT term used for `L1-L1`.
    pub fn dft_weight(&self) -> f64 {
        self.lambda2_scale.weight(self.lambda2, self.n)
    }
}

/// `M = floor(ratio * N)`, with a small guard against representation error
/// in products such as `0.375 * 512`.
pub fn measurement_count(ratio: f64, n: usize) -> usize {
    ((ratio * n as f64) + 1e-9).floor() as usize
}

/// Outcome of one method on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// Relative error `||x - x_hat|| / ||x||`, `None` if the trial failed.
    pub relative_error: Option<f64>,
    pub seconds: f64,
    pub converged: bool,
    pub error: Option<String>,
}

/// All trials of one `(method, ratio)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub method: Method,
    pub ratio: f64,
    pub m: usize,
    pub trials: Vec<TrialOutcome>,
}

impl CellResult {
    fn errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.trials.iter().filter_map(|t| t.relative_error)
    }

    pub fn trials_ok(&self) -> usize {
        self.errors().count()
    }

    /// A cell is invalid when more than half of its trials failed.
    pub fn is_valid(&self) -> bool {
        2 * self.trials_ok() >= self.trials.len()
    }

    /// Mean relative error over successful trials; `None` for invalid cells.
    pub fn mean_rmse(&self) -> Option<f64> {
        if !self.is_valid() || self.trials_ok() == 0 {
            return None;
        }
        Some(self.errors().sum::<f64>() / self.trials_ok() as f64)
    }

    /// Sample standard deviation of the per-trial relative errors.
    pub fn stddev_rmse(&self) -> Option<f64> {
        let mean = self.mean_rmse()?;
        let k = self.trials_ok();
        if k < 2 {
            return Some(0.0);
        }
        let ss: f64 = self.errors().map(|e| (e - mean) * (e - mean)).sum();
        Some((ss / (k - 1) as f64).sqrt())
    }

    pub fn mean_seconds(&self) -> f64 {
        let ok: Vec<f64> = self
            .trials
            .iter()
            .filter(|t| t.relative_error.is_some())
            .map(|t| t.seconds)
            .collect();
        if ok.is_empty() {
            0.0
        } else {
            ok.iter().sum::<f64>() / ok.len() as f64
        }
    }
}

/// Per-cell results, ordered by method (LS, T-L1, F-L1, L1-L1) then ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<CellResult>,
}

impl SweepResult {
    pub fn cell(&self, method: Method, ratio: f64) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.ratio == ratio)
    }

    pub fn mean_rmse(&self, method: Method, ratio: f64) -> Option<f64> {
        self.cell(method, ratio)?.mean_rmse()
    }
}

/// Seed of the trial signal for trial `l`; shared by all ratios so that the
/// ratio axis compares the same signals.
pub fn signal_seed(base_seed: u64, trial: usize) -> u64 {
    rng::derive_seed(base_seed, &[SIGNAL_TAG, trial as u64])
}

/// Seed of the measurement matrix for `(ratio, trial)`.
pub fn matrix_seed(base_seed: u64, ratio: f64, trial: usize) -> u64 {
    rng::derive_seed(base_seed, &[MATRIX_TAG, ratio.to_bits(), trial as u64])
}

fn trial_signal(source: &SignalSource, spec: &TrialSpec, trial: usize) -> Result<Signal> {
    let src = if source.kind == SignalKind::FileTrace {
        source
            .clone()
            .with_offset(source.offset + trial * spec.n)
    } else {
        source.clone().with_seed(signal_seed(spec.base_seed ^ source.seed, trial))
    };
    generate_signal(&src, spec.n)
}

fn run_method(
    method: Method,
    spec: &TrialSpec,
    phi: &MeasurementMatrix,
    y: &[f64],
    eps: f64,
) -> Result<SolveReport> {
    match method {
        Method::Ls => solve_ls_baseline(y, phi),
        Method::TL1 => solve_t_l1(y, phi, eps, &spec.solver),
        Method::FL1 => solve_f_l1(y, phi, eps, &spec.solver),
        Method::L1L1 => solve_l1_l1(y, phi, eps, spec.dft_weight(), &spec.solver),
    }
}

fn run_trial(spec: &TrialSpec, source: &SignalSource, ratio: f64, trial: usize) -> Vec<TrialOutcome> {
    let failed = |e: Error| TrialOutcome {
        relative_error: None,
        seconds: 0.0,
        converged: false,
        error: Some(e.to_string()),
    };
    let prepared = (|| {
        let x = trial_signal(source, spec, trial)?;
        let m = measurement_count(ratio, spec.n);
        let phi = MeasurementMatrix::generate(
            MeasurementKind::Gaussian,
            m,
            spec.n,
            matrix_seed(spec.base_seed, ratio, trial),
        )?;
        let y = phi.sample(&x)?;
        let eps = spec.epsilon_frac * crate::operators::l2_norm(&y);
        Ok::<_, Error>((x, phi, y, eps))
    })();
    let (x, phi, y, eps) = match prepared {
        Ok(p) => p,
        Err(e) => {
            let msg = e.to_string();
            return spec
                .methods
                .iter()
                .map(|_| failed(Error::Generation(msg.clone())))
                .collect();
        }
    };
    spec.methods
        .iter()
        .map(|&method| {
            match run_method(method, spec, &phi, &y, eps)
                .and_then(|r| Ok((relative_error(&x, &r.x_hat)?, r)))
            {
                Ok((err, report)) => TrialOutcome {
                    relative_error: Some(err),
                    seconds: report.seconds(),
                    converged: report.converged,
                    error: None,
                },
                Err(e) => failed(e),
            }
        })
        .collect()
}

/// Runs every `(ratio, trial)` pair for every method.
///
/// Each trial draws its signal from `(base_seed, trial)` and its Gaussian
/// matrix from `(base_seed, ratio, trial)`, so results do not depend on
/// scheduling. Failed trials are recorded and the sweep continues.
pub fn run_sweep(spec: &TrialSpec, source: &SignalSource) -> Result<SweepResult> {
    spec.validate()?;
    if source.kind == SignalKind::FileTrace && source.trace_samples().is_none() {
        return Err(Error::Config("file source has no samples loaded".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..spec.ratios.len())
        .flat_map(|r| (0..spec.trial_count).map(move |l| (r, l)))
        .collect();
    let outcomes: Vec<Vec<TrialOutcome>> = jobs
        .par_iter()
        .map(|&(r, l)| run_trial(spec, source, spec.ratios[r], l))
        .collect();

    let mut cells = Vec::with_capacity(spec.methods.len() * spec.ratios.len());
    for (mi, &method) in spec.methods.iter().enumerate() {
        for (ri, &ratio) in spec.ratios.iter().enumerate() {
            let trials = (0..spec.trial_count)
                .map(|l| outcomes[ri * spec.trial_count + l][mi].clone())
                .collect();
            cells.push(CellResult {
                method,
                ratio,
                m: measurement_count(ratio, spec.n),
                trials,
            });
        }
    }
    Ok(SweepResult { cells })
}
