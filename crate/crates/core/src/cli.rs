//! Command-line driver.
//!
//! Exit codes: `0` success, `1` usage error, `2` data or format error,
//! `3` solver failure (infeasible or ill-conditioned problem).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::experiments::{
    generate_signal, measurement_count, relative_error, run_sweep, Lambda2Scale, Method,
    SignalKind, SignalSource, TrialSpec,
};
use crate::io::{format_signal, format_sweep_csv, read_signal_file, RunConfig};
use crate::operators::{l2_norm, MeasurementKind, MeasurementMatrix, Signal};
use crate::solvers::{solve_f_l1, solve_l1_l1, solve_ls_baseline, solve_t_l1, SolveReport, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "multisparse", version, about = "Compressive-sensing recovery with multiple L1 sparsity priors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reconstruct one signal from random Gaussian measurements.
    Recover(RecoverArgs),
    /// Run a Monte Carlo sweep and write the result table as CSV.
    Sweep(SweepArgs),
    /// Write a synthetic signal file.
    Gen(GenArgs),
    /// Time each method on one fixed instance.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// spikes, tones, dual_sparse or freq_dense.
    #[arg(long, default_value = "dual_sparse")]
    kind: String,
    #[arg(long)]
    k_time: Option<usize>,
    #[arg(long)]
    k_freq: Option<usize>,
    #[arg(long)]
    burst_width: Option<usize>,
    #[arg(long)]
    noise_floor: Option<f64>,
}

impl SourceArgs {
    fn source(&self, seed: u64) -> Result<SignalSource, Failure> {
        let kind: SignalKind = self.kind.parse().map_err(Failure::usage)?;
        if kind == SignalKind::FileTrace {
            return Err(Failure::usage("use --input to read a signal file"));
        }
        let mut s = SignalSource::synthetic(kind, seed);
        if let Some(k) = self.k_time {
            s = s.with_k_time(k);
        }
        if let Some(k) = self.k_freq {
            s = s.with_k_freq(k);
        }
        if let Some(w) = self.burst_width {
            s = s.with_burst_width(w);
        }
        if let Some(v) = self.noise_floor {
            s = s.with_noise_floor(v);
        }
        Ok(s)
    }
}

#[derive(Debug, Args)]
struct RecoverArgs {
    /// Signal file (one sample per line). A synthetic signal is used when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Window length; defaults to the whole file, or 512 for synthetic input.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    offset: usize,
    /// LS, T-L1, F-L1 or L1-L1.
    #[arg(long, default_value = "L1-L1")]
    method: String,
    /// Sub-sampling ratio M/N in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    epsilon_frac: f64,
    #[arg(long, default_value_t = 0.05)]
    lambda2: f64,
    /// constant or sqrt_n.
    #[arg(long, default_value = "sqrt_n")]
    lambda2_scale: String,
    /// Where to write the recovered samples.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// key = value configuration file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated M/N values.
    #[arg(long)]
    ratios: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    epsilon_frac: Option<f64>,
    #[arg(long)]
    lambda2: Option<f64>,
    #[arg(long)]
    lambda2_scale: Option<String>,
    /// Comma-separated methods.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// spikes, tones, dual_sparse, freq_dense or file.
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    k_time: Option<usize>,
    #[arg(long)]
    k_freq: Option<usize>,
    #[arg(long)]
    burst_width: Option<usize>,
    #[arg(long)]
    noise_floor: Option<f64>,
    /// Include mean_seconds in the CSV.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    epsilon_frac: f64,
    #[arg(long, default_value_t = 0.05)]
    lambda2: f64,
    #[command(flatten)]
    source: SourceArgs,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Self {
            code: EXIT_USAGE,
            message: msg.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible { .. } | Error::IllConditioned { .. } | Error::InvalidProblem(_) => EXIT_SOLVER,
            _ => EXIT_DATA,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Runs the CLI with process stdio and returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI against arbitrary output streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Recover(a) => recover(a, out, err),
        Command::Sweep(a) => sweep(a, out, err),
        Command::Gen(a) => gen(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let prefix = if f.code == EXIT_USAGE { "usage error" } else { "error" };
            let _ = writeln!(err, "{prefix}: {}", f.message);
            f.code
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::from(Error::Io { path: "<stdout>".into(), source: e }))
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.clone(), source: e }.into())
}

fn check_ratio(ratio: f64, n: usize) -> Result<usize, Failure> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Failure::usage(format!("--ratio must lie in (0, 1], got {ratio}")));
    }
    match measurement_count(ratio, n) {
        0 => Err(Failure::usage(format!("--ratio {ratio} yields no measurements for n={n}"))),
        m => Ok(m),
    }
}

fn solve(method: Method, y: &[f64], phi: &MeasurementMatrix, eps: f64, dft_weight: f64) -> Result<SolveReport, Error> {
    let cfg = SolverConfig::default();
    match method {
        Method::Ls => solve_ls_baseline(y, phi),
        Method::TL1 => solve_t_l1(y, phi, eps, &cfg),
        Method::FL1 => solve_f_l1(y, phi, eps, &cfg),
        Method::L1L1 => solve_l1_l1(y, phi, eps, dft_weight, &cfg),
    }
}

fn recover(a: RecoverArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let method: Method = a.method.parse().map_err(Failure::usage)?;
    let scale: Lambda2Scale = a.lambda2_scale.parse().map_err(Failure::usage)?;
    if !(a.epsilon_frac.is_finite() && a.epsilon_frac >= 0.0) {
        return Err(Failure::usage("--epsilon-frac must be nonnegative"));
    }
    if !(a.lambda2.is_finite() && a.lambda2 >= 0.0) {
        return Err(Failure::usage("--lambda2 must be nonnegative"));
    }
    let x: Signal = match &a.input {
        Some(path) => {
            let samples = read_signal_file(path)?;
            let n = a.n.unwrap_or(samples.len().saturating_sub(a.offset));
            check_ratio(a.ratio, n.max(1))?;
            crate::experiments::ingest_trace(path, n, a.offset)?
        }
        None => {
            let n = a.n.unwrap_or(512);
            check_ratio(a.ratio, n)?;
            generate_signal(&a.source.source(a.seed)?, n)?
        }
    };
    let n = x.len();
    let m = check_ratio(a.ratio, n)?;
    let phi = MeasurementMatrix::generate(MeasurementKind::Gaussian, m, n, a.seed)?;
    let y = phi.sample(&x)?;
    let eps = a.epsilon_frac * l2_norm(&y);
    let report = solve(method, &y, &phi, eps, scale.weight(a.lambda2, n))?;
    let rel = relative_error(&x, &report.x_hat)?;
    if !report.converged {
        let _ = writeln!(err, "warning: solver stopped at the iteration limit without converging");
    }
    write_out(
        out,
        &format!(
            "method={method} n={n} m={m} relative_error={rel:.6e} objective={:.6e} residual={:.6e} epsilon={eps:.6e} iterations={} converged={} seconds={:.3}\n",
            report.objective,
            report.residual,
            report.iterations,
            report.converged,
            report.seconds()
        ),
    )?;
    if let Some(path) = &a.output {
        write_file(path, &format_signal(report.x_hat.samples()))?;
    }
    Ok(())
}

fn sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let mut cfg = match &a.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut overrides: Vec<(&str, String)> = Vec::new();
    let mut push = |k: &'static str, v: Option<String>| {
        if let Some(v) = v {
            overrides.push((k, v));
        }
    };
    push("n", a.n.map(|v| v.to_string()));
    push("ratios", a.ratios.clone());
    push("trials", a.trials.map(|v| v.to_string()));
    push("epsilon_frac", a.epsilon_frac.map(|v| v.to_string()));
    push("lambda2", a.lambda2.map(|v| v.to_string()));
    push("lambda2_scale", a.lambda2_scale.clone());
    push("methods", a.methods.clone());
    push("base_seed", a.seed.map(|v| v.to_string()));
    push("source", a.source.clone());
    push("input", a.input.as_ref().map(|p| p.display().to_string()));
    push("k_time", a.k_time.map(|v| v.to_string()));
    push("k_freq", a.k_freq.map(|v| v.to_string()));
    push("burst_width", a.burst_width.map(|v| v.to_string()));
    push("noise_floor", a.noise_floor.map(|v| v.to_string()));
    for (k, v) in overrides {
        cfg.set(k, &v, 0).map_err(|e| Failure::usage(format!("--{}: {e}", k.replace('_', "-"))))?;
    }
    if a.timing {
        cfg.timing = true;
    }
    if let Some(p) = a.out_csv {
        cfg.out_csv = Some(p);
    }
    let spec: &TrialSpec = &cfg.spec;
    spec.validate().map_err(Failure::usage)?;
    let source = cfg.signal_source()?;
    let result = run_sweep(spec, &source)?;
    for cell in result.cells.iter().filter(|c| !c.is_valid()) {
        let _ = writeln!(
            err,
            "warning: {} at ratio {} is invalid ({} of {} trials succeeded)",
            cell.method,
            cell.ratio,
            cell.trials_ok(),
            cell.trials.len()
        );
    }
    let csv = format_sweep_csv(&result, cfg.timing);
    match &cfg.out_csv {
        Some(path) => {
            write_file(path, &csv)?;
            let _ = writeln!(err, "wrote {} rows to {}", result.cells.len(), path.display());
        }
        None => write_out(out, &csv)?,
    }
    Ok(())
}

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if a.n == 0 {
        return Err(Failure::usage("--n must be positive"));
    }
    let x = generate_signal(&a.source.source(a.seed)?, a.n)?;
    let text = format_signal(x.samples());
    match &a.output {
        Some(path) => write_file(path, &text),
        None => write_out(out, &text),
    }
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let m = check_ratio(a.ratio, a.n)?;
    let x = generate_signal(&a.source.source(a.seed)?, a.n)?;
    let phi = MeasurementMatrix::generate(MeasurementKind::Gaussian, m, a.n, a.seed)?;
    let y = phi.sample(&x)?;
    let eps = a.epsilon_frac * l2_norm(&y);
    let weight = Lambda2Scale::default().weight(a.lambda2, a.n);
    let mut table = format!("# n={} m={m} epsilon_frac={} lambda2={}\nmethod,seconds,iterations,converged,relative_error\n", a.n, a.epsilon_frac, a.lambda2);
    for method in Method::ALL {
        let r = solve(method, &y, &phi, eps, weight)?;
        table.push_str(&format!(
            "{method},{:.4},{},{},{:.6e}\n",
            r.seconds(),
            r.iterations,
            r.converged,
            relative_error(&x, &r.x_hat)?
        ));
    }
    write_out(out, &table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_exit_codes() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(code(Error::Infeasible { distance: 1.0, epsilon: 0.0 }), EXIT_SOLVER);
        assert_eq!(code(Error::IllConditioned { condition: 1e20, limit: 1e12 }), EXIT_SOLVER);
        assert_eq!(code(Error::Generation("x".into())), EXIT_DATA);
        assert_eq!(code(Error::Config("x".into())), EXIT_DATA);
        assert_eq!(Failure::usage("x").code, EXIT_USAGE);
    }
}
