//! Compressive-sensing recovery under multiple L1 sparsity priors.
//!
//! A signal `x` of length `N` is observed through `M <= N` random projections
//! `y = Phi x` and recovered by solving
//!
//! ```text
//! minimize   sum_p lambda_p * || Psi_p x ||_1
//! subject to || y - Phi x ||_2 <= epsilon
//! ```
//!
//! where each `Psi_p` is an analysis operator (identity, unitary DFT, or a
//! dense matrix). The time-domain (`T-L1`), frequency-domain (`F-L1`) and
//! combined (`L1-L1`) programs are specializations. The solver is an
//! over-relaxed ADMM with an independent projected-subgradient oracle used
//! for verification.
//!
//! Modules:
//! - [`operators`]: signals, measurement matrices, analysis operators.
//! - [`solvers`]: the ADMM solver, least-squares baseline, oracle and
//!   feasibility diagnostics.
//! - [`experiments`]: signal sources, RMSE and Monte Carlo sweeps.
//! - [`io`]: signal files, run configuration, CSV output.
//! - [`cli`]: the command-line driver.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod operators;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};

pub use operators::{
    compressibility, AnalysisOperator, Coefficients, MeasurementKind, MeasurementMatrix, Signal,
};
pub use solvers::{
    kkt_feasibility_check, oracle_subgradient, solve_f_l1, solve_l1_l1, solve_ls_baseline,
    solve_multi_l1, solve_t_l1, RecoveryProblem, SolveReport, SolverConfig, StepSchedule, Term,
};
pub use experiments::{
    generate_signal, ingest_trace, rmse, run_sweep, Lambda2Scale, Method, SignalKind, SignalSource,
    SweepResult, TrialSpec,
};
pub use io::{read_signal_file, write_sweep_csv, RunConfig};
