//! Signal sources, RMSE evaluation and Monte Carlo sweeps.

mod rmse;
mod signals;
mod sweep;

pub use rmse::{relative_error, rmse};
pub use signals::{
    dual_compressibility, generate_signal, ingest_trace, sparsity_budget, SignalKind, SignalSource,
};
pub use sweep::{
    matrix_seed, measurement_count, run_sweep, signal_seed, CellResult, Lambda2Scale, Method,
    SweepResult, TrialOutcome, TrialSpec, DEFAULT_RATIOS,
};
