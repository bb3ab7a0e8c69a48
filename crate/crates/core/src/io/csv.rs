use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::SweepResult;

pub const SWEEP_HEADER: &str = "method,ratio,mean_rmse,stddev_rmse,mean_seconds,trials_ok";

/// Nine significant digits in scientific notation; `nan` for missing values.
pub fn format_sig9(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.8e}"),
        _ => "nan".to_string(),
    }
}

/// Renders a sweep as CSV, one row per `(method, ratio)`.
///
/// `mean_seconds` is left empty unless `timing` is set, which keeps the
/// output byte-stable across runs.
pub fn format_sweep_csv(result: &SweepResult, timing: bool) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for cell in &result.cells {
        let seconds = if timing {
            format_sig9(Some(cell.mean_seconds()))
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            cell.method,
            format_sig9(Some(cell.ratio)),
            format_sig9(cell.mean_rmse()),
            format_sig9(cell.stddev_rmse()),
            seconds,
            cell.trials_ok()
        );
    }
    out
}

pub fn write_sweep_csv(result: &SweepResult, path: impl AsRef<Path>, timing: bool) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_sweep_csv(result, timing)).map_err(|e| Error::io(path, e))
}
