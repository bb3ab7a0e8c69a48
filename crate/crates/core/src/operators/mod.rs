//! Signals, measurement matrices and analysis operators.

mod analysis;
mod measurement;
mod signal;

pub use analysis::{AnalysisKind, AnalysisOperator, Coefficients};
pub use measurement::{MeasurementKind, MeasurementMatrix};
pub use signal::Signal;

pub(crate) use signal::l2_norm;

use crate::error::{Error, Result};

/// Fraction of the energy of `theta` held by its `k` largest-magnitude
/// entries. Nondecreasing in `k` and exactly `1.0` at `k = theta.len()`.
pub fn compressibility(theta: &Coefficients, k: usize) -> Result<f64> {
    if theta.is_empty() {
        return Err(Error::UndefinedInput("empty coefficient vector".into()));
    }
    if k == 0 || k > theta.len() {
        return Err(Error::dim(format!(
            "k={k} must lie in 1..={}",
            theta.len()
        )));
    }
    let mut energy = theta.energies();
    energy.sort_unstable_by(|a, b| b.total_cmp(a));
    // One accumulation order for both sums, so k = L gives exactly 1.
    let mut top = 0.0;
    let mut total = 0.0;
    for (i, e) in energy.iter().enumerate() {
        total += e;
        if i + 1 == k {
            top = total;
        }
    }
    if total == 0.0 {
        return Err(Error::UndefinedInput("coefficient vector has zero norm".into()));
    }
    Ok(top / total)
}
