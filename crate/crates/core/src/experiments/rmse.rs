use crate::error::{Error, Result};
use crate::operators::{l2_norm, Signal};

/// `||x - x_hat||_2 / ||x||_2`.
pub fn relative_error(original: &Signal, estimate: &Signal) -> Result<f64> {
    if original.len() != estimate.len() {
        return Err(Error::dim(format!(
            "original has {} samples, estimate has {}",
            original.len(),
            estimate.len()
        )));
    }
    let denom = original.norm();
    if denom == 0.0 {
        return Err(Error::UndefinedInput("original signal has zero norm".into()));
    }
    let diff: Vec<f64> = original
        .samples()
        .iter()
        .zip(estimate.samples())
        .map(|(a, b)| a - b)
        .collect();
    Ok(l2_norm(&diff) / denom)
}

/// Mean relative reconstruction error over Monte Carlo trials:
/// `e = (1/L) sum_l ||x_l - x_hat_l||_2 / ||x_l||_2`.
pub fn rmse(originals: &[Signal], estimates: &[Signal]) -> Result<f64> {
    if originals.len() != estimates.len() {
        return Err(Error::dim(format!(
            "{} originals but {} estimates",
            originals.len(),
            estimates.len()
        )));
    }
    if originals.is_empty() {
        return Err(Error::UndefinedInput("no trials".into()));
    }
    let total = originals
        .iter()
        .zip(estimates)
        .try_fold(0.0, |acc, (x, xh)| Ok::<_, Error>(acc + relative_error(x, xh)?))?;
    Ok(total / originals.len() as f64)
}
