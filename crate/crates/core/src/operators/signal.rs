use crate::error::{Error, Result};

/// A real-valued signal sampled at the Nyquist rate.
///
/// `norm_scale` records the L2 norm that was divided out when the signal was
/// normalized; it is `1.0` for signals that were never normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    norm_scale: f64,
    normalized: bool,
}

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::UndefinedInput("signal must have at least one sample".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::UndefinedInput(format!("sample {i} is not finite")));
        }
        Ok(Self {
            samples,
            norm_scale: 1.0,
            normalized: false,
        })
    }

    /// Builds a signal scaled to unit L2 norm.
    pub fn normalized(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples)?.into_normalized()
    }

    pub fn into_normalized(self) -> Result<Self> {
        let norm = l2_norm(&self.samples);
        if norm == 0.0 {
            return Err(Error::UndefinedInput("cannot normalize an all-zero signal".into()));
        }
        let samples = self.samples.into_iter().map(|v| v / norm).collect();
        Ok(Self {
            samples,
            norm_scale: norm * self.norm_scale,
            normalized: true,
        })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn norm_scale(&self) -> f64 {
        self.norm_scale
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.samples)
    }
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}
