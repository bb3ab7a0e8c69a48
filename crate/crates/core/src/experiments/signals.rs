//! Synthetic and recorded signal sources.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operators::{compressibility, AnalysisOperator, Coefficients, Signal};
use crate::rng;

/// Regeneration attempts before a constrained generator gives up.
pub const MAX_ATTEMPTS: u64 = 100;
/// Compressibility is measured at this fraction of the coefficients.
pub const SPARSITY_FRACTION: f64 = 0.1;
pub const DUAL_SPARSE_MIN: f64 = 0.95;
pub const FREQ_DENSE_TIME_MIN: f64 = 0.95;
pub const FREQ_DENSE_FREQ_MAX: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalKind {
    /// Windows of a recorded trace.
    FileTrace,
    /// `k_time` isolated spikes.
    SyntheticSpikes,
    /// `k_freq` on-grid cosines.
    SyntheticTones,
    /// `k_time` Hann-windowed bursts sharing one carrier; sparse in both
    /// time and frequency.
    SyntheticDualSparse,
    /// Spikes with Gaussian amplitudes; sparse in time, dense in frequency.
    SyntheticFreqDense,
}

impl SignalKind {
    pub fn name(self) -> &'static str {
        match self {
            SignalKind::FileTrace => "file",
            SignalKind::SyntheticSpikes => "spikes",
            SignalKind::SyntheticTones => "tones",
            SignalKind::SyntheticDualSparse => "dual_sparse",
            SignalKind::SyntheticFreqDense => "freq_dense",
        }
    }
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "file" => SignalKind::FileTrace,
            "spikes" => SignalKind::SyntheticSpikes,
            "tones" => SignalKind::SyntheticTones,
            "dual_sparse" | "dual-sparse" => SignalKind::SyntheticDualSparse,
            "freq_dense" | "freq-dense" => SignalKind::SyntheticFreqDense,
            other => return Err(Error::Config(format!("unknown signal kind '{other}'"))),
        })
    }
}

/// Where trial signals come from.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSource {
    pub kind: SignalKind,
    /// Spikes or bursts in time.
    pub k_time: usize,
    /// Active tone pairs (`SyntheticTones`).
    pub k_freq: usize,
    /// Burst length in samples (`SyntheticDualSparse`).
    pub burst_width: usize,
    /// Additive Gaussian noise, as a fraction of the clean signal's L2 norm.
    pub noise_floor: f64,
    pub seed: u64,
    /// First sample of the window (`FileTrace`).
    pub offset: usize,
    trace: Option<Arc<[f64]>>,
}

impl SignalSource {
    pub fn synthetic(kind: SignalKind, seed: u64) -> Self {
        Self {
            kind,
            k_time: 3,
            k_freq: 3,
            burst_width: 40,
            noise_floor: 0.0,
            seed,
            offset: 0,
            trace: None,
        }
    }

    pub fn trace(samples: Vec<f64>) -> Self {
        Self {
            trace: Some(samples.into()),
            ..Self::synthetic(SignalKind::FileTrace, 0)
        }
    }

    pub fn with_k_time(mut self, k: usize) -> Self {
        self.k_time = k;
        self
    }

    pub fn with_k_freq(mut self, k: usize) -> Self {
        self.k_freq = k;
        self
    }

    pub fn with_burst_width(mut self, w: usize) -> Self {
        self.burst_width = w;
        self
    }

    pub fn with_noise_floor(mut self, level: f64) -> Self {
        self.noise_floor = level;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_offset(mut self, offset: usize) -> Self {
        self.offset = offset;
        self
    }

    pub fn trace_samples(&self) -> Option<&[f64]> {
        self.trace.as_deref()
    }
}

/// Number of coefficients at which compressibility is judged.
pub fn sparsity_budget(n: usize) -> usize {
    ((n as f64 * SPARSITY_FRACTION).floor() as usize).max(1)
}

/// Time- and frequency-domain compressibility at [`sparsity_budget`].
pub fn dual_compressibility(x: &Signal) -> Result<(f64, f64)> {
    let k = sparsity_budget(x.len());
    let time = compressibility(&Coefficients::Real(x.samples().to_vec()), k)?;
    let freq = compressibility(&AnalysisOperator::unitary_dft(x.len())?.analyze(x)?, k)?;
    Ok((time, freq))
}

/// Draws one unit-norm signal of length `n`.
///
/// Constrained kinds are redrawn from successive sub-seeds of
/// `source.seed` until their compressibility targets hold.
pub fn generate_signal(source: &SignalSource, n: usize) -> Result<Signal> {
    validate(source, n)?;
    match source.kind {
        SignalKind::FileTrace => {
            let trace = source
                .trace
                .as_deref()
                .ok_or_else(|| Error::Generation("file source has no samples loaded".into()))?;
            let window: Vec<f64> = (0..n)
                .map(|i| trace[(source.offset + i) % trace.len()])
                .collect();
            center_and_normalize(window)
        }
        SignalKind::SyntheticSpikes | SignalKind::SyntheticTones => {
            let mut r = rng::seeded(rng::derive_seed(source.seed, &[0]));
            let clean = if source.kind == SignalKind::SyntheticSpikes {
                spikes(&mut r, n, source.k_time, |r| {
                    let mag = 0.5 + r.random::<f64>();
                    if r.random::<bool>() { mag } else { -mag }
                })
            } else {
                tones(&mut r, n, source.k_freq)
            };
            finish(&mut r, clean, source.noise_floor)
        }
        SignalKind::SyntheticDualSparse | SignalKind::SyntheticFreqDense => {
            for attempt in 0..MAX_ATTEMPTS {
                let mut r = rng::seeded(rng::derive_seed(source.seed, &[attempt]));
                let clean = if source.kind == SignalKind::SyntheticDualSparse {
                    bursts(&mut r, n, source.k_time, source.burst_width)
                } else {
                    spikes(&mut r, n, source.k_time, |r| r.sample(StandardNormal))
                };
                let Ok(x) = finish(&mut r, clean, source.noise_floor) else {
                    continue;
                };
                let (time, freq) = dual_compressibility(&x)?;
                let ok = if source.kind == SignalKind::SyntheticDualSparse {
                    time >= DUAL_SPARSE_MIN && freq >= DUAL_SPARSE_MIN
                } else {
                    time >= FREQ_DENSE_TIME_MIN && freq < FREQ_DENSE_FREQ_MAX
                };
                if ok {
                    return Ok(x);
                }
            }
            Err(Error::Generation(format!(
                "{} source (n={n}, k_time={}, burst_width={}) missed its compressibility targets in {MAX_ATTEMPTS} attempts",
                source.kind, source.k_time, source.burst_width
            )))
        }
    }
}

/// Reads a signal file and returns the window `[offset, offset + n)`,
/// mean-subtracted and scaled to unit norm.
pub fn ingest_trace(path: impl AsRef<Path>, n: usize, offset: usize) -> Result<Signal> {
    let path = path.as_ref();
    let samples = crate::io::read_signal_file(path)?;
    window(&samples, n, offset).map_err(|message| Error::Format {
        path: path.display().to_string(),
        line: None,
        message,
    })
}

pub(crate) fn window(samples: &[f64], n: usize, offset: usize) -> Result<Signal, String> {
    if n == 0 {
        return Err("window length must be positive".into());
    }
    let end = offset
        .checked_add(n)
        .filter(|&e| e <= samples.len())
        .ok_or_else(|| {
            format!(
                "need {} samples for offset {offset} and length {n}, file has {}",
                offset.saturating_add(n),
                samples.len()
            )
        })?;
    center_and_normalize(samples[offset..end].to_vec()).map_err(|e| e.to_string())
}

fn center_and_normalize(mut w: Vec<f64>) -> Result<Signal> {
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    w.iter_mut().for_each(|v| *v -= mean);
    Signal::normalized(w)
}

fn validate(source: &SignalSource, n: usize) -> Result<()> {
    let bad = |msg: String| Err(Error::Generation(msg));
    if n == 0 {
        return bad("signal length must be positive".into());
    }
    if !(source.noise_floor.is_finite() && source.noise_floor >= 0.0) {
        return bad("noise floor must be finite and nonnegative".into());
    }
    match source.kind {
        SignalKind::SyntheticSpikes | SignalKind::SyntheticFreqDense
            if source.k_time == 0 || source.k_time > n =>
        {
            bad(format!("k_time={} must lie in 1..={n}", source.k_time))
        }
        SignalKind::SyntheticTones if source.k_freq == 0 || source.k_freq > (n - 1) / 2 => bad(format!(
            "k_freq={} must lie in 1..={} for n={n}",
            source.k_freq,
            (n - 1) / 2
        )),
        SignalKind::SyntheticDualSparse
            if source.k_time == 0 || source.burst_width < 3 || source.burst_width > n || n < 16 =>
        {
            bad(format!(
                "dual-sparse source needs k_time >= 1, 3 <= burst_width <= n and n >= 16 (k_time={}, burst_width={}, n={n})",
                source.k_time, source.burst_width
            ))
        }
        _ => Ok(()),
    }
}

fn spikes(r: &mut rng::Rng, n: usize, k: usize, mut amp: impl FnMut(&mut rng::Rng) -> f64) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for pos in index::sample(r, n, k).into_vec() {
        let mut a = amp(r);
        while a == 0.0 {
            a = amp(r);
        }
        x[pos] = a;
    }
    x
}

fn tones(r: &mut rng::Rng, n: usize, k: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    // bins 1..ceil(n/2) have distinct conjugate partners
    for b in index::sample(r, (n - 1) / 2, k).into_vec() {
        let bin = b + 1;
        let amp = 0.5 + r.random::<f64>();
        let phase = 2.0 * PI * r.random::<f64>();
        for (j, v) in x.iter_mut().enumerate() {
            *v += amp * (2.0 * PI * ((bin * j) % n) as f64 / n as f64 + phase).cos();
        }
    }
    x
}

fn bursts(r: &mut rng::Rng, n: usize, k: usize, width: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    let carrier = r.random_range((n / 16).max(1)..(n / 4).max(2));
    for _ in 0..k {
        let start = r.random_range(0..=n - width);
        let amp = 0.5 + 0.5 * r.random::<f64>();
        let phase = 2.0 * PI * r.random::<f64>();
        for i in 0..width {
            let hann = (PI * (i + 1) as f64 / (width + 1) as f64).sin().powi(2);
            let j = start + i;
            x[j] += amp * hann * (2.0 * PI * ((carrier * j) % n) as f64 / n as f64 + phase).cos();
        }
    }
    x
}

fn finish(r: &mut rng::Rng, mut x: Vec<f64>, noise_floor: f64) -> Result<Signal> {
    if noise_floor > 0.0 {
        let noise: Vec<f64> = (0..x.len()).map(|_| r.sample(StandardNormal)).collect();
        let scale = noise_floor * crate::operators::l2_norm(&x) / crate::operators::l2_norm(&noise);
        x.iter_mut().zip(&noise).for_each(|(v, e)| *v += scale * e);
    }
    Signal::normalized(x)
}
