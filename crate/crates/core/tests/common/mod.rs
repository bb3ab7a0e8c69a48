#![allow(dead_code)]

use multisparse::{generate_signal, MeasurementKind, MeasurementMatrix, Signal, SignalKind, SignalSource};

pub fn spikes(n: usize, k: usize, seed: u64) -> Signal {
    generate_signal(&SignalSource::synthetic(SignalKind::SyntheticSpikes, seed).with_k_time(k), n).unwrap()
}

pub fn gaussian(m: usize, n: usize, seed: u64) -> MeasurementMatrix {
    MeasurementMatrix::generate(MeasurementKind::Gaussian, m, n, seed).unwrap()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(p, q)| p - q).collect();
    norm(&d) / norm(b).max(1e-300)
}
pub mod oracles;
