use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::Rng as _;
use rand_distr::StandardNormal;

use super::Signal;
use crate::error::{Error, Result};
use crate::rng;

/// How a measurement matrix was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementKind {
    Gaussian,
    Bernoulli,
    PartialFourier,
    /// Caller-supplied entries.
    Custom,
}

impl fmt::Display for MeasurementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasurementKind::Gaussian => "gaussian",
            MeasurementKind::Bernoulli => "bernoulli",
            MeasurementKind::PartialFourier => "partial_fourier",
            MeasurementKind::Custom => "custom",
        })
    }
}

/// An `M x N` real sensing operator `Phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementMatrix {
    entries: DMatrix<f64>,
    kind: MeasurementKind,
    seed: u64,
}

impl MeasurementMatrix {
    /// Generates a random matrix. Entries are drawn row by row from
    /// [`rng::seeded`]`(seed)`, so `(kind, m, n, seed)` fixes every bit.
    ///
    /// - Gaussian: i.i.d. `N(0, 1) / sqrt(M)`.
    /// - Bernoulli: `+-1 / sqrt(M)` with equal probability.
    /// - PartialFourier: `M` distinct rows of the real DFT basis
    ///   (`cos` rows for `0 <= k <= N/2`, `-sin` rows for `0 < k < N/2`),
    ///   unitary-scaled and multiplied by `sqrt(N / M)`.
    pub fn generate(kind: MeasurementKind, m: usize, n: usize, seed: u64) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::dim(format!(
                "measurement count M={m} must satisfy 1 <= M <= N={n}"
            )));
        }
        let mut rng = rng::seeded(seed);
        let scale = 1.0 / (m as f64).sqrt();
        let entries = match kind {
            MeasurementKind::Gaussian => {
                let data: Vec<f64> = (0..m * n)
                    .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
                    .collect();
                DMatrix::from_row_slice(m, n, &data)
            }
            MeasurementKind::Bernoulli => {
                let data: Vec<f64> = (0..m * n)
                    .map(|_| if rng.random::<bool>() { scale } else { -scale })
                    .collect();
                DMatrix::from_row_slice(m, n, &data)
            }
            MeasurementKind::PartialFourier => {
                let mut rows = index::sample(&mut rng, n, m).into_vec();
                rows.sort_unstable();
                let mut mat = DMatrix::zeros(m, n);
                for (r, &basis_row) in rows.iter().enumerate() {
                    let (freq, is_cos) = real_dft_row(basis_row, n);
                    for j in 0..n {
                        let phase = 2.0 * PI * (freq * j % n) as f64 / n as f64;
                        mat[(r, j)] = scale * if is_cos { phase.cos() } else { -phase.sin() };
                    }
                }
                mat
            }
            MeasurementKind::Custom => {
                return Err(Error::InvalidProblem(
                    "custom matrices are built with MeasurementMatrix::from_rows".into(),
                ))
            }
        };
        Ok(Self {
            entries,
            kind,
            seed,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(Error::dim("matrix must be non-empty"));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::dim("ragged rows"));
        }
        if m > n {
            return Err(Error::dim(format!("M={m} exceeds N={n}")));
        }
        Self::from_matrix(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
    }

    pub fn from_matrix(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() > entries.ncols() {
            return Err(Error::dim(format!(
                "matrix shape {}x{} violates 1 <= M <= N",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::UndefinedInput("matrix entries must be finite".into()));
        }
        Ok(Self {
            entries,
            kind: MeasurementKind::Custom,
            seed: 0,
        })
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// `y = Phi x`.
    pub fn sample(&self, x: &Signal) -> Result<Vec<f64>> {
        self.apply(x.samples())
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols() {
            return Err(Error::dim(format!(
                "signal length {} does not match N={}",
                x.len(),
                self.cols()
            )));
        }
        Ok((&self.entries * DVector::from_column_slice(x))
            .as_slice()
            .to_vec())
    }

    /// `Phi^T v`.
    pub fn adjoint(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows() {
            return Err(Error::dim(format!(
                "vector length {} does not match M={}",
                v.len(),
                self.rows()
            )));
        }
        Ok(self
            .entries
            .tr_mul(&DVector::from_column_slice(v))
            .as_slice()
            .to_vec())
    }
}

/// Maps an index of the `N`-row real DFT basis to `(frequency, is_cos)`.
fn real_dft_row(index: usize, n: usize) -> (usize, bool) {
    let cos_rows = n / 2 + 1;
    if index < cos_rows {
        (index, true)
    } else {
        (index - cos_rows + 1, false)
    }
}
