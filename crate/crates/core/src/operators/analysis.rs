use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Signal;
use crate::error::{Error, Result};

/// Coefficients `theta = Psi x` of an analysis operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Coefficients {
    pub fn len(&self) -> usize {
        match self {
            Coefficients::Real(v) => v.len(),
            Coefficients::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Coefficients::Complex(_))
    }

    /// Squared magnitudes `|theta_i|^2`.
    pub fn energies(&self) -> Vec<f64> {
        match self {
            Coefficients::Real(v) => v.iter().map(|a| a * a).collect(),
            Coefficients::Complex(v) => v.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Sum of moduli. For complex coefficients this is the sum of complex
    /// magnitudes, not of real and imaginary parts.
    pub fn l1_norm(&self) -> f64 {
        match self {
            Coefficients::Real(v) => v.iter().map(|a| a.abs()).sum(),
            Coefficients::Complex(v) => v.iter().map(|a| a.norm()).sum(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.energies().iter().sum::<f64>().sqrt()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            Coefficients::Real(v) => v.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            Coefficients::Complex(v) => v.clone(),
        }
    }
}

/// Which analysis operator is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisKind {
    Identity,
    UnitaryDft,
    DenseReal,
    DenseComplex,
}

#[derive(Clone)]
enum Repr {
    Identity,
    UnitaryDft {
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
    },
    DenseReal(DMatrix<f64>),
    DenseComplex(DMatrix<Complex64>),
}

/// An `L x N` analysis operator `Psi` with `L >= N`.
#[derive(Clone)]
pub struct AnalysisOperator {
    rows: usize,
    cols: usize,
    repr: Repr,
}

impl fmt::Debug for AnalysisOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalysisOperator")
            .field("kind", &self.kind())
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish()
    }
}

impl AnalysisOperator {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::dim("operator size must be positive"));
        }
        Ok(Self {
            rows: n,
            cols: n,
            repr: Repr::Identity,
        })
    }

    /// The DFT scaled by `1/sqrt(N)`, so that it is unitary.
    pub fn unitary_dft(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::dim("operator size must be positive"));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            rows: n,
            cols: n,
            repr: Repr::UnitaryDft {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            },
        })
    }

    pub fn dense_real(entries: DMatrix<f64>) -> Result<Self> {
        check_dense_shape(entries.nrows(), entries.ncols())?;
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::UndefinedInput("operator entries must be finite".into()));
        }
        Ok(Self {
            rows: entries.nrows(),
            cols: entries.ncols(),
            repr: Repr::DenseReal(entries),
        })
    }

    pub fn dense_complex(entries: DMatrix<Complex64>) -> Result<Self> {
        check_dense_shape(entries.nrows(), entries.ncols())?;
        if entries.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::UndefinedInput("operator entries must be finite".into()));
        }
        Ok(Self {
            rows: entries.nrows(),
            cols: entries.ncols(),
            repr: Repr::DenseComplex(entries),
        })
    }

    pub fn kind(&self) -> AnalysisKind {
        match self.repr {
            Repr::Identity => AnalysisKind::Identity,
            Repr::UnitaryDft { .. } => AnalysisKind::UnitaryDft,
            Repr::DenseReal(_) => AnalysisKind::DenseReal,
            Repr::DenseComplex(_) => AnalysisKind::DenseComplex,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Whether real inputs can produce complex coefficients.
    pub fn is_complex(&self) -> bool {
        matches!(self.repr, Repr::UnitaryDft { .. } | Repr::DenseComplex(_))
    }

    /// `theta = Psi x`.
    pub fn analyze(&self, x: &Signal) -> Result<Coefficients> {
        self.apply(x.samples())
    }

    pub fn apply(&self, x: &[f64]) -> Result<Coefficients> {
        self.check_input(x.len())?;
        Ok(match &self.repr {
            Repr::Identity => Coefficients::Real(x.to_vec()),
            Repr::DenseReal(m) => {
                Coefficients::Real((m * nalgebra::DVector::from_column_slice(x)).data.into())
            }
            _ => {
                let z: Vec<Complex64> = x.iter().map(|&a| Complex64::new(a, 0.0)).collect();
                Coefficients::Complex(self.apply_complex(&z)?)
            }
        })
    }

    /// `Psi z` for a complex input.
    pub fn apply_complex(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_input(z.len())?;
        Ok(match &self.repr {
            Repr::Identity => z.to_vec(),
            Repr::UnitaryDft { forward, .. } => {
                let mut buf = z.to_vec();
                forward.process(&mut buf);
                let s = 1.0 / (self.cols as f64).sqrt();
                buf.iter_mut().for_each(|v| *v *= s);
                buf
            }
            Repr::DenseReal(m) => (0..self.rows)
                .map(|i| (0..self.cols).map(|j| z[j] * m[(i, j)]).sum())
                .collect(),
            Repr::DenseComplex(m) => (0..self.rows)
                .map(|i| (0..self.cols).map(|j| m[(i, j)] * z[j]).sum())
                .collect(),
        })
    }

    /// `Psi^H v`.
    pub fn adjoint_complex(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_output(v.len())?;
        Ok(match &self.repr {
            Repr::Identity => v.to_vec(),
            Repr::UnitaryDft { inverse, .. } => {
                let mut buf = v.to_vec();
                inverse.process(&mut buf);
                let s = 1.0 / (self.cols as f64).sqrt();
                buf.iter_mut().for_each(|a| *a *= s);
                buf
            }
            Repr::DenseReal(m) => (0..self.cols)
                .map(|j| (0..self.rows).map(|i| v[i] * m[(i, j)]).sum())
                .collect(),
            Repr::DenseComplex(m) => (0..self.cols)
                .map(|j| (0..self.rows).map(|i| m[(i, j)].conj() * v[i]).sum())
                .collect(),
        })
    }

    /// `Re(Psi^H v)`: the adjoint restricted to real signals.
    pub fn adjoint_real(&self, v: &Coefficients) -> Result<Vec<f64>> {
        self.check_output(v.len())?;
        match (&self.repr, v) {
            (Repr::Identity, Coefficients::Real(r)) => Ok(r.clone()),
            (Repr::DenseReal(m), Coefficients::Real(r)) => Ok(m
                .tr_mul(&nalgebra::DVector::from_column_slice(r))
                .data
                .into()),
            _ => Ok(self
                .adjoint_complex(&v.to_complex())?
                .into_iter()
                .map(|a| a.re)
                .collect()),
        }
    }

    /// `Re(Psi^H Psi)`, the operator's block of the real normal matrix.
    pub fn real_gram(&self) -> DMatrix<f64> {
        match &self.repr {
            Repr::Identity | Repr::UnitaryDft { .. } => DMatrix::identity(self.cols, self.cols),
            Repr::DenseReal(m) => m.tr_mul(m),
            Repr::DenseComplex(m) => m.ad_mul(m).map(|c| c.re),
        }
    }

    fn check_input(&self, len: usize) -> Result<()> {
        if len != self.cols {
            return Err(Error::dim(format!(
                "input length {len} does not match operator columns {}",
                self.cols
            )));
        }
        Ok(())
    }

    fn check_output(&self, len: usize) -> Result<()> {
        if len != self.rows {
            return Err(Error::dim(format!(
                "coefficient length {len} does not match operator rows {}",
                self.rows
            )));
        }
        Ok(())
    }
}

fn check_dense_shape(rows: usize, cols: usize) -> Result<()> {
    if cols == 0 || rows < cols {
        return Err(Error::dim(format!(
            "analysis operator shape {rows}x{cols} must satisfy L >= N >= 1"
        )));
    }
    Ok(())
}
