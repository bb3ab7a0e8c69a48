use std::time::Duration;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::operators::{l2_norm, AnalysisOperator, MeasurementMatrix, Signal};

/// Relative slack (in units of `||y||`) granted to the range test so that
/// rounding does not make `epsilon = 0` problems infeasible.
pub(crate) const RANGE_TOL: f64 = 1e-9;

/// One weighted sparsity term `lambda * ||Psi x||_1`.
#[derive(Debug, Clone)]
pub struct Term {
    pub weight: f64,
    pub operator: AnalysisOperator,
}

impl Term {
    pub fn new(weight: f64, operator: AnalysisOperator) -> Self {
        Self { weight, operator }
    }
}

/// Solves `Phi d = r` for the minimum-norm `d`, projecting `r` onto the
/// range of `Phi` when `Phi` is rank-deficient.
#[derive(Debug, Clone)]
pub(crate) enum MinNormSolver {
    /// Cholesky factor of `Phi Phi^T`.
    Cholesky(Cholesky<f64, Dyn>),
    /// Explicit pseudo-inverse `Phi^+` (`N x M`).
    Pseudo(DMatrix<f64>),
}

impl MinNormSolver {
    pub(crate) fn new(phi: &DMatrix<f64>) -> Self {
        let gram = phi * phi.transpose();
        let diag_max = gram.diagonal().max();
        if let Some(chol) = Cholesky::new(gram) {
            let l = chol.l_dirty().diagonal();
            // Reject numerically singular factors; the pseudo-inverse handles them.
            let min_pivot = l.iter().fold(f64::INFINITY, |a, &b| a.min(b * b));
            if min_pivot > diag_max * 1e-13 {
                return MinNormSolver::Cholesky(chol);
            }
        }
        let svd = phi.clone().svd(true, true);
        let tol = svd.singular_values.max() * phi.nrows().max(phi.ncols()) as f64 * f64::EPSILON;
        MinNormSolver::Pseudo(svd.pseudo_inverse(tol).expect("SVD computed with U and V"))
    }

    pub(crate) fn solve(&self, phi: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
        match self {
            MinNormSolver::Cholesky(chol) => phi.tr_mul(&chol.solve(r)),
            MinNormSolver::Pseudo(pinv) => pinv * r,
        }
    }
}

/// One instance of
/// `minimize sum_p lambda_p ||Psi_p x||_1  s.t.  ||y - Phi x||_2 <= epsilon`.
#[derive(Debug, Clone)]
pub struct RecoveryProblem {
    y: Vec<f64>,
    phi: MeasurementMatrix,
    terms: Vec<Term>,
    epsilon: f64,
    min_norm: MinNormSolver,
}

impl RecoveryProblem {
    /// Validates the instance. Fails with [`Error::Infeasible`] when the
    /// distance from `y` to the range of `Phi` exceeds `epsilon`.
    pub fn new(y: Vec<f64>, phi: MeasurementMatrix, terms: Vec<Term>, epsilon: f64) -> Result<Self> {
        if y.len() != phi.rows() {
            return Err(Error::dim(format!(
                "measurement length {} does not match M={}",
                y.len(),
                phi.rows()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::UndefinedInput("measurements must be finite".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidProblem("at least one sparsity term is required".into()));
        }
        if terms.iter().any(|t| !(t.weight.is_finite() && t.weight >= 0.0)) {
            return Err(Error::InvalidProblem("term weights must be finite and nonnegative".into()));
        }
        if terms.iter().all(|t| t.weight == 0.0) {
            return Err(Error::InvalidProblem("at least one term weight must be positive".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.operator.cols() != phi.cols()) {
            return Err(Error::dim(format!(
                "analysis operator has {} columns, expected N={}",
                t.operator.cols(),
                phi.cols()
            )));
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidProblem("epsilon must be finite and nonnegative".into()));
        }
        let min_norm = MinNormSolver::new(phi.matrix());
        let problem = Self {
            y,
            phi,
            terms,
            epsilon,
            min_norm,
        };
        let distance = problem.range_distance();
        if distance > epsilon + RANGE_TOL * problem.y_norm() {
            return Err(Error::Infeasible { distance, epsilon });
        }
        Ok(problem)
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn phi(&self) -> &MeasurementMatrix {
        &self.phi
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn signal_len(&self) -> usize {
        self.phi.cols()
    }

    /// Same problem with every term weight multiplied by `factor`.
    pub fn with_scaled_weights(&self, factor: f64) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.weight * factor, t.operator.clone()))
            .collect();
        Self::new(self.y.clone(), self.phi.clone(), terms, self.epsilon)
    }

    /// `sum_p lambda_p ||Psi_p x||_1` with complex-modulus L1.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        self.terms.iter().try_fold(0.0, |acc, t| {
            Ok(acc + t.weight * t.operator.apply(x)?.l1_norm())
        })
    }

    /// `||y - Phi x||_2`.
    pub fn residual_norm(&self, x: &[f64]) -> Result<f64> {
        let phi_x = self.phi.apply(x)?;
        Ok(self
            .y
            .iter()
            .zip(&phi_x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    /// Distance from `y` to the range of `Phi`.
    pub fn range_distance(&self) -> f64 {
        let y = DVector::from_column_slice(&self.y);
        let x = self.min_norm.solve(self.phi.matrix(), &y);
        (self.phi.matrix() * x - y).norm()
    }

    /// Moves `x` by the minimum-norm correction that places its residual
    /// on the epsilon-ball (along the current residual direction). No-op for
    /// points that are already feasible.
    pub(crate) fn restore_feasibility(&self, x: &mut DVector<f64>) {
        let phi = self.phi.matrix();
        let r = DVector::from_column_slice(&self.y) - phi * &*x;
        let rn = r.norm();
        if rn <= self.epsilon {
            return;
        }
        let target = &r * (self.epsilon / rn);
        *x += self.min_norm.solve(phi, &(r - target));
    }

    pub(crate) fn y_norm(&self) -> f64 {
        l2_norm(&self.y)
    }

    /// Largest residual accepted as inside the ball: `eps * (1 + 1e-6)`
    /// plus a rounding allowance so that `eps = 0` is attainable.
    pub fn residual_limit(&self) -> f64 {
        self.epsilon * (1.0 + super::FEASIBILITY_TOL) + ROUNDING_SLACK * self.y_norm()
    }
}

const ROUNDING_SLACK: f64 = 1e-12;

/// ADMM parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Initial penalty parameter.
    pub rho: f64,
    pub max_iters: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Relaxation factor in `[1.0, 1.8]`.
    pub over_relaxation: f64,
    /// Rebalance `rho` from the primal/dual residual ratio.
    pub adaptive_rho: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            max_iters: 20_000,
            abs_tol: 1e-7,
            rel_tol: 1e-5,
            over_relaxation: 1.6,
            adaptive_rho: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(Error::Config("rho must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be positive".into()));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !(1.0..=1.8).contains(&self.over_relaxation) {
            return Err(Error::Config("over_relaxation must lie in [1.0, 1.8]".into()));
        }
        Ok(())
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x_hat: Signal,
    /// `sum_p lambda_p ||Psi_p x_hat||_1`.
    pub objective: f64,
    /// `||y - Phi x_hat||_2`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: Duration,
}

impl SolveReport {
    pub fn seconds(&self) -> f64 {
        self.wall_time.as_secs_f64()
    }
}
