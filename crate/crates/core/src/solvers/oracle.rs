//! Projected-subgradient reference solver.
//!
//! Slow but structurally independent of the ADMM path: it shares only the
//! operator applications. Iterates are kept feasible with the exact
//! Euclidean projection onto `{x : ||y - Phi x||_2 <= eps}`, computed from a
//! thin SVD of `Phi` and a scalar secular equation.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::problem::{RecoveryProblem, SolveReport, RANGE_TOL};
use crate::error::{Error, Result};
use crate::operators::{Coefficients, Signal};

/// Step sizes along the normalized subgradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `c / sqrt(k)`.
    InvSqrt { c: f64 },
    /// `c_s / sqrt(k)` restarted from the best iterate `stages` times, with
    /// `c_{s+1} = shrink * c_s`.
    Restarted { c: f64, stages: usize, shrink: f64 },
}

impl Default for StepSchedule {
    /// Tuned for unit-norm signals: five restarts of `0.1 / sqrt(k)`, each
    /// with the base step cut by 0.3.
    fn default() -> Self {
        StepSchedule::Restarted {
            c: 0.1,
            stages: 5,
            shrink: 0.3,
        }
    }
}

/// Exact projector onto the residual ball.
struct BallProjector {
    /// `V^T` restricted to the nonzero singular directions.
    vt: DMatrix<f64>,
    sigma: DVector<f64>,
    /// `U^T y`.
    b: DVector<f64>,
    eps: f64,
}

impl BallProjector {
    fn new(problem: &RecoveryProblem) -> Result<Self> {
        let phi = problem.phi().matrix();
        let svd = phi.clone().svd(true, true);
        let u = svd.u.expect("requested U");
        let vt = svd.v_t.expect("requested V^T");
        let y = DVector::from_column_slice(problem.y());
        let b = u.tr_mul(&y);
        let tol = svd.singular_values.max() * phi.ncols() as f64 * f64::EPSILON;
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > tol)
            .collect();
        // components of U^T y that Phi cannot reach
        let unreachable: f64 = (0..b.len())
            .filter(|i| !keep.contains(i))
            .map(|i| b[i] * b[i])
            .sum::<f64>()
            + (&y - &u * &b).norm_squared();
        if unreachable.sqrt() > problem.epsilon() + RANGE_TOL * y.norm() {
            return Err(Error::Infeasible {
                distance: unreachable.sqrt(),
                epsilon: problem.epsilon(),
            });
        }
        let eps2 = (problem.epsilon().powi(2) - unreachable).max(0.0);
        Ok(Self {
            vt: DMatrix::from_fn(keep.len(), phi.ncols(), |r, c| vt[(keep[r], c)]),
            sigma: DVector::from_fn(keep.len(), |r, _| svd.singular_values[keep[r]]),
            b: DVector::from_fn(keep.len(), |r, _| b[keep[r]]),
            eps: eps2.sqrt(),
        })
    }

    fn project(&self, x: &mut DVector<f64>) {
        let c = &self.vt * &*x;
        let e: DVector<f64> = c.component_mul(&self.sigma) - &self.b;
        if e.norm() <= self.eps {
            return;
        }
        let target = if self.eps == 0.0 {
            self.b.component_div(&self.sigma)
        } else {
            let mu = self.secular_root(&e);
            DVector::from_fn(c.len(), |i, _| {
                let s = self.sigma[i];
                (c[i] + mu * s * self.b[i]) / (1.0 + mu * s * s)
            })
        };
        *x += self.vt.tr_mul(&(target - c));
    }

    /// Solves `sum_i (e_i / (1 + mu s_i^2))^2 = eps^2` for `mu > 0` by Newton
    /// on `1/sqrt(g) - 1/eps`, which converges monotonically from `mu = 0`.
    fn secular_root(&self, e: &DVector<f64>) -> f64 {
        let mut mu = 0.0;
        for _ in 0..100 {
            let mut g = 0.0;
            let mut dg = 0.0;
            for i in 0..e.len() {
                let s2 = self.sigma[i] * self.sigma[i];
                let d = 1.0 + mu * s2;
                g += (e[i] / d).powi(2);
                dg += -2.0 * s2 * e[i] * e[i] / (d * d * d);
            }
            let h = 1.0 / g.sqrt() - 1.0 / self.eps;
            if h.abs() * self.eps < 1e-15 {
                break;
            }
            let dh = -0.5 * g.powf(-1.5) * dg;
            mu -= h / dh;
            if mu < 0.0 {
                mu = 0.0;
            }
        }
        mu
    }
}

fn sign(c: &Coefficients) -> Coefficients {
    match c {
        Coefficients::Real(v) => Coefficients::Real(
            v.iter()
                .map(|&a| if a > 0.0 { 1.0 } else if a < 0.0 { -1.0 } else { 0.0 })
                .collect(),
        ),
        Coefficients::Complex(v) => Coefficients::Complex(
            v.iter()
                .map(|&a| {
                    let m = a.norm();
                    if m > 0.0 { a / m } else { Complex64::new(0.0, 0.0) }
                })
                .collect(),
        ),
    }
}

fn subgradient(problem: &RecoveryProblem, x: &[f64]) -> Result<(f64, DVector<f64>)> {
    let mut g = DVector::zeros(x.len());
    let mut f = 0.0;
    for t in problem.terms() {
        let theta = t.operator.apply(x)?;
        f += t.weight * theta.l1_norm();
        g += DVector::from_vec(t.operator.adjoint_real(&sign(&theta))?) * t.weight;
    }
    Ok((f, g))
}

/// Runs projected subgradient descent for `iterations` steps and returns the
/// best (always feasible) iterate.
pub fn oracle_subgradient(
    problem: &RecoveryProblem,
    iterations: usize,
    schedule: StepSchedule,
) -> Result<SolveReport> {
    let start = Instant::now();
    let n = problem.signal_len();
    let y_norm = problem.y_norm();
    if y_norm <= problem.epsilon() {
        return super::admm::zero_report(n, y_norm, start);
    }
    let projector = BallProjector::new(problem)?;
    let mut x = DVector::zeros(n);
    projector.project(&mut x);

    let (stages, mut c, shrink) = match schedule {
        StepSchedule::InvSqrt { c } => (1, c, 1.0),
        StepSchedule::Restarted { c, stages, shrink } => (stages.max(1), c, shrink),
    };
    let per_stage = iterations.div_ceil(stages);

    let (mut best_f, _) = subgradient(problem, x.as_slice())?;
    let mut best_x = x.clone();
    let mut done = 0;
    'stages: for _ in 0..stages {
        x.copy_from(&best_x);
        for k in 1..=per_stage {
            if done == iterations {
                break 'stages;
            }
            done += 1;
            let (f, g) = subgradient(problem, x.as_slice())?;
            if f < best_f {
                best_f = f;
                best_x.copy_from(&x);
            }
            let gn = g.norm();
            if gn == 0.0 {
                break 'stages;
            }
            x.axpy(-c / ((k as f64).sqrt() * gn), &g, 1.0);
            projector.project(&mut x);
        }
        c *= shrink;
    }
    let (f, _) = subgradient(problem, x.as_slice())?;
    if f < best_f {
        best_f = f;
        best_x.copy_from(&x);
    }

    let xs: Vec<f64> = best_x.as_slice().to_vec();
    let residual = problem.residual_norm(&xs)?;
    Ok(SolveReport {
        x_hat: Signal::new(xs)?,
        objective: best_f,
        residual,
        iterations: done,
        converged: residual <= problem.residual_limit(),
        wall_time: start.elapsed(),
    })
}
