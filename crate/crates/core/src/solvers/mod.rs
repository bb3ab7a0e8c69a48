//! Multi-L1 recovery solvers, baselines and verification oracle.

mod admm;
mod baseline;
mod kkt;
mod oracle;
mod problem;

pub use admm::solve_multi_l1;
pub use baseline::{solve_ls_baseline, LS_CONDITION_LIMIT};
pub use kkt::{kkt_feasibility_check, FeasibilityDiagnostic, FEASIBILITY_TOL};
pub use oracle::{oracle_subgradient, StepSchedule};
pub use problem::{RecoveryProblem, SolveReport, SolverConfig, Term};

use crate::error::Result;
use crate::operators::{AnalysisOperator, MeasurementMatrix};

/// Time-domain BPDN: a single identity term.
pub fn solve_t_l1(
    y: &[f64],
    phi: &MeasurementMatrix,
    epsilon: f64,
    config: &SolverConfig,
) -> Result<SolveReport> {
    let terms = vec![Term::new(1.0, AnalysisOperator::identity(phi.cols())?)];
    let problem = RecoveryProblem::new(y.to_vec(), phi.clone(), terms, epsilon)?;
    solve_multi_l1(&problem, config)
}

/// Frequency-domain BPDN: a single unitary-DFT term.
pub fn solve_f_l1(
    y: &[f64],
    phi: &MeasurementMatrix,
    epsilon: f64,
    config: &SolverConfig,
) -> Result<SolveReport> {
    let terms = vec![Term::new(1.0, AnalysisOperator::unitary_dft(phi.cols())?)];
    let problem = RecoveryProblem::new(y.to_vec(), phi.clone(), terms, epsilon)?;
    solve_multi_l1(&problem, config)
}

/// `||x||_1 + lambda2 ||F x||_1` with `F` the unitary DFT.
pub fn solve_l1_l1(
    y: &[f64],
    phi: &MeasurementMatrix,
    epsilon: f64,
    lambda2: f64,
    config: &SolverConfig,
) -> Result<SolveReport> {
    let problem = l1_l1_problem(y, phi, epsilon, lambda2)?;
    solve_multi_l1(&problem, config)
}

pub fn l1_l1_problem(
    y: &[f64],
    phi: &MeasurementMatrix,
    epsilon: f64,
    lambda2: f64,
) -> Result<RecoveryProblem> {
    let n = phi.cols();
    let terms = vec![
        Term::new(1.0, AnalysisOperator::identity(n)?),
        Term::new(lambda2, AnalysisOperator::unitary_dft(n)?),
    ];
    RecoveryProblem::new(y.to_vec(), phi.clone(), terms, epsilon)
}
