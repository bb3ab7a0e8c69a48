use super::problem::{RecoveryProblem, SolveReport};

/// Relative tolerance on the residual ball used by feasibility checks.
pub const FEASIBILITY_TOL: f64 = 1e-6;

/// Feasibility diagnostic for a solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityDiagnostic {
    /// `epsilon - ||y - Phi x_hat||_2`; negative when outside the ball.
    pub slack: f64,
    pub objective: f64,
    pub violation: bool,
}

/// Flags a violation when the residual exceeds `epsilon * (1 + 1e-6)`
/// (plus a rounding allowance relative to `||y||`).
///
/// Uses the residual and objective recorded in the report.
pub fn kkt_feasibility_check(report: &SolveReport, problem: &RecoveryProblem) -> FeasibilityDiagnostic {
    let eps = problem.epsilon();
    let slack = eps - report.residual;
    FeasibilityDiagnostic {
        slack,
        objective: report.objective,
        violation: report.residual > problem.residual_limit(),
    }
}
