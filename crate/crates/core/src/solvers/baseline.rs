use std::time::Instant;

use nalgebra::{Cholesky, DVector};

use super::problem::SolveReport;
use crate::error::{Error, Result};
use crate::operators::{MeasurementMatrix, Signal};

/// Largest accepted condition number of `Phi Phi^T`.
pub const LS_CONDITION_LIMIT: f64 = 1e12;

/// Minimum-L2-norm solution of `y = Phi x`, `x = Phi^T (Phi Phi^T)^{-1} y`.
///
/// The objective field carries `||x_hat||_2`.
pub fn solve_ls_baseline(y: &[f64], phi: &MeasurementMatrix) -> Result<SolveReport> {
    let start = Instant::now();
    if y.len() != phi.rows() {
        return Err(Error::dim(format!(
            "measurement length {} does not match M={}",
            y.len(),
            phi.rows()
        )));
    }
    let a = phi.matrix();
    let gram = a * a.transpose();
    let eig = gram.clone().symmetric_eigenvalues();
    let (lo, hi) = eig
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > LS_CONDITION_LIMIT {
        return Err(Error::IllConditioned {
            condition,
            limit: LS_CONDITION_LIMIT,
        });
    }
    let chol = Cholesky::new(gram).ok_or(Error::IllConditioned {
        condition,
        limit: LS_CONDITION_LIMIT,
    })?;
    let yv = DVector::from_column_slice(y);
    let x = a.tr_mul(&chol.solve(&yv));
    let residual = (a * &x - &yv).norm();
    Ok(SolveReport {
        objective: x.norm(),
        x_hat: Signal::new(x.data.into())?,
        residual,
        iterations: 1,
        converged: true,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::MeasurementKind;
    use crate::rng;
    use nalgebra::DMatrix;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn identity_returns_measurements() {
        let phi = MeasurementMatrix::from_matrix(DMatrix::identity(4, 4)).unwrap();
        let y = [1.0, -2.0, 3.0, 0.5];
        let r = solve_ls_baseline(&y, &phi).unwrap();
        for (a, b) in r.x_hat.samples().iter().zip(y) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn single_row_min_norm() {
        let phi = MeasurementMatrix::from_rows(&[vec![1.0, 0.0, 0.0]]).unwrap();
        let r = solve_ls_baseline(&[2.0], &phi).unwrap();
        assert_eq!(r.x_hat.samples(), &[2.0, 0.0, 0.0]);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn rank_deficient_is_ill_conditioned() {
        let phi = MeasurementMatrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]]).unwrap();
        assert!(matches!(
            solve_ls_baseline(&[1.0, 2.0], &phi),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn min_norm_beats_null_space_perturbations() {
        let phi = MeasurementMatrix::generate(MeasurementKind::Gaussian, 32, 64, 21).unwrap();
        let mut r = rng::seeded(77);
        let y: Vec<f64> = (0..32).map(|_| r.sample(StandardNormal)).collect();
        let ls = solve_ls_baseline(&y, &phi).unwrap();
        let xh = DVector::from_column_slice(ls.x_hat.samples());
        let a = phi.matrix();
        // null-space projector I - A^T (A A^T)^{-1} A built independently by SVD
        let svd = a.clone().svd(false, true);
        let vt = svd.v_t.unwrap();
        for _ in 0..100 {
            let g = DVector::from_fn(64, |_, _| r.sample::<f64, _>(StandardNormal));
            let null_dir = &g - vt.transpose() * (&vt * &g);
            let feasible = &xh + null_dir;
            assert!((a * &feasible - DVector::from_column_slice(&y)).norm() < 1e-9);
            assert!(xh.norm() <= feasible.norm() + 1e-12);
        }
    }
}
