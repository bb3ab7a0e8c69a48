//! Exact reference solutions for tiny equality-constrained problems.

use nalgebra::{DMatrix, DVector};

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=(n - (k - cur.len())) {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), f);
    }
}

fn solve_square(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = a.clone().svd(false, false);
    let s = &svd.singular_values;
    if s.min() <= 1e-10 * s.max() {
        return None;
    }
    a.clone().lu().solve(b)
}

/// `min ||W x||_1 s.t. Phi x = y` for real `W` of full column rank.
///
/// The epigraph LP attains its optimum at a vertex, where `N - M` rows of
/// `W x` vanish; every such choice is tried.
pub fn l1_vertex_oracle(w: &DMatrix<f64>, phi: &DMatrix<f64>, y: &[f64]) -> (f64, Vec<f64>) {
    let (m, n) = phi.shape();
    let l = w.nrows();
    let mut best = (f64::INFINITY, vec![0.0; n]);
    let mut rhs = DVector::zeros(n);
    rhs.rows_mut(0, m).copy_from_slice(y);
    combinations(l, n - m, &mut |rows| {
        let mut a = DMatrix::zeros(n, n);
        a.rows_mut(0, m).copy_from(phi);
        for (j, &r) in rows.iter().enumerate() {
            a.row_mut(m + j).copy_from(&w.row(r));
        }
        if let Some(x) = solve_square(&a, &rhs) {
            let obj = (w * &x).iter().map(|v| v.abs()).sum::<f64>();
            if obj < best.0 {
                best = (obj, x.as_slice().to_vec());
            }
        }
    });
    best
}

/// Sparsest `x` with `Phi x = y`, by exhaustive support search.
pub fn l0_oracle(phi: &DMatrix<f64>, y: &[f64]) -> Vec<f64> {
    let n = phi.ncols();
    let yv = DVector::from_column_slice(y);
    let tol = 1e-9 * (1.0 + yv.norm());
    if yv.norm() <= tol {
        return vec![0.0; n];
    }
    for k in 1..=n {
        let mut found = None;
        combinations(n, k, &mut |s| {
            if found.is_some() {
                return;
            }
            let sub = phi.select_columns(s);
            let Ok(coef) = sub.clone().svd(true, true).solve(&yv, 1e-12) else {
                return;
            };
            if (&sub * &coef - &yv).norm() <= tol {
                let mut x = vec![0.0; n];
                for (j, &i) in s.iter().enumerate() {
                    x[i] = coef[j];
                }
                found = Some(x);
            }
        });
        if let Some(x) = found {
            return x;
        }
    }
    unreachable!("a full-rank system always has a solution")
}
