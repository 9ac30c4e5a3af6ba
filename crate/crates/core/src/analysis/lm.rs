//! Damped least squares (Levenberg-Marquardt) on small dense problems.

use super::AnalysisError;

/// Relative cost change below which an accepted step ends the iteration.
pub const COST_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;

/// A least-squares problem with residuals r_i(p) = model_i(p) - data_i.
pub trait LeastSquares {
    fn n_params(&self) -> usize;
    fn n_residuals(&self) -> usize;
    /// Fills `residuals`, and `jacobian` (row-major, n_residuals x n_params,
    /// d r_i / d p_j) when given.
    fn evaluate(&self, params: &[f64], residuals: &mut [f64], jacobian: Option<&mut [f64]>);
    /// Whether a trial point is admissible (e.g. positive widths).
    fn admissible(&self, _params: &[f64]) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub params: Vec<f64>,
    /// Sum of squared residuals.
    pub sum_squares: f64,
    pub iterations: usize,
    /// s^2 (J^T J)^-1 with s^2 = SSR / (n - p); None when J^T J is singular
    /// or there are no degrees of freedom left.
    pub covariance: Option<Vec<Vec<f64>>>,
}

pub fn solve<P: LeastSquares + ?Sized>(problem: &P, initial: &[f64]) -> Result<Solution, AnalysisError> {
    let n = problem.n_residuals();
    let p = problem.n_params();
    if n < p {
        return Err(AnalysisError::TooFewSamples { needed: p, got: n });
    }
    let mut params = initial.to_vec();
    let mut r = vec![0.0; n];
    let mut jac = vec![0.0; n * p];
    problem.evaluate(&params, &mut r, Some(&mut jac));
    let mut cost = sum_squares(&r);
    if !cost.is_finite() {
        return Err(AnalysisError::NonFiniteModel);
    }
    let mut damping = 1e-3;
    let mut trial_r = vec![0.0; n];

    for iteration in 1..=MAX_ITERATIONS {
        let (jtj, jtr) = normal_equations(&jac, &r, n, p);
        let mut a = jtj.clone();
        for (k, row) in a.iter_mut().enumerate() {
            row[k] += damping * jtj[k][k].max(1e-300);
        }
        let rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
        let step = solve_linear(a, rhs);
        let trial: Option<Vec<f64>> = step.map(|s| params.iter().zip(&s).map(|(x, d)| x + d).collect());
        let accepted = match trial {
            Some(t) if problem.admissible(&t) => {
                problem.evaluate(&t, &mut trial_r, None);
                let trial_cost = sum_squares(&trial_r);
                if trial_cost.is_finite() && trial_cost <= cost {
                    Some((t, trial_cost))
                } else {
                    None
                }
            }
            _ => None,
        };
        match accepted {
            Some((t, trial_cost)) => {
                let change = if cost > 0.0 { (cost - trial_cost) / cost } else { 0.0 };
                params = t;
                cost = trial_cost;
                problem.evaluate(&params, &mut r, Some(&mut jac));
                damping = (damping / 10.0).max(1e-15);
                if change < COST_TOLERANCE {
                    return Ok(finish(problem, params, cost, iteration, &jac, n, p));
                }
            }
            None => {
                damping *= 10.0;
                // No descent direction left at machine precision.
                if damping > 1e16 {
                    return Ok(finish(problem, params, cost, iteration, &jac, n, p));
                }
            }
        }
    }
    Err(AnalysisError::NotConverged {
        iterations: MAX_ITERATIONS,
    })
}

fn finish<P: LeastSquares + ?Sized>(
    _problem: &P,
    params: Vec<f64>,
    cost: f64,
    iterations: usize,
    jac: &[f64],
    n: usize,
    p: usize,
) -> Solution {
    let covariance = if n > p {
        let (jtj, _) = normal_equations(jac, &vec![0.0; n], n, p);
        invert(jtj).map(|inv| {
            let s2 = cost / (n - p) as f64;
            inv.into_iter()
                .map(|row| row.into_iter().map(|v| v * s2).collect())
                .collect()
        })
    } else {
        None
    };
    Solution {
        params,
        sum_squares: cost,
        iterations,
        covariance,
    }
}

fn sum_squares(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn normal_equations(jac: &[f64], r: &[f64], n: usize, p: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut jtj = vec![vec![0.0; p]; p];
    let mut jtr = vec![0.0; p];
    for i in 0..n {
        let row = &jac[i * p..(i + 1) * p];
        for a in 0..p {
            jtr[a] += row[a] * r[i];
            for b in a..p {
                jtj[a][b] += row[a] * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            jtj[a][b] = jtj[b][a];
        }
    }
    (jtj, jtr)
}

/// Gaussian elimination with partial pivoting. None if singular.
pub(crate) fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 || !a[pivot][col].is_finite() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn invert(a: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut columns = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        columns.push(solve_linear(a.clone(), e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| columns[j][i]).collect()).collect())
}
