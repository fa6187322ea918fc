use serde::Serialize;

use super::AnalysisError;
use crate::tradingpost::Trajectory;

/// `sum_i sum_j |u_i - u_j| / (2 n sum_i u_i)`; at most `(n - 1) / n`.
pub fn gini(u: &[f64]) -> Result<f64, AnalysisError> {
    let total: f64 = u.iter().sum();
    if !(total > 0.0) || u.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(AnalysisError::ZeroVector);
    }
    let n = u.len();
    let mut sorted = u.to_vec();
    sorted.sort_by(f64::total_cmp);
    // pairs counted once on the sorted order: sum_{i<j} (u_j - u_i)
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, v)| (2.0 * i as f64 - n as f64 + 1.0) * v)
        .sum();
    Ok((weighted / (n as f64 * total)).max(0.0))
}

/// Per-round Gini of amounts and of budgets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GiniSeries {
    pub rounds: Vec<usize>,
    pub amounts: Vec<f64>,
    pub budgets: Vec<f64>,
}

impl GiniSeries {
    /// Rounds where every amount (or budget) is zero get `NaN`.
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let mut out = Self {
            rounds: Vec::with_capacity(traj.len()),
            amounts: Vec::with_capacity(traj.len()),
            budgets: Vec::with_capacity(traj.len()),
        };
        for s in &traj.snapshots {
            out.rounds.push(s.t);
            out.amounts.push(gini(&s.x).unwrap_or(f64::NAN));
            out.budgets.push(gini(&s.budgets).unwrap_or(f64::NAN));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairwise(u: &[f64]) -> f64 {
        let n = u.len() as f64;
        let s: f64 = u.iter().sum();
        let mut acc = 0.0;
        for a in u {
            for b in u {
                acc += (a - b).abs();
            }
        }
        acc / (2.0 * n * s)
    }

    #[test]
    fn small_vectors() {
        assert_eq!(gini(&[1.0, 1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert!((gini(&[1.0, 0.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((gini(&[1.0, 0.0, 0.0, 0.0]).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(gini(&[0.0, 0.0]), Err(AnalysisError::ZeroVector));
    }

    #[test]
    fn agrees_with_pairwise_sum() {
        let u = [0.3, 4.0, 1.7, 0.0, 2.2, 9.1];
        assert!((gini(&u).unwrap() - pairwise(&u)).abs() < 1e-14);
    }
}
