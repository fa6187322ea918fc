use serde::Serialize;

use super::gini::GiniSeries;
use super::AnalysisError;
use crate::economy::{best_cycle, Cycle, Economy};
use crate::matrix::SquareMatrix;
use crate::tradingpost::{Snapshot, Trajectory};

/// How "in the limit" is read off a finite run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailWindow {
    /// Fraction of the recorded rounds forming the tail.
    pub fraction: f64,
    /// Lower bound on tail length, in samples.
    pub min_samples: usize,
    /// Required run length, as a multiple of the best cycle's length.
    pub min_rounds_per_cycle_len: usize,
    /// Tolerance for periodicity of the amounts-Gini series.
    pub gini_period_tol: f64,
    /// Final-over-initial factor for a divergence verdict.
    pub divergence_factor: f64,
}

impl Default for TailWindow {
    fn default() -> Self {
        Self {
            fraction: 0.1,
            min_samples: 50,
            min_rounds_per_cycle_len: 100,
            gini_period_tol: 1e-6,
            divergence_factor: 100.0,
        }
    }
}

impl TailWindow {
    fn tail_len(&self, len: usize) -> usize {
        ((len as f64 * self.fraction).ceil() as usize)
            .max(self.min_samples)
            .min(len)
    }
}

/// Fraction of the predecessor's good received by a cycle player.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeFractions {
    pub player: usize,
    pub predecessor: usize,
    pub rounds: Vec<usize>,
    pub received: Vec<f64>,
    /// Share of the player's own budget bid on the predecessor's good.
    pub bid_share: Vec<f64>,
    pub tail_min: f64,
    /// Minimum of `received` over consecutive windows of the run, oldest first.
    pub window_minima: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationEstimate {
    /// Values at the last round that is a multiple of the cycle length, in
    /// cycle order.
    pub limits: Vec<f64>,
    pub anchor_round: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub cycle: Cycle,
    pub predecessor_fractions: Vec<EdgeFractions>,
    pub cut_rounds: Vec<usize>,
    /// Money crossing between the cycle and the rest, both directions.
    pub cut_money: Vec<f64>,
    pub cut_tail_max: f64,
    /// Budgets of cycle players rotate: `B_{i_m}(t0 + r) = B_{i_{m+r}}(t0)`.
    pub budget_limits: RotationEstimate,
    /// `x_i(t) / w^t` on cycle players at multiples of the cycle length.
    pub amount_limits: RotationEstimate,
    /// Largest tail budget among players off the cycle.
    pub off_cycle_budget_tail_max: f64,
    pub gini_period: Option<usize>,
    /// Tail mean of the cycle's share of all money.
    pub cycle_money_share: f64,
}

fn bid_frames(traj: &Trajectory) -> Result<Vec<(&Snapshot, &SquareMatrix)>, AnalysisError> {
    let frames: Vec<_> = traj.bid_snapshots().collect();
    if frames.is_empty() {
        return Err(AnalysisError::MissingBids);
    }
    Ok(frames)
}

/// The unique best cycle of `econ`, checked against the run length.
fn unique_best(traj: &Trajectory, econ: &Economy, window: &TailWindow) -> Result<Cycle, AnalysisError> {
    let best = best_cycle(econ)?;
    if !best.ties.is_empty() {
        return Err(AnalysisError::BestCycleNotUnique {
            ties: best.ties.len() + 1,
        });
    }
    let required = window.min_rounds_per_cycle_len * best.cycle.len();
    if traj.rounds() < required {
        return Err(AnalysisError::TrajectoryTooShort {
            rounds: traj.rounds(),
            required,
        });
    }
    Ok(best.cycle)
}

fn window_minima(series: &[f64], windows: usize) -> Vec<f64> {
    let chunk = series.len().div_ceil(windows).max(1);
    series
        .chunks(chunk)
        .map(|c| c.iter().copied().fold(f64::INFINITY, f64::min))
        .collect()
}

/// `b[i][j] / B_i`. Once `B_i` leaves the normal float range the last
/// value is held for the rest of the run.
pub fn bid_fraction_series(traj: &Trajectory, i: usize, j: usize) -> Vec<(usize, f64)> {
    let mut last = f64::NAN;
    let mut frozen = false;
    traj.bid_snapshots()
        .map(|(s, b)| {
            let budget = s.budgets[i];
            frozen |= !budget.is_normal();
            if !frozen {
                last = b[(i, j)] / budget;
            }
            (s.t, last)
        })
        .collect()
}

fn rotation_estimate(frames: &[(usize, Vec<f64>)], k: usize, tail_start: usize, relative: bool) -> RotationEstimate {
    let anchor = frames.iter().rev().find(|(t, _)| t % k == 0);
    let Some((anchor_round, limits)) = anchor.cloned() else {
        return RotationEstimate {
            limits: Vec::new(),
            anchor_round: 0,
            residual: f64::NAN,
        };
    };
    let mut residual = 0.0_f64;
    for (t, v) in frames.iter().filter(|(t, _)| *t >= tail_start) {
        let r = (*t as i64 - anchor_round as i64).rem_euclid(k as i64) as usize;
        for m in 0..k {
            let target = limits[(m + r) % k];
            let d = (v[m] - target).abs();
            residual = residual.max(if relative {
                d / target.abs().max(f64::MIN_POSITIVE)
            } else {
                d
            });
        }
    }
    RotationEstimate {
        limits,
        anchor_round,
        residual,
    }
}

/// Tail statistics for the limits that hold when the best cycle is unique.
pub fn limit_report(traj: &Trajectory, econ: &Economy, window: &TailWindow) -> Result<LimitReport, AnalysisError> {
    let cycle = unique_best(traj, econ, window)?;
    let frames = bid_frames(traj)?;
    let k = cycle.len();
    let on = |v: usize| cycle.contains(v);
    let n = econ.n();
    let tail = window.tail_len(frames.len());
    let tail_start = frames[frames.len() - tail].0.t;

    let mut predecessor_fractions = Vec::with_capacity(k);
    for &player in cycle.vertices() {
        let pred = cycle.predecessor(player).expect("vertex on cycle");
        let mut rounds = Vec::with_capacity(frames.len());
        let mut received = Vec::with_capacity(frames.len());
        for (s, b) in &frames {
            let col: f64 = (0..n).map(|r| b[(r, pred)]).sum();
            rounds.push(s.t);
            received.push(if col > 0.0 { b[(player, pred)] / col } else { f64::NAN });
        }
        let bid_share = bid_fraction_series(traj, player, pred)
            .into_iter()
            .map(|p| p.1)
            .collect();
        let tail_min = received[received.len() - tail..]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let window_minima = window_minima(&received, 10);
        predecessor_fractions.push(EdgeFractions {
            player,
            predecessor: pred,
            rounds,
            received,
            bid_share,
            tail_min,
            window_minima,
        });
    }

    let mut cut_rounds = Vec::with_capacity(frames.len());
    let mut cut_money = Vec::with_capacity(frames.len());
    let mut share = Vec::with_capacity(frames.len());
    for (s, b) in &frames {
        let crossing: f64 = b.iter().filter(|&(i, j, _)| on(i) != on(j)).map(|(_, _, v)| v).sum();
        cut_rounds.push(s.t);
        cut_money.push(crossing);
        let total: f64 = s.budgets.iter().sum();
        let on_cycle: f64 = cycle.vertices().iter().map(|&v| s.budgets[v]).sum();
        share.push(on_cycle / total);
    }
    let cut_tail_max = cut_money[cut_money.len() - tail..].iter().copied().fold(0.0, f64::max);
    let cycle_money_share = share[share.len() - tail..].iter().sum::<f64>() / tail as f64;

    let budget_frames: Vec<(usize, Vec<f64>)> = traj
        .snapshots
        .iter()
        .map(|s| (s.t, cycle.vertices().iter().map(|&v| s.budgets[v]).collect()))
        .collect();
    let budget_limits = rotation_estimate(&budget_frames, k, tail_start, false);

    // amounts of the normalized economy, sampled at multiples of k so the
    // rotation is the identity
    let ln_w = cycle.geo_mean().ln();
    let amount_frames: Vec<(usize, Vec<f64>)> = traj
        .snapshots
        .iter()
        .filter(|s| s.t % k == 0)
        .map(|s| {
            let v = cycle
                .vertices()
                .iter()
                .map(|&i| (s.log_amount(i) - s.t as f64 * ln_w).exp())
                .collect();
            (s.t, v)
        })
        .collect();
    let amount_limits = rotation_estimate(&amount_frames, 1, tail_start, true);

    let off_cycle_budget_tail_max = traj.snapshots[traj.len() - window.tail_len(traj.len())..]
        .iter()
        .flat_map(|s| (0..n).filter(|v| !on(*v)).map(move |v| s.budgets[v]))
        .fold(0.0, f64::max);

    let gini = GiniSeries::from_trajectory(traj);
    let gini_tail = &gini.amounts[gini.amounts.len() - window.tail_len(gini.amounts.len())..];
    let gini_period = scalar_period(gini_tail, window.gini_period_tol);

    Ok(LimitReport {
        cycle,
        predecessor_fractions,
        cut_rounds,
        cut_money,
        cut_tail_max,
        budget_limits,
        amount_limits,
        off_cycle_budget_tail_max,
        gini_period,
        cycle_money_share,
    })
}

/// Smallest `T` with `u[t + T] = u[t]` (absolute `tol`) across `u`.
pub fn scalar_period(u: &[f64], tol: f64) -> Option<usize> {
    let max_t = (u.len() / 3).min(64);
    (1..=max_t).find(|&p| (0..u.len() - p).all(|t| (u[t + p] - u[t]).abs() <= tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRatio {
    pub rounds: Vec<usize>,
    /// `ln(x_i / x_j)`; `+inf` once `x_j` underflows to zero.
    pub log_ratio: Vec<f64>,
    pub window_minima: Vec<f64>,
    pub diverges: bool,
}

/// `x_i(t) / x_j(t)` for `i` on the unique best cycle and `j` off it. The
/// ratio diverges when its minima over ten successive windows never decrease
/// and it ends at least `divergence_factor` above where it started.
pub fn inequality_ratio(
    traj: &Trajectory,
    econ: &Economy,
    i: usize,
    j: usize,
    window: &TailWindow,
) -> Result<InequalityRatio, AnalysisError> {
    let n = econ.n();
    for p in [i, j] {
        if p >= n {
            return Err(AnalysisError::PlayerOutOfRange { player: p, n });
        }
    }
    let rounds: Vec<usize> = traj.snapshots.iter().map(|s| s.t).collect();
    if i == j {
        let len = rounds.len();
        return Ok(InequalityRatio {
            rounds,
            log_ratio: vec![0.0; len],
            window_minima: vec![0.0; len.min(10)],
            diverges: false,
        });
    }
    let cycle = unique_best(traj, econ, window)?;
    if !cycle.contains(i) {
        return Err(AnalysisError::PlayerPlacement {
            player: i,
            on_cycle: false,
        });
    }
    if cycle.contains(j) {
        return Err(AnalysisError::PlayerPlacement {
            player: j,
            on_cycle: true,
        });
    }
    let log_ratio: Vec<f64> = traj
        .snapshots
        .iter()
        .map(|s| {
            if s.x[j] == 0.0 {
                f64::INFINITY
            } else {
                s.x[i].ln() - s.x[j].ln()
            }
        })
        .collect();
    let minima = window_minima(&log_ratio, 10);
    let monotone = minima.windows(2).all(|w| w[1] >= w[0]);
    let first = log_ratio[0];
    let last = *log_ratio.last().expect("non-empty trajectory");
    let diverges = monotone && last - first >= window.divergence_factor.ln();
    Ok(InequalityRatio {
        rounds,
        log_ratio,
        window_minima: minima,
        diverges,
    })
}
