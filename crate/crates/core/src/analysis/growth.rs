use std::ops::RangeInclusive;

use serde::Serialize;

use super::AnalysisError;
use crate::economy::{Cycle, Economy};
use crate::matrix::SquareMatrix;
use crate::tradingpost::{Snapshot, Trajectory};

/// Slope magnitude below which a log-amount series counts as flat.
pub const SLOPE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialCheck {
    pub max_drift: f64,
    /// Last round included; the check stops early once a bid or amount on
    /// the cycle leaves the normal floating-point range.
    pub checked_through: usize,
}

fn cycle_log_potential(cycle: &Cycle, s: &Snapshot, b: &SquareMatrix) -> Option<f64> {
    let mut acc = 0.0;
    for (consumer, good) in cycle.edges() {
        let bid = b[(consumer, good)];
        if !bid.is_normal() {
            return None;
        }
        acc += bid.ln();
    }
    for &v in cycle.vertices() {
        if !s.x[v].is_normal() {
            return None;
        }
        acc += s.x[v].ln() + s.log_scale;
    }
    Some(acc)
}

/// Largest `|F(t) / (alpha^t F(0)) - 1|` over rounds with recorded bids,
/// where `F(t)` is the product of the cycle's bids and its players' amounts.
pub fn cycle_potential_check(
    traj: &Trajectory,
    econ: &Economy,
    cycle: &Cycle,
) -> Result<PotentialCheck, AnalysisError> {
    let cycle = Cycle::new(econ, cycle.vertices())?;
    let log_alpha: f64 = cycle.edges().map(|(c, g)| econ.coefficient(c, g).ln()).sum();
    let mut with_bids = traj.bid_snapshots();
    let (s0, b0) = with_bids.next().ok_or(AnalysisError::MissingBids)?;
    if let Some((consumer, good)) = cycle.edges().find(|&(c, g)| b0[(c, g)] <= 0.0) {
        return Err(AnalysisError::ZeroBidOnCycle { consumer, good });
    }
    let f0 = cycle_log_potential(&cycle, s0, b0).ok_or(AnalysisError::ZeroBidOnCycle {
        consumer: cycle.vertices()[0],
        good: cycle.vertices()[0],
    })?;
    let mut max_drift = 0.0_f64;
    let mut checked_through = s0.t;
    for (s, b) in with_bids {
        let Some(f) = cycle_log_potential(&cycle, s, b) else {
            break;
        };
        let expected = f0 + (s.t - s0.t) as f64 * log_alpha;
        max_drift = max_drift.max((f - expected).exp_m1().abs());
        checked_through = s.t;
    }
    Ok(PotentialCheck {
        max_drift,
        checked_through,
    })
}

fn snapshots_in<'a>(traj: &'a Trajectory, window: &RangeInclusive<usize>) -> impl Iterator<Item = &'a Snapshot> + 'a {
    let window = window.clone();
    traj.snapshots.iter().filter(move |s| window.contains(&s.t))
}

/// Least-squares slope of `(t, y)` pairs.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, y) in points {
        sxy += (t - mt) * (y - my);
        sxx += (t - mt) * (t - mt);
    }
    sxy / sxx
}

/// Slope of `ln(true amount)` against the round over `window` (inclusive).
pub fn growth_rate(traj: &Trajectory, player: usize, window: RangeInclusive<usize>) -> Result<f64, AnalysisError> {
    if player >= traj.n() {
        return Err(AnalysisError::PlayerOutOfRange { player, n: traj.n() });
    }
    let mut points = Vec::new();
    for s in snapshots_in(traj, &window) {
        let y = s.log_amount(player);
        if !y.is_finite() {
            return Err(AnalysisError::VanishedAmount { player, round: s.t });
        }
        points.push((s.t as f64, y));
    }
    if points.len() < 10 {
        return Err(AnalysisError::WindowTooShort { samples: points.len() });
    }
    Ok(least_squares_slope(&points))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayerBounds {
    pub player: usize,
    pub on_cycle: bool,
    /// `min_t x_i(t) / alpha^(t/k)`
    pub lower: f64,
    /// `max_t x_i(t) / alpha^(t/k)`
    pub upper: f64,
    /// Slope of `ln(x_i(t) / alpha^(t/k))` over the second half.
    pub late_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthBounds {
    pub alpha: f64,
    pub cycle_len: usize,
    /// Realized lower constant over the cycle players.
    pub gamma_hat: f64,
    /// Realized upper constant over all players.
    pub zeta_hat: f64,
    pub players: Vec<PlayerBounds>,
    pub violations: Vec<String>,
}

/// Realized constants for the two-sided growth bound along `cycle`. A player
/// is flagged when the rescaled amount still trends up (unbounded) or, for
/// cycle players, trends down or hits zero.
pub fn growth_bounds_check(traj: &Trajectory, econ: &Economy, cycle: &Cycle) -> Result<GrowthBounds, AnalysisError> {
    let cycle = Cycle::new(econ, cycle.vertices())?;
    let k = cycle.len();
    let rate = cycle.product().ln() / k as f64;
    let last = traj.snapshots.last().map_or(0, |s| s.t);
    let mut players = Vec::with_capacity(traj.n());
    let mut violations = Vec::new();
    for i in 0..traj.n() {
        let series: Vec<(f64, f64)> = traj
            .snapshots
            .iter()
            .map(|s| (s.t as f64, s.log_amount(i) - s.t as f64 * rate))
            .collect();
        let lo = series.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let hi = series.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let tail: Vec<(f64, f64)> = series
            .iter()
            .copied()
            .filter(|p| p.0 >= (last / 2) as f64 && p.1.is_finite())
            .collect();
        let late_slope = if tail.len() >= 10 {
            least_squares_slope(&tail)
        } else {
            0.0
        };
        let on_cycle = cycle.contains(i);
        if !hi.is_finite() {
            violations.push(format!("player {i}: rescaled amount not finite"));
        } else if late_slope > SLOPE_TOL {
            violations.push(format!(
                "player {i}: rescaled amount still growing (slope {late_slope:.3e})"
            ));
        }
        if on_cycle && (!lo.is_finite() || late_slope < -SLOPE_TOL) {
            violations.push(format!("player {i}: cycle player not bounded away from zero"));
        }
        players.push(PlayerBounds {
            player: i,
            on_cycle,
            lower: lo.exp(),
            upper: hi.exp(),
            late_slope,
        });
    }
    let gamma_hat = players
        .iter()
        .filter(|p| p.on_cycle)
        .map(|p| p.lower)
        .fold(f64::INFINITY, f64::min);
    let zeta_hat = players.iter().map(|p| p.upper).fold(0.0, f64::max);
    Ok(GrowthBounds {
        alpha: cycle.product(),
        cycle_len: k,
        gamma_hat,
        zeta_hat,
        players,
        violations,
    })
}
