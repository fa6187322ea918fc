use serde::Serialize;

use super::AnalysisError;
use crate::economy::{enumerate_simple_cycles, Economy};
use crate::tradingpost::{Snapshot, Trajectory};

pub const MAX_PERIOD: usize = 64;
pub const PRODUCT_ONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub max_deviation: f64,
    pub cases: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodReport {
    pub period: usize,
    /// First round from which the recurrence holds through the end.
    pub onset: usize,
    /// Amounts compared after dividing by their sum.
    pub normalized: bool,
    /// Every cycle bid on throughout the periodic window has product one.
    /// Absent when cycles cannot be enumerated.
    pub product_one: Option<IdentityCheck>,
}

fn close(u: f64, v: f64, tol: f64) -> bool {
    (u - v).abs() <= tol * 1f64.max(u.abs()).max(v.abs())
}

fn states_match(a: &Snapshot, b: &Snapshot, tol: f64, normalized: bool) -> bool {
    let amounts = if normalized {
        let (sa, sb): (f64, f64) = (a.x.iter().sum(), b.x.iter().sum());
        a.x.iter().zip(&b.x).all(|(u, v)| close(u / sa, v / sb, tol))
    } else {
        let shift = (a.log_scale - b.log_scale).exp();
        a.x.iter().zip(&b.x).all(|(u, v)| close(u * shift, *v, tol))
    };
    let budgets = a.budgets.iter().zip(&b.budgets).all(|(u, v)| close(*u, *v, tol));
    let bids = match (&a.bids, &b.bids) {
        (Some(p), Some(q)) => p.as_slice().iter().zip(q.as_slice()).all(|(u, v)| close(*u, *v, tol)),
        _ => true,
    };
    amounts && budgets && bids
}

fn find_period(traj: &Trajectory, tol: f64, normalized: bool) -> Option<(usize, usize)> {
    let snaps = &traj.snapshots;
    let len = snaps.len();
    let window_start = len / 3;
    let max_t = (len / 3).min(MAX_PERIOD);
    let matches = |i: usize, p: usize| states_match(&snaps[i], &snaps[i + p], tol, normalized);
    (1..=max_t).find_map(|p| {
        if !(window_start..len - p).all(|i| matches(i, p)) {
            return None;
        }
        let mut onset = window_start;
        while onset > 0 && matches(onset - 1, p) {
            onset -= 1;
        }
        Some((p, snaps[onset].t))
    })
}

fn product_one_check(traj: &Trajectory, econ: &Economy, onset: usize) -> Option<IdentityCheck> {
    let cycles = enumerate_simple_cycles(econ).ok()?;
    let frames: Vec<_> = traj.bid_snapshots().filter(|(s, _)| s.t >= onset).collect();
    let mut max_deviation = 0.0_f64;
    let mut cases = 0;
    for c in &cycles {
        let bid_on = frames.iter().all(|(_, b)| c.edges().all(|(i, j)| b[(i, j)] > 0.0));
        if bid_on && !frames.is_empty() {
            cases += 1;
            max_deviation = max_deviation.max((c.product() - 1.0).abs());
        }
    }
    Some(IdentityCheck {
        holds: max_deviation <= PRODUCT_ONE_TOL,
        max_deviation,
        cases,
    })
}

/// Smallest period `T <= 64` of the full state (true amounts, budgets,
/// bids) over the last two thirds of the run, with a product-one check on
/// the cycles bid on during the periodic stretch.
pub fn detect_period(traj: &Trajectory, econ: &Economy, tol: f64) -> Option<PeriodReport> {
    let (period, onset) = find_period(traj, tol, false)?;
    Some(PeriodReport {
        period,
        onset,
        normalized: false,
        product_one: product_one_check(traj, econ, onset),
    })
}

/// As [`detect_period`] with amounts compared as shares of their sum, so
/// economies that grow while rotating are periodic too.
pub fn detect_normalized_period(traj: &Trajectory, econ: &Economy, tol: f64) -> Option<PeriodReport> {
    let (period, onset) = find_period(traj, tol, true)?;
    Some(PeriodReport {
        period,
        onset,
        normalized: true,
        product_one: product_one_check(traj, econ, onset),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedBidVerdict {
    pub constant_bids: bool,
    /// Largest change between consecutive recorded bid matrices, relative
    /// to total money.
    pub max_bid_change: f64,
    /// `x_i(t + 1) = a_ii x_i(t)` for every player and round.
    pub self_growth: Option<IdentityCheck>,
    /// Every cycle's product equals the product of its players' self-loops.
    pub cycle_products: Option<IdentityCheck>,
}

/// With constant bids on a complete economy, every player grows at its own
/// self-loop rate and each cycle's product equals the product of the
/// self-loops along it.
pub fn fixed_bid_check(traj: &Trajectory, econ: &Economy, tol: f64) -> Result<FixedBidVerdict, AnalysisError> {
    if let Some((i, j, _)) = econ.matrix().iter().find(|&(_, _, v)| v <= 0.0) {
        return Err(AnalysisError::NotCompleteGraph { i, j });
    }
    let frames: Vec<_> = traj.bid_snapshots().collect();
    if frames.is_empty() {
        return Err(AnalysisError::MissingBids);
    }
    let money = frames[0].1.total();
    let max_bid_change = frames
        .windows(2)
        .map(|w| w[0].1.max_abs_diff(w[1].1).unwrap_or(f64::INFINITY) / money)
        .fold(0.0, f64::max);
    let constant_bids = max_bid_change < tol;
    if !constant_bids {
        return Ok(FixedBidVerdict {
            constant_bids,
            max_bid_change,
            self_growth: None,
            cycle_products: None,
        });
    }

    let mut dev = 0.0_f64;
    let mut cases = 0;
    for w in traj.snapshots.windows(2) {
        if w[1].t != w[0].t + 1 {
            continue;
        }
        for i in 0..econ.n() {
            let d = w[1].log_amount(i) - w[0].log_amount(i) - econ.coefficient(i, i).ln();
            dev = dev.max(d.exp_m1().abs());
            cases += 1;
        }
    }
    let self_growth = IdentityCheck {
        holds: dev <= PRODUCT_ONE_TOL,
        max_deviation: dev,
        cases,
    };

    let cycles = enumerate_simple_cycles(econ)?;
    let mut dev = 0.0_f64;
    for c in &cycles {
        let loops: f64 = c.vertices().iter().map(|&v| econ.coefficient(v, v)).product();
        dev = dev.max((c.product() / loops - 1.0).abs());
    }
    let cycle_products = IdentityCheck {
        holds: dev <= PRODUCT_ONE_TOL,
        max_deviation: dev,
        cases: cycles.len(),
    };
    Ok(FixedBidVerdict {
        constant_bids,
        max_bid_change,
        self_growth: Some(self_growth),
        cycle_products: Some(cycle_products),
    })
}
