//! The trading post with proportional bid updates.
//!
//! Each round every good is split among its bidders in proportion to their
//! money bids, players produce from what they receive, sellers collect the
//! bids on their good as next round's budget, and each player re-splits that
//! budget in proportion to how much of their output each good contributed.
//!
//! Amounts are stored as a mantissa vector `x` and a log-scale accumulator:
//! the true amount of player `i` is `x[i] * exp(log_scale)`. The dynamic is
//! homogeneous of degree one in `x`, so renormalizing the mantissa never
//! changes bids.

use serde::Serialize;
use thiserror::Error;

use crate::economy::Economy;
use crate::matrix::SquareMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TradingPostError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("initial amount x[{player}] = {value} must be positive and finite")]
    NonPositiveAmount { player: usize, value: f64 },
    #[error("degenerate start at bid ({i}, {j}): {reason}")]
    DegenerateStart { i: usize, j: usize, reason: &'static str },
    #[error("total money is zero")]
    NoMoney,
    #[error("amounts overflowed at round {round}; enable renormalization")]
    Overflow { round: usize },
}

/// How strictly initial bids must mirror the positive coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BidSupport {
    /// `b[i][j] > 0` exactly when `a[i][j] > 0`.
    #[default]
    Strict,
    /// Zero bids on positive edges are allowed; bids on zero edges are not.
    AllowZeroOnEdges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InitOptions {
    /// Scale bids so total money is one.
    pub normalize_money: bool,
    pub support: BidSupport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarketState {
    pub x: Vec<f64>,
    pub b: SquareMatrix,
    pub t: usize,
    pub log_scale: f64,
}

impl MarketState {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `B_i = sum_j b[i][j]`.
    pub fn budgets(&self) -> Vec<f64> {
        self.b.row_sums()
    }

    pub fn total_money(&self) -> f64 {
        self.b.total()
    }

    pub fn true_amount(&self, i: usize) -> f64 {
        self.x[i] * self.log_scale.exp()
    }

    /// `ln` of the true amount; `-inf` for a zero amount.
    pub fn log_amount(&self, i: usize) -> f64 {
        self.x[i].ln() + self.log_scale
    }

    /// Divides `x` by its sum and folds the factor into `log_scale`.
    pub fn renormalize(&mut self) {
        let s: f64 = self.x.iter().sum();
        if s > 0.0 && s.is_finite() {
            self.x.iter_mut().for_each(|v| *v /= s);
            self.log_scale += s.ln();
        }
    }
}

/// Everything computed in one round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub y: SquareMatrix,
    pub produced: Vec<f64>,
    pub budgets_next: Vec<f64>,
    pub bids_next: SquareMatrix,
}

/// Each player splits their budget equally over the goods they can use.
pub fn equal_split_bids(econ: &Economy, budgets: &[f64]) -> SquareMatrix {
    let n = econ.n();
    SquareMatrix::from_fn(n, |i, j| {
        let k = (0..n).filter(|&m| econ.coefficient(i, m) > 0.0).count();
        if econ.coefficient(i, j) > 0.0 {
            budgets[i] / k as f64
        } else {
            0.0
        }
    })
}

/// Each player splits their budget in proportion to their coefficients.
pub fn proportional_bids(econ: &Economy, budgets: &[f64]) -> SquareMatrix {
    let n = econ.n();
    let rows = econ.matrix().row_sums();
    SquareMatrix::from_fn(n, |i, j| {
        if rows[i] > 0.0 {
            budgets[i] * econ.coefficient(i, j) / rows[i]
        } else {
            0.0
        }
    })
}

/// Validates a starting configuration.
pub fn init_state(
    econ: &Economy,
    x0: &[f64],
    b0: SquareMatrix,
    opts: InitOptions,
) -> Result<MarketState, TradingPostError> {
    let n = econ.n();
    if x0.len() != n {
        return Err(TradingPostError::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if b0.n() != n {
        return Err(TradingPostError::DimensionMismatch {
            expected: n,
            got: b0.n(),
        });
    }
    for (player, &value) in x0.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(TradingPostError::NonPositiveAmount { player, value });
        }
    }
    for (i, j, v) in b0.iter() {
        let edge = econ.coefficient(i, j) > 0.0;
        if !(v.is_finite() && v >= 0.0) {
            return Err(TradingPostError::DegenerateStart {
                i,
                j,
                reason: "bid is negative or not finite",
            });
        }
        if v > 0.0 && !edge {
            return Err(TradingPostError::DegenerateStart {
                i,
                j,
                reason: "positive bid on a zero coefficient",
            });
        }
        if v == 0.0 && edge && opts.support == BidSupport::Strict {
            return Err(TradingPostError::DegenerateStart {
                i,
                j,
                reason: "zero bid on a positive coefficient",
            });
        }
    }
    let total = b0.total();
    if total <= 0.0 {
        return Err(TradingPostError::NoMoney);
    }
    let mut b = b0;
    if opts.normalize_money {
        b.scale(1.0 / total);
    }
    Ok(MarketState {
        x: x0.to_vec(),
        b,
        t: 0,
        log_scale: 0.0,
    })
}

/// `y[i][j] = b[i][j] / sum_k b[k][j] * x[j]`; a good nobody bids on is
/// discarded.
pub fn allocate(s: &MarketState) -> SquareMatrix {
    let n = s.n();
    let cols = s.b.col_sums();
    SquareMatrix::from_fn(n, |i, j| {
        let bid = s.b[(i, j)];
        if bid > 0.0 && cols[j] > 0.0 {
            bid / cols[j] * s.x[j]
        } else {
            0.0
        }
    })
}

/// One round with a full record of intermediate quantities.
pub fn step(econ: &Economy, s: &MarketState) -> (MarketState, StepRecord) {
    let y = allocate(s);
    let mut next = s.clone();
    advance_with(econ, &mut next, &y);
    let record = StepRecord {
        y,
        produced: next.x.clone(),
        budgets_next: next.budgets(),
        bids_next: next.b.clone(),
    };
    (next, record)
}

/// One round in place.
pub fn advance(econ: &Economy, s: &mut MarketState) {
    let y = allocate(s);
    advance_with(econ, s, &y);
}

fn advance_with(econ: &Economy, s: &mut MarketState, y: &SquareMatrix) {
    let n = s.n();
    let new_budgets = s.b.col_sums();
    let old_budgets = s.b.row_sums();
    for i in 0..n {
        let contributions: Vec<f64> = (0..n).map(|j| econ.coefficient(i, j) * y[(i, j)]).collect();
        let produced: f64 = contributions.iter().sum();
        s.x[i] = produced;
        let budget = new_budgets[i];
        let row = s.b.row_mut(i);
        if produced > 0.0 {
            for (bid, c) in row.iter_mut().zip(&contributions) {
                *bid = c / produced * budget;
            }
        } else if old_budgets[i] > 0.0 {
            // nothing produced: keep the previous split, rescaled
            let old = old_budgets[i];
            for bid in row.iter_mut() {
                *bid = *bid / old * budget;
            }
        } else {
            let k = (0..n).filter(|&j| econ.coefficient(i, j) > 0.0).count().max(1);
            for (j, bid) in row.iter_mut().enumerate() {
                *bid = if econ.coefficient(i, j) > 0.0 {
                    budget / k as f64
                } else {
                    0.0
                };
            }
        }
    }
    s.t += 1;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulateOptions {
    pub rounds: usize,
    /// Renormalize the amount mantissa every this many rounds; `None` never.
    pub renorm_every: Option<usize>,
    /// Store the full bid matrix every this many rounds; `None` never.
    pub record_bids_every: Option<usize>,
}

impl SimulateOptions {
    pub fn new(rounds: usize) -> Self {
        Self {
            rounds,
            renorm_every: Some(1),
            record_bids_every: Some(1),
        }
    }

    pub fn renorm_every(mut self, k: Option<usize>) -> Self {
        self.renorm_every = k;
        self
    }

    pub fn record_bids_every(mut self, k: Option<usize>) -> Self {
        self.record_bids_every = k;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: usize,
    pub x: Vec<f64>,
    pub log_scale: f64,
    pub budgets: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bids: Option<SquareMatrix>,
}

impl Snapshot {
    fn of(s: &MarketState, with_bids: bool) -> Self {
        Self {
            t: s.t,
            x: s.x.clone(),
            log_scale: s.log_scale,
            budgets: s.budgets(),
            bids: with_bids.then(|| s.b.clone()),
        }
    }

    pub fn log_amount(&self, i: usize) -> f64 {
        self.x[i].ln() + self.log_scale
    }

    pub fn true_amounts(&self) -> Vec<f64> {
        let f = self.log_scale.exp();
        self.x.iter().map(|v| v * f).collect()
    }
}

/// Snapshots for rounds `0..=rounds` plus the final state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    #[serde(skip)]
    pub last: MarketState,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn n(&self) -> usize {
        self.last.n()
    }

    pub fn rounds(&self) -> usize {
        self.snapshots.len().saturating_sub(1)
    }

    /// Per-round `ln` of the true amount of `player`.
    pub fn log_amounts(&self, player: usize) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.log_amount(player)).collect()
    }

    /// Snapshots that carry a bid matrix.
    pub fn bid_snapshots(&self) -> impl Iterator<Item = (&Snapshot, &SquareMatrix)> {
        self.snapshots.iter().filter_map(|s| s.bids.as_ref().map(|b| (s, b)))
    }
}

pub fn simulate(econ: &Economy, s0: &MarketState, opts: SimulateOptions) -> Result<Trajectory, TradingPostError> {
    let with_bids = |t: usize| opts.record_bids_every.is_some_and(|k| k > 0 && t % k == 0);
    let mut s = s0.clone();
    let mut snapshots = Vec::with_capacity(opts.rounds + 1);
    snapshots.push(Snapshot::of(&s, with_bids(s.t)));
    for _ in 0..opts.rounds {
        advance(econ, &mut s);
        if let Some(k) = opts.renorm_every {
            if k > 0 && s.t % k == 0 {
                s.renormalize();
            }
        }
        if s.x.iter().any(|v| !v.is_finite()) {
            return Err(TradingPostError::Overflow { round: s.t });
        }
        snapshots.push(Snapshot::of(&s, with_bids(s.t)));
    }
    Ok(Trajectory { snapshots, last: s })
}
