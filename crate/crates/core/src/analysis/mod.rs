//! Measurable detectors for the long-run behavior of the trading post.
//!
//! Limits are read off finite runs through tail windows; see
//! [`limits::TailWindow`] for the defaults.

mod gini;
mod growth;
mod limits;
mod period;
mod star;

use thiserror::Error;

use crate::economy::EconomyError;

pub use gini::{gini, GiniSeries};
pub use growth::{
    cycle_potential_check, growth_bounds_check, growth_rate, least_squares_slope, GrowthBounds, PlayerBounds,
    PotentialCheck, SLOPE_TOL,
};
pub use limits::{
    bid_fraction_series, inequality_ratio, limit_report, scalar_period, EdgeFractions, InequalityRatio, LimitReport,
    RotationEstimate, TailWindow,
};
pub use period::{
    detect_normalized_period, detect_period, fixed_bid_check, FixedBidVerdict, IdentityCheck, PeriodReport, MAX_PERIOD,
    PRODUCT_ONE_TOL,
};
pub use star::{
    center_fractions, observed_phase, star_fraction_closed_form, star_phase, three_round_map, PhaseClass,
    PhaseObservation, PhaseTag, PHASE_REL_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("vector has no positive mass")]
    ZeroVector,
    #[error("bid of player {consumer} on good {good} is zero at the start")]
    ZeroBidOnCycle { consumer: usize, good: usize },
    #[error("window holds {samples} samples; at least 10 are needed")]
    WindowTooShort { samples: usize },
    #[error("player {player} has zero amount at round {round}")]
    VanishedAmount { player: usize, round: usize },
    #[error("player {player} out of range for {n} players")]
    PlayerOutOfRange { player: usize, n: usize },
    #[error("player {player} is {} the best cycle", if *on_cycle { "on" } else { "not on" })]
    PlayerPlacement { player: usize, on_cycle: bool },
    #[error("{ties} cycles share the best geometric mean")]
    BestCycleNotUnique { ties: usize },
    #[error("trajectory has {rounds} rounds; at least {required} are needed")]
    TrajectoryTooShort { rounds: usize, required: usize },
    #[error("no good cycle: alpha* = {alpha_star}")]
    NoGoodCycle { alpha_star: f64 },
    #[error("coefficient a[{i}][{j}] is zero; a complete economy is required")]
    NotCompleteGraph { i: usize, j: usize },
    #[error("trajectory has no recorded bids")]
    MissingBids,
    #[error(transparent)]
    Economy(#[from] EconomyError),
}
