//! Run and sweep configurations, named fixtures, output writers and the
//! invariant suite.

mod config;
mod fixtures;
mod output;
mod random;
mod sweep;
mod verify;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::economy::EconomyError;
use crate::mechanism::MechanismError;
use crate::tradingpost::TradingPostError;

pub use config::{Axis, BidRule, BidSpec, EconomySource, Metric, RunConfig, SweepConfig, SweepParam};
pub use fixtures::{fixture, fixtures, star3_with_spoke0, Fixture, FixtureKind, ScheduleFixture, HEATMAP_RESOLUTION};
pub use output::{
    analyze_economy, fmt_float, fmt_short, simulation_report, write_bids_csv, write_grid_csv, write_trajectory_csv,
    CycleSummary, EconomyReport, GrowthSummary, LimitSummary, SimulationReport, PERIOD_TOL,
};
pub use random::{random_amounts, random_economy, COEFFICIENT_RANGE};
pub use sweep::{run_cell, run_sweep, set_bid_keeping_budget, GiniGrid};
pub use verify::{run_invariants, CheckOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Economy(#[from] EconomyError),
    #[error(transparent)]
    TradingPost(#[from] TradingPostError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Mechanism(#[from] MechanismError),
    #[error("io: {0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}
