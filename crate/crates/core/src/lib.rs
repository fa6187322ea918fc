//! Additive-production market economies under the trading-post mechanism.
//!
//! - [`economy`]: coefficient digraphs, simple cycles, growth classification.
//! - [`mechanism`]: abstract splitting rules and fixture schedules.
//! - [`tradingpost`]: the proportional-update trading post and long-run simulation.
//! - [`analysis`]: detectors for growth, inequality, star phases and periodicity.
//! - [`experiments`]: configs, named fixtures, sweeps and CSV/JSON output.

pub mod analysis;
pub mod economy;
pub mod experiments;
pub mod matrix;
pub mod mechanism;
pub mod tradingpost;

pub use economy::{
    best_cycle, classify, construct_star, detect_star, enumerate_simple_cycles, normalize, BestCycle, Cycle, Economy,
    EconomyError, GrowthClass, GrowthTag, StarShape,
};
pub use experiments::{fixture, fixtures, run_sweep, ExperimentError, RunConfig, SweepConfig};
pub use matrix::SquareMatrix;
pub use mechanism::{apply_rule, run_schedule, MechanismError, RuleSchedule, SplittingRule};
pub use tradingpost::{
    allocate, init_state, simulate, step, InitOptions, MarketState, SimulateOptions, StepRecord, TradingPostError,
    Trajectory,
};
