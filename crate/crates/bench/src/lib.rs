//! Benchmark inputs.

use tradepost_core::experiments::{random_amounts, random_economy};
use tradepost_core::tradingpost::equal_split_bids;
use tradepost_core::{init_state, Economy, InitOptions, MarketState};

/// Seeded random economy with equal-split bids and unit budgets.
pub fn market(n: usize, density: f64, seed: u64) -> (Economy, MarketState) {
    let econ = random_economy(n, density, seed);
    let bids = equal_split_bids(&econ, &vec![1.0; n]);
    let s = init_state(&econ, &random_amounts(n, seed), bids, InitOptions::default()).expect("valid start");
    (econ, s)
}
