use serde::Serialize;

use super::random::{random_amounts, random_economy};
use crate::analysis::{cycle_potential_check, gini, GiniSeries};
use crate::economy::{best_cycle, best_cycle_by_enumeration, best_cycle_karp, normalize};
use crate::tradingpost::{equal_split_bids, init_state, simulate, InitOptions, SimulateOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

const SEEDS: u64 = 16;
const ROUNDS: usize = 200;

fn fold_max(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

/// Invariants that must hold on any economy, checked on seeded random ones.
pub fn run_invariants() -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    let mut money = 0.0_f64;
    let mut potential = 0.0_f64;
    let mut gini_ok = true;
    let mut failures = Vec::new();
    for seed in 0..SEEDS {
        let n = 2 + (seed as usize % 5);
        let econ = random_economy(n, 0.4, seed);
        let bids = equal_split_bids(&econ, &vec![1.0; n]);
        let run = init_state(&econ, &random_amounts(n, seed), bids, InitOptions::default())
            .map_err(|e| e.to_string())
            .and_then(|s| simulate(&econ, &s, SimulateOptions::new(ROUNDS)).map_err(|e| e.to_string()));
        let traj = match run {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let m0: f64 = traj.snapshots[0].budgets.iter().sum();
        money = money.max(fold_max(
            traj.snapshots
                .iter()
                .map(|s| (s.budgets.iter().sum::<f64>() / m0 - 1.0).abs()),
        ));
        if let Ok(best) = best_cycle(&econ) {
            match cycle_potential_check(&traj, &econ, &best.cycle) {
                Ok(p) => potential = potential.max(p.max_drift),
                Err(e) => failures.push(format!("seed {seed}: {e}")),
            }
        }
        let cap = (n as f64 - 1.0) / n as f64 + 1e-12;
        let g = GiniSeries::from_trajectory(&traj);
        gini_ok &= g.amounts.iter().chain(&g.budgets).all(|v| (0.0..=cap).contains(v));
    }
    out.push(CheckOutcome::new(
        "money conserved",
        failures.is_empty() && money < 1e-9,
        format!("max relative drift {money:.3e}"),
    ));
    out.push(CheckOutcome::new(
        "cycle potential",
        failures.is_empty() && potential < 1e-6,
        format!("max drift {potential:.3e}"),
    ));
    out.push(CheckOutcome::new(
        "gini range",
        gini_ok,
        "every value in [0, (n-1)/n]".into(),
    ));

    let mut worst = 0.0_f64;
    for seed in 0..SEEDS {
        let econ = random_economy(2 + (seed as usize % 6), 0.5, 1000 + seed);
        match (best_cycle_by_enumeration(&econ), best_cycle_karp(&econ)) {
            (Ok(a), Ok(b)) => worst = worst.max((a.cycle.geo_mean().ln() - b.cycle.geo_mean().ln()).abs()),
            (a, b) => failures.push(format!("seed {seed}: {:?} {:?}", a.err(), b.err())),
        }
    }
    out.push(CheckOutcome::new(
        "karp matches enumeration",
        worst < 1e-12,
        format!("max log geo-mean gap {worst:.3e}"),
    ));

    let mut norm = 0.0_f64;
    for seed in 0..SEEDS {
        let econ = random_economy(5, 0.3, 2000 + seed);
        if let Ok((e, _)) = normalize(&econ) {
            if let Ok(b) = best_cycle(&e) {
                norm = norm.max((b.cycle.geo_mean() - 1.0).abs());
            }
        }
    }
    out.push(CheckOutcome::new(
        "normalized best cycle is neutral",
        norm < 1e-12,
        format!("max |geo-mean - 1| {norm:.3e}"),
    ));

    let g = gini(&[0.0, 0.0, 1.0]).unwrap_or(f64::NAN);
    out.push(CheckOutcome::new(
        "gini of a single holder",
        (g - 2.0 / 3.0).abs() < 1e-15,
        format!("{g}"),
    ));

    if !failures.is_empty() {
        out.push(CheckOutcome::new("runs completed", false, failures.join("; ")));
    }
    out
}
