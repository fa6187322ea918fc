use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Axis, Metric, SweepConfig, SweepParam};
use super::ExperimentError;
use crate::analysis::gini;
use crate::economy::Economy;
use crate::matrix::SquareMatrix;
use crate::tradingpost::{advance, init_state};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GiniGrid {
    pub metric: Metric,
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// `values[iy][ix]`; failed cells are `NaN`.
    pub values: Vec<Vec<f64>>,
    pub failures: usize,
    pub warnings: Vec<String>,
}

impl GiniGrid {
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values
            .iter()
            .zip(&self.y_values)
            .flat_map(move |(row, &y)| row.iter().zip(&self.x_values).map(move |(&v, &x)| (x, y, v)))
    }
}

/// Sets `b[i][j] = v` and rescales the rest of row `i`, in proportion to its
/// current bids on positive coefficients, so the row still sums to `B_i`.
pub fn set_bid_keeping_budget(
    econ: &Economy,
    bids: &mut SquareMatrix,
    i: usize,
    j: usize,
    v: f64,
) -> Result<(), ExperimentError> {
    let n = econ.n();
    if i >= n || j >= n {
        return Err(ExperimentError::Config(format!("bid ({i}, {j}) out of range")));
    }
    let budget: f64 = bids.row(i).iter().sum();
    if !(v > 0.0 && v < budget) {
        return Err(ExperimentError::Config(format!(
            "bid {v} on ({i}, {j}) must lie strictly between 0 and the budget {budget}"
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&k| k != j && econ.coefficient(i, k) > 0.0).collect();
    let weight: f64 = others.iter().map(|&k| bids[(i, k)]).sum();
    if others.is_empty() || weight <= 0.0 {
        return Err(ExperimentError::Config(format!(
            "row {i} has no other bid to absorb the remainder"
        )));
    }
    let rest = budget - v;
    for k in 0..n {
        if k == j {
            bids[(i, k)] = v;
        } else if others.contains(&k) {
            bids[(i, k)] *= rest / weight;
        } else {
            bids[(i, k)] = 0.0;
        }
    }
    Ok(())
}

fn apply_coefficient(rows: &mut [Vec<f64>], param: SweepParam, v: f64) -> Result<(), ExperimentError> {
    let n = rows.len();
    let (i, j) = match param {
        SweepParam::Edge { i, j } => (i, j),
        SweepParam::SelfLoop { i } => (i, i),
        SweepParam::Bid { .. } => return Ok(()),
    };
    if i >= n || j >= n {
        return Err(ExperimentError::Config(format!("coefficient ({i}, {j}) out of range")));
    }
    rows[i][j] = v;
    Ok(())
}

/// Metric value at the final round of one configuration.
pub fn run_cell(cfg: &SweepConfig, base_econ: &Economy, xv: f64, yv: f64) -> Result<f64, ExperimentError> {
    let mut rows = base_econ.matrix().to_rows();
    apply_coefficient(&mut rows, cfg.x.param, xv)?;
    apply_coefficient(&mut rows, cfg.y.param, yv)?;
    let econ = Economy::validated(&rows)?;
    let mut bids = cfg.base.initial_bids(&econ)?;
    for (axis, v) in [(&cfg.x, xv), (&cfg.y, yv)] {
        if let SweepParam::Bid { i, j } = axis.param {
            set_bid_keeping_budget(&econ, &mut bids, i, j, v)?;
        }
    }
    let mut s = init_state(&econ, &cfg.base.x0, bids, cfg.base.init_options())?;
    for _ in 0..cfg.base.rounds {
        advance(&econ, &mut s);
        s.renormalize();
    }
    let g = match cfg.metric {
        Metric::GiniAmounts => gini(&s.x),
        Metric::GiniBudgets => gini(&s.budgets()),
    }?;
    Ok(g)
}

/// Runs every cell, on `threads` workers if given. Cell order in the result
/// does not depend on scheduling.
pub fn run_sweep(cfg: &SweepConfig, base: &Path, threads: Option<usize>) -> Result<GiniGrid, ExperimentError> {
    cfg.check()?;
    let econ = cfg.base.economy.load(base)?;
    let xs = cfg.x.values();
    let ys = cfg.y.values();
    let cells: Vec<(usize, usize)> = (0..ys.len())
        .flat_map(|iy| (0..xs.len()).map(move |ix| (iy, ix)))
        .collect();
    let eval = || -> Vec<Result<f64, ExperimentError>> {
        cells
            .par_iter()
            .map(|&(iy, ix)| run_cell(cfg, &econ, xs[ix], ys[iy]))
            .collect()
    };
    let results = match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| ExperimentError::Config(e.to_string()))?
            .install(eval),
        None => eval(),
    };
    let mut values = vec![vec![f64::NAN; xs.len()]; ys.len()];
    let mut warnings = Vec::new();
    for (&(iy, ix), r) in cells.iter().zip(results) {
        match r {
            Ok(v) => values[iy][ix] = v,
            Err(e) => warnings.push(format!("cell x={} y={}: {e}", xs[ix], ys[iy])),
        }
    }
    Ok(GiniGrid {
        metric: cfg.metric,
        x_axis: cfg.x,
        y_axis: cfg.y,
        x_values: xs,
        y_values: ys,
        failures: warnings.len(),
        values,
        warnings,
    })
}
