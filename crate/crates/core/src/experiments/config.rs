use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::economy::{Economy, EconomyDocument};
use crate::matrix::SquareMatrix;
use crate::tradingpost::{
    equal_split_bids, init_state, proportional_bids, BidSupport, InitOptions, MarketState, SimulateOptions,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EconomySource {
    Inline(EconomyDocument),
    File { path: PathBuf },
}

impl EconomySource {
    pub fn inline(rows: Vec<Vec<f64>>) -> Self {
        EconomySource::Inline(EconomyDocument { a: rows, labels: None })
    }

    /// Relative file paths resolve against `base`.
    pub fn load(&self, base: &Path) -> Result<Economy, ExperimentError> {
        let econ = match self {
            EconomySource::Inline(doc) => doc.clone().into_economy()?,
            EconomySource::File { path } => Economy::from_json_path(base.join(path))?,
        };
        Ok(econ.validate()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BidRule {
    /// Budget split equally over the goods a player can use.
    #[default]
    EqualSplit,
    /// Budget split in proportion to the player's coefficients.
    ProportionalToA,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BidSpec {
    Rule(BidRule),
    Matrix { matrix: Vec<Vec<f64>> },
}

impl Default for BidSpec {
    fn default() -> Self {
        BidSpec::Rule(BidRule::EqualSplit)
    }
}

fn every_round() -> Option<usize> {
    Some(1)
}

/// One simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub economy: EconomySource,
    pub x0: Vec<f64>,
    #[serde(default)]
    pub bids: BidSpec,
    /// Budgets for rule-based bids; one per player by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<f64>>,
    #[serde(default)]
    pub normalize_money: bool,
    /// Accept zero initial bids on positive coefficients.
    #[serde(default)]
    pub allow_zero_bids: bool,
    pub rounds: usize,
    /// `null` disables renormalization.
    #[serde(default = "every_round")]
    pub renorm_every: Option<usize>,
    /// `null` records no bid matrices.
    #[serde(default = "every_round")]
    pub record_bids_every: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(rows: Vec<Vec<f64>>, x0: Vec<f64>, rounds: usize) -> Self {
        Self {
            economy: EconomySource::inline(rows),
            x0,
            bids: BidSpec::default(),
            budgets: None,
            normalize_money: false,
            allow_zero_bids: false,
            rounds,
            renorm_every: Some(1),
            record_bids_every: Some(1),
            seed: 0,
            output_dir: None,
        }
    }

    pub fn with_bids(mut self, bids: BidSpec) -> Self {
        self.bids = bids;
        self
    }

    pub fn with_budgets(mut self, budgets: Vec<f64>) -> Self {
        self.budgets = Some(budgets);
        self
    }

    pub fn from_json_str(s: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(s).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn from_json_path(path: &Path) -> Result<Self, ExperimentError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn simulate_options(&self) -> SimulateOptions {
        SimulateOptions {
            rounds: self.rounds,
            renorm_every: self.renorm_every,
            record_bids_every: self.record_bids_every,
        }
    }

    pub fn init_options(&self) -> InitOptions {
        InitOptions {
            normalize_money: self.normalize_money,
            support: if self.allow_zero_bids {
                BidSupport::AllowZeroOnEdges
            } else {
                BidSupport::Strict
            },
        }
    }

    /// Initial bids for `econ` per [`RunConfig::bids`].
    pub fn initial_bids(&self, econ: &Economy) -> Result<SquareMatrix, ExperimentError> {
        let n = econ.n();
        let budgets = self.budgets.clone().unwrap_or_else(|| vec![1.0; n]);
        if budgets.len() != n {
            return Err(ExperimentError::Config(format!(
                "expected {n} budgets, got {}",
                budgets.len()
            )));
        }
        Ok(match &self.bids {
            BidSpec::Rule(BidRule::EqualSplit) => equal_split_bids(econ, &budgets),
            BidSpec::Rule(BidRule::ProportionalToA) => proportional_bids(econ, &budgets),
            BidSpec::Matrix { matrix } => SquareMatrix::from_rows(matrix)
                .map_err(|_| ExperimentError::Config("bid matrix is not square".into()))?,
        })
    }

    /// Loads and validates the economy and the starting state.
    pub fn resolve(&self, base: &Path) -> Result<(Economy, MarketState), ExperimentError> {
        if self.rounds == 0 {
            return Err(ExperimentError::Config("rounds must be at least 1".into()));
        }
        let econ = self.economy.load(base)?;
        let bids = self.initial_bids(&econ)?;
        let state = init_state(&econ, &self.x0, bids, self.init_options())?;
        Ok((econ, state))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepParam {
    /// Initial bid `b[i][j]`; the rest of row `i` absorbs the difference.
    Bid { i: usize, j: usize },
    /// Coefficient `a[i][j]`.
    Edge { i: usize, j: usize },
    /// Coefficient `a[i][i]`.
    SelfLoop { i: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// `steps` evenly spaced values from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let d = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| self.min + k as f64 * d).collect()
    }

    /// Cell centers of `steps` equal bins on `(lo, hi)`.
    pub fn centers(param: SweepParam, lo: f64, hi: f64, steps: usize) -> Self {
        let w = (hi - lo) / steps as f64;
        Self {
            param,
            min: lo + w / 2.0,
            max: hi - w / 2.0,
            steps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    GiniAmounts,
    GiniBudgets,
}

/// A two-parameter grid of runs, each scored by a Gini metric at the final
/// round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub x: Axis,
    pub y: Axis,
    #[serde(default)]
    pub metric: Metric,
}

impl SweepConfig {
    pub fn from_json_str(s: &str) -> Result<Self, ExperimentError> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_json_path(path: &Path) -> Result<Self, ExperimentError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn check(&self) -> Result<(), ExperimentError> {
        for (name, axis) in [("x", &self.x), ("y", &self.y)] {
            if axis.steps < 2 {
                return Err(ExperimentError::Config(format!("axis {name} needs at least 2 steps")));
            }
            if !(axis.min.is_finite() && axis.max.is_finite() && axis.min < axis.max) {
                return Err(ExperimentError::Config(format!("axis {name} needs finite min < max")));
            }
            if let SweepParam::Bid { .. } = axis.param {
                if !(axis.min > 0.0 && axis.max < 1.0) {
                    return Err(ExperimentError::Config(format!(
                        "bid axis {name} must stay inside (0, 1)"
                    )));
                }
            }
        }
        if self.base.rounds == 0 {
            return Err(ExperimentError::Config("rounds must be at least 1".into()));
        }
        Ok(())
    }

    /// Same ranges, `steps` values per axis.
    pub fn with_resolution(mut self, steps: usize) -> Self {
        self.x.steps = steps;
        self.y.steps = steps;
        self
    }
}
