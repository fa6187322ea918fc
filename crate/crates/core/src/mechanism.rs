//! Abstract mechanisms: sequences of splitting rules that decide which
//! fraction of each good every player receives.
//!
//! A rule is an `n x n` matrix `beta` with `beta[(i, j)]` the fraction of good
//! `j` handed to player `i`. Column sums below one waste the remainder.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use thiserror::Error;

use crate::economy::{Cycle, Economy, EconomyError};
use crate::matrix::SquareMatrix;

pub const COLUMN_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MechanismError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("fraction beta[{i}][{j}] = {value} is negative or not finite")]
    InvalidFraction { i: usize, j: usize, value: f64 },
    #[error("good {good} is over-allocated: fractions sum to {total}")]
    OverAllocated { good: usize, total: f64 },
    #[error("amount x[{player}] = {value} is negative or not finite")]
    InvalidAmount { player: usize, value: f64 },
    #[error(transparent)]
    InvalidCycle(#[from] EconomyError),
    #[error("parameter {name} = {value} is outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingRule {
    beta: SquareMatrix,
}

impl SplittingRule {
    pub fn new(beta: SquareMatrix) -> Result<Self, MechanismError> {
        for (i, j, v) in beta.iter() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(MechanismError::InvalidFraction { i, j, value: v });
            }
        }
        for (good, total) in beta.col_sums().into_iter().enumerate() {
            if total > 1.0 + COLUMN_SUM_TOL {
                return Err(MechanismError::OverAllocated { good, total });
            }
        }
        Ok(Self { beta })
    }

    /// Nothing is allocated; every good is wasted.
    pub fn zero(n: usize) -> Self {
        Self {
            beta: SquareMatrix::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.beta.n()
    }

    pub fn beta(&self) -> &SquareMatrix {
        &self.beta
    }

    /// Every good fully allocated, and only to players that can use it.
    pub fn is_non_wasteful(&self, econ: &Economy) -> bool {
        if econ.n() != self.n() {
            return false;
        }
        let fully_allocated = self.beta.col_sums().iter().all(|s| (s - 1.0).abs() <= COLUMN_SUM_TOL);
        let respects_edges = self
            .beta
            .iter()
            .all(|(i, j, v)| v == 0.0 || econ.coefficient(i, j) > 0.0);
        fully_allocated && respects_edges
    }
}

/// A (possibly infinite) sequence of rules indexed by round.
pub struct RuleSchedule {
    n: usize,
    rule_at: Box<dyn Fn(usize) -> SplittingRule + Send + Sync>,
}

impl RuleSchedule {
    pub fn constant(rule: SplittingRule) -> Self {
        Self {
            n: rule.n(),
            rule_at: Box::new(move |_| rule.clone()),
        }
    }

    /// `f` must return rules on `n` players for every round.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> SplittingRule + Send + Sync + 'static) -> Self {
        Self {
            n,
            rule_at: Box::new(f),
        }
    }

    /// Cycles through `rules` in order, one per round.
    pub fn periodic(rules: Vec<SplittingRule>) -> Self {
        assert!(!rules.is_empty(), "periodic schedule needs at least one rule");
        let n = rules[0].n();
        Self::from_fn(n, move |t| rules[t % rules.len()].clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rule(&self, t: usize) -> SplittingRule {
        (self.rule_at)(t)
    }
}

impl fmt::Debug for RuleSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RuleSchedule")
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

/// One round of production: `x'[i] = sum_j a[i][j] * beta[i][j] * x[j]`.
pub fn apply_rule(econ: &Economy, x: &[f64], rule: &SplittingRule) -> Result<Vec<f64>, MechanismError> {
    let n = econ.n();
    if x.len() != n {
        return Err(MechanismError::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if rule.n() != n {
        return Err(MechanismError::DimensionMismatch {
            expected: n,
            got: rule.n(),
        });
    }
    if let Some((player, &value)) = x.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(MechanismError::InvalidAmount { player, value });
    }
    Ok((0..n)
        .map(|i| (0..n).map(|j| econ.coefficient(i, j) * rule.beta[(i, j)] * x[j]).sum())
        .collect())
}

/// Amounts for rounds `0..=rounds`; entry 0 is `x0`.
pub fn run_schedule(
    econ: &Economy,
    x0: &[f64],
    schedule: &RuleSchedule,
    rounds: usize,
) -> Result<Vec<Vec<f64>>, MechanismError> {
    if x0.len() != econ.n() {
        return Err(MechanismError::DimensionMismatch {
            expected: econ.n(),
            got: x0.len(),
        });
    }
    let mut out = Vec::with_capacity(rounds + 1);
    out.push(x0.to_vec());
    for t in 0..rounds {
        let next = apply_rule(econ, &out[t], &schedule.rule(t))?;
        out.push(next);
    }
    Ok(out)
}

/// Each good on `cycle` goes entirely to its successor on the cycle; goods
/// off the cycle are wasted.
pub fn cycle_routing_rule(econ: &Economy, cycle: &Cycle) -> Result<RuleSchedule, MechanismError> {
    let cycle = Cycle::new(econ, cycle.vertices())?;
    let mut beta = SquareMatrix::zeros(econ.n());
    for (consumer, good) in cycle.edges() {
        beta[(consumer, good)] = 1.0;
    }
    Ok(RuleSchedule::constant(SplittingRule::new(beta)?))
}

/// Every player keeps all of their own good.
pub fn self_rule(n: usize) -> SplittingRule {
    SplittingRule {
        beta: SquareMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 }),
    }
}

/// Every good split equally among all players, whether or not they can use it.
pub fn equal_split_rule(n: usize) -> SplittingRule {
    SplittingRule {
        beta: SquareMatrix::filled(n, 1.0 / n as f64),
    }
}

/// A random non-wasteful rule: each column is drawn from a symmetric
/// Dirichlet over the players that can use that good.
pub fn random_non_wasteful_rule<R: Rng + ?Sized>(econ: &Economy, concentration: f64, rng: &mut R) -> SplittingRule {
    let n = econ.n();
    let gamma = Gamma::new(concentration, 1.0).expect("concentration must be positive");
    let mut beta = SquareMatrix::zeros(n);
    for j in 0..n {
        let users: Vec<usize> = (0..n).filter(|&i| econ.coefficient(i, j) > 0.0).collect();
        let draws: Vec<f64> = users.iter().map(|_| gamma.sample(rng).max(f64::MIN_POSITIVE)).collect();
        let total: f64 = draws.iter().sum();
        for (&i, d) in users.iter().zip(&draws) {
            beta[(i, j)] = d / total;
        }
    }
    SplittingRule { beta }
}

/// A schedule of independent random non-wasteful rules, reproducible from
/// `seed`.
pub fn random_non_wasteful_schedule(econ: &Economy, concentration: f64, seed: u64) -> RuleSchedule {
    use rand::SeedableRng;
    let econ = econ.clone();
    RuleSchedule::from_fn(econ.n(), move |t| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        random_non_wasteful_rule(&econ, concentration, &mut rng)
    })
}

/// Five players on two cycles through player 0: a neutral triangle
/// `0 -> 1 -> 2 -> 0` and a bad triangle `0 -> 3 -> 4 -> 0` with product
/// `1 - eps`. In rounds `t = 0, 3, 6, ...` good 0 is split `gamma` to player 1
/// and `1 - gamma` to player 3; otherwise it goes to player 1 alone. Started
/// from `x0 = (1, 1, 1, 0, 0)`, player 0 holds `(gamma + (1 - gamma)(1 - eps))^k`
/// at round `3k` while the total amount never vanishes.
pub fn example_e1_schedule(gamma: f64, eps: f64) -> Result<(Economy, RuleSchedule), MechanismError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(MechanismError::ParameterOutOfRange {
            name: "gamma",
            value: gamma,
            range: "[0, 1)",
        });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(MechanismError::ParameterOutOfRange {
            name: "eps",
            value: eps,
            range: "(0, 1)",
        });
    }
    let mut a = SquareMatrix::zeros(5);
    a[(1, 0)] = 1.0;
    a[(2, 1)] = 1.0;
    a[(0, 2)] = 1.0;
    a[(3, 0)] = 1.0;
    a[(0, 4)] = 1.0;
    a[(4, 3)] = 1.0 - eps;
    let econ = Economy::from_matrix(a)?.validate()?;

    let base = |split: f64| {
        let mut beta = SquareMatrix::zeros(5);
        beta[(1, 0)] = split;
        beta[(3, 0)] = 1.0 - split;
        beta[(2, 1)] = 1.0;
        beta[(0, 2)] = 1.0;
        beta[(4, 3)] = 1.0;
        beta[(0, 4)] = 1.0;
        SplittingRule { beta }
    };
    let schedule = RuleSchedule::periodic(vec![base(gamma), base(1.0), base(1.0)]);
    Ok((econ, schedule))
}

pub const EXAMPLE_E1_START: [f64; 5] = [1.0, 1.0, 1.0, 0.0, 0.0];
