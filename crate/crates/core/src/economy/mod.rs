//! Additive-production economies: the coefficient digraph, its simple cycles,
//! and the structural facts that decide whether growth is possible.
//!
//! Entry `a[(i, j)]` is the amount of good `i` that player `i` produces from
//! one unit of good `j`. The associated digraph has an edge `j -> i` whenever
//! `a[(i, j)] > 0`; zero coefficients are absent edges. Players are indexed
//! from zero throughout the API; human-readable output is one-based.

mod cycles;
mod karp;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::SquareMatrix;

/// Default cap on `n` for exhaustive simple-cycle enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 12;

/// Relative tolerance for comparing a cycle product with one.
pub const PRODUCT_REL_TOL: f64 = 1e-12;

/// Relative tolerance for declaring two geometric means tied.
pub const TIE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EconomyError {
    #[error("economy has no players")]
    Empty,
    #[error("coefficient matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("coefficient a[{i}][{j}] = {value} is negative")]
    NegativeCoefficient { i: usize, j: usize, value: f64 },
    #[error("coefficient a[{i}][{j}] is not finite")]
    NonFiniteCoefficient { i: usize, j: usize },
    #[error("economy is not strongly connected: player {to} is unreachable from player {from}")]
    NotStronglyConnected { from: usize, to: usize },
    #[error("{n} players exceeds the cycle-enumeration limit of {limit}")]
    TooManyPlayers { n: usize, limit: usize },
    #[error("the positive-coefficient digraph has no cycle")]
    NoCycle,
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("cannot read economy: {0}")]
    Io(String),
    #[error("malformed economy document: {0}")]
    Json(String),
}

/// A production economy.
#[derive(Debug, Clone, PartialEq)]
pub struct Economy {
    a: SquareMatrix,
    labels: Option<Vec<String>>,
}

/// On-disk form: `{"a": [[...], ...], "labels": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomyDocument {
    pub a: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Economy {
    /// Builds an economy after checking shape and coefficient signs only.
    /// Strong connectivity is checked separately by [`Economy::validate`].
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, EconomyError> {
        let a = SquareMatrix::from_rows(rows).map_err(|e| EconomyError::NonSquare {
            row: e.offending_row,
            len: e.offending_len,
            expected: e.rows,
        })?;
        Self::from_matrix(a)
    }

    pub fn from_matrix(a: SquareMatrix) -> Result<Self, EconomyError> {
        if a.n() == 0 {
            return Err(EconomyError::Empty);
        }
        for (i, j, v) in a.iter() {
            if !v.is_finite() {
                return Err(EconomyError::NonFiniteCoefficient { i, j });
            }
            if v < 0.0 {
                return Err(EconomyError::NegativeCoefficient { i, j, value: v });
            }
        }
        Ok(Self { a, labels: None })
    }

    /// Shape, sign and strong-connectivity checks in one call.
    pub fn validated(rows: &[Vec<f64>]) -> Result<Self, EconomyError> {
        Self::from_rows(rows)?.validate()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, EconomyError> {
        if labels.len() != self.n() {
            return Err(EconomyError::LabelCount {
                expected: self.n(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Returns the economy iff its positive-coefficient digraph is strongly
    /// connected.
    pub fn validate(self) -> Result<Self, EconomyError> {
        if let Some((from, to)) = self.unreachable_pair() {
            return Err(EconomyError::NotStronglyConnected { from, to });
        }
        Ok(self)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.unreachable_pair().is_none()
    }

    fn unreachable_pair(&self) -> Option<(usize, usize)> {
        let n = self.n();
        let out = self.out_adjacency();
        let forward = cycles::reach(n, 0, |u| out[u].iter().copied());
        if let Some(v) = forward.iter().position(|&r| !r) {
            return Some((0, v));
        }
        let backward = cycles::reach(n, 0, |u| (0..n).filter(move |&j| self.a[(u, j)] > 0.0));
        backward.iter().position(|&r| !r).map(|v| (v, 0))
    }

    pub fn from_json_str(s: &str) -> Result<Self, EconomyError> {
        let doc: EconomyDocument = serde_json::from_str(s).map_err(|e| EconomyError::Json(e.to_string()))?;
        doc.into_economy()
    }

    pub fn from_json_path(path: impl AsRef<Path>) -> Result<Self, EconomyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| EconomyError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_document(&self) -> EconomyDocument {
        EconomyDocument {
            a: self.a.to_rows(),
            labels: self.labels.clone(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.a.n()
    }

    #[inline]
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.a[(i, j)]
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.a
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn positive_edge_count(&self) -> usize {
        self.a.iter().filter(|&(_, _, v)| v > 0.0).count()
    }

    pub fn is_complete(&self) -> bool {
        self.a.iter().all(|(_, _, v)| v > 0.0)
    }

    /// Every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            a: self.a.map(|v| v * factor),
            labels: self.labels.clone(),
        }
    }

    /// `out[j]` lists players `i` that use good `j` (edges `j -> i`).
    fn out_adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        (0..n)
            .map(|j| (0..n).filter(|&i| self.a[(i, j)] > 0.0).collect())
            .collect()
    }

    fn log_edges(&self) -> Vec<(usize, usize, f64)> {
        self.a
            .iter()
            .filter(|&(_, _, v)| v > 0.0)
            .map(|(i, j, v)| (j, i, v.ln()))
            .collect()
    }
}

impl EconomyDocument {
    pub fn into_economy(self) -> Result<Economy, EconomyError> {
        let econ = Economy::from_rows(&self.a)?;
        match self.labels {
            Some(labels) => econ.with_labels(labels),
            None => Ok(econ),
        }
    }
}

/// A simple directed cycle `(i_1, ..., i_k)` in which `i_{m+1}` uses the good
/// of `i_m`. Stored in canonical rotation (smallest vertex first).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cycle {
    vertices: Vec<usize>,
    product: f64,
    geo_mean: f64,
}

impl Cycle {
    /// Checks that `vertices` is a cycle of positive edges in `econ`.
    pub fn new(econ: &Economy, vertices: &[usize]) -> Result<Self, EconomyError> {
        let k = vertices.len();
        if k == 0 || k > econ.n() {
            return Err(EconomyError::InvalidCycle(format!("length {k} out of range")));
        }
        let mut seen = vec![false; econ.n()];
        for &v in vertices {
            if v >= econ.n() {
                return Err(EconomyError::InvalidCycle(format!("player {v} out of range")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(EconomyError::InvalidCycle(format!("player {v} repeated")));
            }
        }
        for m in 0..k {
            let (cur, next) = (vertices[m], vertices[(m + 1) % k]);
            if econ.coefficient(next, cur) <= 0.0 {
                return Err(EconomyError::InvalidCycle(format!(
                    "edge {cur} -> {next} has zero coefficient"
                )));
            }
        }
        Ok(Self::from_valid(econ, vertices))
    }

    fn from_valid(econ: &Economy, vertices: &[usize]) -> Self {
        let k = vertices.len();
        let start = (0..k).min_by_key(|&m| vertices[m]).unwrap_or(0);
        let canonical: Vec<usize> = (0..k).map(|m| vertices[(start + m) % k]).collect();
        let log_product: f64 = (0..k)
            .map(|m| econ.coefficient(canonical[(m + 1) % k], canonical[m]).ln())
            .sum();
        let product = (0..k)
            .map(|m| econ.coefficient(canonical[(m + 1) % k], canonical[m]))
            .product();
        Self {
            vertices: canonical,
            product,
            geo_mean: (log_product / k as f64).exp(),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn product(&self) -> f64 {
        self.product
    }

    pub fn geo_mean(&self) -> f64 {
        self.geo_mean
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// `(consumer, good)` pairs along the cycle: `consumer` uses `good`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |m| (self.vertices[(m + 1) % k], self.vertices[m]))
    }

    /// The player whose good `v` uses on this cycle.
    pub fn predecessor(&self, v: usize) -> Option<usize> {
        let k = self.len();
        let m = self.vertices.iter().position(|&u| u == v)?;
        Some(self.vertices[(m + k - 1) % k])
    }

    pub fn successor(&self, v: usize) -> Option<usize> {
        let k = self.len();
        let m = self.vertices.iter().position(|&u| u == v)?;
        Some(self.vertices[(m + 1) % k])
    }

    pub fn product_class(&self) -> ProductClass {
        ProductClass::of(self.product)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.vertices.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "({})", names.join(","))
    }
}

/// A cycle product compared with one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductClass {
    Good,
    Neutral,
    Bad,
}

impl ProductClass {
    pub fn of(product: f64) -> Self {
        if (product - 1.0).abs() <= PRODUCT_REL_TOL * product.max(1.0) {
            ProductClass::Neutral
        } else if product > 1.0 {
            ProductClass::Good
        } else {
            ProductClass::Bad
        }
    }
}

/// Every simple cycle over positive edges, each exactly once, sorted by
/// length then vertex sequence.
pub fn enumerate_simple_cycles(econ: &Economy) -> Result<Vec<Cycle>, EconomyError> {
    enumerate_simple_cycles_up_to(econ, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_simple_cycles_up_to(econ: &Economy, limit: usize) -> Result<Vec<Cycle>, EconomyError> {
    if econ.n() > limit {
        return Err(EconomyError::TooManyPlayers { n: econ.n(), limit });
    }
    let adj = econ.out_adjacency();
    let mut out: Vec<Cycle> = cycles::elementary_circuits(&adj)
        .iter()
        .map(|c| Cycle::from_valid(econ, c))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.vertices.cmp(&b.vertices)));
    Ok(out)
}

/// A best cycle and the other cycles sharing its geometric mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestCycle {
    pub cycle: Cycle,
    pub ties: Vec<Cycle>,
    /// `false` when found by maximum-mean search; `ties` is then empty
    /// because tied cycles were not enumerated.
    pub exhaustive: bool,
}

impl BestCycle {
    pub fn is_unique(&self) -> bool {
        self.exhaustive && self.ties.is_empty()
    }
}

/// A cycle maximizing the geometric mean of its coefficient product.
pub fn best_cycle(econ: &Economy) -> Result<BestCycle, EconomyError> {
    if econ.n() <= DEFAULT_ENUMERATION_LIMIT {
        best_cycle_by_enumeration(econ)
    } else {
        best_cycle_karp(econ)
    }
}

pub fn best_cycle_by_enumeration(econ: &Economy) -> Result<BestCycle, EconomyError> {
    let all = enumerate_simple_cycles(econ)?;
    let best_idx = all
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.geo_mean.total_cmp(&b.geo_mean).then(ib.cmp(ia)))
        .map(|(i, _)| i)
        .ok_or(EconomyError::NoCycle)?;
    let g = all[best_idx].geo_mean;
    let ties = all
        .iter()
        .enumerate()
        .filter(|&(i, c)| i != best_idx && (c.geo_mean - g).abs() <= TIE_REL_TOL * g)
        .map(|(_, c)| c.clone())
        .collect();
    Ok(BestCycle {
        cycle: all[best_idx].clone(),
        ties,
        exhaustive: true,
    })
}

/// Maximum mean cycle on log-coefficients (Karp). Does not report ties.
pub fn best_cycle_karp(econ: &Economy) -> Result<BestCycle, EconomyError> {
    let found = karp::max_mean_cycle(econ.n(), &econ.log_edges()).ok_or(EconomyError::NoCycle)?;
    Ok(BestCycle {
        cycle: Cycle::from_valid(econ, &found.vertices),
        ties: Vec::new(),
        exhaustive: false,
    })
}

/// Cycle with the smallest geometric mean, by Karp on negated log-weights.
pub fn worst_cycle_karp(econ: &Economy) -> Result<Cycle, EconomyError> {
    let negated: Vec<_> = econ.log_edges().into_iter().map(|(u, v, w)| (u, v, -w)).collect();
    let found = karp::max_mean_cycle(econ.n(), &negated).ok_or(EconomyError::NoCycle)?;
    Ok(Cycle::from_valid(econ, &found.vertices))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthTag {
    /// Every cycle is bad: total amount vanishes under any mechanism.
    VanishesAlways,
    /// A good cycle exists and every positive cycle is good.
    GrowsUnderAnyNonWasteful,
    /// A good cycle exists; routing along it grows the economy.
    GrowsUnderSome,
    /// No good cycle, but some cycle has product exactly one.
    NoGrowthPossible,
}

impl fmt::Display for GrowthTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthClass {
    pub tag: GrowthTag,
    /// A good cycle, present exactly when `tag` is `GrowsUnderSome`.
    pub witness: Option<Cycle>,
}

/// Growth classification of a validated economy.
///
/// "Every cycle is good" is read over cycles of positive edges only; a cycle
/// through a zero coefficient does not exist in the digraph. Cycles with
/// product one within [`PRODUCT_REL_TOL`] are neither good nor bad.
pub fn classify(econ: &Economy) -> Result<GrowthClass, EconomyError> {
    let (best, worst) = if econ.n() <= DEFAULT_ENUMERATION_LIMIT {
        let all = enumerate_simple_cycles(econ)?;
        let best = all
            .iter()
            .max_by(|a, b| {
                a.product_class_rank()
                    .cmp(&b.product_class_rank())
                    .then(a.geo_mean.total_cmp(&b.geo_mean))
            })
            .cloned()
            .ok_or(EconomyError::NoCycle)?;
        let worst = all
            .iter()
            .min_by(|a, b| {
                a.product_class_rank()
                    .cmp(&b.product_class_rank())
                    .then(a.geo_mean.total_cmp(&b.geo_mean))
            })
            .cloned()
            .ok_or(EconomyError::NoCycle)?;
        (best, worst)
    } else {
        (best_cycle_karp(econ)?.cycle, worst_cycle_karp(econ)?)
    };
    let tag = match (best.product_class(), worst.product_class()) {
        (ProductClass::Bad, _) => GrowthTag::VanishesAlways,
        (ProductClass::Good, ProductClass::Good) => GrowthTag::GrowsUnderAnyNonWasteful,
        (ProductClass::Good, _) => GrowthTag::GrowsUnderSome,
        (ProductClass::Neutral, _) => GrowthTag::NoGrowthPossible,
    };
    let witness = (tag == GrowthTag::GrowsUnderSome).then_some(best);
    Ok(GrowthClass { tag, witness })
}

impl Cycle {
    fn product_class_rank(&self) -> u8 {
        match self.product_class() {
            ProductClass::Bad => 0,
            ProductClass::Neutral => 1,
            ProductClass::Good => 2,
        }
    }
}

/// Divides every coefficient by the best cycle's geometric mean `w`, so the
/// best cycle has product one and every other cycle has product below one
/// (or equal, for tied cycles).
pub fn normalize(econ: &Economy) -> Result<(Economy, f64), EconomyError> {
    let w = best_cycle(econ)?.cycle.geo_mean();
    Ok((econ.scaled(1.0 / w), w))
}

/// A star: every edge touches `center`, spokes trade only with the center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarShape {
    pub center: usize,
    /// Spoke players in increasing index order.
    pub spokes: Vec<usize>,
    /// `lambda[s] = a[spoke][center]`
    pub lambda: Vec<f64>,
    /// `mu[s] = a[center][spoke]`
    pub mu: Vec<f64>,
    /// `alpha[s] = lambda[s] * mu[s]`, the spoke's cycle product.
    pub alpha: Vec<f64>,
    pub alpha_star: f64,
}

impl StarShape {
    pub fn from_spokes(lambda: Vec<f64>, mu: Vec<f64>) -> Self {
        let alpha: Vec<f64> = lambda.iter().zip(&mu).map(|(l, m)| l * m).collect();
        let alpha_star = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let spokes = (0..lambda.len()).collect();
        Self {
            center: lambda.len(),
            spokes,
            lambda,
            mu,
            alpha,
            alpha_star,
        }
    }

    /// Position of `player` among the spokes.
    pub fn spoke_index(&self, player: usize) -> Option<usize> {
        self.spokes.iter().position(|&s| s == player)
    }

    /// The star economy with spokes `0..n-1` and the center last.
    pub fn to_economy(&self) -> Result<Economy, EconomyError> {
        construct_star(&self.lambda, &self.mu)
    }
}

/// Star economy with spokes `0..k` and center `k`.
pub fn construct_star(lambda: &[f64], mu: &[f64]) -> Result<Economy, EconomyError> {
    if lambda.len() != mu.len() || lambda.is_empty() {
        return Err(EconomyError::InvalidCycle(
            "star needs matching, non-empty lambda and mu".into(),
        ));
    }
    let k = lambda.len();
    let a = SquareMatrix::from_fn(k + 1, |i, j| {
        if i < k && j == k {
            lambda[i]
        } else if i == k && j < k {
            mu[j]
        } else {
            0.0
        }
    });
    Economy::from_matrix(a)?.validate()
}

/// Recognizes a star economy: exactly one vertex `c` such that every positive
/// edge touches `c`, every other player trades both ways with `c`, and the
/// diagonal is zero.
pub fn detect_star(econ: &Economy) -> Option<StarShape> {
    let n = econ.n();
    if n < 2 || (0..n).any(|i| econ.coefficient(i, i) != 0.0) {
        return None;
    }
    let is_center = |c: usize| {
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = econ.coefficient(i, j);
                if i == j {
                    true
                } else if i == c || j == c {
                    v > 0.0
                } else {
                    v == 0.0
                }
            })
        })
    };
    let centers: Vec<usize> = (0..n).filter(|&c| is_center(c)).collect();
    let [center] = centers[..] else {
        return None;
    };
    let spokes: Vec<usize> = (0..n).filter(|&i| i != center).collect();
    let lambda: Vec<f64> = spokes.iter().map(|&i| econ.coefficient(i, center)).collect();
    let mu: Vec<f64> = spokes.iter().map(|&i| econ.coefficient(center, i)).collect();
    let alpha: Vec<f64> = lambda.iter().zip(&mu).map(|(l, m)| l * m).collect();
    let alpha_star = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some(StarShape {
        center,
        spokes,
        lambda,
        mu,
        alpha,
        alpha_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intro() -> Economy {
        Economy::validated(&[vec![0.99, 0.1], vec![10.2, 0.99]]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let e = intro();
        assert_eq!(e.n(), 2);
        assert_eq!(e.positive_edge_count(), 4);
        assert!(Economy::validated(&[vec![1.0]]).is_ok());
        assert!(matches!(
            Economy::validated(&[vec![1.0, 0.0], vec![0.0, 1.0]]),
            Err(EconomyError::NotStronglyConnected { .. })
        ));
        assert!(matches!(
            Economy::validated(&[vec![1.0, -0.5], vec![1.0, 1.0]]),
            Err(EconomyError::NegativeCoefficient { i: 0, j: 1, .. })
        ));
        assert!(matches!(
            Economy::validated(&[vec![1.0, 0.5], vec![1.0]]),
            Err(EconomyError::NonSquare { row: 1, .. })
        ));
    }

    #[test]
    fn unreachable_pair_is_named() {
        // edge 0 -> 1 only (player 1 uses good 0); nothing returns to 0
        let err = Economy::validated(&[vec![1.1, 0.0], vec![0.2, 0.0]]).unwrap_err();
        assert_eq!(err, EconomyError::NotStronglyConnected { from: 1, to: 0 });
    }

    #[test]
    fn intro_cycles() {
        let cycles = enumerate_simple_cycles(&intro()).unwrap();
        assert_eq!(cycles.len(), 3);
        assert_eq!(cycles[0].vertices(), &[0]);
        assert!((cycles[0].product() - 0.99).abs() < 1e-15);
        assert_eq!(cycles[1].vertices(), &[1]);
        assert_eq!(cycles[2].vertices(), &[0, 1]);
        assert!((cycles[2].product() - 1.02).abs() < 1e-12);
        assert_eq!(cycles[2].to_string(), "(1,2)");
    }

    #[test]
    fn lone_self_loop() {
        let e = Economy::validated(&[vec![2.0]]).unwrap();
        let cycles = enumerate_simple_cycles(&e).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].product(), 2.0);
        let best = best_cycle(&e).unwrap();
        assert_eq!(best.cycle.geo_mean(), 2.0);
    }

    #[test]
    fn enumeration_limit() {
        let e = Economy::from_matrix(SquareMatrix::filled(13, 1.0)).unwrap();
        assert_eq!(
            enumerate_simple_cycles(&e).unwrap_err(),
            EconomyError::TooManyPlayers { n: 13, limit: 12 }
        );
    }

    #[test]
    fn intro_best_cycle() {
        let best = best_cycle(&intro()).unwrap();
        assert_eq!(best.cycle.vertices(), &[0, 1]);
        assert!((best.cycle.geo_mean() - 1.02f64.sqrt()).abs() < 1e-12);
        assert!(best.is_unique());
        assert_eq!(best.cycle.predecessor(1), Some(0));
        assert_eq!(best.cycle.edges().collect::<Vec<_>>(), vec![(1, 0), (0, 1)]);
    }

    #[test]
    fn karp_on_intro() {
        let best = best_cycle_karp(&intro()).unwrap();
        assert_eq!(best.cycle.vertices(), &[0, 1]);
    }

    #[test]
    fn classification_examples() {
        // one-way edge 0 -> 1 plus a small return edge
        let e = Economy::validated(&[vec![1.1, 0.01], vec![0.2, 0.0]]).unwrap();
        let c = classify(&e).unwrap();
        assert_eq!(c.tag, GrowthTag::GrowsUnderSome);
        assert_eq!(c.witness.unwrap().vertices(), &[0]);

        let e = Economy::validated(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let c = classify(&e).unwrap();
        assert_eq!(c.tag, GrowthTag::VanishesAlways);
        assert!(c.witness.is_none());

        let c = classify(&intro()).unwrap();
        assert_eq!(c.tag, GrowthTag::GrowsUnderSome);

        let e = Economy::validated(&[vec![1.2, 2.0], vec![1.5, 1.1]]).unwrap();
        assert_eq!(classify(&e).unwrap().tag, GrowthTag::GrowsUnderAnyNonWasteful);

        let e = Economy::validated(&[vec![1.0, 5.0], vec![0.2, 1.0]]).unwrap();
        assert_eq!(classify(&e).unwrap().tag, GrowthTag::NoGrowthPossible);
    }

    #[test]
    fn normalization_examples() {
        let (norm, w) = normalize(&intro()).unwrap();
        assert!((w - 1.02f64.sqrt()).abs() < 1e-12);
        let best = best_cycle(&norm).unwrap();
        assert!((best.cycle.product() - 1.0).abs() < 1e-9);

        let e = Economy::validated(&[vec![1.0, 5.0], vec![0.2, 1.0]]).unwrap();
        let (norm, w) = normalize(&e).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
        assert!(norm.matrix().max_abs_diff(e.matrix()).unwrap() < 1e-15);
        let best = best_cycle(&e).unwrap();
        assert_eq!(best.ties.len(), 2);
    }

    #[test]
    fn star_detection() {
        let e = Economy::validated(&[vec![0.0, 0.0, 0.8], vec![0.0, 0.0, 1.5625], vec![1.0, 1.0, 0.0]]).unwrap();
        let s = detect_star(&e).unwrap();
        assert_eq!(s.center, 2);
        assert_eq!(s.alpha, vec![0.8, 1.5625]);
        assert_eq!(s.alpha_star, 1.5625);

        assert!(detect_star(&intro()).is_none());

        let e = construct_star(&[2.0, 0.8, 0.5], &[1.0, 1.0, 1.0]).unwrap();
        let s = detect_star(&e).unwrap();
        assert_eq!(s.center, 3);
        assert_eq!(s.alpha_star, 2.0);
        assert_eq!(s.spokes, vec![0, 1, 2]);
    }

    #[test]
    fn two_player_swap_is_not_a_star() {
        let e = Economy::validated(&[vec![0.0, 2.0], vec![3.0, 0.0]]).unwrap();
        assert!(detect_star(&e).is_none());
    }

    #[test]
    fn cycle_validation() {
        let e = intro();
        assert!(Cycle::new(&e, &[1, 0]).is_ok());
        assert_eq!(Cycle::new(&e, &[1, 0]).unwrap().vertices(), &[0, 1]);
        assert!(Cycle::new(&e, &[0, 0]).is_err());
        assert!(Cycle::new(&e, &[0, 5]).is_err());
        let star = construct_star(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert!(Cycle::new(&star, &[0, 1]).is_err());
    }

    #[test]
    fn json_document() {
        let e = Economy::from_json_str(r#"{"a": [[0.99, 0.1], [10.2, 0.99]], "labels": ["A", "B"]}"#).unwrap();
        assert_eq!(e.labels().unwrap(), &["A".to_string(), "B".to_string()]);
        assert_eq!(e.coefficient(1, 0), 10.2);
        assert!(matches!(
            Economy::from_json_str(r#"{"a": [[1.0]], "labels": ["A", "B"]}"#),
            Err(EconomyError::LabelCount { expected: 1, got: 2 })
        ));
        assert!(matches!(Economy::from_json_str("{"), Err(EconomyError::Json(_))));
    }
}
