use std::ops::RangeInclusive;

use serde::Serialize;

use super::growth::{growth_rate, SLOPE_TOL};
use super::AnalysisError;
use crate::economy::StarShape;
use crate::matrix::SquareMatrix;
use crate::tradingpost::Trajectory;

pub const PHASE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseTag {
    Grows,
    Vanishes,
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseClass {
    /// `1 / sqrt(alpha*)`
    pub threshold: f64,
    /// One tag per spoke, in the order of `StarShape::spokes`.
    pub tags: Vec<PhaseTag>,
}

/// Spokes with `alpha_i` above `1 / sqrt(alpha*)` grow, below it vanish,
/// and at it stay bounded.
pub fn star_phase(shape: &StarShape) -> Result<PhaseClass, AnalysisError> {
    if !(shape.alpha_star > 1.0) {
        return Err(AnalysisError::NoGoodCycle {
            alpha_star: shape.alpha_star,
        });
    }
    let threshold = 1.0 / shape.alpha_star.sqrt();
    let tags = shape
        .alpha
        .iter()
        .map(|&a| {
            if (a - threshold).abs() <= PHASE_REL_TOL * threshold {
                PhaseTag::Bounded
            } else if a > threshold {
                PhaseTag::Grows
            } else {
                PhaseTag::Vanishes
            }
        })
        .collect();
    Ok(PhaseClass { threshold, tags })
}

/// Share of the center's budget bid on each spoke.
pub fn center_fractions(shape: &StarShape, bids: &SquareMatrix) -> Vec<f64> {
    let c = shape.center;
    let budget: f64 = bids.row(c).iter().sum();
    shape.spokes.iter().map(|&s| bids[(c, s)] / budget).collect()
}

/// Three rounds of the center's split: `f_i <- f_i alpha_i / sum_j f_j alpha_j`.
pub fn three_round_map(shape: &StarShape, f: &[f64]) -> Vec<f64> {
    let w: Vec<f64> = f.iter().zip(&shape.alpha).map(|(f, a)| f * a).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

/// Center fractions at round `t` from those at rounds 0, 1 and 2:
/// `f(r) * alpha^q` renormalized, with `r = t mod 3`, `q = t / 3`.
/// Evaluated in log space.
pub fn star_fraction_closed_form(shape: &StarShape, f0: &[Vec<f64>; 3], t: usize) -> Vec<f64> {
    let f = &f0[t % 3];
    let q = (t / 3) as f64;
    let logs: Vec<f64> = f
        .iter()
        .zip(&shape.alpha)
        .map(|(&fi, a)| {
            if fi > 0.0 {
                fi.ln() + q * a.ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseObservation {
    pub spoke: usize,
    pub tag: PhaseTag,
    pub slope: f64,
    /// `ln(max / min)` of the true amount over the window.
    pub log_amplitude: f64,
}

/// Tags spokes by the slope of their log amounts over `window`: above
/// `eps` grows, below `-eps` vanishes, otherwise bounded.
pub fn observed_phase(
    traj: &Trajectory,
    shape: &StarShape,
    window: RangeInclusive<usize>,
    eps: Option<f64>,
) -> Result<Vec<PhaseObservation>, AnalysisError> {
    let eps = eps.unwrap_or(SLOPE_TOL);
    shape
        .spokes
        .iter()
        .map(|&spoke| {
            let slope = growth_rate(traj, spoke, window.clone())?;
            let logs: Vec<f64> = traj
                .snapshots
                .iter()
                .filter(|s| window.contains(&s.t))
                .map(|s| s.log_amount(spoke))
                .collect();
            let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
            let tag = if slope > eps {
                PhaseTag::Grows
            } else if slope < -eps {
                PhaseTag::Vanishes
            } else {
                PhaseTag::Bounded
            };
            Ok(PhaseObservation {
                spoke,
                tag,
                slope,
                log_amplitude: hi - lo,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::construct_star;
    use crate::economy::detect_star;

    #[test]
    fn boundary_spoke_is_bounded() {
        let e = construct_star(&[0.8, 1.5625], &[1.0, 1.0]).unwrap();
        let shape = detect_star(&e).unwrap();
        let p = star_phase(&shape).unwrap();
        assert!((p.threshold - 0.8).abs() < 1e-15);
        assert_eq!(p.tags, vec![PhaseTag::Bounded, PhaseTag::Grows]);
    }

    #[test]
    fn perturbed_spokes() {
        for (a1, tag) in [(0.82, PhaseTag::Grows), (0.78, PhaseTag::Vanishes)] {
            let shape = StarShape::from_spokes(vec![a1, 1.5625], vec![1.0, 1.0]);
            assert_eq!(star_phase(&shape).unwrap().tags[0], tag);
        }
        let shape = StarShape::from_spokes(vec![1.5, 1.5], vec![1.0, 1.0]);
        assert_eq!(star_phase(&shape).unwrap().tags, vec![PhaseTag::Grows; 2]);
        let shape = StarShape::from_spokes(vec![0.5, 0.9], vec![1.0, 1.0]);
        assert!(matches!(star_phase(&shape), Err(AnalysisError::NoGoodCycle { .. })));
    }

    #[test]
    fn closed_form_recursion() {
        let shape = StarShape::from_spokes(vec![0.8, 1.5625, 1.1], vec![1.0, 1.0, 1.2]);
        let f0 = [vec![0.2, 0.5, 0.3], vec![0.6, 0.1, 0.3], vec![0.3, 0.3, 0.4]];
        for r in 0..3 {
            let f = star_fraction_closed_form(&shape, &f0, r);
            assert!(f.iter().zip(&f0[r]).all(|(a, b)| (a - b).abs() < 1e-15));
        }
        for t in 0..60 {
            let direct = star_fraction_closed_form(&shape, &f0, t + 3);
            let mapped = three_round_map(&shape, &star_fraction_closed_form(&shape, &f0, t));
            for (a, b) in direct.iter().zip(&mapped) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
