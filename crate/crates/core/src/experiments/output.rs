use std::io::{self, Write};

use serde::Serialize;

use super::sweep::GiniGrid;
use crate::analysis::{
    cycle_potential_check, detect_normalized_period, detect_period, growth_rate, limit_report, GiniSeries,
    PeriodReport, PotentialCheck, RotationEstimate, TailWindow,
};
use crate::economy::{
    best_cycle, classify, detect_star, enumerate_simple_cycles, Cycle, Economy, EconomyError, GrowthTag, ProductClass,
    StarShape, DEFAULT_ENUMERATION_LIMIT,
};
use crate::tradingpost::Trajectory;

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Up to six decimals with trailing zeros dropped.
pub fn fmt_short(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// `round,player,x_mantissa,log_scale,budget,gini_x,gini_B`, round-major.
pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    let g = GiniSeries::from_trajectory(traj);
    writeln!(w, "round,player,x_mantissa,log_scale,budget,gini_x,gini_B")?;
    for (k, s) in traj.snapshots.iter().enumerate() {
        for i in 0..s.x.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                s.t,
                i,
                fmt_float(s.x[i]),
                fmt_float(s.log_scale),
                fmt_float(s.budgets[i]),
                fmt_float(g.amounts[k]),
                fmt_float(g.budgets[k]),
            )?;
        }
    }
    Ok(())
}

/// `round,i,j,bid` for every recorded bid matrix.
pub fn write_bids_csv<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "round,i,j,bid")?;
    for (s, b) in traj.bid_snapshots() {
        for (i, j, v) in b.iter() {
            writeln!(w, "{},{},{},{}", s.t, i, j, fmt_float(v))?;
        }
    }
    Ok(())
}

/// First row holds the x values, first column the y values.
pub fn write_grid_csv<W: Write>(mut w: W, grid: &GiniGrid) -> io::Result<()> {
    let header: Vec<String> = grid.x_values.iter().map(|v| fmt_float(*v)).collect();
    writeln!(w, "y\\x,{}", header.join(","))?;
    for (row, y) in grid.values.iter().zip(&grid.y_values) {
        let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        writeln!(w, "{},{}", fmt_float(*y), cells.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleSummary {
    /// One-based, as printed.
    pub label: String,
    pub vertices: Vec<usize>,
    pub product: f64,
    pub geo_mean: f64,
}

impl From<&Cycle> for CycleSummary {
    fn from(c: &Cycle) -> Self {
        Self {
            label: c.to_string(),
            vertices: c.vertices().to_vec(),
            product: c.product(),
            geo_mean: c.geo_mean(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EconomyReport {
    pub n: usize,
    pub positive_edges: usize,
    /// Absent above the enumeration limit.
    pub cycles: Option<Vec<CycleSummary>>,
    pub best_cycle: CycleSummary,
    pub best_ties: Vec<CycleSummary>,
    pub best_exhaustive: bool,
    pub class: GrowthTag,
    pub witness: Option<CycleSummary>,
    /// Every enumerated cycle has product one.
    pub all_products_one: bool,
    pub star: Option<StarShape>,
}

impl EconomyReport {
    pub fn headline(&self) -> String {
        if self.all_products_one {
            return "all cycle products 1; neutral".into();
        }
        format!(
            "{}; best cycle {}, product {}",
            self.class,
            self.best_cycle.label,
            fmt_short(self.best_cycle.product)
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k:<16}{v}\n"));
        line("players", self.n.to_string());
        line("positive edges", self.positive_edges.to_string());
        line("class", self.class.to_string());
        line(
            "best cycle",
            format!(
                "{} product {} geo-mean {}",
                self.best_cycle.label,
                fmt_short(self.best_cycle.product),
                fmt_short(self.best_cycle.geo_mean)
            ),
        );
        if !self.best_ties.is_empty() {
            let ties: Vec<&str> = self.best_ties.iter().map(|c| c.label.as_str()).collect();
            line("tied with", ties.join(" "));
        }
        if let Some(w) = &self.witness {
            line("witness", w.label.clone());
        }
        if let Some(s) = &self.star {
            line("star center", (s.center + 1).to_string());
            let alpha: Vec<String> = s.alpha.iter().map(|a| fmt_short(*a)).collect();
            line("star alpha", alpha.join(" "));
        }
        if let Some(cycles) = &self.cycles {
            line("cycles", cycles.len().to_string());
            for c in cycles {
                line("", format!("{:<12} product {}", c.label, fmt_short(c.product)));
            }
        }
        out.push_str(&self.headline());
        out.push('\n');
        out
    }
}

/// Cycle inventory, best cycle, growth class and star shape.
pub fn analyze_economy(econ: &Economy) -> Result<EconomyReport, EconomyError> {
    let cycles = (econ.n() <= DEFAULT_ENUMERATION_LIMIT)
        .then(|| enumerate_simple_cycles(econ))
        .transpose()?;
    let best = best_cycle(econ)?;
    let class = classify(econ)?;
    let all_products_one = cycles
        .as_ref()
        .is_some_and(|cs| cs.iter().all(|c| c.product_class() == ProductClass::Neutral));
    Ok(EconomyReport {
        n: econ.n(),
        positive_edges: econ.positive_edge_count(),
        cycles: cycles.map(|cs| cs.iter().map(CycleSummary::from).collect()),
        best_cycle: (&best.cycle).into(),
        best_ties: best.ties.iter().map(CycleSummary::from).collect(),
        best_exhaustive: best.exhaustive,
        class: class.tag,
        witness: class.witness.as_ref().map(CycleSummary::from),
        all_products_one,
        star: detect_star(econ),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub player: usize,
    pub window: (usize, usize),
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitSummary {
    pub predecessor_tail_min: Vec<f64>,
    pub cut_tail_max: f64,
    pub budget_limits: RotationEstimate,
    pub amount_limits: RotationEstimate,
    pub off_cycle_budget_tail_max: f64,
    pub gini_period: Option<usize>,
    pub cycle_money_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub rounds: usize,
    pub economy: EconomyReport,
    /// `ln` of the best cycle's geometric mean: the expected slope of
    /// best-cycle players' log amounts.
    pub expected_best_slope: f64,
    pub growth: Vec<GrowthSummary>,
    pub potential: Option<PotentialCheck>,
    pub period: Option<PeriodReport>,
    pub normalized_period: Option<PeriodReport>,
    pub limits: Option<LimitSummary>,
    /// Why `limits` is absent.
    pub limits_skipped: Option<String>,
    pub final_gini_amounts: f64,
    pub final_gini_budgets: f64,
    pub money_drift: f64,
}

pub const PERIOD_TOL: f64 = 1e-9;

pub fn simulation_report(econ: &Economy, traj: &Trajectory) -> Result<SimulationReport, EconomyError> {
    let economy = analyze_economy(econ)?;
    let best = best_cycle(econ)?;
    let rounds = traj.rounds();
    let window = (rounds / 4, rounds);
    let growth = (0..econ.n())
        .map(|player| GrowthSummary {
            player,
            window,
            slope: growth_rate(traj, player, window.0..=window.1).ok(),
        })
        .collect();
    let potential = cycle_potential_check(traj, econ, &best.cycle).ok();
    let (limits, limits_skipped) = match limit_report(traj, econ, &TailWindow::default()) {
        Ok(r) => (
            Some(LimitSummary {
                predecessor_tail_min: r.predecessor_fractions.iter().map(|f| f.tail_min).collect(),
                cut_tail_max: r.cut_tail_max,
                budget_limits: r.budget_limits,
                amount_limits: r.amount_limits,
                off_cycle_budget_tail_max: r.off_cycle_budget_tail_max,
                gini_period: r.gini_period,
                cycle_money_share: r.cycle_money_share,
            }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    let gini = GiniSeries::from_trajectory(traj);
    let money0: f64 = traj.snapshots[0].budgets.iter().sum();
    let money_drift = traj
        .snapshots
        .iter()
        .map(|s| (s.budgets.iter().sum::<f64>() - money0).abs())
        .fold(0.0, f64::max);
    Ok(SimulationReport {
        rounds,
        expected_best_slope: best.cycle.geo_mean().ln(),
        economy,
        growth,
        potential,
        period: detect_period(traj, econ, PERIOD_TOL),
        normalized_period: detect_normalized_period(traj, econ, PERIOD_TOL),
        limits,
        limits_skipped,
        final_gini_amounts: *gini.amounts.last().unwrap_or(&f64::NAN),
        final_gini_budgets: *gini.budgets.last().unwrap_or(&f64::NAN),
        money_drift,
    })
}

impl SimulationReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k:<22}{v}\n"));
        line("rounds", self.rounds.to_string());
        line("economy", self.economy.headline());
        line("expected best slope", fmt_short(self.expected_best_slope));
        for g in &self.growth {
            let slope = g.slope.map_or("n/a".into(), fmt_short);
            line(
                &format!("slope player {}", g.player + 1),
                format!("{slope} over [{}, {}]", g.window.0, g.window.1),
            );
        }
        if let Some(p) = &self.potential {
            line(
                "potential drift",
                format!("{:.3e} through round {}", p.max_drift, p.checked_through),
            );
        }
        match &self.period {
            Some(p) => line("period", format!("{} from round {}", p.period, p.onset)),
            None => line("period", "none".into()),
        }
        if let Some(p) = &self.normalized_period {
            line("normalized period", format!("{} from round {}", p.period, p.onset));
        }
        match (&self.limits, &self.limits_skipped) {
            (Some(l), _) => {
                let f: Vec<String> = l.predecessor_tail_min.iter().map(|v| fmt_short(*v)).collect();
                line("predecessor share", f.join(" "));
                line("cut money (tail max)", format!("{:.3e}", l.cut_tail_max + 0.0));
                line("cycle money share", fmt_short(l.cycle_money_share));
            }
            (None, Some(why)) => line("limits", format!("skipped: {why}")),
            _ => {}
        }
        line("final gini amounts", fmt_short(self.final_gini_amounts));
        line("final gini budgets", fmt_short(self.final_gini_budgets));
        line("money drift", format!("{:.3e}", self.money_drift));
        out
    }
}
