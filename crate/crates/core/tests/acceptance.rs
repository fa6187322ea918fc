//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tradepost_core::analysis::{
    bid_fraction_series, center_fractions, cycle_potential_check, detect_period, growth_rate, inequality_ratio,
    limit_report, observed_phase, star_fraction_closed_form, star_phase, TailWindow,
};
use tradepost_core::economy::{classify, detect_star, enumerate_simple_cycles, normalize, GrowthTag};
use tradepost_core::experiments::{fixture, random_amounts, random_economy, run_sweep, star3_with_spoke0, GiniGrid};
use tradepost_core::mechanism::{
    cycle_routing_rule, example_e1_schedule, random_non_wasteful_schedule, EXAMPLE_E1_START,
};
use tradepost_core::tradingpost::equal_split_bids;
use tradepost_core::{init_state, run_schedule, simulate, step, Economy, InitOptions, MarketState, SimulateOptions};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn run_fixture(name: &str) -> (Economy, MarketState, SimulateOptions) {
    let cfg = fixture(name).unwrap().run_config().cloned().unwrap();
    let (e, s) = cfg.resolve(Path::new(".")).unwrap();
    (e, s, cfg.simulate_options())
}

fn c1_worked_step() -> Verdict {
    let (e, s, _) = run_fixture("appC");
    let t0 = Instant::now();
    let (s1, rec) = step(&e, &s);
    let elapsed = t0.elapsed();
    let mut worst = 0.0_f64;
    let x = [4.975, 0.3625];
    let budgets = [0.4, 1.6];
    let y = [[0.75, 0.875], [0.25, 1.125]];
    for i in 0..2 {
        worst = worst.max(rel(s1.true_amount(i), x[i]));
        worst = worst.max(rel(s1.budgets()[i], budgets[i]));
        for j in 0..2 {
            worst = worst.max(rel(rec.y[(i, j)], y[i][j]));
        }
    }
    let printed = [0.048, 0.351, 1.103, 0.496];
    let bid_err = (0..4)
        .map(|k| (s1.b[(k / 2, k % 2)] - printed[k]).abs())
        .fold(0.0, f64::max);
    verdict(
        worst <= 1e-12 && bid_err <= 1e-3 && elapsed < Duration::from_millis(1),
        format!("max rel err {worst:.2e}, bid err {bid_err:.1e}, step {elapsed:?}"),
    )
}

fn max_state_gap(a: &MarketState, b: &MarketState) -> f64 {
    let n = a.n();
    let mut gap = 0.0_f64;
    for i in 0..n {
        gap = gap.max((a.true_amount(i) - b.true_amount(i)).abs());
        for j in 0..n {
            gap = gap.max((a.b[(i, j)] - b.b[(i, j)]).abs());
        }
    }
    gap
}

fn three_steps(e: &Economy, s: &MarketState) -> MarketState {
    let mut cur = s.clone();
    for _ in 0..3 {
        cur = step(e, &cur).0;
    }
    cur
}

fn c2_period_three() -> Verdict {
    let t0 = Instant::now();
    let (e, s, opts) = run_fixture("fig2");
    let fig2_gap = max_state_gap(&s, &three_steps(&e, &s));
    let traj = simulate(&e, &s, opts).unwrap();
    let period = detect_period(&traj, &e, 1e-9).map(|p| p.period);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let c: f64 = 10f64.powf(rng.gen_range(-1.0..1.0));
        let e = Economy::validated(&[vec![1.0, c], vec![1.0 / c, 1.0]]).unwrap();
        let x0 = [rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0)];
        let budgets = [rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0)];
        let s = init_state(&e, &x0, equal_split_bids(&e, &budgets), InitOptions::default()).unwrap();
        let s3 = three_steps(&e, &s);
        let scale = x0.iter().chain(&budgets).fold(1.0_f64, |m, v| m.max(*v));
        worst = worst.max(max_state_gap(&s, &s3) / scale);
    }
    let elapsed = t0.elapsed();
    verdict(
        fig2_gap <= 1e-12 && period == Some(3) && worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("fig2 gap {fig2_gap:.2e}, period {period:?}, random max gap {worst:.2e}, {elapsed:?}"),
    )
}

fn c3_cycle_potential() -> Verdict {
    let t0 = Instant::now();
    let mut worst = 0.0_f64;
    let mut cycles = 0;
    let mut shortest = usize::MAX;
    for seed in 0..100 {
        let n = 2 + seed as usize % 5;
        let e = random_economy(n, 0.4, 300 + seed);
        let s = init_state(
            &e,
            &random_amounts(n, seed),
            equal_split_bids(&e, &vec![1.0; n]),
            InitOptions::default(),
        )
        .unwrap();
        let traj = simulate(&e, &s, SimulateOptions::new(1000)).unwrap();
        for c in enumerate_simple_cycles(&e).unwrap() {
            if c.edges().any(|(i, j)| s.b[(i, j)] <= 0.0) {
                continue;
            }
            let p = cycle_potential_check(&traj, &e, &c).unwrap();
            worst = worst.max(p.max_drift);
            shortest = shortest.min(p.checked_through);
            cycles += 1;
        }
    }
    let elapsed = t0.elapsed();
    verdict(
        worst < 1e-6 && elapsed < Duration::from_secs(30),
        format!("{cycles} cycles, max drift {worst:.2e}, shortest checked horizon {shortest}, {elapsed:?}"),
    )
}

fn c4_growth_rate() -> Verdict {
    let t0 = Instant::now();
    let (e, s, opts) = run_fixture("fig1");
    let traj = simulate(&e, &s, opts).unwrap();
    let target = 1.02_f64.ln() / 2.0;
    let slopes: Vec<f64> = (0..2).map(|p| growth_rate(&traj, p, 500..=2000).unwrap()).collect();
    let worst = slopes.iter().map(|v| rel(*v, target)).fold(0.0, f64::max);
    let elapsed = t0.elapsed();
    verdict(
        worst <= 0.05 && elapsed < Duration::from_secs(1),
        format!(
            "slopes {:.6} {:.6} vs {target:.6}, rel err {worst:.2e}, {elapsed:?}",
            slopes[0], slopes[1]
        ),
    )
}

fn c5_normalization() -> Verdict {
    let mut bid_gap = 0.0_f64;
    let mut amount_gap = 0.0_f64;
    for seed in 0..20 {
        let n = 2 + seed as usize % 5;
        let e = random_economy(n, 0.4, 500 + seed);
        let (en, w) = normalize(&e).unwrap();
        let x0 = random_amounts(n, seed);
        let bids = equal_split_bids(&e, &vec![1.0; n]);
        let run = |econ: &Economy| {
            let s = init_state(econ, &x0, bids.clone(), InitOptions::default()).unwrap();
            simulate(econ, &s, SimulateOptions::new(500)).unwrap()
        };
        let (a, b) = (run(&e), run(&en));
        for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
            let (ba, bb) = (sa.bids.as_ref().unwrap(), sb.bids.as_ref().unwrap());
            bid_gap = bid_gap.max(ba.max_abs_diff(bb).unwrap());
            for i in 0..n {
                let d = sb.log_amount(i) - (sa.log_amount(i) - sa.t as f64 * w.ln());
                amount_gap = amount_gap.max(d.exp_m1().abs());
            }
        }
    }
    verdict(
        bid_gap <= 1e-9 && amount_gap <= 1e-6,
        format!("max bid gap {bid_gap:.2e}, max amount rel gap {amount_gap:.2e}"),
    )
}

fn c6_inequality() -> Verdict {
    let t0 = Instant::now();
    let (e, s, opts) = run_fixture("appD");
    let traj = simulate(&e, &s, opts).unwrap();
    let window = TailWindow::default();
    let r = limit_report(&traj, &e, &window).unwrap();
    let pred = r
        .predecessor_fractions
        .iter()
        .map(|f| f.tail_min)
        .fold(f64::INFINITY, f64::min);
    let last = traj.snapshots.last().unwrap();
    let off_budget = last.budgets[2].max(last.budgets[3]);
    let ratio = inequality_ratio(&traj, &e, 0, 3, &window).unwrap();
    let growth = ratio.log_ratio.last().unwrap() - ratio.log_ratio[0];
    let frac = bid_fraction_series(&traj, 2, 3).last().unwrap().1;
    let elapsed = t0.elapsed();
    verdict(
        r.cycle.vertices() == [0, 1]
            && pred > 0.99
            && r.cut_tail_max < 1e-3
            && off_budget < 1e-3
            && growth >= 100f64.ln()
            && frac > 0.99
            && elapsed < Duration::from_secs(5),
        format!(
            "cycle {}, predecessor min {pred:.6}, cut {:.2e}, off-cycle budgets {off_budget:.2e}, ln ratio growth {growth:.1}, b3->4 share {frac:.6}, {elapsed:?}",
            r.cycle,
            r.cut_tail_max + 0.0
        ),
    )
}

fn c7_star() -> Verdict {
    let (e, s, opts) = run_fixture("star3");
    let traj = simulate(&e, &s, opts).unwrap();
    let logs = traj.log_amounts(0);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let amplitude = (hi - lo).exp();

    let shape = detect_star(&e).unwrap();
    let frames: Vec<Vec<f64>> = traj.bid_snapshots().map(|(_, b)| center_fractions(&shape, b)).collect();
    let seed = [frames[0].clone(), frames[1].clone(), frames[2].clone()];
    let closed_gap = frames
        .iter()
        .enumerate()
        .flat_map(|(t, f)| {
            let g = star_fraction_closed_form(&shape, &seed, t);
            f.iter().zip(g).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);

    let mut agree = true;
    let mut tags = Vec::new();
    for lambda in [0.82, 0.78] {
        let cfg = star3_with_spoke0(lambda);
        let (e, s) = cfg.resolve(Path::new(".")).unwrap();
        let shape = detect_star(&e).unwrap();
        let expected = star_phase(&shape).unwrap().tags;
        let traj = simulate(&e, &s, cfg.simulate_options()).unwrap();
        let seen: Vec<_> = observed_phase(&traj, &shape, 100..=300, None)
            .unwrap()
            .iter()
            .map(|o| o.tag)
            .collect();
        agree &= seen == expected;
        tags.push(format!("{lambda}: {:?}/{:?}", seen[0], expected[0]));
    }
    let spoke0_ok = tags[0].ends_with("Grows/Grows") && tags[1].ends_with("Vanishes/Vanishes");
    verdict(
        amplitude < 10.0 && closed_gap <= 1e-9 && agree && spoke0_ok && frames.len() == 301,
        format!(
            "M/m {amplitude:.3}, closed-form gap {closed_gap:.2e}, spoke 0 tags {}",
            tags.join(", ")
        ),
    )
}

/// Cycle products by depth-first search from each smallest vertex.
fn oracle_products(e: &Economy) -> Vec<f64> {
    fn dfs(e: &Economy, start: usize, v: usize, prod: f64, seen: &mut Vec<bool>, out: &mut Vec<f64>) {
        for w in start..e.n() {
            let a = e.coefficient(w, v);
            if a <= 0.0 {
                continue;
            }
            if w == start {
                out.push(prod * a);
            } else if !seen[w] {
                seen[w] = true;
                dfs(e, start, w, prod * a, seen, out);
                seen[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..e.n() {
        let mut seen = vec![false; e.n()];
        seen[s] = true;
        dfs(e, s, s, 1.0, &mut seen, &mut out);
    }
    out
}

fn oracle_class(products: &[f64]) -> GrowthTag {
    let good = products.iter().any(|&p| p > 1.0 + 1e-12);
    let all_good = products.iter().all(|&p| p > 1.0 + 1e-12);
    let all_bad = products.iter().all(|&p| p < 1.0 - 1e-12);
    match (good, all_good, all_bad) {
        (true, true, _) => GrowthTag::GrowsUnderAnyNonWasteful,
        (true, false, _) => GrowthTag::GrowsUnderSome,
        (false, _, true) => GrowthTag::VanishesAlways,
        _ => GrowthTag::NoGrowthPossible,
    }
}

fn planted(rng: &mut ChaCha8Rng, kind: usize) -> Economy {
    let n = rng.gen_range(2..=6);
    let range = match kind {
        0 => 0.3..0.95,
        1 => 1.05..2.0,
        _ => 0.5..1.5,
    };
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == (j + 1) % n || rng.gen_bool(0.35) {
                        rng.gen_range(range.clone())
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    Economy::validated(&rows).unwrap()
}

fn c8_classification() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    let mut counts = [0usize; 4];
    let mut behavior_ok = 0;
    let mut sampled = 0;
    for k in 0..200 {
        let e = planted(&mut rng, k % 3);
        let class = classify(&e).unwrap();
        let expect = oracle_class(&oracle_products(&e));
        if class.tag != expect {
            mismatches += 1;
        }
        counts[class.tag as usize] += 1;
        if k % 10 != 0 {
            continue;
        }
        sampled += 1;
        let x0 = vec![1.0; e.n()];
        let total = |x: &Vec<f64>| x.iter().sum::<f64>();
        let ok = match class.tag {
            GrowthTag::VanishesAlways => {
                let run = run_schedule(&e, &x0, &random_non_wasteful_schedule(&e, 1.0, k as u64), 2000).unwrap();
                total(run.last().unwrap()) < 1e-3 * total(&x0)
            }
            GrowthTag::GrowsUnderAnyNonWasteful => {
                let run = run_schedule(&e, &x0, &random_non_wasteful_schedule(&e, 1.0, k as u64), 200).unwrap();
                total(run.last().unwrap()) > 1e3 * total(&x0)
            }
            GrowthTag::GrowsUnderSome => {
                let w = class.witness.as_ref().unwrap();
                let rounds = 200 * w.len();
                let run = run_schedule(&e, &x0, &cycle_routing_rule(&e, w).unwrap(), rounds).unwrap();
                let expected = rounds as f64 * w.geo_mean().ln();
                (total(run.last().unwrap()) / total(&x0)).ln() >= 0.5 * expected
            }
            GrowthTag::NoGrowthPossible => true,
        };
        behavior_ok += ok as usize;
    }
    verdict(
        mismatches == 0 && behavior_ok == sampled,
        format!(
            "{mismatches} oracle mismatches; classes vanish/any/some/none = {counts:?}; behavior {behavior_ok}/{sampled}"
        ),
    )
}

fn normalized(g: f64) -> f64 {
    2.0 * g
}

fn summarize(grid: &GiniGrid) -> (f64, f64) {
    let vals: Vec<f64> = grid.cells().map(|c| c.2).filter(|v| v.is_finite()).collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn c9_heatmaps() -> Verdict {
    let t0 = Instant::now();
    let fig15 = fixture("fig15").unwrap().sweep_config().cloned().unwrap();
    let g15 = run_sweep(&fig15, Path::new("."), None).unwrap();
    let mut off_min = f64::INFINITY;
    let mut diag_max = f64::NEG_INFINITY;
    let mut diag_high_max = f64::NEG_INFINITY;
    for (iy, row) in g15.values.iter().enumerate() {
        for (ix, &v) in row.iter().enumerate() {
            let (x, y) = (g15.x_values[ix], g15.y_values[iy]);
            if ix == iy {
                diag_max = diag_max.max(v);
                if x >= 1.4 {
                    diag_high_max = diag_high_max.max(v);
                }
            } else if x.max(y) >= 1.4 && (x - y).abs() >= 0.2 {
                off_min = off_min.min(v);
            }
        }
    }
    let fig3 = fixture("fig3").unwrap().sweep_config().cloned().unwrap();
    let g3 = run_sweep(&fig3, Path::new("."), None).unwrap();
    let (lo3, hi3) = summarize(&g3);
    let elapsed = t0.elapsed();
    let passed = off_min > 0.6
        && diag_max < 0.2
        && lo3 < 0.1
        && hi3 > 0.5
        && g15.failures + g3.failures == 0
        && elapsed < Duration::from_secs(120);
    verdict(
        passed,
        format!(
            "fig15 off-diagonal min {off_min:.4} (normalized {:.4}), diagonal max {diag_max:.4} (>=1.4: {diag_high_max:.4}); \
             fig3 range [{lo3:.4}, {hi3:.4}] (normalized [{:.4}, {:.4}]); two-player Gini cannot exceed 0.5; {elapsed:?}",
            normalized(off_min),
            normalized(lo3),
            normalized(hi3)
        ),
    )
}

fn c10_example_e1() -> Verdict {
    let mut worst = 0.0_f64;
    let mut min_total = f64::INFINITY;
    for gamma in [0.2, 0.5, 0.8] {
        for eps in [0.1, 0.5, 0.9] {
            let (e, sched) = example_e1_schedule(gamma, eps).unwrap();
            let run = run_schedule(&e, &EXAMPLE_E1_START, &sched, 60).unwrap();
            let c = gamma + (1.0 - gamma) * (1.0 - eps);
            for k in 0..=20 {
                worst = worst.max(rel(run[3 * k][0], c.powi(k as i32)));
            }
            min_total = min_total.min(run.iter().map(|x| x.iter().sum::<f64>()).fold(f64::INFINITY, f64::min));
        }
    }
    verdict(
        worst <= 1e-12 && min_total > 0.0,
        format!("max rel err {worst:.2e}, min total {min_total:.4}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("appC single step", c1_worked_step),
        ("period three", c2_period_three),
        ("cycle potential", c3_cycle_potential),
        ("growth rate", c4_growth_rate),
        ("normalization", c5_normalization),
        ("inequality suite", c6_inequality),
        ("star phases", c7_star),
        ("classification", c8_classification),
        ("heatmaps", c9_heatmaps),
        ("two triangles", c10_example_e1),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let v = f();
        failed += !v.passed as usize;
        println!(
            "{} {:>2} {:<18} {}",
            if v.passed { "PASS" } else { "FAIL" },
            k + 1,
            name,
            v.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
