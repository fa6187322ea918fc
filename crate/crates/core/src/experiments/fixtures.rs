use serde::Serialize;

use super::config::{Axis, BidSpec, Metric, RunConfig, SweepConfig, SweepParam};
use super::ExperimentError;
use crate::economy::Economy;
use crate::mechanism::{
    equal_split_rule, example_e1_schedule, run_schedule, self_rule, RuleSchedule, EXAMPLE_E1_START,
};

/// A fixture evaluated through an abstract splitting-rule schedule rather
/// than the trading post.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ScheduleFixture {
    /// One-way economy under the keep-your-own-good rule.
    OneWaySelf,
    /// One-way economy under the equal-split rule.
    OneWayEqual,
    /// Two triangles through player 0 with a periodic bad split.
    TwoTriangles { gamma: f64, eps: f64 },
}

impl ScheduleFixture {
    pub fn build(&self) -> Result<(Economy, RuleSchedule, Vec<f64>), ExperimentError> {
        let one_way = || Economy::from_rows(&[vec![1.1, 0.0], vec![0.2, 0.0]]);
        Ok(match *self {
            ScheduleFixture::OneWaySelf => (one_way()?, RuleSchedule::constant(self_rule(2)), vec![1.0, 1.0]),
            ScheduleFixture::OneWayEqual => (one_way()?, RuleSchedule::constant(equal_split_rule(2)), vec![1.0, 1.0]),
            ScheduleFixture::TwoTriangles { gamma, eps } => {
                let (e, s) = example_e1_schedule(gamma, eps)?;
                (e, s, EXAMPLE_E1_START.to_vec())
            }
        })
    }

    pub fn run(&self, rounds: usize) -> Result<Vec<Vec<f64>>, ExperimentError> {
        let (e, s, x0) = self.build()?;
        Ok(run_schedule(&e, &x0, &s, rounds)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixtureKind {
    Run {
        config: RunConfig,
    },
    Sweep {
        config: SweepConfig,
    },
    Schedule {
        schedules: Vec<ScheduleFixture>,
        rounds: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    #[serde(flatten)]
    pub kind: FixtureKind,
}

impl Fixture {
    pub fn run_config(&self) -> Option<&RunConfig> {
        match &self.kind {
            FixtureKind::Run { config } => Some(config),
            _ => None,
        }
    }

    pub fn sweep_config(&self) -> Option<&SweepConfig> {
        match &self.kind {
            FixtureKind::Sweep { config } => Some(config),
            _ => None,
        }
    }
}

pub const HEATMAP_RESOLUTION: usize = 64;

fn run(name: &'static str, summary: &'static str, config: RunConfig) -> Fixture {
    Fixture {
        name,
        summary,
        kind: FixtureKind::Run { config },
    }
}

fn two_player_sweep(rows: Vec<Vec<f64>>, x: Axis, y: Axis, rounds: usize) -> SweepConfig {
    let mut base = RunConfig::new(rows, vec![1.0, 1.0], rounds);
    base.record_bids_every = None;
    SweepConfig {
        base,
        x,
        y,
        metric: Metric::GiniAmounts,
    }
}

fn self_loop_axes(lo: f64, hi: f64) -> (Axis, Axis) {
    let axis = |i| Axis {
        param: SweepParam::SelfLoop { i },
        min: lo,
        max: hi,
        steps: HEATMAP_RESOLUTION,
    };
    (axis(0), axis(1))
}

fn cross_edge_axes(lo: f64, hi: f64) -> (Axis, Axis) {
    let axis = |i, j| Axis {
        param: SweepParam::Edge { i, j },
        min: lo,
        max: hi,
        steps: HEATMAP_RESOLUTION,
    };
    (axis(0, 1), axis(1, 0))
}

/// x: player 0's bid on good 1; y: player 1's bid on good 0.
fn bid_axes() -> (Axis, Axis) {
    (
        Axis::centers(SweepParam::Bid { i: 0, j: 1 }, 0.0, 1.0, HEATMAP_RESOLUTION),
        Axis::centers(SweepParam::Bid { i: 1, j: 0 }, 0.0, 1.0, HEATMAP_RESOLUTION),
    )
}

fn bid_sweep(name: &'static str, summary: &'static str, self_loop: f64, rounds: usize) -> Fixture {
    let (x, y) = bid_axes();
    Fixture {
        name,
        summary,
        kind: FixtureKind::Sweep {
            config: two_player_sweep(vec![vec![self_loop, 0.1], vec![15.0, self_loop]], x, y, rounds),
        },
    }
}

/// Every named instance.
pub fn fixtures() -> Vec<Fixture> {
    let sqrt15 = 1.5f64.sqrt();
    let mut out = vec![
        run(
            "fig1",
            "two players whose only good cycle is the 2-cycle (product 1.02)",
            RunConfig::new(vec![vec![0.99, 0.1], vec![10.2, 0.99]], vec![1.0, 2.0], 2000),
        ),
        run("fig2", "all cycle products one; equal splits cycle with period 3", {
            let mut c = RunConfig::new(vec![vec![1.0, 5.0], vec![0.2, 1.0]], vec![1.0, 1.0], 300)
                .with_budgets(vec![25.0, 100.0]);
            c.normalize_money = true;
            c
        }),
        Fixture {
            name: "fig3",
            summary: "Gini of amounts after 800 rounds over both initial cross bids",
            kind: FixtureKind::Sweep {
                config: {
                    let (x, y) = bid_axes();
                    two_player_sweep(vec![vec![sqrt15, 0.1], vec![15.0, sqrt15]], x, y, 800)
                },
            },
        },
        Fixture {
            name: "appA",
            summary: "one-way economy under the self and equal-split rules",
            kind: FixtureKind::Schedule {
                schedules: vec![ScheduleFixture::OneWaySelf, ScheduleFixture::OneWayEqual],
                rounds: 10,
            },
        },
        run(
            "appC",
            "worked single step with explicit bids and total money 2",
            RunConfig::new(vec![vec![0.8, 5.0], vec![1.0, 0.1]], vec![1.0, 2.0], 1).with_bids(BidSpec::Matrix {
                matrix: vec![vec![0.3, 0.7], vec![0.1, 0.9]],
            }),
        ),
        run("appD", "four players; the best cycle absorbs the money of the rest", {
            let third = 1.0 / 3.0;
            let mut c = RunConfig::new(
                vec![
                    vec![0.1, 1.0, 0.1, 0.1],
                    vec![1.0, 0.1, 0.1, 0.1],
                    vec![0.1, 0.1, 0.1, 0.3],
                    vec![0.1, 0.1, 0.1, 0.1],
                ],
                vec![1.0; 4],
                10_000,
            )
            .with_bids(BidSpec::Matrix {
                matrix: (0..4)
                    .map(|i| (0..4).map(|j| if i == j { 0.0 } else { third }).collect())
                    .collect(),
            });
            c.allow_zero_bids = true;
            c
        }),
        Fixture {
            name: "appE1",
            summary: "bad periodic split: x_0(3k) decays while the total does not",
            kind: FixtureKind::Schedule {
                schedules: vec![ScheduleFixture::TwoTriangles { gamma: 0.5, eps: 0.5 }],
                rounds: 60,
            },
        },
        run(
            "star3",
            "star with spoke 0 exactly at the growth threshold",
            RunConfig::new(
                vec![vec![0.0, 0.0, 0.8], vec![0.0, 0.0, 1.5625], vec![1.0, 1.0, 0.0]],
                vec![1.0, 1.0, 1.0],
                300,
            )
            .with_bids(BidSpec::Matrix {
                matrix: vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 1.0], vec![0.5, 0.5, 0.0]],
            }),
        ),
        run(
            "fig13",
            "only good cycle is player 0's self-loop, yet player 1 grows",
            RunConfig::new(vec![vec![1.2, 0.2], vec![1.1, 0.85]], vec![1.0, 1.0], 4000),
        ),
        run(
            "fig14",
            "as fig13 with player 1's self-loop lowered to 0.83; player 1 decays",
            RunConfig::new(vec![vec![1.2, 0.2], vec![1.1, 0.83]], vec![1.0, 1.0], 4000),
        ),
    ];

    let (x, y) = self_loop_axes(0.5, 2.0);
    out.push(Fixture {
        name: "fig15",
        summary: "Gini over both self-loops of [[x,0.1],[15,y]] after 120 rounds",
        kind: FixtureKind::Sweep {
            config: two_player_sweep(vec![vec![1.0, 0.1], vec![15.0, 1.0]], x, y, 120),
        },
    });
    let (x, y) = cross_edge_axes(0.1, 2.0);
    out.push(Fixture {
        name: "fig16",
        summary: "Gini over both cross edges of [[1,x],[y,1]] after 120 rounds",
        kind: FixtureKind::Sweep {
            config: two_player_sweep(vec![vec![1.0, 1.0], vec![1.0, 1.0]], x, y, 120),
        },
    });
    let (x, y) = cross_edge_axes(0.1, 2.0);
    out.push(Fixture {
        name: "fig17",
        summary: "Gini over both cross edges of [[0,x],[y,0.5]] after 120 rounds",
        kind: FixtureKind::Sweep {
            config: {
                // every admissible initial bid is 0.5; player 0 cannot bid on its own good
                let mut c = two_player_sweep(vec![vec![0.0, 1.0], vec![1.0, 0.5]], x, y, 120);
                c.base.budgets = Some(vec![0.5, 1.0]);
                c
            },
        },
    });
    out.push(bid_sweep(
        "fig18",
        "Gini over initial cross bids, self-loops 0.25, 350 rounds",
        0.25,
        350,
    ));
    out.push(bid_sweep(
        "fig19",
        "Gini over initial cross bids, self-loops 0.25, 350 rounds",
        0.25,
        350,
    ));
    out.push(bid_sweep(
        "fig20",
        "Gini over initial cross bids, self-loops 1, 350 rounds",
        1.0,
        350,
    ));
    out.push(bid_sweep(
        "fig21",
        "Gini over initial cross bids, self-loops 1.21, 350 rounds",
        1.21,
        350,
    ));
    out.push(bid_sweep(
        "fig22",
        "Gini over initial cross bids, self-loops sqrt(1.5), 350 rounds",
        sqrt15,
        350,
    ));
    out.push(bid_sweep(
        "fig23",
        "Gini over initial cross bids, self-loops 1.24, 350 rounds",
        1.24,
        350,
    ));
    out.push(bid_sweep(
        "fig24",
        "Gini over initial cross bids, self-loops 1.4, 350 rounds",
        1.4,
        350,
    ));
    out.push(bid_sweep(
        "fig25",
        "Gini over initial cross bids, self-loops 2, 350 rounds",
        2.0,
        350,
    ));
    out
}

pub fn fixture(name: &str) -> Result<Fixture, ExperimentError> {
    fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| ExperimentError::UnknownFixture(name.to_string()))
}

/// Star fixture with spoke 0's coefficient on the center replaced.
pub fn star3_with_spoke0(lambda: f64) -> RunConfig {
    let mut cfg = fixture("star3")
        .expect("registered")
        .run_config()
        .cloned()
        .expect("run fixture");
    cfg.economy = super::config::EconomySource::inline(vec![
        vec![0.0, 0.0, lambda],
        vec![0.0, 0.0, 1.5625],
        vec![1.0, 1.0, 0.0],
    ]);
    cfg
}
