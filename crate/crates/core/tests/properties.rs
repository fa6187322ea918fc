use approx::assert_relative_eq;
use proptest::collection::vec;
use proptest::prelude::*;
use tradepost_core::analysis::gini;
use tradepost_core::economy::{
    best_cycle_by_enumeration, best_cycle_karp, classify, construct_star, detect_star, enumerate_simple_cycles,
    normalize, Economy, GrowthTag, StarShape,
};
use tradepost_core::tradingpost::{advance, equal_split_bids};
use tradepost_core::{init_state, InitOptions, MarketState, SquareMatrix};

/// Strongly connected economies: a ring `j -> j+1` plus random extra edges.
fn economy(max_n: usize) -> impl Strategy<Value = Economy> {
    (2..=max_n).prop_flat_map(|n| {
        vec(prop_oneof![2 => Just(0.0), 3 => 0.2f64..2.0], n * n).prop_map(move |mut v| {
            for j in 0..n {
                let i = (j + 1) % n;
                if v[i * n + j] == 0.0 {
                    v[i * n + j] = 0.7;
                }
            }
            let rows: Vec<Vec<f64>> = v.chunks(n).map(<[f64]>::to_vec).collect();
            Economy::validated(&rows).unwrap()
        })
    })
}

fn start(e: &Economy, money: f64, scale: f64) -> MarketState {
    let n = e.n();
    let x0: Vec<f64> = (0..n).map(|i| scale * (1.0 + i as f64 / 3.0)).collect();
    init_state(e, &x0, equal_split_bids(e, &vec![money; n]), InitOptions::default()).unwrap()
}

/// Every simple cycle as its vertex list, smallest vertex first, found by
/// depth-first search.
fn dfs_cycles(e: &Economy) -> Vec<Vec<usize>> {
    fn go(e: &Economy, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let start = path[0];
        let v = *path.last().unwrap();
        for w in start..e.n() {
            if e.coefficient(w, v) <= 0.0 {
                continue;
            }
            if w == start {
                out.push(path.clone());
            } else if !path.contains(&w) {
                path.push(w);
                go(e, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..e.n() {
        go(e, &mut vec![s], &mut out);
    }
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_dfs(e in economy(6)) {
        let mut found: Vec<Vec<usize>> = enumerate_simple_cycles(&e).unwrap().iter().map(|c| c.vertices().to_vec()).collect();
        found.sort();
        prop_assert_eq!(found, dfs_cycles(&e));
    }

    #[test]
    fn karp_matches_enumeration(e in economy(7)) {
        let a = best_cycle_by_enumeration(&e).unwrap().cycle.geo_mean();
        let b = best_cycle_karp(&e).unwrap().cycle.geo_mean();
        prop_assert!((a.ln() - b.ln()).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn normalized_best_cycle_is_neutral(e in economy(6)) {
        let (en, w) = normalize(&e).unwrap();
        assert_relative_eq!(best_cycle_by_enumeration(&en).unwrap().cycle.geo_mean(), 1.0, max_relative = 1e-12);
        prop_assert!(w > 0.0);
        prop_assert!(classify(&en).unwrap().tag != GrowthTag::GrowsUnderSome);
    }

    #[test]
    fn money_is_conserved(e in economy(6), money in 0.01f64..100.0) {
        let mut s = start(&e, money, 1.0);
        let total = s.total_money();
        for _ in 0..100 {
            advance(&e, &mut s);
            s.renormalize();
        }
        assert_relative_eq!(s.total_money(), total, max_relative = 1e-12);
    }

    #[test]
    fn dynamics_are_scale_invariant(e in economy(5), money in 0.01f64..100.0, scale in 0.01f64..100.0) {
        let mut a = start(&e, 1.0, 1.0);
        let mut b = start(&e, money, scale);
        for _ in 0..50 {
            advance(&e, &mut a);
            advance(&e, &mut b);
        }
        for i in 0..e.n() {
            assert_relative_eq!(b.true_amount(i), scale * a.true_amount(i), max_relative = 1e-9);
            for j in 0..e.n() {
                prop_assert!((b.b[(i, j)] - money * a.b[(i, j)]).abs() <= 1e-9 * money);
            }
        }
    }

    #[test]
    fn star_roundtrip(spokes in vec((0.1f64..3.0, 0.1f64..3.0), 2..6)) {
        let (lambda, mu): (Vec<f64>, Vec<f64>) = spokes.into_iter().unzip();
        let e = construct_star(&lambda, &mu).unwrap();
        let shape = detect_star(&e).unwrap();
        prop_assert_eq!(shape, StarShape::from_spokes(lambda, mu));
    }

    #[test]
    fn gini_scale_and_order_free(u in vec(0.0f64..10.0, 1..20), c in 0.001f64..1000.0) {
        prop_assume!(u.iter().sum::<f64>() > 0.0);
        let g = gini(&u).unwrap();
        let n = u.len() as f64;
        prop_assert!((0.0..=(n - 1.0) / n + 1e-12).contains(&g));
        let scaled: Vec<f64> = u.iter().map(|v| v * c).collect();
        assert_relative_eq!(gini(&scaled).unwrap(), g, epsilon = 1e-12);
        let mut rev = u.clone();
        rev.reverse();
        assert_relative_eq!(gini(&rev).unwrap(), g, epsilon = 1e-12);
        let pairwise: f64 = u.iter().flat_map(|a| u.iter().map(move |b| (a - b).abs())).sum();
        assert_relative_eq!(g, pairwise / (2.0 * n * u.iter().sum::<f64>()), epsilon = 1e-12);
    }

    #[test]
    fn raising_a_coefficient_keeps_growth(e in economy(5), k in 0usize..25, factor in 1.0f64..3.0) {
        let n = e.n();
        let (i, j) = (k / 5 % n, k % 5 % n);
        prop_assume!(e.coefficient(i, j) > 0.0);
        let mut a: SquareMatrix = e.matrix().clone();
        a[(i, j)] *= factor;
        let raised = Economy::from_matrix(a).unwrap();
        let before = classify(&e).unwrap().tag;
        let after = classify(&raised).unwrap().tag;
        match before {
            GrowthTag::GrowsUnderAnyNonWasteful => prop_assert_eq!(after, before),
            GrowthTag::GrowsUnderSome => prop_assert!(matches!(after, GrowthTag::GrowsUnderSome | GrowthTag::GrowsUnderAnyNonWasteful)),
            _ => prop_assert!(after != GrowthTag::VanishesAlways || before == GrowthTag::VanishesAlways),
        }
    }
}

#[test]
fn economy_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    let e = Economy::validated(&[vec![0.99, 0.1], vec![10.2, 0.99]]).unwrap();
    std::fs::write(&path, serde_json::to_string(&e.to_document()).unwrap()).unwrap();
    assert_eq!(Economy::from_json_path(&path).unwrap(), e);
}
