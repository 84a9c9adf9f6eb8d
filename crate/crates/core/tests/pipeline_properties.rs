mod common;

use proptest::prelude::*;
use spillnet::prelude::*;
use spillnet::synthetic::{ohlc_panel, random_stable_model};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_matches_direct_evaluation(
        seed in 0u64..10_000,
        n in 2usize..6,
        p in 1usize..4,
        h in 1usize..13,
        radius in 0.2f64..0.95,
    ) {
        let model = random_stable_model(n, p, radius, seed);
        let ours = gfevd(&model, h).unwrap().normalized;
        let oracle = common::gfevd_direct(&model.coefficients, &model.residual_covariance, h);
        prop_assert!((&ours - &oracle).abs().max() < 1e-9);
    }

    #[test]
    fn table_identities_hold(seed in 0u64..10_000, n in 2usize..7, h in 1usize..15) {
        let model = random_stable_model(n, 2, 0.8, seed);
        let table = connectedness(&gfevd(&model, h).unwrap());
        let d = &table.fevd.normalized;
        for i in 0..n {
            prop_assert!((d.row(i).sum() - 1.0).abs() < 1e-10);
            prop_assert!((table.from_pct[i] + table.self_pct[i] - 100.0).abs() < 1e-10);
        }
        prop_assert!(table.net_pct.sum().abs() < 1e-6);
        prop_assert!((table.to_pct.sum() - table.from_pct.sum()).abs() < 1e-8);
        prop_assert!((table.total_pct - table.from_pct.sum() / n as f64).abs() < 1e-10);
        let npm = net_pairwise(&table.fevd);
        for i in 0..n {
            for j in 0..n {
                prop_assert!(npm.values[(i, j)] >= 0.0);
                prop_assert_eq!(npm.values[(i, j)] * npm.values[(j, i)], 0.0);
            }
        }
    }

    #[test]
    fn covariance_scale_is_irrelevant(seed in 0u64..10_000, scale in 1e-3f64..1e3) {
        let model = random_stable_model(4, 2, 0.7, seed);
        let base = gfevd(&model, 8).unwrap().normalized;
        let scaled = gfevd(&model.with_covariance(&model.residual_covariance * scale), 8).unwrap().normalized;
        prop_assert!((&base - &scaled).abs().max() < 1e-10);
    }

    #[test]
    fn relabeling_series_permutes_results(seed in 0u64..10_000, n in 2usize..7) {
        let model = random_stable_model(n, 1, 0.75, seed);
        let order = common::random_permutation(n, seed + 1);
        let base = gfevd(&model, 10).unwrap();
        let moved = gfevd(&model.permuted(&order), 10).unwrap();
        let ids: Vec<String> = order.iter().map(|&o| model.series_ids[o].clone()).collect();
        prop_assert_eq!(&moved.series_ids, &ids);
        prop_assert!((&moved.normalized - &base.permuted(&order).normalized).abs().max() < 1e-12);
    }
}

#[test]
fn ohlc_to_network_pipeline_holds_identities() {
    let bars = ohlc_panel(28, 900, 12);
    let vol = panel_volatility(&bars);
    let model = fit_var(&vol, VarSpec::default()).unwrap();
    let table = connectedness(&gfevd(&model, 10).unwrap());
    assert_eq!(table.fevd.normalized.shape(), (28, 28));
    for i in 0..28 {
        assert!((table.fevd.normalized.row(i).sum() - 1.0).abs() < 1e-10);
    }
    assert!(table.net_pct.sum().abs() < 1e-6);
    let net = build_network(&net_pairwise(&table.fevd), &table).unwrap();
    let pr = pagerank(&net, 0.85, 1e-12, 1000).unwrap();
    assert!((pr.scores.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    for e in &net.edges {
        assert!(e.weight_pct > 0.0);
    }
}
