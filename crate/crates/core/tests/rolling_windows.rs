use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spillnet::prelude::*;
use spillnet::rolling::with_threads;
use spillnet::synthetic::{sector_volatility_panel, two_regime_panel};

fn static_total(panel: &VolatilityPanel, spec: VarSpec, horizon: usize) -> ConnectednessTable {
    let model = fit_var(panel, spec).unwrap();
    connectedness(&gfevd(&model, horizon).unwrap())
}

#[test]
fn random_windows_match_single_shot_runs() {
    let panel = sector_volatility_panel(6, 700, 3);
    let config = RollingConfig {
        window: 200,
        step: 3,
        var_spec: VarSpec::new(2),
        horizon: 10,
    };
    let result = roll(&panel, &config).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let k = rng.gen_range(0..result.n_windows());
        let start = k * config.step;
        let slice = panel.columns(start..start + config.window);
        assert_eq!(result.window_end_dates[k], *slice.dates().last().unwrap());
        let table = static_total(&slice, config.var_spec, config.horizon);
        assert_eq!(result.total_pct[k], Some(table.total_pct), "window {k}");
        assert_eq!(result.from_pct.column(k), table.from_pct.column(0));
        assert_eq!(result.to_pct.column(k), table.to_pct.column(0));
        assert_eq!(result.net_pct.column(k), table.net_pct.column(0));
    }
}

#[test]
fn window_count_formula() {
    let panel = sector_volatility_panel(3, 157, 9);
    for (window, step) in [(60, 1), (60, 7), (100, 13), (157, 5), (80, 200)] {
        let config = RollingConfig {
            window,
            step,
            var_spec: VarSpec::new(1),
            horizon: 4,
        };
        let result = roll(&panel, &config).unwrap();
        let expect = (157 - window) / step + 1;
        assert_eq!(result.n_windows(), expect);
        assert_eq!(result.total_pct.len(), expect);
        assert_eq!(result.from_pct.ncols(), expect);
        assert_eq!(result.unstable_flags.len(), expect);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let panel = sector_volatility_panel(5, 400, 17);
    let config = RollingConfig {
        window: 120,
        ..RollingConfig::default()
    };
    let one = with_threads(1, || roll(&panel, &config)).unwrap().unwrap();
    let four = with_threads(4, || roll(&panel, &config)).unwrap().unwrap();
    assert!(one.failures.is_empty());
    assert_eq!(one, four);
}

#[test]
fn regime_change_shows_in_total_connectedness() {
    let days = 1200;
    let panel = two_regime_panel(5, days, 31);
    let config = RollingConfig {
        window: 200,
        step: 10,
        var_spec: VarSpec::new(1),
        horizon: 10,
    };
    let result = roll(&panel, &config).unwrap();
    let totals: Vec<f64> = result.total_pct.iter().map(|t| t.unwrap()).collect();
    let calm: Vec<f64> = (0..totals.len())
        .filter(|&k| k * config.step + config.window <= days / 2)
        .map(|k| totals[k])
        .collect();
    let spread = calm.iter().copied().fold(f64::NEG_INFINITY, f64::max) - calm.iter().copied().fold(f64::INFINITY, f64::min);
    let jump = totals.last().unwrap() - totals[0];
    assert!(jump > spread, "jump {jump:.2} vs calm-regime spread {spread:.2}");
}

#[test]
fn horizon_curves_are_reported() {
    let panel = sector_volatility_panel(4, 500, 23);
    let grid = SweepGrid {
        windows: vec![150],
        horizons: vec![5, 10, 15],
        lags: vec![2],
        step: 5,
        include_intercept: true,
    };
    let result = sweep(&panel, &grid).unwrap();
    let curves: Vec<&RollingResult> = result.successful().collect();
    assert_eq!(curves.len(), 3);
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in a + 1..3 {
            worst = worst.max(curves[a].max_abs_total_difference(curves[b]).unwrap());
        }
    }
    println!("max pairwise difference across horizons: {worst:.3} points");
    assert!(worst.is_finite());
    assert_eq!(result.max_spread(), Some(worst));
    for p in &result.envelope {
        assert!(p.min <= p.median && p.median <= p.max);
    }
}

#[test]
fn gaps_stay_gaps() {
    // a flat stretch makes every window inside it singular
    let mut values = sector_volatility_panel(3, 300, 2).values().clone();
    let flat = DMatrix::from_element(3, 80, 2e-4);
    values.columns_mut(100, 80).copy_from(&flat);
    let panel = VolatilityPanel::from_matrix(values, chrono::NaiveDate::from_ymd_opt(2010, 1, 1).unwrap()).unwrap();
    let config = RollingConfig {
        window: 60,
        step: 1,
        var_spec: VarSpec::new(1),
        horizon: 5,
    };
    let result = roll(&panel, &config).unwrap();
    assert!(!result.failures.is_empty());
    for f in &result.failures {
        assert!(result.is_gap(f.index));
        assert!(result.from_pct.column(f.index).iter().all(|v| v.is_nan()));
        assert!(f.error.contains("singular"), "{}", f.error);
    }
    let ok = result.total_pct.iter().filter(|t| t.is_some()).count();
    assert_eq!(ok + result.failures.len(), result.n_windows());
}
