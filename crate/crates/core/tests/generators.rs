use dirassort::generators::{iid_degree_sequence, random_bridge_collection, sample_integer_power_law, PowerLawSpec};
use dirassort::theory::fit_slope;

#[test]
fn tail_slope_matches_gamma() {
    let spec = PowerLawSpec::new(1.5, 1).unwrap();
    let draws = sample_integer_power_law(spec, 2024, 1_000_000);
    let total = draws.len() as f64;
    let thresholds = [10u64, 30, 100, 300, 1000];
    let log_t: Vec<f64> = thresholds.iter().map(|&t| (t as f64).ln()).collect();
    let log_s: Vec<f64> = thresholds
        .iter()
        .map(|&t| (draws.iter().filter(|&&x| x > t).count() as f64 / total).ln())
        .collect();
    let slope = fit_slope(&log_t, &log_s);
    assert!((slope + 1.5).abs() < 0.15, "slope {slope}");
}

#[test]
fn floored_mean_matches_zeta() {
    // E[floor X] = Σ_{t ≥ 1} P(X ≥ t) = Σ t^{-γ}
    let spec = PowerLawSpec::new(3.0, 1).unwrap();
    let exact: f64 = (1..2_000_000u64).map(|t| (t as f64).powi(-3)).sum();
    let draws = sample_integer_power_law(spec, 8, 1_000_000);
    let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
    assert!((mean / exact - 1.0).abs() < 0.05, "{mean} vs {exact}");
}

#[test]
fn coordinates_are_uncorrelated() {
    let spec = PowerLawSpec::new(5.0, 1).unwrap();
    let pairs = iid_degree_sequence(100_000, spec, spec, 31);
    let n = pairs.len() as f64;
    let (mx, my) = pairs
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x as f64 / n, b + y as f64 / n));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &pairs {
        let (dx, dy) = (x as f64 - mx, y as f64 - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let corr = sxy / (sxx * syy).sqrt();
    assert!(corr.abs() < 0.01, "corr {corr}");
}

#[test]
fn collections_are_deterministic() {
    let spec = PowerLawSpec::new(1.5, 1).unwrap();
    let a = random_bridge_collection(50, 3.0, spec, 12).unwrap();
    let b = random_bridge_collection(50, 3.0, spec, 12).unwrap();
    assert_eq!(a.graph, b.graph);
    assert_eq!(a.components, b.components);
    assert!(random_bridge_collection(0, 3.0, spec, 0).is_err());
    assert!(random_bridge_collection(5, 0.0, spec, 0).is_err());
}
