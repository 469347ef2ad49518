//! Small numeric-comparison helpers shared by the library, its test suites,
//! and the experiment reports.

/// Relative error |a - b| / max(|b|, floor); `floor` guards the zero case.
pub fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

/// Least-squares slope of y against x.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "slope fit needs at least two points");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    sxy / sxx
}

/// Shared-slope least squares across several series: each series keeps its own
/// intercept, a single slope is fitted to all of them. Robust way to pool
/// log-log decay fits over a randomized sweep where individual series are
/// short and noisy.
pub fn pooled_slope(series: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in series {
        assert_eq!(x.len(), y.len());
        if x.len() < 2 {
            continue;
        }
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        for (xi, yi) in x.iter().zip(y) {
            sxx += (xi - mx) * (xi - mx);
            sxy += (xi - mx) * (yi - my);
        }
    }
    assert!(sxx > 0.0, "pooled slope fit has no spread");
    sxy / sxx
}
