//! System-level checks of the dilate/translate wavelet machinery:
//! orthonormality across scales, Parseval energy capture on finite windows,
//! and certified far-field decay of the mothers.

use wavop::grid::Grid;
use wavop::rng::substream;
use wavop::wavelet::{
    analyze_window, decay_report, gram_matrix, parseval_defect, random_in_span,
    synthesize_window, IndexWindow, MotherFamily,
};

#[test]
fn gram_identity_one_dim_five_scales() {
    // 395 basis elements spanning j ∈ [-2, 2]. Grid spacing 1/16 keeps the
    // product bandwidth 2·2²·Ξ ≈ 67 under 2π/h ≈ 100.5, so the rectangle rule
    // is exact up to boundary truncation.
    let fam = MotherFamily::build_system(1, 1 << 12, 1).unwrap();
    let grid = Grid::new(1, 256.0, 1 << 13).unwrap();
    let window = IndexWindow::new(-2, 2, 39, vec![1]).unwrap();
    assert_eq!(window.len(1), 395);
    let gram = gram_matrix(&fam, &window, &grid).unwrap();
    assert_eq!(gram.dim, 395);
    assert!(
        gram.max_identity_deviation <= 1e-4,
        "Gram deviation {}",
        gram.max_identity_deviation
    );
}

#[test]
fn gram_identity_two_dim_mixed_members() {
    // All three tensor members at two scales: 3·2·9² = 486 elements.
    let fam = MotherFamily::build_system(2, 1 << 11, 1).unwrap();
    let grid = Grid::new(2, 64.0, 1 << 10).unwrap();
    let window = IndexWindow::new(0, 1, 4, vec![1, 2, 3]).unwrap();
    assert_eq!(window.len(2), 486);
    let gram = gram_matrix(&fam, &window, &grid).unwrap();
    assert!(
        gram.max_identity_deviation <= 1e-4,
        "Gram deviation {}",
        gram.max_identity_deviation
    );
}

#[test]
fn parseval_defect_small_for_in_span_functions() {
    let fam = MotherFamily::build_system(1, 1 << 12, 1).unwrap();
    let grid = Grid::new(1, 128.0, 1 << 12).unwrap();
    let window = IndexWindow::new(-1, 1, 9, vec![1]).unwrap();
    let mut rng = substream(7, "parseval-in-span");
    for trial in 0..10 {
        let f = random_in_span(&fam, &grid, &window, &mut rng).unwrap();
        let defect = parseval_defect(&fam, &f, &window).unwrap();
        assert!(defect <= 1e-2, "trial {trial}: defect {defect}");
    }
}

#[test]
fn parseval_defect_measures_missing_scales() {
    let fam = MotherFamily::build_system(1, 1 << 12, 1).unwrap();
    let grid = Grid::new(1, 128.0, 1 << 12).unwrap();
    let full = IndexWindow::new(0, 1, 6, vec![1]).unwrap();
    let half = IndexWindow::new(0, 0, 6, vec![1]).unwrap();
    let mut rng = substream(8, "parseval-missing-scale");
    let f = random_in_span(&fam, &grid, &full, &mut rng).unwrap();
    let caught = parseval_defect(&fam, &f, &full).unwrap();
    let missed = parseval_defect(&fam, &f, &half).unwrap();
    assert!(caught <= 1e-2, "full-window defect {caught}");
    // Dropping the j=1 scale loses its share of the energy — by
    // orthonormality the defect equals that share, which is macroscopic.
    assert!(missed > 0.1, "defect with dropped scale only {missed}");
    let empty = IndexWindow::new(0, 1, 6, vec![]).unwrap();
    assert_eq!(parseval_defect(&fam, &f, &empty).unwrap(), 1.0);
}

#[test]
fn mother_decay_certifies_low_weight_classes() {
    // Default construction at regularity 1 (ramp order 6, ε = 1/2): the
    // weighted envelopes r ↦ max|∂^α ψ|·(1+r)^{2n+2|α|+2ε} must fall off for
    // |α| ≤ 1, i.e. weights 3 and 5 against a measured mother decay ≈ r^{-5.6}.
    // Radii start at 8: the first lobes form a shoulder out to r ≈ 6 where
    // the asymptotic rate has not set in yet.
    let fam = MotherFamily::build_system(1, 1 << 12, 1).unwrap();
    let radii = [8.0, 16.0, 32.0, 64.0];
    let report = decay_report(&fam, 1, &radii).unwrap();
    for orders in [vec![0u32], vec![1u32]] {
        let class = report.class(1, &orders).unwrap();
        assert!(
            class.certified,
            "class α={orders:?} (weight {}) not certified; rows: {:?}",
            class.weight_exponent,
            report
                .rows
                .iter()
                .filter(|row| row.orders == orders)
                .map(|row| (row.r, row.weighted))
                .collect::<Vec<_>>()
        );
    }
}

#[test]
fn mother_decay_flags_unattainable_weight() {
    // A first-order ramp gives |ψ| ~ r^{-2}; with ε = 1 the weight-4 and
    // weight-6 envelopes grow, and the report must say so rather than
    // certify them.
    let fam = MotherFamily::build_with(1, 1 << 12, 1, 1, 1.0).unwrap();
    let report = decay_report(&fam, 1, &[2.0, 4.0, 8.0, 16.0, 32.0]).unwrap();
    for orders in [vec![0u32], vec![1u32]] {
        let class = report.class(1, &orders).unwrap();
        assert!(
            !class.certified,
            "weight-{} class spuriously certified",
            class.weight_exponent
        );
    }
}

#[test]
fn two_dim_round_trip_and_dual_route_agreement() {
    let fam = MotherFamily::build_system(2, 1 << 11, 1).unwrap();
    let grid = Grid::new(2, 64.0, 1 << 9).unwrap();
    let window = IndexWindow::new(0, 1, 2, vec![1, 2, 3]).unwrap();
    let m = window.len(2);
    let coeffs: Vec<num_complex::Complex64> = (0..m)
        .map(|i| num_complex::Complex64::new((0.83 * i as f64).sin(), (0.29 * i as f64).cos()))
        .collect();
    let f = synthesize_window(&fam, &grid, &window, &coeffs).unwrap();
    let back = analyze_window(&fam, &f, &window).unwrap();
    let worst = coeffs
        .iter()
        .zip(&back)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-6, "round-trip error {worst}");

    // Table route vs direct spectral quadrature at the member level.
    for (l, x) in [(1usize, [3.3, 0.4]), (2, [-1.7, 2.2]), (3, [0.9, -0.6])] {
        let fast = fam.eval_member(l, 1, &[2, -1], &x).unwrap();
        let exact = fam.eval_member_exact(l, 1, &[2, -1], &x).unwrap();
        assert!(
            (fast - exact).abs() <= 1e-8,
            "l={l}: table {fast} vs direct {exact}"
        );
    }
}
