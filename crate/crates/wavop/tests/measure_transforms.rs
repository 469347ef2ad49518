//! Cross-checks of measure convolution against its Fourier-side definition,
//! route-equivalence oracles, and the L² / Lᵖ contraction bounds.

use num_complex::Complex64;
use rustfft::FftPlanner;
use wavop::grid::{Grid, GridFunction};
use wavop::measure::{
    validate_measure, BorelMeasure, ConvolveRoute, DensityKind, SingularPart,
};
use wavop::wavelet::{random_in_span, IndexWindow, MotherFamily};

fn sup(f: &GridFunction) -> f64 {
    f.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn sup_diff(a: &GridFunction, b: &GridFunction) -> f64 {
    a.samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Band-limited, well-padded test function: a random element of a small
/// wavelet span (spectrum inside |ξ| ≤ 8π/3, tails ~ r^{-5.6}).
fn random_band_limited(grid: &Grid, seed_name: &str, trial: u64) -> GridFunction {
    let fam = MotherFamily::build_system(grid.n, 1 << 11, 1).unwrap();
    let window = IndexWindow::new(0, 1, 2, (1..=fam.member_count()).collect()).unwrap();
    let mut rng = wavop::rng::substream_indexed(41, seed_name, trial);
    random_in_span(&fam, grid, &window, &mut rng).unwrap()
}

#[test]
fn delta_convolution_is_identity() {
    let grid = Grid::new(1, 64.0, 1 << 9).unwrap();
    let f = random_band_limited(&grid, "delta-identity", 0);
    let delta = BorelMeasure::delta_at_origin(1);
    for j in [-2, 0, 3] {
        let out = delta.dilate(j).convolve(&f, ConvolveRoute::Fft).unwrap();
        assert_eq!(out.samples, f.samples, "j={j}");
    }
}

#[test]
fn atom_shift_translates_and_preserves_norm() {
    let grid = Grid::new(1, 64.0, 1 << 10).unwrap();
    let f = GridFunction::sample_real(grid.clone(), |x| (-x[0] * x[0]).exp());
    let h = grid.h();

    // Whole-cell shift: exact index translation.
    let mu = BorelMeasure::new(1, None, vec![(1.0, vec![4.0 * h])], None).unwrap();
    let out = mu.dilate(0).convolve(&f, ConvolveRoute::Fft).unwrap();
    assert_eq!(out.samples[100], f.samples[96]);
    assert!((out.l2_norm() - f.l2_norm()).abs() <= 1e-8 * f.l2_norm());

    // Two half-cell phase shifts match one whole-cell index shift.
    let half = BorelMeasure::new(1, None, vec![(1.0, vec![0.5 * h])], None).unwrap();
    let once = half.dilate(0).convolve(&f, ConvolveRoute::Fft).unwrap();
    let twice = half.dilate(0).convolve(&once, ConvolveRoute::Fft).unwrap();
    let cell = BorelMeasure::new(1, None, vec![(1.0, vec![h])], None).unwrap();
    let direct = cell.dilate(0).convolve(&f, ConvolveRoute::Fft).unwrap();
    assert!(
        sup_diff(&twice, &direct) <= 1e-8 * sup(&f),
        "half-shift composition error {}",
        sup_diff(&twice, &direct)
    );
}

#[test]
fn convolution_routes_agree_one_dim() {
    // Mixed measure: Gaussian blur + on-grid atom + off-grid atom.
    let mu = BorelMeasure::new(
        1,
        Some(DensityKind::Gaussian),
        vec![(0.5, vec![2.0]), (-0.25, vec![0.791])],
        None,
    )
    .unwrap();
    for points in [1 << 8, 1 << 9] {
        let grid = Grid::new(1, 16.0, points).unwrap();
        let f =
            GridFunction::sample_real(grid, |x| (-x[0] * x[0] / 2.0).exp() * (3.0 * x[0]).cos());
        let a = mu.dilate(0).convolve(&f, ConvolveRoute::Fft).unwrap();
        let b = mu.dilate(0).convolve(&f, ConvolveRoute::Direct).unwrap();
        let rel = sup_diff(&a, &b) / sup(&a);
        assert!(rel <= 1e-10, "points={points}: route disagreement {rel}");
    }
}

#[test]
fn convolution_routes_agree_two_dim() {
    let mu = BorelMeasure::new(
        2,
        Some(DensityKind::Gaussian),
        vec![(0.3, vec![1.0, -0.5])],
        Some(SingularPart {
            m: 1,
            profile: DensityKind::Box { half_width: 1.0 },
        }),
    )
    .unwrap();
    let grid = Grid::new(2, 16.0, 1 << 6).unwrap();
    // A smooth, well-padded bump (band-limited to machine precision at h=1/2).
    let f = GridFunction::sample_real(grid.clone(), |x| {
        (-(x[0] * x[0] + x[1] * x[1]) / 4.0).exp()
    });
    let a = mu.dilate(0).convolve(&f, ConvolveRoute::Fft).unwrap();
    let b = mu.dilate(0).convolve(&f, ConvolveRoute::Direct).unwrap();
    let rel = sup_diff(&a, &b) / sup(&a);
    assert!(rel <= 1e-10, "route disagreement {rel}");
}

#[test]
fn fourier_consistency_on_grid_frequencies() {
    // FFT of μ_j ∗ f must equal μ̂_j · f̂ on the grid's frequency range.
    let grid = Grid::new(1, 64.0, 1 << 10).unwrap();
    let m = grid.points;
    let h = grid.h();
    let f = random_band_limited(&grid, "fourier-consistency", 7);
    let mu = BorelMeasure::new(
        1,
        Some(DensityKind::Gaussian),
        vec![(0.5, vec![1.3])],
        None,
    )
    .unwrap();
    for j in [0, 1] {
        let dil = mu.dilate(j);
        let conv = dil.convolve(&f, ConvolveRoute::Fft).unwrap();
        let mut fhat = f.samples.clone();
        let mut chat = conv.samples.clone();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut fhat);
        fft.process(&mut chat);
        let peak = chat.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut worst = 0.0f64;
        for idx in 0..m {
            let signed = if idx < m / 2 {
                idx as i64
            } else {
                idx as i64 - m as i64
            };
            let xi = 2.0 * std::f64::consts::PI * signed as f64 / (m as f64 * h);
            let expected = dil.fourier(&[xi]).unwrap() * fhat[idx];
            worst = worst.max((chat[idx] - expected).norm());
        }
        assert!(worst <= 1e-8 * peak, "j={j}: defect {}", worst / peak);
    }
}

#[test]
fn dilation_covariance_against_fourier_inversion() {
    // Direct spatial computation of μ_j ∗ f equals the inverse DFT of
    // μ̂(2ʲξ) f̂(ξ).
    let grid = Grid::new(1, 64.0, 1 << 10).unwrap();
    let m = grid.points;
    let h = grid.h();
    let f = random_band_limited(&grid, "dilation-covariance", 3);
    let mu = BorelMeasure::new(
        1,
        Some(DensityKind::Gaussian),
        vec![(0.4, vec![0.33])],
        None,
    )
    .unwrap();
    let dil = mu.dilate(1);
    let spatial = dil.convolve(&f, ConvolveRoute::Fft).unwrap();

    let mut buf = f.samples.clone();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for (idx, v) in buf.iter_mut().enumerate() {
        let signed = if idx < m / 2 {
            idx as i64
        } else {
            idx as i64 - m as i64
        };
        let xi = 2.0 * std::f64::consts::PI * signed as f64 / (m as f64 * h);
        *v *= dil.fourier(&[xi]).unwrap();
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let worst = spatial
        .samples
        .iter()
        .zip(&buf)
        .map(|(a, b)| (a - b * scale).norm())
        .fold(0.0, f64::max);
    assert!(
        worst <= 1e-8 * sup(&spatial),
        "covariance defect {}",
        worst / sup(&spatial)
    );
}

#[test]
fn l2_contraction_by_total_variation() {
    let mu = BorelMeasure::new(
        2,
        Some(DensityKind::Gaussian),
        vec![(0.5, vec![0.5, 0.0]), (0.25, vec![-0.3, 0.7])],
        Some(SingularPart {
            m: 1,
            profile: DensityKind::Box { half_width: 1.0 },
        }),
    )
    .unwrap();
    let tv = mu.total_variation();
    assert!((tv - 2.75).abs() < 1e-12);
    let grid = Grid::new(2, 64.0, 1 << 9).unwrap();
    for trial in 0..5 {
        let f = random_band_limited(&grid, "young-l2", trial);
        let out = mu.dilate(0).convolve(&f, ConvolveRoute::Fft).unwrap();
        let ratio = out.l2_norm() / f.l2_norm();
        assert!(ratio <= tv * (1.0 + 1e-9), "trial {trial}: ratio {ratio}");
    }
}

#[test]
fn hyperplane_convolution_contracts_lp() {
    // ‖λ ∗ f‖_p ≤ ‖h‖₁ ‖f‖_p for the hyperplane-supported part, p ∈ {1, 2}.
    let mu = BorelMeasure::new(
        2,
        None,
        vec![],
        Some(SingularPart {
            m: 1,
            profile: DensityKind::Box { half_width: 1.0 },
        }),
    )
    .unwrap();
    let grid = Grid::new(2, 64.0, 1 << 9).unwrap();
    for trial in 0..20 {
        let f = random_band_limited(&grid, "young-lp", trial);
        let out = mu.dilate(0).convolve(&f, ConvolveRoute::Fft).unwrap();
        for p in [1.0, 2.0] {
            let ratio = out.lp_quasinorm(p) / f.lp_quasinorm(p);
            assert!(
                ratio <= 1.0 + 1e-3,
                "trial {trial}, p={p}: ratio {ratio}"
            );
        }
    }
}

#[test]
fn padding_contract_rejects_boundary_mass() {
    let grid = Grid::new(1, 16.0, 1 << 8).unwrap();
    let edge = GridFunction::sample_real(grid, |x| (-(x[0] - 14.0) * (x[0] - 14.0)).exp());
    let delta = BorelMeasure::delta_at_origin(1);
    match delta.dilate(0).convolve(&edge, ConvolveRoute::Fft) {
        Err(wavop::Error::PaddingViolation { mass, .. }) => assert!(mass > 1e-6),
        other => panic!("expected padding violation, got {other:?}"),
    }
}

#[test]
fn truncated_geometric_atom_family_is_admissible() {
    // Atoms (2^{-i}, i), i = 1..60: the weighted sum Σ 2^{-i}(1+i)^w converges
    // by ratio test; the truncation tail is below 10⁻⁹ of the total.
    let atoms: Vec<(f64, Vec<f64>)> = (1..=60)
        .map(|i| (2f64.powi(-i), vec![i as f64]))
        .collect();
    let mu = BorelMeasure::new(1, None, atoms, None).unwrap();
    let report = validate_measure(&mu, 1, 0.5);
    assert!(report.pass);

    let w = report.weight_exponent;
    assert!((w - 5.0).abs() < 1e-15);
    let mut oracle = 0.0;
    for i in (1..=60).rev() {
        oracle += 2f64.powi(-i) * (1.0 + i as f64).powf(w);
    }
    assert!(
        (report.atom_weighted_sum - oracle).abs() <= 1e-12 * oracle,
        "{} vs {oracle}",
        report.atom_weighted_sum
    );
    // Ratio-test tail bound: terms shrink by at least 0.5·(63/62)^5 < 0.55.
    let t61 = 2f64.powi(-61) * 62f64.powf(w);
    let tail_bound = t61 / (1.0 - 0.55);
    assert!(tail_bound < 1e-9 * oracle, "tail bound {tail_bound}");
}

#[test]
fn density_total_mass_is_dilation_invariant_on_grid() {
    let mu = BorelMeasure::new(2, Some(DensityKind::Gaussian), vec![], None).unwrap();
    let grid = Grid::new(2, 32.0, 1 << 8).unwrap();
    for j in [-1, 0, 2] {
        let dil = mu.dilate(j);
        let mut mass = 0.0;
        for i in 0..grid.len() {
            mass += dil.density_sample(&grid.site(i)[..2]);
        }
        mass *= grid.cell();
        assert!((mass - 1.0).abs() < 1e-8, "j={j}: mass {mass}");
    }
}

#[test]
fn fourier_of_sampled_gaussian_matches_closed_form() {
    // Quadrature transform of the sampled density against ĝ(ξ) = e^{-ξ²/2}.
    let grid = Grid::new(1, 32.0, 1 << 9).unwrap();
    let mu = BorelMeasure::new(1, Some(DensityKind::Gaussian), vec![], None).unwrap();
    let dil = mu.dilate(0);
    for &xi in &[0.0, 0.7, 2.2, -4.9] {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..grid.len() {
            let x = grid.coord(i);
            acc += dil.density_sample(&[x]) * Complex64::new(0.0, -x * xi).exp();
        }
        acc *= grid.h();
        let expected = dil.fourier(&[xi]).unwrap();
        assert!(
            (acc - expected).norm() < 1e-8,
            "ξ={xi}: {acc} vs {expected}"
        );
    }
}
