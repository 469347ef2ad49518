//! Compactly supported atoms with vanishing moments, and their images under
//! the operator.
//!
//! An atom for exponent 0 < p ≤ 1 is supported in a ball B(x₀, r), bounded by
//! |B|^{-1/p}, and has vanishing moments up to order d = ⌊n(1/p − 1)⌋. The
//! module constructs randomized atoms on grids with those invariants holding
//! *discretely* (exact support, machine-zero quadrature moments), verifies
//! them, and measures the image Ta:
//!
//!   * near field — ∫_{B*} |Ta|^p over the doubled ball B* = B(x₀, 2r),
//!     certified against the discrete Hölder bound |B*|^{1-p/2}‖Ta‖₂^p;
//!   * far field — sups of |Ta| on dyadic rings ρ = 2r·2^t evaluated off-grid
//!     from the coefficient expansion, fitted to a power law in ρ.
//!
//! Coefficients ⟨μ_j ∗ a, ψ^l_{j,k}⟩ are computed through the adjoint route:
//! the measure is folded into the analyzing function once at mother scale
//! (see [`crate::kernel::effective_wavelet`]), and each coefficient becomes a
//! quadrature of a against that function over the support ball. No dilated
//! convolution ever touches the grid, so arbitrarily coarse scales are exact.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::check::{ls_slope, pooled_slope};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::kernel::{effective_wavelet, EffectiveWavelet};
use crate::measure::BorelMeasure;
use crate::operator::{CoefficientField, OperatorSpec, WeightRule};
use crate::rng::substream_indexed;
use crate::sum::{Kahan, KahanComplex};
use crate::wavelet::family::synthesize_window_unchecked;
use crate::wavelet::{IndexWindow, MotherFamily};

// ─── invariant tolerances ─────────────────────────────────────────────────────

/// Sup-norm slack: ‖a‖_∞ · |B|^{1/p} may exceed 1 by at most this.
pub const SUP_TOL: f64 = 1e-12;
/// Moment slack, relative to r^{|α|+n}·‖a‖_∞.
pub const MOMENT_TOL: f64 = 1e-10;
/// Near-field Hölder slack: the discrete ratio may exceed 1 by at most this.
pub const HOLDER_TOL: f64 = 1e-6;
/// A moment projection that eats this fraction of the draw's L² norm is a
/// degenerate draw and is retried.
const DEGENERATE_FLOOR: f64 = 1e-6;
/// Redraw budget before [`Error::DegenerateAtom`].
const MAX_REDRAWS: u32 = 10;
/// Default shift padding for image windows: coarse members whose cores sit
/// this many lattice steps outside the support ball still enter the window.
pub const K_PAD: i64 = 40;
/// Ring sups below `10 × NOISE_FLOOR_REL · sup|Ta|` are synthesis-truncation
/// noise and are excluded from decay fits.
const NOISE_FLOOR_REL: f64 = 1e-12;
/// Largest/smallest sweep quasi-norm may differ by at most this factor.
const SPREAD_BOUND: f64 = 8.0;
/// Pooled far-field exponents must sit within this relative band of -(n+k).
const EXPONENT_BAND: f64 = 0.15;

// ─── critical exponents ───────────────────────────────────────────────────────

fn validate_p(n: usize, p: f64) -> Result<()> {
    if n != 1 && n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(p > 0.0 && p <= 1.0) || !p.is_finite() {
        return Err(Error::invalid("p", "need 0 < p <= 1"));
    }
    Ok(())
}

/// Vanishing-moment order d = ⌊n(1/p − 1)⌋ required of an atom.
pub fn moment_order(n: usize, p: f64) -> Result<usize> {
    validate_p(n, p)?;
    Ok((n as f64 * (1.0 / p - 1.0)).floor() as usize)
}

/// Exponent range (lo, 1] on which a family of the given regularity acts:
/// lo = n/(N + n). Below lo the cancellation order of the family is too low.
pub fn admissible_p_range(n: usize, regularity: u32) -> Result<(f64, f64)> {
    if n != 1 && n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if regularity == 0 {
        return Err(Error::invalid("regularity", "must be at least 1"));
    }
    Ok((n as f64 / (regularity as f64 + n as f64), 1.0))
}

/// The unique k ≥ 1 with n/(k+n) < p ≤ n/(k−1+n); the far field of an atom
/// image decays like ρ^{-(n+k)}. Always equals `moment_order(n, p) + 1`.
pub fn taylor_index(n: usize, p: f64) -> Result<usize> {
    validate_p(n, p)?;
    let nf = n as f64;
    for k in 1..=512usize {
        let lo = nf / (k as f64 + nf);
        let hi = nf / ((k - 1) as f64 + nf);
        if p > lo && p <= hi {
            return Ok(k);
        }
    }
    Err(Error::invalid("p", "below every supported threshold"))
}

// ─── atoms ────────────────────────────────────────────────────────────────────

/// A grid-sampled atom: support in B(center, radius), sup bound |B|^{-1/p},
/// discrete moments of order ≤ ⌊n(1/p−1)⌋ vanishing.
#[derive(Clone, Debug)]
pub struct Atom {
    center: Vec<f64>,
    radius: f64,
    p: f64,
    moment_order: usize,
    pub samples: GridFunction,
}

impl Atom {
    /// Wrap externally built samples. Checks geometry (stated ball contains
    /// every nonzero sample) but not the sup/moment invariants — run
    /// [`verify_atom`] for those.
    pub fn from_samples(
        samples: GridFunction,
        center: Vec<f64>,
        radius: f64,
        p: f64,
    ) -> Result<Self> {
        let n = samples.grid.n;
        if center.len() != n {
            return Err(Error::GridMismatch(format!(
                "center has {} coordinates on a {n}-dimensional grid",
                center.len()
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("radius", "must be positive and finite"));
        }
        let moment_order = moment_order(n, p)?;
        if samples.sup_norm() == 0.0 {
            return Err(Error::ZeroFunction("atom samples"));
        }
        let fence = radius * (1.0 + SUP_TOL);
        for (flat, z) in samples.samples.iter().enumerate() {
            if z.norm() > 0.0 {
                let site = samples.grid.site(flat);
                let d2: f64 = (0..n).map(|a| (site[a] - center[a]).powi(2)).sum();
                if d2.sqrt() > fence {
                    return Err(Error::invalid(
                        "samples",
                        "support extends beyond the stated ball",
                    ));
                }
            }
        }
        Ok(Self {
            center,
            radius,
            p,
            moment_order,
            samples,
        })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn moment_order(&self) -> usize {
        self.moment_order
    }

    /// |B(center, radius)|: 2r in one dimension, πr² in two.
    pub fn ball_measure(&self) -> f64 {
        match self.samples.grid.n {
            1 => 2.0 * self.radius,
            _ => PI * self.radius * self.radius,
        }
    }
}

/// Monomial exponents of total degree ≤ dmax, in (a₀, a₁)-lexicographic order.
fn total_degree_exponents(n: usize, dmax: usize) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for a0 in 0..=dmax {
        if n == 1 {
            out.push([a0 as u32, 0]);
        } else {
            for a1 in 0..=(dmax - a0) {
                out.push([a0 as u32, a1 as u32]);
            }
        }
    }
    out
}

#[inline]
fn monomial(u: &[f64; 2], e: &[u32; 2]) -> f64 {
    u[0].powi(e[0] as i32) * u[1].powi(e[1] as i32)
}

/// C^∞ cutoff in the squared radial variable: exp(−1/(1−t)) for t < 1.
#[inline]
fn bump(t: f64) -> f64 {
    if t < 1.0 {
        (-1.0 / (1.0 - t)).exp()
    } else {
        0.0
    }
}

/// Gaussian elimination with partial pivoting on a dense m×m system; `None`
/// when a pivot collapses relative to the largest initial entry.
fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, m: usize) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| {
            a[i * m + col]
                .abs()
                .partial_cmp(&a[j * m + col].abs())
                .expect("pivot comparison saw NaN")
        })?;
        if a[piv * m + col].abs() <= 1e-12 * scale {
            return None;
        }
        if piv != col {
            for cc in 0..m {
                a.swap(col * m + cc, piv * m + cc);
            }
            b.swap(col, piv);
        }
        for row in (col + 1)..m {
            let f = a[row * m + col] / a[col * m + col];
            if f != 0.0 {
                for cc in col..m {
                    a[row * m + cc] -= f * a[col * m + cc];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; m];
    for col in (0..m).rev() {
        let mut acc = b[col];
        for cc in (col + 1)..m {
            acc -= a[col * m + cc] * x[cc];
        }
        x[col] = acc / a[col * m + col];
    }
    Some(x)
}

/// Build a randomized atom on the grid.
///
/// The profile is a random polynomial of total degree ≤ d+3 under the radial
/// bump, so the draw is C^∞ and exactly supported in the open ball. Moments
/// are then removed by projecting onto bump-weighted monomials — the
/// correction carries the same cutoff, which keeps the atom smooth at the
/// ball boundary instead of leaving a jump there. Finally the sup norm is
/// rescaled to |B|^{-1/p} exactly. Draws whose projection removes almost all
/// mass are retried with a fresh substream; after `MAX_REDRAWS` failures the
/// construction reports [`Error::DegenerateAtom`].
///
/// Requirements: the ball must sit inside the box with margin ≥ 3r on every
/// axis, and the mesh must resolve it (radius ≥ 8h).
pub fn make_atom(
    grid: &Grid,
    center: &[f64],
    radius: f64,
    p: f64,
    seed: u64,
    index: u64,
) -> Result<Atom> {
    let n = grid.n;
    if center.len() != n {
        return Err(Error::GridMismatch(format!(
            "center has {} coordinates on a {n}-dimensional grid",
            center.len()
        )));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid("radius", "must be positive and finite"));
    }
    let d = moment_order(n, p)?;
    for (a, c) in center.iter().enumerate() {
        if !c.is_finite() {
            return Err(Error::invalid("center", "non-finite coordinate"));
        }
        if c.abs() + 4.0 * radius > grid.half_width {
            return Err(Error::invalid(
                "center",
                format!("axis {a}: ball needs margin 3r inside the box"),
            ));
        }
    }
    if radius < 8.0 * grid.h() {
        return Err(Error::invalid(
            "radius",
            format!("under-resolved: need radius >= 8h = {:.3e}", 8.0 * grid.h()),
        ));
    }

    // Strictly interior ball sites, with scaled offsets u = (x - x₀)/r.
    let mut sites: Vec<(usize, [f64; 2])> = Vec::new();
    for flat in 0..grid.len() {
        let x = grid.site(flat);
        let mut d2 = 0.0;
        let mut u = [0.0; 2];
        for a in 0..n {
            u[a] = (x[a] - center[a]) / radius;
            d2 += u[a] * u[a];
        }
        if d2 < 1.0 {
            sites.push((flat, u));
        }
    }
    let constraints = total_degree_exponents(n, d);
    let poly = total_degree_exponents(n, d + 3);
    if sites.len() < 4 * constraints.len() {
        return Err(Error::invalid(
            "radius",
            "too few interior sites for the moment projection",
        ));
    }

    let bumps: Vec<f64> = sites
        .iter()
        .map(|(_, u)| bump(u[0] * u[0] + u[1] * u[1]))
        .collect();
    // The bump-weighted monomial Gram matrix depends only on geometry; one
    // factorization serves every redraw.
    let m = constraints.len();
    let mut gram = vec![0.0; m * m];
    for (ia, ea) in constraints.iter().enumerate() {
        for (ib, eb) in constraints.iter().enumerate() {
            let e = [ea[0] + eb[0], ea[1] + eb[1]];
            let mut acc = Kahan::new();
            for ((_, u), w) in sites.iter().zip(&bumps) {
                acc.add(w * monomial(u, &e));
            }
            gram[ia * m + ib] = acc.value();
        }
    }

    for attempt in 0..=MAX_REDRAWS {
        let mut rng = substream_indexed(seed, "atom-profile", index * 16 + attempt as u64);
        let coeffs: Vec<f64> = (0..poly.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let draw: Vec<f64> = sites
            .iter()
            .zip(&bumps)
            .map(|((_, u), w)| {
                let mut q = Kahan::new();
                for (c, e) in coeffs.iter().zip(&poly) {
                    q.add(c * monomial(u, e));
                }
                w * q.value()
            })
            .collect();

        let rhs: Vec<f64> = constraints
            .iter()
            .map(|e| {
                let mut acc = Kahan::new();
                for ((_, u), f) in sites.iter().zip(&draw) {
                    acc.add(f * monomial(u, e));
                }
                acc.value()
            })
            .collect();
        let Some(correction) = solve_dense(gram.clone(), rhs, m) else {
            continue;
        };

        let values: Vec<f64> = sites
            .iter()
            .zip(&bumps)
            .zip(&draw)
            .map(|(((_, u), w), f)| {
                let mut c = Kahan::new();
                for (cb, e) in correction.iter().zip(&constraints) {
                    c.add(cb * monomial(u, e));
                }
                f - w * c.value()
            })
            .collect();

        let norm2 = |v: &[f64]| -> f64 {
            let mut acc = Kahan::new();
            for x in v {
                acc.add(x * x);
            }
            acc.value().sqrt()
        };
        let pre = norm2(&draw);
        let post = norm2(&values);
        let sup = values.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        if pre == 0.0 || sup == 0.0 || post < DEGENERATE_FLOOR * pre {
            continue;
        }

        let ball = match n {
            1 => 2.0 * radius,
            _ => PI * radius * radius,
        };
        let rescale = ball.powf(-1.0 / p) / sup;
        let mut samples = GridFunction::zeros(*grid);
        for ((flat, _), v) in sites.iter().zip(&values) {
            samples.samples[*flat] = Complex64::new(v * rescale, 0.0);
        }
        return Ok(Atom {
            center: center.to_vec(),
            radius,
            p,
            moment_order: d,
            samples,
        });
    }
    Err(Error::DegenerateAtom {
        floor: DEGENERATE_FLOOR,
        retries: MAX_REDRAWS,
    })
}

// ─── invariant verification ───────────────────────────────────────────────────

/// Measured invariants of an atom. `sup_ratio` is ‖a‖_∞·|B|^{1/p} (target 1),
/// each moment row is (α, |∫(x−x₀)^α a| / (r^{|α|+n}‖a‖_∞)), and
/// `support_leak` is the largest |a| outside the fenced ball (target exactly
/// zero: the support invariant is not a tolerance).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomCheck {
    pub sup_ratio: f64,
    pub moment_rows: Vec<(Vec<u32>, f64)>,
    pub support_leak: f64,
    pub sup_pass: bool,
    pub moment_pass: bool,
    pub support_pass: bool,
}

impl AtomCheck {
    pub fn pass(&self) -> bool {
        self.sup_pass && self.moment_pass && self.support_pass
    }
}

/// Quadrature check of the three defining invariants.
pub fn verify_atom(atom: &Atom) -> AtomCheck {
    let grid = &atom.samples.grid;
    let n = grid.n;
    let sup = atom.samples.sup_norm();
    let sup_ratio = sup * atom.ball_measure().powf(1.0 / atom.p);

    let exponents = total_degree_exponents(n, atom.moment_order);
    let mut moments = vec![KahanComplex::new(); exponents.len()];
    let fence = atom.radius * (1.0 + SUP_TOL);
    let mut leak = 0.0f64;
    for (flat, z) in atom.samples.samples.iter().enumerate() {
        if z.norm() == 0.0 {
            continue;
        }
        let x = grid.site(flat);
        let mut dx = [0.0; 2];
        let mut d2 = 0.0;
        for a in 0..n {
            dx[a] = x[a] - atom.center[a];
            d2 += dx[a] * dx[a];
        }
        if d2.sqrt() > fence {
            leak = leak.max(z.norm());
            continue;
        }
        for (acc, e) in moments.iter_mut().zip(&exponents) {
            acc.add(z * monomial(&dx, e));
        }
    }

    let cell = grid.cell();
    let moment_rows: Vec<(Vec<u32>, f64)> = exponents
        .iter()
        .zip(&moments)
        .map(|(e, acc)| {
            let order = (e[0] + e[1]) as i32;
            let scale = atom.radius.powi(order + n as i32) * sup;
            (
                e[..n].to_vec(),
                acc.value().norm() * cell / scale.max(f64::MIN_POSITIVE),
            )
        })
        .collect();

    AtomCheck {
        sup_ratio,
        support_leak: leak,
        sup_pass: sup_ratio <= 1.0 + SUP_TOL && sup > 0.0,
        moment_pass: moment_rows.iter().all(|(_, r)| *r <= MOMENT_TOL),
        support_pass: leak == 0.0,
        moment_rows,
    }
}

// ─── image windows and coefficients ───────────────────────────────────────────

/// Scale-covariant index window for the image of an atom: scales from
/// `fine` octaves below the ball (j₀ = ⌈log₂ r⌉) to `coarse` above, shifts
/// wide enough that the finest scale still covers the ball, plus `pad`
/// lattice steps for the tails.
pub fn image_window(
    atom: &Atom,
    fine: u32,
    coarse: u32,
    pad: i64,
    l_set: Vec<usize>,
) -> Result<IndexWindow> {
    let j0 = atom.radius.log2().ceil() as i32;
    let linf = atom
        .center
        .iter()
        .fold(0.0f64, |s, c| s.max(c.abs()));
    let reach = 2f64.powi(fine as i32 - j0) * (atom.radius + linf);
    IndexWindow::new(j0 - fine as i32, j0 + coarse as i32, reach.ceil() as i64 + pad, l_set)
}

/// ⟨μ_j ∗ a, ψ^l_{j,k}⟩ over the window, in canonical order, via the adjoint
/// route: each coefficient is 2^{-nj/2} hⁿ Σ_ball a(y) Ψ_l(2^{-j}y − k) with
/// Ψ_l the mother-scale effective wavelet of the measure. Exact for every
/// scale because only the compact support of a is ever integrated.
fn image_coefficients(
    ews: &[EffectiveWavelet],
    window: &IndexWindow,
    f: &GridFunction,
) -> Vec<Complex64> {
    assert_eq!(ews.len(), window.l_set.len());
    let n = f.grid.n;
    let cell = f.grid.cell();
    let k_max = window.k_max;
    let kk = window.shifts_per_axis();
    let mut out = Vec::with_capacity(window.len(n));

    if n == 1 {
        let sites: Vec<(f64, Complex64)> = f
            .samples
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(i, z)| (f.grid.coord(i), *z))
            .collect();
        for ew in ews {
            for j in window.j_min..=window.j_max {
                let scale = 2f64.powi(-j);
                let norm = 2f64.powi(-j).sqrt() * cell;
                for k in -k_max..=k_max {
                    let kf = k as f64;
                    let mut acc = KahanComplex::new();
                    for &(y, a) in &sites {
                        let w = ew.eval(&[scale * y - kf, 0.0], &[0, 0]);
                        if w != 0.0 {
                            acc.add(a * w);
                        }
                    }
                    out.push(acc.value() * norm);
                }
            }
        }
        return out;
    }

    // Group the support by grid row: every axis factor then depends on one
    // row (or column) coordinate only, and the quadrature contracts in two
    // separable stages exactly like windowed synthesis.
    let m = f.grid.points;
    let mut rows: Vec<(f64, Vec<(f64, Complex64)>)> = Vec::new();
    for i1 in 0..m {
        let cols: Vec<(f64, Complex64)> = (0..m)
            .filter(|i2| f.samples[i1 * m + i2].norm() > 0.0)
            .map(|i2| (f.grid.coord(i2), f.samples[i1 * m + i2]))
            .collect();
        if !cols.is_empty() {
            rows.push((f.grid.coord(i1), cols));
        }
    }

    for ew in ews {
        let ax0 = ew.axis(0);
        let ax1 = ew.axis(1);
        for j in window.j_min..=window.j_max {
            let scale = 2f64.powi(-j);
            let norm = 2f64.powi(-j) * cell;
            let mut slab = vec![KahanComplex::new(); kk * kk];
            for &(c_t, shift) in ew.translates() {
                // Stage 1: contract each row against the second axis.
                let mut partial = vec![Complex64::ZERO; rows.len() * kk];
                for (ri, (_, cols)) in rows.iter().enumerate() {
                    for (k2i, k2) in (-k_max..=k_max).enumerate() {
                        let mut acc = KahanComplex::new();
                        for &(y1, a) in cols {
                            let w = ax1.eval(scale * y1 + shift[1] - k2 as f64, 0);
                            if w != 0.0 {
                                acc.add(a * w);
                            }
                        }
                        partial[ri * kk + k2i] = acc.value();
                    }
                }
                // Stage 2: contract the row sums against the first axis.
                for (k1i, k1) in (-k_max..=k_max).enumerate() {
                    for (ri, (y0, _)) in rows.iter().enumerate() {
                        let w0 = ax0.eval(scale * y0 + shift[0] - k1 as f64, 0);
                        if w0 == 0.0 {
                            continue;
                        }
                        let factor = c_t * w0;
                        for k2i in 0..kk {
                            let v = partial[ri * kk + k2i];
                            if v != Complex64::ZERO {
                                slab[k1i * kk + k2i].add(v * factor);
                            }
                        }
                    }
                }
            }
            out.extend(slab.iter().map(|acc| acc.value() * norm));
        }
    }
    out
}

/// Point value of Σ c_{l,j,k} ψ^l_{j,k}(x) at an arbitrary (off-grid) point,
/// walking the canonical coefficient layout with per-axis support clipping.
fn eval_expansion(
    family: &MotherFamily,
    window: &IndexWindow,
    coeffs: &[Complex64],
    x: &[f64],
) -> Result<Complex64> {
    let n = family.n;
    let k_max = window.k_max;
    let kk = window.shifts_per_axis();
    let block = kk.pow(n as u32);
    let mut acc = KahanComplex::new();
    let mut offset = 0usize;
    for &l in &window.l_set {
        let axes = family.member_axes(l)?;
        for j in window.j_min..=window.j_max {
            let scale = 2f64.powi(-j);
            let norm = match n {
                1 => 2f64.powi(-j).sqrt(),
                _ => 2f64.powi(-j),
            };
            let mut lo = [0i64; 2];
            let mut hi = [0i64; 2];
            let mut empty = false;
            for a in 0..n {
                let u = scale * x[a];
                let cutoff = family.axis_profile(axes[a]).table(0).cutoff;
                lo[a] = ((u - cutoff).ceil() as i64).max(-k_max);
                hi[a] = ((u + cutoff).floor() as i64).min(k_max);
                if lo[a] > hi[a] {
                    empty = true;
                }
            }
            if !empty {
                let u0 = scale * x[0];
                if n == 1 {
                    let prof = family.axis_profile(axes[0]);
                    for k in lo[0]..=hi[0] {
                        let w = prof.eval(u0 - k as f64, 0);
                        if w != 0.0 {
                            let idx = offset + (k + k_max) as usize;
                            acc.add(coeffs[idx] * (norm * w));
                        }
                    }
                } else {
                    let prof0 = family.axis_profile(axes[0]);
                    let prof1 = family.axis_profile(axes[1]);
                    let u1 = scale * x[1];
                    for k1 in lo[0]..=hi[0] {
                        let w0 = prof0.eval(u0 - k1 as f64, 0);
                        if w0 == 0.0 {
                            continue;
                        }
                        let base = offset + (k1 + k_max) as usize * kk;
                        for k2 in lo[1]..=hi[1] {
                            let w1 = prof1.eval(u1 - k2 as f64, 0);
                            if w1 != 0.0 {
                                let idx = base + (k2 + k_max) as usize;
                                acc.add(coeffs[idx] * (norm * w0 * w1));
                            }
                        }
                    }
                }
            }
            offset += block;
        }
    }
    Ok(acc.value())
}

// ─── image measurements ───────────────────────────────────────────────────────

/// Sup of |Ta| over the dyadic shell radius ≤ |x − x₀| < 2·radius.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RingRow {
    pub radius: f64,
    pub sup: f64,
}

/// Near/far account of a single atom image.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomImageReport {
    pub p: f64,
    /// ∫_{B*} |Ta|^p over the doubled ball B* = B(x₀, 2r).
    pub near: f64,
    /// ∫ |Ta|^p over the rest of the grid box.
    pub far: f64,
    /// (near + far)^{1/p}.
    pub total_quasi_norm: f64,
    /// near / (|B*|^{1-p/2} ‖Ta‖_{L²(B*)}^p), with |B*| the grid measure of
    /// the doubled ball; ≤ 1 + HOLDER_TOL by the discrete Hölder inequality.
    pub holder_ratio: f64,
    /// Shell sups over [ρ, 2ρ) at ρ = 2r·2^t, t = 0..5, evaluated off-grid.
    pub rings: Vec<RingRow>,
    /// Fit floor: ring sups below ten times this are excluded.
    pub noise_floor: f64,
    /// Least-squares slope of ln sup against ln ρ over the usable rings;
    /// `None` when fewer than three rings clear the floor.
    pub fitted_exponent: Option<f64>,
    /// True when the grid boundary sits closer than 8r to the center, so the
    /// far integral is visibly truncated.
    pub clipped: bool,
}

impl AtomImageReport {
    /// (ln ρ, ln sup) rows entering the decay fit: the longest prefix of
    /// rings staying above ten times the noise floor.
    pub fn fit_points(&self) -> (Vec<f64>, Vec<f64>) {
        let cut = 10.0 * self.noise_floor;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for row in &self.rings {
            if row.sup > 0.0 && row.sup >= cut {
                xs.push(row.radius.ln());
                ys.push(row.sup.ln());
            } else {
                break;
            }
        }
        (xs, ys)
    }
}

/// Dense radial profile of |Ta|: sup over directions at each of
/// `per_octave` logarithmically spaced radii per octave, starting at
/// `start_mult · r` and covering `octaves` octaves. Evaluation is off-grid,
/// so the scan may extend past the sample box.
pub fn profile_scan(
    spec: &OperatorSpec,
    atom: &Atom,
    start_mult: f64,
    octaves: usize,
    per_octave: usize,
) -> Result<Vec<RingRow>> {
    let (window, weighted) = image_field(spec, atom)?;
    let n = atom.samples.grid.n;
    let dirs = ring_directions(n);
    let mut rows = Vec::with_capacity(octaves * per_octave);
    for t in 0..octaves {
        for s in 0..per_octave {
            let rho = start_mult
                * atom.radius
                * 2f64.powf(t as f64 + s as f64 / per_octave as f64);
            rows.push(RingRow {
                radius: rho,
                sup: ring_sup(&spec.synthesis, &window, &weighted, atom, rho, &dirs)?,
            });
        }
    }
    Ok(rows)
}

fn ring_directions(n: usize) -> Vec<[f64; 2]> {
    match n {
        1 => vec![[1.0, 0.0], [-1.0, 0.0]],
        _ => (0..32)
            .map(|mdir| {
                let th = 2.0 * PI * mdir as f64 / 32.0;
                [th.cos(), th.sin()]
            })
            .collect(),
    }
}

fn ring_sup(
    family: &MotherFamily,
    window: &IndexWindow,
    weighted: &[Complex64],
    atom: &Atom,
    rho: f64,
    dirs: &[[f64; 2]],
) -> Result<f64> {
    let n = atom.samples.grid.n;
    let mut sup = 0.0f64;
    for dir in dirs {
        let mut x = [0.0; 2];
        for a in 0..n {
            x[a] = atom.center[a] + rho * dir[a];
        }
        let v = eval_expansion(family, window, weighted, &x[..n])?;
        sup = sup.max(v.norm());
    }
    Ok(sup)
}

/// Analysis half shared by the report and the profile scan: coefficients of
/// μ_j ∗ a against the analyzer over the spec's window, weighted.
fn image_field(spec: &OperatorSpec, atom: &Atom) -> Result<(IndexWindow, Vec<Complex64>)> {
    let n = atom.samples.grid.n;
    if spec.measure.n != n {
        return Err(Error::GridMismatch(format!(
            "measure dimension {} vs atom dimension {n}",
            spec.measure.n
        )));
    }
    let window = spec.weights.window.clone();
    let ews: Vec<EffectiveWavelet> = window
        .l_set
        .iter()
        .map(|&l| effective_wavelet(&spec.measure, &spec.analysis, l))
        .collect::<Result<_>>()?;
    let values = image_coefficients(&ews, &window, &atom.samples);
    let mut field = spec.weights.clone();
    field.fill_values(values)?;
    let weighted = field.weighted()?;
    Ok((window, weighted))
}

/// Apply the operator to an atom on the atom's own grid and measure the
/// image: near-field quasi-norm with its Hölder certificate, far-field ring
/// sups with a power-law fit. The weights, window, and families come from
/// `spec`; the measure enters only through its effective wavelets.
pub fn atom_image_report(spec: &OperatorSpec, atom: &Atom) -> Result<AtomImageReport> {
    let grid = atom.samples.grid;
    let n = grid.n;
    let (window, weighted) = image_field(spec, atom)?;
    let image = synthesize_window_unchecked(&spec.synthesis, &grid, &window, &weighted)?;

    // Near/far split along |x - x₀| ≤ 2r, with the pieces Hölder needs.
    let p = atom.p;
    let r2 = (2.0 * atom.radius) * (2.0 * atom.radius);
    let mut near = Kahan::new();
    let mut far = Kahan::new();
    let mut near_sq = Kahan::new();
    let mut near_count = 0usize;
    for (flat, z) in image.samples.iter().enumerate() {
        let x = grid.site(flat);
        let d2: f64 = (0..n).map(|a| (x[a] - atom.center[a]).powi(2)).sum();
        let v = z.norm();
        if d2 <= r2 {
            near.add(v.powf(p));
            near_sq.add(v * v);
            near_count += 1;
        } else {
            far.add(v.powf(p));
        }
    }
    let cell = grid.cell();
    let near = near.value() * cell;
    let far = far.value() * cell;
    let near_l2sq = near_sq.value() * cell;
    let holder_denom =
        (cell * near_count as f64).powf(1.0 - p / 2.0) * near_l2sq.powf(p / 2.0);
    let holder_ratio = if near == 0.0 {
        0.0
    } else {
        near / holder_denom
    };

    let margin = (0..n)
        .map(|a| grid.half_width - atom.center[a].abs())
        .fold(f64::INFINITY, f64::min);
    let clipped = margin < 8.0 * atom.radius;

    // Far-field profile over dyadic shells [ρ, 2ρ) from the edge of B*
    // outward. The pointwise image oscillates under the lattice phases, so a
    // single radius can land on a node and read an order below its
    // neighbors; the shell sup follows the envelope that the decay estimate
    // actually controls.
    let per_octave = if n == 1 { 16 } else { 8 };
    let dirs = ring_directions(n);
    let mut rings = Vec::with_capacity(6);
    for t in 0..6 {
        let rho = 2.0 * atom.radius * 2f64.powi(t);
        let mut sup = 0.0f64;
        for s in 0..per_octave {
            let r_s = rho * 2f64.powf(s as f64 / per_octave as f64);
            sup = sup.max(ring_sup(&spec.synthesis, &window, &weighted, atom, r_s, &dirs)?);
        }
        rings.push(RingRow { radius: rho, sup });
    }

    let noise_floor = NOISE_FLOOR_REL * image.sup_norm();
    let mut report = AtomImageReport {
        p,
        near,
        far,
        total_quasi_norm: (near + far).powf(1.0 / p),
        holder_ratio,
        rings,
        noise_floor,
        fitted_exponent: None,
        clipped,
    };
    let (xs, ys) = report.fit_points();
    if xs.len() >= 3 {
        report.fitted_exponent = Some(ls_slope(&xs, &ys));
    }
    Ok(report)
}

// ─── randomized sweeps ────────────────────────────────────────────────────────

/// One atom of a sweep: geometry, quasi-norm split, and the per-atom flags.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomSweepRow {
    pub index: usize,
    pub center: Vec<f64>,
    pub radius: f64,
    pub p: f64,
    pub near: f64,
    pub far: f64,
    pub total_quasi_norm: f64,
    pub fitted_exponent: Option<f64>,
    pub holder_ratio: f64,
    pub holder_ok: bool,
    pub decay_ok: bool,
}

/// Uniform-boundedness evidence over a randomized family of atoms: the
/// quasi-norms must stay within a fixed spread across four octaves of radii,
/// every near field must clear its Hölder certificate, and the far fields
/// must decay at the rate -(n+k) forced by the moment order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomSweepReport {
    pub n: usize,
    pub p: f64,
    pub moment_order: usize,
    pub taylor_index: usize,
    /// -(n + k): the far-field power forced by k vanishing-plus-one moments.
    pub target_exponent: f64,
    pub rows: Vec<AtomSweepRow>,
    /// max/min of the total quasi-norms.
    pub spread: f64,
    /// Shared slope of all usable ring series.
    pub pooled_exponent: f64,
    pub holder_pass: bool,
    pub exponent_pass: bool,
    pub spread_pass: bool,
}

impl AtomSweepReport {
    pub fn pass(&self) -> bool {
        self.holder_pass && self.exponent_pass && self.spread_pass
    }

    /// CSV rows: atom, center, radius, p, near, far, total_quasi_norm,
    /// exponent, holder_ok, decay_ok.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "atom,center,radius,p,near,far,total_quasi_norm,exponent,holder_ok,decay_ok\n",
        );
        for r in &self.rows {
            let center: Vec<String> = r.center.iter().map(|c| format!("{c:.17e}")).collect();
            let exponent = match r.fitted_exponent {
                Some(s) => format!("{s:.17e}"),
                None => "nan".into(),
            };
            out.push_str(&format!(
                "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{}\n",
                r.index,
                center.join(";"),
                r.radius,
                r.p,
                r.near,
                r.far,
                r.total_quasi_norm,
                exponent,
                r.holder_ok,
                r.decay_ok
            ));
        }
        out
    }
}

/// Run `count` randomized atoms through the operator: radii log-spaced over
/// [2⁻⁴, 2²], centers jittered within r/2 of the origin, one grid per atom
/// (box half-width 12r) so the whole experiment is scale-covariant. Weights
/// are deterministic ±1 signs keyed on `seed`; the same seed reproduces the
/// sweep bit for bit.
pub fn atom_image_sweep(
    measure: &BorelMeasure,
    family: &MotherFamily,
    p: f64,
    count: usize,
    seed: u64,
) -> Result<AtomSweepReport> {
    let n = measure.n;
    if family.n != n {
        return Err(Error::GridMismatch(format!(
            "measure dimension {n} vs family dimension {}",
            family.n
        )));
    }
    if count < 2 {
        return Err(Error::invalid("count", "sweep needs at least two atoms"));
    }
    let d = moment_order(n, p)?;
    let k = taylor_index(n, p)?;
    let target = -((n + k) as f64);
    let points = if n == 1 { 512 } else { 256 };
    let l_set = if n == 1 { vec![1] } else { vec![3] };

    let mut rows = Vec::with_capacity(count);
    let mut series: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for i in 0..count {
        let radius = 2f64.powf(-4.0 + 6.0 * i as f64 / (count as f64 - 1.0));
        let mut rng = substream_indexed(seed, "atom-center", i as u64);
        let center: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(-0.5 * radius..0.5 * radius))
            .collect();
        let grid = Grid::new(n, 12.0 * radius, points)?;
        let atom = make_atom(&grid, &center, radius, p, seed, i as u64)?;
        let window = image_window(&atom, 2, 6, K_PAD, l_set.clone())?;
        let field = CoefficientField::new(window, n, &WeightRule::RandomSign { seed })?;
        let spec = OperatorSpec::new(measure.clone(), family.clone(), family.clone(), field)?;
        let report = atom_image_report(&spec, &atom)?;

        let holder_ok = report.holder_ratio <= 1.0 + HOLDER_TOL;
        // Recorded per atom as a diagnostic: one-sided, at least 85% of the
        // target rate. Individual fits wiggle ±0.15 with the lattice phase of
        // the shell boundaries, so the sweep verdict uses the pooled slope,
        // where that wiggle averages out.
        let decay_ok = report
            .fitted_exponent
            .map_or(false, |s| s <= (1.0 - EXPONENT_BAND) * target);
        let (xs, ys) = report.fit_points();
        if xs.len() >= 2 {
            series.push((xs, ys));
        }
        rows.push(AtomSweepRow {
            index: i,
            center,
            radius,
            p,
            near: report.near,
            far: report.far,
            total_quasi_norm: report.total_quasi_norm,
            fitted_exponent: report.fitted_exponent,
            holder_ratio: report.holder_ratio,
            holder_ok,
            decay_ok,
        });
    }

    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for r in &rows {
        if !(r.total_quasi_norm > 0.0) || !r.total_quasi_norm.is_finite() {
            lo = 0.0;
        }
        lo = lo.min(r.total_quasi_norm);
        hi = hi.max(r.total_quasi_norm);
    }
    let spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };

    let pooled_exponent = if series.is_empty() {
        f64::NAN
    } else {
        pooled_slope(&series)
    };
    let exponent_pass = (pooled_exponent - target).abs() <= EXPONENT_BAND * target.abs();

    Ok(AtomSweepReport {
        n,
        p,
        moment_order: d,
        taylor_index: k,
        target_exponent: target,
        holder_pass: rows.iter().all(|r| r.holder_ok),
        exponent_pass,
        spread_pass: spread <= SPREAD_BOUND,
        rows,
        spread,
        pooled_exponent,
    })
}

// ─── tests ────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{DensityKind, SingularPart};
    use crate::operator::analyze;

    fn family_1d() -> MotherFamily {
        MotherFamily::build_system(1, 1 << 12, 1).unwrap()
    }

    fn family_2d() -> MotherFamily {
        MotherFamily::build_system(2, 1 << 10, 2).unwrap()
    }

    #[test]
    fn moment_orders_match_hand_values() {
        assert_eq!(moment_order(1, 1.0).unwrap(), 0);
        assert_eq!(moment_order(1, 0.6).unwrap(), 0);
        assert_eq!(moment_order(1, 0.5).unwrap(), 1);
        assert_eq!(moment_order(2, 1.0).unwrap(), 0);
        assert_eq!(moment_order(2, 0.6).unwrap(), 1);
        assert_eq!(moment_order(2, 0.5).unwrap(), 2);
        assert!(moment_order(1, 0.0).is_err());
        assert!(moment_order(1, 1.5).is_err());
        assert!(moment_order(3, 0.5).is_err());
    }

    #[test]
    fn taylor_indices_match_hand_values() {
        assert_eq!(taylor_index(1, 1.0).unwrap(), 1);
        assert_eq!(taylor_index(1, 0.5).unwrap(), 2);
        assert_eq!(taylor_index(2, 1.0).unwrap(), 1);
        assert_eq!(taylor_index(2, 0.6).unwrap(), 2);
        assert_eq!(taylor_index(2, 0.5).unwrap(), 3);
    }

    #[test]
    fn taylor_index_is_moment_order_plus_one() {
        for n in [1usize, 2] {
            let mut p = 0.02;
            while p <= 1.0 {
                let d = moment_order(n, p).unwrap();
                let k = taylor_index(n, p).unwrap();
                assert_eq!(k, d + 1, "n={n} p={p}");
                p += 0.003;
            }
        }
    }

    #[test]
    fn admissible_range_endpoints() {
        let (lo, hi) = admissible_p_range(1, 1).unwrap();
        assert!((lo - 0.5).abs() < 1e-15 && hi == 1.0);
        let (lo, _) = admissible_p_range(2, 2).unwrap();
        assert!((lo - 0.5).abs() < 1e-15);
        let (lo, _) = admissible_p_range(1, 200).unwrap();
        assert!(lo < 0.005);
        assert!(admissible_p_range(1, 0).is_err());
        assert!(admissible_p_range(3, 1).is_err());
    }

    /// ±½ square wave on (−1, 1): sup = |B|⁻¹ exactly, mean zero exactly,
    /// support exact — a hand-checkable p = 1 atom. The origin site must stay
    /// zero: f64::signum(0.0) is 1, which would bias the mean by one cell.
    fn square_wave_atom() -> Atom {
        let grid = Grid::new(1, 8.0, 512).unwrap();
        let samples = GridFunction::sample_real(grid, |x| {
            if x[0].abs() < 1.0 && x[0] != 0.0 {
                0.5 * x[0].signum()
            } else {
                0.0
            }
        });
        Atom::from_samples(samples, vec![0.0], 1.0, 1.0).unwrap()
    }

    #[test]
    fn hand_atom_passes_all_invariants() {
        let atom = square_wave_atom();
        let chk = verify_atom(&atom);
        assert!(chk.pass(), "{chk:?}");
        assert!((chk.sup_ratio - 1.0).abs() < 1e-15);
        assert_eq!(chk.moment_rows.len(), 1);
        assert_eq!(chk.moment_rows[0].1, 0.0);
        assert_eq!(chk.support_leak, 0.0);
    }

    #[test]
    fn tampering_breaks_the_matching_invariant() {
        let atom = square_wave_atom();

        let mut loud = atom.clone();
        for z in &mut loud.samples.samples {
            *z *= 2.0;
        }
        let chk = verify_atom(&loud);
        assert!(!chk.sup_pass && chk.moment_pass && chk.support_pass);

        let mut biased = atom.clone();
        let grid = biased.samples.grid;
        for (flat, z) in biased.samples.samples.iter_mut().enumerate() {
            if grid.site(flat)[0].abs() < 1.0 {
                *z += Complex64::new(0.01, 0.0);
            }
        }
        let chk = verify_atom(&biased);
        assert!(!chk.moment_pass && chk.support_pass);
    }

    #[test]
    fn random_atoms_meet_invariants_with_margin() {
        for &(n, p) in &[
            (1usize, 1.0),
            (1, 0.7),
            (1, 0.5),
            (2, 1.0),
            (2, 0.6),
            (2, 0.5),
        ] {
            for &radius in &[0.125f64, 1.0, 4.0] {
                let points = if n == 1 { 512 } else { 256 };
                let grid = Grid::new(n, 12.0 * radius, points).unwrap();
                let mut center = vec![radius / 4.0; n];
                if n == 2 {
                    center[1] = -radius / 8.0;
                }
                let atom = make_atom(&grid, &center, radius, p, 42, 0).unwrap();
                let chk = verify_atom(&atom);
                assert!(
                    (chk.sup_ratio - 1.0).abs() <= 1e-13,
                    "n={n} p={p} r={radius}: sup ratio {}",
                    chk.sup_ratio
                );
                for (alpha, ratio) in &chk.moment_rows {
                    assert!(
                        *ratio <= MOMENT_TOL / 10.0,
                        "n={n} p={p} r={radius}: moment {alpha:?} ratio {ratio:.3e}"
                    );
                }
                assert_eq!(chk.support_leak, 0.0);
            }
        }
    }

    #[test]
    fn construction_rejects_bad_geometry() {
        let grid = Grid::new(1, 12.0, 512).unwrap();
        // Margin: ball within 3r of the box edge.
        assert!(make_atom(&grid, &[9.5], 1.0, 1.0, 1, 0).is_err());
        // Resolution: radius under 8h.
        assert!(make_atom(&grid, &[0.0], 0.05, 1.0, 1, 0).is_err());
        // Dimensions.
        assert!(make_atom(&grid, &[0.0, 0.0], 1.0, 1.0, 1, 0).is_err());
    }

    #[test]
    fn same_seed_reproduces_the_atom() {
        let grid = Grid::new(1, 12.0, 512).unwrap();
        let a = make_atom(&grid, &[0.25], 1.0, 0.7, 7, 3).unwrap();
        let b = make_atom(&grid, &[0.25], 1.0, 0.7, 7, 3).unwrap();
        assert_eq!(a.samples.samples, b.samples.samples);
        let c = make_atom(&grid, &[0.25], 1.0, 0.7, 8, 3).unwrap();
        assert_ne!(a.samples.samples, c.samples.samples);
    }

    /// For a point mass the effective wavelet *is* the mother, so the adjoint
    /// quadrature and grid analysis sum identical table values — agreement is
    /// pure roundoff.
    #[test]
    fn adjoint_route_matches_grid_analysis_for_point_mass() {
        let fam = family_1d();
        let measure = BorelMeasure::delta_at_origin(1);
        let grid = Grid::new(1, 64.0, 2048).unwrap();
        let atom = make_atom(&grid, &[0.5], 1.0, 1.0, 11, 0).unwrap();
        let window = IndexWindow::new(-1, 1, 8, vec![1]).unwrap();

        let field = CoefficientField::new(window.clone(), 1, &WeightRule::Unit).unwrap();
        let spec =
            OperatorSpec::new(measure.clone(), fam.clone(), fam.clone(), field).unwrap();
        let via_grid = analyze(&atom.samples, &spec).unwrap();
        let via_grid = via_grid.values().unwrap();

        let ew = effective_wavelet(&measure, &fam, 1).unwrap();
        let via_adjoint = image_coefficients(&[ew], &window, &atom.samples);

        let peak = via_grid.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(peak > 1e-3, "window misses the atom entirely");
        for (a, b) in via_grid.iter().zip(&via_adjoint) {
            assert!(
                (a - b).norm() <= 1e-12 * peak,
                "point-mass routes disagree: {a} vs {b} (peak {peak:.3e})"
            );
        }
    }

    /// Gaussian density: the grid route convolves spectrally before the
    /// quadrature, the adjoint route folds the density into the analyzer.
    /// They approximate the same integral through different discretizations,
    /// so agreement is bounded by the aliasing floor rather than roundoff.
    #[test]
    fn adjoint_route_matches_grid_analysis_for_density() {
        let fam = family_1d();
        let measure =
            BorelMeasure::new(1, Some(DensityKind::Gaussian), vec![], None).unwrap();
        let grid = Grid::new(1, 64.0, 2048).unwrap();
        let atom = make_atom(&grid, &[0.5], 1.0, 1.0, 11, 0).unwrap();
        let window = IndexWindow::new(-1, 1, 8, vec![1]).unwrap();

        let field = CoefficientField::new(window.clone(), 1, &WeightRule::Unit).unwrap();
        let spec =
            OperatorSpec::new(measure.clone(), fam.clone(), fam.clone(), field).unwrap();
        let via_grid = analyze(&atom.samples, &spec).unwrap();
        let via_grid = via_grid.values().unwrap();

        let ew = effective_wavelet(&measure, &fam, 1).unwrap();
        let via_adjoint = image_coefficients(&[ew], &window, &atom.samples);

        // The mean-zero atom against an all-moments-vanishing analyzer leaves
        // only a small residual, so the scale is set by the coefficients
        // themselves, not by ‖a‖.
        let peak = via_grid.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(peak > 1e-4, "window misses the atom entirely");
        let worst = via_grid
            .iter()
            .zip(&via_adjoint)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(
            worst <= 1e-9 * peak,
            "density routes disagree: worst {worst:.3e}, peak {peak:.3e}"
        );
    }

    /// Gaussian line profile: smooth in both representations, so the grid
    /// route's physical sampling of the singular slice stays spectrally
    /// accurate and the two routes can be compared tightly.
    #[test]
    fn adjoint_route_matches_grid_analysis_for_singular_part() {
        let fam = family_2d();
        let singular = SingularPart {
            m: 1,
            profile: DensityKind::Gaussian,
        };
        let measure = BorelMeasure::new(2, None, vec![], Some(singular)).unwrap();
        // The grid route samples the dilated slice profile physically, so the
        // finest scale must keep 2^j·σ well above the cell size — hence the
        // 1024-point grid and the j ≥ -1 window. The adjoint route is exact
        // in frequency and has no such constraint.
        let grid = Grid::new(2, 64.0, 1024).unwrap();
        let atom = make_atom(&grid, &[0.5, -0.25], 2.5, 1.0, 11, 0).unwrap();
        let window = IndexWindow::new(-1, 0, 16, vec![3]).unwrap();

        let field = CoefficientField::new(window.clone(), 2, &WeightRule::Unit).unwrap();
        let spec =
            OperatorSpec::new(measure.clone(), fam.clone(), fam.clone(), field).unwrap();
        let via_grid = analyze(&atom.samples, &spec).unwrap();
        let via_grid = via_grid.values().unwrap();

        let ew = effective_wavelet(&measure, &fam, 3).unwrap();
        let via_adjoint = image_coefficients(&[ew], &window, &atom.samples);

        // The profile transform squeezes the whole band, so the honest
        // coefficient scale is small; the routes are compared relative to it.
        let peak = via_grid.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(peak > 1e-6, "window misses the atom entirely");
        let worst = via_grid
            .iter()
            .zip(&via_adjoint)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(
            worst <= 1e-9 * peak,
            "singular routes disagree: worst {worst:.3e}, peak {peak:.3e}"
        );
    }

    /// Point mass + unit weights over a deep window is the identity on the
    /// wavelet span: the image must reproduce the atom and the quasi-norm
    /// must match ‖a‖_p.
    #[test]
    fn unit_weight_point_mass_image_recovers_the_atom() {
        let fam = family_1d();
        let measure = BorelMeasure::delta_at_origin(1);
        let grid = Grid::new(1, 12.0, 1024).unwrap();
        let atom = make_atom(&grid, &[0.0], 1.0, 1.0, 5, 0).unwrap();
        let window = image_window(&atom, 5, 6, K_PAD, vec![1]).unwrap();
        let field = CoefficientField::new(window, 1, &WeightRule::Unit).unwrap();
        let spec = OperatorSpec::new(measure, fam.clone(), fam, field).unwrap();

        let report = atom_image_report(&spec, &atom).unwrap();
        let a_norm = atom.samples.lp_quasinorm(1.0);
        assert!(
            (report.total_quasi_norm - a_norm).abs() <= 1e-2 * a_norm,
            "quasi-norm {} vs atom norm {}",
            report.total_quasi_norm,
            a_norm
        );
        assert!(report.holder_ratio <= 1.0 + HOLDER_TOL);
        assert!(!report.clipped);
    }

    #[test]
    fn far_field_slope_for_point_mass_matches_moment_count() {
        let fam = family_1d();
        let measure = BorelMeasure::delta_at_origin(1);
        let grid = Grid::new(1, 12.0, 512).unwrap();
        let atom = make_atom(&grid, &[0.0], 1.0, 1.0, 7, 0).unwrap();
        let window = image_window(&atom, 2, 6, K_PAD, vec![1]).unwrap();
        let field =
            CoefficientField::new(window, 1, &WeightRule::RandomSign { seed: 7 }).unwrap();
        let spec = OperatorSpec::new(measure, fam.clone(), fam, field).unwrap();

        let report = atom_image_report(&spec, &atom).unwrap();
        assert!(report.holder_ratio <= 1.0 + HOLDER_TOL);
        let slope = report.fitted_exponent.expect("rings above noise floor");
        assert!(
            (-2.3..=-1.7).contains(&slope),
            "n=1, p=1 far field should decay like rho^-2, got {slope}"
        );
    }

    /// The off-grid evaluator must reproduce the on-grid synthesized image
    /// exactly at lattice points — both walk the same tables, so any gap is a
    /// coefficient-layout bug, not a numerical one.
    #[test]
    fn off_grid_evaluator_matches_synthesis_at_lattice_points() {
        for n in [1usize, 2] {
            let (fam, points) = if n == 1 {
                (family_1d(), 512)
            } else {
                (family_2d(), 256)
            };
            let measure = BorelMeasure::delta_at_origin(n);
            let grid = Grid::new(n, 12.0, points).unwrap();
            let atom = make_atom(&grid, &vec![0.25; n], 1.0, 1.0, 13, 0).unwrap();
            let l_set = if n == 1 { vec![1] } else { vec![3] };
            let window = image_window(&atom, 2, 4, K_PAD, l_set).unwrap();
            let field =
                CoefficientField::new(window, n, &WeightRule::RandomSign { seed: 13 })
                    .unwrap();
            let spec = OperatorSpec::new(measure, fam.clone(), fam, field).unwrap();

            let (window, weighted) = image_field(&spec, &atom).unwrap();
            let image =
                synthesize_window_unchecked(&spec.synthesis, &grid, &window, &weighted)
                    .unwrap();
            let sup = image.sup_norm();
            let m = grid.points;
            for flat in (0..m.pow(n as u32)).step_by(97) {
                let x = grid.site(flat);
                let direct =
                    eval_expansion(&spec.synthesis, &window, &weighted, &x[..n]).unwrap();
                assert!(
                    (direct - image.samples[flat]).norm() <= 1e-12 * sup,
                    "n={n} at {:?}: {direct} vs {}",
                    &x[..n],
                    image.samples[flat]
                );
            }
        }
    }

    /// The Taylor-order decay rate for the line-supported measure emerges
    /// beyond the transient octaves: the measured profile still steepens
    /// through ~16r (atom-scale coefficients carry no moment suppression
    /// there), then settles onto the -(n+k) law. Certify the settled rate
    /// over [64r, 512r].
    #[test]
    fn far_field_slope_for_singular_part_matches_moment_count() {
        let fam = family_2d();
        let singular = SingularPart {
            m: 1,
            profile: DensityKind::Box { half_width: 0.015625 },
        };
        let measure = BorelMeasure::new(2, None, vec![], Some(singular)).unwrap();
        let grid = Grid::new(2, 12.0, 256).unwrap();
        let atom = make_atom(&grid, &[0.0, 0.0], 1.0, 0.6, 7, 0).unwrap();
        let window = image_window(&atom, 2, 9, K_PAD, vec![3]).unwrap();
        let field =
            CoefficientField::new(window, 2, &WeightRule::RandomSign { seed: 7 }).unwrap();
        let spec = OperatorSpec::new(measure, fam.clone(), fam, field).unwrap();

        let report = atom_image_report(&spec, &atom).unwrap();
        assert!(report.holder_ratio <= 1.0 + HOLDER_TOL);

        let scan = profile_scan(&spec, &atom, 64.0, 4, 8).unwrap();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for chunk in scan.chunks(8) {
            let sup = chunk.iter().map(|r| r.sup).fold(0.0f64, f64::max);
            xs.push(chunk[0].radius.ln());
            ys.push(sup.ln());
        }
        let slope = ls_slope(&xs, &ys);
        assert!(
            (-4.6..=-3.4).contains(&slope),
            "n=2, p=0.6 asymptotic far field should decay like rho^-4, got {slope}"
        );
    }

    #[test]
    fn small_sweep_passes_and_reports_csv() {
        let fam = family_1d();
        let measure = BorelMeasure::delta_at_origin(1);
        let report = atom_image_sweep(&measure, &fam, 1.0, 8, 3).unwrap();
        assert!(report.holder_pass, "{report:?}");
        assert!(report.spread_pass, "spread {}", report.spread);
        assert!(
            report.exponent_pass,
            "pooled {} target {}",
            report.pooled_exponent, report.target_exponent
        );
        assert_eq!(report.moment_order, 0);
        assert_eq!(report.taylor_index, 1);

        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(
            lines[0],
            "atom,center,radius,p,near,far,total_quasi_norm,exponent,holder_ok,decay_ok"
        );
        assert!(lines[1].starts_with("0,"));
    }
}
