//! The wavelet-generated operator.
//!
//! `apply_operator` composes three stages: convolve the input with the dilated
//! measure once per scale, take inner products against the analysis family,
//! then expand the weighted coefficients against the synthesis family:
//!
//! ```text
//!   T f = Σ_{(l,j,k)}  ω^l_{j,k} · ⟨μ_j ∗ f, ψ^l_{j,k}⟩ · φ^l_{j,k}
//! ```
//!
//! The sum runs over a finite [`IndexWindow`]; the weight sequence ω lives in
//! a [`CoefficientField`] together with (after analysis) the inner products.
//! `l2_certificate` returns the explicit L²→L² bound ‖ω‖_{ℓ²}·|μ|(ℝⁿ), which
//! every application of the operator must respect — the certificate tests and
//! the acceptance suite check exactly that.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::measure::{BorelMeasure, ConvolveRoute};
use crate::rng::{sign_for, substream};
use crate::sum::Kahan;
use crate::wavelet::{analyze_window, synthesize_window, IndexWindow, MotherFamily};

// ─── weight rules ─────────────────────────────────────────────────────────────

/// How the weight sequence ω is produced over a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum WeightRule {
    /// ω ≡ 1.
    Unit,
    /// Explicit entries in canonical window order.
    Table { entries: Vec<Complex64> },
    /// Deterministic ±1 keyed on `(seed, l, j, k)`, independent of
    /// enumeration order.
    RandomSign { seed: u64 },
    /// Independent complex draws rescaled so that ‖ω‖_{ℓ²} = 1.
    RandomNormalized { seed: u64 },
}

// ─── coefficient fields ───────────────────────────────────────────────────────

/// Weight sequence over an index window, plus — once `analyze` has run — the
/// inner products ⟨μ_j ∗ f, ψ^l_{j,k}⟩ in canonical window order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientField {
    pub window: IndexWindow,
    n: usize,
    weights: Vec<Complex64>,
    values: Option<Vec<Complex64>>,
    l2_weight_norm: f64,
    sup_weight_norm: f64,
}

impl CoefficientField {
    pub fn new(window: IndexWindow, n: usize, rule: &WeightRule) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        let expected = window.len(n);
        let weights = match rule {
            WeightRule::Unit => vec![Complex64::new(1.0, 0.0); expected],
            WeightRule::Table { entries } => {
                if entries.len() != expected {
                    return Err(Error::WeightLength {
                        got: entries.len(),
                        expected,
                    });
                }
                entries.clone()
            }
            WeightRule::RandomSign { seed } => window
                .indices(n)
                .iter()
                .map(|ix| Complex64::new(sign_for(*seed, ix.l, ix.j, &ix.k[..n]), 0.0))
                .collect(),
            WeightRule::RandomNormalized { seed } => {
                let mut rng = substream(*seed, "weight-field");
                let raw: Vec<Complex64> = (0..expected)
                    .map(|_| {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    })
                    .collect();
                let norm = l2(&raw);
                if norm < 1e-300 {
                    return Err(Error::invalid("weights", "normalized field drew zero"));
                }
                raw.iter().map(|w| w / norm).collect()
            }
        };
        if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::invalid("weights", "non-finite entry"));
        }
        let l2_weight_norm = l2(&weights);
        let sup_weight_norm = weights.iter().map(|w| w.norm()).fold(0.0, f64::max);
        Ok(Self {
            window,
            n,
            weights,
            values: None,
            l2_weight_norm,
            sup_weight_norm,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// Inner products, present only after analysis.
    pub fn values(&self) -> Option<&[Complex64]> {
        self.values.as_deref()
    }

    pub fn l2_weight_norm(&self) -> f64 {
        self.l2_weight_norm
    }

    pub fn sup_weight_norm(&self) -> f64 {
        self.sup_weight_norm
    }

    /// Store analysis values (canonical order, same length as the window).
    pub fn fill_values(&mut self, values: Vec<Complex64>) -> Result<()> {
        let expected = self.window.len(self.n);
        if values.len() != expected {
            return Err(Error::WeightLength {
                got: values.len(),
                expected,
            });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid("values", "non-finite entry"));
        }
        self.values = Some(values);
        Ok(())
    }

    /// Entrywise products ω·value — the coefficients the synthesis stage sums.
    pub fn weighted(&self) -> Result<Vec<Complex64>> {
        let values = self.values.as_ref().ok_or(Error::ValuesMissing)?;
        Ok(self
            .weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .collect())
    }

    /// ℓ² norm of ω·values: the coefficient-space size of the output, equal to
    /// ‖Tf‖₂ whenever the synthesis family is orthonormal over the window.
    pub fn weighted_l2_norm(&self) -> Result<f64> {
        Ok(l2(&self.weighted()?))
    }

    /// Do the cached norms match the entries to 10⁻¹²?
    pub fn norms_consistent(&self) -> bool {
        let l2_now = l2(&self.weights);
        let sup_now = self.weights.iter().map(|w| w.norm()).fold(0.0, f64::max);
        let scale = 1.0 + self.l2_weight_norm.abs();
        (l2_now - self.l2_weight_norm).abs() <= 1e-12 * scale
            && (sup_now - self.sup_weight_norm).abs() <= 1e-12 * scale
    }
}

fn l2(entries: &[Complex64]) -> f64 {
    let mut acc = Kahan::new();
    for w in entries {
        acc.add(w.norm_sqr());
    }
    acc.value().sqrt()
}

// ─── operator specification ───────────────────────────────────────────────────

/// Everything the operator needs: the measure, the analysis family (inner
/// products), the synthesis family (output expansion), and the weights with
/// their window. Both families must share the measure's dimension.
#[derive(Clone, Debug)]
pub struct OperatorSpec {
    pub measure: BorelMeasure,
    pub analysis: MotherFamily,
    pub synthesis: MotherFamily,
    pub weights: CoefficientField,
    pub route: ConvolveRoute,
}

impl OperatorSpec {
    pub fn new(
        measure: BorelMeasure,
        analysis: MotherFamily,
        synthesis: MotherFamily,
        weights: CoefficientField,
    ) -> Result<Self> {
        if analysis.n != measure.n || synthesis.n != measure.n || weights.n != measure.n {
            return Err(Error::GridMismatch(format!(
                "dimension disagreement: measure {}, analysis {}, synthesis {}, weights {}",
                measure.n, analysis.n, synthesis.n, weights.n
            )));
        }
        for &l in &weights.window.l_set {
            analysis.member_axes(l)?;
            synthesis.member_axes(l)?;
        }
        Ok(Self {
            measure,
            analysis,
            synthesis,
            weights,
            route: ConvolveRoute::Fft,
        })
    }

    pub fn with_route(mut self, route: ConvolveRoute) -> Self {
        self.route = route;
        self
    }
}

// ─── the three stages ─────────────────────────────────────────────────────────

/// Inner products ⟨μ_j ∗ f, ψ^l_{j,k}⟩ over the window. The measure
/// convolution runs once per scale j and is shared across all (l, k).
pub fn analyze(f: &GridFunction, spec: &OperatorSpec) -> Result<CoefficientField> {
    let window = &spec.weights.window;
    window.validate(&spec.analysis, &f.grid)?;

    let mut per_scale = Vec::with_capacity((window.j_max - window.j_min + 1) as usize);
    for j in window.j_min..=window.j_max {
        let shifted = spec
            .measure
            .dilate(j)
            .convolve(f, spec.route)
            .map_err(|e| match e {
                Error::PaddingViolation { .. } | Error::SupportOverflow { .. } => e,
                other => Error::ScaleFailure {
                    j,
                    reason: other.to_string(),
                },
            })?;
        per_scale.push(shifted);
    }

    let mut values = Vec::with_capacity(window.len(spec.analysis.n));
    for &l in &window.l_set {
        for (slot, j) in (window.j_min..=window.j_max).enumerate() {
            let block = IndexWindow::new(j, j, window.k_max, vec![l])?;
            values.extend(analyze_window(&spec.analysis, &per_scale[slot], &block)?);
        }
    }

    let mut out = spec.weights.clone();
    out.fill_values(values)?;
    Ok(out)
}

/// Weighted expansion Σ ω·value·φ^l_{j,k} on the given grid, summed in
/// canonical window order.
pub fn synthesize(
    coeffs: &CoefficientField,
    spec: &OperatorSpec,
    grid: &Grid,
) -> Result<GridFunction> {
    synthesize_window(&spec.synthesis, grid, &coeffs.window, &coeffs.weighted()?)
}

/// The full operator: analysis of the measure-convolved input, then weighted
/// synthesis on the input's grid.
pub fn apply_operator(f: &GridFunction, spec: &OperatorSpec) -> Result<GridFunction> {
    let coeffs = analyze(f, spec)?;
    synthesize(&coeffs, spec, &f.grid)
}

/// The explicit L²→L² bound the construction guarantees:
/// ‖ω‖_{ℓ²} · (‖g‖₁ + Σ|cᵢ| + ‖h‖₁). Infinite when the density has no
/// finite L¹ mass.
pub fn l2_certificate(spec: &OperatorSpec) -> f64 {
    spec.weights.l2_weight_norm() * spec.measure.total_variation()
}

// ─── tests ────────────────────────────────────────────────────────────────────
