//! Polynomial transition ramps ν_q.
//!
//! A ramp is a monotone C^q map [0,1] → [0,1] with ν(0) = 0, ν(1) = 1 and the
//! reflection identity ν(t) + ν(1-t) = 1, flat to order q at both endpoints.
//! We use the regularized incomplete beta family
//!
//! ```text
//! ν_q(t) = ∫₀^t u^q (1-u)^q du / B(q+1, q+1),
//! ```
//!
//! whose q = 3 member is the classical quartic ramp
//! t⁴(35 - 84t + 70t² - 20t³). Larger q buys more vanishing derivatives at
//! the band edges and therefore faster far-field decay of the resulting
//! band-limited mothers.
//!
//! Evaluation goes through the centered substitution u = (1+v)/2, which turns
//! the integrand into (1-v²)^q and admits the integration-by-parts recurrence
//!
//! ```text
//! I_q(v) = ∫₀^v (1-s²)^q ds = [v (1-v²)^q + 2q I_{q-1}(v)] / (2q+1),
//! ```
//!
//! whose terms are all nonnegative for v ≥ 0. The naive binomial expansion of
//! (1-u)^q is useless here: its alternating coefficients reach C(2q, q) and
//! shed nine digits to cancellation already at q ≈ 12.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Ramp {
    pub order: u32,
    /// 1 / (2 I_q(1)), so that ν(t) = 1/2 + I_q(2t-1) · half_inv.
    half_inv: f64,
}

/// I_q(v) = ∫₀^v (1-s²)^q ds by the forward recurrence above. Odd in v, and
/// exactly so in floating point, which is what makes the reflection identity
/// hold to the last ulp.
fn half_integral(order: u32, v: f64) -> f64 {
    let w = 1.0 - v * v;
    let mut p = 1.0; // w^m
    let mut i = v; // I_0(v) = v
    for m in 1..=order as u64 {
        p *= w;
        i = (v * p + 2.0 * m as f64 * i) / (2 * m + 1) as f64;
    }
    i
}

impl Ramp {
    pub fn new(order: u32) -> Result<Self> {
        if order == 0 || order > 24 {
            return Err(Error::invalid("ramp order", "must be in 1..=24"));
        }
        Ok(Self {
            order,
            half_inv: 0.5 / half_integral(order, 1.0),
        })
    }

    /// ν(t), clamped to {0, 1} outside [0, 1].
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        0.5 + half_integral(self.order, 2.0 * t - 1.0) * self.half_inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_order_matches_classical_quartic_ramp() {
        let ramp = Ramp::new(3).unwrap();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let classical = t.powi(4) * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
            assert!(
                (ramp.eval(t) - classical).abs() < 1e-12,
                "t={t}: {} vs {classical}",
                ramp.eval(t)
            );
        }
    }

    #[test]
    fn reflection_identity_all_orders() {
        for q in 1..=24 {
            let ramp = Ramp::new(q).unwrap();
            for i in 0..=57 {
                let t = i as f64 / 57.0;
                let s = ramp.eval(t) + ramp.eval(1.0 - t);
                assert!((s - 1.0).abs() < 1e-14, "q={q} t={t}: {s}");
            }
        }
    }

    #[test]
    fn monotone_and_clamped() {
        let ramp = Ramp::new(8).unwrap();
        assert_eq!(ramp.eval(-0.5), 0.0);
        assert_eq!(ramp.eval(1.5), 1.0);
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = ramp.eval(i as f64 / 1000.0);
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }

    #[test]
    fn order_bounds() {
        assert!(Ramp::new(0).is_err());
        assert!(Ramp::new(25).is_err());
    }
}
