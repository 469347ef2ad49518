//! Compensated (Kahan–Neumaier) summation.
//!
//! All series and quadrature accumulations in this crate run through
//! [`Kahan`] so that results are independent of magnitude ordering to within
//! a few ulps, which in turn keeps reports byte-reproducible across runs.

use num_complex::Complex64;

/// Neumaier variant of Kahan summation: the compensation also tracks the
/// case where the running sum is smaller than the incoming term.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator of reals.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = Kahan::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Compensated complex accumulator (independent real/imaginary channels).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_cancellation() {
        // 1 + 1e16 - 1e16 loses the 1 in naive order-of-magnitude addition.
        let xs = [1.0, 1e16, -1e16];
        assert_eq!(kahan_sum(xs.iter().copied()), 1.0);
    }

    #[test]
    fn kahan_harmonic_forward_matches_backward() {
        let fwd = kahan_sum((1..=1_000_000).map(|k| 1.0 / k as f64));
        let bwd = kahan_sum((1..=1_000_000).rev().map(|k| 1.0 / k as f64));
        assert!((fwd - bwd).abs() < 1e-12, "fwd={fwd} bwd={bwd}");
    }

    #[test]
    fn complex_channels_are_independent() {
        let mut acc = KahanComplex::new();
        acc.add(Complex64::new(1.0, -1.0));
        acc.add(Complex64::new(1e16, 1e16));
        acc.add(Complex64::new(-1e16, -1e16));
        assert_eq!(acc.value(), Complex64::new(1.0, -1.0));
    }
}
