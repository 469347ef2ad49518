//! Numerical laboratory for wavelet-generated operators.
//!
//! The library builds band-limited orthonormal wavelet systems in one and two
//! dimensions, convolves them with Borel measures (densities, Dirac atoms, and
//! a hyperplane-supported singular part), and studies the resulting
//! analysis/synthesis operators empirically: lattice-sum constants, frame
//! bounds, Calderón–Zygmund-type kernel decay, and the images of compactly
//! supported atoms with vanishing moments.
//!
//! Everything is deterministic: randomness flows from a single seed through
//! named substreams, and all floating-point reductions are performed in a
//! fixed order with compensated summation.

pub mod atoms;
pub mod check;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod measure;
pub mod operator;
pub mod rng;
pub mod series;
pub mod sum;
pub mod wavelet;

pub use error::{Error, Result};
