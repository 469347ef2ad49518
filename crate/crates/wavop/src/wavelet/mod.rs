//! Band-limited orthonormal wavelet systems.
//!
//! A [`MotherFamily`] holds the scaling and wavelet mothers of a Meyer-type
//! multiresolution analysis as sampled frequency profiles ([`Profile1D`]).
//! Dilates/translates follow the convention
//!
//! ```text
//! ψ_{j,k}(x) = 2^{-nj/2} ψ(2^{-j} x - k),        larger j = coarser scale,
//! ```
//!
//! in any dimension n ∈ {1, 2}; the 2-D mothers are the three tensor
//! combinations of the 1-D pair. Evaluation is spectral: a profile is a table
//! of Fourier-transform samples, and point values (of any derivative order)
//! come from the corresponding band-limited quadrature, accelerated through
//! precomputed physical-space tables.

pub mod family;
pub mod profile;
pub mod ramp;
pub mod report;

pub use family::{
    analyze_window, synthesize_window, AxisKind, IndexWindow, MotherFamily, WaveletIndex,
    XI_MAX,
};
pub use profile::Profile1D;
pub use ramp::Ramp;
pub use report::{
    decay_report, gram_matrix, parseval_defect, random_in_span, DecayReport, GramReport,
};
