//! Bound-state eigenvalues and eigenfunctions of the one-dimensional
//! Schrödinger equation `-ψ'' + V(x) ψ = E ψ` for polynomial potentials,
//! computed with the asymptotic Taylor expansion method.
//!
//! The wavefunction is written as `ψ(x) = exp(-s(x)) f(x)`. The factor `f`
//! obeys `f'' = p₀ f' + q₀ f`, whose higher derivatives at the origin follow
//! from the polynomial recurrence in [`engine`]. Truncating the Taylor series
//! of `f` quantizes `E`; [`spectrum`] locates those roots and tracks them as
//! the truncation order grows, and [`wavefunction`] assembles normalized
//! eigenfunctions.

pub mod engine;
pub mod error;
pub mod numerics;
pub mod problems;
pub mod spectrum;
pub mod wavefunction;

pub use engine::{
    derive_seed, parity_quantization, quantization_determinant, run_recurrence,
    run_recurrence_with, AnsatzExponent, Parity, ProblemSpec, RecurrenceOptions, RecurrenceTrace,
    RenormPolicy, SeedPair,
};
pub use error::{Error, Result};
pub use numerics::{Poly, Precision, Real};
pub use spectrum::{
    converge_spectrum, refine_root, scan_brackets, significant_digits, Channel, ChannelChoice,
    EigenvalueRecord, MatchWindow, ScanConfig, ScanStats, Spectrum,
};
pub use wavefunction::{
    build_series, count_sign_changes, normalize, residual, residual_at_energy, sample,
    WavefunctionSeries,
};
