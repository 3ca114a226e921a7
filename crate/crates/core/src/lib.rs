//! Superoscillating sequences, infinite-order symbol operators, Fresnel-type
//! regularized integrals and the propagators built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: Gamma, Mittag-Leffler, the Bessel-type kernel `E_nu`, `sinc`.
//! - [`sequences`]: the sequence `F_N(z, a)`, its coefficients and growth bounds.
//! - [`operators`]: symbols `exp(t S(W))` and their action on Taylor series.
//! - [`evolution`]: closed-form evolution under `P(d/dx)` dispersion and gap sweeps.
//! - [`fresnel`]: contour-rotation and damping regularization of `int x^chi e^{-i phi x^2} G`.
//! - [`propagators`]: centrifugal and harmonic-oscillator evolution of plane waves.
//! - [`oracles`]: split-step spectral solver and finite-difference stencils.
//! - [`cli`]: the experiment runner behind the `supershift` binary.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod fit;
pub mod fresnel;
pub mod operators;
pub mod oracles;
pub mod propagators;
pub mod quadrature;
pub mod sequences;
pub mod series;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
