//! Kicked nonlinear oscillator toolkit.
//!
//! The crate models a harmonic oscillator with a Kerr-type twist that is
//! periodically kicked, in two parallel pictures:
//!
//! * [`classical`]: an ensemble of phase points evolved by the kick-and-twist map,
//!   with phase correlations, diffusion of the action, θ-harmonic spectra and
//!   reversal experiments.
//! * [`quantum`]: a truncated Fock-basis density matrix evolved by the one-period
//!   Floquet operator, with per-realization and noise-averaged dephasing.
//!
//! [`metrics`] holds the diagnostics shared by both pictures (purity, fidelities,
//! harmonic weights, entropies, echo quantities). [`correspondence`] is a small
//! one-dimensional demo of classical versus quantum position densities, and
//! [`transport`] evaluates closed-form resonance transport observables for a
//! ballistic dot coupled to a disordered background.
//!
//! The crate is `no_std` with `alloc`; the `std` feature (on by default) enables
//! the faster matrix kernels of the linear algebra backend, and `parallel` spreads
//! ensemble work over a rayon pool without changing any result bit.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod classical;
pub mod correspondence;
pub mod error;
pub mod metrics;
pub mod numerics;
pub mod quantum;
pub mod transport;

pub use error::{Error, Result};
pub use num_complex::Complex64;
