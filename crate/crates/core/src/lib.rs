//! Distinguishability quantifiers and information-backflow bounds for open
//! quantum systems evolving under exact joint unitary dynamics.
//!
//! The crate provides:
//!
//! - [`linalg`]: dense complex linear algebra sized for Hilbert spaces up to
//!   dimension ~100 (tensor products, partial traces, Hermitian
//!   eigendecomposition, spectral functions, trace norm);
//! - [`states`]: density-matrix constructors (pure, Bloch, thermal
//!   oscillator, Hilbert-Schmidt random) and random CPTP channels;
//! - [`divergences`]: trace distance, Umegaki relative entropy, the
//!   telescopic relative entropy (TRE) family, the quantum Jensen-Shannon
//!   divergence (QJSD) and the scalar prefactors entering the revival bounds;
//! - [`models`]: the Jaynes-Cummings and two-qubit exchange Hamiltonians with
//!   ready-made scenario defaults;
//! - [`bounds`]: joint evolution of a state pair, revival (backflow)
//!   quantification and the upper bounds on revivals in terms of
//!   system-environment correlations and environmental state changes.

pub mod bounds;
pub mod divergences;
mod error;
pub mod linalg;
pub mod models;
pub mod states;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
