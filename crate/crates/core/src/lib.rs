//! Spectrum of the one-dimensional four-particle oscillator with a Wolfes
//! three-body term,
//!
//! ```text
//! H = -1/2 Σ ∂²/∂x_i² + (ω²/8) Σ_{i<j} (x_i - x_j)² + g₁² / (x₁ + x₂ - 2x₃)²
//! ```
//!
//! computed three ways and cross-checked:
//!
//! - closed forms after separation in Jacobi coordinates ([`model`]),
//! - a chain of one-dimensional eigensolves in spherical coordinates
//!   (φ → θ → r, see [`numsolve::channel`]),
//! - direct diagonalization of the internal Hamiltonian on a 3D grid
//!   ([`numsolve::hd3d`]).
//!
//! The [`verify`] module runs the comparisons and produces structured
//! [`verify::VerificationReport`]s.

pub mod coords;
pub mod exec;
pub mod model;
pub mod numsolve;
pub mod verify;

pub use coords::{JacobiConfig, ParticleConfig, SphericalConfig};
pub use exec::Execution;
pub use model::{
    EnergyLevel, ModelParams, QuantumTriple, RadialRule, SectorMultiplicity, ShoOffset,
    SpectrumTable, SphericalQuantum,
};
