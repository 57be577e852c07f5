//! Fourier-space Maxwell dynamics generated by trilinear brackets, with a
//! machine-precision conservation audit.
//!
//! The reduced field equations live entirely in spectral space: each mode
//! carries complex electric and magnetic amplitudes, the gauss laws are
//! initial-data constraints, and the flow of any functional comes from a
//! trilinear bracket over two conserved slot quantities. This crate builds
//! that phase space, the functional registry with its variational
//! derivatives, the bracket engine, three integrators (exact per-mode
//! propagator, implicit midpoint, RK4), a real-space lattice bridge, and the
//! audit that classifies every registered quantity as bracket-invariant,
//! supercasimir, or varying.

pub mod audit;
pub mod bracket;
pub mod bridge;
pub mod dynamics;
pub mod error;
pub mod functionals;
pub mod io;
pub mod reduce;
pub mod state;
pub mod vec3;

pub use error::{Error, Result};
pub use functionals::{Functional, REGISTERED_NAMES};
pub use state::{GridDescriptor, Mode, SpectralState, ValidationReport};
pub use vec3::{ComplexVec3, WaveVector};
