//! Simulator for tight-binding networks built from isomorphic
//! pseudo-Hermitian clusters joined by Hermitian couplings.
//!
//! The crate models networks of `N` identical non-Hermitian clusters (each
//! with an entirely real spectrum) connected site-by-site with uniform
//! Hermitian couplings. For such networks, states composed of a single
//! cluster eigenmode evolve with a conserved measurable (Dirac) norm even
//! though the Hamiltonian is non-Hermitian. The flagship example is a
//! PT-symmetric two-leg ladder of gain/loss dimers, for which closed-form
//! dispersion, commutator constants, and wavepacket norm curves are
//! available and verified numerically.
//!
//! Module map:
//! - [`numeric`]: dense complex matrices, general and Hermitian
//!   eigensolvers, matrix exponential, RK4 propagation;
//! - [`lattice`]: network descriptions, validation, Hamiltonian assembly;
//! - [`biortho`]: biorthogonal cluster modes, Gram matrices, metric
//!   factors, per-mode Hermitian blocks;
//! - [`dynamics`]: time evolution (direct and spectral), Dirac-norm
//!   observables, biorthogonal propagators;
//! - [`wavepacket`]: Gaussian wavepackets on the ladder and their
//!   closed-form norm/breathing predictions.
//!
//! All numerics are generic over the real scalar via [`Real`] (`f32` or
//! `f64`); the `*64` aliases below pin the double-precision instantiations
//! used by the CLI and the test suites.

pub mod biortho;
pub mod dynamics;
pub mod lattice;
pub mod numeric;
pub mod wavepacket;

mod error;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{im, re, Real, C};

/// Double-precision complex scalar.
pub type C64 = C<f64>;
/// Double-precision dense complex matrix.
pub type Matrix64 = numeric::ComplexMatrix<f64>;
/// Double-precision state vector.
pub type State64 = numeric::StateVector<f64>;
/// Double-precision cluster description.
pub type Cluster64 = lattice::ClusterSpec<f64>;
/// Double-precision network description.
pub type Network64 = lattice::NetworkSpec<f64>;
/// Double-precision ladder description.
pub type Ladder64 = lattice::LadderSpec<f64>;
/// Double-precision biorthogonal mode set.
pub type Modes64 = biortho::BiorthoModes<f64>;
/// Double-precision Gaussian wavepacket description.
pub type Gaussian64 = wavepacket::GaussianSpec<f64>;
