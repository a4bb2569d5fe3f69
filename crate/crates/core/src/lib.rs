//! Simulation and verification library for Gaussian states propagating
//! through engineered networks of coupled harmonic oscillators.
//!
//! States are covariance matrices; dynamics is the exact symplectic
//! propagator of the quadratic Hamiltonian; networks realize the engineered
//! square-root coupling law that makes a chain, Y, star, or X structure
//! transfer, split, entangle, or approximately clone an input state at
//! `t = pi/c`. Closed-form reference results and a stochastic coupling
//! search round out the toolkit.

pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod measures;
pub mod oracles;
pub mod search;
pub mod topology;

pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, InitialExcitation, ModePartition, SymplecticForm};
pub use topology::{
    CouplingModel, CouplingProfile, DecouplingTransform, DiagonalMode, NetworkKind, NetworkSpec,
};
