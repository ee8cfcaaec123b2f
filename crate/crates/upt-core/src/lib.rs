//! Simulation toolkit for property testing of unitaries.
//!
//! The crate models query-bounded testers as exact linear-algebra
//! computations: oracles expose forward, adjoint, and controlled
//! applications with query accounting, and verifier circuits are reduced
//! to projector algebra on small register systems. Randomized pieces
//! (Haar sampling, measurement simulation, Monte Carlo averages) are
//! driven by explicit seeds so every run is reproducible.

pub mod audit;
pub mod entangle;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod fooling;
pub mod invariant;
pub mod haar;
pub mod matrix;
pub mod oracle;
pub mod perm;
pub mod phase;
pub mod rng;
pub mod state;
pub mod subspace;
pub mod tester;
pub mod util;

pub use error::{Error, Result};
pub use matrix::{CMatrix, CVector};
pub use rng::Seed;
pub use state::StateVector;
pub use subspace::Subspace;
