//! Quantum states of the one-degree-of-freedom saddle-node Hamiltonian
//! `H = p²/2m − √μ x² + (α/3) x³`.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! * [`classical`]: potential, equilibria, well depth, reactive classification
//! * [`discretize`]: uniform grid and the finite-difference Hamiltonian
//! * [`eigensolve`]: lowest eigenpairs of the tridiagonal matrix
//! * [`observables`]: `⟨x⟩`, `⟨x²⟩` and `Δx` by grid quadrature
//! * [`wigner`]: discrete Wigner transform and the nonreactive probability
//! * [`perturbation`]: harmonic expansion about the centre equilibrium
//! * [`sweep`]: batch α-sweeps and the on-disk formats

pub mod classical;
pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod observables;
pub mod perturbation;
pub mod sweep;
pub mod wigner;

pub use classical::{ModelParams, Regime};
pub use discretize::{assemble, make_grid, DiscreteHamiltonian, SpatialGrid};
pub use eigensolve::{solve, EigenState, Spectrum};
pub use error::{Error, Result};
pub use wigner::{make_momentum_grid, wigner_transform, MomentumGrid, WignerField};
