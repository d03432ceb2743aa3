//! Desk-scale laboratory for VQE resource scaling on the long-range
//! extended Ising chain.
//!
//! The crate builds the Kac-normalized string-operator Hamiltonian, solves
//! it exactly by dense diagonalization, prepares trial states with three
//! structure-aware ansatz families (NN, NNN, NNNN), optimizes them with a
//! bounded quasi-Newton loop, and scores convergence by pairwise logarithmic
//! negativity. A sweep driver maps the (alpha, lambda, N, ansatz, layers)
//! grid, extracts minimal layer counts p*, and fits how the quantum (CNOT)
//! and classical (optimizer) resource costs scale with system size.

pub mod circuit;
pub mod config;
pub mod entanglement;
pub mod error;
pub mod exact;
pub mod model;
pub mod report;
pub mod store;
pub mod sweep;
pub mod vqe;

pub use error::{Error, Result};
