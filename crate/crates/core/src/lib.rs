//! Dynamics of three exchange-coupled spin-1/2 qubits in time-dependent
//! magnetic fields.
//!
//! The state is carried as the 64 real coefficients of its expansion in
//! Pauli products ([`pauli::RTensor`]) and evolved with the closed system of
//! equations for local Bloch vectors and spin correlations
//! ([`dynamics::rhs_three`]). Entanglement measures are evaluated directly on
//! the coefficients ([`measures`]). An independent density-matrix propagator
//! ([`dynamics::propagate_direct`]) serves as a cross-check.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod measures;
pub mod pauli;

pub use error::{Error, Result};
pub use pauli::{CouplingConstants, DensityMatrix, RTensor, RTensor2, StateName};
