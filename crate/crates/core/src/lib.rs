//! Simulation of universal quantum cloning machines.
//!
//! * [`qlin`]: dense complex linear algebra on tensor-product spaces
//!   (partial traces and transposes, Hermitian eigensolver, fidelities,
//!   entropies).
//! * [`states`]: Bloch-sphere qubits, symmetric (Dicke) states, the copier
//!   preparation state and Haar-random sampling.
//! * [`network`]: a statevector gate simulator with the preparation and
//!   copying circuits.
//! * [`cloners`]: the direct cloning isometries for qubits, `M`-level
//!   systems and two-qubit registers.
//! * [`analysis`]: scaling factors, fidelities, separability tests and the
//!   closed-form references they are compared with.
//! * [`reproduce`]: the reproduction table driving the command line's
//!   `reproduce` subcommand.

pub mod analysis;
pub mod cloners;
pub mod error;
pub mod network;
pub mod qlin;
pub mod reproduce;
pub mod states;

pub use error::{Error, Result};
