//! Exact pure-dephasing dynamics and quantum discord of two uncoupled qubits
//! sharing an Ohmic heat bath.
//!
//! The crate is organised bottom-up:
//!
//! * [`state`]: X-state parameters, two-qubit density matrices, partial trace and entropy.
//! * [`reservoir`]: the Ohmic spectral weight and the reservoir functions Q₁, Q₂.
//! * [`evolution`]: the element-wise dephasing law and the X-state fast path.
//! * [`discord`]: closed-form X-state discord and a measurement-grid brute-force oracle.
//! * [`analysis`]: critic time, stable amplification, derivative signs and protection.
//! * [`cli`]: configuration parsing and the CSV sweeps behind the binary.

pub mod analysis;
pub mod cli;
pub mod discord;
pub mod error;
pub mod evolution;
pub mod quadrature;
pub mod reservoir;
pub mod state;

pub use error::{Error, Result};
