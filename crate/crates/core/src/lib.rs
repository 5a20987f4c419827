//! Spectral moment traces of the Hofstadter Hamiltonian and the almost
//! Mathieu operator at rational flux `2πp/q`.
//!
//! The closed-form traces live in [`traces`]; they are built from the
//! Chambers polynomial coefficients of [`kreft`] and a partition-term
//! enumeration from [`flux`]. [`oracle`] provides independent ground truth
//! (Bloch-matrix eigensolves and Peierls walk sums), and [`dos`] provides the
//! densities of states that turn point-spectrum traces into full traces.

pub mod dos;
pub mod error;
pub mod flux;
pub mod kreft;
pub mod oracle;
pub mod traces;

pub use error::{Error, Result};
pub use flux::{Coupling, ExactRational, Flux, PartitionTerm};
pub use kreft::ChambersPolynomial;
