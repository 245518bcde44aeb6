//! Simulation of adiabatic and sub-adiabatic Bose-Hubbard sweeps that encode
//! the shortest vector problem of a small integer lattice.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: exact lattice arithmetic and an enumeration oracle.
//! - [`banding`]: band-diagonalisation of prime-determinant HNF bases.
//! - [`fock`]: bosonic occupation-number bases and their sizes.
//! - [`hamiltonian`]: tunnelling matrix, problem diagonal and the sweep.
//! - [`eigen`]: dense and Lanczos eigensolvers for the sweep Hamiltonian.
//! - [`evolution`]: time propagation, measurement and rank classes.
//! - [`algorithms`]: the multi-run and single-run procedures.
//! - [`experiments`]: seeded ensemble experiments and their output files.

pub mod algorithms;
pub mod banding;
pub mod eigen;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod fock;
pub mod hamiltonian;
pub mod lattice;

pub use error::{Error, Result};
