#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical laboratory for short-time evolution under local, time-dependent
//! Hamiltonians.

pub mod distributions;
pub mod error;
pub mod evolution;
pub mod experiment;
mod floats;
pub mod graphs;
pub mod hamiltonian;
pub mod linalg;
pub mod locality;
pub mod maxcut;
pub mod polymatrix;

pub use error::{Error, Result};
