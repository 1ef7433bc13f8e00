//! Steering and separability of two-qubit states through the geometry of
//! Pauli-coordinate light cones, polyhedral boxes and their packings.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ansatz;
pub mod classify;
pub mod epr;
pub mod error;
pub mod pauli;
pub mod sampling;
pub mod states;
pub mod workbench;

pub use error::{Error, Result};
