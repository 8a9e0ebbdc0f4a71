//! Exact computation in the Green ring of a cyclic p-group in characteristic p.
//!
//! The crate has two independent ways of producing ring elements: an oracle
//! that builds explicit matrices for tensor, exterior and symmetric powers and
//! reads off Jordan types, and a symbolic engine that works with coefficient
//! vectors, Newton recursions and closed forms. The [`verify`] module checks
//! one against the other.

pub mod arith;
mod error;
pub mod fplinalg;
pub mod greenring;
pub mod modreal;
pub mod verify;

pub use error::{Error, Order, Result};
pub use greenring::{GreenContext, GreenElement};
