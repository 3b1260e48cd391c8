//! Hyers-Ulam stability of `z_{n+1} = a_n z_n + b_n` over the complex numbers.
//!
//! The modules build on each other in order: coefficient sequences, partial
//! products in log form, orbits and shadows, classification, and instability
//! witnesses. [`cli`] wires them to the `hulam` binary.

pub mod classify;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod products;
pub mod sequences;
pub mod witness;

pub use error::{Error, Result};
