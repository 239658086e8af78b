//! A relational engine built directly on finite set theory.
//!
//! Tuples are functions from an index set to values, relations are a
//! signature paired with an extent, and queries are built from projection,
//! cylindrification, join and filtering. The [`engine`] module compiles
//! single conjunctive rules into those operations.

pub mod binrel;
pub mod engine;
mod error;
pub mod foundations;
pub mod functions;
mod limits;
pub mod relations;
pub mod tuples;
mod value;

pub use error::{Error, Result};
pub use limits::Limits;
pub use value::{Atom, FinSet, Payload, Value};
