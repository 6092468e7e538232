//! Compressed sensing of sources over finite fields.
//!
//! A source vector `theta` over `GF(q)` is observed through a sensing
//! channel, multiplied by a sparse random matrix and corrupted by additive
//! noise. The crate provides the field arithmetic, source and channel
//! models, MAP decoders, error-probability bounds and the experiment
//! harness that compares them.

pub mod bounds;
pub mod channel;
pub mod decoder;
pub mod error;
pub mod exponent;
pub mod field;
pub mod figures;
pub mod gaussian;
pub mod harness;
pub mod info;
pub mod linalg;
pub mod scenario;
pub mod seed;
pub mod source;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldMatrix, FieldVec};
