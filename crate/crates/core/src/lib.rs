//! Abstract numeration systems on regular languages.

// `AlgNum` orders by value; the refinement cache shared through its field
// never affects comparisons.
#![allow(clippy::mutable_key_type)]

pub mod affine;
pub mod algnum;
pub mod automata;
pub mod cli;
pub mod counting;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod periodic;
pub mod pisot;
pub mod poly;
pub mod realline;

pub use error::{Error, Result};
