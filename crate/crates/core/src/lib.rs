//! Message encoding and retrieval for Desarguesian spread codes and cyclic
//! orbit codes over finite fields.

pub mod channel;
pub mod document;
pub mod error;
pub mod ff;
pub mod isometry;
pub mod linalg;
pub mod orbit;
pub mod spread;
pub mod subspace;

pub use error::{Error, Result};
