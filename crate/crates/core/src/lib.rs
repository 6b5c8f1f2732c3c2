pub mod analysis;
pub mod classify;
pub mod error;
pub mod field;
pub mod groebner;
pub mod invariants;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod resolution;
pub mod series;

pub use error::{Error, Result};
