pub mod config;
pub mod error;
pub mod interval;
pub mod algebraic;
pub mod sequences;
pub mod bounds;
pub mod lattice;
pub mod cfrac;
pub mod mdep;

pub use error::{Error, Result};
pub mod pipeline;
