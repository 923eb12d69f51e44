pub mod algebra;
pub mod error;
pub mod expectation;
pub mod fixtures;
pub mod focksim;
pub mod generator;
pub mod homdil;
pub mod json;
pub mod numerics;
pub mod report;
pub mod sampling;
pub mod stinespring;

pub use error::{Error, Result};
