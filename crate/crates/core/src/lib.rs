pub mod autgroups;
pub mod cli;
pub mod error;
pub mod fgl;
pub mod fiberprod;
pub mod galgebra;
pub mod hopf;
pub mod report;
pub mod series;
pub mod suite;

pub use error::{Error, Result};
