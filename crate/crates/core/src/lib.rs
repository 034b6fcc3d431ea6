//! Conjugations (antiunitary symmetries) on multipartite quantum systems.

pub mod error;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix, ComplexVector, Tolerances, C64};
pub mod conjugation;
pub mod io;
pub mod measurability;
pub mod metrology;
pub mod reproduce;
pub mod schmidt;
pub mod twoqubit;
pub mod verify;
