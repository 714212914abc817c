//! Exact computations with the twist map on the Grassmannian, plabic graphs
//! and their dimer partition functions.

pub mod bfz;
pub mod combinatorics;
pub mod dimer;
pub mod error;
pub mod exact;
pub mod plabic;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
