#![no_std]

extern crate alloc;

pub mod check;
pub mod clifford;
pub mod equations;
pub mod error;
pub mod linalg;
pub mod opcalc;
pub mod poincare;
pub mod position;
pub mod symmetry;

pub use error::{Error, Result};
