//! Relaxed commutant lifting with a Redheffer state-space parameterization of
//! all solutions, and the relaxed Nehari extension problem built on it.

pub mod cli;
pub mod error;
pub mod hardy;
pub mod io;
pub mod lifting;
pub mod matrix;
pub mod nehari;
pub mod redheffer;
pub mod report;
pub mod schur;
pub mod suite;

pub use error::{Error, Result};
