//! Exact construction and analysis of QAM and Q-PAM low-correlation sequence
//! families built from Family A quaternary sequences over GR(4, r).

pub mod analysis;
pub mod constellation;
pub mod error;
pub mod families;
pub mod galois;
pub mod gaussian;
pub mod quaternary;
pub mod table8;
pub mod varrate;

pub use error::{Error, Result};
