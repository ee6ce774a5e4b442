#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod constructions;
pub mod contact;
pub mod error;
pub mod exterior;
pub mod psphere;

pub use error::{Error, Result};
