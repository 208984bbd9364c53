//! Rademacher expansions and Poincaré-type sums for modular and mock modular forms.

pub mod arith;
pub mod cache;
pub mod error;
pub mod jacobi;
pub mod json;
pub mod kloosterman;
pub mod modgroup;
pub mod multiplier;
pub mod radseries;
pub mod radsums;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
