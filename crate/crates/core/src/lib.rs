//! Multi-party function secret sharing from DDH.
//!
//! Distributed point and comparison functions whose keys grow as `O(∛N)`,
//! built from honest-majority information-theoretic sub-schemes over
//! replicated secret sharing, with two group encodings of the output and
//! key-size accounting against the usual baselines.

pub mod ddhfss;
pub mod encoding;
pub mod error;
pub mod field;
pub mod group;
pub mod keysize;
pub mod sharing;
pub mod subfss;
pub mod wire;

pub use error::{Error, Result};
