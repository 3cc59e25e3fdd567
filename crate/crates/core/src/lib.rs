//! Commuting-variety model of connective K-theory at finite truncation.

pub mod error;
pub mod numkit;
pub mod symuniverse;
pub mod gammaconf;
pub mod commodel;
pub mod sample;
pub mod rankstrata;
pub mod spectrumops;
pub mod realk;
pub mod isodecomp;
pub mod cohomtab;

pub use error::{Error, Result};
