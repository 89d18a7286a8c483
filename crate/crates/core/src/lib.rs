//! Desk-scale computational group theory.

pub mod catalog;
pub mod error;
pub mod fibre;
pub mod finitegrp;
pub mod fingerprint;
pub mod graphprod;
pub mod presentation;
pub mod reconstruct;
pub mod rewriting;
pub mod thompson;

pub use error::{Error, Result};
