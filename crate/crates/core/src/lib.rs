//! Symbolic verification kernel for presymplectic gauge PDEs.

pub mod action;
pub mod algebra;
pub mod cartan;
pub mod cli;
pub mod error;
pub mod frontend;
pub mod gauge_pde;
pub mod reduction;
pub mod report;
pub mod superjets;

pub use error::{Error, Result};
