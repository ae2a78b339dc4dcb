//! Bosonic free-field realizations of toroidal Lie algebras and an exact
//! checker for their defining relations on truncated Fock spaces.

pub mod cli;
pub mod config;
pub mod error;
pub mod exactnum;
pub mod fields;
pub mod fock;
pub mod lattice;
pub mod report;
pub mod verifier;
pub mod wick;

pub use error::{Error, Result};
