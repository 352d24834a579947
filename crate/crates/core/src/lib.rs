//! Exact tools for fusion rings with fixed-point-free automorphisms of prime
//! order: axiom checks, Frobenius-Perron dimensions, formal codegrees,
//! automorphism groups, and a classification search built from an
//! Egyptian-fraction sieve and a constraint-propagating table completer.

pub mod catalog;
pub mod classify;
pub mod completer;
pub mod dimension;
pub mod document;
pub mod error;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod sieve;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use ring::{validate, Coeff, FusionRing, ValidationReport};
