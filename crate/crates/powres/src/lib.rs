//! Cubical cell complexes supporting minimal free resolutions of powers of
//! square-free monomial ideals of projective dimension one.
//!
//! The pipeline: parse an ideal ([`monomial`]), find a supporting tree
//! ([`tree`]), assemble the cubical complex for `I^r` ([`complex`]), read
//! off the homogenized free resolution ([`resolution`]), cross-check it
//! against the Koszul strand ([`koszul`]), and machine-verify exactness,
//! minimality, and the structural claims ([`verify`]).

pub mod complex;
pub mod error;
pub mod export;
pub mod koszul;
pub mod linalg;
pub mod monomial;
pub mod resolution;
pub mod testgen;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use monomial::{parse_ideal, ExponentVector, Monomial, MonomialIdeal, Ring};
pub use tree::{build_support_tree, path_matrix, RootedTree};
