//! Entries of a matrix as Laurent polynomials in its connected principal and
//! almost-principal minors.
//!
//! Three expansions are provided: Catalan paths (symmetric matrices),
//! Schröder paths and domino tilings of a half Aztec diamond (lower entries of
//! arbitrary matrices). The [`correspondences`] module relates them, and
//! [`elliptope`] turns the Catalan expansion into an explicit map from the
//! open cube of D-vine partial correlations onto the correlation matrices.

pub mod algebra;
pub mod paths;
pub mod tilings;
pub mod correspondences;
pub mod elliptope;
pub mod minors;
pub mod random;
pub mod reconstruct;
