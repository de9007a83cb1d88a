//! Exact arithmetic statistics of polynomials over finite fields in residue
//! classes: factorization functions attached to representations of symmetric
//! groups, their equidistribution bounds, Dirichlet L-polynomials, sieve
//! identities for factorization types, and the Poisson-Dirichlet entropy
//! machinery.

pub mod error;
pub mod par;

pub mod field;
pub mod poly;
pub mod factor;
pub mod enumerate;
pub mod residue;
pub mod symrep;
pub mod arithfun;
pub mod dirichlet;
pub mod bounds;
pub mod anatomy;
pub mod cli;

pub use error::{Error, Result};
