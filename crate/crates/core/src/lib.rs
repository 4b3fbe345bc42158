//! coxkit: exact combinatorics of Coxeter systems, Weyl-distance spaces, and
//! counting quasi-morphisms.
//!
//! Everything here is word-level and integer-exact: no floating point enters
//! any group-theoretic decision. Budgeted searches say so when they give up.

pub mod ball;
pub mod building;
pub mod classify;
pub mod cli;
pub mod element;
pub mod engine;
pub mod error;
pub mod parabolic;
pub mod qm;
pub mod rankone;
pub mod rewrite;
pub mod ring;
pub mod system;

pub use element::{Element, Word};
pub use error::CoxError;
pub use system::CoxeterSystem;
