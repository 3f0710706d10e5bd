//! Exact-arithmetic construction of the W-constraint operators attached to
//! the A_N singularity, in the vertex-operator picture, the bosonic and
//! fermionic W_{1+infinity} pictures, and a recursive solver for the
//! resulting r-spin intersection numbers.
//!
//! Everything is computed over `Q`; there is no floating point anywhere.

pub mod boson_fock;
pub mod check;
pub mod cli;
pub mod constraint_solver;
pub mod error;
pub mod exact_series;
pub mod fermion_wedge;
pub mod period_picture;

pub use check::CheckResult;
pub use error::{Error, Result};
pub use exact_series::{Monomial, Rational, TruncatedSeries};
