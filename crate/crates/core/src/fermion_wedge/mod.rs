//! Fermionic picture: the semi-infinite wedge space, free fermions, the
//! normal-ordered representation of banded matrices, the embedding of
//! differential operators, and the bracket table used as ground truth for the
//! bosonic operators.

pub mod bracket;
pub mod central;
pub mod checks;
pub mod matrix;
pub mod wedge;

pub use bracket::{bracket_table, generators, w_bracket, BracketEntry, DiffOp, Generator};
pub use central::{central_residue, central_term, central_term_with};
pub use checks::{check_anticommutators, check_projective_elementary, compare_generator_cocycles, CheckResult, Sector};
pub use matrix::{phi_matrix, BandedMatrix, FiniteMatrix, Poly, RhatOperator};
pub use wedge::{psi_apply, psi_star_apply, rhat_apply, FockVector, HalfInt, WedgeState};
