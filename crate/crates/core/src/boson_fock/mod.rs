//! Bosonic Fock space: Heisenberg modes acting on [`TruncatedSeries`], the
//! vertex operator `Gamma(w, zeta)`, its reduction modulo `h`, and the
//! operators `J_n^k`.
//!
//! [`TruncatedSeries`]: crate::exact_series::TruncatedSeries

pub mod brackets;
pub mod change_vars;
pub mod extract;
pub mod modes;
pub mod vertex;
pub mod zeta;

pub use brackets::{check_bosonic_brackets, BracketMeasurement, BracketWindow};
pub use change_vars::{change_vars_tq, q_label, q_scale, t_index, Direction, QLabel};
pub use extract::{
    extract_j, extract_j_generic, extract_j_single, mode_multisets, virasoro_closed_form, ExtractWindow,
    OperatorTable,
};
pub use modes::{basis_monomials, IndexedOperator, Mode, ModePolynomial, ModeWord};
pub use vertex::{apply_vertex, build_gamma_kp, reduction_factor_exponent, VertexOperatorData};
pub use zeta::{branch_sum, branch_sum_field, FieldSeries, ZetaSeries};
