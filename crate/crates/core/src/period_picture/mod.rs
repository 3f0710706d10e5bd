//! The singularity side at `t = 0`: closed-form periods, the phase factor
//! `c(s)`, the vertex operators built from periods, the operators `W_n^k`,
//! and their comparison with the bosonic `J_n^k`.

pub mod gamma_a;
pub mod periods;
pub mod phase;
pub mod identities;

pub use gamma_a::{build_gamma_a, extract_w};
pub use periods::{check_period_recurrence, period_t0, phi_component, LaurentField, PeriodTerm};
pub use phase::{c_series, PhaseFactor};
pub use identities::{check_operator_identities, IdentityCheck, IdentityConfig, IdentityReport};
