//! The constraints `J_n^k D = 0` as a graded linear system on correlators:
//! elimination, assembly of `D` from a table, and residual checks.

pub mod equations;
pub mod output;
pub mod residual;
pub mod solve;
pub mod table;

pub use equations::{coefficient, ConstraintOperator, CorrelatorSource, Linear, Lookup};
pub use output::{apply_spin_filter, render_table, Format, SpinFilterReport};
pub use residual::{residual_check, residual_operators, ResidualReport, ResidualRow};
pub use solve::{constraint_operators, solve_constraints, EliminationOrder, Pivot, Solution, SolverConfig};
pub use table::{
    assemble_d, assemble_f, correlator_keys, f_coefficient, render_insertions, safe_eps_floor, spin_selection_filter,
    Caps, CorrelatorTable, IndexSet, Insertion,
};
