//! Exact search: decision, counting, enumeration and the analyses built on it.

mod analysis;
mod csp;
pub mod oracle;
mod solver;

pub use analysis::{
    degree_stats, near_solutions, self_unsat_analysis, DegreeReport, NearMode, NearSolutionReport,
    SelfUnsatReport,
};
pub use csp::{restrict, Csp, TableConstraint};
pub use oracle::{brute_force_count, brute_force_solutions};
pub use solver::{solve, solve_csp, SolveMode, SolveReport, Status, DEFAULT_BUDGET};
