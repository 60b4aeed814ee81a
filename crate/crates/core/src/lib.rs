//! Model RB random constraint satisfaction workbench: seeded instance
//! generation, exact search and counting, satisfiability-flipping symmetry
//! mappings, moment calculations, SAT log-encoding and experiment harnesses.

pub mod analytics;
pub mod encode;
pub mod error;
pub mod harness;
pub mod instance;
pub mod params;
pub mod relation;
pub mod rng;
pub mod search;
pub mod symmetry;

pub use error::{RbError, Result};
pub use instance::{gen_instance, Assignment, Constraint, Instance};
pub use params::{derive_params, derive_params_with_domain, Density, RbParams};
pub use relation::Relation;
pub use search::{solve, SolveMode, SolveReport, Status};
