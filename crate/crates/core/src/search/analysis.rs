//! Near-solutions, self-unsatisfiability and variable degrees.

use serde::{Deserialize, Serialize};

use super::csp::Csp;
use super::solver::{run, solve, SolveMode, Status};
use crate::error::{RbError, Result};
use crate::instance::{Assignment, Instance};

/// Assignments violating exactly one given constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearSolutionReport {
    pub constraint_index: usize,
    /// `N_C`; `None` when only existence was asked for.
    pub count: Option<u64>,
    /// The lexicographically first such assignment.
    pub witness: Option<Assignment>,
}

impl NearSolutionReport {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearMode {
    /// Stop at the first witness.
    Witness,
    /// Exact `N_C` plus the first witness.
    Count,
}

/// Solves the instance with constraint `index` replaced by its complement:
/// the solutions of that CSP are exactly the assignments under which
/// `index` is the only violated constraint.
pub fn near_solutions(
    instance: &Instance,
    index: usize,
    mode: NearMode,
    budget: u64,
) -> Result<NearSolutionReport> {
    if index >= instance.m() {
        return Err(RbError::Precondition(format!(
            "constraint index {index} out of range (m = {})",
            instance.m()
        )));
    }
    let mut csp = Csp::from_instance(instance);
    csp.constraints[index].relation = csp.constraints[index].relation.complement();
    let stop_after = match mode {
        NearMode::Witness => Some(1),
        NearMode::Count => None,
    };
    let outcome = run(&csp, stop_after, 1, budget);
    if outcome.exhausted {
        return Err(RbError::BudgetExhausted { budget });
    }
    Ok(NearSolutionReport {
        constraint_index: index,
        count: (mode == NearMode::Count).then_some(outcome.found),
        witness: outcome.solutions.into_iter().next(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfUnsatReport {
    pub unsat: bool,
    pub per_constraint: Vec<bool>,
    pub per_variable: Vec<bool>,
    pub is_self_unsat_formula: bool,
}

/// A constraint is self-unsatisfiable if some assignment violates it and
/// nothing else; a variable is if it lies in such a constraint; the instance
/// is a self-unsatisfiable formula if it is UNSAT and every variable is.
pub fn self_unsat_analysis(instance: &Instance, budget: u64) -> Result<SelfUnsatReport> {
    let verdict = solve(instance, SolveMode::Decide, budget);
    if verdict.status == Status::BudgetExhausted {
        return Err(RbError::BudgetExhausted { budget });
    }
    let per_constraint = (0..instance.m())
        .map(|i| near_solutions(instance, i, NearMode::Witness, budget).map(|r| r.exists()))
        .collect::<Result<Vec<_>>>()?;
    let mut per_variable = vec![false; instance.n()];
    for (c, &flag) in instance.constraints.iter().zip(&per_constraint) {
        if flag {
            for &v in &c.scope {
                per_variable[v] = true;
            }
        }
    }
    let unsat = verdict.status == Status::Unsat;
    Ok(SelfUnsatReport {
        unsat,
        is_self_unsat_formula: unsat && per_variable.iter().all(|&f| f),
        per_constraint,
        per_variable,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degrees: Vec<usize>,
    pub min: usize,
    pub mean: f64,
    /// `r k ln d / 100`.
    pub threshold: f64,
    /// Variables with degree at most `threshold`.
    pub below_threshold_count: usize,
}

pub fn degree_stats(instance: &Instance) -> DegreeReport {
    let mut degrees = vec![0usize; instance.n()];
    for c in &instance.constraints {
        for &v in &c.scope {
            degrees[v] += 1;
        }
    }
    let p = &instance.params;
    let threshold = p.r * p.k as f64 * (p.d as f64).ln() / 100.0;
    DegreeReport {
        min: degrees.iter().copied().min().unwrap_or(0),
        mean: degrees.iter().sum::<usize>() as f64 / instance.n() as f64,
        below_threshold_count: degrees.iter().filter(|&&g| g as f64 <= threshold).count(),
        threshold,
        degrees,
    }
}
