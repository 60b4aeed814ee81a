//! Chronological backtracking over a fixed variable and value order.

use serde::{Deserialize, Serialize};

use super::csp::Csp;
use crate::instance::{Assignment, Instance};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// Stop at the first solution.
    Decide,
    /// Count every solution.
    Count,
    /// Collect up to `cap` solutions in lexicographic order, then stop.
    Enumerate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Sat,
    Unsat,
    BudgetExhausted,
}

impl Status {
    pub fn is_decided(self) -> bool {
        self != Status::BudgetExhausted
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub status: Status,
    /// Exact solution count; only present in count mode.
    pub count: Option<u64>,
    /// Number of (variable, value) extensions tried.
    pub nodes: u64,
    pub solutions: Vec<Assignment>,
    #[serde(skip)]
    pub mode: SolveMode,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

pub fn solve(instance: &Instance, mode: SolveMode, budget: u64) -> SolveReport {
    solve_csp(&Csp::from_instance(instance), mode, budget)
}

pub fn solve_csp(csp: &Csp, mode: SolveMode, budget: u64) -> SolveReport {
    let (stop_after, keep) = match mode {
        SolveMode::Decide => (Some(1), 1),
        SolveMode::Count => (None, 0),
        SolveMode::Enumerate(cap) => (Some(cap as u64), cap),
    };
    let outcome = run(csp, stop_after, keep, budget);
    let status = if outcome.exhausted {
        Status::BudgetExhausted
    } else if outcome.found > 0 {
        Status::Sat
    } else {
        Status::Unsat
    };
    SolveReport {
        status,
        count: (mode == SolveMode::Count && !outcome.exhausted).then_some(outcome.found),
        nodes: outcome.nodes,
        solutions: outcome.solutions,
        mode,
    }
}

pub(crate) struct Outcome {
    pub found: u64,
    pub nodes: u64,
    pub solutions: Vec<Assignment>,
    pub exhausted: bool,
}

/// Core search loop. Stops once `stop_after` solutions have been found (if
/// set) and retains the first `keep` of them.
pub(crate) fn run(csp: &Csp, stop_after: Option<u64>, keep: usize, budget: u64) -> Outcome {
    let mut out = Outcome {
        found: 0,
        nodes: 0,
        solutions: Vec::new(),
        exhausted: false,
    };
    if stop_after == Some(0) {
        return out;
    }
    let nullary_fails = csp
        .constraints
        .iter()
        .any(|c| c.scope.is_empty() && !c.relation.contains(&[]));
    if csp.contradiction || nullary_fails {
        return out;
    }
    let n = csp.n;
    if n == 0 {
        out.found = 1;
        if keep > 0 {
            out.solutions.push(Vec::new());
        }
        return out;
    }

    // Each constraint is checked once its highest-index variable is assigned.
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, c) in csp.constraints.iter().enumerate() {
        if let Some(&last) = c.scope.iter().max() {
            checks[last].push(ci);
        }
    }
    let d = csp.d as usize;
    let domain_len = |var: usize| csp.domains[var].as_ref().map_or(d, Vec::len);
    let domain_value = |var: usize, i: usize| match &csp.domains[var] {
        None => i as u32,
        Some(values) => values[i],
    };

    let mut values = vec![0u32; n];
    let mut cursor = vec![0usize; n];
    let mut var = 0usize;
    loop {
        let mut advanced = false;
        while cursor[var] < domain_len(var) {
            if out.nodes >= budget {
                out.exhausted = true;
                return out;
            }
            out.nodes += 1;
            values[var] = domain_value(var, cursor[var]);
            cursor[var] += 1;
            let consistent = checks[var].iter().all(|&ci| {
                let c = &csp.constraints[ci];
                let index = c
                    .scope
                    .iter()
                    .fold(0usize, |acc, &v| acc * d + values[v] as usize);
                c.relation.contains_index(index)
            });
            if consistent {
                advanced = true;
                break;
            }
        }

        if advanced && var + 1 < n {
            var += 1;
            cursor[var] = 0;
            continue;
        }
        if advanced {
            out.found += 1;
            if out.solutions.len() < keep {
                out.solutions.push(values.clone());
            }
            if stop_after.is_some_and(|limit| out.found >= limit) {
                return out;
            }
            continue;
        }
        if var == 0 {
            return out;
        }
        var -= 1;
    }
}
