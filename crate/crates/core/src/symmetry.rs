//! Value-exchange mapping on binary constraints and the flips built from it.
//!
//! Exchanging two values `u, u'` at one scope position of one constraint
//! relabels that constraint only. When `(u, v)` and `(u', v')` are permitted
//! but `(u, v')` and `(u', v)` are not, the exchange forbids `(u, v)` while
//! permitting `(u, v')` and `(u', v)`, which is what turns a unique solution
//! into a contradiction and a near-solution into a solution.

use serde::{Deserialize, Serialize};

use crate::error::{RbError, Result};
use crate::instance::{Assignment, Constraint, Instance};
use crate::relation::Relation;
use crate::search::{near_solutions, restrict, solve, NearMode, SolveMode, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    SatToUnsat,
    UnsatToSat,
}

/// Values exchanged at scope position `coord` (`u <-> u_prime`) together with
/// the partner values on the other position that witness the exchange.
///
/// For `SatToUnsat`: `(u, v)` and `(u', v')` permitted, `(u, v')` and
/// `(u', v)` forbidden. For `UnsatToSat`: `(u, v)` and `(u', v')` forbidden,
/// `(u, v')` and `(u', v)` permitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapPair {
    pub coord: usize,
    pub u: u32,
    pub u_prime: u32,
    pub v: u32,
    pub v_prime: u32,
}

fn allowed(relation: &Relation, coord: usize, a: u32, b: u32) -> bool {
    if coord == 0 {
        relation.contains(&[a, b])
    } else {
        relation.contains(&[b, a])
    }
}

fn check_binary(relation: &Relation, coord: usize, values: &[u32]) -> Result<()> {
    if relation.arity() != 2 {
        return Err(RbError::Unsupported(format!(
            "symmetry mapping is defined for binary constraints, got arity {}",
            relation.arity()
        )));
    }
    if coord > 1 {
        return Err(RbError::Precondition(format!(
            "coordinate {coord} out of range"
        )));
    }
    if let Some(&bad) = values.iter().find(|&&x| x >= relation.d()) {
        return Err(RbError::Precondition(format!(
            "value {bad} outside the domain"
        )));
    }
    Ok(())
}

/// Smallest `u'` (then smallest partner) outside `avoid` that realises the
/// requested exchange around `(u, v)`.
pub fn find_swap_pair(
    relation: &Relation,
    coord: usize,
    u: u32,
    v: u32,
    direction: Direction,
    avoid: &[u32],
) -> Result<SwapPair> {
    check_binary(relation, coord, &[u, v])?;
    let ok = |a, b| allowed(relation, coord, a, b);
    match direction {
        Direction::SatToUnsat if !ok(u, v) => {
            return Err(RbError::Precondition(format!(
                "({u}, {v}) is not permitted"
            )));
        }
        Direction::UnsatToSat if ok(u, v) => {
            return Err(RbError::Precondition(format!(
                "({u}, {v}) is already permitted"
            )));
        }
        _ => {}
    }
    let d = relation.d();
    for u_prime in (0..d).filter(|&x| x != u && !avoid.contains(&x)) {
        let found = match direction {
            Direction::SatToUnsat if !ok(u_prime, v) => {
                (0..d).find(|&w| ok(u_prime, w) && !ok(u, w))
            }
            Direction::UnsatToSat if ok(u_prime, v) => {
                (0..d).find(|&w| ok(u, w) && !ok(u_prime, w))
            }
            _ => None,
        };
        if let Some(v_prime) = found {
            return Ok(SwapPair {
                coord,
                u,
                u_prime,
                v,
                v_prime,
            });
        }
    }
    Err(RbError::NoSwapPair { u, v })
}

/// Exchanges `u` and `u_prime` at scope position `coord` of one constraint by
/// post-composing that position's permutation with the transposition.
pub fn apply_symmetry_mapping(
    instance: &Instance,
    constraint_index: usize,
    coord: usize,
    u: u32,
    u_prime: u32,
) -> Result<Instance> {
    if instance.k() != 2 {
        return Err(RbError::Unsupported(format!(
            "symmetry mapping needs k = 2, got k = {}",
            instance.k()
        )));
    }
    if constraint_index >= instance.m() {
        return Err(RbError::Precondition(format!(
            "constraint {constraint_index} out of range"
        )));
    }
    if coord > 1 || u >= instance.d() || u_prime >= instance.d() || u == u_prime {
        return Err(RbError::Precondition(format!(
            "need coord in {{0, 1}} and distinct in-range values, got coord {coord}, {u} <-> {u_prime}"
        )));
    }
    let mut c: Constraint = instance.constraints[constraint_index].clone();
    for x in &mut c.perms[coord] {
        if *x == u {
            *x = u_prime;
        } else if *x == u_prime {
            *x = u;
        }
    }
    Ok(instance.with_constraint(constraint_index, c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipOutcome {
    pub direction: Direction,
    pub constraint_index: usize,
    pub coord: usize,
    pub u: u32,
    pub u_prime: u32,
    pub v: u32,
    pub v_prime: u32,
    pub pre_status: Status,
    pub post_status: Status,
    pub avoid: Vec<u32>,
    pub subproblems_unchanged: bool,
    pub variable: usize,
    pub pre_count: Option<u64>,
    pub post_count: Option<u64>,
    /// The near-solution made into a solution (`UnsatToSat` only).
    pub witness: Option<Assignment>,
}

impl FlipOutcome {
    pub fn swap(&self) -> SwapPair {
        SwapPair {
            coord: self.coord,
            u: self.u,
            u_prime: self.u_prime,
            v: self.v,
            v_prime: self.v_prime,
        }
    }

    /// Both verdicts are exact and differ.
    pub fn changed_satisfiability(&self) -> bool {
        self.pre_status.is_decided()
            && self.post_status.is_decided()
            && self.pre_status != self.post_status
    }

    /// Neither exchanged value lies in the avoid set.
    pub fn avoids_swap_values(&self) -> bool {
        !self.avoid.contains(&self.u) && !self.avoid.contains(&self.u_prime)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("flip outcome serialization is infallible")
    }
}

fn exact_count(instance: &Instance, budget: u64) -> (Status, Option<u64>) {
    let report = solve(instance, SolveMode::Count, budget);
    (report.status, report.count)
}

fn first_constraint_with(instance: &Instance, x: usize) -> Result<usize> {
    if x >= instance.n() {
        return Err(RbError::Precondition(format!("variable {x} out of range")));
    }
    instance
        .constraints
        .iter()
        .position(|c| c.scope.contains(&x))
        .ok_or(RbError::UnconstrainedVariable(x))
}

/// Breaks `solution` by exchanging its value at `x` in the lowest-index
/// constraint on `x`. The post-flip verdict is measured, not assumed.
pub fn flip_sat_to_unsat(
    instance: &Instance,
    solution: &[u32],
    x: usize,
    avoid: &[u32],
    budget: u64,
) -> Result<(Instance, FlipOutcome)> {
    if instance.k() != 2 {
        return Err(RbError::Unsupported("flips need k = 2".into()));
    }
    if !instance.satisfies(solution) {
        return Err(RbError::Precondition(
            "given assignment is not a solution".into(),
        ));
    }
    let ci = first_constraint_with(instance, x)?;
    let scope = &instance.constraints[ci].scope;
    let coord = usize::from(scope[1] == x);
    let (u, v) = (solution[x], solution[scope[1 - coord]]);
    let swap = find_swap_pair(
        &instance.materialized(ci),
        coord,
        u,
        v,
        Direction::SatToUnsat,
        avoid,
    )?;
    let post = apply_symmetry_mapping(instance, ci, coord, u, swap.u_prime)?;
    let outcome = finish(
        instance,
        &post,
        Direction::SatToUnsat,
        ci,
        x,
        swap,
        avoid,
        None,
        budget,
    );
    Ok((post, outcome))
}

/// Repairs a near-solution of an UNSAT instance: finds the lowest-index
/// constraint on `x` that is the sole violation of some assignment `tau`, and
/// exchanges `tau(x)` there so that `tau` becomes a solution.
pub fn flip_unsat_to_sat(
    instance: &Instance,
    x: usize,
    avoid: &[u32],
    budget: u64,
) -> Result<(Instance, FlipOutcome)> {
    if instance.k() != 2 {
        return Err(RbError::Unsupported("flips need k = 2".into()));
    }
    first_constraint_with(instance, x)?;
    match solve(instance, SolveMode::Decide, budget).status {
        Status::Unsat => {}
        Status::Sat => return Err(RbError::Precondition("instance is satisfiable".into())),
        Status::BudgetExhausted => return Err(RbError::BudgetExhausted { budget }),
    }
    let mut chosen = None;
    for (ci, c) in instance.constraints.iter().enumerate() {
        if !c.scope.contains(&x) {
            continue;
        }
        if let Some(tau) = near_solutions(instance, ci, NearMode::Witness, budget)?.witness {
            chosen = Some((ci, tau));
            break;
        }
    }
    let (ci, tau) = chosen.ok_or(RbError::NoSelfUnsatConstraint(x))?;
    let scope = &instance.constraints[ci].scope;
    let coord = usize::from(scope[1] == x);
    let (u, w) = (tau[x], tau[scope[1 - coord]]);
    let swap = find_swap_pair(
        &instance.materialized(ci),
        coord,
        u,
        w,
        Direction::UnsatToSat,
        avoid,
    )?;
    let post = apply_symmetry_mapping(instance, ci, coord, u, swap.u_prime)?;
    let outcome = finish(
        instance,
        &post,
        Direction::UnsatToSat,
        ci,
        x,
        swap,
        avoid,
        Some(tau),
        budget,
    );
    Ok((post, outcome))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    pre: &Instance,
    post: &Instance,
    direction: Direction,
    constraint_index: usize,
    x: usize,
    swap: SwapPair,
    avoid: &[u32],
    witness: Option<Assignment>,
    budget: u64,
) -> FlipOutcome {
    let (pre_status, pre_count) = exact_count(pre, budget);
    let (post_status, post_count) = exact_count(post, budget);
    FlipOutcome {
        direction,
        constraint_index,
        coord: swap.coord,
        u: swap.u,
        u_prime: swap.u_prime,
        v: swap.v,
        v_prime: swap.v_prime,
        pre_status,
        post_status,
        avoid: avoid.to_vec(),
        subproblems_unchanged: subproblem_invariance_check(pre, post, x, avoid),
        variable: x,
        pre_count,
        post_count,
        witness,
    }
}

/// True iff fixing `x` to each value in `avoid` yields bit-identical
/// subproblems before and after the flip.
pub fn subproblem_invariance_check(
    pre: &Instance,
    post: &Instance,
    x: usize,
    avoid: &[u32],
) -> bool {
    avoid.iter().all(|&value| {
        value < pre.d()
            && restrict(pre, x, value).canonical_json() == restrict(post, x, value).canonical_json()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// A flip left the instance with two or more solutions (or undecided).
    ClassExit,
    /// A flip kept the instance in the class without changing its verdict.
    Unchanged,
    FlipFailed(String),
}

#[derive(Debug, Clone)]
pub struct FixedPointTrace {
    pub variable: Option<usize>,
    pub steps: Vec<FlipOutcome>,
    pub termination: Termination,
    pub instance: Instance,
}

/// Alternates the two flips on an instance with at most one solution,
/// stopping early if a flip leaves that class.
pub fn fixed_point_trial(
    instance: &Instance,
    rounds: usize,
    budget: u64,
) -> Result<FixedPointTrace> {
    let (status, count) = exact_count(instance, budget);
    let mut count = match (status, count) {
        (Status::BudgetExhausted, _) => return Err(RbError::BudgetExhausted { budget }),
        (_, Some(c)) if c <= 1 => c,
        (_, c) => {
            return Err(RbError::Precondition(format!(
                "instance has {c:?} solutions; need zero or one"
            )))
        }
    };
    let variable = instance
        .constraints
        .iter()
        .flat_map(|c| c.scope.iter().copied())
        .min();
    let mut trace = FixedPointTrace {
        variable,
        steps: Vec::new(),
        termination: Termination::Completed,
        instance: instance.clone(),
    };
    let Some(x) = variable else {
        if rounds > 0 {
            trace.termination = Termination::FlipFailed("instance has no constraints".into());
        }
        return Ok(trace);
    };

    for _ in 0..rounds {
        let current = &trace.instance;
        let step = if count == 1 {
            let sol = solve(current, SolveMode::Decide, budget)
                .solutions
                .remove(0);
            flip_sat_to_unsat(current, &sol, x, &[], budget)
        } else {
            flip_unsat_to_sat(current, x, &[], budget)
        };
        let (next, outcome) = match step {
            Ok(pair) => pair,
            Err(e) => {
                trace.termination = Termination::FlipFailed(e.to_string());
                break;
            }
        };
        let post_count = outcome.post_count;
        trace.steps.push(outcome);
        trace.instance = next;
        match post_count {
            Some(c) if c == count => {
                trace.termination = Termination::Unchanged;
                break;
            }
            Some(c) if c <= 1 => count = c,
            _ => {
                trace.termination = Termination::ClassExit;
                break;
            }
        }
    }
    Ok(trace)
}
