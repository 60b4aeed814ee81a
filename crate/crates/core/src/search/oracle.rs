//! Exhaustive enumeration over all `d^n` assignments.
//!
//! Nothing here shares code with the backtracking solver: constraints are
//! evaluated through [`Constraint::permits`](crate::instance::Constraint::permits)
//! on the unmaterialised instance.

use crate::error::{RbError, Result};
use crate::instance::{Assignment, Instance};

pub const ORACLE_LIMIT: f64 = 1e7;

fn guard(n: usize, d: u32) -> Result<()> {
    let space = f64::from(d).powi(n as i32);
    if space > ORACLE_LIMIT {
        return Err(RbError::OracleGuard {
            space,
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

/// Calls `visit` with every assignment in lexicographic order.
pub fn for_each_assignment(n: usize, d: u32, mut visit: impl FnMut(&[u32])) {
    let mut values = vec![0u32; n];
    loop {
        visit(&values);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            values[i] += 1;
            if values[i] < d {
                break;
            }
            values[i] = 0;
        }
    }
}

pub fn brute_force_count(instance: &Instance) -> Result<u64> {
    guard(instance.n(), instance.d())?;
    let mut count = 0u64;
    for_each_assignment(instance.n(), instance.d(), |values| {
        if instance.satisfies(values) {
            count += 1;
        }
    });
    Ok(count)
}

pub fn brute_force_solutions(instance: &Instance) -> Result<Vec<Assignment>> {
    guard(instance.n(), instance.d())?;
    let mut out = Vec::new();
    for_each_assignment(instance.n(), instance.d(), |values| {
        if instance.satisfies(values) {
            out.push(values.to_vec());
        }
    });
    Ok(out)
}

/// Assignments whose only violated constraint is `index`.
pub fn brute_force_near_count(instance: &Instance, index: usize) -> Result<u64> {
    guard(instance.n(), instance.d())?;
    let mut count = 0u64;
    for_each_assignment(instance.n(), instance.d(), |values| {
        if instance.violated_constraints(values) == [index] {
            count += 1;
        }
    });
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Constraint;
    use crate::params::{derive_params_with_domain, Density};

    #[test]
    fn single_unconstrained_variable() {
        let mut params = derive_params_with_domain(2, 5, 0.4, 2, 0, Density::Threshold).unwrap();
        params.n = 1;
        let inst = Instance::circulant(params, vec![]).unwrap();
        assert_eq!(brute_force_count(&inst).unwrap(), 5);
    }

    #[test]
    fn two_variables_single_constraint() {
        let params = derive_params_with_domain(2, 4, 0.5, 2, 0, Density::Threshold).unwrap();
        let inst = Instance::circulant(params, vec![Constraint::identity(vec![0, 1], 4)]).unwrap();
        assert_eq!(brute_force_count(&inst).unwrap(), 8);
    }

    #[test]
    fn guard_refuses_large_spaces() {
        let params = derive_params_with_domain(12, 12, 0.5, 2, 0, Density::Threshold).unwrap();
        let inst = Instance::circulant(params, vec![]).unwrap();
        assert!(matches!(
            brute_force_count(&inst),
            Err(RbError::OracleGuard { .. })
        ));
    }

    #[test]
    fn single_constraint_near_count_is_complement() {
        let params = derive_params_with_domain(3, 4, 0.5, 2, 0, Density::Threshold).unwrap();
        let inst = Instance::circulant(params, vec![Constraint::identity(vec![0, 2], 4)]).unwrap();
        let sols = brute_force_count(&inst).unwrap();
        assert_eq!(brute_force_near_count(&inst, 0).unwrap(), 64 - sols);
    }
}
