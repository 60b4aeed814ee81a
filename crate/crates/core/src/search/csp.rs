use serde::Serialize;

use crate::instance::Instance;
use crate::relation::Relation;

/// A constraint given directly by its permitted set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableConstraint {
    pub scope: Vec<usize>,
    pub relation: Relation,
}

/// A table CSP: the materialised form of an [`Instance`] and the shape of the
/// subproblems produced by [`Csp::restrict`].
///
/// Unary restrictions are folded into `domains` (`None` is the full domain,
/// `Some` is a strict subset in ascending order), and a projection that leaves
/// no permitted tuple or an empty domain sets `contradiction`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Csp {
    pub n: usize,
    pub d: u32,
    pub domains: Vec<Option<Vec<u32>>>,
    pub constraints: Vec<TableConstraint>,
    pub contradiction: bool,
}

impl Csp {
    pub fn from_instance(instance: &Instance) -> Csp {
        Csp {
            n: instance.n(),
            d: instance.d(),
            domains: vec![None; instance.n()],
            constraints: (0..instance.m())
                .map(|i| TableConstraint {
                    scope: instance.constraints[i].scope.clone(),
                    relation: instance.materialized(i),
                })
                .collect(),
            contradiction: false,
        }
    }

    pub fn domain_allows(&self, var: usize, value: u32) -> bool {
        value < self.d
            && match &self.domains[var] {
                None => true,
                Some(values) => values.binary_search(&value).is_ok(),
            }
    }

    pub fn satisfies(&self, values: &[u32]) -> bool {
        values.len() == self.n
            && !self.contradiction
            && values
                .iter()
                .enumerate()
                .all(|(i, &v)| self.domain_allows(i, v))
            && self.constraints.iter().all(|c| {
                let local: Vec<u32> = c.scope.iter().map(|&v| values[v]).collect();
                c.relation.contains(&local)
            })
    }

    /// Fixes `var = value` and removes `var`; variables above it shift down by
    /// one. Solutions of the result correspond one-to-one with solutions of
    /// `self` that have `var = value`.
    ///
    /// Panics if `var >= n`.
    pub fn restrict(&self, var: usize, value: u32) -> Csp {
        assert!(var < self.n, "variable {var} out of range");
        let remap = |v: usize| if v > var { v - 1 } else { v };
        let mut contradiction = self.contradiction || !self.domain_allows(var, value);
        let mut domains = self.domains.clone();
        domains.remove(var);
        let mut constraints = Vec::with_capacity(self.constraints.len());

        for c in &self.constraints {
            let Some(pos) = c.scope.iter().position(|&v| v == var) else {
                constraints.push(TableConstraint {
                    scope: c.scope.iter().map(|&v| remap(v)).collect(),
                    relation: c.relation.clone(),
                });
                continue;
            };
            let scope: Vec<usize> = c
                .scope
                .iter()
                .filter(|&&v| v != var)
                .map(|&v| remap(v))
                .collect();
            let projected: Vec<Vec<u32>> = c
                .relation
                .tuples()
                .filter(|t| t[pos] == value)
                .map(|mut t| {
                    t.remove(pos);
                    t
                })
                .collect();
            match scope.len() {
                0 => contradiction |= projected.is_empty(),
                1 => {
                    let target = scope[0];
                    let narrowed: Vec<u32> = projected
                        .iter()
                        .map(|t| t[0])
                        .filter(|&v| match &domains[target] {
                            None => true,
                            Some(dom) => dom.binary_search(&v).is_ok(),
                        })
                        .collect();
                    domains[target] = Some(narrowed);
                }
                arity => constraints.push(TableConstraint {
                    scope,
                    relation: Relation::from_tuples(arity, self.d, &projected)
                        .expect("projection of a valid relation"),
                }),
            }
        }

        for dom in domains.iter_mut() {
            if dom
                .as_ref()
                .is_some_and(|values| values.len() == self.d as usize)
            {
                *dom = None;
            }
        }
        contradiction |= domains
            .iter()
            .any(|dom| dom.as_ref().is_some_and(Vec::is_empty));

        Csp {
            n: self.n - 1,
            d: self.d,
            domains,
            constraints,
            contradiction,
        }
    }

    /// Serialization used for bit-exact subproblem comparison.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("csp serialization is infallible")
    }
}

/// `instance` with `var` fixed to `value`, as an `(n - 1)`-variable CSP.
pub fn restrict(instance: &Instance, var: usize, value: u32) -> Csp {
    Csp::from_instance(instance).restrict(var, value)
}
