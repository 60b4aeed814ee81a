//! Log-encoding of instances into CNF.
//!
//! CSP variable `i` owns Boolean variables `1 + i*B .. 1 + i*B + B - 1`, bit
//! `j` (little-endian) of its value at `1 + i*B + j`, with `B = ceil(log2 d)`.
//! Every forbidden tuple of every constraint becomes one clause of `k*B`
//! literals, and each unused bit pattern `w in [d, 2^B)` of each variable gets a
//! `B`-literal exclusion clause, so CNF models and CSP solutions are in
//! bijection.

mod dimacs;

pub use dimacs::{parse_dimacs, parse_dimacs_str, write_dimacs, write_dimacs_string, DimacsError};

use serde::{Deserialize, Serialize};

use crate::error::{RbError, Result};
use crate::instance::{Assignment, Instance};
use crate::params::RbParams;

pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClauseOrigin {
    Forbidden { constraint: usize, tuple: Vec<u32> },
    DomainExclusion { variable: usize, value: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Literal>>,
    /// One entry per clause when produced by [`encode_log`]; empty for parsed
    /// files.
    pub origins: Vec<ClauseOrigin>,
    /// Written as `c` lines; ignored on comparison-relevant paths.
    pub comments: Vec<String>,
}

impl Cnf {
    /// Same variables and clauses, ignoring origins and comments.
    pub fn same_formula(&self, other: &Cnf) -> bool {
        self.num_vars == other.num_vars && self.clauses == other.clauses
    }
}

/// `ceil(log2 d)`; panics if `d < 2`.
pub fn bits_per_var(d: u32) -> usize {
    assert!(d >= 2, "domain size must be at least 2");
    (32 - (d - 1).leading_zeros()) as usize
}

fn bit_var(var: usize, bit: usize, bits: usize) -> Literal {
    (1 + var * bits + bit) as Literal
}

/// Literals that are all false exactly when `var` takes `value`.
fn disagreement(var: usize, value: u32, bits: usize, out: &mut Vec<Literal>) {
    for bit in 0..bits {
        let lit = bit_var(var, bit, bits);
        out.push(if value >> bit & 1 == 1 { -lit } else { lit });
    }
}

pub fn encode_log(instance: &Instance) -> Cnf {
    let bits = bits_per_var(instance.d());
    let n = instance.n();
    let mut clauses = Vec::new();
    let mut origins = Vec::new();

    for ci in 0..instance.m() {
        let scope = &instance.constraints[ci].scope;
        for tuple in instance.materialized(ci).complement().tuples() {
            let mut clause = Vec::with_capacity(scope.len() * bits);
            for (&var, &value) in scope.iter().zip(&tuple) {
                disagreement(var, value, bits, &mut clause);
            }
            clauses.push(clause);
            origins.push(ClauseOrigin::Forbidden {
                constraint: ci,
                tuple,
            });
        }
    }
    for var in 0..n {
        for value in instance.d()..(1u32 << bits) {
            let mut clause = Vec::with_capacity(bits);
            disagreement(var, value, bits, &mut clause);
            clauses.push(clause);
            origins.push(ClauseOrigin::DomainExclusion {
                variable: var,
                value,
            });
        }
    }

    let p = &instance.params;
    Cnf {
        num_vars: n * bits,
        clauses,
        origins,
        comments: vec![
            "log-encoded Model RB instance".to_string(),
            format!("seed {}", p.seed),
            format!(
                "n {} d {} k {} p {} b {} r {} m {}",
                p.n, p.d, p.k, p.p, p.b, p.r, p.m
            ),
            format!("bits per variable {bits}, little-endian"),
        ],
    }
}

/// Expected clause count `m (d^k - b d^(k-1)) + n (2^B - d)`.
pub fn clause_census(params: &RbParams) -> u64 {
    let (d, k, b) = (u64::from(params.d), params.k as u32, u64::from(params.b));
    let forbidden = d.pow(k) - b * d.pow(k - 1);
    let unused = (1u64 << bits_per_var(params.d)) - d;
    params.m as u64 * forbidden + params.n as u64 * unused
}

/// Reassembles CSP values from a CNF model. `model[i]` is the value of
/// Boolean variable `i + 1`.
pub fn decode_assignment(model: &[bool], params: &RbParams) -> Result<Assignment> {
    let bits = bits_per_var(params.d);
    if model.len() != params.n * bits {
        return Err(RbError::MalformedModel(format!(
            "model has {} variables, expected {}",
            model.len(),
            params.n * bits
        )));
    }
    model
        .chunks(bits)
        .enumerate()
        .map(|(var, chunk)| {
            let value = chunk
                .iter()
                .enumerate()
                .fold(0u32, |acc, (bit, &on)| acc | (u32::from(on) << bit));
            if value >= params.d {
                Err(RbError::MalformedModel(format!(
                    "variable {var} decodes to {value} >= d = {}",
                    params.d
                )))
            } else {
                Ok(value)
            }
        })
        .collect()
}

/// The model that [`decode_assignment`] maps back to `values`.
pub fn encode_assignment(values: &[u32], d: u32) -> Vec<bool> {
    let bits = bits_per_var(d);
    values
        .iter()
        .flat_map(|&v| (0..bits).map(move |bit| v >> bit & 1 == 1))
        .collect()
}

/// Whether `model` satisfies every clause.
pub fn cnf_satisfied(cnf: &Cnf, model: &[bool]) -> bool {
    cnf.clauses.iter().all(|clause| {
        clause.iter().any(|&lit| {
            let value = model[lit.unsigned_abs() as usize - 1];
            if lit > 0 {
                value
            } else {
                !value
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_instance, Constraint};
    use crate::params::{derive_params_with_domain, Density};

    #[test]
    fn bit_widths() {
        assert_eq!(bits_per_var(40), 6);
        assert_eq!(bits_per_var(4), 2);
        assert_eq!(bits_per_var(2), 1);
        assert_eq!(bits_per_var(5), 3);
        assert_eq!(bits_per_var(1 << 20), 20);
        assert_eq!(bits_per_var((1 << 20) + 1), 21);
    }

    #[test]
    fn single_constraint_d4() {
        let params = derive_params_with_domain(2, 4, 0.5, 2, 0, Density::Threshold).unwrap();
        let inst = Instance::circulant(params, vec![Constraint::identity(vec![0, 1], 4)]).unwrap();
        let cnf = encode_log(&inst);
        assert_eq!(cnf.num_vars, 4);
        assert_eq!(cnf.clauses.len(), 8);
        assert!(cnf.clauses.iter().all(|c| c.len() == 4));
        // (0, 2) is forbidden since 2 - 0 >= b; its bits are 00 and 01 (LSB first).
        assert!(cnf.clauses.contains(&vec![1, 2, 3, -4]));
    }

    #[test]
    fn power_of_two_has_no_exclusions() {
        let params = derive_params_with_domain(5, 8, 0.5, 2, 3, Density::Threshold).unwrap();
        let cnf = encode_log(&gen_instance(&params, false).unwrap());
        assert!(cnf
            .origins
            .iter()
            .all(|o| matches!(o, ClauseOrigin::Forbidden { .. })));
        assert_eq!(cnf.clauses.len() as u64, clause_census(&params));
    }

    #[test]
    fn exclusions_for_d5() {
        let params = derive_params_with_domain(3, 5, 0.4, 2, 3, Density::Threshold).unwrap();
        let cnf = encode_log(&gen_instance(&params, false).unwrap());
        let exclusions = cnf
            .origins
            .iter()
            .filter(|o| matches!(o, ClauseOrigin::DomainExclusion { .. }))
            .count();
        assert_eq!(exclusions, 3 * 3);
        assert_eq!(cnf.clauses.len() as u64, clause_census(&params));
        assert_eq!(cnf.origins.len(), cnf.clauses.len());
    }

    #[test]
    fn planted_round_trip() {
        let params = derive_params_with_domain(6, 6, 0.5, 2, 8, Density::Threshold).unwrap();
        let inst = gen_instance(&params, true).unwrap();
        let sigma = inst.planted.clone().unwrap();
        let model = encode_assignment(&sigma, 6);
        assert!(cnf_satisfied(&encode_log(&inst), &model));
        assert_eq!(decode_assignment(&model, &params).unwrap(), sigma);
    }

    #[test]
    fn all_zero_model() {
        let params = derive_params_with_domain(3, 5, 0.4, 2, 0, Density::Threshold).unwrap();
        assert_eq!(
            decode_assignment(&[false; 9], &params).unwrap(),
            vec![0, 0, 0]
        );
    }

    #[test]
    fn malformed_models() {
        let params = derive_params_with_domain(2, 5, 0.4, 2, 0, Density::Threshold).unwrap();
        // 7 = 0b111 is not a value of a 5-valued variable.
        let bad = [true, true, true, false, false, false];
        assert!(matches!(
            decode_assignment(&bad, &params),
            Err(RbError::MalformedModel(_))
        ));
        assert!(decode_assignment(&[false; 5], &params).is_err());
    }

    #[test]
    fn variable_count_identity() {
        // For d = 2^B the search spaces agree: d^n = 2^N with N = n B.
        for (n, d) in [(10usize, 8u32), (7, 16), (20, 2), (5, 1024)] {
            let params = derive_params_with_domain(n, d, 0.5, 2, 0, Density::Threshold).unwrap();
            let cnf = encode_log(&gen_instance(&params, false).unwrap());
            let bits = bits_per_var(d);
            assert_eq!(cnf.num_vars, n * bits);
            assert_eq!((n as f64) * (d as f64).log2(), cnf.num_vars as f64);
        }
    }

    #[test]
    fn clauses_have_no_duplicate_literals() {
        let params = derive_params_with_domain(5, 6, 0.5, 3, 2, Density::Threshold).unwrap();
        let cnf = encode_log(&gen_instance(&params, false).unwrap());
        for clause in &cnf.clauses {
            let mut vars: Vec<u32> = clause.iter().map(|l| l.unsigned_abs()).collect();
            vars.sort_unstable();
            vars.dedup();
            assert_eq!(vars.len(), clause.len());
        }
        assert_eq!(cnf.clauses.len() as u64, clause_census(&params));
    }
}
