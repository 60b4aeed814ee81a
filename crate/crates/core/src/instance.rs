//! Constraints, instances and the random generator.

use serde::{Deserialize, Serialize};

use crate::error::{RbError, Result};
use crate::params::RbParams;
use crate::relation::{apply_permutation, check_permutation, gen_base_relation, Relation};
use crate::rng::{rng_stream, Purpose};

pub const FORMAT_VERSION: u32 = 1;

/// Largest variable count accepted from a file.
pub const MAX_VARIABLES: usize = 1 << 20;

/// One value per variable, each in `[0, d)`.
pub type Assignment = Vec<u32>;

/// A constraint stored as a scope plus one domain permutation per scope
/// position. Its permitted set is the base relation with coordinate `j`
/// relabelled through `perms[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constraint {
    pub scope: Vec<usize>,
    pub perms: Vec<Vec<u32>>,
}

impl Constraint {
    pub fn identity(scope: Vec<usize>, d: u32) -> Self {
        let perms = vec![(0..d).collect(); scope.len()];
        Constraint { scope, perms }
    }

    /// Whether the scope values `values` are permitted, decided by pulling
    /// each value back through its permutation and looking the preimage up in
    /// `base`.
    pub fn permits(&self, base: &Relation, values: &[u32]) -> bool {
        let mut preimage = Vec::with_capacity(values.len());
        for (perm, &v) in self.perms.iter().zip(values) {
            match perm.iter().position(|&x| x == v) {
                Some(t) => preimage.push(t as u32),
                None => return false,
            }
        }
        base.contains(&preimage)
    }

    pub fn position_of(&self, var: usize) -> Option<usize> {
        self.scope.iter().position(|&v| v == var)
    }
}

/// Applies every coordinate permutation of `constraint` to `base`.
pub fn materialize(constraint: &Constraint, base: &Relation) -> Result<Relation> {
    constraint
        .perms
        .iter()
        .enumerate()
        .try_fold(base.clone(), |rel, (coord, perm)| {
            if perm.iter().enumerate().all(|(i, &v)| v as usize == i) {
                Ok(rel)
            } else {
                apply_permutation(&rel, coord, perm)
            }
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Circulant,
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub params: RbParams,
    base_kind: BaseKind,
    base: Relation,
    pub constraints: Vec<Constraint>,
    pub planted: Option<Assignment>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum BaseFile {
    Circulant { b: u32 },
    Explicit { tuples: Vec<Vec<u32>> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    format: u32,
    params: RbParams,
    base: BaseFile,
    constraints: Vec<Constraint>,
    planted: Option<Assignment>,
}

impl Instance {
    /// Assembles and validates an instance. `params.m` must equal the number
    /// of constraints.
    pub fn new(
        params: RbParams,
        base_kind: BaseKind,
        base: Relation,
        constraints: Vec<Constraint>,
        planted: Option<Assignment>,
    ) -> Result<Self> {
        let inst = Instance {
            params,
            base_kind,
            base,
            constraints,
            planted,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Instance over the circulant base relation for `params`.
    pub fn circulant(params: RbParams, constraints: Vec<Constraint>) -> Result<Self> {
        let base = gen_base_relation(params.d, params.k, params.b)?;
        let params = params.with_constraint_count(constraints.len());
        Instance::new(params, BaseKind::Circulant, base, constraints, None)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RbError::MalformedInstance(msg));
        let p = &self.params;
        p.check()?;
        if p.n > MAX_VARIABLES {
            return bad(format!("n = {} exceeds {MAX_VARIABLES}", p.n));
        }
        if p.k > p.n && !self.constraints.is_empty() {
            return bad(format!("arity {} exceeds variable count {}", p.k, p.n));
        }
        if self.base.arity() != p.k || self.base.d() != p.d {
            return bad("base relation shape does not match params".into());
        }
        self.base.check_regular(p.b)?;
        if p.m != self.constraints.len() {
            return bad(format!(
                "params.m = {} but {} constraints",
                p.m,
                self.constraints.len()
            ));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.scope.len() != p.k || c.perms.len() != p.k {
                return bad(format!(
                    "constraint {i}: scope/perms length must be {}",
                    p.k
                ));
            }
            for (j, &v) in c.scope.iter().enumerate() {
                if v >= p.n {
                    return bad(format!("constraint {i}: variable {v} out of range"));
                }
                if c.scope[..j].contains(&v) {
                    return bad(format!("constraint {i}: repeated variable {v}"));
                }
            }
            for perm in &c.perms {
                check_permutation(perm, p.d)?;
            }
        }
        if let Some(sigma) = &self.planted {
            self.check_assignment(sigma)?;
            if let Some(i) = self.violated_constraints(sigma).first() {
                return bad(format!("planted assignment violates constraint {i}"));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn d(&self) -> u32 {
        self.params.d
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn base(&self) -> &Relation {
        &self.base
    }

    pub fn base_kind(&self) -> BaseKind {
        self.base_kind
    }

    pub fn materialized(&self, index: usize) -> Relation {
        materialize(&self.constraints[index], &self.base)
            .expect("constraint permutations validated at construction")
    }

    pub fn check_assignment(&self, values: &[u32]) -> Result<()> {
        if values.len() != self.n() {
            return Err(RbError::MalformedInstance(format!(
                "assignment has {} values for {} variables",
                values.len(),
                self.n()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= self.d()) {
            return Err(RbError::MalformedInstance(format!(
                "value {v} outside [0, {})",
                self.d()
            )));
        }
        Ok(())
    }

    pub fn constraint_satisfied(&self, index: usize, values: &[u32]) -> bool {
        let c = &self.constraints[index];
        let local: Vec<u32> = c.scope.iter().map(|&v| values[v]).collect();
        c.permits(&self.base, &local)
    }

    /// Indices of constraints that `values` violates, ascending.
    pub fn violated_constraints(&self, values: &[u32]) -> Vec<usize> {
        (0..self.m())
            .filter(|&i| !self.constraint_satisfied(i, values))
            .collect()
    }

    pub fn satisfies(&self, values: &[u32]) -> bool {
        values.len() == self.n() && (0..self.m()).all(|i| self.constraint_satisfied(i, values))
    }

    /// Returns a copy with one constraint replaced; used by the symmetry
    /// mapping. The replacement must keep the same scope.
    pub(crate) fn with_constraint(&self, index: usize, constraint: Constraint) -> Self {
        let mut out = self.clone();
        out.constraints[index] = constraint;
        if let Some(sigma) = out.planted.take() {
            if out.satisfies(&sigma) {
                out.planted = Some(sigma);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let base = match self.base_kind {
            BaseKind::Circulant => BaseFile::Circulant { b: self.params.b },
            BaseKind::Explicit => BaseFile::Explicit {
                tuples: self.base.tuples().collect(),
            },
        };
        let file = InstanceFile {
            format: FORMAT_VERSION,
            params: self.params.clone(),
            base,
            constraints: self.constraints.clone(),
            planted: self.planted.clone(),
        };
        serde_json::to_string(&file).expect("instance serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        if file.format != FORMAT_VERSION {
            return Err(RbError::MalformedInstance(format!(
                "unsupported format version {}",
                file.format
            )));
        }
        file.params.check()?;
        let p = &file.params;
        let (base_kind, base) = match file.base {
            BaseFile::Circulant { b } => {
                if b != p.b {
                    return Err(RbError::MalformedInstance(format!(
                        "circulant b = {b} disagrees with params.b = {}",
                        p.b
                    )));
                }
                (BaseKind::Circulant, gen_base_relation(p.d, p.k, b)?)
            }
            BaseFile::Explicit { tuples } => (
                BaseKind::Explicit,
                Relation::from_tuples(p.k, p.d, &tuples)?,
            ),
        };
        Instance::new(file.params, base_kind, base, file.constraints, file.planted)
    }
}

/// Draws a random instance. With `planted`, a uniform assignment is drawn
/// first and each constraint's coordinate-1 permutation is post-composed with
/// a cyclic shift so that the assignment is permitted.
pub fn gen_instance(params: &RbParams, planted: bool) -> Result<Instance> {
    params.check()?;
    let (n, d, k) = (params.n, params.d, params.k);
    if n < k {
        return Err(RbError::InvalidParams(format!(
            "n = {n} is smaller than k = {k}"
        )));
    }
    if planted && k != 2 {
        return Err(RbError::Unsupported(format!(
            "planted generation requires k = 2, got {k}"
        )));
    }
    let base = gen_base_relation(d, k, params.b)?;

    let mut scope_rng = rng_stream(params.seed, Purpose::Scope, 0);
    let mut constraints = Vec::with_capacity(params.m);
    for i in 0..params.m {
        let mut scope = Vec::with_capacity(k);
        while scope.len() < k {
            let v = scope_rng.below_usize(n);
            if !scope.contains(&v) {
                scope.push(v);
            }
        }
        let mut perm_rng = rng_stream(params.seed, Purpose::Perm, i as u64);
        let mut perms = Vec::with_capacity(k);
        perms.push((0..d).collect());
        for _ in 1..k {
            perms.push(perm_rng.permutation(d));
        }
        constraints.push(Constraint { scope, perms });
    }

    let sigma = if planted {
        let mut rng = rng_stream(params.seed, Purpose::Planted, 0);
        let sigma: Assignment = (0..n).map(|_| rng.below(u64::from(d)) as u32).collect();
        for c in &mut constraints {
            let (a, target) = (sigma[c.scope[0]], sigma[c.scope[1]]);
            let row: Vec<u32> = (0..d).filter(|&t| base.contains(&[a, t])).collect();
            let t = row[rng.below_usize(row.len())];
            let shift = (target + d - c.perms[1][t as usize]) % d;
            for v in &mut c.perms[1] {
                *v = (*v + shift) % d;
            }
        }
        Some(sigma)
    } else {
        None
    };

    Instance::new(
        params.clone(),
        BaseKind::Circulant,
        base,
        constraints,
        sigma,
    )
}
