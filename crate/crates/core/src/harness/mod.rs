//! Seeded experiments over random ensembles: phase sweeps, the threshold
//! suite and the flip suite, plus CSV/JSON persistence of their records.
//!
//! Trial `t` at grid point `i` uses the instance seed
//! [`trial_seed`]`(config.seed, i, t)`, so any single trial can be re-run in
//! isolation and parallel runs produce the same records as serial ones.

mod persist;

pub use persist::{
    from_csv_str, from_json_str, load, persist, to_csv_string, to_json_string, Format,
    PersistError, CSV_HEADER, SCHEMA_VERSION,
};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::expected_solution_count;
use crate::error::{RbError, Result};
use crate::instance::{gen_instance, Instance};
use crate::params::{derive_params, derive_params_with_domain, validate_alpha, Density, RbParams};
use crate::rng::{rng_stream, Purpose};
use crate::search::{self_unsat_analysis, solve, SolveMode, Status, DEFAULT_BUDGET};
use crate::symmetry::{flip_sat_to_unsat, flip_unsat_to_sat, FlipOutcome};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at 95%.
/// With no trials the interval is `[0, 1]`.
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

pub fn trial_seed(config_seed: u64, point: usize, trial: usize) -> u64 {
    let index = ((point as u64) << 32) | trial as u64;
    rng_stream(config_seed, Purpose::Harness, index).next_u64()
}

/// Density grid for a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RGrid {
    /// `steps` evenly spaced densities from `min` to `max` inclusive.
    Absolute { min: f64, max: f64, steps: usize },
    /// As `Absolute`, in multiples of `r_cr`.
    Critical { min: f64, max: f64, steps: usize },
    /// `r_threshold + offset` for each offset.
    ThresholdOffsets { offsets: Vec<f64> },
}

fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                max
            } else {
                min + (max - min) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub alpha: f64,
    /// Overrides `round(n^alpha)` when set.
    pub d: Option<u32>,
    pub p: f64,
    pub k: usize,
    pub grid: RGrid,
    pub trials: usize,
    pub seed: u64,
    pub budget: u64,
    /// Draw planted (forced satisfiable) instances; only the flip suite uses this.
    #[serde(default)]
    pub planted: bool,
    /// Record wall time; off by default so output bytes depend only on the seed.
    #[serde(default)]
    pub timing: bool,
}

impl SweepConfig {
    /// `p = 1/2`, `k = 2`, the given domain size and a `0.6..=1.4 r_cr` grid.
    pub fn reference(n: usize, d: u32, trials: usize, seed: u64) -> Self {
        SweepConfig {
            n,
            alpha: (d as f64).ln() / (n as f64).ln(),
            d: Some(d),
            p: 0.5,
            k: 2,
            grid: RGrid::Critical {
                min: 0.6,
                max: 1.4,
                steps: 9,
            },
            trials,
            seed,
            budget: DEFAULT_BUDGET,
            planted: false,
            timing: false,
        }
    }

    /// Threshold-mode parameters of the ensemble.
    pub fn base_params(&self) -> Result<RbParams> {
        match self.d {
            Some(d) => {
                derive_params_with_domain(self.n, d, self.p, self.k, self.seed, Density::Threshold)
            }
            None => derive_params(
                self.n,
                self.alpha,
                self.p,
                self.k,
                self.seed,
                Density::Threshold,
            ),
        }
    }

    pub fn densities(&self, base: &RbParams) -> Result<Vec<f64>> {
        let grid = match &self.grid {
            RGrid::Absolute { min, max, steps } => linspace(*min, *max, *steps),
            RGrid::Critical { min, max, steps } => linspace(*min, *max, *steps)
                .into_iter()
                .map(|x| x * base.r_cr)
                .collect(),
            RGrid::ThresholdOffsets { offsets } => offsets.iter().map(|o| base.r + o).collect(),
        };
        if grid.is_empty() {
            return Err(RbError::InvalidParams(
                "density grid needs at least one step".into(),
            ));
        }
        if grid.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(RbError::InvalidParams(
                "densities must be finite and non-negative".into(),
            ));
        }
        Ok(grid)
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(RbError::InvalidParams("trials must be >= 1".into()));
        }
        if self.budget == 0 {
            return Err(RbError::InvalidParams("budget must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Sweep,
    Threshold,
    Flip,
}

/// One row of experiment output. Only raw counts are stored; rates and
/// intervals are computed from them on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: Experiment,
    pub point_index: usize,
    /// Configuration seed; trial `t` used `trial_seed(seed, point_index, t)`.
    pub seed: u64,
    pub n: usize,
    pub d: u32,
    pub k: usize,
    pub p: f64,
    pub p_eff: f64,
    pub alpha: f64,
    pub r: f64,
    pub m: usize,
    /// `|avoid|` for flip records, 0 otherwise.
    pub avoid_size: usize,
    pub trials: u64,
    pub sat_count: u64,
    pub unsat_count: u64,
    pub budget_exhausted_count: u64,
    /// Trials whose solution count is known exactly.
    pub counted_trials: u64,
    pub total_solutions: u64,
    pub total_solutions_sq: u64,
    pub unique_solution_count: u64,
    /// UNSAT trials whose self-unsatisfiability analysis finished.
    pub self_unsat_checked: u64,
    pub self_unsat_formula_count: u64,
    /// Trials with at most one solution (the flip class).
    pub class_count: u64,
    pub flip_s2u_attempts: u64,
    pub flip_s2u_success: u64,
    pub flip_u2s_attempts: u64,
    pub flip_u2s_success: u64,
    /// unsat-to-sat flips after which the near-solution is a solution.
    pub witness_repaired: u64,
    /// Flips whose result has two or more solutions.
    pub class_exit_count: u64,
    pub swap_failures: u64,
    pub no_self_unsat_count: u64,
    pub flip_budget_exhausted: u64,
    /// Flips with both swapped values outside the avoid set.
    pub invariance_checks: u64,
    pub invariance_passes: u64,
    pub u_in_avoid_count: u64,
    pub total_nodes: u64,
    pub wall_time_ms: u64,
    /// `E[X]` at the rounded constraint count.
    pub expected_solutions: f64,
    pub alpha_gt_1: bool,
    pub alpha_gt_omega_bound: bool,
    pub alpha_gt_degree_bound: bool,
    pub alpha_gt_self_unsat_bound: bool,
    pub k_condition: bool,
    pub omega_negative: bool,
}

impl ExperimentRecord {
    fn new(experiment: Experiment, point_index: usize, seed: u64, params: &RbParams) -> Self {
        let alpha = validate_alpha(params);
        ExperimentRecord {
            experiment,
            point_index,
            seed,
            n: params.n,
            d: params.d,
            k: params.k,
            p: params.p,
            p_eff: params.p_eff,
            alpha: params.alpha,
            r: params.r,
            m: params.m,
            avoid_size: 0,
            trials: 0,
            sat_count: 0,
            unsat_count: 0,
            budget_exhausted_count: 0,
            counted_trials: 0,
            total_solutions: 0,
            total_solutions_sq: 0,
            unique_solution_count: 0,
            self_unsat_checked: 0,
            self_unsat_formula_count: 0,
            class_count: 0,
            flip_s2u_attempts: 0,
            flip_s2u_success: 0,
            flip_u2s_attempts: 0,
            flip_u2s_success: 0,
            witness_repaired: 0,
            class_exit_count: 0,
            swap_failures: 0,
            no_self_unsat_count: 0,
            flip_budget_exhausted: 0,
            invariance_checks: 0,
            invariance_passes: 0,
            u_in_avoid_count: 0,
            total_nodes: 0,
            wall_time_ms: 0,
            expected_solutions: expected_solution_count(params),
            alpha_gt_1: alpha.exceeds[0],
            alpha_gt_omega_bound: alpha.exceeds[1],
            alpha_gt_degree_bound: alpha.exceeds[2],
            alpha_gt_self_unsat_bound: alpha.exceeds[3],
            k_condition: alpha.k_condition,
            omega_negative: alpha.omega_negative,
        }
    }

    /// Trials with a SAT or UNSAT verdict.
    pub fn decided(&self) -> u64 {
        self.sat_count + self.unsat_count
    }

    pub fn sat_rate(&self) -> f64 {
        self.sat_count as f64 / self.decided() as f64
    }

    pub fn sat_interval(&self) -> (f64, f64) {
        wilson(self.sat_count, self.decided())
    }

    pub fn unique_rate(&self) -> f64 {
        self.unique_solution_count as f64 / self.counted_trials as f64
    }

    pub fn unique_interval(&self) -> (f64, f64) {
        wilson(self.unique_solution_count, self.counted_trials)
    }

    /// Among UNSAT trials.
    pub fn self_unsat_rate(&self) -> f64 {
        self.self_unsat_formula_count as f64 / self.self_unsat_checked as f64
    }

    pub fn self_unsat_interval(&self) -> (f64, f64) {
        wilson(self.self_unsat_formula_count, self.self_unsat_checked)
    }

    pub fn s2u_success_rate(&self) -> f64 {
        self.flip_s2u_success as f64 / self.flip_s2u_attempts as f64
    }

    pub fn s2u_interval(&self) -> (f64, f64) {
        wilson(self.flip_s2u_success, self.flip_s2u_attempts)
    }

    pub fn u2s_success_rate(&self) -> f64 {
        self.flip_u2s_success as f64 / self.flip_u2s_attempts as f64
    }

    pub fn u2s_interval(&self) -> (f64, f64) {
        wilson(self.flip_u2s_success, self.flip_u2s_attempts)
    }

    pub fn class_exit_rate(&self) -> f64 {
        self.class_exit_count as f64 / (self.flip_s2u_attempts + self.flip_u2s_attempts) as f64
    }

    /// Mean exact solution count over counted trials.
    pub fn mean_solutions(&self) -> f64 {
        self.total_solutions as f64 / self.counted_trials as f64
    }

    /// Standard error of [`Self::mean_solutions`].
    pub fn solutions_std_err(&self) -> f64 {
        let c = self.counted_trials as f64;
        if c < 2.0 {
            return f64::NAN;
        }
        let mean = self.mean_solutions();
        let var = (self.total_solutions_sq as f64 - c * mean * mean) / (c - 1.0);
        (var.max(0.0) / c).sqrt()
    }

    pub fn mean_nodes(&self) -> f64 {
        self.total_nodes as f64 / self.trials as f64
    }

    pub fn alpha_conditions_hold(&self) -> bool {
        self.alpha_gt_1
            && self.alpha_gt_omega_bound
            && self.alpha_gt_degree_bound
            && self.alpha_gt_self_unsat_bound
            && self.k_condition
            && self.omega_negative
    }

    fn add_verdict(&mut self, status: Status, nodes: u64) {
        self.trials += 1;
        self.total_nodes += nodes;
        match status {
            Status::Sat => self.sat_count += 1,
            Status::Unsat => self.unsat_count += 1,
            Status::BudgetExhausted => self.budget_exhausted_count += 1,
        }
    }

    fn add_count(&mut self, count: u64) {
        self.counted_trials += 1;
        self.total_solutions = self.total_solutions.saturating_add(count);
        self.total_solutions_sq = self
            .total_solutions_sq
            .saturating_add(count.saturating_mul(count));
        if count == 1 {
            self.unique_solution_count += 1;
        }
    }
}

fn trial_instance(
    params: &RbParams,
    config_seed: u64,
    point: usize,
    trial: usize,
) -> Result<Instance> {
    gen_instance(
        &params.with_seed(trial_seed(config_seed, point, trial)),
        false,
    )
}

fn elapsed_ms(start: Instant, timing: bool) -> u64 {
    if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

/// Empirical Pr[SAT] at each grid density (decision mode), sorted by `r`.
pub fn run_phase_sweep(config: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    config.check()?;
    let base = config.base_params()?;
    let mut records = Vec::new();
    for (point, r) in config.densities(&base)?.into_iter().enumerate() {
        let start = Instant::now();
        let params = base.with_density(r)?;
        let verdicts = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let inst = trial_instance(&params, config.seed, point, t)?;
                let report = solve(&inst, SolveMode::Decide, config.budget);
                Ok((report.status, report.nodes))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut record = ExperimentRecord::new(Experiment::Sweep, point, config.seed, &params);
        for (status, nodes) in verdicts {
            record.add_verdict(status, nodes);
        }
        record.wall_time_ms = elapsed_ms(start, config.timing);
        records.push(record);
    }
    records.sort_by(|a, b| a.r.total_cmp(&b.r));
    Ok(records)
}

struct ThresholdTrial {
    status: Status,
    nodes: u64,
    count: Option<u64>,
    self_unsat: Option<bool>,
}

/// Exact counting at the threshold density: Pr[SAT], Pr[exactly one
/// solution], Pr[self-unsatisfiable formula | UNSAT] and the mean of `X`.
pub fn run_threshold_suite(config: &SweepConfig) -> Result<ExperimentRecord> {
    config.check()?;
    let params = config.base_params()?;
    let start = Instant::now();
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let inst = trial_instance(&params, config.seed, 0, t)?;
            let report = solve(&inst, SolveMode::Count, config.budget);
            let self_unsat = if report.status == Status::Unsat {
                self_unsat_analysis(&inst, config.budget)
                    .ok()
                    .map(|r| r.is_self_unsat_formula)
            } else {
                None
            };
            Ok(ThresholdTrial {
                status: report.status,
                nodes: report.nodes,
                count: report.count,
                self_unsat,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut record = ExperimentRecord::new(Experiment::Threshold, 0, config.seed, &params);
    for t in trials {
        record.add_verdict(t.status, t.nodes);
        if let Some(c) = t.count {
            record.add_count(c);
        }
        if let Some(f) = t.self_unsat {
            record.self_unsat_checked += 1;
            record.self_unsat_formula_count += u64::from(f);
        }
    }
    record.wall_time_ms = elapsed_ms(start, config.timing);
    Ok(record)
}

/// Avoid-set sizes used by the flip suite: 0 and `ceil(sqrt d)`.
pub fn flip_avoid_sizes(d: u32) -> [usize; 2] {
    [0, (d as f64).sqrt().ceil() as usize]
}

/// Outcome of one flip attempt inside the suite.
#[derive(Debug, Clone)]
pub enum FlipAttempt {
    Done(Box<FlipOutcome>, bool),
    NoSwapPair,
    NoSelfUnsat,
    BudgetExhausted,
}

struct FlipTrial {
    status: Status,
    nodes: u64,
    count: Option<u64>,
    attempts: Vec<Option<FlipAttempt>>,
}

/// Random constrained variable and random avoid set of the given size.
fn flip_inputs(inst: &Instance, seed: u64, avoid_size: usize) -> (usize, Vec<u32>) {
    let mut rng = rng_stream(seed, Purpose::Harness, avoid_size as u64);
    let mut constrained: Vec<usize> = inst
        .constraints
        .iter()
        .flat_map(|c| c.scope.clone())
        .collect();
    constrained.sort_unstable();
    constrained.dedup();
    let x = constrained[rng.below_usize(constrained.len())];
    let mut avoid = rng.permutation(inst.d());
    avoid.truncate(avoid_size);
    avoid.sort_unstable();
    (x, avoid)
}

/// Runs the appropriate directional flip on an instance with at most one
/// solution. Returns `None` for instances outside the class.
pub fn flip_trial(
    inst: &Instance,
    solutions: &[Vec<u32>],
    seed: u64,
    avoid_size: usize,
    budget: u64,
) -> Option<FlipAttempt> {
    if solutions.len() > 1 || inst.m() == 0 {
        return None;
    }
    let (x, avoid) = flip_inputs(inst, seed, avoid_size);
    let result = match solutions.first() {
        Some(sol) => flip_sat_to_unsat(inst, sol, x, &avoid, budget),
        None => flip_unsat_to_sat(inst, x, &avoid, budget),
    };
    Some(match result {
        Ok((post, outcome)) => {
            let repaired = outcome
                .witness
                .as_ref()
                .is_some_and(|tau| post.satisfies(tau));
            FlipAttempt::Done(Box::new(outcome), repaired)
        }
        Err(RbError::NoSwapPair { .. }) => FlipAttempt::NoSwapPair,
        Err(RbError::NoSelfUnsatConstraint(_)) => FlipAttempt::NoSelfUnsat,
        Err(RbError::BudgetExhausted { .. }) => FlipAttempt::BudgetExhausted,
        Err(e) => unreachable!("flip preconditions hold by construction: {e}"),
    })
}

/// Flips at the threshold density on the unique-solution-or-UNSAT class,
/// one record per avoid-set size.
pub fn run_flip_suite(config: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    config.check()?;
    if config.k != 2 {
        return Err(RbError::Unsupported("the flip suite needs k = 2".into()));
    }
    let params = config.base_params()?;
    let sizes = flip_avoid_sizes(params.d);
    let start = Instant::now();
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(config.seed, 0, t);
            let inst = gen_instance(&params.with_seed(seed), config.planted)?;
            let report = solve(&inst, SolveMode::Enumerate(2), config.budget);
            let count = report
                .status
                .is_decided()
                .then_some(report.solutions.len() as u64);
            let attempts = if report.status.is_decided() {
                sizes
                    .iter()
                    .map(|&a| flip_trial(&inst, &report.solutions, seed, a, config.budget))
                    .collect()
            } else {
                vec![None; sizes.len()]
            };
            Ok(FlipTrial {
                status: report.status,
                nodes: report.nodes,
                count,
                attempts,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let wall = elapsed_ms(start, config.timing);
    let mut records = Vec::new();
    for (i, &size) in sizes.iter().enumerate() {
        let mut record = ExperimentRecord::new(Experiment::Flip, i, config.seed, &params);
        record.avoid_size = size;
        record.wall_time_ms = wall;
        for t in &trials {
            record.add_verdict(t.status, t.nodes);
            if t.count.is_some_and(|c| c <= 1) {
                record.class_count += 1;
                if t.count == Some(1) {
                    record.unique_solution_count += 1;
                }
            }
            let Some(attempt) = &t.attempts[i] else {
                continue;
            };
            tally_flip(&mut record, attempt, t.count == Some(1));
        }
        records.push(record);
    }
    Ok(records)
}

fn tally_flip(record: &mut ExperimentRecord, attempt: &FlipAttempt, sat_to_unsat: bool) {
    if sat_to_unsat {
        record.flip_s2u_attempts += 1;
    } else {
        record.flip_u2s_attempts += 1;
    }
    match attempt {
        FlipAttempt::Done(outcome, repaired) => {
            if outcome.changed_satisfiability() {
                if sat_to_unsat {
                    record.flip_s2u_success += 1;
                } else {
                    record.flip_u2s_success += 1;
                }
            }
            if outcome.post_count.is_some_and(|c| c >= 2) {
                record.class_exit_count += 1;
            }
            if outcome.post_status == Status::BudgetExhausted {
                record.flip_budget_exhausted += 1;
            }
            record.witness_repaired += u64::from(*repaired);
            if outcome.avoid.contains(&outcome.u) {
                record.u_in_avoid_count += 1;
            }
            if outcome.avoids_swap_values() {
                record.invariance_checks += 1;
                record.invariance_passes += u64::from(outcome.subproblems_unchanged);
            }
        }
        FlipAttempt::NoSwapPair => record.swap_failures += 1,
        FlipAttempt::NoSelfUnsat => record.no_self_unsat_count += 1,
        FlipAttempt::BudgetExhausted => record.flip_budget_exhausted += 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // Reference values from statsmodels' proportion_confint(method="wilson").
        let (lo, hi) = wilson(5, 10);
        assert!((lo - 0.236_593_090_512_563_94).abs() < 1e-12, "{lo}");
        assert!((hi - 0.763_406_909_487_436_1).abs() < 1e-12, "{hi}");
        let (lo, hi) = wilson(0, 10);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.277_532_799_862_889_26).abs() < 1e-12, "{hi}");
        let (lo, hi) = wilson(10, 10);
        assert!((lo - 0.722_467_200_137_110_6).abs() < 1e-12, "{lo}");
        assert_eq!(hi, 1.0);
        assert_eq!(wilson(0, 0), (0.0, 1.0));
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = linspace(0.6, 1.4, 9);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 0.6);
        assert_eq!(g[8], 1.4);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let mut seeds: Vec<u64> = (0..4)
            .flat_map(|p| (0..100).map(move |t| trial_seed(1, p, t)))
            .collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 400);
    }

    #[test]
    fn rejects_empty_config() {
        let mut c = SweepConfig::reference(6, 4, 0, 1);
        assert!(run_phase_sweep(&c).is_err());
        c.trials = 2;
        c.grid = RGrid::ThresholdOffsets { offsets: vec![] };
        assert!(run_phase_sweep(&c).is_err());
    }

    #[test]
    fn small_sweep_conserves_trials() {
        let mut c = SweepConfig::reference(6, 4, 20, 3);
        c.grid = RGrid::Critical {
            min: 0.5,
            max: 1.5,
            steps: 3,
        };
        let records = run_phase_sweep(&c).unwrap();
        assert_eq!(records.len(), 3);
        for rec in &records {
            assert_eq!(rec.trials, 20);
            assert_eq!(
                rec.sat_count + rec.unsat_count + rec.budget_exhausted_count,
                rec.trials
            );
            assert_eq!(rec.wall_time_ms, 0);
        }
        assert!(records.windows(2).all(|w| w[0].r <= w[1].r));
        assert!(records[0].sat_rate() >= records[2].sat_rate());
    }

    #[test]
    fn tiny_budget_never_fabricates() {
        let mut c = SweepConfig::reference(8, 8, 10, 3);
        c.budget = 3;
        c.grid = RGrid::Critical {
            min: 1.0,
            max: 1.0,
            steps: 1,
        };
        let rec = &run_phase_sweep(&c).unwrap()[0];
        assert_eq!(rec.budget_exhausted_count, 10);
        assert_eq!(rec.sat_count + rec.unsat_count, 0);
    }

    #[test]
    fn trial_reproduces_from_its_seed() {
        let c = SweepConfig::reference(6, 4, 8, 11);
        let rec = run_threshold_suite(&c).unwrap();
        let params = c.base_params().unwrap();
        let mut total = 0;
        for t in 0..8 {
            let inst = gen_instance(&params.with_seed(trial_seed(11, 0, t)), false).unwrap();
            total += solve(&inst, SolveMode::Count, DEFAULT_BUDGET)
                .count
                .unwrap();
        }
        assert_eq!(rec.total_solutions, total);
        assert_eq!(rec.counted_trials, 8);
        assert!(rec.self_unsat_checked <= rec.unsat_count);
    }

    #[test]
    fn flip_suite_small() {
        let c = SweepConfig::reference(6, 9, 30, 5);
        let records = run_flip_suite(&c).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[1].avoid_size, 3);
        for rec in &records {
            assert_eq!(rec.invariance_checks, rec.invariance_passes);
            assert!(
                rec.flip_s2u_attempts + rec.flip_u2s_attempts <= rec.class_count,
                "{rec:?}"
            );
            assert!(rec.flip_s2u_success <= rec.flip_s2u_attempts);
        }
    }

    #[test]
    fn std_err_of_constant_sample_is_zero() {
        let params = derive_params_with_domain(4, 4, 0.5, 2, 0, Density::Threshold).unwrap();
        let mut rec = ExperimentRecord::new(Experiment::Threshold, 0, 0, &params);
        for _ in 0..5 {
            rec.add_count(3);
        }
        assert_eq!(rec.mean_solutions(), 3.0);
        assert_eq!(rec.solutions_std_err(), 0.0);
    }
}
