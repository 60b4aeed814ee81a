use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rb_core::analytics::{second_moment, thresholds};
use rb_core::encode::{encode_log, write_dimacs, write_dimacs_string};
use rb_core::harness::{
    persist, run_flip_suite, run_phase_sweep, run_threshold_suite, to_csv_string, to_json_string,
    ExperimentRecord, Format, RGrid, SweepConfig,
};
use rb_core::params::validate_alpha;
use rb_core::search::{
    degree_stats, near_solutions, self_unsat_analysis, NearMode, DEFAULT_BUDGET,
};
use rb_core::symmetry::{flip_sat_to_unsat, flip_unsat_to_sat};
use rb_core::{
    derive_params, derive_params_with_domain, gen_instance, solve, Density, Instance, RbParams,
    SolveMode, Status,
};

#[derive(Parser)]
#[command(name = "rb", version, about = "Model RB random CSP workbench")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search node budget.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    /// Record format for `sweep` and `suite`.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Worker threads for trial-level parallelism.
    #[arg(long, global = true, env = "RB_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance as JSON.
    Gen {
        #[command(flatten)]
        ensemble: Ensemble,
        /// Build in a uniformly drawn solution (k = 2 only).
        #[arg(long)]
        planted: bool,
    },
    /// Decide, count or enumerate. Exit code 10 = SAT, 20 = UNSAT, 30 = budget exhausted.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Decide)]
        mode: Mode,
        /// Solution cap for `--mode enumerate`.
        #[arg(long, default_value_t = 10)]
        cap: usize,
    },
    /// Self-unsatisfiability, degree statistics and alpha conditions.
    Analyze {
        instance: PathBuf,
        /// Also count the near-solutions of this constraint.
        #[arg(long)]
        near: Option<usize>,
    },
    /// Apply one satisfiability-flipping symmetry mapping; the new instance goes to --out.
    Flip {
        instance: PathBuf,
        #[arg(long, value_enum)]
        direction: FlipDirection,
        /// Branching variable.
        #[arg(long)]
        x: usize,
        /// Comma-separated values whose subproblems must not change.
        #[arg(long, value_delimiter = ',')]
        avoid: Vec<u32>,
        /// Where to print the flip report; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Log-encode an instance to DIMACS CNF.
    Encode { instance: PathBuf },
    /// Expected counts, second-moment terms and thresholds.
    Moments {
        #[command(flatten)]
        ensemble: Ensemble,
        /// Write the F(S) terms as CSV here.
        #[arg(long)]
        terms: Option<PathBuf>,
    },
    /// Empirical Pr[SAT] over a density grid.
    Sweep {
        #[command(flatten)]
        ensemble: Ensemble,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0.6)]
        min: f64,
        #[arg(long, default_value_t = 1.4)]
        max: f64,
        #[arg(long, default_value_t = 9)]
        steps: usize,
        /// Read --min/--max as absolute densities instead of multiples of r_cr.
        #[arg(long)]
        absolute: bool,
        /// Record wall time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Threshold or flip suite at the threshold density.
    Suite {
        #[arg(value_enum)]
        kind: SuiteKind,
        #[command(flatten)]
        ensemble: Ensemble,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Planted instances (flip suite).
        #[arg(long)]
        planted: bool,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args, Clone)]
struct Ensemble {
    #[arg(short, long)]
    n: usize,
    /// Domain size; overrides --alpha.
    #[arg(short, long)]
    d: Option<u32>,
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    #[arg(short, long, default_value_t = 0.5)]
    p: f64,
    #[arg(short, long, default_value_t = 2)]
    k: usize,
    /// Constraint density r; the threshold density when omitted.
    #[arg(short, long)]
    r: Option<f64>,
}

impl Ensemble {
    fn params(&self, seed: u64) -> Result<RbParams> {
        let density = self.r.map_or(Density::Threshold, Density::Explicit);
        Ok(match self.d {
            Some(d) => derive_params_with_domain(self.n, d, self.p, self.k, seed, density)?,
            None => derive_params(self.n, self.alpha, self.p, self.k, seed, density)?,
        })
    }

    fn config(&self, trials: usize, seed: u64, budget: u64, timing: bool) -> SweepConfig {
        SweepConfig {
            n: self.n,
            alpha: self.alpha,
            d: self.d,
            p: self.p,
            k: self.k,
            grid: RGrid::Critical {
                min: 0.6,
                max: 1.4,
                steps: 9,
            },
            trials,
            seed,
            budget,
            planted: false,
            timing,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Decide,
    Count,
    Enumerate,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlipDirection {
    SatToUnsat,
    UnsatToSat,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteKind {
    Threshold,
    Flip,
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("loading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => write_stdout(&format!("{}\n", text.trim_end())),
    }
}

/// A closed pipe (e.g. `rb ... | head`) is not an error.
fn write_stdout(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn emit_records(cli: &Cli, records: &[ExperimentRecord]) -> Result<()> {
    let format = match cli.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    match &cli.out {
        Some(path) => persist(records, path, format)?,
        None => {
            let text = match format {
                Format::Csv => to_csv_string(records)?,
                Format::Json => to_json_string(records)?,
            };
            write_stdout(&text)?;
        }
    }
    for r in records {
        let (lo, hi) = r.sat_interval();
        eprintln!(
            "point {} r={:.4} m={} avoid={}: SAT {}/{} [{lo:.3}, {hi:.3}], alpha conditions {}",
            r.point_index,
            r.r,
            r.m,
            r.avoid_size,
            r.sat_count,
            r.decided(),
            if r.alpha_conditions_hold() {
                "hold"
            } else {
                "violated"
            }
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct Analysis {
    self_unsat: rb_core::search::SelfUnsatReport,
    degrees: rb_core::search::DegreeReport,
    alpha: rb_core::params::AlphaReport,
    near: Option<rb_core::search::NearSolutionReport>,
}

#[derive(Serialize)]
struct Moments {
    params: RbParams,
    thresholds: rb_core::analytics::Thresholds,
    alpha: rb_core::params::AlphaReport,
    moments: rb_core::analytics::MomentReport,
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Gen { ensemble, planted } => {
            let inst = gen_instance(&ensemble.params(cli.seed)?, *planted)?;
            emit(out, &inst.to_json())?;
        }
        Command::Solve {
            instance,
            mode,
            cap,
        } => {
            let inst = read_instance(instance)?;
            let mode = match mode {
                Mode::Decide => SolveMode::Decide,
                Mode::Count => SolveMode::Count,
                Mode::Enumerate => SolveMode::Enumerate(*cap),
            };
            let report = solve(&inst, mode, cli.budget);
            emit(out, &report.to_json())?;
            return Ok(ExitCode::from(match report.status {
                Status::Sat => 10,
                Status::Unsat => 20,
                Status::BudgetExhausted => 30,
            }));
        }
        Command::Analyze { instance, near } => {
            let inst = read_instance(instance)?;
            let near = near
                .map(|c| near_solutions(&inst, c, NearMode::Count, cli.budget))
                .transpose()?;
            let analysis = Analysis {
                self_unsat: self_unsat_analysis(&inst, cli.budget)?,
                degrees: degree_stats(&inst),
                alpha: validate_alpha(&inst.params),
                near,
            };
            emit(out, &to_json(&analysis)?)?;
        }
        Command::Flip {
            instance,
            direction,
            x,
            avoid,
            report,
        } => {
            let inst = read_instance(instance)?;
            let (post, outcome) = match direction {
                FlipDirection::SatToUnsat => {
                    let found = solve(&inst, SolveMode::Decide, cli.budget);
                    let Some(sol) = found.solutions.first() else {
                        bail!("instance has no solution to break ({:?})", found.status);
                    };
                    flip_sat_to_unsat(&inst, sol, *x, avoid, cli.budget)?
                }
                FlipDirection::UnsatToSat => flip_unsat_to_sat(&inst, *x, avoid, cli.budget)?,
            };
            if let Some(path) = out {
                emit(Some(path), &post.to_json())?;
            }
            emit(report.as_deref(), &outcome.to_json())?;
        }
        Command::Encode { instance } => {
            let cnf = encode_log(&read_instance(instance)?);
            match out {
                Some(path) => write_dimacs(&cnf, path)?,
                None => write_stdout(&write_dimacs_string(&cnf))?,
            }
        }
        Command::Moments { ensemble, terms } => {
            let params = ensemble.params(cli.seed)?;
            let moments = second_moment(&params)?;
            if let Some(path) = terms {
                std::fs::write(path, moments.f_terms_csv())?;
            }
            let report = Moments {
                thresholds: thresholds(params.p_eff, params.k, params.alpha, params.n, params.d),
                alpha: validate_alpha(&params),
                params,
                moments,
            };
            emit(out, &to_json(&report)?)?;
        }
        Command::Sweep {
            ensemble,
            trials,
            min,
            max,
            steps,
            absolute,
            timing,
        } => {
            let mut config = ensemble.config(*trials, cli.seed, cli.budget, *timing);
            config.grid = if *absolute {
                RGrid::Absolute {
                    min: *min,
                    max: *max,
                    steps: *steps,
                }
            } else {
                RGrid::Critical {
                    min: *min,
                    max: *max,
                    steps: *steps,
                }
            };
            emit_records(cli, &run_phase_sweep(&config)?)?;
        }
        Command::Suite {
            kind,
            ensemble,
            trials,
            planted,
            timing,
        } => {
            let mut config = ensemble.config(*trials, cli.seed, cli.budget, *timing);
            config.planted = *planted;
            let records = match kind {
                SuiteKind::Threshold => vec![run_threshold_suite(&config)?],
                SuiteKind::Flip => run_flip_suite(&config)?,
            };
            emit_records(cli, &records)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("rb: cannot set up {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rb: {e:#}");
            ExitCode::from(2)
        }
    }
}
