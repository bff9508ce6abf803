//! Batch front-end for radial Neumann problems on annuli: loads problem
//! configs, runs the constants, hypothesis-check, solve and non-existence
//! workflows, and writes JSON, CSV and SVG outputs.

pub mod config;
pub mod error;
pub mod plot;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use annulus_core::hypothesis::{
    check_ladder, check_nonexistence, check_theorem_ellyptic, check_theorem_ellyptic2,
    check_theorem_multi2, LadderMode, RadiiLadder,
};
use annulus_core::solver::{multi_solve, reconstruct_radial, solve_from_constants, sweep_seeds};
use log::info;
use serde::Serialize;

pub use config::{Problem, ProblemConfig};
pub use error::{exit, CliError, ConfigError};
pub use report::{CheckBundle, ConstantsReport, NonexistReport, SolveSummary};

use error::io_err;
use report::{Norms, SolutionEntry, Sweep, SweepSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Constants,
    Check,
    Solve,
    Nonexist,
    Example,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    /// Exit with [`exit::HYPOTHESIS_FAIL`] when a checked hypothesis fails.
    pub strict: bool,
}

/// Text for the terminal and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

pub fn run(opts: &RunOptions) -> Result<Outcome, CliError> {
    if opts.command == Command::Example {
        if opts.config.is_some() {
            return Err(CliError::Usage(
                "`example` uses the built-in problem and takes no --config".into(),
            ));
        }
        let out = opts
            .out
            .as_deref()
            .ok_or_else(|| CliError::Usage("`example` needs --out DIR".into()))?;
        return cmd_example(out, opts.strict);
    }
    let path = opts
        .config
        .as_deref()
        .ok_or_else(|| CliError::Usage("this command needs --config FILE".into()))?;
    let problem = ProblemConfig::load(path)?;
    let out = opts.out.as_deref();
    match opts.command {
        Command::Constants => {
            let report = cmd_constants(&problem);
            if let Some(dir) = out {
                write_json(dir, "constants.json", &report)?;
            }
            Ok(Outcome {
                text: report.to_string(),
                exit_code: exit::SUCCESS,
            })
        }
        Command::Check => {
            let bundle = cmd_check(&problem)?;
            if let Some(dir) = out {
                write_json(dir, "check.json", &bundle)?;
            }
            Ok(Outcome {
                exit_code: check_exit(&bundle, opts.strict),
                text: bundle.to_string(),
            })
        }
        Command::Solve => {
            let dir = out.ok_or_else(|| CliError::Usage("`solve` needs --out DIR".into()))?;
            let summary = cmd_solve(&problem, dir)?;
            Ok(Outcome {
                exit_code: solve_exit(&summary),
                text: summary.to_string(),
            })
        }
        Command::Nonexist => {
            let report = cmd_nonexist(&problem)?;
            if let Some(dir) = out {
                write_json(dir, "nonexist.json", &report)?;
            }
            Ok(Outcome {
                text: report.to_string(),
                exit_code: if opts.strict && !report.consistent() {
                    exit::HYPOTHESIS_FAIL
                } else {
                    exit::SUCCESS
                },
            })
        }
        Command::Example => unreachable!("handled above"),
    }
}

fn check_exit(bundle: &CheckBundle, strict: bool) -> i32 {
    if strict && !bundle.verdict.passed() {
        exit::HYPOTHESIS_FAIL
    } else {
        exit::SUCCESS
    }
}

fn solve_exit(summary: &SolveSummary) -> i32 {
    if summary.found >= summary.expected {
        exit::SUCCESS
    } else {
        exit::SHORTFALL
    }
}

fn require_ladder(problem: &Problem) -> Result<RadiiLadder, CliError> {
    problem
        .ladder
        .ok_or_else(|| CliError::Usage("this command needs a [ladder] table in the config".into()))
}

pub fn cmd_constants(problem: &Problem) -> ConstantsReport {
    ConstantsReport::new(&problem.system)
}

/// Samples (H), the ladder inequalities and the box conditions of every
/// theorem that applies to the ladder.
pub fn cmd_check(problem: &Problem) -> Result<CheckBundle, CliError> {
    let ladder = require_ladder(problem)?;
    let sys = &problem.system;
    let h = sys.check_h(problem.h_density, problem.h_box)?;
    info!("condition (H): {}", if h.pass { "PASS" } else { "FAIL" });
    let theorems = match ladder.mode() {
        LadderMode::TwoLevel => vec![
            check_theorem_ellyptic(sys, &ladder, problem.budget)?,
            check_theorem_ellyptic2(sys, &ladder, problem.budget)?,
        ],
        LadderMode::FourLevel => vec![check_theorem_multi2(sys, &ladder, problem.budget)?],
    };
    Ok(CheckBundle::new(h, check_ladder(sys, &ladder), theorems))
}

/// Multi-start solve; writes `sol_<k>.csv`, `sol_<k>.svg`, `summary.json`
/// and the effective `config.toml` into `out`.
pub fn cmd_solve(problem: &Problem, out: &Path) -> Result<SolveSummary, CliError> {
    let ladder = require_ladder(problem)?;
    fs::create_dir_all(out).map_err(io_err(out))?;
    let found = multi_solve(&problem.system, &ladder, &problem.solve)?;
    info!(
        "{} distinct solutions from {} seeds, {} failures",
        found.solutions.len(),
        found.seeds,
        found.failures.len()
    );
    let mut entries = Vec::with_capacity(found.solutions.len());
    for (k, sol) in found.solutions.iter().enumerate() {
        let profile = reconstruct_radial(&problem.system, sol);
        let entry = SolutionEntry::new(k + 1, sol, profile.radial_residual);
        let csv_path = out.join(&entry.file);
        let mut csv = Vec::new();
        profile.write_csv(&mut csv).map_err(io_err(&csv_path))?;
        fs::write(&csv_path, csv).map_err(io_err(&csv_path))?;
        let title = format!("solution {} ({}), N = {}", k + 1, entry.region, entry.grid);
        let svg_path = out.join(&entry.plot);
        fs::write(&svg_path, plot::profile_svg(&title, &profile)).map_err(io_err(&svg_path))?;
        entries.push(entry);
    }
    let summary = SolveSummary {
        constants: ConstantsReport::new(&problem.system),
        expected: match ladder.mode() {
            LadderMode::TwoLevel => 1,
            LadderMode::FourLevel => 3,
        },
        found: found.nontrivial().count(),
        seeds: found.seeds,
        solutions: entries,
        failures: found.failures,
    };
    write_json(out, "summary.json", &summary)?;
    write_text(out, "config.toml", &problem.config.to_toml())?;
    Ok(summary)
}

/// Sign conditions plus a multi-start sweep from constants in `(0, Z]^2`.
pub fn cmd_nonexist(problem: &Problem) -> Result<NonexistReport, CliError> {
    let sys = &problem.system;
    let signs = check_nonexistence(sys, problem.budget, problem.h_box)?;
    let seeds = sweep_seeds(problem.sweep_seeds, problem.h_box);
    let found = solve_from_constants(sys, &seeds, &problem.solve)?;
    let solutions: Vec<SweepSolution> = found
        .solutions
        .iter()
        .map(|s| {
            let [u_c1, v_c1] = s.c1_norms();
            SweepSolution {
                norms: Norms { u_c1, v_c1 },
                minima: s.minima(),
                sup_norm: s.sup_norm(),
                residual_sup: s.residual_sup,
                trivial: s.is_trivial(),
            }
        })
        .collect();
    let sweep = Sweep {
        seeds: seeds.len(),
        bound: problem.h_box,
        nontrivial: solutions.iter().filter(|s| !s.trivial).count(),
        solutions,
        failures: found.failures,
    };
    Ok(NonexistReport::new(signs, sweep))
}

/// Constants, check and solve for the built-in example, all under `out`.
pub fn cmd_example(out: &Path, strict: bool) -> Result<Outcome, CliError> {
    let problem = ProblemConfig::example().validate()?;
    fs::create_dir_all(out).map_err(io_err(out))?;
    let constants = cmd_constants(&problem);
    write_json(out, "constants.json", &constants)?;
    let bundle = cmd_check(&problem)?;
    write_json(out, "check.json", &bundle)?;
    let summary = cmd_solve(&problem, out)?;
    let exit_code = match solve_exit(&summary) {
        exit::SUCCESS => check_exit(&bundle, strict),
        code => code,
    };
    Ok(Outcome {
        text: format!("{constants}\n{bundle}\n{summary}"),
        exit_code,
    })
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    write_text(dir, name, &(text + "\n"))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(io_err(&path))
}
