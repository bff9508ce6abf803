//! Problem configuration files.
//!
//! A config is a TOML document with the tables `[geometry]`, `[shift]`,
//! `[nonlinearity]`, `[ladder]`, `[solver]` and `[checker]`. Only
//! `[geometry]` and `[nonlinearity]` are required. Unknown tables and keys
//! are rejected, and every error names the offending key and, when it can be
//! found in the source, its line.

use std::fmt;
use std::path::Path;

use annulus_core::hypothesis::{Budget, RadiiLadder};
use annulus_core::solver::SolveOptions;
use annulus_core::system::example;
use annulus_core::{AnnulusGeometry, Expr, NonlinearSystem};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ConfigError};

/// Sample points per axis for condition (H) unless configured.
pub const DEFAULT_H_DENSITY: usize = 17;
/// Seeds in the non-existence sweep unless configured.
pub const DEFAULT_SWEEP_SEEDS: usize = 50;
/// Sampling bound used when neither `h_box` nor a ladder is given.
pub const FALLBACK_H_BOX: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub shift: ShiftConfig,
    pub nonlinearity: NonlinearityConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub checker: CheckerConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub n: u32,
    pub r0: f64,
    pub r1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShiftConfig {
    pub omega1: f64,
    pub omega2: f64,
}

impl Default for ShiftConfig {
    fn default() -> Self {
        Self {
            omega1: 1.0,
            omega2: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearityConfig {
    pub f1: String,
    pub f2: String,
}

/// `rho`/`s` pairs, optionally followed by `theta`/`sigma` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    pub rho1: f64,
    pub rho2: f64,
    pub s1: f64,
    pub s2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub grid: usize,
    pub max_grid: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub picard_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolveOptions::default();
        Self {
            grid: o.grid,
            max_grid: o.max_grid,
            tol: o.tol,
            max_iter: o.max_iter,
            picard_steps: o.picard_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckerConfig {
    pub base_per_axis: usize,
    pub refine_rounds: usize,
    pub h_density: usize,
    /// Upper end `Z` of the sampled state and gradient range. Defaults to
    /// ten times the largest ladder level.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_box: Option<f64>,
    pub sweep_seeds: usize,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        let b = Budget::default();
        Self {
            base_per_axis: b.base_per_axis,
            refine_rounds: b.refine_rounds,
            h_density: DEFAULT_H_DENSITY,
            h_box: None,
            sweep_seeds: DEFAULT_SWEEP_SEEDS,
        }
    }
}

/// A config whose parts have all been validated by the core library.
#[derive(Debug, Clone)]
pub struct Problem {
    /// The effective config, with `h_box` filled in.
    pub config: ProblemConfig,
    pub system: NonlinearSystem,
    pub ladder: Option<RadiiLadder>,
    pub solve: SolveOptions,
    pub budget: Budget,
    pub h_density: usize,
    pub h_box: f64,
    pub sweep_seeds: usize,
}

impl ProblemConfig {
    /// The three-solution example with default solver and checker settings.
    pub fn example() -> Self {
        let [rho, s, theta, sigma] = example::LADDER;
        Self {
            geometry: GeometryConfig {
                n: example::N,
                r0: example::R0,
                r1: example::R1,
            },
            shift: ShiftConfig {
                omega1: example::OMEGA,
                omega2: example::OMEGA,
            },
            nonlinearity: NonlinearityConfig {
                f1: example::F1.into(),
                f2: example::F2.into(),
            },
            ladder: Some(LadderConfig {
                rho1: rho[0],
                rho2: rho[1],
                s1: s[0],
                s2: s[1],
                theta1: Some(theta[0]),
                theta2: Some(theta[1]),
                sigma1: Some(sigma[0]),
                sigma2: Some(sigma[1]),
            }),
            solver: SolverConfig::default(),
            checker: CheckerConfig::default(),
        }
    }

    pub fn from_toml(src: &str) -> Result<Self, ConfigError> {
        toml::from_str(src).map_err(|e| {
            let line = e.span().map(|s| line_of_offset(src, s.start));
            ConfigError {
                key: None,
                line,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Reads and validates a config file.
    pub fn load(path: &Path) -> Result<Problem, CliError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let config = Self::from_toml(&src).map_err(|e| CliError::Config(e.in_file(path)))?;
        config
            .validate_with_source(Some(&src))
            .map_err(|e| CliError::Config(e.in_file(path)))
    }

    pub fn validate(&self) -> Result<Problem, ConfigError> {
        self.validate_with_source(None)
    }

    fn validate_with_source(&self, src: Option<&str>) -> Result<Problem, ConfigError> {
        let fail = |table: &str, key: &str, message: String| ConfigError {
            key: Some(format!("{table}.{key}")),
            line: src.and_then(|s| find_key(s, table, key)),
            message,
        };
        let g = &self.geometry;
        let geom = AnnulusGeometry::new(g.n, g.r0, g.r1).map_err(|e| {
            let key = if g.n < 2 {
                "n"
            } else if g.r0 <= 0.0 {
                "r0"
            } else {
                "r1"
            };
            fail("geometry", key, e.to_string())
        })?;
        let parse = |key: &str, text: &str| {
            Expr::parse(text).map_err(|e| fail("nonlinearity", key, e.to_string()))
        };
        let f1 = parse("f1", &self.nonlinearity.f1)?;
        let f2 = parse("f2", &self.nonlinearity.f2)?;
        let system = NonlinearSystem::new(f1, f2, self.shift.omega1, self.shift.omega2, geom)
            .map_err(|e| {
                let key = if valid_omega(self.shift.omega1) {
                    "omega2"
                } else {
                    "omega1"
                };
                fail("shift", key, e.to_string())
            })?;
        let ladder = match &self.ladder {
            None => None,
            Some(l) => Some(l.build().map_err(|(key, msg)| fail("ladder", key, msg))?),
        };
        let s = &self.solver;
        let solve = SolveOptions {
            grid: s.grid,
            max_grid: s.max_grid,
            tol: s.tol,
            max_iter: s.max_iter,
            picard_steps: s.picard_steps,
        };
        solve.validate().map_err(|e| {
            let key = if s.grid < 65 || s.grid.is_multiple_of(2) {
                "grid"
            } else if s.max_grid < s.grid {
                "max_grid"
            } else if s.max_iter == 0 {
                "max_iter"
            } else {
                "tol"
            };
            fail("solver", key, e.to_string())
        })?;
        let c = &self.checker;
        if c.base_per_axis < 3 {
            return Err(fail(
                "checker",
                "base_per_axis",
                format!("{} must be at least 3", c.base_per_axis),
            ));
        }
        if c.h_density < 2 {
            return Err(fail(
                "checker",
                "h_density",
                format!("{} must be at least 2", c.h_density),
            ));
        }
        if c.sweep_seeds == 0 {
            return Err(fail("checker", "sweep_seeds", "must be at least 1".into()));
        }
        let h_box = match c.h_box {
            Some(z) if !(z > 0.0 && z.is_finite()) => {
                return Err(fail("checker", "h_box", format!("{z} must be positive")));
            }
            Some(z) => z,
            None => ladder.map_or(FALLBACK_H_BOX, |l| 10.0 * l.max_level()),
        };
        let mut config = self.clone();
        config.checker.h_box = Some(h_box);
        Ok(Problem {
            config,
            system,
            ladder,
            solve,
            budget: Budget {
                base_per_axis: c.base_per_axis,
                refine_rounds: c.refine_rounds,
            },
            h_density: c.h_density,
            h_box,
            sweep_seeds: c.sweep_seeds,
        })
    }
}

fn valid_omega(w: f64) -> bool {
    w > 0.0 && w <= annulus_core::kernel::MAX_OMEGA
}

impl LadderConfig {
    fn build(&self) -> Result<RadiiLadder, (&'static str, String)> {
        let rho = [self.rho1, self.rho2];
        let s = [self.s1, self.s2];
        let pair = |a: Option<f64>, b: Option<f64>, name: &'static str| match (a, b) {
            (Some(a), Some(b)) => Ok(Some([a, b])),
            (None, None) => Ok(None),
            (None, Some(_)) => Err((name, format!("{name}1 and {name}2 must be given together"))),
            (Some(_), None) => Err((name, format!("{name}1 and {name}2 must be given together"))),
        };
        let theta = pair(self.theta1, self.theta2, "theta")?;
        let sigma = pair(self.sigma1, self.sigma2, "sigma")?;
        let built = match (theta, sigma) {
            (None, None) => RadiiLadder::two_level(rho, s),
            (Some(theta), Some(sigma)) => RadiiLadder::four_level(rho, s, theta, sigma),
            (Some(_), None) => return Err(("sigma1", "theta needs sigma".into())),
            (None, Some(_)) => return Err(("theta1", "sigma needs theta".into())),
        };
        built.map_err(|e| {
            let msg = e.to_string();
            // the core message names the first key it rejects, e.g. `rho1 = ...`
            let key = [
                "rho1", "rho2", "s1", "s2", "theta1", "theta2", "sigma1", "sigma2",
            ]
            .into_iter()
            .find(|k| msg.contains(&format!("{k} =")))
            .unwrap_or("rho1");
            (key, msg)
        })
    }
}

/// 1-based line containing byte `offset`.
fn line_of_offset(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

/// Line of `key = ...` inside `[table]`, if present.
fn find_key(src: &str, table: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (no, line) in src.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('[') {
            current = rest.trim_end_matches(']').trim().to_string();
            continue;
        }
        if current != table {
            continue;
        }
        if let Some((lhs, _)) = line.split_once('=') {
            if lhs.trim() == key {
                return Some(no + 1);
            }
        }
    }
    None
}

impl fmt::Display for ProblemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml())
    }
}
