//! Multi-start solving from constant seeds placed in the regions where the
//! existence theorems localise solutions, followed by deduplication and
//! classification.

use rayon::prelude::*;
use serde::Serialize;

use super::grid::GridFunction;
use super::newton::{newton_solve, Region, SolutionPair, SolveOptions};
use super::operator::picard_refine;
use crate::error::Result;
use crate::hypothesis::RadiiLadder;
use crate::system::{Component, NonlinearSystem};

/// Cone margins down to this value still count as inside the cone.
pub const CONE_TOL: f64 = 1e-6;
/// Relative C1 distance under which two solutions are the same.
pub const DEDUP_TOL: f64 = 1e-6;

/// Fractions of each seed interval used for the low, mid and high seeds.
const SEED_FRACTIONS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedFailure {
    pub seed: [f64; 2],
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiSolve {
    /// Distinct solutions, ordered by region and then by norm.
    pub solutions: Vec<SolutionPair>,
    pub failures: Vec<SeedFailure>,
    pub seeds: usize,
}

impl MultiSolve {
    /// Solutions in S1, S2 or S3.
    pub fn nontrivial(&self) -> impl Iterator<Item = &SolutionPair> {
        self.solutions.iter().filter(|s| s.region.is_target())
    }

    pub fn count(&self, region: Region) -> usize {
        self.solutions.iter().filter(|s| s.region == region).count()
    }
}

/// Constant seeds: a 3 x 3 pattern inside `[rho, s]` for two-level
/// ladders, and additionally inside `[s, theta]` and `[theta, sigma]` for
/// four-level ladders.
pub fn ladder_seeds(ladder: &RadiiLadder) -> Vec<[f64; 2]> {
    let mut bands = vec![(ladder.rho, ladder.s)];
    if let (Some(theta), Some(sigma)) = (ladder.theta, ladder.sigma) {
        bands.push((ladder.s, theta));
        bands.push((theta, sigma));
    }
    let mut seeds = Vec::with_capacity(9 * bands.len());
    for (lo, hi) in bands {
        for a in SEED_FRACTIONS {
            for b in SEED_FRACTIONS {
                seeds.push([lo[0] + (hi[0] - lo[0]) * a, lo[1] + (hi[1] - lo[1]) * b]);
            }
        }
    }
    seeds
}

/// Region of `sol` relative to `ladder`:
///
/// * four levels: S1 = `V_s \ K_rho`, S2 = `K_theta \ V_s`,
///   S3 = `V_sigma \ K_theta`;
/// * two levels: S1 = `K_s \ V_rho`;
///
/// where `K_l` caps the C1 norms and `V_l` caps the minima (open sets; the
/// excluded sets are closed).
pub fn classify(sys: &NonlinearSystem, ladder: &RadiiLadder, sol: &SolutionPair) -> Region {
    if sol.is_trivial() {
        return Region::Trivial;
    }
    let c = Component::BOTH.map(|i| sys.cone_constant(i));
    let margins = [sol.u.cone_margin(c[0]), sol.v.cone_margin(c[1])];
    if !sol.nonnegative || sol.degenerate || margins.iter().any(|m| *m < -CONE_TOL) {
        return Region::Other;
    }
    let norms = sol.c1_norms();
    let minima = sol.minima();
    let k_open = |l: [f64; 2]| norms[0] < l[0] && norms[1] < l[1];
    let k_closed = |l: [f64; 2]| norms[0] <= l[0] && norms[1] <= l[1];
    let v_open = |l: [f64; 2]| minima[0] < l[0] && minima[1] < l[1];
    let v_closed = |l: [f64; 2]| minima[0] <= l[0] && minima[1] <= l[1];
    match (ladder.theta, ladder.sigma) {
        (Some(theta), Some(sigma)) => {
            if v_open(ladder.s) && !k_closed(ladder.rho) {
                Region::S1
            } else if k_open(theta) && !v_closed(ladder.s) {
                Region::S2
            } else if v_open(sigma) && !k_closed(theta) {
                Region::S3
            } else {
                Region::Other
            }
        }
        _ => {
            if k_open(ladder.s) && !v_closed(ladder.rho) {
                Region::S1
            } else {
                Region::Other
            }
        }
    }
}

/// Solves from every seed in `seeds` (in parallel) and drops duplicates.
/// Newton runs twice per seed: from the seed conditioned by
/// `opts.picard_steps` fixed-point steps, and from the raw constants. A seed
/// fails only if both runs fail. Every solution is independent of the
/// shift, but the conditioning is not: a small shift takes long fixed-point
/// steps and can carry a seed into another basin, so the set found may
/// differ between shifts. Regions are left as assigned by [`newton_solve`].
pub fn solve_from_constants(
    sys: &NonlinearSystem,
    seeds: &[[f64; 2]],
    opts: &SolveOptions,
) -> Result<MultiSolve> {
    opts.validate()?;
    let outcomes: Vec<(Result<SolutionPair>, Option<Result<SolutionPair>>)> = seeds
        .par_iter()
        .map(|&[a, b]| {
            let constant = (GridFunction::constant(opts.grid, a), GridFunction::constant(opts.grid, b));
            if opts.picard_steps == 0 {
                return (newton_solve(sys, constant, opts), None);
            }
            match picard_refine(sys, constant.clone(), opts.picard_steps) {
                Ok(start) => (newton_solve(sys, start, opts), Some(newton_solve(sys, constant, opts))),
                Err(e) => {
                    log::debug!("seed ({a}, {b}): fixed-point conditioning failed ({e}); using the raw seed");
                    (newton_solve(sys, constant, opts), None)
                }
            }
        })
        .collect();
    let mut solutions: Vec<SolutionPair> = Vec::new();
    let mut failures = Vec::new();
    for (seed, (first, second)) in seeds.iter().zip(outcomes) {
        let mut error = None;
        let mut solved = false;
        for outcome in std::iter::once(first).chain(second) {
            match outcome {
                Ok(sol) => {
                    solved = true;
                    if !is_duplicate(&solutions, &sol) {
                        solutions.push(sol);
                    }
                }
                Err(e) => {
                    error.get_or_insert(e);
                }
            }
        }
        if let (false, Some(e)) = (solved, error) {
            log::info!("seed ({}, {}) failed: {e}", seed[0], seed[1]);
            failures.push(SeedFailure {
                seed: *seed,
                error: e.to_string(),
            });
        }
    }
    Ok(MultiSolve {
        solutions,
        failures,
        seeds: seeds.len(),
    })
}

fn is_duplicate(kept: &[SolutionPair], sol: &SolutionPair) -> bool {
    kept.iter().any(|k| {
        let scale = 1.0
            + sol
                .sup_norm()
                .max(k.sup_norm())
                .max(sol.u.c1_norm())
                .max(sol.v.c1_norm());
        match k.c1_distance(sol) {
            Ok(d) => d <= DEDUP_TOL * scale,
            Err(_) => false,
        }
    })
}

/// Seeds from [`ladder_seeds`], solved, deduplicated, classified and sorted
/// by region and norms.
pub fn multi_solve(
    sys: &NonlinearSystem,
    ladder: &RadiiLadder,
    opts: &SolveOptions,
) -> Result<MultiSolve> {
    let seeds = ladder_seeds(ladder);
    let mut out = solve_from_constants(sys, &seeds, opts)?;
    for sol in &mut out.solutions {
        sol.region = classify(sys, ladder, sol);
    }
    out.solutions.sort_by(|a, b| {
        a.region
            .cmp(&b.region)
            .then(a.c1_norms()[0].total_cmp(&b.c1_norms()[0]))
            .then(a.c1_norms()[1].total_cmp(&b.c1_norms()[1]))
    });
    Ok(out)
}

/// Deterministic low-discrepancy points in `(0, bound]^2` (Halton bases 2
/// and 3).
pub fn sweep_seeds(count: usize, bound: f64) -> Vec<[f64; 2]> {
    (1..=count)
        .map(|k| [bound * radical_inverse(k, 2), bound * radical_inverse(k, 3)])
        .collect()
}

fn radical_inverse(mut k: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    out
}
