//! Damped Newton on the finite-difference collocation of
//!
//! ```text
//! -u'' = d(t) f1(r, u, v, |u'|/|r'|, |v'|/|r'|),   -v'' = d(t) f2(...),   u'(0) = u'(1) = v'(0) = v'(1) = 0.
//! ```
//!
//! This is `-u'' + w^2 u = g` with the shift cancelled algebraically, so the
//! discrete solutions do not depend on `w`. Interior rows use central second
//! differences and central first differences for the gradients; the end rows
//! are one-sided second-order Neumann closures. Unknowns are stored as
//! offsets from a per-component constant so that second differences of
//! nearly constant profiles do not drown in roundoff.

use serde::Serialize;

use super::banded::BandMatrix;
use super::grid::{neumann_derivatives, refine_values, GridFunction};
use super::operator::node_geometry;
use crate::error::{Error, Result};
use crate::geometry::NodeGeometry;
use crate::system::{Component, NonlinearSystem};

/// Relative step of the forward differences in the Jacobian.
const FD_STEP: f64 = 1e-7;
/// Smoothing of `|x|` inside the Jacobian: `d|x|/dx ~ x / sqrt(x^2 + eps^2)`.
const ABS_SMOOTHING: f64 = 1e-12;
/// Pivots below this fraction of the largest Jacobian entry count as zero.
const PIVOT_TOL: f64 = 1e-12;
const MIN_STEP: f64 = 1.0 / 1024.0;
const ARMIJO: f64 = 1e-4;

/// Values above this sup-norm count as nontrivial.
pub const TRIVIAL_TOL: f64 = 1e-6;
/// Lowest value a solution may take and still count as non-negative.
pub const NONNEGATIVE_TOL: f64 = 1e-10;
/// A component is nonconstant when its oscillation exceeds this.
pub const NONCONSTANT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    /// Initial node count (odd, at least 65).
    pub grid: usize,
    /// Largest node count reached by grid doubling; equal to `grid` turns
    /// Richardson extrapolation off.
    pub max_grid: usize,
    /// Bound on the residual and the extrapolation error estimate.
    pub tol: f64,
    /// Newton steps per grid.
    pub max_iter: usize,
    /// Fixed-point steps applied to each seed before Newton.
    pub picard_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            grid: 257,
            max_grid: 2049,
            tol: 1e-8,
            max_iter: 50,
            picard_steps: 3,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 65 || self.grid.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "grid = {} must be odd and at least 65",
                self.grid
            )));
        }
        if self.max_grid < self.grid {
            return Err(Error::InvalidArgument(format!(
                "max_grid = {} is below grid = {}",
                self.max_grid, self.grid
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tol = {} must be positive",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Localisation of a solution relative to a ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Region {
    #[serde(rename = "trivial")]
    Trivial,
    S1,
    S2,
    S3,
    /// Sign-violating, outside the cone, degenerate, or in no target region.
    #[serde(rename = "other")]
    Other,
    /// Not yet compared with a ladder.
    #[serde(rename = "unclassified")]
    Unclassified,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::Trivial => "trivial",
            Region::S1 => "S1",
            Region::S2 => "S2",
            Region::S3 => "S3",
            Region::Other => "other",
            Region::Unclassified => "unclassified",
        }
    }

    /// True for S1, S2 and S3.
    pub fn is_target(self) -> bool {
        matches!(self, Region::S1 | Region::S2 | Region::S3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionPair {
    pub u: GridFunction,
    pub v: GridFunction,
    /// Larger of the collocation residual and the extrapolation error
    /// estimate.
    pub residual_sup: f64,
    /// Sup of the discrete equations on the finest grid solved.
    pub collocation_residual: f64,
    /// Estimated C1 error of the returned profiles, when grids were doubled.
    pub richardson_estimate: Option<f64>,
    /// Newton steps summed over all grids.
    pub iterations: usize,
    /// `min w - c_i |w|_C1` for `u` and `v`.
    pub cone_margins: [f64; 2],
    pub region: Region,
    pub nonconstant: [bool; 2],
    pub nonnegative: bool,
    /// The collocation Jacobian is singular at the solution.
    pub degenerate: bool,
}

impl SolutionPair {
    pub fn grid(&self) -> usize {
        self.u.len()
    }

    pub fn sup_norm(&self) -> f64 {
        self.u.sup_norm().max(self.v.sup_norm())
    }

    pub fn c1_norms(&self) -> [f64; 2] {
        [self.u.c1_norm(), self.v.c1_norm()]
    }

    pub fn minima(&self) -> [f64; 2] {
        [self.u.min(), self.v.min()]
    }

    pub fn is_trivial(&self) -> bool {
        self.sup_norm() <= TRIVIAL_TOL
    }

    /// C1 distance over both components.
    pub fn c1_distance(&self, other: &Self) -> Result<f64> {
        Ok(self
            .u
            .c1_distance(&other.u)?
            .max(self.v.c1_distance(&other.v)?))
    }
}

/// Discrete system on one grid.
struct Collocation<'a> {
    sys: &'a NonlinearSystem,
    n: usize,
    h: f64,
    nodes: Vec<NodeGeometry>,
}

/// Point `(r, u, v, gu, gv)` used at interior node `j`.
struct NodeState {
    point: [f64; 5],
    /// Central differences of `u` and `v`.
    slopes: [f64; 2],
}

impl<'a> Collocation<'a> {
    fn new(sys: &'a NonlinearSystem, n: usize) -> Self {
        Self {
            sys,
            n,
            h: 1.0 / (n - 1) as f64,
            nodes: node_geometry(sys, n),
        }
    }

    fn state(&self, base: [f64; 2], w: &[f64], j: usize) -> NodeState {
        let node = &self.nodes[j];
        let mut slopes = [0.0; 2];
        if j > 0 && j + 1 < self.n {
            for c in 0..2 {
                slopes[c] = (w[2 * (j + 1) + c] - w[2 * (j - 1) + c]) / (2.0 * self.h);
            }
        }
        NodeState {
            point: [
                node.r,
                base[0] + w[2 * j],
                base[1] + w[2 * j + 1],
                slopes[0].abs() / node.abs_rprime,
                slopes[1].abs() / node.abs_rprime,
            ],
            slopes,
        }
    }

    /// Unscaled residuals, interleaved `(u_j, v_j)`.
    fn residual(&self, base: [f64; 2], w: &[f64]) -> Result<Vec<f64>> {
        let (n, h) = (self.n, self.h);
        let mut res = vec![0.0; 2 * n];
        for c in 0..2 {
            let at = |j: usize| w[2 * j + c];
            res[c] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
            res[2 * (n - 1) + c] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
        }
        for j in 1..n - 1 {
            let st = self.state(base, w, j);
            for (c, i) in Component::BOTH.into_iter().enumerate() {
                let lap = (-w[2 * (j - 1) + c] + 2.0 * w[2 * j + c] - w[2 * (j + 1) + c]) / (h * h);
                res[2 * j + c] = lap - self.nodes[j].d * self.sys.eval_f(i, &st.point)?;
            }
        }
        Ok(res)
    }

    /// Row scaling that brings every Jacobian row to order one.
    fn row_scale(&self, row: usize) -> f64 {
        let j = row / 2;
        if j == 0 || j + 1 == self.n {
            2.0 * self.h
        } else {
            self.h * self.h
        }
    }

    fn jacobian(&self, base: [f64; 2], w: &[f64]) -> Result<BandMatrix> {
        let n = self.n;
        let mut jac = BandMatrix::zeros(2 * n, 4, 4);
        for c in 0..2 {
            for (k, coef) in [-3.0, 4.0, -1.0].into_iter().enumerate() {
                jac.add(c, 2 * k + c, coef);
                jac.add(2 * (n - 1) + c, 2 * (n - 1 - k) + c, -coef);
            }
        }
        let h2 = self.h * self.h;
        for j in 1..n - 1 {
            let st = self.state(base, w, j);
            let node = &self.nodes[j];
            for (c, i) in Component::BOTH.into_iter().enumerate() {
                let row = 2 * j + c;
                jac.add(row, 2 * (j - 1) + c, -1.0);
                jac.add(row, row, 2.0);
                jac.add(row, 2 * (j + 1) + c, -1.0);
                let grad = self.f_gradient(i, &st.point)?;
                let scale = -h2 * node.d;
                jac.add(row, 2 * j, scale * grad[1]);
                jac.add(row, 2 * j + 1, scale * grad[2]);
                for comp in 0..2 {
                    let s = st.slopes[comp];
                    let dabs = s / (s * s + ABS_SMOOTHING * ABS_SMOOTHING).sqrt();
                    let dz = scale * grad[3 + comp] * dabs / (2.0 * self.h * node.abs_rprime);
                    jac.add(row, 2 * (j + 1) + comp, dz);
                    jac.add(row, 2 * (j - 1) + comp, -dz);
                }
            }
        }
        Ok(jac)
    }

    /// Forward-difference partials of `f_i` in `u, v, gu, gv` (slots 1..5).
    fn f_gradient(&self, i: Component, point: &[f64; 5]) -> Result<[f64; 5]> {
        let f0 = self.sys.eval_f(i, point)?;
        let mut grad = [0.0; 5];
        for k in 1..5 {
            let step = FD_STEP * point[k].abs().max(1.0);
            let mut p = *point;
            p[k] += step;
            grad[k] = (self.sys.eval_f(i, &p)? - f0) / step;
        }
        Ok(grad)
    }

    /// Newton iteration in place. Returns the final residual sup and the
    /// number of steps.
    fn newton(
        &self,
        base: &mut [f64; 2],
        w: &mut [f64],
        max_iter: usize,
        target: f64,
        accept: f64,
    ) -> Result<(f64, usize)> {
        let mut res = self.residual(*base, w)?;
        let mut norm = sup(&res);
        for it in 0..max_iter {
            if norm <= target {
                return Ok((norm, it));
            }
            recenter(base, w);
            let lu = self
                .jacobian(*base, w)?
                .factor(PIVOT_TOL)
                .map_err(|_| Error::SingularJacobian { grid: self.n })?;
            let mut step: Vec<f64> = res
                .iter()
                .enumerate()
                .map(|(r, x)| -x * self.row_scale(r))
                .collect();
            lu.solve(&mut step);
            let merit = self.merit(&res);
            let mut lambda = 1.0;
            let mut accepted = None;
            while lambda >= MIN_STEP {
                let trial: Vec<f64> = w.iter().zip(&step).map(|(x, d)| x + lambda * d).collect();
                if let Ok(r) = self.residual(*base, &trial) {
                    if self.merit(&r) <= (1.0 - 2.0 * ARMIJO * lambda) * merit {
                        accepted = Some((trial, r));
                        break;
                    }
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((trial, r)) => {
                    w.copy_from_slice(&trial);
                    res = r;
                    norm = sup(&res);
                }
                None if norm <= accept => return Ok((norm, it)),
                None => {
                    return Err(Error::NoConvergence(format!(
                        "line search failed at residual {norm:e} on {} nodes",
                        self.n
                    )))
                }
            }
        }
        if norm <= accept {
            Ok((norm, max_iter))
        } else {
            Err(Error::NoConvergence(format!(
                "residual {norm:e} after {max_iter} Newton steps on {} nodes",
                self.n
            )))
        }
    }

    fn merit(&self, res: &[f64]) -> f64 {
        res.iter()
            .enumerate()
            .map(|(r, x)| (x * self.row_scale(r)).powi(2))
            .sum::<f64>()
            * 0.5
    }

    fn is_degenerate(&self, base: [f64; 2], w: &[f64]) -> Result<bool> {
        Ok(self.jacobian(base, w)?.factor(PIVOT_TOL).is_err())
    }
}

fn sup(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Moves the mean of each component's offsets into its base.
fn recenter(base: &mut [f64; 2], w: &mut [f64]) {
    let n = w.len() / 2;
    for c in 0..2 {
        let mean = (0..n).map(|j| w[2 * j + c]).sum::<f64>() / n as f64;
        base[c] += mean;
        for j in 0..n {
            w[2 * j + c] -= mean;
        }
    }
}

fn interleave(u: &[f64], v: &[f64], base: [f64; 2]) -> Vec<f64> {
    u.iter()
        .zip(v)
        .flat_map(|(a, b)| [a - base[0], b - base[1]])
        .collect()
}

fn split(base: [f64; 2], w: &[f64]) -> [Vec<f64>; 2] {
    [0, 1].map(|c| w.iter().skip(c).step_by(2).map(|x| base[c] + x).collect())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Values of a grid function resampled onto `n` nodes.
fn resample(w: &GridFunction, n: usize) -> Vec<f64> {
    if w.len() == n {
        return w.values().to_vec();
    }
    (0..n)
        .map(|j| w.interpolate(j as f64 / (n - 1) as f64))
        .collect()
}

/// Sup distance of values and fourth-order derivatives on the nodes of the
/// coarser grid.
fn c1_gap(fine: &[Vec<f64>; 2], coarse: &[Vec<f64>; 2]) -> f64 {
    let stride = (fine[0].len() - 1) / (coarse[0].len() - 1);
    let mut gap = 0.0f64;
    for c in 0..2 {
        let df = neumann_derivatives(&fine[c]);
        let dc = neumann_derivatives(&coarse[c]);
        for (j, (vc, dcj)) in coarse[c].iter().zip(&dc).enumerate() {
            gap = gap
                .max((fine[c][j * stride] - vc).abs())
                .max((df[j * stride] - dcj).abs());
        }
    }
    gap
}

/// Solves from `seed` on `opts.grid` nodes, doubling the grid and
/// extrapolating until the error estimate drops below `opts.tol`.
///
/// With grid doubling the returned profiles are the Richardson combination
/// `u_h + (u_h - u_2h) / 3`, whose error is estimated by comparing two
/// successive combinations; after only two grids the plain estimate
/// `|u_h - u_2h| / 3` is used.
pub fn newton_solve(
    sys: &NonlinearSystem,
    seed: (GridFunction, GridFunction),
    opts: &SolveOptions,
) -> Result<SolutionPair> {
    opts.validate()?;
    let mut n = opts.grid;
    let u0 = resample(&seed.0, n);
    let v0 = resample(&seed.1, n);
    let mut base = [mean(&u0), mean(&v0)];
    let mut w = interleave(&u0, &v0, base);
    let target = 1e-3 * opts.tol;

    let mut coll = Collocation::new(sys, n);
    let (mut residual, mut iterations) =
        coll.newton(&mut base, &mut w, opts.max_iter, target, opts.tol)?;
    let mut plain = split(base, &w);
    let mut profiles = plain.clone();
    let mut estimate = None;
    let mut extrapolated: Option<[Vec<f64>; 2]> = None;

    while 2 * n - 1 <= opts.max_grid {
        let coarse = plain.clone();
        n = 2 * n - 1;
        recenter(&mut base, &mut w);
        let offsets = split([0.0, 0.0], &w).map(|c| refine_values(&c));
        w = interleave(&offsets[0], &offsets[1], [0.0, 0.0]);
        coll = Collocation::new(sys, n);
        let (r, it) = coll.newton(&mut base, &mut w, opts.max_iter, target, opts.tol)?;
        residual = r;
        iterations += it;
        plain = split(base, &w);
        let combined: [Vec<f64>; 2] = [0, 1].map(|c| {
            let up = refine_values(&coarse[c]);
            plain[c]
                .iter()
                .zip(&up)
                .map(|(f, g)| f + (f - g) / 3.0)
                .collect()
        });
        let est = match &extrapolated {
            Some(prev) => c1_gap(&combined, prev) / 15.0,
            None => c1_gap(&plain, &coarse) / 3.0,
        };
        estimate = Some(est);
        profiles = combined.clone();
        extrapolated = Some(combined);
        log::debug!("grid {n}: residual {residual:e}, error estimate {est:e}");
        if est <= opts.tol {
            break;
        }
    }
    if let Some(est) = estimate {
        if est > opts.tol {
            return Err(Error::NoConvergence(format!(
                "extrapolation error estimate {est:e} above tol {:e} at {} nodes",
                opts.tol, n
            )));
        }
    }
    let degenerate = coll.is_degenerate(base, &w)?;
    let [pu, pv] = profiles;
    let u = GridFunction::from_values_neumann(pu)?;
    let v = GridFunction::from_values_neumann(pv)?;
    Ok(finish(
        sys, u, v, residual, estimate, iterations, degenerate,
    ))
}

fn finish(
    sys: &NonlinearSystem,
    u: GridFunction,
    v: GridFunction,
    collocation_residual: f64,
    richardson_estimate: Option<f64>,
    iterations: usize,
    degenerate: bool,
) -> SolutionPair {
    let cone_margins = [
        u.cone_margin(sys.cone_constant(Component::U)),
        v.cone_margin(sys.cone_constant(Component::V)),
    ];
    let nonnegative = u.min() >= -NONNEGATIVE_TOL && v.min() >= -NONNEGATIVE_TOL;
    let nonconstant = [
        u.oscillation() > NONCONSTANT_TOL,
        v.oscillation() > NONCONSTANT_TOL,
    ];
    let mut sol = SolutionPair {
        residual_sup: collocation_residual.max(richardson_estimate.unwrap_or(0.0)),
        collocation_residual,
        richardson_estimate,
        iterations,
        cone_margins,
        region: Region::Unclassified,
        nonconstant,
        nonnegative,
        degenerate,
        u,
        v,
    };
    sol.region = if sol.is_trivial() {
        Region::Trivial
    } else if !sol.nonnegative {
        Region::Other
    } else {
        Region::Unclassified
    };
    sol
}
