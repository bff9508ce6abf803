//! Nyström discretisation of the Hammerstein operator
//!
//! ```text
//! T_i(u, v)(t) = int_0^1 k_i(t, s) g_i(s, u(s), v(s), |u'(s)|, |v'(s)|) ds
//! ```
//!
//! The integrand is interpolated by local cubics between grid nodes and
//! integrated by Gauss-Legendre on every cell. Because the kernel separates
//! on either side of `s = t`, all nodes are served by two running sums.

use crate::error::Result;
use crate::geometry::NodeGeometry;
use crate::quadrature::GaussLegendre;
use crate::solver::grid::{cubic_weights, stencil_start, GridFunction};
use crate::system::{Component, NonlinearSystem};
use crate::Error;

/// Gauss-Legendre points per grid cell.
pub const PANEL_POINTS: usize = 8;

/// C1 norm beyond which fixed-point iteration is declared divergent.
pub const DIVERGENCE_NORM: f64 = 1e6;

pub(crate) fn node_geometry(sys: &NonlinearSystem, n: usize) -> Vec<NodeGeometry> {
    let h = 1.0 / (n - 1) as f64;
    (0..n)
        .map(|j| {
            let t = if j + 1 == n { 1.0 } else { j as f64 * h };
            sys.geometry().node(t).expect("grid node inside [0, 1]")
        })
        .collect()
}

fn check_pair(u: &GridFunction, v: &GridFunction) -> Result<()> {
    if u.len() != v.len() || u.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "u and v must share a grid of at least 4 nodes (got {} and {})",
            u.len(),
            v.len()
        )));
    }
    Ok(())
}

/// Samples `g_i` at the grid nodes.
pub(crate) fn sample_g(
    sys: &NonlinearSystem,
    nodes: &[NodeGeometry],
    i: Component,
    u: &GridFunction,
    v: &GridFunction,
) -> Result<Vec<f64>> {
    let (uv, ud, vv, vd) = (u.values(), u.derivs(), v.values(), v.derivs());
    nodes
        .iter()
        .enumerate()
        .map(|(j, node)| sys.g_at(i, node, uv[j], vv[j], ud[j].abs(), vd[j].abs()))
        .collect()
}

/// Applies `T = (T_1, T_2)`, returning values and derivatives on the input
/// grid.
pub fn apply_t(
    sys: &NonlinearSystem,
    u: &GridFunction,
    v: &GridFunction,
) -> Result<(GridFunction, GridFunction)> {
    check_pair(u, v)?;
    let nodes = node_geometry(sys, u.len());
    let gl = GaussLegendre::new(PANEL_POINTS);
    let mut out = Vec::with_capacity(2);
    for i in Component::BOTH {
        let g = sample_g(sys, &nodes, i, u, v)?;
        out.push(integrate(sys.omega(i), &g, &gl));
    }
    let tv = out.pop().expect("two components");
    let tu = out.pop().expect("two components");
    Ok((tu, tv))
}

/// Green's-kernel solution of `-w'' + omega^2 w = g`, `w'(0) = w'(1) = 0`,
/// for `g` given at the nodes.
pub(crate) fn integrate(omega: f64, g: &[f64], gl: &GaussLegendre) -> GridFunction {
    let n = g.len();
    let h = 1.0 / (n - 1) as f64;
    // running sums: P = int_0^t cosh(w s) g, Q = int_t^1 cosh(w (1 - s)) g
    let mut left = vec![0.0; n];
    let mut right = vec![0.0; n];
    let mut cells = vec![(0.0, 0.0); n - 1];
    for (j, cell) in cells.iter_mut().enumerate() {
        let start = stencil_start(j, n);
        let offset = (j - start) as f64;
        let (mut a, mut b) = (0.0, 0.0);
        for (&xi, &w) in gl.nodes().iter().zip(gl.weights()) {
            let local = 0.5 * (1.0 + xi);
            let s = (j as f64 + local) * h;
            let lw = cubic_weights(offset + local);
            let gs: f64 = (0..4).map(|k| lw[k] * g[start + k]).sum();
            let wt = 0.5 * h * w * gs;
            a += wt * (omega * s).cosh();
            b += wt * (omega * (1.0 - s)).cosh();
        }
        *cell = (a, b);
    }
    for j in 1..n {
        left[j] = left[j - 1] + cells[j - 1].0;
    }
    for j in (0..n - 1).rev() {
        right[j] = right[j + 1] + cells[j].1;
    }
    let sinh_w = omega.sinh();
    let mut values = Vec::with_capacity(n);
    let mut derivs = Vec::with_capacity(n);
    for j in 0..n {
        let t = if j + 1 == n { 1.0 } else { j as f64 * h };
        let (p, q) = (left[j], right[j]);
        values.push(((omega * (1.0 - t)).cosh() * p + (omega * t).cosh() * q) / (omega * sinh_w));
        derivs.push((-(omega * (1.0 - t)).sinh() * p + (omega * t).sinh() * q) / sinh_w);
    }
    GridFunction::new(values, derivs).expect("finite kernel integrals")
}

/// `iters` steps of `(u, v) <- T(u, v)`.
pub fn picard_refine(
    sys: &NonlinearSystem,
    seed: (GridFunction, GridFunction),
    iters: usize,
) -> Result<(GridFunction, GridFunction)> {
    let (mut u, mut v) = seed;
    for it in 0..iters {
        let (tu, tv) = apply_t(sys, &u, &v)?;
        let norm = tu.c1_norm().max(tv.c1_norm());
        if !(norm <= DIVERGENCE_NORM) {
            return Err(Error::Divergence {
                norm,
                iterations: it + 1,
            });
        }
        u = tu;
        v = tv;
    }
    Ok((u, v))
}
