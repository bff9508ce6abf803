//! Mapping solutions on `[0, 1]` back to radial profiles on `[R0, R1]`.

use std::io::{self, Write};

use serde::Serialize;

use super::newton::SolutionPair;
use crate::system::{Component, NonlinearSystem};

/// One node of a radial profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialRow {
    pub t: f64,
    pub r: f64,
    pub u: f64,
    pub du_dt: f64,
    pub v: f64,
    pub dv_dt: f64,
    /// `|du/dr| = |u'(t) / r'(t)|`.
    pub grad_u: f64,
    pub grad_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub rows: Vec<RadialRow>,
    /// Sup over the nodes of `|-w_rr - (n-1)/r w_r - f|` for both equations,
    /// with `w_r`, `w_rr` obtained from the `t`-profile by the chain rule.
    pub radial_residual: f64,
}

pub const CSV_HEADER: &str = "t,r,u,du_dt,v,dv_dt,grad_u,grad_v";

/// Fourth-order second derivatives on a uniform grid (one-sided near the
/// ends). Needs at least 6 nodes.
fn second_derivatives(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let h = 1.0 / (n - 1) as f64;
    let inv = 1.0 / (12.0 * h * h);
    let mut d = vec![0.0; n];
    let edge = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
    let near = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
    d[0] = (0..6).map(|k| edge[k] * f[k]).sum::<f64>() * inv;
    d[1] = (0..6).map(|k| near[k] * f[k]).sum::<f64>() * inv;
    d[n - 1] = (0..6).map(|k| edge[k] * f[n - 1 - k]).sum::<f64>() * inv;
    d[n - 2] = (0..6).map(|k| near[k] * f[n - 1 - k]).sum::<f64>() * inv;
    for j in 2..n - 2 {
        d[j] = (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) * inv;
    }
    d
}

/// Tabulates `sol` against `r` and recomputes the residual of the radial
/// equation `-w'' - (n-1)/r w' = f` as an independent check.
pub fn reconstruct_radial(sys: &NonlinearSystem, sol: &SolutionPair) -> RadialProfile {
    let geom = sys.geometry();
    let n_dim = f64::from(geom.n());
    let (u, v) = (&sol.u, &sol.v);
    let second = [
        second_derivatives(u.values()),
        second_derivatives(v.values()),
    ];
    let mut rows = Vec::with_capacity(u.len());
    let mut residual = 0.0f64;
    for (j, t) in u.nodes().enumerate() {
        let r = geom.r_unchecked(t);
        let rp = geom.rprime_unchecked(t);
        let rpp = geom.rsecond_of_t(t).expect("node inside [0, 1]");
        let row = RadialRow {
            t,
            r,
            u: u.values()[j],
            du_dt: u.derivs()[j],
            v: v.values()[j],
            dv_dt: v.derivs()[j],
            grad_u: (u.derivs()[j] / rp).abs(),
            grad_v: (v.derivs()[j] / rp).abs(),
        };
        let point = [r, row.u, row.v, row.grad_u, row.grad_v];
        for (i, (dt, d2t)) in Component::BOTH
            .into_iter()
            .zip([(row.du_dt, second[0][j]), (row.dv_dt, second[1][j])])
        {
            let wr = dt / rp;
            let wrr = (d2t - wr * rpp) / (rp * rp);
            if let Ok(f) = sys.eval_f(i, &point) {
                residual = residual.max((-wrr - (n_dim - 1.0) / r * wr - f).abs());
            } else {
                residual = f64::INFINITY;
            }
        }
        rows.push(row);
    }
    RadialProfile {
        rows,
        radial_residual: residual,
    }
}

impl RadialProfile {
    /// Writes the table as CSV with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.t, r.r, r.u, r.du_dt, r.v, r.dv_dt, r.grad_u, r.grad_v
            )?;
        }
        Ok(())
    }
}
