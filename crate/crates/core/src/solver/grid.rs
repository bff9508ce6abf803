use serde::Serialize;

use crate::error::{Error, Result};

/// Samples of a function and its derivative on the uniform grid
/// `t_j = j / (N - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>, derivs: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || values.len() != derivs.len() {
            return Err(Error::InvalidArgument(format!(
                "grid function needs at least 2 nodes and matching derivative samples (got {} and {})",
                values.len(),
                derivs.len()
            )));
        }
        if values.iter().chain(&derivs).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "grid function samples must be finite".into(),
            ));
        }
        Ok(Self { values, derivs })
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self {
            values: vec![value; n],
            derivs: vec![0.0; n],
        }
    }

    /// Samples `f` and `df` at the nodes.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Self {
        let h = 1.0 / (n - 1) as f64;
        Self {
            values: (0..n).map(|j| f(j as f64 * h)).collect(),
            derivs: (0..n).map(|j| df(j as f64 * h)).collect(),
        }
    }

    /// Builds derivatives from the values by fourth-order differences, with
    /// the Neumann condition imposed exactly at both ends. Needs `N >= 5`.
    pub fn from_values_neumann(values: Vec<f64>) -> Result<Self> {
        if values.len() < 5 {
            return Err(Error::InvalidArgument(format!(
                "fourth-order differencing needs at least 5 nodes, got {}",
                values.len()
            )));
        }
        let derivs = neumann_derivatives(&values);
        Self::new(values, derivs)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid spacing `1 / (N - 1)`.
    pub fn h(&self) -> f64 {
        1.0 / (self.len() - 1) as f64
    }

    pub fn t(&self, j: usize) -> f64 {
        if j + 1 == self.len() {
            1.0
        } else {
            j as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|j| self.t(j))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn deriv_sup_norm(&self) -> f64 {
        self.derivs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max(|w|_inf, |w'|_inf)`.
    pub fn c1_norm(&self) -> f64 {
        self.sup_norm().max(self.deriv_sup_norm())
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max - min` of the values.
    pub fn oscillation(&self) -> f64 {
        self.max() - self.min()
    }

    /// `min w - c |w|_C1`; non-negative exactly when `w` lies in the cone.
    pub fn cone_margin(&self, c: f64) -> f64 {
        self.min() - c * self.c1_norm()
    }

    /// Keeps every `stride`-th node; `stride` must divide `N - 1`.
    pub fn restrict(&self, stride: usize) -> Result<Self> {
        if stride == 0 || !(self.len() - 1).is_multiple_of(stride) {
            return Err(Error::InvalidArgument(format!(
                "stride {stride} does not divide {} intervals",
                self.len() - 1
            )));
        }
        let pick = |xs: &[f64]| xs.iter().step_by(stride).copied().collect();
        Ok(Self {
            values: pick(&self.values),
            derivs: pick(&self.derivs),
        })
    }

    /// C1 distance measured on the nodes the two grids share. Grids must be
    /// nested (one node count is `2^k (M - 1) + 1` for the other's `M`).
    pub fn c1_distance(&self, other: &Self) -> Result<f64> {
        let (coarse, fine) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let intervals = coarse.len() - 1;
        if (fine.len() - 1) % intervals != 0 {
            return Err(Error::InvalidArgument(format!(
                "grids with {} and {} nodes are not nested",
                coarse.len(),
                fine.len()
            )));
        }
        let fine = fine.restrict((fine.len() - 1) / intervals)?;
        let dist = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
        };
        Ok(dist(&coarse.values, &fine.values).max(dist(&coarse.derivs, &fine.derivs)))
    }

    /// Value at any `t` in `[0, 1]` by local cubic interpolation.
    pub fn interpolate(&self, t: f64) -> f64 {
        cubic_at(&self.values, t)
    }
}

/// Fourth-order first derivatives with zero slope at both ends.
pub(crate) fn neumann_derivatives(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let inv = 1.0 / (12.0 / (n - 1) as f64);
    let mut d = vec![0.0; n];
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
    d[n - 2] =
        -(-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]) * inv;
    for j in 2..n - 2 {
        d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) * inv;
    }
    d
}

/// First node of the four-point stencil serving cell `[t_j, t_j+1]`.
pub(crate) fn stencil_start(j: usize, n: usize) -> usize {
    j.saturating_sub(1).min(n - 4)
}

/// Lagrange weights of the nodes `s, s+1, s+2, s+3` at local coordinate
/// `x = (t - t_s) / h`.
pub(crate) fn cubic_weights(x: f64) -> [f64; 4] {
    let (a, b, c, d) = (x, x - 1.0, x - 2.0, x - 3.0);
    [
        -b * c * d / 6.0,
        a * c * d / 2.0,
        -a * b * d / 2.0,
        a * b * c / 6.0,
    ]
}

fn cubic_at(f: &[f64], t: f64) -> f64 {
    let n = f.len();
    if n < 4 {
        // linear fallback for tiny grids
        let x = t * (n - 1) as f64;
        let j = (x.floor() as usize).min(n - 2);
        let w = x - j as f64;
        return f[j] * (1.0 - w) + f[j + 1] * w;
    }
    let x = t.clamp(0.0, 1.0) * (n - 1) as f64;
    let j = (x.floor() as usize).min(n - 2);
    let s = stencil_start(j, n);
    let w = cubic_weights(x - s as f64);
    (0..4).map(|k| w[k] * f[s + k]).sum()
}

pub(crate) fn refine_values(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut out = Vec::with_capacity(2 * n - 1);
    for j in 0..n - 1 {
        out.push(f[j]);
        out.push(cubic_at(f, (j as f64 + 0.5) / (n - 1) as f64));
    }
    out.push(f[n - 1]);
    out
}
