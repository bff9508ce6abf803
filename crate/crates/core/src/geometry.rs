//! Radial change of variables between the annulus `R0 < |x| < R1` in
//! dimension `n` and the unit interval.
//!
//! For `n = 2` the map is `r(t) = R1^(1-t) R0^t` (decreasing in `t`); for
//! `n >= 3` it is `r(t) = (A / (B - t))^(1/(n-2))` (increasing in `t`). In both
//! cases a radial function `w(r)` solving `-w'' - (n-1)/r w' = f` becomes
//! `-w''(t) = d(t) f` with the weight `d(t) = r'(t)^2`.

use serde::Serialize;

use crate::error::{check_unit, Error, Result};

/// Relative gap below which `r1 - r0` is treated as a degenerate annulus.
pub const MIN_RELATIVE_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusGeometry {
    n: u32,
    r0: f64,
    r1: f64,
    #[serde(skip)]
    branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Branch {
    /// `ln(R1/R0)`.
    Planar { log_ratio: f64 },
    /// `p = n - 2` with the constants `A`, `B` of the power-law map.
    Power { p: f64, a: f64, b: f64 },
}

impl AnnulusGeometry {
    pub fn new(n: u32, r0: f64, r1: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGeometry(format!(
                "dimension n = {n} must be at least 2"
            )));
        }
        if !(r0.is_finite() && r1.is_finite()) || r0 <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "radii must be finite with r0 > 0 (got r0 = {r0}, r1 = {r1})"
            )));
        }
        if r1 <= r0 {
            return Err(Error::InvalidGeometry(format!(
                "r1 = {r1} must exceed r0 = {r0}"
            )));
        }
        if r1 - r0 < MIN_RELATIVE_GAP * r0 {
            return Err(Error::InvalidGeometry(format!(
                "annulus [{r0}, {r1}] is degenerate (gap below {MIN_RELATIVE_GAP:e} r0)"
            )));
        }
        let branch = if n == 2 {
            Branch::Planar {
                log_ratio: (r1 / r0).ln(),
            }
        } else {
            let p = f64::from(n - 2);
            let r0p = r0.powf(p);
            let r1p = r1.powf(p);
            let span = r1p - r0p;
            Branch::Power {
                p,
                a: (r0 * r1).powf(p) / span,
                b: r1p / span,
            }
        };
        Ok(Self { n, r0, r1, branch })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    /// Radius at `t`.
    pub fn r_of_t(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        Ok(self.r_unchecked(t))
    }

    /// Signed derivative `dr/dt`. Negative for `n = 2`, positive for `n >= 3`.
    pub fn rprime_of_t(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        Ok(self.rprime_unchecked(t))
    }

    /// Second derivative `d^2 r / dt^2`, used to pull solutions back to the
    /// radial variable.
    pub fn rsecond_of_t(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        Ok(match self.branch {
            Branch::Planar { log_ratio } => self.r_unchecked(t) * log_ratio * log_ratio,
            Branch::Power { p, b, .. } => {
                let gap = b - t;
                self.r_unchecked(t) * (1.0 + p) / (p * p * gap * gap)
            }
        })
    }

    /// Weight `d(t)` from its closed form (not via `r'`).
    pub fn d_of_t(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        Ok(self.d_unchecked(t))
    }

    /// `(inf d, sup d)` over `[0, 1]`. `d` is monotone, so the extrema sit at
    /// the endpoints.
    pub fn d_extrema(&self) -> (f64, f64) {
        let d0 = self.d_unchecked(0.0);
        let d1 = self.d_unchecked(1.0);
        (d0.min(d1), d0.max(d1))
    }

    /// `inf |r'(t)|` over `[0, 1]`; `|r'|` is monotone for both branches.
    pub fn alpha(&self) -> f64 {
        self.rprime_unchecked(0.0)
            .abs()
            .min(self.rprime_unchecked(1.0).abs())
    }

    pub(crate) fn r_unchecked(&self, t: f64) -> f64 {
        match self.branch {
            Branch::Planar { log_ratio } => self.r1 * (-t * log_ratio).exp(),
            Branch::Power { p, a, b } => (a / (b - t)).powf(1.0 / p),
        }
    }

    pub(crate) fn rprime_unchecked(&self, t: f64) -> f64 {
        match self.branch {
            Branch::Planar { log_ratio } => -self.r_unchecked(t) * log_ratio,
            Branch::Power { p, b, .. } => self.r_unchecked(t) / (p * (b - t)),
        }
    }

    pub(crate) fn d_unchecked(&self, t: f64) -> f64 {
        match self.branch {
            Branch::Planar { log_ratio } => {
                let r = self.r_unchecked(t);
                r * r * log_ratio * log_ratio
            }
            Branch::Power { p, .. } => {
                let r0p = self.r0.powf(p);
                let r1p = self.r1.powf(p);
                let span = r1p - r0p;
                let lead = self.r0 * self.r1 * span / p;
                let n = f64::from(self.n);
                lead * lead / (r1p - span * t).powf(2.0 * (n - 1.0) / p)
            }
        }
    }
}

/// Geometry sampled at one collocation node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeGeometry {
    pub t: f64,
    pub r: f64,
    pub d: f64,
    pub abs_rprime: f64,
}

impl AnnulusGeometry {
    pub fn node(&self, t: f64) -> Result<NodeGeometry> {
        check_unit("t", t)?;
        Ok(NodeGeometry {
            t,
            r: self.r_unchecked(t),
            d: self.d_unchecked(t),
            abs_rprime: self.rprime_unchecked(t).abs(),
        })
    }
}
