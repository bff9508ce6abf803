use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::AnnulusGeometry;
use crate::system::Component;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidBox(format!(
                "[{lo}, {hi}] is not a closed interval"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A product of closed intervals for `(r, w1, w2, z1, z2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Box5 {
    pub intervals: [Interval; 5],
}

impl Box5 {
    /// Checks that every interval is closed and that the `w`, `z`
    /// coordinates are non-negative.
    pub fn new(bounds: [(f64, f64); 5]) -> Result<Self> {
        let mut intervals = [Interval { lo: 0.0, hi: 0.0 }; 5];
        for (k, (lo, hi)) in bounds.into_iter().enumerate() {
            intervals[k] = Interval::new(lo, hi)?;
            if k > 0 && lo < 0.0 {
                return Err(Error::InvalidBox(format!(
                    "coordinate {k} starts at {lo}; only r may be negative"
                )));
            }
        }
        if intervals[0].lo <= 0.0 {
            return Err(Error::InvalidBox("radius interval must be positive".into()));
        }
        Ok(Self { intervals })
    }

    pub fn contains(&self, x: &[f64; 5]) -> bool {
        self.intervals.iter().zip(x).all(|(i, &v)| i.contains(v))
    }

    pub fn lower(&self) -> [f64; 5] {
        self.intervals.map(|i| i.lo)
    }

    pub fn upper(&self) -> [f64; 5] {
        self.intervals.map(|i| i.hi)
    }
}

/// The three box families used by the existence theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxKind {
    /// Own component between the level and level/c, everything else up to
    /// level/c.
    OmegaTilde(Component),
    /// Own component between c times the level and the level.
    ATilde(Component),
    /// Both components from zero up to level/c.
    OmegaTildeStar,
}

/// Builds the box of `kind` at `levels = (l1, l2)` for cone constants `c`.
pub fn make_box(
    kind: BoxKind,
    levels: [f64; 2],
    geom: &AnnulusGeometry,
    c: [f64; 2],
) -> Result<Box5> {
    for (k, l) in levels.iter().enumerate() {
        if !(l.is_finite() && *l > 0.0) {
            return Err(Error::InvalidBox(format!(
                "level l{} = {l} must be positive",
                k + 1
            )));
        }
    }
    for (k, ci) in c.iter().enumerate() {
        if !(*ci > 0.0 && *ci <= 1.0) {
            return Err(Error::InvalidBox(format!(
                "cone constant c{} = {ci} outside (0, 1]",
                k + 1
            )));
        }
    }
    let alpha = geom.alpha();
    let r = (geom.r0(), geom.r1());
    let [l1, l2] = levels;
    let [c1, c2] = c;
    let bounds = match kind {
        BoxKind::OmegaTilde(i) => {
            let mut w = [(0.0, l1 / c1), (0.0, l2 / c2)];
            w[i.index()].0 = levels[i.index()];
            [
                r,
                w[0],
                w[1],
                (0.0, alpha * l1 / c1),
                (0.0, alpha * l2 / c2),
            ]
        }
        BoxKind::ATilde(i) => {
            let mut w = [(0.0, l1), (0.0, l2)];
            w[i.index()].0 = c[i.index()] * levels[i.index()];
            [r, w[0], w[1], (0.0, alpha * l1), (0.0, alpha * l2)]
        }
        BoxKind::OmegaTildeStar => [
            r,
            (0.0, l1 / c1),
            (0.0, l2 / c2),
            (0.0, alpha * l1 / c1),
            (0.0, alpha * l2 / c2),
        ],
    };
    Box5::new(bounds)
}
