use serde::Serialize;

use super::boxes::Box5;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::sampling::{grid_min, linspace};

/// Golden-section steps per axis and refinement round.
const LINE_SEARCH_STEPS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Inf,
    Sup,
}

/// Sampling effort for [`box_extremum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Grid points per axis (at least 3).
    pub base_per_axis: usize,
    /// Coordinate-refinement rounds after the grid pass.
    pub refine_rounds: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            base_per_axis: 9,
            refine_rounds: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxExtremum {
    pub value: f64,
    /// `(r, w1, w2, z1, z2)` attaining `value`.
    pub witness: [f64; 5],
    /// Function evaluations spent.
    pub samples: usize,
}

/// Estimates `inf` or `sup` of `f` over `bx`: a tensor grid with
/// `base_per_axis` points per axis, then `refine_rounds` sweeps of per-axis
/// golden-section search in a window around the incumbent whose half-width
/// starts at one grid cell and halves every round. Only strict improvements
/// are accepted, so more rounds never worsen the result.
pub fn box_extremum(f: &Expr, bx: &Box5, mode: Mode, budget: Budget) -> Result<BoxExtremum> {
    if budget.base_per_axis < 3 {
        return Err(Error::InvalidArgument(format!(
            "base_per_axis = {} must be at least 3",
            budget.base_per_axis
        )));
    }
    let sign = match mode {
        Mode::Inf => 1.0,
        Mode::Sup => -1.0,
    };
    let objective = |x: &[f64; 5]| -> Result<f64> {
        f.eval_point(x)
            .map(|v| sign * v)
            .map_err(|e| Error::eval(e, *x))
    };
    let axes = bx
        .intervals
        .map(|i| linspace(i.lo, i.hi, budget.base_per_axis));
    let grid = grid_min(&axes, objective)?;
    let mut best = grid.value;
    let mut x = grid.point;
    let mut samples = grid.samples;
    let cells = bx
        .intervals
        .map(|i| i.width() / (budget.base_per_axis - 1) as f64);

    for round in 0..budget.refine_rounds {
        let scale = 0.5f64.powi(round as i32);
        for k in 0..5 {
            let iv = bx.intervals[k];
            let half = cells[k] * scale;
            if half == 0.0 {
                continue;
            }
            let lo = (x[k] - half).max(iv.lo);
            let hi = (x[k] + half).min(iv.hi);
            let mut along = |s: f64| -> Result<f64> {
                let mut y = x;
                y[k] = s;
                samples += 1;
                objective(&y)
            };
            let (s, val) = line_min(&mut along, lo, hi)?;
            if val < best {
                best = val;
                x[k] = s;
            }
        }
    }
    Ok(BoxExtremum {
        value: sign * best,
        witness: x,
        samples,
    })
}

/// Golden-section search on `[a, b]`, also trying both ends. Returns the
/// best point seen.
fn line_min<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = (a, f(a)?);
    let fb = f(b)?;
    if fb < best.1 {
        best = (b, fb);
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..LINE_SEARCH_STEPS {
        if f1 < best.1 {
            best = (x1, f1);
        }
        if f2 < best.1 {
            best = (x2, f2);
        }
        if hi - lo <= f64::EPSILON * (lo.abs() + hi.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box() -> Box5 {
        Box5::new([(1.0, 2.0), (0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (0.0, 1.0)]).unwrap()
    }

    fn ex(src: &str) -> Expr {
        Expr::parse(src).unwrap()
    }

    #[test]
    fn coordinate_function() {
        let b = Box5::new([(1.0, 2.0), (0.324, 0.5), (0.0, 0.5), (0.0, 0.5), (0.0, 0.5)]).unwrap();
        let m = box_extremum(&ex("u"), &b, Mode::Inf, Budget::default()).unwrap();
        assert_eq!(m.value, 0.324);
        assert_eq!(m.witness[1], 0.324);
        let m = box_extremum(&ex("u"), &b, Mode::Sup, Budget::default()).unwrap();
        assert_eq!(m.value, 0.5);
    }

    #[test]
    fn constant_function() {
        for mode in [Mode::Inf, Mode::Sup] {
            let m = box_extremum(&ex("1"), &unit_box(), mode, Budget::default()).unwrap();
            assert_eq!(m.value, 1.0);
            assert!(unit_box().contains(&m.witness));
        }
    }

    #[test]
    fn separable_polynomials_are_located_exactly() {
        // minimisers off the grid in every coordinate
        let f =
            ex("(r-1.3141)^2 + (u-0.2718)^2 + (v-0.577)^4 + 3*(gu-0.1234)^2 + (gv-0.9)^2*(gv+1)");
        let m = box_extremum(&f, &unit_box(), Mode::Inf, Budget::default()).unwrap();
        // (gv-0.9)^2 (gv+1) is minimised at gv = 0.9 on [0, 1]
        assert!(m.value.abs() < 1e-9, "{m:?}");
        let want = [1.3141, 0.2718, 0.577, 0.1234, 0.9];
        for k in [0, 1, 3, 4] {
            assert!((m.witness[k] - want[k]).abs() < 1e-6, "{k}: {m:?}");
        }
        // sup of a separable cubic: each coordinate at its own maximiser
        let g = ex("u*(1-u) + 2*v*v*(1-v) + sin(3*gu)");
        let m = box_extremum(&g, &unit_box(), Mode::Sup, Budget::default()).unwrap();
        let exact = 0.25 + 2.0 * 4.0 / 27.0 + 1.0;
        assert!((m.value - exact).abs() < 1e-9, "{m:?}");
    }

    #[test]
    fn more_rounds_never_worsen() {
        let f = ex("sin(7*u)*cos(5*v) + r*gu - gv^2");
        let mut last = f64::INFINITY;
        for rounds in 0..6 {
            let m = box_extremum(
                &f,
                &unit_box(),
                Mode::Inf,
                Budget {
                    base_per_axis: 5,
                    refine_rounds: rounds,
                },
            )
            .unwrap();
            assert!(m.value <= last);
            last = m.value;
        }
        let mut last = f64::NEG_INFINITY;
        for base in [3, 5, 9, 17] {
            let m = box_extremum(
                &f,
                &unit_box(),
                Mode::Sup,
                Budget {
                    base_per_axis: base,
                    refine_rounds: 0,
                },
            )
            .unwrap();
            assert!(m.value >= last);
            last = m.value;
        }
    }

    #[test]
    fn deterministic() {
        let f = ex("sin(7*u)*cos(5*v) + r*gu - gv^2");
        let a = box_extremum(&f, &unit_box(), Mode::Sup, Budget::default()).unwrap();
        let b = box_extremum(&f, &unit_box(), Mode::Sup, Budget::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let small = Budget {
            base_per_axis: 2,
            refine_rounds: 0,
        };
        assert!(matches!(
            box_extremum(&ex("u"), &unit_box(), Mode::Inf, small),
            Err(Error::InvalidArgument(_))
        ));
        match box_extremum(&ex("log(u)"), &unit_box(), Mode::Inf, Budget::default()) {
            Err(Error::Eval { point, .. }) => assert_eq!(point[1], 0.0),
            other => panic!("{other:?}"),
        }
    }
}
