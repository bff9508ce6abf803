//! Deterministic parallel scan over a tensor grid in five dimensions.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Best (smallest) objective value on a grid and where it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GridMin {
    pub value: f64,
    pub point: [f64; 5],
    pub samples: usize,
}

type Candidate = std::result::Result<(f64, usize), (usize, Error)>;

/// Minimises `objective` over the product of `axes`. Ties and competing
/// errors resolve to the lowest flat index, so the result does not depend on
/// how the work is split between threads.
pub(crate) fn grid_min<F>(axes: &[Vec<f64>; 5], objective: F) -> Result<GridMin>
where
    F: Fn(&[f64; 5]) -> Result<f64> + Sync,
{
    let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
    let total: usize = dims.iter().product();
    let point_at = |mut idx: usize| {
        let mut p = [0.0; 5];
        for k in (0..5).rev() {
            p[k] = axes[k][idx % dims[k]];
            idx /= dims[k];
        }
        p
    };
    let best = (0..total)
        .into_par_iter()
        .map(|idx| -> Candidate {
            objective(&point_at(idx))
                .map(|v| (v, idx))
                .map_err(|e| (idx, e))
        })
        .reduce(|| Ok((f64::INFINITY, usize::MAX)), pick);
    match best {
        Ok((value, idx)) if idx != usize::MAX => Ok(GridMin {
            value,
            point: point_at(idx),
            samples: total,
        }),
        Ok(_) => Err(Error::InvalidArgument("empty sampling grid".into())),
        Err((_, e)) => Err(e),
    }
}

fn pick(a: Candidate, b: Candidate) -> Candidate {
    match (a, b) {
        (Err(ea), Err(eb)) => {
            if ea.0 <= eb.0 {
                Err(ea)
            } else {
                Err(eb)
            }
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
        (Ok(x), Ok(y)) => {
            if x.0 < y.0 || (x.0 == y.0 && x.1 < y.1) {
                Ok(x)
            } else {
                Ok(y)
            }
        }
    }
}

/// `count` equally spaced points from `lo` to `hi` inclusive.
pub(crate) fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 || lo == hi {
        return vec![lo];
    }
    (0..count)
        .map(|j| {
            if j + 1 == count {
                hi
            } else {
                lo + (hi - lo) * j as f64 / (count - 1) as f64
            }
        })
        .collect()
}
