//! Green's kernel of `-w'' + omega^2 w` on `[0, 1]` with `w'(0) = w'(1) = 0`.
//!
//! ```text
//!              1          | cosh(omega (1 - t)) cosh(omega s),  s <= t
//! k(t, s) = ------------- |
//!           omega sinh omega | cosh(omega (1 - s)) cosh(omega t),  t <= s
//! ```
//!
//! Products of hyperbolic functions are evaluated through exponentials whose
//! arguments are all non-positive, so nothing overflows for `omega <= 50`.

use serde::Serialize;

use crate::error::{check_unit, Error, Result};

/// Largest shift accepted by [`ShiftedKernel::new`].
pub const MAX_OMEGA: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedKernel {
    omega: f64,
    sinh_omega: f64,
    cosh_omega: f64,
    /// `2 (1 - exp(-2 omega))`, the common denominator of the balanced forms.
    denom: f64,
}

/// Closed-form constants attached to one kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelConstants {
    /// `(sup_t int k(t,s) ds)^-1`.
    pub m: f64,
    /// `(inf_t int k(t,s) ds)^-1`.
    pub big_m: f64,
    /// `(sup_t int |dk/dt(t,s)| ds)^-1`.
    pub m_star: f64,
    /// `min k(t,s) / phi(s)`.
    pub c_k: f64,
    /// Cone constant `c_k min(1, 1/omega)`.
    pub c: f64,
}

impl ShiftedKernel {
    pub fn new(omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidShift(format!(
                "omega = {omega} must be positive"
            )));
        }
        if omega > MAX_OMEGA {
            return Err(Error::InvalidShift(format!(
                "omega = {omega} exceeds {MAX_OMEGA}; the kernel is numerically degenerate"
            )));
        }
        Ok(Self {
            omega,
            sinh_omega: omega.sinh(),
            cosh_omega: omega.cosh(),
            denom: -2.0 * (-2.0 * omega).exp_m1(),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn sinh_omega(&self) -> f64 {
        self.sinh_omega
    }

    pub fn cosh_omega(&self) -> f64 {
        self.cosh_omega
    }

    pub fn k(&self, t: f64, s: f64) -> Result<f64> {
        check_unit("t", t)?;
        check_unit("s", s)?;
        Ok(self.k_unchecked(t, s))
    }

    /// `dk/dt`. On the diagonal `t = s` the `s > t` branch is returned.
    pub fn dk_dt(&self, t: f64, s: f64) -> Result<f64> {
        check_unit("t", t)?;
        check_unit("s", s)?;
        Ok(self.dk_dt_unchecked(t, s))
    }

    /// `phi(s) = sup_t k(t, s) = k(s, s)`.
    pub fn phi(&self, s: f64) -> Result<f64> {
        check_unit("s", s)?;
        Ok(self.k_unchecked(s, s))
    }

    pub fn constants(&self) -> KernelConstants {
        let w = self.omega;
        let half_sinh = (0.5 * w).sinh();
        let c_k = 1.0 / self.cosh_omega;
        KernelConstants {
            m: w * w,
            big_m: w * w,
            m_star: w * self.sinh_omega / (2.0 * half_sinh * half_sinh),
            c_k,
            c: c_k * 1f64.min(1.0 / w),
        }
    }

    /// `int_0^1 k(t, s) ds`, integrated analytically on `[0, t]` and `[t, 1]`.
    pub fn row_integral(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        let w = self.omega;
        let (a, b) = (w * t, w * (1.0 - t));
        Ok((self.sinh_cosh(a, b) + self.sinh_cosh(b, a)) / (w * w))
    }

    /// `int_0^1 |dk/dt(t, s)| ds = 2 sinh(omega t) sinh(omega (1-t)) / (omega sinh omega)`.
    pub fn abs_deriv_row_integral(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        let w = self.omega;
        Ok(2.0 * self.sinh_sinh(w * t, w * (1.0 - t)) / w)
    }

    pub(crate) fn k_unchecked(&self, t: f64, s: f64) -> f64 {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        self.cosh_cosh(self.omega * (1.0 - hi), self.omega * lo) / self.omega
    }

    pub(crate) fn dk_dt_unchecked(&self, t: f64, s: f64) -> f64 {
        if s < t {
            -self.sinh_cosh(self.omega * (1.0 - t), self.omega * s)
        } else {
            self.sinh_cosh(self.omega * t, self.omega * (1.0 - s))
        }
    }

    /// `cosh(a) cosh(b) / sinh(omega)` for `a, b >= 0`, `a + b <= omega`.
    fn cosh_cosh(&self, a: f64, b: f64) -> f64 {
        let w = self.omega;
        ((a + b - w).exp() + (a - b - w).exp() + (b - a - w).exp() + (-a - b - w).exp())
            / self.denom
    }

    /// `sinh(a) cosh(b) / sinh(omega)`.
    fn sinh_cosh(&self, a: f64, b: f64) -> f64 {
        let w = self.omega;
        ((a + b - w).exp() + (a - b - w).exp() - (b - a - w).exp() - (-a - b - w).exp())
            / self.denom
    }

    /// `sinh(a) sinh(b) / sinh(omega)`.
    fn sinh_sinh(&self, a: f64, b: f64) -> f64 {
        let w = self.omega;
        ((a + b - w).exp() - (a - b - w).exp() - (b - a - w).exp() + (-a - b - w).exp())
            / self.denom
    }
}
