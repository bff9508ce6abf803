//! The pair of nonlinearities together with their shifts and geometry.
//!
//! On `[0, 1]` the radial system becomes
//!
//! ```text
//! -u'' + w1^2 u = g1(t, u, v, |u'|, |v'|),   g1 = d(t) f1(r(t), u, v, |u'|/|r'|, |v'|/|r'|) + w1^2 u
//! ```
//!
//! and likewise for `v`. Condition (H), `f_i >= -w_i^2 x_i / sup d` with
//! `x_1 = u`, `x_2 = v`, keeps `g_i` non-negative.

use serde::Serialize;

use crate::error::{check_unit, Error, Result};
use crate::expr::Expr;
use crate::geometry::{AnnulusGeometry, NodeGeometry};
use crate::kernel::{KernelConstants, ShiftedKernel};
use crate::sampling::{grid_min, linspace};

/// Which equation of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Component {
    U,
    V,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::U, Component::V];

    pub fn index(self) -> usize {
        self as usize
    }

    /// One-based label used in reports, `i=1` or `i=2`.
    pub fn label(self) -> &'static str {
        match self {
            Component::U => "i=1",
            Component::V => "i=2",
        }
    }

    /// Position of this component's own unknown in `(r, u, v, gu, gv)`.
    pub(crate) fn state_slot(self) -> usize {
        1 + self.index()
    }
}

#[derive(Debug, Clone)]
pub struct NonlinearSystem {
    f: [Expr; 2],
    kernels: [ShiftedKernel; 2],
    geom: AnnulusGeometry,
}

impl NonlinearSystem {
    pub fn new(
        f1: Expr,
        f2: Expr,
        omega1: f64,
        omega2: f64,
        geom: AnnulusGeometry,
    ) -> Result<Self> {
        Ok(Self {
            f: [f1, f2],
            kernels: [ShiftedKernel::new(omega1)?, ShiftedKernel::new(omega2)?],
            geom,
        })
    }

    /// Parses both nonlinearities from source text.
    pub fn from_sources(
        f1: &str,
        f2: &str,
        omega1: f64,
        omega2: f64,
        geom: AnnulusGeometry,
    ) -> Result<Self> {
        Self::new(Expr::parse(f1)?, Expr::parse(f2)?, omega1, omega2, geom)
    }

    /// Same nonlinearities and geometry under different shifts.
    pub fn with_shift(&self, omega1: f64, omega2: f64) -> Result<Self> {
        let [f1, f2] = self.f.clone();
        Self::new(f1, f2, omega1, omega2, self.geom)
    }

    pub fn f(&self, i: Component) -> &Expr {
        &self.f[i.index()]
    }

    pub fn kernel(&self, i: Component) -> &ShiftedKernel {
        &self.kernels[i.index()]
    }

    pub fn omega(&self, i: Component) -> f64 {
        self.kernels[i.index()].omega()
    }

    pub fn constants(&self, i: Component) -> KernelConstants {
        self.kernels[i.index()].constants()
    }

    /// The cone constant `c_i`.
    pub fn cone_constant(&self, i: Component) -> f64 {
        self.constants(i).c
    }

    pub fn geometry(&self) -> &AnnulusGeometry {
        &self.geom
    }

    /// `f_i(r, u, v, gu, gv)` with evaluation errors tagged by the point.
    pub fn eval_f(&self, i: Component, point: &[f64; 5]) -> Result<f64> {
        self.f[i.index()]
            .eval_point(point)
            .map_err(|e| Error::eval(e, *point))
    }

    /// `g_i(t, u, v, p, q)` for `t` in `[0, 1]` and non-negative arguments.
    pub fn eval_g(&self, i: Component, t: f64, u: f64, v: f64, p: f64, q: f64) -> Result<f64> {
        check_unit("t", t)?;
        for (what, x) in [("u", u), ("v", v), ("p", p), ("q", q)] {
            if !(x >= 0.0) {
                return Err(Error::Domain {
                    what,
                    value: x,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        let node = self.geom.node(t)?;
        self.g_at(i, &node, u, v, p, q)
    }

    /// `g_i` at a precomputed node; no sign checks on the arguments, which
    /// Newton iterates may violate by roundoff.
    pub(crate) fn g_at(
        &self,
        i: Component,
        node: &NodeGeometry,
        u: f64,
        v: f64,
        p: f64,
        q: f64,
    ) -> Result<f64> {
        let point = [node.r, u, v, p / node.abs_rprime, q / node.abs_rprime];
        let f = self.eval_f(i, &point)?;
        let w = self.omega(i);
        let state = if i == Component::U { u } else { v };
        Ok(node.d * f + w * w * state)
    }

    /// Samples condition (H) on `[R0, R1] x [0, z_bound]^4` with `density`
    /// points per axis.
    pub fn check_h(&self, density: usize, z_bound: f64) -> Result<HReport> {
        if density < 2 {
            return Err(Error::InvalidArgument(format!(
                "sample density {density} must be at least 2"
            )));
        }
        if !(z_bound > 0.0 && z_bound.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "box bound Z = {z_bound} must be positive"
            )));
        }
        let (_, sup_d) = self.geom.d_extrema();
        let z = linspace(0.0, z_bound, density);
        let axes = [
            linspace(self.geom.r0(), self.geom.r1(), density),
            z.clone(),
            z.clone(),
            z.clone(),
            z,
        ];
        let mut components = Vec::with_capacity(2);
        for i in Component::BOTH {
            let w2 = self.omega(i).powi(2);
            let slot = i.state_slot();
            let worst = grid_min(&axes, |x| Ok(self.eval_f(i, x)? + w2 * x[slot] / sup_d))?;
            components.push(HComponent {
                condition: format!("H[{}]", i.label()),
                pass: worst.value >= 0.0,
                worst_margin: worst.value,
                witness: worst.point,
            });
        }
        Ok(HReport {
            pass: components.iter().all(|c| c.pass),
            density,
            z_bound,
            samples: density.pow(5),
            components,
        })
    }
}

/// Result of sampling condition (H).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HReport {
    pub pass: bool,
    pub density: usize,
    /// Upper end of the sampled `u, v, gu, gv` range.
    pub z_bound: f64,
    /// Grid points per component.
    pub samples: usize,
    pub components: Vec<HComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HComponent {
    pub condition: String,
    pub pass: bool,
    /// Smallest sampled `f_i + w_i^2 x_i / sup d`.
    pub worst_margin: f64,
    /// `(r, u, v, gu, gv)` where the smallest margin was found.
    pub witness: [f64; 5],
}

/// The three-solution example: `n = 2`, `R0 = 1`, `R1 = e`, unit shifts.
pub mod example {
    pub const F1: &str =
        "exp(-(gu^2+gv^2+6))*u*(u-1-r^2/333)*(u-2-r^2/333)*(u-4-r^2/333)*(2-cos(v))";
    pub const F2: &str =
        "exp(-(gu^2+gv^2+7))*v*(v-1-r^2/333)*(v-4-r^2/333)*(v-7-r^2/333)*(2-sin(u))";
    pub const N: u32 = 2;
    pub const R0: f64 = 1.0;
    pub const R1: f64 = std::f64::consts::E;
    pub const OMEGA: f64 = 1.0;
    /// `(rho, s, theta, sigma)` per component.
    pub const LADDER: [[f64; 2]; 4] = [[0.5, 0.5], [1.1, 2.0], [3.5, 6.5], [5.0, 8.0]];

    pub fn system() -> super::NonlinearSystem {
        let geom = crate::AnnulusGeometry::new(N, R0, R1).expect("valid geometry");
        super::NonlinearSystem::from_sources(F1, F2, OMEGA, OMEGA, geom).expect("valid system")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::E;

    fn planar() -> AnnulusGeometry {
        AnnulusGeometry::new(2, 1.0, E).unwrap()
    }

    fn sys(f1: &str, f2: &str) -> NonlinearSystem {
        NonlinearSystem::from_sources(f1, f2, 1.0, 1.0, planar()).unwrap()
    }

    #[test]
    fn g_examples() {
        let zero = sys("0", "0");
        assert_eq!(
            zero.eval_g(Component::U, 0.5, 2.0, 0.0, 0.0, 0.0).unwrap(),
            2.0
        );
        let ex = example::system();
        assert_eq!(
            ex.eval_g(Component::U, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap(),
            0.0
        );
        let g = ex.eval_g(Component::U, 1.0, 0.5, 0.0, 0.0, 0.0).unwrap();
        assert!(
            (g - (0.5 - 0.003_282_268_075_829_377_6)).abs() < 1e-14,
            "{g}"
        );
    }

    #[test]
    fn gradient_arguments_are_scaled_by_rprime() {
        let s = sys("gu + 10*gv", "0");
        // at t = 0, |r'| = e
        let g = s.eval_g(Component::U, 0.0, 0.0, 0.0, E, 2.0 * E).unwrap();
        assert!((g - E * E * 21.0).abs() < 1e-12);
    }

    #[test]
    fn g_rejects_bad_arguments() {
        let s = sys("0", "0");
        assert!(matches!(
            s.eval_g(Component::U, 1.5, 0.0, 0.0, 0.0, 0.0),
            Err(Error::Domain { what: "t", .. })
        ));
        assert!(matches!(
            s.eval_g(Component::V, 0.5, 0.0, -1.0, 0.0, 0.0),
            Err(Error::Domain { what: "v", .. })
        ));
        let bad = sys("log(u)", "0");
        assert!(
            matches!(bad.eval_g(Component::U, 0.0, 0.0, 0.0, 0.0, 0.0), Err(Error::Eval { point, .. }) if point[0] == E)
        );
    }

    #[test]
    fn h_on_zero_nonlinearity() {
        let r = sys("0", "0").check_h(5, 1.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.components[0].worst_margin, 0.0);
        assert_eq!(r.components[0].witness[1], 0.0);
        assert_eq!(r.samples, 3125);
    }

    #[test]
    fn h_fails_for_linear_decay_stronger_than_the_shift() {
        let r = sys("-u", "0").check_h(5, 1.0).unwrap();
        assert!(!r.pass);
        let c = &r.components[0];
        assert!(!c.pass && r.components[1].pass);
        assert_eq!(c.witness[1], 1.0);
        assert!((c.worst_margin - (-1.0 + (-2.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn h_passes_for_weak_decay() {
        assert!(sys("-0.1*u", "-0.1*v").check_h(5, 10.0).unwrap().pass);
        assert!(!sys("-0.1*u", "-0.2*v").check_h(5, 10.0).unwrap().pass);
    }

    #[test]
    fn h_holds_for_the_example() {
        let r = example::system().check_h(9, 80.0).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn h_argument_errors() {
        let s = sys("0", "0");
        assert!(s.check_h(1, 1.0).is_err());
        assert!(s.check_h(3, 0.0).is_err());
        assert!(matches!(
            sys("1/u", "0").check_h(3, 1.0),
            Err(Error::Eval { .. })
        ));
    }

    #[test]
    fn g_is_nonnegative_when_h_passes() {
        let ex = example::system();
        let z = 80.0;
        assert!(ex.check_h(9, z).unwrap().pass);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100_000 {
            let t = rng.gen_range(0.0..=1.0);
            let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..=z));
            for i in Component::BOTH {
                let g = ex.eval_g(i, t, x[0], x[1], x[2], x[3]).unwrap();
                assert!(g >= -1e-12, "g = {g} at t = {t}, {x:?}");
            }
        }
    }
}
