//! Sampled verification of the growth conditions behind the existence,
//! multiplicity and non-existence theorems.
//!
//! Each condition compares an infimum or supremum of `f_i` over a box in
//! `(r, w1, w2, z1, z2)` space with a threshold. Extrema are estimated by
//! [`box_extremum`]; verdicts are therefore sampled, not certified.

mod boxes;
mod extremum;

use serde::Serialize;

pub use boxes::{make_box, Box5, BoxKind, Interval};
pub use extremum::{box_extremum, BoxExtremum, Budget, Mode};

use crate::error::{Error, Result};
use crate::system::{Component, NonlinearSystem};

/// Relative slack below which a positive margin is not trusted.
pub const STRICT_RELATIVE_GUARD: f64 = 1e-12;

/// Lower end of the own-component range in the non-existence check.
pub const NONEXISTENCE_DELTA: f64 = 1e-6;

/// A strict inequality `margin > 0` that also demands the margin be
/// resolvable against the magnitudes being compared.
pub fn strict_pass(margin: f64, extremum: f64, threshold: f64) -> bool {
    margin > 0.0 && margin > STRICT_RELATIVE_GUARD * extremum.abs().max(threshold.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// The outcome of one sampled inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    /// For example `uno[i=1]`.
    pub condition: String,
    pub verdict: Verdict,
    /// Whether the extremum is an infimum or a supremum.
    pub mode: Mode,
    pub extremum: f64,
    pub threshold: f64,
    /// `threshold - extremum` for sup conditions, `extremum - threshold` for
    /// inf conditions.
    pub margin: f64,
    pub witness: Option<[f64; 5]>,
    pub samples: usize,
    /// Always false: sampling does not prove the inequality.
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConditionReport {
    fn new(condition: String, mode: Mode, extremum: f64, threshold: f64) -> Self {
        let margin = match mode {
            Mode::Sup => threshold - extremum,
            Mode::Inf => extremum - threshold,
        };
        Self {
            condition,
            verdict: Verdict::from_bool(strict_pass(margin, extremum, threshold)),
            mode,
            extremum,
            threshold,
            margin,
            witness: None,
            samples: 0,
            certified: false,
            note: None,
        }
    }

    fn sampled(condition: String, mode: Mode, found: BoxExtremum, threshold: f64) -> Self {
        Self {
            witness: Some(found.witness),
            samples: found.samples,
            ..Self::new(condition, mode, found.value, threshold)
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Radii thresholds `rho < s` (two levels) or `rho < s < theta < sigma`
/// (four levels), one value per component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiiLadder {
    pub rho: [f64; 2],
    pub s: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderMode {
    TwoLevel,
    FourLevel,
}

impl RadiiLadder {
    pub fn two_level(rho: [f64; 2], s: [f64; 2]) -> Result<Self> {
        let ladder = Self {
            rho,
            s,
            theta: None,
            sigma: None,
        };
        ladder.validate()?;
        Ok(ladder)
    }

    pub fn four_level(
        rho: [f64; 2],
        s: [f64; 2],
        theta: [f64; 2],
        sigma: [f64; 2],
    ) -> Result<Self> {
        let ladder = Self {
            rho,
            s,
            theta: Some(theta),
            sigma: Some(sigma),
        };
        ladder.validate()?;
        Ok(ladder)
    }

    /// The ladder of the three-solution example.
    pub fn example() -> Self {
        let [rho, s, theta, sigma] = crate::system::example::LADDER;
        Self::four_level(rho, s, theta, sigma).expect("valid ladder")
    }

    pub fn mode(&self) -> LadderMode {
        if self.theta.is_some() {
            LadderMode::FourLevel
        } else {
            LadderMode::TwoLevel
        }
    }

    /// Largest threshold of the ladder.
    pub fn max_level(&self) -> f64 {
        self.levels().flatten().fold(0.0, f64::max)
    }

    fn levels(&self) -> impl Iterator<Item = [f64; 2]> {
        [Some(self.rho), Some(self.s), self.theta, self.sigma]
            .into_iter()
            .flatten()
    }

    /// Shift-independent ordering: every value positive and finite, and the
    /// levels strictly increasing per component.
    fn validate(&self) -> Result<()> {
        if self.theta.is_some() != self.sigma.is_some() {
            return Err(Error::InvalidLadder(
                "theta and sigma must be given together".into(),
            ));
        }
        let names = ["rho", "s", "theta", "sigma"];
        let levels: Vec<[f64; 2]> = self.levels().collect();
        for (name, level) in names.iter().zip(&levels) {
            for (i, x) in level.iter().enumerate() {
                if !(x.is_finite() && *x > 0.0) {
                    return Err(Error::InvalidLadder(format!(
                        "{name}{} = {x} must be positive",
                        i + 1
                    )));
                }
            }
        }
        for k in 1..levels.len() {
            for i in 0..2 {
                if levels[k - 1][i] >= levels[k][i] {
                    return Err(Error::InvalidLadder(format!(
                        "{}{i1} = {} must be below {}{i1} = {}",
                        names[k - 1],
                        levels[k - 1][i],
                        names[k],
                        levels[k][i],
                        i1 = i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Checks the shift-dependent ladder inequalities: `rho_i / c_i < c_i s_i`
/// for two levels, `s_i / c_i < c_i theta_i` for four levels.
pub fn check_ladder(sys: &NonlinearSystem, ladder: &RadiiLadder) -> Vec<ConditionReport> {
    Component::BOTH
        .iter()
        .map(|&i| {
            let k = i.index();
            let c = sys.cone_constant(i);
            let (lower, upper) = match ladder.theta {
                None => (ladder.rho[k], ladder.s[k]),
                Some(theta) => (ladder.s[k], theta[k]),
            };
            let mut report = ConditionReport::new(
                format!("ladder[{}]", i.label()),
                Mode::Sup,
                lower / c,
                c * upper,
            );
            if !report.passed() && ladder.theta.is_some() && lower / c < upper {
                report.note = Some(format!(
                    "only the weaker inclusion s/c = {} < theta = {} holds",
                    lower / c,
                    upper
                ));
            }
            report
        })
        .collect()
}

/// Reports for one theorem and the verdict they combine into.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub theorem: &'static str,
    pub reports: Vec<ConditionReport>,
    /// Conjunction of the box conditions (ladder and (H) are reported
    /// separately).
    pub verdict: Verdict,
}

fn require_mode(ladder: &RadiiLadder, mode: LadderMode) -> Result<()> {
    if ladder.mode() == mode {
        Ok(())
    } else {
        Err(Error::InvalidLadder(format!(
            "this theorem needs a {mode:?} ladder, got {:?}",
            ladder.mode()
        )))
    }
}

/// `(min(m, m*) - w^2) level / sup d`.
fn upper_threshold(sys: &NonlinearSystem, i: Component, level: f64) -> f64 {
    let k = sys.constants(i);
    let w = sys.omega(i);
    let (_, sup_d) = sys.geometry().d_extrema();
    (k.m.min(k.m_star) - w * w) * level / sup_d
}

fn cone_constants(sys: &NonlinearSystem) -> [f64; 2] {
    Component::BOTH.map(|i| sys.cone_constant(i))
}

/// `sup` over the `A~_i` box at `levels` against the upper threshold.
fn sup_condition(
    sys: &NonlinearSystem,
    name: &str,
    i: Component,
    levels: [f64; 2],
    budget: Budget,
) -> Result<ConditionReport> {
    let bx = make_box(
        BoxKind::ATilde(i),
        levels,
        sys.geometry(),
        cone_constants(sys),
    )?;
    let found = box_extremum(sys.f(i), &bx, Mode::Sup, budget)?;
    let threshold = upper_threshold(sys, i, levels[i.index()]);
    Ok(ConditionReport::sampled(
        format!("{name}[{}]", i.label()),
        Mode::Sup,
        found,
        threshold,
    ))
}

/// `inf` over the `Omega~_i` box at `levels` against zero.
fn inf_condition(
    sys: &NonlinearSystem,
    name: &str,
    i: Component,
    levels: [f64; 2],
    budget: Budget,
) -> Result<ConditionReport> {
    let bx = make_box(
        BoxKind::OmegaTilde(i),
        levels,
        sys.geometry(),
        cone_constants(sys),
    )?;
    let found = box_extremum(sys.f(i), &bx, Mode::Inf, budget)?;
    Ok(ConditionReport::sampled(
        format!("{name}[{}]", i.label()),
        Mode::Inf,
        found,
        0.0,
    ))
}

fn all_pass(reports: &[ConditionReport]) -> bool {
    reports.iter().all(ConditionReport::passed)
}

/// One solution in `K_s \ V_rho`: `inf f_i > 0` on `Omega~_i(rho)` (pde1) and
/// `sup f_i` below the upper threshold on `A~_i(s)` (pde2).
pub fn check_theorem_ellyptic(
    sys: &NonlinearSystem,
    ladder: &RadiiLadder,
    budget: Budget,
) -> Result<TheoremCheck> {
    require_mode(ladder, LadderMode::TwoLevel)?;
    let mut reports = Vec::with_capacity(4);
    for i in Component::BOTH {
        reports.push(inf_condition(sys, "pde1", i, ladder.rho, budget)?);
    }
    for i in Component::BOTH {
        reports.push(sup_condition(sys, "pde2", i, ladder.s, budget)?);
    }
    let verdict = Verdict::from_bool(all_pass(&reports));
    Ok(TheoremCheck {
        theorem: "ellyptic",
        reports,
        verdict,
    })
}

/// Variant with the relaxed lower box: `inf f_i > w_i^2 rho_i / inf d` on
/// `Omega~*(rho)` for at least one `i` (pde3), plus (pde4) as (pde2).
pub fn check_theorem_ellyptic2(
    sys: &NonlinearSystem,
    ladder: &RadiiLadder,
    budget: Budget,
) -> Result<TheoremCheck> {
    require_mode(ladder, LadderMode::TwoLevel)?;
    let (inf_d, _) = sys.geometry().d_extrema();
    let star = make_box(
        BoxKind::OmegaTildeStar,
        ladder.rho,
        sys.geometry(),
        cone_constants(sys),
    )?;
    let mut reports = Vec::with_capacity(4);
    for i in Component::BOTH {
        let found = box_extremum(sys.f(i), &star, Mode::Inf, budget)?;
        let threshold = sys.omega(i).powi(2) * ladder.rho[i.index()] / inf_d;
        let mut report =
            ConditionReport::sampled(format!("pde3[{}]", i.label()), Mode::Inf, found, threshold);
        report.note = Some("required for at least one component".into());
        reports.push(report);
    }
    for i in Component::BOTH {
        reports.push(sup_condition(sys, "pde4", i, ladder.s, budget)?);
    }
    let pass = (reports[0].passed() || reports[1].passed()) && all_pass(&reports[2..]);
    Ok(TheoremCheck {
        theorem: "ellyptic2",
        reports,
        verdict: Verdict::from_bool(pass),
    })
}

/// Three solutions: (uno) sup on `A~_i(rho)`, (due) inf on `Omega~_i(s)`,
/// (tre) sup on `A~_i(theta)`, (quattro) inf on `Omega~_i(sigma)`.
pub fn check_theorem_multi2(
    sys: &NonlinearSystem,
    ladder: &RadiiLadder,
    budget: Budget,
) -> Result<TheoremCheck> {
    require_mode(ladder, LadderMode::FourLevel)?;
    let theta = ladder.theta.expect("four-level ladder");
    let sigma = ladder.sigma.expect("four-level ladder");
    let mut reports = Vec::with_capacity(8);
    for i in Component::BOTH {
        reports.push(sup_condition(sys, "uno", i, ladder.rho, budget)?);
    }
    for i in Component::BOTH {
        reports.push(inf_condition(sys, "due", i, ladder.s, budget)?);
    }
    for i in Component::BOTH {
        reports.push(sup_condition(sys, "tre", i, theta, budget)?);
    }
    for i in Component::BOTH {
        reports.push(inf_condition(sys, "quattro", i, sigma, budget)?);
    }
    let verdict = Verdict::from_bool(all_pass(&reports));
    Ok(TheoremCheck {
        theorem: "multi2",
        reports,
        verdict,
    })
}

/// Sign conditions of the non-existence theorem on a bounded box: `f_i < 0`
/// (cond1) or `f_i > 0` (cond2) for both `i` wherever the own component
/// `w_i` lies in `[delta, bound]`; the other coordinates range over
/// `[0, bound]` and `r` over `[R0, R1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonexistenceCheck {
    pub bound: f64,
    pub cond1: ConditionReport,
    pub cond2: ConditionReport,
}

impl NonexistenceCheck {
    pub fn any_pass(&self) -> bool {
        self.cond1.passed() || self.cond2.passed()
    }
}

pub fn check_nonexistence(
    sys: &NonlinearSystem,
    budget: Budget,
    bound: f64,
) -> Result<NonexistenceCheck> {
    if !(bound > NONEXISTENCE_DELTA && bound.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sampling bound {bound} must exceed {NONEXISTENCE_DELTA}"
        )));
    }
    let geom = sys.geometry();
    let mut sups = Vec::with_capacity(2);
    let mut infs = Vec::with_capacity(2);
    for i in Component::BOTH {
        let mut bounds = [
            (geom.r0(), geom.r1()),
            (0.0, bound),
            (0.0, bound),
            (0.0, bound),
            (0.0, bound),
        ];
        bounds[i.state_slot()].0 = NONEXISTENCE_DELTA;
        let bx = Box5::new(bounds)?;
        sups.push(box_extremum(sys.f(i), &bx, Mode::Sup, budget)?);
        infs.push(box_extremum(sys.f(i), &bx, Mode::Inf, budget)?);
    }
    let worst_sup = if sups[1].value > sups[0].value {
        sups[1]
    } else {
        sups[0]
    };
    let worst_inf = if infs[1].value < infs[0].value {
        infs[1]
    } else {
        infs[0]
    };
    let samples = sups.iter().chain(&infs).map(|e| e.samples).sum::<usize>() / 2;
    let mut cond1 = ConditionReport::sampled("cond1".into(), Mode::Sup, worst_sup, 0.0);
    let mut cond2 = ConditionReport::sampled("cond2".into(), Mode::Inf, worst_inf, 0.0);
    cond1.samples = samples;
    cond2.samples = samples;
    Ok(NonexistenceCheck {
        bound,
        cond1,
        cond2,
    })
}
