//! Machine-readable reports and their plain-text renderings.

use std::fmt::{self, Write as _};

use annulus_core::hypothesis::{ConditionReport, NonexistenceCheck, TheoremCheck, Verdict};
use annulus_core::solver::{SeedFailure, SolutionPair};
use annulus_core::system::HReport;
use annulus_core::{Component, NonlinearSystem};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub geometry: GeometryReport,
    pub components: Vec<ComponentConstants>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    pub n: u32,
    pub r0: f64,
    pub r1: f64,
    /// `min |r'(t)|`.
    pub alpha: f64,
    pub inf_d: f64,
    pub sup_d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentConstants {
    pub component: &'static str,
    pub omega: f64,
    pub m: f64,
    pub big_m: f64,
    pub m_star: f64,
    pub c_k: f64,
    pub c: f64,
    pub c_squared: f64,
    /// `(min(m, m*) - omega^2) / sup d`; times a level gives the threshold of
    /// the supremum conditions.
    pub sup_threshold_coefficient: f64,
    /// `omega^2 / inf d`; times `rho` gives the threshold of the relaxed
    /// infimum condition.
    pub star_threshold_coefficient: f64,
}

impl ConstantsReport {
    pub fn new(sys: &NonlinearSystem) -> Self {
        let geom = sys.geometry();
        let (inf_d, sup_d) = geom.d_extrema();
        let components = Component::BOTH
            .into_iter()
            .map(|i| {
                let k = sys.constants(i);
                let w2 = sys.omega(i).powi(2);
                ComponentConstants {
                    component: i.label(),
                    omega: sys.omega(i),
                    m: k.m,
                    big_m: k.big_m,
                    m_star: k.m_star,
                    c_k: k.c_k,
                    c: k.c,
                    c_squared: k.c * k.c,
                    sup_threshold_coefficient: (k.m.min(k.m_star) - w2) / sup_d,
                    star_threshold_coefficient: w2 / inf_d,
                }
            })
            .collect();
        Self {
            geometry: GeometryReport {
                n: geom.n(),
                r0: geom.r0(),
                r1: geom.r1(),
                alpha: geom.alpha(),
                inf_d,
                sup_d,
            },
            components,
        }
    }
}

impl fmt::Display for ConstantsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.geometry;
        writeln!(f, "geometry: n = {}, R0 = {}, R1 = {}", g.n, g.r0, g.r1)?;
        writeln!(
            f,
            "  alpha = {:.12}  inf d = {:.12}  sup d = {:.12}",
            g.alpha, g.inf_d, g.sup_d
        )?;
        for c in &self.components {
            writeln!(f, "component {} (omega = {}):", c.component, c.omega)?;
            writeln!(
                f,
                "  m = {:.12}  M = {:.12}  m* = {:.12}",
                c.m, c.big_m, c.m_star
            )?;
            writeln!(
                f,
                "  c_k = {:.12}  c = {:.12}  c^2 = {:.12}",
                c.c_k, c.c, c.c_squared
            )?;
            writeln!(
                f,
                "  (min(m,m*) - omega^2)/sup d = {:.12}  omega^2/inf d = {:.12}",
                c.sup_threshold_coefficient, c.star_threshold_coefficient
            )?;
        }
        Ok(())
    }
}

/// Everything `check` computes, with the overall verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckBundle {
    pub h: HReport,
    pub ladder: Vec<ConditionReport>,
    pub theorems: Vec<TheoremCheck>,
    /// (H) and the ladder hold and at least one theorem's box conditions
    /// pass.
    pub verdict: Verdict,
    /// One line per theorem, e.g. `multi2: hypotheses sampled-PASS`.
    pub summary: Vec<String>,
}

impl CheckBundle {
    pub fn new(h: HReport, ladder: Vec<ConditionReport>, theorems: Vec<TheoremCheck>) -> Self {
        let side = h.pass && ladder.iter().all(ConditionReport::passed);
        let summary = theorems
            .iter()
            .map(|t| {
                let ok = side && t.verdict.passed();
                format!(
                    "{}: hypotheses sampled-{}",
                    t.theorem,
                    if ok { "PASS" } else { "FAIL" }
                )
            })
            .collect();
        let verdict = Verdict::from_bool(side && theorems.iter().any(|t| t.verdict.passed()));
        Self {
            h,
            ladder,
            theorems,
            verdict,
            summary,
        }
    }

    /// All box-condition reports in theorem order.
    pub fn conditions(&self) -> impl Iterator<Item = &ConditionReport> {
        self.theorems.iter().flat_map(|t| &t.reports)
    }
}

fn write_condition(f: &mut fmt::Formatter<'_>, r: &ConditionReport) -> fmt::Result {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    let mode = match r.mode {
        annulus_core::hypothesis::Mode::Inf => "inf",
        annulus_core::hypothesis::Mode::Sup => "sup",
    };
    write!(
        f,
        "  {:<14} {verdict}  {mode} = {:+.6e}  threshold = {:+.6e}  margin = {:+.3e}",
        r.condition, r.extremum, r.threshold, r.margin
    )?;
    if let Some(note) = &r.note {
        write!(f, "  ({note})")?;
    }
    writeln!(f)
}

impl fmt::Display for CheckBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "condition (H), {} samples per component, Z = {}:",
            self.h.samples, self.h.z_bound
        )?;
        for c in &self.h.components {
            writeln!(
                f,
                "  {:<14} {}  worst margin = {:+.6e}",
                c.condition,
                if c.pass { "PASS" } else { "FAIL" },
                c.worst_margin
            )?;
        }
        writeln!(f, "ladder:")?;
        for r in &self.ladder {
            write_condition(f, r)?;
        }
        for t in &self.theorems {
            writeln!(f, "{}:", t.theorem)?;
            for r in &t.reports {
                write_condition(f, r)?;
            }
        }
        for line in &self.summary {
            writeln!(f, "{line}")?;
        }
        writeln!(
            f,
            "overall: {}",
            if self.verdict.passed() {
                "PASS"
            } else {
                "FAIL"
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Norms {
    pub u_c1: f64,
    pub v_c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionEntry {
    pub file: String,
    pub plot: String,
    pub norms: Norms,
    pub minima: [f64; 2],
    pub oscillation: [f64; 2],
    pub residual_sup: f64,
    pub collocation_residual: f64,
    pub radial_residual: f64,
    pub grid: usize,
    pub iterations: usize,
    pub cone_margins: [f64; 2],
    pub region: &'static str,
    pub nonconstant: [bool; 2],
    pub nonnegative: bool,
    pub degenerate: bool,
}

impl SolutionEntry {
    pub fn new(index: usize, sol: &SolutionPair, radial_residual: f64) -> Self {
        let [u_c1, v_c1] = sol.c1_norms();
        Self {
            file: format!("sol_{index}.csv"),
            plot: format!("sol_{index}.svg"),
            norms: Norms { u_c1, v_c1 },
            minima: sol.minima(),
            oscillation: [sol.u.oscillation(), sol.v.oscillation()],
            residual_sup: sol.residual_sup,
            collocation_residual: sol.collocation_residual,
            radial_residual,
            grid: sol.grid(),
            iterations: sol.iterations,
            cone_margins: sol.cone_margins,
            region: sol.region.label(),
            nonconstant: sol.nonconstant,
            nonnegative: sol.nonnegative,
            degenerate: sol.degenerate,
        }
    }
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSummary {
    pub constants: ConstantsReport,
    /// Solutions in S1, S2 or S3 needed for success.
    pub expected: usize,
    /// Distinct solutions found in S1, S2 or S3.
    pub found: usize,
    pub seeds: usize,
    pub solutions: Vec<SolutionEntry>,
    pub failures: Vec<SeedFailure>,
}

impl fmt::Display for SolveSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} seeds, {} distinct solutions, {} in target regions (need {}), {} seed failures",
            self.seeds,
            self.solutions.len(),
            self.found,
            self.expected,
            self.failures.len()
        )?;
        for s in &self.solutions {
            let mut flags = String::new();
            if s.degenerate {
                flags.push_str(" degenerate");
            }
            if !s.nonnegative {
                flags.push_str(" sign-violating");
            }
            if s.nonconstant.iter().any(|&b| b) {
                flags.push_str(" nonconstant");
            }
            writeln!(
                f,
                "  {:<11} {:<7} |u|C1 = {:.6}  |v|C1 = {:.6}  min = ({:.6}, {:.6})  residual = {:.2e}  N = {}{flags}",
                s.file, s.region, s.norms.u_c1, s.norms.v_c1, s.minima[0], s.minima[1], s.residual_sup, s.grid
            )?;
        }
        for e in &self.failures {
            writeln!(
                f,
                "  seed ({}, {}) failed: {}",
                e.seed[0], e.seed[1], e.error
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSolution {
    pub norms: Norms,
    pub minima: [f64; 2],
    pub sup_norm: f64,
    pub residual_sup: f64,
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub seeds: usize,
    pub bound: f64,
    pub solutions: Vec<SweepSolution>,
    pub failures: Vec<SeedFailure>,
    /// Distinct solutions with sup norm above the trivial tolerance.
    pub nontrivial: usize,
}

/// Contents of `nonexist.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonexistReport {
    pub signs: NonexistenceCheck,
    pub sweep: Sweep,
    /// `consistent-with-nonexistence`, `sign-conditions-fail` or
    /// `nontrivial-solution-found`.
    pub verdict: &'static str,
}

impl NonexistReport {
    pub fn new(signs: NonexistenceCheck, sweep: Sweep) -> Self {
        let verdict = if sweep.nontrivial > 0 {
            "nontrivial-solution-found"
        } else if signs.any_pass() {
            "consistent-with-nonexistence"
        } else {
            "sign-conditions-fail"
        };
        Self {
            signs,
            sweep,
            verdict,
        }
    }

    pub fn consistent(&self) -> bool {
        self.verdict == "consistent-with-nonexistence"
    }
}

impl fmt::Display for NonexistReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut conds = String::new();
        for r in [&self.signs.cond1, &self.signs.cond2] {
            let _ = write!(
                conds,
                "  {:<6} {}  {} = {:+.6e}",
                r.condition,
                if r.passed() { "PASS" } else { "FAIL" },
                if r.condition == "cond1" {
                    "sup f"
                } else {
                    "inf f"
                },
                r.extremum
            );
            if let Some(w) = r.witness {
                let _ = write!(
                    conds,
                    "  at (r, u, v, gu, gv) = ({:.4}, {:.4}, {:.4}, {:.4}, {:.4})",
                    w[0], w[1], w[2], w[3], w[4]
                );
            }
            conds.push('\n');
        }
        writeln!(f, "sign conditions on (0, {}]:", self.signs.bound)?;
        f.write_str(&conds)?;
        writeln!(
            f,
            "sweep: {} seeds in (0, {}]^2, {} distinct solutions, {} nontrivial, {} failures",
            self.sweep.seeds,
            self.sweep.bound,
            self.sweep.solutions.len(),
            self.sweep.nontrivial,
            self.sweep.failures.len()
        )?;
        writeln!(f, "verdict: {}", self.verdict)
    }
}
