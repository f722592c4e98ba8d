//! Self-check suites over the invariants of every layer.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::airy::{airy_quad, airy_quad_asymptotic, airy_quad_taylor, airy_zero, log_derivs, AiryQuad, Branch};
use crate::error::Result;
use crate::metrics::{compare_to_exact, energy_expectation, orthogonality_defect, overlap_deviation, self_comparison};
use crate::problem::{EffectiveProfile, LevelKey, ProblemSetup};
use crate::quasi_uniform::{boundary_constant, riccati_residual, solve_boundary_match};
use crate::reference::{linear_exact_l0, numerov_solve, oscillator_exact, GridSpec};
use crate::spectral::{phase_is_monotone, solve_level};
use crate::tables::{level_report, TableKind, TABLE_REL_TOL};
use crate::wavefunction::ApproxState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Airy,
    Matching,
    Metrics,
    Numerov,
    Forced,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Airy => "airy",
            Suite::Matching => "matching",
            Suite::Metrics => "metrics",
            Suite::Numerov => "numerov",
            Suite::Forced => "forced",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Skip the Numerov cross-checks and the rescaled-table check.
    pub quick: bool,
    /// Append a check that always fails.
    pub force_fail: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    /// Records `worst <= tol`; an `Err` counts as a failure.
    fn bound(&mut self, name: &str, tol: f64, worst: Result<f64>) {
        let (passed, value, detail) = match worst {
            Ok(v) => (v <= tol, v, String::new()),
            Err(e) => (false, f64::NAN, e.to_string()),
        };
        self.checks.push(Check { suite: self.suite, name: name.to_string(), passed, value, tolerance: tol, detail });
    }

    fn holds(&mut self, name: &str, ok: Result<bool>) {
        let (passed, detail) = match ok {
            Ok(b) => (b, String::new()),
            Err(e) => (false, e.to_string()),
        };
        let value = if passed { 0.0 } else { 1.0 };
        self.checks.push(Check { suite: self.suite, name: name.to_string(), passed, value, tolerance: 0.0, detail });
    }
}

fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
}

/// `|W − 1/π|·π`.
pub fn wronskian_error(a: f64) -> Result<f64> {
    airy_quad(a).map(|q| (q.wronskian() * PI - 1.0).abs())
}

/// Disagreement between the Taylor and asymptotic evaluations, each
/// component scaled by its natural envelope.
pub fn regime_overlap_error(a: f64) -> Result<f64> {
    let (t, s) = (airy_quad_taylor(a)?, airy_quad_asymptotic(a)?);
    let scale = |q: &AiryQuad| -> [f64; 4] {
        if a < 0.0 {
            let m = (-a).powf(-0.25);
            [m, 1.0 / m, m, 1.0 / m]
        } else {
            [q.ai.abs(), q.aip.abs(), q.bi.abs(), q.bip.abs()]
        }
    };
    let w = scale(&s);
    let d = [t.ai - s.ai, t.aip - s.aip, t.bi - s.bi, t.bip - s.bip];
    Ok(d.iter().zip(w).fold(0.0, |m, (d, w)| m.max(d.abs() / w)))
}

/// Points in `[lo, hi]` including both ends.
fn span(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn airy_suite(rec: &mut Recorder) {
    // Bi overflows past a ≈ 104; the check covers everything representable.
    rec.bound("wronskian", 1e-12, worst(span(-60.0, 100.0, 641).map(wronskian_error)));
    // Both evaluations reach 1e-10 from |a| = 6.5 up to the end of the Taylor table.
    let overlap = span(-9.0, -6.5, 21).chain(span(6.5, 9.0, 21)).map(regime_overlap_error);
    rec.bound("regime-overlap", 1e-10, worst(overlap));
    rec.holds(
        "conjugate-branches",
        span(-30.0, 3.0, 34).try_fold(true, |ok, a| {
            let (p, m) = (log_derivs(a, Branch::PlusI)?, log_derivs(a, Branch::MinusI)?);
            Ok(ok && m.y1 == p.y1.conj() && m.y2 == p.y2.conj())
        }),
    );
    rec.bound(
        "zeros",
        1e-12,
        worst((1..=10).map(|k| airy_zero(k).and_then(airy_quad).map(|q| q.ai.abs()))),
    );
}

fn matching_suite(rec: &mut Recorder, quick: bool) {
    let ls: &[u32] = if quick { &[1, 2] } else { &[1, 2, 3] };
    rec.bound(
        "boundary-root",
        1e-12,
        worst(ls.iter().map(|&l| {
            let b = solve_boundary_match(l)?;
            Ok((boundary_constant(l, b.t_l)? - (l as f64 + 1.0)).abs())
        })),
    );
    rec.holds(
        "rejected-root-has-pole",
        ls.iter().try_fold(true, |ok, &l| {
            let b = solve_boundary_match(l)?;
            Ok(ok && b.rejected_pole.is_some() && b.t_l.abs() < b.rejected_t.abs())
        }),
    );
    let setup = ProblemSetup::default();
    let ns: &[u32] = if quick { &[0, 1] } else { &[0, 1, 2] };
    let mut jumps = Vec::new();
    for &l in ls {
        for &n in ns {
            jumps.push(ApproxState::build(&setup, LevelKey::new(n, l)).and_then(|s| s.junction_mismatch()).map(|j| j[0].max(j[1])));
        }
    }
    rec.bound("c1-junctions", 1e-10, worst(jumps));
    rec.holds("phase-monotone", {
        let (_, e_min) = setup.effective_minimum(1);
        phase_is_monotone(&setup, 1, e_min * 1.01, 20.0, 24)
    });
    let linear = ProblemSetup::with_exponent(1.0).expect("valid exponent");
    let nmax = if quick { 2 } else { 5 };
    rec.bound(
        "linear-l0-exact-energy",
        1e-8,
        worst((0..=nmax).map(|n| {
            let e = solve_level(&linear, LevelKey::new(n, 0))?.e_sp;
            let exact = -airy_zero(n + 1)? * linear.alpha * linear.length_unit();
            Ok((e / exact - 1.0).abs())
        })),
    );
    rec.bound("linear-l0-riccati-residual", 1e-9, {
        let e = -airy_zero(1).unwrap_or(f64::NAN);
        EffectiveProfile::new(linear, 0, e).and_then(|p| {
            worst(span(0.01, 3.0 * p.r_plus, 100).map(|r| riccati_residual(&p, r, Branch::Real(0.0)).map(|z| z.norm())))
        })
    });
}

fn metrics_suite(rec: &mut Recorder, quick: bool) {
    let setup = ProblemSetup::default();
    let level = LevelKey::new(0, 1);
    let built = ApproxState::build(&setup, level);
    let state = match built {
        Ok(s) => s,
        Err(e) => {
            rec.holds("build-oscillator-0-1", Err(e));
            return;
        }
    };
    rec.bound("normalization", 1e-10, state.integrate(|r| state.eval_psi(r).map(|p| p * p), 1e-12).map(|n| (n - 1.0).abs()));
    rec.bound("self-deviation", 1e-14, self_comparison(&state).map(|(a, b)| a.abs().max(b.abs())));
    rec.bound("orthogonality", 1e-10, orthogonality_defect(&state).map(f64::abs));
    rec.holds(
        "expectation-minimizes-defect",
        energy_expectation(&state).map(|e| {
            let at = e.defect_norm(e.e_bar);
            at < e.defect_norm(e.e_bar * 1.001) && at < e.defect_norm(e.e_bar * 0.999)
        }),
    );
    let exact = oscillator_exact(&setup, level);
    rec.bound(
        "overlap-forms-agree",
        1e-10,
        exact.as_ref().map_err(Clone::clone).and_then(|ex| {
            let r = compare_to_exact(&state, ex)?;
            Ok((overlap_deviation(&state, ex)? - r.delta_psi).abs())
        }),
    );
    rec.bound(
        "published-row-0-1",
        TABLE_REL_TOL,
        level_report(&setup, level, &GridSpec::default()).map(|r| {
            let row = crate::tables::TableRow { report: r, published: TableKind::Oscillator.published()[3] };
            row.max_rel_diff()
        }),
    );
    rec.bound(
        "linear-l0-discrepancy",
        1e-8,
        ApproxState::build(&ProblemSetup::with_exponent(1.0).expect("valid exponent"), LevelKey::new(0, 0))
            .and_then(|s| energy_expectation(&s))
            .map(|e| e.discrepancy()),
    );
    if !quick {
        rec.bound("scale-invariance", 1e-6, scale_invariance_error(level));
    }
}

/// Largest relative change of the four metrics of `level` under the
/// rescaling `ħ = 1.7, m = 0.3, α = 2.9` of the oscillator.
pub fn scale_invariance_error(level: LevelKey) -> Result<f64> {
    let base = ProblemSetup::default();
    let scaled = ProblemSetup::new(1.7, 0.3, 2.9, 2.0)?;
    let grid = GridSpec::default();
    let (a, b) = (level_report(&base, level, &grid)?, level_report(&scaled, level, &grid)?);
    let pairs = [
        (a.delta_psi, b.delta_psi),
        (a.delta_psi_prime, b.delta_psi_prime),
        (a.discrepancy_d, b.discrepancy_d),
        (a.delta_e, b.delta_e),
    ];
    Ok(pairs.iter().fold(0.0, |m, (x, y)| m.max((y / x - 1.0).abs())))
}

fn numerov_suite(rec: &mut Recorder) {
    let grid = GridSpec::default();
    let osc = ProblemSetup::default();
    let mut errs = Vec::new();
    for l in 0..=2 {
        for n in 0..=2 {
            let level = LevelKey::new(n, l);
            errs.push(numerov_solve(&osc, level, &grid).and_then(|s| {
                let exact = oscillator_exact(&osc, level)?.energy;
                Ok((s.energy / exact - 1.0).abs())
            }));
        }
    }
    rec.bound("oscillator-energies", 1e-9, worst(errs));
    let linear = ProblemSetup::with_exponent(1.0).expect("valid exponent");
    rec.bound(
        "linear-l0-energies",
        1e-9,
        worst((0..=2).map(|n| {
            let a = numerov_solve(&linear, LevelKey::new(n, 0), &grid)?.energy;
            let b = linear_exact_l0(&linear, n)?.energy;
            Ok((a / b - 1.0).abs())
        })),
    );
}

/// Run every suite. Suites are independent; a failing check does not stop the run.
pub fn run(opts: VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    let mut suites = vec![Suite::Airy, Suite::Matching, Suite::Metrics];
    if !opts.quick {
        suites.push(Suite::Numerov);
    }
    for suite in suites {
        let mut rec = Recorder { suite, checks: Vec::new() };
        match suite {
            Suite::Airy => airy_suite(&mut rec),
            Suite::Matching => matching_suite(&mut rec, opts.quick),
            Suite::Metrics => metrics_suite(&mut rec, opts.quick),
            Suite::Numerov => numerov_suite(&mut rec),
            Suite::Forced => {}
        }
        checks.extend(rec.checks);
    }
    if opts.force_fail {
        checks.push(Check {
            suite: Suite::Forced,
            name: "forced-failure".into(),
            passed: false,
            value: 1.0,
            tolerance: 0.0,
            detail: "requested with --force-fail".into(),
        });
    }
    VerifyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_suite_passes() {
        let mut rec = Recorder { suite: Suite::Airy, checks: Vec::new() };
        airy_suite(&mut rec);
        for c in &rec.checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn forced_failure_is_reported() {
        let mut r = VerifyReport::default();
        assert!(r.all_passed());
        r.checks.push(Check {
            suite: Suite::Forced,
            name: "x".into(),
            passed: false,
            value: 1.0,
            tolerance: 0.0,
            detail: String::new(),
        });
        assert_eq!(r.failures().count(), 1);
    }
}
