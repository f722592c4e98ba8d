//! Phase integral across the well and the quantization condition
//! `∫ σ·Im Y(r;+i) dr = π(n + 1/3) + φ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::problem::{EffectiveProfile, LevelKey, ProblemSetup};
use crate::quadrature::{try_integrate, IntegralSpec};
use crate::quasi_uniform::{solve_boundary_match, well_log_derivative};
use crate::roots;

/// Relative tolerance of the phase quadrature. The metrics downstream are
/// differences of O(1) integrals, so E_sp must be close to machine precision.
pub const PHASE_REL_TOL: f64 = 1e-13;

/// A solved level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationResult {
    pub level: LevelKey,
    pub e_sp: f64,
    pub phase_at_e: f64,
    pub target: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// `φ_l` for `l >= 1`, `π/2` for `l = 0`.
pub fn target_phase(l: u32) -> Result<f64> {
    if l == 0 {
        Ok(PI / 2.0)
    } else {
        Ok(solve_boundary_match(l)?.phi_l)
    }
}

/// Strongest power singularity of the well integrands at the origin for
/// `l = 0`: `b2·y2′(0)·a ~ r^{−(1+2k)/3}` for `k < 1`, `b2·y2 ~ r^{k−2}` for
/// `1 < k < 2`.
pub(crate) fn origin_power_hint(setup: &ProblemSetup, l: u32) -> Option<f64> {
    let k = setup.k;
    if l > 0 || k == 1.0 || k >= 2.0 {
        None
    } else if k < 1.0 {
        Some(-(1.0 + 2.0 * k) / 3.0)
    } else {
        Some(k - 2.0)
    }
}

/// Split points of the well: `[r−, r*, r+]` or `[0, r+]`.
pub(crate) fn well_knots(profile: &EffectiveProfile) -> Vec<f64> {
    let mut v = vec![profile.r_minus];
    if let Some(rs) = profile.r_star {
        v.push(rs);
    }
    v.push(profile.r_plus);
    v
}

/// `∫_{r−}^{r+} Im Z(r) dr`.
pub fn phase_integral(setup: &ProblemSetup, l: u32, energy: f64) -> Result<f64> {
    let profile = EffectiveProfile::new(*setup, l, energy)?;
    phase_of_profile(&profile)
}

pub(crate) fn phase_of_profile(profile: &EffectiveProfile) -> Result<f64> {
    let f = |r: f64| well_log_derivative(profile, r).map(|z| z.0.im);
    let knots = well_knots(profile);
    let base = IntegralSpec::default().with_rel_tol(PHASE_REL_TOL).with_abs_tol(0.0);
    let mut total = 0.0;
    for (i, w) in knots.windows(2).enumerate() {
        let spec = match (i, origin_power_hint(&profile.setup, profile.l)) {
            (0, Some(p)) => base.with_endpoint_power(p),
            _ => base,
        };
        total += try_integrate(f, w[0], w[1], &spec)?.value;
    }
    Ok(total)
}

/// Lowest-order WKB estimate used to seed brackets.
pub fn wkb_guess(setup: &ProblemSetup, level: LevelKey) -> f64 {
    let k = setup.k;
    // ∫_0^1 √(1 − x^k) dx
    let b = gamma(1.0 / k) * gamma(1.5) / (k * gamma(1.0 / k + 1.5));
    let n_eff = level.n as f64 + 0.5 * level.l as f64 + 0.75;
    let rhs = PI * setup.hbar * n_eff / ((2.0 * setup.mass).sqrt() * setup.alpha.powf(-1.0 / k) * b);
    rhs.powf(1.0 / (0.5 + 1.0 / k))
}

/// Solve the quantization condition for `E_sp(n, l)`.
pub fn solve_level(setup: &ProblemSetup, level: LevelKey) -> Result<QuantizationResult> {
    setup.validate()?;
    let target = PI * (level.n as f64 + 1.0 / 3.0) + target_phase(level.l)?;
    let (_, e_min) = setup.effective_minimum(level.l);
    let guess = wkb_guess(setup, level).max(e_min);
    let phase = |e: f64| phase_integral(setup, level.l, e);
    // The well integrand loses resolution as the turning points merge, so the
    // lower end sits a fraction of the way up from the bottom of the well.
    let mut frac = 1e-2;
    let mut lo = e_min + frac * (guess - e_min);
    while phase(lo)? >= target {
        frac *= 0.1;
        if frac < 1e-7 {
            return Err(Error::BracketFailure(format!(
                "phase already exceeds target {target} just above the well bottom {e_min} for {level:?}"
            )));
        }
        lo = e_min + frac * (guess - e_min);
    }
    let mut hi = 4.0 * guess;
    let mut grow = 0;
    while phase(hi)? < target {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::BracketFailure(format!(
                "phase stays below target {target} up to E = {hi} for {level:?}"
            )));
        }
    }
    let root = roots::brent(|e| phase(e).map(|p| p - target), lo, hi, 1e-15, 200)?;
    Ok(QuantizationResult {
        level,
        e_sp: root.x,
        phase_at_e: root.fx + target,
        target,
        bracket: (lo, hi),
        iterations: root.iterations,
    })
}

/// Whether the phase increases on `samples` evenly spaced energies in `(lo, hi]`.
pub fn phase_is_monotone(setup: &ProblemSetup, l: u32, lo: f64, hi: f64, samples: usize) -> Result<bool> {
    let mut prev = f64::NEG_INFINITY;
    for i in 1..=samples {
        let e = lo + (hi - lo) * i as f64 / samples as f64;
        let p = phase_integral(setup, l, e)?;
        if p <= prev {
            return Ok(false);
        }
        prev = p;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wkb_guess_is_exact_for_the_oscillator() {
        let s = ProblemSetup::default();
        assert!((wkb_guess(&s, LevelKey::new(0, 1)) - 5.0).abs() < 1e-12);
        assert!((wkb_guess(&s, LevelKey::new(2, 2)) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn phase_tends_to_a_tenth_of_pi_at_the_bottom_of_the_well() {
        // The second-order term keeps a finite phase in a vanishing well.
        let s = ProblemSetup::default();
        let (_, e_min) = s.effective_minimum(1);
        let p = phase_integral(&s, 1, e_min * (1.0 + 1e-3)).unwrap();
        assert!((p - PI / 10.0).abs() < 0.02, "{p}");
        assert!(phase_integral(&s, 1, e_min * (1.0 - 1e-6)).is_err());
    }

    #[test]
    fn linear_l0_levels_are_airy_zeros() {
        let s = ProblemSetup::with_exponent(1.0).unwrap();
        let r = solve_level(&s, LevelKey::new(0, 0)).unwrap();
        assert!((r.e_sp - 2.338107410459767).abs() < 1e-10, "{}", r.e_sp);
        assert!((r.phase_at_e - r.target).abs() < 1e-10);
    }

    #[test]
    fn oscillator_ground_state_l1() {
        let s = ProblemSetup::default();
        let r = solve_level(&s, LevelKey::new(0, 1)).unwrap();
        assert!((r.e_sp - 4.885011).abs() < 1e-5, "{}", r.e_sp);
        assert!(r.bracket.0 < r.e_sp && r.e_sp < r.bracket.1);
    }
}
