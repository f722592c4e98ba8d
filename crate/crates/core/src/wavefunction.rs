//! Matched three-region approximate wavefunction.
//!
//! * inner, `0 < r < r−`: `N cos φ · exp(−∫_r^{r−} Y(·;t_l))`
//! * well, `r− ≤ r ≤ r+`: `Re[N e^{−iφ} exp(∫_{r−}^r Z)]`
//! * outer, `r > r+`: `(N/2)(−1)^n exp(A + ∫_{r+}^r Y(·;0))`
//!
//! where `A = Re ∫_{r−}^{r+} Z`. Running integrals are cached on adaptive
//! meshes ([`CumulativeIntegral`]) so evaluation cost does not grow with `r`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::airy::Branch;
use crate::error::{Error, Result};
use crate::problem::{EffectiveProfile, LevelKey, ProblemSetup};
use crate::quadrature::{integrate_pv, try_integrate, CumulativeIntegral, ErrorSlot, IntegralSpec};
use crate::quasi_uniform::{amplitude_pole_coeff, log_derivative_pair, solve_boundary_match, well_log_derivative, BoundaryMatch};
use crate::spectral::{origin_power_hint, solve_level, target_phase, PHASE_REL_TOL};

/// Envelope drop that defines the tail cutoff.
pub const TAIL_CUTOFF: f64 = 1e-14;

const MESH_REL_TOL: f64 = 1e-13;
const MESH_ABS_TOL: f64 = 1e-15;
const NORM_REL_TOL: f64 = 1e-12;
/// Start of the inner accumulator as a fraction of `r−`.
const INNER_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Region {
    Inner = 1,
    Well = 2,
    Outer = 3,
}

impl Region {
    pub fn index(self) -> u8 {
        self as u8
    }
}

/// Ψ, Ψ′ and HΨ at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiSample {
    pub r: f64,
    pub psi: f64,
    pub dpsi: f64,
    pub h_psi: f64,
    /// `HΨ − E_sp·Ψ`, computed without cancellation.
    pub excess: f64,
    pub region: Region,
}

/// A solved, normalized level.
#[derive(Debug, Clone)]
pub struct ApproxState {
    pub level: LevelKey,
    pub setup: ProblemSetup,
    pub e_sp: f64,
    pub boundary: Option<BoundaryMatch>,
    /// Matching phase: `φ_l`, or `π/2` for `l = 0`.
    pub phi: f64,
    pub norm_const: f64,
    /// Principal-value `∫_{r−}^{r+} Re Y(r;+i) dr`, regularized at the
    /// origin as in [`well_amplitude`].
    pub well_amp_integral: f64,
    pub r_max: f64,
    profile: EffectiveProfile,
    origin_c: f64,
    inner: Option<CumulativeIntegral<f64>>,
    well: CumulativeIntegral<Complex64>,
    outer: CumulativeIntegral<f64>,
}

impl ApproxState {
    /// Solve the level and assemble its wavefunction.
    pub fn build(setup: &ProblemSetup, level: LevelKey) -> Result<Self> {
        let q = solve_level(setup, level)?;
        Self::build_at_energy(setup, level, q.e_sp)
    }

    /// Assemble the wavefunction at a given energy. Away from `E_sp` the
    /// outer region does not join continuously.
    pub fn build_at_energy(setup: &ProblemSetup, level: LevelKey, energy: f64) -> Result<Self> {
        let profile = EffectiveProfile::new(*setup, level.l, energy)?;
        let boundary = if level.l > 0 { Some(solve_boundary_match(level.l)?) } else { None };
        let phi = target_phase(level.l)?;

        let inner = match &boundary {
            Some(b) => {
                let slot = ErrorSlot::new();
                let c = level.l as f64 + 1.0;
                let t = b.t_l;
                let g = |r: f64| slot.take(log_derivative_pair(&profile, r, Branch::Real(t)).map(|p| p.0.re - c / r));
                // g = O(r) at the origin but is a difference of two 1/r terms;
                // below the floor it is dropped.
                let floor = INNER_FLOOR * profile.r_minus;
                let mesh = CumulativeIntegral::build(&g, floor, profile.r_minus, MESH_REL_TOL, MESH_ABS_TOL, 4);
                Some(slot.finish(mesh)?)
            }
            None => None,
        };

        let origin_c = origin_log_coeff(&profile);
        let slot = ErrorSlot::new();
        let z = |r: f64| slot.take(well_log_derivative(&profile, r).map(|p| p.0 - origin_c / r));
        let hint = origin_power_hint(setup, level.l);
        let well = CumulativeIntegral::build_with_endpoint_power(&z, profile.r_minus, profile.r_plus, MESH_REL_TOL, MESH_ABS_TOL, 8, hint);
        let well = slot.finish(well)?;

        let well_amp_integral = well_amplitude(&profile)?;

        let y0 = |r: f64| log_derivative_pair(&profile, r, Branch::Real(0.0)).map(|p| p.0.re);
        let r_max = tail_cutoff(&profile, &y0)?;
        let slot = ErrorSlot::new();
        let g = |r: f64| slot.take(y0(r));
        let outer = CumulativeIntegral::build(&g, profile.r_plus, r_max, MESH_REL_TOL, MESH_ABS_TOL, 4);
        let outer = slot.finish(outer)?;

        let mut state = Self {
            level,
            setup: *setup,
            e_sp: energy,
            boundary,
            phi,
            norm_const: 1.0,
            well_amp_integral,
            r_max,
            profile,
            origin_c,
            inner,
            well,
            outer,
        };
        let norm2 = state.integrate(|r| state.eval_psi(r).map(|p| p * p), NORM_REL_TOL)?;
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::ZeroNorm);
        }
        state.norm_const = norm2.sqrt().recip();
        Ok(state)
    }

    pub fn profile(&self) -> &EffectiveProfile {
        &self.profile
    }

    pub fn r_minus(&self) -> f64 {
        self.profile.r_minus
    }

    pub fn r_plus(&self) -> f64 {
        self.profile.r_plus
    }

    /// `∫_{r−}^{r+} Im Z dr` as accumulated on the wavefunction mesh.
    pub fn well_phase_integral(&self) -> f64 {
        self.well.total().im
    }

    /// `Re ∫_{r−}^{r+} Z dr` as accumulated on the wavefunction mesh.
    pub fn well_amp_accumulated(&self) -> f64 {
        self.well.total().re + self.origin_c * self.profile.r_plus.ln()
    }

    /// Points where the integrand of an overlap may change character.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = vec![0.0];
        if self.profile.r_minus > 0.0 {
            v.push(self.profile.r_minus);
        }
        if let Some(rs) = self.profile.r_star {
            v.push(rs);
        }
        v.push(self.profile.r_plus);
        v.push(self.r_max);
        v
    }

    /// `∫_0^{r_max} f` split at the region boundaries and `r_star`.
    pub fn integrate<F: Fn(f64) -> Result<f64>>(&self, f: F, rel_tol: f64) -> Result<f64> {
        self.integrate_with(f, &IntegralSpec::default().with_rel_tol(rel_tol).with_abs_tol(1e-16))
    }

    pub fn integrate_with<F: Fn(f64) -> Result<f64>>(&self, f: F, spec: &IntegralSpec) -> Result<f64> {
        let spec = *spec;
        let mut total = 0.0;
        for w in self.breakpoints().windows(2) {
            total += try_integrate(&f, w[0], w[1], &spec)?.value;
        }
        Ok(total)
    }

    pub fn region(&self, r: f64) -> Result<Region> {
        if !(r > 0.0 && r <= self.r_max) {
            return Err(Error::InvalidRadius { r, reason: "wavefunction is defined on (0, r_max]" });
        }
        Ok(if r < self.profile.r_minus {
            Region::Inner
        } else if r <= self.profile.r_plus {
            Region::Well
        } else {
            Region::Outer
        })
    }

    fn outer_sign(&self) -> f64 {
        if self.level.n % 2 == 0 { 1.0 } else { -1.0 }
    }

    fn finite(r: f64, v: f64) -> Result<f64> {
        if v.is_finite() { Ok(v) } else { Err(Error::NonFinite { x: r }) }
    }

    /// `exp(∫_{r−}^r Z)` without the normalization and phase.
    fn well_exp(&self, r: f64) -> Complex64 {
        let c = self.origin_c;
        let z = |x: f64| {
            well_log_derivative(&self.profile, x).map(|p| p.0 - c / x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        };
        let log = self.well.eval(&z, r);
        if c == 0.0 { log.exp() } else { (log + c * r.ln()).exp() }
    }

    fn inner_factor(&self, r: f64) -> f64 {
        let inner = self.inner.as_ref().expect("inner region exists for l >= 1");
        let c = self.level.l as f64 + 1.0;
        let t = self.boundary.as_ref().map(|b| b.t_l).unwrap_or(0.0);
        let g = |x: f64| {
            log_derivative_pair(&self.profile, x, Branch::Real(t)).map(|p| p.0.re - c / x).unwrap_or(f64::NAN)
        };
        let tail = inner.total() - inner.eval(&g, r);
        (-tail).exp() * (r / self.profile.r_minus).powi(self.level.l as i32 + 1)
    }

    fn outer_factor(&self, r: f64) -> f64 {
        let g = |x: f64| {
            log_derivative_pair(&self.profile, x, Branch::Real(0.0)).map(|p| p.0.re).unwrap_or(f64::NAN)
        };
        (self.well_amp_accumulated() + self.outer.eval(&g, r)).exp()
    }

    pub fn eval_psi(&self, r: f64) -> Result<f64> {
        let n = self.norm_const;
        let v = match self.region(r)? {
            Region::Inner => n * self.phi.cos() * self.inner_factor(r),
            Region::Well => n * (Complex64::from_polar(1.0, -self.phi) * self.well_exp(r)).re,
            Region::Outer => 0.5 * n * self.outer_sign() * self.outer_factor(r),
        };
        Self::finite(r, v)
    }

    pub fn eval_psi_prime(&self, r: f64) -> Result<f64> {
        self.sample(r).map(|s| s.dpsi)
    }

    /// `HΨ = E_sp·Ψ − (ħ²/2m)·(Y′ + Y² − Q/ħ²)·Ψ`, region by region.
    pub fn apply_hamiltonian(&self, r: f64) -> Result<f64> {
        self.sample(r).map(|s| s.h_psi)
    }

    /// Ψ, Ψ′, HΨ from one evaluation of the region form.
    pub fn sample(&self, r: f64) -> Result<PsiSample> {
        self.sample_in(r, self.region(r)?)
    }

    /// Relative jumps of `Ψ′/Ψ` at `r−` and `r+`, each region form evaluated
    /// at the junction itself. The inner entry is zero for `l = 0`.
    pub fn junction_mismatch(&self) -> Result<[f64; 2]> {
        let jump = |r: f64, left: Region, right: Region| -> Result<f64> {
            let (a, b) = (self.sample_in(r, left)?, self.sample_in(r, right)?);
            let (la, lb) = (a.dpsi / a.psi, b.dpsi / b.psi);
            Ok((la - lb).abs() / la.abs().max(lb.abs()).max(r.recip()))
        };
        let inner = if self.inner.is_some() { jump(self.profile.r_minus, Region::Inner, Region::Well)? } else { 0.0 };
        Ok([inner, jump(self.profile.r_plus, Region::Well, Region::Outer)?])
    }

    fn sample_in(&self, r: f64, region: Region) -> Result<PsiSample> {
        let kin = self.setup.kinetic_scale();
        let q = self.profile.reduced(r).q;
        let (psi, dpsi, excess) = match region {
            Region::Inner | Region::Outer => {
                let (t, amp) = if region == Region::Inner {
                    let t = self.boundary.as_ref().map(|b| b.t_l).unwrap_or(0.0);
                    (t, self.norm_const * self.phi.cos() * self.inner_factor(r))
                } else {
                    (0.0, 0.5 * self.norm_const * self.outer_sign() * self.outer_factor(r))
                };
                let (y, yp) = log_derivative_pair(&self.profile, r, Branch::Real(t))?;
                let (y, yp) = (y.re, yp.re);
                let res = yp + y * y - q;
                (amp, y * amp, -kin * res * amp)
            }
            Region::Well => {
                let (z, zp) = well_log_derivative(&self.profile, r)?;
                let w = Complex64::from_polar(self.norm_const, -self.phi) * self.well_exp(r);
                let res = zp + z * z - q;
                (w.re, (z * w).re, -kin * (res * w).re)
            }
        };
        let psi = Self::finite(r, psi)?;
        let dpsi = Self::finite(r, dpsi)?;
        let excess = Self::finite(r, excess)?;
        Ok(PsiSample { r, psi, dpsi, h_psi: self.e_sp * psi + excess, excess, region })
    }
}

/// Principal-value amplitude integral `∫_{r−}^{r+} Re Y(r;+i) dr`.
///
/// When `Re Z ~ c/r` at the origin (see [`origin_log_coeff`]) the divergent
/// part is replaced by `c·ln r+`.
pub fn well_amplitude(profile: &EffectiveProfile) -> Result<f64> {
    let spec = IntegralSpec::default().with_rel_tol(PHASE_REL_TOL).with_abs_tol(1e-12);
    let c = origin_log_coeff(profile);
    let slot = ErrorSlot::new();
    let f = |r: f64| slot.take(well_log_derivative(profile, r).map(|p| p.0.re - c / r));
    let out = match profile.r_star {
        Some(rs) => integrate_pv(f, profile.r_minus, profile.r_plus, rs, amplitude_pole_coeff(profile), &spec),
        None => {
            let spec = match origin_power_hint(&profile.setup, profile.l) {
                Some(p) => spec.with_endpoint_power(p),
                None => spec,
            };
            crate::quadrature::integrate(f, profile.r_minus, profile.r_plus, &spec)
        }
    };
    slot.finish(out).map(|e| e.value + c * profile.r_plus.ln())
}

/// Coefficient `c` of `Re Z ~ c/r` at the origin. Nonzero only for `l = 0`
/// and `k < 1`, where `a → 0` at `r = 0`, `b2 = (k − 1)/r` and
/// `y2(0;+i) = −1/10`.
pub fn origin_log_coeff(profile: &EffectiveProfile) -> f64 {
    if profile.l == 0 && profile.setup.k < 1.0 { (1.0 - profile.setup.k) / 10.0 } else { 0.0 }
}

/// Radius beyond `r+` where `exp(∫_{r+}^r Y(·;0))` reaches [`TAIL_CUTOFF`].
fn tail_cutoff<F: Fn(f64) -> Result<f64>>(profile: &EffectiveProfile, y0: &F) -> Result<f64> {
    let target = TAIL_CUTOFF.ln();
    let spec = IntegralSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-14);
    let step = 0.25 * profile.r_plus;
    let mut lo = profile.r_plus;
    let mut acc = 0.0;
    for _ in 0..4000 {
        let hi = lo + step;
        let piece = try_integrate(y0, lo, hi, &spec)?.value;
        if acc + piece <= target {
            let f = |x: f64| {
                if x <= lo {
                    return Ok(acc - target);
                }
                try_integrate(y0, lo, x, &spec).map(|e| acc + e.value - target)
            };
            return crate::roots::brent(f, lo, hi, 1e-10, 100).map(|r| r.x);
        }
        acc += piece;
        lo = hi;
    }
    Err(Error::BracketFailure(format!("envelope does not decay to {TAIL_CUTOFF:e} beyond r+ = {}", profile.r_plus)))
}

/// `cos(π(n + 1/3)) = (−1)^n/2`, the well-side value at `r+` relative to `N e^A`.
pub fn outer_join_factor(n: u32) -> f64 {
    (PI * (n as f64 + 1.0 / 3.0)).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_l1_state_invariants() {
        let s = ProblemSetup::default();
        let st = ApproxState::build(&s, LevelKey::new(0, 1)).unwrap();
        let norm = st.integrate(|r| st.eval_psi(r).map(|p| p * p), 1e-12).unwrap();
        assert!((norm - 1.0).abs() < 1e-8);
        for rb in [st.r_minus(), st.r_plus()] {
            let (a, b) = (st.eval_psi(rb * (1.0 - 1e-12)).unwrap(), st.eval_psi(rb * (1.0 + 1e-12)).unwrap());
            assert!((a - b).abs() < 1e-10 * a.abs(), "Ψ jump at {rb}: {a} vs {b}");
            let (a, b) = (st.eval_psi_prime(rb * (1.0 - 1e-12)).unwrap(), st.eval_psi_prime(rb * (1.0 + 1e-12)).unwrap());
            assert!((a - b).abs() < 1e-8 * a.abs().max(1e-3), "Ψ′ jump at {rb}: {a} vs {b}");
        }
        assert!((st.well_amp_integral - st.well_amp_accumulated()).abs() < 1e-11);
        assert!(st.eval_psi(0.5 * st.r_minus()).unwrap() > 0.0);
    }
}
