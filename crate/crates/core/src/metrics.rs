//! Comparison functionals: relative deviations of Ψ and Ψ′, the energy
//! expectation, the relative discrepancy `d` and the energy error `δE`.
//!
//! Everything is written in forms that stay accurate when the metric itself
//! is tiny: deviations as squared norms of differences, and the variance of
//! `H` from the residual `(H − E_sp)Ψ` rather than `⟨H²⟩ − Ē²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::LevelKey;
use crate::quadrature::IntegralSpec;
use crate::reference::{ExactState, Provenance};
use crate::wavefunction::ApproxState;

// The metrics are computed in cancellation-free forms, so a modest relative
// tolerance carries through. The approximant's mesh interpolation is smooth
// only to about 1e-12, which bounds what the quadrature can certify.
const METRIC_REL_TOL: f64 = 1e-10;
const METRIC_ABS_TOL: f64 = 1e-11;

fn metric_integral<F: Fn(f64) -> Result<f64>>(state: &ApproxState, f: F) -> Result<f64> {
    let spec = IntegralSpec::default().with_rel_tol(METRIC_REL_TOL).with_abs_tol(METRIC_ABS_TOL);
    state.integrate_with(f, &spec)
}

/// `1 − (⟨f1|f2⟩ + ⟨f2|f1⟩)/(⟨f1|f1⟩ + ⟨f2|f2⟩)`, evaluated as
/// `‖f1 − f2‖²/(‖f1‖² + ‖f2‖²)`.
///
/// `integrate` maps an integrand to its integral over the common domain.
pub fn relative_deviation<I>(integrate: I, f1: &dyn Fn(f64) -> Result<f64>, f2: &dyn Fn(f64) -> Result<f64>) -> Result<f64>
where
    I: Fn(&dyn Fn(f64) -> Result<f64>) -> Result<f64>,
{
    let n1 = integrate(&|r| f1(r).map(|v| v * v))?;
    let n2 = integrate(&|r| f2(r).map(|v| v * v))?;
    if !(n1 > 0.0) || !(n2 > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let d = integrate(&|r| Ok((f1(r)? - f2(r)?).powi(2)))?;
    Ok(d / (n1 + n2))
}

/// `Ē`, `⟨H²⟩` and the variance `⟨(H − Ē)²⟩` of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyExpectation {
    pub e_bar: f64,
    pub h2: f64,
    pub variance: f64,
}

impl EnergyExpectation {
    /// `⟨D(e)|D(e)⟩ = ⟨H²⟩ − 2eĒ + e²` for `D(e) = (H − e)Ψ`.
    pub fn defect_norm(&self, e: f64) -> f64 {
        self.variance + (e - self.e_bar).powi(2)
    }

    /// `d = (⟨H²⟩ − Ē²)/(⟨H²⟩ + Ē²)`.
    pub fn discrepancy(&self) -> f64 {
        self.variance / (self.variance + 2.0 * self.e_bar * self.e_bar)
    }
}

/// Local power of the excess `HΨ − E_sp·Ψ` at the origin for `l = 0`, where
/// the well reaches `r = 0`. For `l >= 1` `Ψ ~ r^{l+1}` keeps it regular.
pub fn origin_excess_power(state: &ApproxState) -> Result<Option<f64>> {
    if state.level.l > 0 {
        return Ok(None);
    }
    let r1 = 1e-6 * state.r_plus();
    let (e1, e2) = (state.sample(r1)?.excess, state.sample(0.1 * r1)?.excess);
    if e1 == 0.0 || e2 == 0.0 {
        return Ok(None);
    }
    Ok(Some((e1 / e2).abs().log10()))
}

pub fn energy_expectation(state: &ApproxState) -> Result<EnergyExpectation> {
    if let Some(power) = origin_excess_power(state)? {
        // Margin for the two-point estimate of a log-divergent integrand.
        if 2.0 * power <= -0.95 {
            return Err(Error::NotSquareIntegrable { power });
        }
    }
    let norm = metric_integral(state, |r| state.eval_psi(r).map(|p| p * p))?;
    let shift = metric_integral(state, |r| state.sample(r).map(|s| s.psi * s.excess))? / norm;
    let e_bar = state.e_sp + shift;
    // (H − Ē)Ψ = excess − shift·Ψ
    let variance = metric_integral(state, |r| state.sample(r).map(|s| (s.excess - shift * s.psi).powi(2)))? / norm;
    Ok(EnergyExpectation { e_bar, h2: variance + e_bar * e_bar, variance })
}

/// `⟨Ψ|(H − Ē)Ψ⟩`, zero by the definition of `Ē`.
pub fn orthogonality_defect(state: &ApproxState) -> Result<f64> {
    let e = energy_expectation(state)?;
    let shift = e.e_bar - state.e_sp;
    metric_integral(state, |r| state.sample(r).map(|s| s.psi * (s.excess - shift * s.psi)))
}

pub fn discrepancy(state: &ApproxState) -> Result<f64> {
    energy_expectation(state).map(|e| e.discrepancy())
}

/// One row of a comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub level: LevelKey,
    pub delta_psi: f64,
    pub delta_psi_prime: f64,
    pub discrepancy_d: f64,
    pub e_bar: f64,
    pub e_sp: f64,
    pub e_exact: f64,
    pub delta_e: f64,
    pub reference_provenance: Provenance,
}

/// All metrics of `state` against a reference eigenfunction.
///
/// `δΨ = 1 − ⟨Ψ_ex|Ψ_ap⟩` is evaluated as `½‖Ψ_ex − Ψ_ap‖²` with both
/// functions normalized by their computed norms.
pub fn compare_to_exact(state: &ApproxState, exact: &ExactState) -> Result<MetricsReport> {
    let ee = compare_wavefunctions(state, exact)?;
    let en = energy_expectation(state)?;
    Ok(MetricsReport {
        level: state.level,
        delta_psi: ee.0,
        delta_psi_prime: ee.1,
        discrepancy_d: en.discrepancy(),
        e_bar: en.e_bar,
        e_sp: state.e_sp,
        e_exact: exact.energy,
        delta_e: en.e_bar / exact.energy - 1.0,
        reference_provenance: exact.provenance,
    })
}

/// `(δΨ, δΨ′)`.
pub fn compare_wavefunctions(state: &ApproxState, exact: &ExactState) -> Result<(f64, f64)> {
    let na = metric_integral(state, |r| state.eval_psi(r).map(|p| p * p))?;
    let ne = metric_integral(state, |r| Ok(exact.eval(r).powi(2)))?;
    if !(na > 0.0) || !(ne > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let (sa, se) = (na.sqrt().recip(), ne.sqrt().recip());
    let dpsi = 0.5 * metric_integral(state, |r| Ok((exact.eval(r) * se - state.eval_psi(r)? * sa).powi(2)))?;
    let da = metric_integral(state, |r| state.eval_psi_prime(r).map(|p| (p * sa).powi(2)))?;
    let de = metric_integral(state, |r| Ok((exact.eval_prime(r) * se).powi(2)))?;
    let dd = metric_integral(state, |r| Ok((exact.eval_prime(r) * se - state.eval_psi_prime(r)? * sa).powi(2)))?;
    Ok((dpsi, dd / (da + de)))
}

/// `1 − ⟨Ψ̂_ex|Ψ̂_ap⟩` from the single overlap of the normalized functions.
/// Agrees with `δΨ` of [`compare_wavefunctions`] up to quadrature error.
pub fn overlap_deviation(state: &ApproxState, exact: &ExactState) -> Result<f64> {
    let na = metric_integral(state, |r| state.eval_psi(r).map(|p| p * p))?;
    let ne = metric_integral(state, |r| Ok(exact.eval(r).powi(2)))?;
    if !(na > 0.0) || !(ne > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let ov = metric_integral(state, |r| Ok(exact.eval(r) * state.eval_psi(r)?))?;
    Ok(1.0 - ov / (na * ne).sqrt())
}

/// Metrics of a state against itself; both deviations vanish.
pub fn self_comparison(state: &ApproxState) -> Result<(f64, f64)> {
    let integ = |f: &dyn Fn(f64) -> Result<f64>| metric_integral(state, f);
    let psi = |r: f64| state.eval_psi(r);
    let dpsi = |r: f64| state.eval_psi_prime(r);
    Ok((relative_deviation(integ, &psi, &psi)?, relative_deviation(integ, &dpsi, &dpsi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{try_integrate, IntegralSpec};

    fn on_unit(f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
        try_integrate(f, 0.0, 1.0, &IntegralSpec::default().with_rel_tol(1e-13)).map(|e| e.value)
    }

    #[test]
    fn relative_deviation_identities() {
        let f = |r: f64| Ok((3.0 * r).sin());
        let g = |r: f64| Ok(-(3.0 * r).sin());
        assert_eq!(relative_deviation(on_unit, &f, &f).unwrap(), 0.0);
        assert!((relative_deviation(on_unit, &f, &g).unwrap() - 2.0).abs() < 1e-14);
        let s = |r: f64| Ok((2.0 * std::f64::consts::PI * r).sin());
        let c = |r: f64| Ok((2.0 * std::f64::consts::PI * r).cos());
        assert!((relative_deviation(on_unit, &s, &c).unwrap() - 1.0).abs() < 1e-13);
        let z = |_: f64| Ok(0.0);
        assert_eq!(relative_deviation(on_unit, &f, &z), Err(Error::ZeroNorm));
    }

    #[test]
    fn expectation_minimizes_defect() {
        let e = EnergyExpectation { e_bar: 5.0, h2: 25.5, variance: 0.5 };
        let at = e.defect_norm(5.0);
        assert!(e.defect_norm(5.005) > at && e.defect_norm(4.995) > at);
        assert!((e.defect_norm(0.0) - e.h2).abs() < 1e-12);
    }
}
