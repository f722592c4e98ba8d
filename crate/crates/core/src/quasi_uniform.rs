//! The Airy-summed log-derivative `Y(r;t) = b1·y1(a;t) + b2·y2(a;t)` and the
//! small-r boundary match that fixes `t_l`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::airy::{self, Branch};
use crate::error::{Error, Result};
use crate::problem::{small_r_constant, EffectiveProfile, QDerivs};

/// Below this `|s| = |q′|/(−q)^{3/2}` the well branch is summed directly in `s`.
const WELL_SERIES_LIMIT: f64 = 0.044_194_173_824_159_216; // 8^{-3/2}

/// `a(r)`, `b1(r)`, `b2(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Abc {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
}

fn abc_from(d: &QDerivs) -> Abc {
    let m = d.q1.abs().powf(2.0 / 3.0);
    Abc { a: d.q / m, b1: d.q1 / m, b2: d.q2 / d.q1 }
}

fn checked_reduced(profile: &EffectiveProfile, r: f64) -> Result<QDerivs> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidRadius { r, reason: "Y is defined for r > 0" });
    }
    let d = profile.reduced(r);
    if d.q1 == 0.0 {
        return Err(Error::StationaryPoint { r });
    }
    Ok(d)
}

pub fn abc_coeffs(profile: &EffectiveProfile, r: f64) -> Result<Abc> {
    checked_reduced(profile, r).map(|d| abc_from(&d))
}

pub use crate::airy::y2_of;

fn y_and_prime(d: &QDerivs, branch: Branch) -> Result<(Complex64, Complex64)> {
    let c = abc_from(d);
    let l = airy::log_derivs(c.a, branch)?;
    let da = c.b1 - 2.0 / 3.0 * c.a * c.b2;
    let db1 = c.b1 * c.b2 / 3.0;
    let db2 = d.q3 / d.q1 - c.b2 * c.b2;
    let y = l.y1 * c.b1 + l.y2 * c.b2;
    let yp = l.y1 * db1 + l.dy1 * (c.b1 * da) + l.y2 * db2 + l.dy2 * (c.b2 * da);
    Ok((y, yp))
}

/// `Y(r;t)`; real for a real branch.
pub fn log_derivative(profile: &EffectiveProfile, r: f64, branch: Branch) -> Result<Complex64> {
    let d = checked_reduced(profile, r)?;
    y_and_prime(&d, branch).map(|p| p.0)
}

/// Analytic `dY/dr`.
pub fn log_derivative_prime(profile: &EffectiveProfile, r: f64, branch: Branch) -> Result<Complex64> {
    let d = checked_reduced(profile, r)?;
    y_and_prime(&d, branch).map(|p| p.1)
}

/// `(Y, dY/dr)` from one Airy evaluation.
pub fn log_derivative_pair(profile: &EffectiveProfile, r: f64, branch: Branch) -> Result<(Complex64, Complex64)> {
    let d = checked_reduced(profile, r)?;
    y_and_prime(&d, branch)
}

/// `Y′ + Y² − Q/ħ²`.
pub fn riccati_residual(profile: &EffectiveProfile, r: f64, branch: Branch) -> Result<Complex64> {
    let d = checked_reduced(profile, r)?;
    let (y, yp) = y_and_prime(&d, branch)?;
    Ok(yp + y * y - d.q)
}

/// Well branch `Z(r) = Y(r; i·sign Q′)` and `dZ/dr`.
///
/// `Im Z` is the phase integrand and `Re Z` the amplitude integrand. Both are
/// smooth through `r_star`; near it `Z` is summed in `s = Q′/(−Q)^{3/2}` so
/// that `Q′ = 0` is an ordinary point.
pub fn well_log_derivative(profile: &EffectiveProfile, r: f64) -> Result<(Complex64, Complex64)> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidRadius { r, reason: "Y is defined for r > 0" });
    }
    let d = profile.reduced(r);
    if d.q < 0.0 && d.q1.abs() < WELL_SERIES_LIMIT * (-d.q).powf(1.5) {
        return Ok(well_series(&d));
    }
    if d.q1 == 0.0 {
        return Err(Error::StationaryPoint { r });
    }
    let branch = if d.q1 > 0.0 { Branch::PlusI } else { Branch::MinusI };
    y_and_prime(&d, branch)
}

fn well_series(d: &QDerivs) -> (Complex64, Complex64) {
    let mq = -d.q;
    let p = mq.sqrt();
    let m32 = mq * p;
    let m52 = m32 * mq;
    let s = d.q1 / m32;
    let g = d.q2 / m32;
    let f = airy::oscillatory_coeffs();
    let sums = airy::series_sums(f, s);
    let z = sums.value * p + sums.k * (0.4 * g);
    let dp = -d.q1 / (2.0 * p);
    let ds = d.q2 / m32 + 1.5 * d.q1 * d.q1 / m52;
    let dg = d.q3 / m32 + 1.5 * d.q2 * d.q1 / m52;
    let df = sums.tail_d1 + f[1];
    let dz = sums.value * dp + df * (p * ds) + (sums.k * dg + sums.dk * (g * ds)) * 0.4;
    (z, dz)
}

/// `c(l,t) = −(2a_l·y1 + 3·y2)` evaluated at `a = a_l`.
pub fn boundary_constant(l: u32, t: f64) -> Result<f64> {
    let a = small_r_constant(l)?;
    let y1 = airy::log_deriv_combo(a, Branch::Real(t))?.re;
    Ok(0.8 * a * a * y1 * y1 - 1.6 * a * y1 - 0.8 * a * a * a + 0.3)
}

/// Mixing parameter and matching phase for the inner region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMatch {
    pub l: u32,
    pub t_l: f64,
    pub phi_l: f64,
    /// The other root of the boundary quadratic.
    pub rejected_t: f64,
    /// Where `Ai + t·Bi` vanishes on `[0, a_l]` for the rejected root.
    pub rejected_pole: Option<f64>,
}

/// Solve `c(l,t) = l + 1` for the root nearest zero.
pub fn solve_boundary_match(l: u32) -> Result<BoundaryMatch> {
    let a = small_r_constant(l)?;
    let q = airy::airy_quad(a)?;
    let (a0, a1, b0, b1) = (q.ai, q.aip, q.bi, q.bip);
    // c·(A0 + tB0)² = 0.8a²(A1 + tB1)² − 1.6a(A1 + tB1)(A0 + tB0) + C(A0 + tB0)²
    let c = 0.3 - 0.8 * a * a * a - (l as f64 + 1.0);
    let c2 = 0.8 * a * a * b1 * b1 - 1.6 * a * b1 * b0 + c * b0 * b0;
    let c1 = 1.6 * a * a * a1 * b1 - 1.6 * a * (a1 * b0 + b1 * a0) + 2.0 * c * a0 * b0;
    let c0 = 0.8 * a * a * a1 * a1 - 1.6 * a * a1 * a0 + c * a0 * a0;
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if !(disc >= 0.0) || c2 == 0.0 {
        return Err(Error::NoRealRoot { l });
    }
    let qq = -0.5 * (c1 + disc.sqrt().copysign(c1));
    let (r1, r2) = (qq / c2, c0 / qq);
    let (t_l, rejected_t) = if r1.abs() <= r2.abs() { (r1, r2) } else { (r2, r1) };
    Ok(BoundaryMatch {
        l,
        t_l,
        phi_l: PI / 3.0 - t_l.atan(),
        rejected_t,
        rejected_pole: combo_zero(rejected_t, 0.0, a)?,
    })
}

/// First zero of `Ai + t·Bi` on `[lo, hi]`, if any.
fn combo_zero(t: f64, lo: f64, hi: f64) -> Result<Option<f64>> {
    let f = |x: f64| airy::airy_quad(x).map(|q| q.ai + t * q.bi);
    let steps = 256;
    let mut prev = (lo, f(lo)?);
    for i in 1..=steps {
        let x = lo + (hi - lo) * i as f64 / steps as f64;
        let fx = f(x)?;
        if prev.1 == 0.0 {
            return Ok(Some(prev.0));
        }
        if fx.signum() != prev.1.signum() {
            return crate::roots::brent(f, prev.0, x, 1e-14, 200).map(|r| Some(r.x));
        }
        prev = (x, fx);
    }
    Ok(None)
}

/// Residue of `Re Y(r;±i)` at `r_star`.
///
/// Zero: `y2(a;±i) = O((−a)^{-3/2})` as `a → −∞`, which exactly cancels the
/// `1/(r − r_star)` growth of `b2`. The amplitude integrand is regular there.
pub fn amplitude_pole_coeff(_profile: &EffectiveProfile) -> f64 {
    0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ProblemSetup;

    fn osc(l: u32, e: f64) -> EffectiveProfile {
        EffectiveProfile::new(ProblemSetup::default(), l, e).unwrap()
    }

    #[test]
    fn abc_example() {
        let p = osc(1, 5.0);
        let c = abc_coeffs(&p, 1.0).unwrap();
        let v = -2.0 / 2f64.powf(2.0 / 3.0);
        assert!((c.a - v).abs() < 1e-15);
        assert!((c.b1 - v).abs() < 1e-15);
        assert!((c.b2 + 7.0).abs() < 1e-14);
        assert!(abc_coeffs(&p, p.r_minus).unwrap().a.abs() < 1e-13);
    }

    #[test]
    fn boundary_constants() {
        let m1 = solve_boundary_match(1).unwrap();
        let m2 = solve_boundary_match(2).unwrap();
        assert!((m1.t_l + 0.003938355772767039).abs() < 1e-13);
        assert!((m2.t_l + 0.0005231686458240598).abs() < 1e-14);
        assert!((m1.rejected_t + 0.26461335).abs() < 1e-7);
        assert!((m2.rejected_t + 0.16405883).abs() < 1e-7);
        for m in [m1, m2] {
            assert!((boundary_constant(m.l, m.t_l).unwrap() - (m.l as f64 + 1.0)).abs() < 1e-12);
            assert!((m.phi_l - (PI / 3.0 - m.t_l.atan())).abs() < 1e-16);
            let pole = m.rejected_pole.expect("rejected root must produce a pole");
            assert!(pole > 0.0 && pole < small_r_constant(m.l).unwrap());
        }
        assert!(solve_boundary_match(0).is_err());
    }

    #[test]
    fn well_branch_regimes_agree() {
        let p = osc(1, 5.0);
        let rs = p.r_star.unwrap();
        // Find the radius where the regime switches and compare both sides.
        for side in [-1.0, 1.0] {
            let f = |r: f64| {
                let d = p.reduced(r);
                Ok(d.q1.abs() - WELL_SERIES_LIMIT * (-d.q).powf(1.5))
            };
            let far = if side < 0.0 { p.r_minus + 1e-3 } else { p.r_plus - 1e-3 };
            let (lo, hi) = if side < 0.0 { (far, rs) } else { (rs, far) };
            let rb = crate::roots::brent(f, lo, hi, 1e-15, 200).unwrap().x;
            let d = p.reduced(rb);
            let (zs, dzs) = well_series(&d);
            let br = if d.q1 > 0.0 { Branch::PlusI } else { Branch::MinusI };
            let (za, dza) = y_and_prime(&d, br).unwrap();
            assert!((zs - za).norm() < 1e-12 * za.norm(), "{zs} vs {za}");
            assert!((dzs - dza).norm() < 1e-10 * dza.norm().max(1.0), "{dzs} vs {dza}");
        }
    }
}
