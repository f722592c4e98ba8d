//! Radial problem for `V(r) = α·r^k`: constants, the profile `Q(r)` and its
//! turning points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots;

/// Physical constants and potential parameters.
///
/// The default is `ħ = 1`, `2m = 1`, `α = 1`, `k = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSetup {
    pub hbar: f64,
    pub mass: f64,
    pub alpha: f64,
    pub k: f64,
}

impl Default for ProblemSetup {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 0.5, alpha: 1.0, k: 2.0 }
    }
}

impl ProblemSetup {
    pub fn new(hbar: f64, mass: f64, alpha: f64, k: f64) -> Result<Self> {
        let s = Self { hbar, mass, alpha, k };
        s.validate()?;
        Ok(s)
    }

    /// Default constants with the given exponent.
    pub fn with_exponent(k: f64) -> Result<Self> {
        Self::new(1.0, 0.5, 1.0, k)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSetup(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        check("hbar", self.hbar)?;
        check("mass", self.mass)?;
        check("alpha", self.alpha)?;
        check("k", self.k)
    }

    /// `r^e`, exact for integer exponents.
    pub(crate) fn pow(r: f64, e: f64) -> f64 {
        if e == e.trunc() && e.abs() < 64.0 {
            r.powi(e as i32)
        } else {
            r.powf(e)
        }
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.alpha * Self::pow(r, self.k)
    }

    /// `ħ²/2m`.
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }

    /// Natural length `λ` with `λ^{k+2} = ħ²/(2mα)`.
    pub fn length_unit(&self) -> f64 {
        (self.kinetic_scale() / self.alpha).powf(1.0 / (self.k + 2.0))
    }

    /// Natural energy `ħ²/(2mλ²)`.
    pub fn energy_unit(&self) -> f64 {
        let l = self.length_unit();
        self.kinetic_scale() / (l * l)
    }

    /// Minimum of `V + ħ²l(l+1)/(2mr²)` and where it is attained
    /// (`r = 0`, value 0, for `l = 0`).
    pub fn effective_minimum(&self, l: u32) -> (f64, f64) {
        if l == 0 {
            return (0.0, 0.0);
        }
        let r = self.stationary_radius(l);
        let cent = self.kinetic_scale() * centrifugal(l) / (r * r);
        (r, self.potential(r) + cent)
    }

    /// `r_*` with `r_*^{k+2} = ħ²l(l+1)/(m·k·α)`; zero for `l = 0`.
    pub fn stationary_radius(&self, l: u32) -> f64 {
        if l == 0 {
            return 0.0;
        }
        let num = self.hbar * self.hbar * centrifugal(l);
        (num / (self.mass * self.k * self.alpha)).powf(1.0 / (self.k + 2.0))
    }
}

/// `l(l+1)`.
pub fn centrifugal(l: u32) -> f64 {
    let l = l as f64;
    l * (l + 1.0)
}

/// Radial and orbital quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelKey {
    pub n: u32,
    pub l: u32,
}

impl LevelKey {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

/// `Q` and its first three radial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDerivs {
    pub q: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl QDerivs {
    fn scaled(self, s: f64) -> Self {
        Self { q: self.q * s, q1: self.q1 * s, q2: self.q2 * s, q3: self.q3 * s }
    }
}

/// `Q(r)` for fixed `(setup, l, E)` with its turning points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveProfile {
    pub setup: ProblemSetup,
    pub l: u32,
    pub energy: f64,
    pub r_minus: f64,
    pub r_plus: f64,
    /// Zero of `Q′`; `None` for `l = 0`.
    pub r_star: Option<f64>,
    /// Small-r limit of `a(r)`; `None` for `l = 0`.
    pub a_l: Option<f64>,
}

impl EffectiveProfile {
    pub fn new(setup: ProblemSetup, l: u32, energy: f64) -> Result<Self> {
        setup.validate()?;
        let (r_minus, r_plus) = locate_turning_points(&setup, l, energy)?;
        Ok(Self {
            setup,
            l,
            energy,
            r_minus,
            r_plus,
            r_star: (l > 0).then(|| setup.stationary_radius(l)),
            a_l: (l > 0).then(|| small_r_constant(l).expect("l > 0")),
        })
    }

    /// `Q, Q′, Q″, Q‴` at `r > 0`.
    pub fn q_derivs(&self, r: f64) -> Result<QDerivs> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidRadius { r, reason: "Q is defined for r > 0" });
        }
        Ok(self.reduced(r).scaled(self.setup.hbar * self.setup.hbar))
    }

    /// `Q/ħ²` and its derivatives; no argument checks.
    pub(crate) fn reduced(&self, r: f64) -> QDerivs {
        let s = &self.setup;
        let c = 2.0 * s.mass / (s.hbar * s.hbar);
        let k = s.k;
        let rk = ProblemSetup::pow(r, k);
        let v = c * s.alpha * rk;
        let (mut q, mut q1, mut q2, mut q3) = (v - c * self.energy, v * k / r, v * k * (k - 1.0) / (r * r), v * k * (k - 1.0) * (k - 2.0) / (r * r * r));
        if self.l > 0 {
            let lr2 = centrifugal(self.l) / (r * r);
            q += lr2;
            q1 -= 2.0 * lr2 / r;
            q2 += 6.0 * lr2 / (r * r);
            q3 -= 24.0 * lr2 / (r * r * r);
        }
        QDerivs { q, q1, q2, q3 }
    }

    /// Profile at a different energy with the same setup and `l`.
    pub fn at_energy(&self, energy: f64) -> Result<Self> {
        Self::new(self.setup, self.l, energy)
    }
}

/// Inner and outer roots of `Q` (inner is 0 for `l = 0`).
pub fn locate_turning_points(setup: &ProblemSetup, l: u32, energy: f64) -> Result<(f64, f64)> {
    setup.validate()?;
    if !energy.is_finite() {
        return Err(Error::InvalidArgument(format!("energy must be finite, got {energy}")));
    }
    let (r_star, minimum) = setup.effective_minimum(l);
    if l == 0 {
        if energy <= 0.0 {
            return Err(Error::DegenerateWell { energy, minimum });
        }
        return Ok((0.0, (energy / setup.alpha).powf(1.0 / setup.k)));
    }
    if energy <= minimum * (1.0 + 1e-12) {
        return Err(Error::DegenerateWell { energy, minimum });
    }
    let c = 2.0 * setup.mass / (setup.hbar * setup.hbar);
    let lc = centrifugal(l);
    // Q/ħ², written so that both sides are O(1) near the roots.
    let q = |r: f64| Ok(c * (setup.potential(r) - energy) + lc / (r * r));

    let mut lo = 0.5 * r_star;
    while q(lo)? <= 0.0 {
        lo *= 0.5;
    }
    let mut hi = 2.0 * r_star;
    while q(hi)? <= 0.0 {
        hi *= 2.0;
    }
    let tol = 4.0 * f64::EPSILON;
    let inner = roots::brent(q, lo, r_star, tol, 300)?.x;
    let outer = roots::brent(q, r_star, hi, tol, 300)?.x;
    Ok((inner, outer))
}

/// `a_l = (l(l+1)/4)^{1/3}`.
pub fn small_r_constant(l: u32) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidArgument("the small-r constant needs l >= 1".into()));
    }
    Ok((centrifugal(l) / 4.0).cbrt())
}
