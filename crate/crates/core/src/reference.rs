//! Reference eigenpairs: closed-form oscillator states, Airy-zero states of
//! the linear potential at `l = 0`, and a Numerov shooting solver.

use serde::{Deserialize, Serialize};

use crate::airy::{airy_quad, airy_zero};
use crate::error::{Error, Result};
use crate::problem::{centrifugal, EffectiveProfile, LevelKey, ProblemSetup};
use crate::quadrature::{try_integrate, IntegralSpec};
use crate::spectral::wkb_guess;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedFormOscillator,
    AiryZeroLinear,
    Numerov,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::ClosedFormOscillator => "closed-form-oscillator",
            Provenance::AiryZeroLinear => "airy-zero-linear",
            Provenance::Numerov => "numerov",
        })
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// `c·r^{l+1}·exp(−βr²/2)·L_n^{(l+1/2)}(βr²)`
    Oscillator { beta: f64, c: f64 },
    /// `c·Ai(r/λ + z)`
    Linear { lambda: f64, z: f64, c: f64 },
    /// Grid values `u_i = u(i·h)` with derivatives.
    Sampled { h: f64, u: Vec<f64>, du: Vec<f64> },
}

/// A normalized reference eigenfunction, positive near the origin.
#[derive(Debug, Clone)]
pub struct ExactState {
    pub level: LevelKey,
    pub energy: f64,
    pub provenance: Provenance,
    /// Beyond this radius the function is negligible (or not represented).
    pub support: f64,
    repr: Repr,
}

/// `L_n^{(a)}(x)` by the three-term recurrence.
pub fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, 1.0 + a - x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0 + a - x) * p1 - (k + a) * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

impl ExactState {
    pub fn eval(&self, r: f64) -> f64 {
        self.eval_pair(r).0
    }

    pub fn eval_prime(&self, r: f64) -> f64 {
        self.eval_pair(r).1
    }

    /// `(u(r), u′(r))`.
    pub fn eval_pair(&self, r: f64) -> (f64, f64) {
        if r <= 0.0 {
            return (0.0, if self.level.l == 0 { f64::NAN } else { 0.0 });
        }
        match &self.repr {
            Repr::Oscillator { beta, c } => {
                let l = self.level.l;
                let n = self.level.n;
                let a = l as f64 + 0.5;
                let x = beta * r * r;
                let lag = laguerre(n, a, x);
                let dlag = if n == 0 { 0.0 } else { -laguerre(n - 1, a + 1.0, x) };
                let env = c * r.powi(l as i32 + 1) * (-0.5 * x).exp();
                let u = env * lag;
                let du = env * (((l as f64 + 1.0) / r - beta * r) * lag + 2.0 * beta * r * dlag);
                (u, du)
            }
            Repr::Linear { lambda, z, c } => match airy_quad(r / lambda + z) {
                Ok(q) => (c * q.ai, c * q.aip / lambda),
                Err(_) => (0.0, 0.0),
            },
            Repr::Sampled { h, u, du } => {
                let x = r / h;
                let i = x.floor() as usize;
                if i + 1 >= u.len() {
                    return (0.0, 0.0);
                }
                let t = x - i as f64;
                // Cubic Hermite on [i, i+1].
                let (y0, y1) = (u[i], u[i + 1]);
                let (m0, m1) = (du[i] * h, du[i + 1] * h);
                let t2 = t * t;
                let t3 = t2 * t;
                let val = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
                let der = ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * m1) / h;
                (val, der)
            }
        }
    }

    /// `∫_0^R f(u, u′)` over the support, split where the representation changes character.
    pub fn integrate<F: Fn(f64, f64, f64) -> f64>(&self, f: F, rel_tol: f64) -> Result<f64> {
        let spec = IntegralSpec::default().with_rel_tol(rel_tol).with_abs_tol(1e-16);
        let g = |r: f64| {
            let (u, du) = self.eval_pair(r);
            Ok(f(r, u, du))
        };
        let pieces = 16;
        let mut total = 0.0;
        for i in 0..pieces {
            let lo = self.support * i as f64 / pieces as f64;
            let hi = self.support * (i + 1) as f64 / pieces as f64;
            total += try_integrate(g, lo, hi, &spec)?.value;
        }
        Ok(total)
    }
}

/// Closed-form eigenpair of `V = α r²`.
pub fn oscillator_exact(setup: &ProblemSetup, level: LevelKey) -> Result<ExactState> {
    setup.validate()?;
    if setup.k != 2.0 {
        return Err(Error::InvalidSetup(format!("oscillator reference needs k = 2, got {}", setup.k)));
    }
    let omega = (2.0 * setup.alpha / setup.mass).sqrt();
    let energy = setup.hbar * omega * (2.0 * level.n as f64 + level.l as f64 + 1.5);
    let beta = setup.mass * omega / setup.hbar;
    let r_plus = EffectiveProfile::new(*setup, level.l, energy)?.r_plus;
    // exp(−βr²/2) well below 1e-17 of its peak
    let support = r_plus.max((2.0 * 45.0 / beta).sqrt() + r_plus);
    let mut st = ExactState {
        level,
        energy,
        provenance: Provenance::ClosedFormOscillator,
        support,
        repr: Repr::Oscillator { beta, c: 1.0 },
    };
    let norm2 = st.integrate(|_, u, _| u * u, 1e-13)?;
    // L_n^{(a)}(0) > 0, so the function is positive near the origin.
    st.repr = Repr::Oscillator { beta, c: norm2.sqrt().recip() };
    Ok(st)
}

/// Best available reference for a level: closed form where one exists,
/// Numerov otherwise.
pub fn reference_state(setup: &ProblemSetup, level: LevelKey, grid: &GridSpec) -> Result<ExactState> {
    if setup.k == 2.0 {
        oscillator_exact(setup, level)
    } else if setup.k == 1.0 && level.l == 0 {
        linear_exact_l0(setup, level.n)
    } else {
        numerov_solve(setup, level, grid)
    }
}

/// `l = 0` eigenpair of `V = α r`: the Airy function shifted to a zero.
pub fn linear_exact_l0(setup: &ProblemSetup, n: u32) -> Result<ExactState> {
    setup.validate()?;
    if setup.k != 1.0 {
        return Err(Error::InvalidSetup(format!("Airy-zero reference needs k = 1, got {}", setup.k)));
    }
    let z = airy_zero(n + 1)?;
    let lambda = setup.length_unit();
    let energy = -z * setup.alpha * lambda;
    // ∫_z^∞ Ai² = Ai′(z)² at a zero of Ai.
    let aip = airy_quad(z)?.aip;
    let c = aip.signum() / (lambda.sqrt() * aip.abs());
    let support = lambda * (-z + 40.0);
    Ok(ExactState {
        level: LevelKey::new(n, 0),
        energy,
        provenance: Provenance::AiryZeroLinear,
        support,
        repr: Repr::Linear { lambda, z, c },
    })
}

/// Uniform grid for [`numerov_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Largest `√|Q/ħ²|·h` on the starting grid.
    pub phase_per_step: f64,
    /// Outer boundary as a multiple of `r+` at the WKB energy guess.
    pub extent: f64,
    /// Required relative energy change between the last two halvings.
    pub richardson_tol: f64,
    pub max_halvings: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { phase_per_step: 0.02, extent: 2.5, richardson_tol: 1e-9, max_halvings: 6 }
    }
}

struct Shot {
    nodes: u32,
    defect: f64,
}

struct NumerovGrid<'a> {
    setup: &'a ProblemSetup,
    l: u32,
    h: f64,
    len: usize,
}

impl NumerovGrid<'_> {
    fn q(&self, i: usize, energy: f64) -> f64 {
        let r = i as f64 * self.h;
        let s = self.setup;
        let c = 2.0 * s.mass / (s.hbar * s.hbar);
        c * (s.potential(r) - energy) + centrifugal(self.l) / (r * r)
    }

    fn match_index(&self, energy: f64) -> usize {
        let r_plus = EffectiveProfile::new(*self.setup, self.l, energy).map(|p| p.r_plus).unwrap_or(self.h * 2.0);
        ((r_plus / self.h).round() as usize).clamp(2, self.len - 3)
    }

    /// Outward and inward sweeps joined at `m`, scaled so `u_m = 1`.
    fn sweep(&self, energy: f64, m: usize) -> Vec<f64> {
        let h2 = self.h * self.h / 12.0;
        let f: Vec<f64> = (0..self.len).map(|i| if i == 0 { 0.0 } else { 1.0 - h2 * self.q(i, energy) }).collect();
        let mut u = vec![0.0; self.len];
        let l = self.l;
        let eps = 2.0 * self.setup.mass * energy / (self.setup.hbar * self.setup.hbar);
        let h = self.h;
        let k = self.setup.k;
        let ca = 2.0 * self.setup.mass * self.setup.alpha / (self.setup.hbar * self.setup.hbar);
        let lf = l as f64;
        u[1] = h.powi(l as i32 + 1)
            * (1.0 - eps * h * h / (2.0 * (2.0 * lf + 3.0)) + ca * h.powf(k + 2.0) / ((k + 2.0) * (k + 2.0 * lf + 3.0)));
        // F_0·u_0 = −h²/12·u″(0); u″(0) = 2 for l = 1 with u ~ r².
        let f0u0 = if l == 1 { -h2 * 2.0 } else { 0.0 };
        u[2] = ((12.0 - 10.0 * f[1]) * u[1] - f0u0) / f[2];
        for i in 2..=m {
            u[i + 1] = ((12.0 - 10.0 * f[i]) * u[i] - f[i - 1] * u[i - 1]) / f[i + 1];
        }
        let um_out = u[m];
        let n = self.len - 1;
        let mut v = vec![0.0; self.len];
        v[n] = 0.0;
        v[n - 1] = 1e-200_f64.max(f64::MIN_POSITIVE * 1e10);
        for i in (m..n).rev() {
            v[i - 1] = ((12.0 - 10.0 * f[i]) * v[i] - f[i + 1] * v[i + 1]) / f[i - 1];
            if v[i - 1].abs() > 1e200 {
                for x in v[i - 1..].iter_mut() {
                    *x *= 1e-200;
                }
            }
        }
        let scale_out = 1.0 / um_out;
        let scale_in = 1.0 / v[m];
        for (i, x) in u.iter_mut().enumerate() {
            *x = if i <= m { *x * scale_out } else { v[i] * scale_in };
        }
        // u[m+1] from the inward solution; keep the outward u[m+1] for the defect.
        u
    }

    fn shoot(&self, energy: f64) -> Shot {
        let m = self.match_index(energy);
        let h2 = self.h * self.h / 12.0;
        let f = |i: usize| if i == 0 { 0.0 } else { 1.0 - h2 * self.q(i, energy) };
        let u = self.sweep(energy, m);
        let nodes = (1..m).filter(|&i| u[i] != 0.0 && u[i].signum() != u[i + 1].signum()).count() as u32;
        // u_{m−1} is outward, u_{m+1} inward, u_m = 1 for both.
        let defect = f(m + 1) * u[m + 1] + f(m - 1) * u[m - 1] - (12.0 - 10.0 * f(m));
        Shot { nodes, defect }
    }

    /// Bisection on the defect with node-count steering.
    fn eigenvalue(&self, n: u32, mut lo: f64, mut hi: f64) -> Result<f64> {
        for _ in 0..200 {
            let e = 0.5 * (lo + hi);
            if hi - lo <= 4.0 * f64::EPSILON * e.abs() {
                return Ok(e);
            }
            let s = self.shoot(e);
            if s.nodes > n || (s.nodes == n && s.defect > 0.0) {
                hi = e;
            } else {
                lo = e;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn state(&self, energy: f64) -> Vec<f64> {
        let m = self.match_index(energy);
        self.sweep(energy, m)
    }
}

/// Numerov eigenpair with Richardson validation of the step.
///
/// The reported energy is the Richardson extrapolation of the last two grids.
pub fn numerov_solve(setup: &ProblemSetup, level: LevelKey, grid: &GridSpec) -> Result<ExactState> {
    setup.validate()?;
    let guess = wkb_guess(setup, level);
    let (_, e_min) = setup.effective_minimum(level.l);
    let e_top = 4.0 * guess.max(e_min);
    let r_out = outer_boundary(setup, level.l, e_top, grid.extent)?;
    let kmax = (2.0 * setup.mass * e_top).sqrt() / setup.hbar;
    let mut h = grid.phase_per_step / kmax;
    let solve = |h: f64| -> Result<(f64, NumerovGrid<'_>)> {
        let len = (r_out / h).ceil() as usize + 1;
        let g = NumerovGrid { setup, l: level.l, h, len };
        let lo = if e_min > 0.0 { e_min * (1.0 + 1e-12) } else { 1e-12 * guess };
        let e = g.eigenvalue(level.n, lo, e_top)?;
        if (e - e_top).abs() < 1e-9 * e_top || (e - lo).abs() < 1e-9 * e_top {
            return Err(Error::BracketFailure(format!("Numerov eigenvalue for {level:?} not inside [{lo}, {e_top}]")));
        }
        Ok((e, g))
    };
    let (mut e_prev, _) = solve(h)?;
    let mut change = f64::INFINITY;
    for _ in 0..grid.max_halvings {
        h *= 0.5;
        let (e, g) = solve(h)?;
        change = ((e - e_prev) / e).abs();
        if change < grid.richardson_tol {
            let energy = (16.0 * e - e_prev) / 15.0;
            return Ok(sampled_state(&g, level, energy, e));
        }
        e_prev = e;
    }
    Err(Error::GridTooCoarse { change, suggested_step: h * 0.5 })
}

/// `extent·r+(E)`, pushed out until the WKB decay `∫√(Q/ħ²)` beyond `r+` reaches 40.
fn outer_boundary(setup: &ProblemSetup, l: u32, energy: f64, extent: f64) -> Result<f64> {
    let p = EffectiveProfile::new(*setup, l, energy)?;
    let dr = 1e-3 * p.r_plus;
    let (mut r, mut acc) = (p.r_plus, 0.0);
    while acc < 40.0 {
        let mid = r + 0.5 * dr;
        acc += p.reduced(mid).q.max(0.0).sqrt() * dr;
        r += dr;
    }
    Ok(r.max(extent * p.r_plus))
}

fn sampled_state(g: &NumerovGrid<'_>, level: LevelKey, energy: f64, grid_energy: f64) -> ExactState {
    let mut u = g.state(grid_energy);
    let h = g.h;
    let n = u.len();
    // Fourth-order central differences; one-sided at the ends.
    let mut du = vec![0.0; n];
    for i in 0..n {
        du[i] = if i >= 2 && i + 2 < n {
            (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h)
        } else if i + 4 < n {
            (-25.0 * u[i] + 48.0 * u[i + 1] - 36.0 * u[i + 2] + 16.0 * u[i + 3] - 3.0 * u[i + 4]) / (12.0 * h)
        } else {
            (25.0 * u[i] - 48.0 * u[i - 1] + 36.0 * u[i - 2] - 16.0 * u[i - 3] + 3.0 * u[i - 4]) / (12.0 * h)
        };
    }
    // Composite Simpson over an even number of intervals.
    let last = if (n - 1).is_multiple_of(2) { n - 1 } else { n - 2 };
    let mut s = u[0] * u[0] + u[last] * u[last];
    for (i, x) in u.iter().enumerate().take(last).skip(1) {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * x * x;
    }
    let norm = (s * h / 3.0).sqrt();
    let sign = u.iter().find(|x| **x != 0.0).map(|x| x.signum()).unwrap_or(1.0);
    let c = sign / norm;
    u.iter_mut().for_each(|x| *x *= c);
    du.iter_mut().for_each(|x| *x *= c);
    ExactState {
        level,
        energy,
        provenance: Provenance::Numerov,
        support: h * (n - 1) as f64,
        repr: Repr::Sampled { h, u, du },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_energies() {
        let s = ProblemSetup::default();
        for (n, l, e) in [(0, 0, 3.0), (0, 1, 5.0), (2, 2, 15.0)] {
            assert!((oscillator_exact(&s, LevelKey::new(n, l)).unwrap().energy - e).abs() < 1e-13);
        }
        assert!(oscillator_exact(&ProblemSetup::with_exponent(1.0).unwrap(), LevelKey::new(0, 0)).is_err());
    }

    #[test]
    fn oscillator_norm_and_sign() {
        let s = ProblemSetup::default();
        let st = oscillator_exact(&s, LevelKey::new(2, 1)).unwrap();
        assert!((st.integrate(|_, u, _| u * u, 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert!(st.eval(0.1) > 0.0);
    }

    #[test]
    fn linear_energies() {
        let s = ProblemSetup::with_exponent(1.0).unwrap();
        let st = linear_exact_l0(&s, 0).unwrap();
        assert!((st.energy - 2.338107410459767).abs() < 1e-12);
        assert!((linear_exact_l0(&s, 1).unwrap().energy - 4.08794944413097).abs() < 1e-12);
        assert!((st.integrate(|_, u, _| u * u, 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert!(st.eval(0.1) > 0.0);
    }

    #[test]
    fn numerov_matches_oscillator() {
        let s = ProblemSetup::default();
        let st = numerov_solve(&s, LevelKey::new(0, 1), &GridSpec::default()).unwrap();
        assert!((st.energy / 5.0 - 1.0).abs() < 1e-9, "{}", st.energy);
        assert!(st.eval(0.5) > 0.0);
    }

    #[test]
    fn numerov_linear_l1() {
        let s = ProblemSetup::with_exponent(1.0).unwrap();
        let st = numerov_solve(&s, LevelKey::new(0, 1), &GridSpec::default()).unwrap();
        assert!((st.energy - 3.361254522976166).abs() < 1e-8, "{}", st.energy);
    }
}
