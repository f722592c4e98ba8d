use airy_wkb::airy::airy_quad;
use airy_wkb::metrics::{compare_to_exact, energy_expectation};
use airy_wkb::reference::{linear_exact_l0, numerov_solve, oscillator_exact};
use airy_wkb::tables::level_report;
use airy_wkb::{solve_level, ApproxState, Error, GridSpec, LevelKey, ProblemSetup, Provenance, Region};

// mpmath, 30 digits: (a, Ai, Ai′, Bi, Bi′).
const AIRY_ORACLE: [[f64; 5]; 5] = [
    [-20.5, -0.0446256803970119098, -1.18393301970514750, 0.261362137869230292, -0.198868028021685981],
    [-3.2, -0.417443420564151377, 0.0650311469952629141, -0.0539057556305391497, -0.754124553310841392],
    [0.7, 0.189162400398150082, -0.199851191582280481, 0.973328655878165908, 0.654405919172140000],
    [4.0, 0.000951563851204801874, -0.00195864095020417890, 83.8470714084681399, 161.926683504613402],
    [12.0, 1.39318468887536084e-13, -4.85473655498530846e-13, 329807225829.074176, 1135507502443.37074],
];

#[test]
fn airy_matches_high_precision_values() {
    for [a, ai, aip, bi, bip] in AIRY_ORACLE {
        let q = airy_quad(a).unwrap();
        // Near a zero only absolute accuracy relative to the envelope is meaningful.
        let env = if a < 0.0 { (-a).powf(0.25) } else { 1.0 };
        for (got, want) in [(q.ai, ai), (q.aip, aip), (q.bi, bi), (q.bip, bip)] {
            let err = if a < 0.0 { (got - want).abs() / env } else { (got / want - 1.0).abs() };
            assert!(err < 1e-12, "a = {a}: {got} vs {want}");
        }
    }
}

#[test]
fn oscillator_reference_energies() {
    // −ψ″ + (r² + l(l+1)/r²)ψ = Eψ has E = 4n + 2l + 3.
    let s = ProblemSetup::default();
    for (n, l) in [(0, 0), (1, 2), (3, 1)] {
        let ex = oscillator_exact(&s, LevelKey::new(n, l)).unwrap();
        assert_eq!(ex.provenance, Provenance::ClosedFormOscillator);
        assert!((ex.energy - (4 * n + 2 * l + 3) as f64).abs() < 1e-13);
    }
}

#[test]
fn linear_l0_approximation_is_exact() {
    let s = ProblemSetup::with_exponent(1.0).unwrap();
    for n in 0..3 {
        let level = LevelKey::new(n, 0);
        let state = ApproxState::build(&s, level).unwrap();
        let exact = linear_exact_l0(&s, n).unwrap();
        let r = compare_to_exact(&state, &exact).unwrap();
        assert!(r.delta_psi < 1e-10 && r.delta_psi_prime < 1e-10, "{r:?}");
        assert!(r.delta_e.abs() < 1e-10 && r.discrepancy_d < 1e-10, "{r:?}");
    }
}

#[test]
fn numerov_reference_for_linear_rows() {
    // Frozen from the Richardson-extrapolated solver.
    let s = ProblemSetup::with_exponent(1.0).unwrap();
    let grid = GridSpec::default();
    for (n, l, e) in [(0, 1, 3.361254522983975), (1, 1, 4.884451844095537), (0, 2, 4.248182257157286), (1, 2, 5.629708376952449)] {
        let ex = numerov_solve(&s, LevelKey::new(n, l), &grid).unwrap();
        assert_eq!(ex.provenance, Provenance::Numerov);
        assert!((ex.energy / e - 1.0).abs() < 1e-10, "({n},{l}) {}", ex.energy);
    }
}

#[test]
fn state_regions_and_normalization() {
    let s = ProblemSetup::default();
    let st = ApproxState::build(&s, LevelKey::new(1, 1)).unwrap();
    assert_eq!(st.sample(0.5 * st.r_minus()).unwrap().region, Region::Inner);
    assert_eq!(st.sample(0.5 * (st.r_minus() + st.r_plus())).unwrap().region, Region::Well);
    assert_eq!(st.sample(1.5 * st.r_plus()).unwrap().region, Region::Outer);
    let norm = st.integrate(|r| st.eval_psi(r).map(|p| p * p), 1e-12).unwrap();
    assert!((norm - 1.0).abs() < 1e-10);
    let j = st.junction_mismatch().unwrap();
    assert!(j[0] < 1e-10 && j[1] < 1e-10);
    // One interior node for n = 1.
    let nodes = (1..=400)
        .map(|i| st.eval_psi(i as f64 / 400.0 * st.r_max).unwrap())
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| w[0] * w[1] < 0.0)
        .count();
    assert_eq!(nodes, 1);
}

#[test]
fn anharmonic_levels_have_metrics() {
    let s = ProblemSetup::with_exponent(3.0).unwrap();
    for level in [LevelKey::new(0, 0), LevelKey::new(1, 1)] {
        let r = level_report(&s, level, &GridSpec::default()).unwrap();
        assert!(r.delta_psi > 0.0 && r.delta_psi < 1e-2, "{r:?}");
        assert!(r.delta_e.abs() < 1e-2 && r.discrepancy_d > 0.0 && r.discrepancy_d < 1e-1, "{r:?}");
    }
}

#[test]
fn l0_variance_diverges_for_soft_potentials() {
    // HΨ ~ r^{k−2} at the origin for 1 < k < 2.
    let s = ProblemSetup::with_exponent(1.5).unwrap();
    let st = ApproxState::build(&s, LevelKey::new(0, 0)).unwrap();
    assert!(matches!(energy_expectation(&st), Err(Error::NotSquareIntegrable { .. })));
    let st = ApproxState::build(&s, LevelKey::new(0, 1)).unwrap();
    assert!(energy_expectation(&st).is_ok());
}

#[test]
fn invalid_setups_are_rejected() {
    assert!(matches!(ProblemSetup::new(1.0, -1.0, 1.0, 2.0), Err(Error::InvalidSetup(_))));
    assert!(matches!(ProblemSetup::with_exponent(0.0), Err(Error::InvalidSetup(_))));
    assert!(solve_level(&ProblemSetup::default(), LevelKey::new(0, 0)).is_ok());
}
