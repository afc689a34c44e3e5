mod common;

use common::{harmonic, rel_err};
use jacobi_paley::counterexample::{
    build_gn, divergence_trace, endpoint_sup, power_ladder, GrowthModel, Orientation,
};
use jacobi_paley::inequalities::{compute_m_omega, REANALYSIS_TOL, WeightSequence};
use jacobi_paley::jacobi::JacobiParams;
use jacobi_paley::transform::{analyze, sup_norm, FunctionSpec};
use std::f64::consts::PI;

#[test]
fn reanalysis_recovers_coefficients() {
    let omega = WeightSequence::power(-2.0);
    for (a, b) in [(0.0, 0.0), (1.0, 0.0), (0.3, 1.7), (-0.5, -0.5)] {
        let p = JacobiParams::new(a, b).unwrap();
        let g = build_gn(&omega, &p, 128).unwrap();
        let back = analyze(&FunctionSpec::orthonormal("g", g.clone()), 128, &p).unwrap();
        let worst = back
            .coeffs
            .values()
            .iter()
            .zip(g.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(worst <= REANALYSIS_TOL, "({a},{b}): {worst}");
    }
}

#[test]
fn sup_norms_grow_along_the_ladder() {
    for (a, b) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)] {
        let p = JacobiParams::new(a, b).unwrap();
        let exponent = -1.0 - 2.0 * p.sigma().value();
        let trace = divergence_trace(&WeightSequence::power(exponent), &p, &power_ladder(3, 10)).unwrap();
        let sups = trace.sup_norms();
        assert!(sups.windows(2).all(|w| w[0] < w[1]), "({a},{b}): {sups:?}");
        assert_eq!(trace.growth.model, GrowthModel::Logarithmic);
        for r in &trace.rows {
            assert!(r.grid_sup_norm <= r.sup_norm * (1.0 + 1e-8));
            assert!(rel_err(r.budget, harmonic(r.degree + 1)) <= 1e-12);
        }
    }
}

#[test]
fn chebyshev_case_matches_closed_form() {
    // sigma = 0, P~_0(1) = 1/sqrt(pi), P~_n(1) = sqrt(2/pi) for n >= 1
    let p = JacobiParams::new(-0.5, -0.5).unwrap();
    let omega = WeightSequence::power(-1.0);
    assert_eq!(compute_m_omega(&omega, &p).value, 1.0);
    let ladder = power_ladder(2, 9);
    let trace = divergence_trace(&omega, &p, &ladder).unwrap();
    for r in &trace.rows {
        let want = 1.0 / PI.sqrt() + (2.0 / PI).sqrt() * (harmonic(r.degree + 1) - 1.0);
        assert!(rel_err(r.sup_norm, want) <= 1e-12, "N={}: {} vs {want}", r.degree, r.sup_norm);
        assert!(rel_err(r.budget, harmonic(r.degree + 1)) <= 1e-12);
    }
}

#[test]
fn lower_orientation_peaks_at_minus_one() {
    let p = JacobiParams::new(0.0, 1.0).unwrap();
    assert_eq!(Orientation::of(&p), Orientation::Lower);
    let g = build_gn(&WeightSequence::power(-3.0), &p, 64).unwrap();
    let ex = g.expansion();
    assert!(rel_err(ex.eval(-1.0).abs(), endpoint_sup(&g)) <= 1e-12);
    assert!(sup_norm(&g) <= endpoint_sup(&g) * (1.0 + 1e-8));
}

#[test]
fn convergent_budget_is_rejected() {
    let p = JacobiParams::legendre();
    assert!(divergence_trace(&WeightSequence::power(-3.0), &p, &[8, 16]).is_err());
    assert!(divergence_trace(&WeightSequence::power(-2.0), &p, &[16, 8]).is_err());
}
