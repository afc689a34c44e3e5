mod common;

use common::{moment_scale, moments, PARAM_SET};
use jacobi_paley::jacobi::{JacobiParams, OrthonormalBasis};
use jacobi_paley::quadrature::{gauss_jacobi_rule, integrate_adaptive, nodes_for_degree};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rules_integrate_moments_exactly(a in -0.95f64..3.0, b in -0.95f64..3.0, m in 1usize..48) {
        let rule = gauss_jacobi_rule(&JacobiParams::new(a, b).unwrap(), m).unwrap();
        let mu = moments(a, b, 2 * m);
        for k in 0..2 * m {
            let q: f64 = rule.iter().map(|(x, w)| w * x.powi(k as i32)).sum();
            prop_assert!((q - mu[k]).abs() <= 1e-11 * moment_scale(&mu, k), "k={k} q={q} mu={}", mu[k]);
        }
    }

    #[test]
    fn nodes_are_interior_and_weights_positive(a in -0.95f64..3.0, b in -0.95f64..3.0, m in 1usize..200) {
        let rule = gauss_jacobi_rule(&JacobiParams::new(a, b).unwrap(), m).unwrap();
        prop_assert_eq!(rule.len(), m);
        prop_assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(rule.nodes().iter().all(|x| x.abs() < 1.0));
        prop_assert!(rule.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn basis_is_orthonormal(a in -0.95f64..3.0, b in -0.95f64..3.0, degree in 1usize..40) {
        let p = JacobiParams::new(a, b).unwrap();
        let rule = gauss_jacobi_rule(&p, nodes_for_degree(2 * degree)).unwrap();
        let basis = OrthonormalBasis::new(p, degree);
        let mut gram = vec![0.0; (degree + 1) * (degree + 1)];
        for (x, w) in rule.iter() {
            let v = basis.eval(x);
            for n in 0..=degree {
                for m in 0..=degree {
                    gram[n * (degree + 1) + m] += w * v[n] * v[m];
                }
            }
        }
        for n in 0..=degree {
            for m in 0..=degree {
                let want = if n == m { 1.0 } else { 0.0 };
                prop_assert!((gram[n * (degree + 1) + m] - want).abs() <= 1e-11);
            }
        }
    }
}

#[test]
fn weights_sum_to_total_mass() {
    for (a, b) in PARAM_SET {
        let p = JacobiParams::new(a, b).unwrap();
        let mass = moments(a, b, 0)[0];
        for m in [1, 7, 100, 1000] {
            let sum: f64 = gauss_jacobi_rule(&p, m).unwrap().weights().iter().sum();
            assert!((sum - mass).abs() <= 1e-12 * mass, "({a},{b}) m={m}: {sum} vs {mass}");
        }
    }
}

#[test]
fn adaptive_integration_of_smooth_function() {
    // int_{-1}^{1} e^t (1-t^2)^(-1/2) dt = pi I_0(1)
    let p = JacobiParams::new(-0.5, -0.5).unwrap();
    let est = integrate_adaptive(&p, 4, |rule| vec![rule.iter().map(|(x, w)| w * x.exp()).sum()]).unwrap();
    let i0 = (0..30).map(|k| 0.25f64.powi(k) / factorial(k as u32).powi(2)).sum::<f64>();
    assert!(est.converged);
    assert!((est.value[0] - std::f64::consts::PI * i0).abs() < 1e-13);
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}
