#![allow(dead_code)]

use statrs::function::gamma::ln_gamma;

pub const PARAM_SET: [(f64, f64); 4] = [(0.0, 0.0), (-0.5, -0.5), (1.0, 0.0), (0.3, 1.7)];

/// Moments `int_{-1}^{1} t^k (1-t)^a (1+t)^b dt` for `k = 0..=kmax`.
///
/// Integrating `d/dt [t^k (1-t)^(a+1) (1+t)^(b+1)]` over `[-1, 1]` gives
/// `mu_{k+1} = (k mu_{k-1} + (b - a) mu_k) / (k + a + b + 2)`.
pub fn moments(a: f64, b: f64, kmax: usize) -> Vec<f64> {
    let mass =
        ((a + b + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0))
            .exp();
    let mut mu = vec![mass];
    for k in 0..kmax {
        let prev = if k == 0 { 0.0 } else { mu[k - 1] };
        let kf = k as f64;
        mu.push((kf * prev + (b - a) * mu[k]) / (kf + a + b + 2.0));
    }
    mu
}

/// Scale for comparing `mu_k`: odd moments of symmetric weights vanish, so
/// they are measured against the Cauchy-Schwarz bound from their neighbours.
pub fn moment_scale(mu: &[f64], k: usize) -> f64 {
    let neighbours = if k > 0 && k + 1 < mu.len() {
        (mu[k - 1] * mu[k + 1]).abs().sqrt()
    } else {
        0.0
    };
    mu[k].abs().max(neighbours)
}

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// `L_2` norm of the Legendre polynomial of degree `n`.
pub fn legendre_norm(n: usize) -> f64 {
    (2.0 / (2 * n + 1) as f64).sqrt()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}
