//! Jacobi parameters, normalization constants and polynomial evaluation.
//!
//! Polynomials use the classical normalization `P_n(1) = C(n + alpha, n)`.
//! The orthonormal family divides by `h_n`, the `L_2(w)` norm of `P_n` under
//! `w(t) = (1 - t)^alpha (1 + t)^beta`. Every gamma ratio is formed as a
//! difference of log-gamma values so nothing overflows for large degrees.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// The pair `(alpha, beta)` of a Jacobi weight, both strictly greater than -1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// Legendre weight `w = 1`.
    pub fn legendre() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma(&self) -> Sigma {
        sigma(self)
    }

    /// `(beta, alpha)`, the parameters of the reflected weight `w(-t)`.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// `true` when `|P~_n|` attains its maximum on `[-1, 1]` at `t = 1`.
    pub fn peaks_at_upper_endpoint(&self) -> bool {
        self.alpha >= self.beta && self.alpha >= -0.5
    }

    /// Total mass of the weight: `2^(a+b+1) G(a+1) G(b+1) / G(a+b+2)`.
    pub fn total_mass(&self) -> f64 {
        self.ln_total_mass().exp()
    }

    fn ln_total_mass(&self) -> f64 {
        let (a, b) = (self.alpha.min(self.beta), self.alpha.max(self.beta));
        (a + b + 1.0) * LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)
    }

    /// Weight function value; zero-power factors are treated as 1 at the endpoints.
    pub fn weight(&self, t: f64) -> f64 {
        pow_nonneg(1.0 - t, self.alpha) * pow_nonneg(1.0 + t, self.beta)
    }
}

fn pow_nonneg(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.max(0.0).powf(e)
    }
}

/// Growth exponent `max(0, 1/2 + max(alpha, beta))` of the orthonormal sup norms.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Sigma(f64);

impl Sigma {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn sigma(params: &JacobiParams) -> Sigma {
    Sigma((0.5 + params.alpha.max(params.beta)).max(0.0))
}

/// `h_n`, the `L_2(w)` norm of the classical Jacobi polynomial of degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationConstant {
    pub n: usize,
    pub h: f64,
}

/// `ln(h_n^2)`.
pub fn ln_norm_squared(params: &JacobiParams, n: usize) -> f64 {
    if n == 0 {
        // (2n+a+b+1) G(n+a+b+1) collapses to G(a+b+2); this also covers a+b = -1.
        return params.ln_total_mass();
    }
    let (a, b) = (params.alpha, params.beta);
    let nf = n as f64;
    // summed in a fixed order so that h_n is exactly symmetric in (a, b)
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let ab = lo + hi;
    (ab + 1.0) * LN_2 + ln_gamma(nf + lo + 1.0) + ln_gamma(nf + hi + 1.0)
        - (2.0 * nf + ab + 1.0).ln()
        - ln_gamma(nf + 1.0)
        - ln_gamma(nf + ab + 1.0)
}

pub fn normalization(params: &JacobiParams, n: usize) -> NormalizationConstant {
    NormalizationConstant {
        n,
        h: (0.5 * ln_norm_squared(params, n)).exp(),
    }
}

fn check_domain(t: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain(t))
    }
}

/// Coefficients `(A_n, B_n, C_n)` of `P_n = (A_n t + B_n) P_{n-1} - C_n P_{n-2}`, valid for `n >= 2`.
fn recurrence(a: f64, b: f64, n: usize) -> (f64, f64, f64) {
    let nf = n as f64;
    let s = 2.0 * nf + a + b;
    let den = 2.0 * nf * (nf + a + b) * (s - 2.0);
    let big_a = (s - 1.0) * s * (s - 2.0) / den;
    let big_b = (s - 1.0) * (a * a - b * b) / den;
    let big_c = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s / den;
    (big_a, big_b, big_c)
}

fn first_degree(a: f64, b: f64, t: f64) -> f64 {
    (a + 1.0) + 0.5 * (a + b + 2.0) * (t - 1.0)
}

/// Classical Jacobi polynomial `P_n^(alpha, beta)(t)` by forward three-term recurrence.
pub fn eval_jacobi(params: &JacobiParams, n: usize, t: f64) -> Result<f64> {
    check_domain(t)?;
    let (a, b) = (params.alpha, params.beta);
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = first_degree(a, b, t);
    for k in 2..=n {
        let (ra, rb, rc) = recurrence(a, b, k);
        let next = (ra * t + rb) * cur - rc * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

pub fn eval_orthonormal(params: &JacobiParams, n: usize, t: f64) -> Result<f64> {
    Ok(eval_jacobi(params, n, t)? / normalization(params, n).h)
}

/// `P~_n(1)` from `P_n(1) = G(n+a+1) / (G(n+1) G(a+1))`, in log space.
pub fn endpoint_value(params: &JacobiParams, n: usize) -> f64 {
    let a = params.alpha;
    let nf = n as f64;
    let ln_p1 = ln_gamma(nf + a + 1.0) - ln_gamma(nf + 1.0) - ln_gamma(a + 1.0);
    (ln_p1 - 0.5 * ln_norm_squared(params, n)).exp()
}

/// Number of grid points used to resolve a degree-`n` polynomial.
pub fn sup_grid_len(degree: usize) -> usize {
    (10 * degree + 1).max(64)
}

/// Chebyshev-Lobatto points `cos(pi k / (K - 1))`, ascending, endpoints included.
pub fn sup_grid(degree: usize) -> Vec<f64> {
    let k = sup_grid_len(degree);
    let last = (k - 1) as f64;
    (0..k)
        .rev()
        .map(|j| (PI * j as f64 / last).cos())
        .map(|t| t.clamp(-1.0, 1.0))
        .collect()
}

/// Grid estimate of `max |P~_n(t)|` over `[-1, 1]`.
pub fn sup_norm_orthonormal(params: &JacobiParams, n: usize) -> f64 {
    let inv_h = 1.0 / normalization(params, n).h;
    sup_grid(n)
        .into_iter()
        .map(|t| (eval_jacobi(params, n, t).expect("grid inside [-1, 1]") * inv_h).abs())
        .fold(0.0, f64::max)
}

/// Precomputed recurrence and normalization tables for degrees `0..=degree`.
///
/// Evaluating every basis function at once costs `O(degree)` per point and is
/// what the transforms and quadrature-based checks use internally.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    params: JacobiParams,
    inv_h: Vec<f64>,
    rec: Vec<(f64, f64, f64)>,
}

impl OrthonormalBasis {
    pub fn new(params: JacobiParams, degree: usize) -> Self {
        let inv_h = (0..=degree)
            .map(|n| (-0.5 * ln_norm_squared(&params, n)).exp())
            .collect();
        let rec = (0..=degree)
            .map(|n| {
                if n < 2 {
                    (0.0, 0.0, 0.0)
                } else {
                    recurrence(params.alpha, params.beta, n)
                }
            })
            .collect();
        Self { params, inv_h, rec }
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn degree(&self) -> usize {
        self.inv_h.len() - 1
    }

    pub fn inv_norms(&self) -> &[f64] {
        &self.inv_h
    }

    /// Fills `out[n] = P~_n(t)` for `n < out.len()`. `t` is not range-checked.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let len = out.len().min(self.inv_h.len());
        if len == 0 {
            return;
        }
        let (a, b) = (self.params.alpha, self.params.beta);
        let mut prev = 1.0;
        out[0] = self.inv_h[0];
        if len == 1 {
            return;
        }
        let mut cur = first_degree(a, b, t);
        out[1] = cur * self.inv_h[1];
        for n in 2..len {
            let (ra, rb, rc) = self.rec[n];
            let next = (ra * t + rb) * cur - rc * prev;
            prev = cur;
            cur = next;
            out[n] = cur * self.inv_h[n];
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.inv_h.len()];
        self.eval_into(t, &mut out);
        out
    }

    /// `sum_n coeffs[n] P~_n(t)` without allocating. `t` is not range-checked.
    pub fn sum(&self, coeffs: &[f64], t: f64) -> f64 {
        let len = coeffs.len().min(self.inv_h.len());
        if len == 0 {
            return 0.0;
        }
        let (a, b) = (self.params.alpha, self.params.beta);
        let mut acc = coeffs[0] * self.inv_h[0];
        if len == 1 {
            return acc;
        }
        let mut prev = 1.0;
        let mut cur = first_degree(a, b, t);
        acc += coeffs[1] * cur * self.inv_h[1];
        for n in 2..len {
            let (ra, rb, rc) = self.rec[n];
            let next = (ra * t + rb) * cur - rc * prev;
            prev = cur;
            cur = next;
            acc += coeffs[n] * cur * self.inv_h[n];
        }
        acc
    }
}
