//! Gauss-Jacobi quadrature for `w(t) = (1 - t)^alpha (1 + t)^beta`.
//!
//! Rules come from the symmetric tridiagonal matrix of the orthonormal
//! recurrence (Golub-Welsch): nodes are its eigenvalues, weights are the total
//! mass times the squared first components of the eigenvectors. Only the first
//! eigenvector row is tracked, so construction costs `O(m^2)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;

/// Extra nodes added on top of the exactness requirement.
pub const SAFETY_NODES: usize = 8;
/// Agreement required between successive doublings of an adaptive integral.
pub const ADAPTIVE_REL_TOL: f64 = 1e-9;
/// Largest rule an adaptive integral may use.
pub const MAX_ADAPTIVE_NODES: usize = 1 << 14;
/// Smallest per-panel cap of [`integrate_adaptive_panels`].
pub const MIN_PANEL_CAP: usize = 512;

const MAX_QL_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    params: JacobiParams,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Number of mapped Gauss pieces: 1, or 2 for a [`split_rule`].
    pieces: usize,
}

impl QuadratureRule {
    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Highest polynomial degree integrated exactly; `None` for split rules,
    /// whose weights carry a non-polynomial factor.
    pub fn exact_degree(&self) -> Option<usize> {
        (self.pieces == 1).then(|| 2 * self.nodes.len() - 1)
    }
}

/// Nodes needed to integrate degree `d` exactly, plus the safety margin.
pub fn nodes_for_degree(d: usize) -> usize {
    (d + 1).div_ceil(2) + SAFETY_NODES
}

/// Recurrence coefficients of the orthonormal Jacobi family: diagonal `a_k`
/// for `k < m` and off-diagonal `b_k` for `1 <= k < m`.
fn jacobi_matrix(params: &JacobiParams, m: usize) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (params.alpha(), params.beta());
    let diag = (0..m)
        .map(|k| {
            let s = 2.0 * k as f64 + a + b;
            if k == 0 {
                (b - a) / (a + b + 2.0)
            } else {
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (1..m)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + a + b;
            if k == 1 {
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))).sqrt()
            } else {
                (4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0)))
                    .sqrt()
            }
        })
        .collect();
    (diag, off)
}

/// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal and is overwritten with eigenvalues; `e[i]` couples
/// rows `i` and `i + 1` (`e.len() == d.len()`, last entry ignored). `z` is the
/// first row of the accumulated rotation matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::EigenNoConvergence { index: l, size: n });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// The `m`-point Gauss rule for the Jacobi weight of `params`.
pub fn gauss_jacobi_rule(params: &JacobiParams, m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::InvalidNodeCount(m));
    }
    let (mut d, off) = jacobi_matrix(params, m);
    let mut e = off;
    e.push(0.0);
    let mut z = vec![0.0; m];
    z[0] = 1.0;
    tridiagonal_ql(&mut d, &mut e, &mut z)?;

    let mass = params.total_mass();
    let mut pairs: Vec<(f64, f64)> = d
        .into_iter()
        .zip(z)
        .map(|(x, v)| (x, mass * v * v))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        params: *params,
        nodes,
        weights,
        pieces: 1,
    })
}

type RuleKey = (u64, u64, usize);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized [`gauss_jacobi_rule`]. Rules are immutable once built.
pub fn cached_rule(params: &JacobiParams, m: usize) -> Result<Arc<QuadratureRule>> {
    let key = (params.alpha().to_bits(), params.beta().to_bits(), m);
    if let Some(rule) = rule_cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_jacobi_rule(params, m)?);
    let mut cache = rule_cache().lock().expect("rule cache poisoned");
    Ok(Arc::clone(cache.entry(key).or_insert(rule)))
}

pub fn integrate(rule: &QuadratureRule, f: impl Fn(f64) -> f64) -> f64 {
    rule.iter().map(|(x, w)| w * f(x)).sum()
}

/// Like [`integrate`], stopping at the first evaluation failure.
pub fn try_integrate<E>(
    rule: &QuadratureRule,
    f: impl Fn(f64) -> std::result::Result<f64, E>,
) -> std::result::Result<f64, E> {
    rule.iter().try_fold(0.0, |acc, (x, w)| Ok(acc + w * f(x)?))
}

/// Result of a quadrature whose accuracy is not guaranteed by exactness.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    /// Nodes of the last rule used.
    pub nodes: usize,
    /// `false` when the doubling ladder hit [`MAX_ADAPTIVE_NODES`] first.
    pub converged: bool,
}

/// Doubles the rule size from `start` until two successive vector estimates
/// agree to [`ADAPTIVE_REL_TOL`] (sup-norm, relative to the largest entry).
pub fn integrate_adaptive(
    params: &JacobiParams,
    start: usize,
    f: impl Fn(&QuadratureRule) -> Vec<f64>,
) -> Result<Estimate<Vec<f64>>> {
    adaptive(start, MAX_ADAPTIVE_NODES, |m| cached_rule(params, m), f)
}

/// [`integrate_adaptive`] over [`panel_rule`]s; `start` counts nodes per panel.
///
/// The per-panel size is capped so that the total stays near
/// [`MAX_ADAPTIVE_NODES`], but never below [`MIN_PANEL_CAP`].
pub fn integrate_adaptive_panels(
    params: &JacobiParams,
    breaks: &[f64],
    start: usize,
    f: impl Fn(&QuadratureRule) -> Vec<f64>,
) -> Result<Estimate<Vec<f64>>> {
    let cap = (MAX_ADAPTIVE_NODES / (breaks.len() + 1))
        .next_power_of_two()
        .clamp(MIN_PANEL_CAP, MAX_ADAPTIVE_NODES);
    adaptive(start, cap, |m| panel_rule(params, breaks, m).map(Arc::new), f)
}

fn adaptive(
    start: usize,
    cap: usize,
    rule_of: impl Fn(usize) -> Result<Arc<QuadratureRule>>,
    f: impl Fn(&QuadratureRule) -> Vec<f64>,
) -> Result<Estimate<Vec<f64>>> {
    let mut m = start.clamp(1, cap);
    let mut prev = f(&*rule_of(m)?);
    loop {
        if 2 * m > cap {
            return Ok(Estimate {
                value: prev,
                nodes: m,
                converged: false,
            });
        }
        m *= 2;
        let next = f(&*rule_of(m)?);
        let scale = next.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let diff = next
            .iter()
            .zip(&prev)
            .fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
        if diff <= ADAPTIVE_REL_TOL * scale {
            return Ok(Estimate {
                value: next,
                nodes: m,
                converged: true,
            });
        }
        prev = next;
    }
}

/// Composite rule for the weight of `params` on the panels cut by `breaks`.
///
/// Each panel carries `m` mapped Gauss nodes. The two outer panels use the
/// Gauss-Jacobi rule for their own endpoint exponent, so the singular factor
/// of the weight is absorbed; the remaining factor is smooth on every panel
/// and goes into the weights. `breaks` must be strictly increasing inside
/// `(-1, 1)`; an empty list gives the plain Gauss-Jacobi rule.
pub fn panel_rule(params: &JacobiParams, breaks: &[f64], m: usize) -> Result<QuadratureRule> {
    if breaks.is_empty() {
        return Ok((*cached_rule(params, m)?).clone());
    }
    if breaks.iter().any(|b| !(b.abs() < 1.0)) || breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "panel breaks must be strictly increasing inside (-1, 1)".into(),
        ));
    }
    let (a, b) = (params.alpha(), params.beta());
    let edges: Vec<f64> = std::iter::once(-1.0)
        .chain(breaks.iter().copied())
        .chain(std::iter::once(1.0))
        .collect();
    let pieces = edges.len() - 1;
    let lower = cached_rule(&JacobiParams::new(0.0, b)?, m)?;
    let upper = cached_rule(&JacobiParams::new(a, 0.0)?, m)?;
    let inner = cached_rule(&JacobiParams::legendre(), m)?;
    let mut nodes = Vec::with_capacity(pieces * m);
    let mut weights = Vec::with_capacity(pieces * m);
    for (i, e) in edges.windows(2).enumerate() {
        let (lo, hi) = (e[0], e[1]);
        let half = 0.5 * (hi - lo);
        if i == 0 {
            // 1 + t = half (1 + u)
            let scale = half.powf(b + 1.0);
            for (u, w) in lower.iter() {
                let t = lo + half * (1.0 + u);
                nodes.push(t);
                weights.push(scale * w * (1.0 - t).powf(a));
            }
        } else if i == pieces - 1 {
            // 1 - t = half (1 - u)
            let scale = half.powf(a + 1.0);
            for (u, w) in upper.iter() {
                let t = hi - half * (1.0 - u);
                nodes.push(t);
                weights.push(scale * w * (1.0 + t).powf(b));
            }
        } else {
            for (u, w) in inner.iter() {
                let t = lo + half * (1.0 + u);
                nodes.push(t);
                weights.push(half * w * params.weight(t));
            }
        }
    }
    Ok(QuadratureRule {
        params: *params,
        nodes,
        weights,
        pieces,
    })
}

/// [`panel_rule`] with a single break at the origin.
pub fn split_rule(params: &JacobiParams, m: usize) -> Result<QuadratureRule> {
    panel_rule(params, &[0.0], m)
}

/// Scalar form of [`integrate_adaptive`].
pub fn integrate_adaptive_scalar(
    params: &JacobiParams,
    start: usize,
    f: impl Fn(f64) -> f64,
) -> Result<Estimate<f64>> {
    let est = integrate_adaptive(params, start, |rule| vec![integrate(rule, &f)])?;
    Ok(Estimate {
        value: est.value[0],
        nodes: est.nodes,
        converged: est.converged,
    })
}
