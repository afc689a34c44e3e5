//! Jacobi analysis (coefficients), synthesis (partial sums) and weighted norms.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::{sup_grid, JacobiParams, OrthonormalBasis};
use crate::quadrature::{
    cached_rule, integrate_adaptive, integrate_adaptive_panels, nodes_for_degree, Estimate,
    QuadratureRule,
};

/// Finite list of expansion coefficients `c_0, ..., c_N` in the orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSequence {
    params: JacobiParams,
    values: Vec<f64>,
}

impl CoefficientSequence {
    pub fn new(params: JacobiParams, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCoefficients);
        }
        Ok(Self { params, values })
    }

    /// The `n`-th unit vector of length `degree + 1`.
    pub fn unit(params: JacobiParams, n: usize, degree: usize) -> Self {
        let mut values = vec![0.0; degree.max(n) + 1];
        values[n] = 1.0;
        Self { params, values }
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Truncation degree `N` (`len - 1`).
    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }

    /// The first `degree + 1` coefficients.
    pub fn truncated(&self, degree: usize) -> Self {
        let end = (degree + 1).min(self.values.len());
        Self {
            params: self.params,
            values: self.values[..end].to_vec(),
        }
    }

    pub fn expansion(&self) -> Expansion {
        Expansion::new(self)
    }
}

/// A coefficient sequence paired with its basis tables, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Expansion {
    basis: OrthonormalBasis,
    coeffs: Vec<f64>,
}

impl Expansion {
    pub fn new(coeffs: &CoefficientSequence) -> Self {
        Self {
            basis: OrthonormalBasis::new(coeffs.params, coeffs.truncation()),
            coeffs: coeffs.values.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.basis.sum(&self.coeffs, t)
    }
}

/// Regularity class of a corpus function; decides how its integrals are computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Smoothness {
    Polynomial { degree: usize },
    Piecewise,
    EndpointSingular { exponent: f64 },
    Analytic,
}

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum FunctionKind {
    /// `sum_k coeffs[k] t^k`.
    Monomial(Vec<f64>),
    /// `sum_n coeffs[n] P~_n(t)` for the given parameters.
    Orthonormal(CoefficientSequence),
    /// `sign(t)` with `sign(0) = 0`.
    Sign,
    /// Heaviside step at `t = 0`, equal to `1/2` at the jump.
    Step,
    Abs,
    /// `(1 - t)^upper (1 + t)^lower`.
    EndpointPower { upper: f64, lower: f64 },
    Exp { rate: f64 },
    Cos { freq: f64 },
    /// `1 / (at - t)` with `|at| > 1`.
    Pole { at: f64 },
    Custom {
        eval: Evaluator,
        smoothness: Smoothness,
    },
}

impl fmt::Debug for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Monomial(c) => f.debug_tuple("Monomial").field(c).finish(),
            Self::Orthonormal(c) => f.debug_tuple("Orthonormal").field(&c.values()).finish(),
            Self::Sign => write!(f, "Sign"),
            Self::Step => write!(f, "Step"),
            Self::Abs => write!(f, "Abs"),
            Self::EndpointPower { upper, lower } => f
                .debug_struct("EndpointPower")
                .field("upper", upper)
                .field("lower", lower)
                .finish(),
            Self::Exp { rate } => f.debug_struct("Exp").field("rate", rate).finish(),
            Self::Cos { freq } => f.debug_struct("Cos").field("freq", freq).finish(),
            Self::Pole { at } => f.debug_struct("Pole").field("at", at).finish(),
            Self::Custom { smoothness, .. } => f
                .debug_struct("Custom")
                .field("smoothness", smoothness)
                .finish_non_exhaustive(),
        }
    }
}

/// A labelled test function on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    pub id: String,
    pub kind: FunctionKind,
    /// Closed range of `p` for which the author declares `f` in `L_p(w)`.
    pub valid_p: (f64, f64),
    /// Bound on `||f||_{L_2(w)} - (sum_{n<=200} f^_n^2)^(1/2)`.
    pub tail_bound: Option<f64>,
}

impl FunctionSpec {
    pub fn new(id: impl Into<String>, kind: FunctionKind) -> Self {
        Self {
            id: id.into(),
            kind,
            valid_p: (1.0, f64::INFINITY),
            tail_bound: None,
        }
    }

    pub fn with_valid_p(mut self, lo: f64, hi: f64) -> Self {
        self.valid_p = (lo, hi);
        self
    }

    pub fn with_tail_bound(mut self, bound: f64) -> Self {
        self.tail_bound = Some(bound);
        self
    }

    pub fn orthonormal(id: impl Into<String>, coeffs: CoefficientSequence) -> Self {
        Self::new(id, FunctionKind::Orthonormal(coeffs))
    }

    pub fn supports_p(&self, p: f64) -> bool {
        p >= self.valid_p.0 && p <= self.valid_p.1
    }

    pub fn smoothness(&self) -> Smoothness {
        match &self.kind {
            FunctionKind::Monomial(c) => Smoothness::Polynomial {
                degree: c.len().saturating_sub(1),
            },
            FunctionKind::Orthonormal(c) => Smoothness::Polynomial {
                degree: c.truncation(),
            },
            FunctionKind::Sign | FunctionKind::Step | FunctionKind::Abs => Smoothness::Piecewise,
            FunctionKind::EndpointPower { upper, lower } => Smoothness::EndpointSingular {
                exponent: upper.min(*lower),
            },
            FunctionKind::Exp { .. } | FunctionKind::Cos { .. } | FunctionKind::Pole { .. } => {
                Smoothness::Analytic
            }
            FunctionKind::Custom { smoothness, .. } => *smoothness,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.endpoint_factor(t) * self.core(t)
    }

    /// Exponents `(upper, lower)` of the algebraic factor `(1-t)^upper (1+t)^lower`
    /// that is folded into the quadrature weight.
    fn endpoint_exponents(&self) -> (f64, f64) {
        match &self.kind {
            FunctionKind::EndpointPower { upper, lower } => (*upper, *lower),
            _ => (0.0, 0.0),
        }
    }

    fn endpoint_factor(&self, t: f64) -> f64 {
        let (u, l) = self.endpoint_exponents();
        let pow = |x: f64, e: f64| if e == 0.0 { 1.0 } else { x.powf(e) };
        pow(1.0 - t, u) * pow(1.0 + t, l)
    }

    /// The function with its endpoint factor removed.
    fn core(&self, t: f64) -> f64 {
        match &self.kind {
            FunctionKind::Monomial(c) => c.iter().rev().fold(0.0, |acc, &a| acc * t + a),
            FunctionKind::Orthonormal(c) => {
                OrthonormalBasis::new(c.params, c.truncation()).sum(&c.values, t)
            }
            FunctionKind::Sign => sign(t),
            FunctionKind::Step => 0.5 * (1.0 + sign(t)),
            FunctionKind::Abs => t.abs(),
            FunctionKind::EndpointPower { .. } => 1.0,
            FunctionKind::Exp { rate } => (rate * t).exp(),
            FunctionKind::Cos { freq } => (freq * t).cos(),
            FunctionKind::Pole { at } => 1.0 / (at - t),
            FunctionKind::Custom { eval, .. } => eval(t),
        }
    }

    /// Built-in piecewise kinds, all with their single break at `t = 0`.
    fn breaks_at_zero(&self) -> bool {
        matches!(
            self.kind,
            FunctionKind::Sign | FunctionKind::Step | FunctionKind::Abs
        )
    }

    /// Degree of the core when it is a polynomial.
    fn core_degree(&self) -> Option<usize> {
        match &self.kind {
            FunctionKind::EndpointPower { .. } => Some(0),
            _ => match self.smoothness() {
                Smoothness::Polynomial { degree } => Some(degree),
                _ => None,
            },
        }
    }

    /// Vectorized core evaluation; orthonormal kinds build their basis once.
    fn core_values(&self, nodes: &[f64]) -> Vec<f64> {
        match &self.kind {
            FunctionKind::Orthonormal(c) => {
                let basis = OrthonormalBasis::new(c.params, c.truncation());
                nodes.iter().map(|&t| basis.sum(&c.values, t)).collect()
            }
            _ => nodes.iter().map(|&t| self.core(t)).collect(),
        }
    }
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Coefficients together with how they were obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub coeffs: CoefficientSequence,
    pub nodes: usize,
    /// `false` marks a low-confidence adaptive integral.
    pub converged: bool,
}

fn shifted_params(
    f: &FunctionSpec,
    params: &JacobiParams,
    power: f64,
) -> Result<JacobiParams> {
    let (u, l) = f.endpoint_exponents();
    JacobiParams::new(params.alpha() + u * power, params.beta() + l * power).map_err(|_| {
        Error::NotIntegrable {
            id: f.id.clone(),
            p: power,
            alpha: params.alpha(),
            beta: params.beta(),
        }
    })
}

fn first_power_of_two_at_least(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Coefficients `f^_n = int f P~_n w` for `n = 0..=degree`.
///
/// Polynomial cores are integrated exactly; anything else goes through the
/// adaptive doubling ladder and may come back unconverged.
pub fn analyze(f: &FunctionSpec, degree: usize, params: &JacobiParams) -> Result<Analysis> {
    let q = shifted_params(f, params, 1.0)?;
    let basis = OrthonormalBasis::new(*params, degree);
    let project = |rule: &QuadratureRule| -> Vec<f64> {
        let core = f.core_values(rule.nodes());
        let mut acc = vec![0.0; degree + 1];
        let mut buf = vec![0.0; degree + 1];
        for ((x, w), g) in rule.iter().zip(core) {
            basis.eval_into(x, &mut buf);
            let wg = w * g;
            for (a, b) in acc.iter_mut().zip(&buf) {
                *a += wg * b;
            }
        }
        acc
    };
    let est = match f.core_degree() {
        Some(d) => {
            let rule = cached_rule(&q, nodes_for_degree(d + degree))?;
            Estimate {
                value: project(&rule),
                nodes: rule.len(),
                converged: true,
            }
        }
        None => {
            let start = first_power_of_two_at_least(nodes_for_degree(degree));
            if f.breaks_at_zero() {
                integrate_adaptive_panels(&q, &[0.0], start, project)?
            } else {
                integrate_adaptive(&q, start, project)?
            }
        }
    };
    Ok(Analysis {
        coeffs: CoefficientSequence::new(*params, est.value)?,
        nodes: est.nodes,
        converged: est.converged,
    })
}

/// `sum_n c_n P~_n(t)`.
pub fn synthesize(coeffs: &CoefficientSequence, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(t));
    }
    Ok(OrthonormalBasis::new(coeffs.params, coeffs.truncation()).sum(&coeffs.values, t))
}

fn check_norm_exponent(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidExponent {
            name: "p",
            value: p,
            range: "[1, inf)".into(),
        })
    }
}

fn is_even_integer(p: f64) -> bool {
    p.fract() == 0.0 && (p as u64).is_multiple_of(2)
}

/// Samples used to look for sign changes of a non-polynomial core.
const ZERO_SCAN_DEGREE: usize = 400;
const BREAK_MERGE_TOL: f64 = 1e-12;

/// Interior sign changes of `g`, bracketed on the Chebyshev grid for `degree`
/// and refined by bisection.
fn sign_changes(g: impl Fn(f64) -> f64, degree: usize) -> Vec<f64> {
    let grid = sup_grid(degree);
    let vals: Vec<f64> = grid.iter().map(|&t| g(t)).collect();
    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        let (glo, ghi) = (vals[i], vals[i + 1]);
        if glo == 0.0 && i > 0 {
            out.push(lo);
            continue;
        }
        if glo * ghi >= 0.0 {
            continue;
        }
        let neg_lo = glo < 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (g(mid) < 0.0) == neg_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

fn merge_breaks(mut breaks: Vec<f64>) -> Vec<f64> {
    breaks.retain(|b| b.abs() < 1.0 - BREAK_MERGE_TOL);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|b, a| *b - *a < BREAK_MERGE_TOL);
    breaks
}

/// `p`-th root of `int |g|^p` against the weight of `q`.
///
/// For `p` other than an even integer, `|g|^p` has a kink wherever `g`
/// changes sign; those points become panel breaks, as does the origin for
/// the built-in piecewise kinds.
fn lp_norm_core(
    q: &JacobiParams,
    p: f64,
    degree: Option<usize>,
    break_at_zero: bool,
    core: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<Estimate<f64>> {
    let integrate_power = |rule: &QuadratureRule| -> Vec<f64> {
        let vals = core(rule.nodes());
        let s = rule
            .weights()
            .iter()
            .zip(vals)
            .map(|(w, g)| w * g.abs().powf(p))
            .sum();
        vec![s]
    };
    let exact = |m: usize| -> Result<Estimate<Vec<f64>>> {
        let rule = cached_rule(q, m)?;
        Ok(Estimate {
            value: integrate_power(&rule),
            nodes: rule.len(),
            converged: true,
        })
    };
    let est = match degree {
        Some(0) => exact(nodes_for_degree(0))?,
        Some(d) if is_even_integer(p) => exact(nodes_for_degree(p as usize * d))?,
        _ => {
            let mut breaks = if is_even_integer(p) {
                Vec::new()
            } else {
                sign_changes(|t| core(&[t])[0], degree.unwrap_or(ZERO_SCAN_DEGREE))
            };
            if break_at_zero {
                breaks.push(0.0);
            }
            let breaks = merge_breaks(breaks);
            let total = match degree {
                Some(d) => nodes_for_degree((p.ceil() as usize) * d),
                None => 16,
            };
            let start = first_power_of_two_at_least(total / (breaks.len() + 1)).max(16);
            if breaks.is_empty() {
                integrate_adaptive(q, start, integrate_power)?
            } else {
                integrate_adaptive_panels(q, &breaks, start, integrate_power)?
            }
        }
    };
    Ok(Estimate {
        value: est.value[0].powf(1.0 / p),
        nodes: est.nodes,
        converged: est.converged,
    })
}

/// `||f||_{L_p(w)}`; fails with [`Error::NotIntegrable`] when an endpoint
/// factor makes `|f|^p w` non-integrable.
pub fn lp_norm(f: &FunctionSpec, p: f64, params: &JacobiParams) -> Result<Estimate<f64>> {
    check_norm_exponent(p)?;
    let q = shifted_params(f, params, p).map_err(|_| Error::NotIntegrable {
        id: f.id.clone(),
        p,
        alpha: params.alpha(),
        beta: params.beta(),
    })?;
    lp_norm_core(&q, p, f.core_degree(), f.breaks_at_zero(), |nodes| {
        f.core_values(nodes)
    })
}

/// `||sum c_n P~_n||_{L_p(w)}` for a finite expansion.
pub fn lp_norm_expansion(coeffs: &CoefficientSequence, p: f64) -> Result<Estimate<f64>> {
    check_norm_exponent(p)?;
    let ex = coeffs.expansion();
    lp_norm_core(coeffs.params(), p, Some(ex.degree()), false, |nodes| {
        nodes.iter().map(|&t| ex.eval(t)).collect()
    })
}

/// Max of `|synthesize|` over the Chebyshev grid sized for the degree.
pub fn sup_norm(coeffs: &CoefficientSequence) -> f64 {
    let ex = coeffs.expansion();
    sup_grid(coeffs.truncation())
        .into_iter()
        .map(|t| ex.eval(t).abs())
        .fold(0.0, f64::max)
}

/// `(sum_n (multiplier(n) |c_n|)^s)^(1/s)`, scaled by the largest term to
/// avoid overflow for large `s`.
pub fn weighted_coeff_norm(coeffs: &[f64], s: f64, multiplier: impl Fn(usize) -> f64) -> f64 {
    let terms: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| multiplier(n) * c.abs())
        .collect();
    let top = terms.iter().fold(0.0f64, |m, &x| m.max(x));
    if top == 0.0 {
        return 0.0;
    }
    let sum: f64 = terms.iter().map(|x| (x / top).powf(s)).sum();
    top * sum.powf(1.0 / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leg() -> JacobiParams {
        JacobiParams::legendre()
    }

    #[test]
    fn coefficient_sequence_validation() {
        assert!(CoefficientSequence::new(leg(), vec![]).is_err());
        assert!(CoefficientSequence::new(leg(), vec![1.0, f64::NAN]).is_err());
        let c = CoefficientSequence::new(leg(), vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(c.truncation(), 2);
        assert_eq!(c.truncated(0).values(), &[1.0]);
    }

    #[test]
    fn analyze_orthonormal_basis_function() {
        let f = FunctionSpec::orthonormal("p5", CoefficientSequence::unit(leg(), 5, 5));
        let a = analyze(&f, 8, &leg()).unwrap();
        assert!(a.converged);
        for (n, v) in a.coeffs.values().iter().enumerate() {
            let e = if n == 5 { 1.0 } else { 0.0 };
            assert!((v - e).abs() < 1e-10, "n={n} v={v}");
        }
    }

    #[test]
    fn analyze_constant() {
        let f = FunctionSpec::new("one", FunctionKind::Monomial(vec![1.0]));
        let a = analyze(&f, 3, &leg()).unwrap();
        let expect = [2f64.sqrt(), 0.0, 0.0, 0.0];
        for (v, e) in a.coeffs.values().iter().zip(expect) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn sign_has_vanishing_even_coefficients() {
        let f = FunctionSpec::new("sign", FunctionKind::Sign);
        let a = analyze(&f, 20, &leg()).unwrap();
        for (n, v) in a.coeffs.values().iter().enumerate() {
            if n % 2 == 0 {
                assert!(v.abs() < 1e-12, "n={n} v={v}");
            }
        }
        // f^_1 = int |t| sqrt(3/2) dt = sqrt(3/2)
        assert!((a.coeffs.values()[1] - 1.5f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn synthesize_values() {
        let e0 = CoefficientSequence::unit(leg(), 0, 0);
        assert!((synthesize(&e0, 0.77).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(synthesize(&e0, -1.5), Err(Error::Domain(-1.5)));
    }

    #[test]
    fn lp_norm_values() {
        let one = FunctionSpec::new("one", FunctionKind::Monomial(vec![1.0]));
        assert!((lp_norm(&one, 1.0, &leg()).unwrap().value - 2.0).abs() < 1e-14);
        let sign = FunctionSpec::new("sign", FunctionKind::Sign);
        let n3 = lp_norm(&sign, 3.0, &leg()).unwrap();
        assert!((n3.value - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(lp_norm(&one, 0.5, &leg()).is_err());
    }

    #[test]
    fn lp_norm_of_orthonormal_is_one() {
        for &(a, b) in &[(0.0, 0.0), (1.0, 0.0), (-0.5, -0.5), (0.3, 1.7)] {
            let q = JacobiParams::new(a, b).unwrap();
            for n in [0, 3, 17] {
                let f = FunctionSpec::orthonormal("pn", CoefficientSequence::unit(q, n, n));
                let v = lp_norm(&f, 2.0, &q).unwrap();
                assert!(v.converged);
                assert!((v.value - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn endpoint_singular_norm_uses_shifted_weight() {
        // int_{-1}^{1} (1-t)^{-1/2} dt = 2 sqrt(2)
        let f = FunctionSpec::new(
            "edge",
            FunctionKind::EndpointPower {
                upper: -0.25,
                lower: 0.0,
            },
        );
        let v = lp_norm(&f, 2.0, &leg()).unwrap();
        assert!((v.value - (2.0 * 2f64.sqrt()).sqrt()).abs() < 1e-13);
        assert!(matches!(
            lp_norm(&f, 4.0, &leg()),
            Err(Error::NotIntegrable { .. })
        ));
    }

    #[test]
    fn sup_norm_values() {
        let e0 = CoefficientSequence::unit(leg(), 0, 0);
        assert!((sup_norm(&e0) - 0.5f64.sqrt()).abs() < 1e-15);
        let e1 = CoefficientSequence::new(leg(), vec![0.0, 1.0]).unwrap();
        assert!((sup_norm(&e1) - 1.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn weighted_norm_values() {
        let e2 = [0.0, 0.0, 1.0, 0.0];
        assert!((weighted_coeff_norm(&e2, 2.0, |_| 1.0) - 1.0).abs() < 1e-15);
        let c = [1.0, 1.0, 0.0];
        assert!((weighted_coeff_norm(&c, 1.0, |n| n as f64 + 1.0) - 3.0).abs() < 1e-15);
        assert_eq!(weighted_coeff_norm(&[0.0; 3], 1.5, |_| 1.0), 0.0);
        // huge exponent stays finite
        let v = weighted_coeff_norm(&[1e10, 1e10], 400.0, |_| 1.0);
        assert!((v / 1e10 - 2f64.powf(1.0 / 400.0)).abs() < 1e-12);
    }

    #[test]
    fn smoothness_tags() {
        let f = FunctionSpec::new("m", FunctionKind::Monomial(vec![0.0, 0.0, 1.0]));
        assert_eq!(f.smoothness(), Smoothness::Polynomial { degree: 2 });
        let g = FunctionSpec::new("e", FunctionKind::EndpointPower { upper: 0.5, lower: -0.3 });
        assert_eq!(g.smoothness(), Smoothness::EndpointSingular { exponent: -0.3 });
        assert!((g.eval(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn norm_with_interior_zero() {
        // int |t|^p dt = 2/(p+1)
        let f = FunctionSpec::new("t", FunctionKind::Monomial(vec![0.0, 1.0]));
        for p in [1.0, 1.25, 3.0] {
            let n = lp_norm(&f, p, &leg()).unwrap();
            assert!(n.converged);
            assert!((n.value - (2.0 / (p + 1.0)).powf(1.0 / p)).abs() < 1e-9, "p={p}");
        }
    }

    #[test]
    fn sign_changes_are_located() {
        let z = sign_changes(|t| (t - 0.3) * (t + 0.71), 4);
        assert_eq!(z.len(), 2);
        assert!((z[0] + 0.71).abs() < 1e-15 && (z[1] - 0.3).abs() < 1e-15);
    }
}

