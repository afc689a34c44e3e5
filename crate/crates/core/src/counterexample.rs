//! The polynomials `g_N` with coefficients `omega(n) (n+1)^sigma`, whose sup
//! norms track the partial sums `S_N = sum_{n<=N} omega(n) (n+1)^(2 sigma)`.
//!
//! When `S_N` diverges while `M_omega` stays finite, `||g_N||_inf` is
//! unbounded, and by duality no `p = 1` Paley bound can hold.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequalities::{OmegaFamily, WeightSequence};
use crate::jacobi::{endpoint_value, JacobiParams};
use crate::quadrature::{cached_rule, integrate, integrate_adaptive, nodes_for_degree};
use crate::transform::{lp_norm, sup_norm, CoefficientSequence, FunctionSpec};

/// Relative excess of the grid maximum over the endpoint value that is tolerated.
pub const ENDPOINT_CONSISTENCY_TOL: f64 = 1e-8;

/// Endpoint of `[-1, 1]` where every `|P~_n|` peaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Upper,
    Lower,
}

impl Orientation {
    pub fn of(params: &JacobiParams) -> Self {
        if params.alpha() >= params.beta() {
            Self::Upper
        } else {
            Self::Lower
        }
    }

    pub fn endpoint(self) -> f64 {
        match self {
            Self::Upper => 1.0,
            Self::Lower => -1.0,
        }
    }
}

fn check_hypothesis(params: &JacobiParams) -> Result<()> {
    if params.alpha().max(params.beta()) >= -0.5 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "max(alpha, beta) = {} is below -1/2",
            params.alpha().max(params.beta())
        )))
    }
}

/// Coefficients `omega(n) (n+1)^sigma`, `n = 0..=degree`.
///
/// With `beta > alpha` the construction is mirrored through `t -> -t`, so the
/// coefficients pick up `(-1)^n` and the peak moves to `t = -1`.
pub fn build_gn(
    omega: &WeightSequence,
    params: &JacobiParams,
    degree: usize,
) -> Result<CoefficientSequence> {
    check_hypothesis(params)?;
    if !omega.covers(degree) {
        return Err(Error::Precondition(format!(
            "weight {} does not reach degree {degree}",
            omega.id()
        )));
    }
    let sigma = params.sigma().value();
    let flip = Orientation::of(params) == Orientation::Lower;
    let values = (0..=degree)
        .map(|n| {
            let c = omega.eval(n) * ((n + 1) as f64).powf(sigma);
            if flip && n % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    CoefficientSequence::new(*params, values)
}

/// Peak value of a `g_N`-type expansion: `sum |c_n| P~_n(1)` in the oriented parameters.
pub fn endpoint_sup(coeffs: &CoefficientSequence) -> f64 {
    let p = coeffs.params();
    let oriented = match Orientation::of(p) {
        Orientation::Upper => *p,
        Orientation::Lower => p.swapped(),
    };
    coeffs
        .values()
        .iter()
        .enumerate()
        .map(|(n, c)| c.abs() * endpoint_value(&oriented, n))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthModel {
    /// `a + b ln N`.
    Logarithmic,
    /// `c N^d`.
    Power,
}

/// Least-squares fits of the sup norms against `ln N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    /// Model with the smaller RMS relative residual.
    pub model: GrowthModel,
    /// Slope `b` of the logarithmic model.
    pub log_slope: f64,
    /// Exponent `d` of the power model.
    pub power_exponent: f64,
    pub log_residual: f64,
    pub power_residual: f64,
}

impl GrowthFit {
    pub fn exponent(&self) -> f64 {
        match self.model {
            GrowthModel::Logarithmic => self.log_slope,
            GrowthModel::Power => self.power_exponent,
        }
    }
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - slope * mx, slope)
}

fn rms_relative(model: impl Fn(f64) -> f64, x: &[f64], y: &[f64]) -> f64 {
    let s: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| ((model(xi) - yi) / yi).powi(2))
        .sum();
    (s / x.len() as f64).sqrt()
}

pub fn fit_growth(degrees: &[usize], values: &[f64]) -> GrowthFit {
    let lx: Vec<f64> = degrees.iter().map(|&n| (n as f64).ln()).collect();
    let (a, b) = linear_fit(&lx, values);
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (c, d) = linear_fit(&lx, &ly);
    let log_residual = rms_relative(|x| a + b * x, &lx, values);
    let power_residual = rms_relative(|x| (c + d * x).exp(), &lx, values);
    GrowthFit {
        model: if log_residual <= power_residual {
            GrowthModel::Logarithmic
        } else {
            GrowthModel::Power
        },
        log_slope: b,
        power_exponent: d,
        log_residual,
        power_residual,
    }
}

/// One ladder row of a divergence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub degree: usize,
    pub budget: f64,
    pub sup_norm: f64,
    pub grid_sup_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceTrace {
    pub rows: Vec<TraceRow>,
    pub growth: GrowthFit,
}

impl DivergenceTrace {
    pub fn degrees(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.degree).collect()
    }

    pub fn sup_norms(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.sup_norm).collect()
    }

    pub fn budgets(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.budget).collect()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    /// `(min, max)` of `sup_norm / budget` across the ladder.
    pub fn ratio_window(&self) -> (f64, f64) {
        self.rows.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r.ratio), hi.max(r.ratio))
        })
    }
}

/// Doubling ladder `2^lo, ..., 2^hi`.
pub fn power_ladder(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

/// `||g_N||_inf` at the peak endpoint and on the grid, against `S_N`, for each `N`.
pub fn divergence_trace(
    omega: &WeightSequence,
    params: &JacobiParams,
    degrees: &[usize],
) -> Result<DivergenceTrace> {
    check_hypothesis(params)?;
    if degrees.is_empty() || degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "trace degrees must be non-empty and strictly increasing".into(),
        ));
    }
    let two_sigma = 2.0 * params.sigma().value();
    if let OmegaFamily::Power { exponent } = omega.family() {
        if exponent + two_sigma < -1.0 {
            return Err(Error::Precondition(format!(
                "sum of omega(n)(n+1)^(2 sigma) converges for weight {}",
                omega.id()
            )));
        }
    }
    let top = *degrees.last().expect("non-empty");
    let full = build_gn(omega, params, top)?;
    let mut budget = 0.0;
    let mut next = 0;
    let mut rows = Vec::with_capacity(degrees.len());
    for &degree in degrees {
        while next <= degree {
            budget += omega.eval(next) * ((next + 1) as f64).powf(two_sigma);
            next += 1;
        }
        let g = full.truncated(degree);
        let sup = endpoint_sup(&g);
        let grid = sup_norm(&g);
        if grid > sup * (1.0 + ENDPOINT_CONSISTENCY_TOL) {
            return Err(Error::Inconsistency {
                n: degree,
                grid,
                endpoint: sup,
            });
        }
        rows.push(TraceRow {
            degree,
            budget,
            sup_norm: sup,
            grid_sup_norm: grid,
            ratio: sup / budget,
        });
    }
    let growth = fit_growth(degrees, &rows.iter().map(|r| r.sup_norm).collect::<Vec<_>>());
    Ok(DivergenceTrace { rows, growth })
}

/// An `L_1(w)`-normalized trial function for the duality bound.
#[derive(Debug, Clone)]
pub enum Trial {
    /// `1 / mass`.
    Constant,
    /// Normalized indicator of the window of the given width at the peak endpoint.
    Bump { width: f64 },
    /// Any corpus function, divided by its `L_1(w)` norm.
    Function(FunctionSpec),
}

/// `int g f w` for each trial; each value is a lower bound on `||g||_inf`.
pub fn duality_values(coeffs: &CoefficientSequence, trials: &[Trial]) -> Result<Vec<f64>> {
    let params = *coeffs.params();
    let ex = coeffs.expansion();
    let degree = coeffs.truncation();
    trials
        .iter()
        .map(|trial| match trial {
            Trial::Constant => {
                let rule = cached_rule(&params, nodes_for_degree(degree))?;
                Ok(integrate(&rule, |t| ex.eval(t)) / params.total_mass())
            }
            Trial::Bump { width } => bump_average(coeffs, *width),
            Trial::Function(f) => {
                let norm = lp_norm(f, 1.0, &params)?;
                if norm.value == 0.0 {
                    return Err(Error::Precondition(format!(
                        "trial function {} has zero L_1 norm",
                        f.id
                    )));
                }
                let est = integrate_adaptive(
                    &params,
                    nodes_for_degree(degree).next_power_of_two(),
                    |rule| vec![integrate(rule, |t| ex.eval(t) * f.eval(t))],
                )?;
                Ok(est.value[0] / norm.value)
            }
        })
        .collect()
}

/// Largest duality lower bound over the trials.
pub fn duality_check(coeffs: &CoefficientSequence, trials: &[Trial]) -> Result<f64> {
    Ok(duality_values(coeffs, trials)?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Weighted average of `g` over `[1 - width, 1]` (or the mirrored window).
///
/// The window is mapped onto `[-1, 1]` and integrated with the Gauss rule for
/// the endpoint exponent, so the singular factor of `w` is handled exactly;
/// the remaining factor of `w` is smooth on the window.
fn bump_average(coeffs: &CoefficientSequence, width: f64) -> Result<f64> {
    if !(width > 0.0 && width <= 1.0) {
        return Err(Error::Precondition(format!(
            "bump width {width} must lie in (0, 1]"
        )));
    }
    let params = *coeffs.params();
    let orient = Orientation::of(&params);
    let (near, far) = match orient {
        Orientation::Upper => (params.alpha(), params.beta()),
        Orientation::Lower => (params.beta(), params.alpha()),
    };
    let local = JacobiParams::new(near, 0.0)?;
    let ex = coeffs.expansion();
    let end = orient.endpoint();
    let est = integrate_adaptive(
        &local,
        nodes_for_degree(coeffs.truncation()).next_power_of_two(),
        |rule| {
            let (mut num, mut den) = (0.0, 0.0);
            for (u, w) in rule.iter() {
                // distance from the peak endpoint
                let d = 0.5 * width * (1.0 - u);
                let t = end - end.signum() * d;
                let smooth = if far == 0.0 { 1.0 } else { (2.0 - d).powf(far) };
                num += w * smooth * ex.eval(t);
                den += w * smooth;
            }
            vec![num / den]
        },
    )?;
    Ok(est.value[0])
}
