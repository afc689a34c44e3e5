//! Paley weight constant and the left/right sides of the Paley,
//! Hausdorff-Young and Hausdorff-Young-Paley inequalities.
//!
//! Every evaluator here works on a finite coefficient vector; the reports
//! always carry the truncation degree and the confidence of the integrals
//! behind them. The constants in front of the inequalities are unknown, so a
//! sweep only ever reports running maxima of `lhs / normalizer`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use crate::transform::{
    analyze, lp_norm, lp_norm_expansion, weighted_coeff_norm, CoefficientSequence,
    FunctionSpec,
};

/// Relative change of `M_omega` under doubling of the truncation that is still accepted.
pub const M_OMEGA_TRUNCATION_TOL: f64 = 1e-3;
/// Default truncation `N_omega` for power-law weights.
pub const DEFAULT_OMEGA_TRUNCATION: usize = 1 << 12;
/// Agreement required when re-analysing a synthesized partial sum.
pub const REANALYSIS_TOL: f64 = 1e-10;

/// Ladder distances below this fraction of `||Phi_N||` count as round-off.
pub const LADDER_NOISE_FLOOR: f64 = 1e-10;

const EXPONENT_SLACK: f64 = 1e-12;

/// Conjugate exponent `p / (p - 1)`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum OmegaFamily {
    /// `omega(n) = (n + 1)^exponent`.
    Power { exponent: f64 },
    Table { values: Vec<f64> },
}

/// A positive sequence `omega` on `0..=truncation`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSequence {
    id: String,
    family: OmegaFamily,
    truncation: usize,
}

impl WeightSequence {
    pub fn power(exponent: f64) -> Self {
        Self {
            id: format!("pow:{exponent}"),
            family: OmegaFamily::Power { exponent },
            truncation: DEFAULT_OMEGA_TRUNCATION,
        }
    }

    pub fn table(id: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if values.is_empty() {
            return Err(Error::Config(format!("weight table {id} is empty")));
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::NonPositiveWeight { id, index, value });
        }
        let truncation = values.len() - 1;
        Ok(Self {
            id,
            family: OmegaFamily::Table { values },
            truncation,
        })
    }

    /// Parses the inline form `pow:<exponent>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let exp = spec
            .strip_prefix("pow:")
            .ok_or_else(|| Error::Config(format!("unknown weight family in {spec:?}")))?;
        let exponent: f64 = exp
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad exponent in {spec:?}")))?;
        if !exponent.is_finite() {
            return Err(Error::Config(format!("bad exponent in {spec:?}")));
        }
        Ok(Self::power(exponent).with_id(spec))
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Power families take any truncation; tables are capped at their length.
    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = match &self.family {
            OmegaFamily::Power { .. } => truncation,
            OmegaFamily::Table { values } => truncation.min(values.len() - 1),
        };
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn family(&self) -> &OmegaFamily {
        &self.family
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Largest index at which the rule is defined.
    pub fn max_index(&self) -> Option<usize> {
        match &self.family {
            OmegaFamily::Power { .. } => None,
            OmegaFamily::Table { values } => Some(values.len() - 1),
        }
    }

    pub fn covers(&self, degree: usize) -> bool {
        self.max_index().is_none_or(|m| degree <= m)
    }

    /// `omega(n)`. Panics past the end of a table; check [`covers`](Self::covers) first.
    pub fn eval(&self, n: usize) -> f64 {
        match &self.family {
            OmegaFamily::Power { exponent } => ((n + 1) as f64).powf(*exponent),
            OmegaFamily::Table { values } => values[n],
        }
    }

    fn require_covers(&self, degree: usize) -> Result<()> {
        if self.covers(degree) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "weight {} is defined only up to index {}, coefficients reach {degree}",
                self.id,
                self.max_index().unwrap_or(0)
            )))
        }
    }
}

/// `M_omega = sup_t t * sum_{omega(n) >= t} (n + 1)^(2 sigma)` over the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaleyConstant {
    /// `+inf` when the sequence was judged divergent.
    pub value: f64,
    /// Level `t` at which the maximum is attained.
    pub attained_at: f64,
    /// Doubling the truncation moved the value by more than 0.1%.
    pub truncated: bool,
    pub diverged: bool,
    pub truncation: usize,
}

impl PaleyConstant {
    pub fn is_finite(&self) -> bool {
        !self.diverged && self.value.is_finite()
    }
}

/// Scan of the candidate levels `{omega(n)}` in decreasing order.
fn m_omega_scan(omega: &WeightSequence, two_sigma: f64, truncation: usize) -> (f64, f64) {
    let mut levels: Vec<(f64, f64)> = (0..=truncation)
        .map(|n| (omega.eval(n), ((n + 1) as f64).powf(two_sigma)))
        .collect();
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (mut best, mut at, mut sum) = (0.0, levels[0].0, 0.0);
    let mut i = 0;
    while i < levels.len() {
        let t = levels[i].0;
        while i < levels.len() && levels[i].0 == t {
            sum += levels[i].1;
            i += 1;
        }
        let cand = t * sum;
        if cand > best {
            best = cand;
            at = t;
        }
    }
    (best, at)
}

/// `M_omega` with truncation and divergence diagnostics.
///
/// Power families are re-evaluated at 2, 4 and 8 times the truncation. A
/// change above [`M_OMEGA_TRUNCATION_TOL`] sets `truncated`; if in addition
/// the relative increments fail to halve over the last two doublings, the
/// value is treated as divergent.
pub fn compute_m_omega(omega: &WeightSequence, params: &JacobiParams) -> PaleyConstant {
    let two_sigma = 2.0 * params.sigma().value();
    let n0 = omega.truncation();
    let (value, attained_at) = m_omega_scan(omega, two_sigma, n0);
    if omega.max_index().is_some() {
        return PaleyConstant {
            value,
            attained_at,
            truncated: false,
            diverged: false,
            truncation: n0,
        };
    }
    let ladder: Vec<f64> = (1..=3)
        .map(|k| m_omega_scan(omega, two_sigma, ((n0 + 1) << k) - 1).0)
        .collect();
    let rel = |a: f64, b: f64| (b - a) / a;
    let r0 = rel(value, ladder[0]);
    let truncated = r0 > M_OMEGA_TRUNCATION_TOL;
    let r2 = rel(ladder[1], ladder[2]);
    let diverged = truncated && r2 > M_OMEGA_TRUNCATION_TOL && r2 >= 0.5 * r0;
    PaleyConstant {
        value: if diverged { f64::INFINITY } else { value },
        attained_at,
        truncated,
        diverged,
        truncation: n0,
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, open_lo: bool) -> Result<()> {
    let lo_ok = if open_lo { value > lo } else { value >= lo - EXPONENT_SLACK };
    if lo_ok && value <= hi + EXPONENT_SLACK && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidExponent {
            name,
            value,
            range: format!("{}{lo}, {hi}]", if open_lo { "(" } else { "[" }),
        })
    }
}

fn check_p(p: f64) -> Result<()> {
    check_range("p", p, 1.0, 2.0, true)
}

fn check_q(q: f64) -> Result<()> {
    if q >= 2.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidExponent {
            name: "q",
            value: q,
            range: "[2, inf)".into(),
        })
    }
}

/// Per-index multiplier `(n+1)^(sigma_power * sigma) * omega(n)^omega_power`.
fn multiplier<'a>(
    params: &JacobiParams,
    sigma_power: f64,
    omega: Option<(&'a WeightSequence, f64)>,
) -> impl Fn(usize) -> f64 + 'a {
    let e = sigma_power * params.sigma().value();
    move |n| {
        let base = ((n + 1) as f64).powf(e);
        match omega {
            Some((w, power)) if power != 0.0 => base * w.eval(n).powf(power),
            _ => base,
        }
    }
}

/// `{ sum ((n+1)^{(1/p-1/p')sigma} omega(n)^{1/p-1/p'} |c_n|)^p }^{1/p}`, `1 < p <= 2`.
pub fn paley_lhs(coeffs: &CoefficientSequence, p: f64, omega: &WeightSequence) -> Result<f64> {
    check_p(p)?;
    omega.require_covers(coeffs.truncation())?;
    let e = 1.0 / p - 1.0 / conjugate(p);
    Ok(weighted_coeff_norm(
        coeffs.values(),
        p,
        multiplier(coeffs.params(), e, Some((omega, e))),
    ))
}

/// `{ sum ((n+1)^{(1/p'-1/p)sigma} |c_n|)^{p'} }^{1/p'}`, `1 < p <= 2`.
pub fn hausdorff_young_lhs(coeffs: &CoefficientSequence, p: f64) -> Result<f64> {
    check_p(p)?;
    let pc = conjugate(p);
    let e = 1.0 / pc - 1.0 / p;
    Ok(weighted_coeff_norm(
        coeffs.values(),
        pc,
        multiplier(coeffs.params(), e, None),
    ))
}

/// `{ sum ((n+1)^{(2/s-1)sigma} omega(n)^{1/s-1/p'} |c_n|)^s }^{1/s}`, `p <= s <= p'`.
pub fn hyp_lhs(
    coeffs: &CoefficientSequence,
    p: f64,
    s: f64,
    omega: &WeightSequence,
) -> Result<f64> {
    check_p(p)?;
    let pc = conjugate(p);
    check_range("s", s, p, pc, false)?;
    omega.require_covers(coeffs.truncation())?;
    Ok(weighted_coeff_norm(
        coeffs.values(),
        s,
        multiplier(
            coeffs.params(),
            2.0 / s - 1.0,
            Some((omega, 1.0 / s - 1.0 / pc)),
        ),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Theorem {
    #[serde(rename = "Paley-a")]
    PaleyA,
    #[serde(rename = "Paley-b")]
    PaleyB,
    #[serde(rename = "HY-a")]
    HyA,
    #[serde(rename = "HY-b")]
    HyB,
    #[serde(rename = "HYP-a")]
    HypA,
    #[serde(rename = "HYP-b")]
    HypB,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Self::PaleyA => "Paley-a",
            Self::PaleyB => "Paley-b",
            Self::HyA => "HY-a",
            Self::HyB => "HY-b",
            Self::HypA => "HYP-a",
            Self::HypB => "HYP-b",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceFlags {
    /// Every integral behind the record met its tolerance.
    pub integration_converged: bool,
    /// `M_omega` changed by more than 0.1% when its truncation doubled.
    pub m_omega_truncated: bool,
    /// Synthesis ladders only: successive `L_q` distances were non-increasing.
    pub ladder_decreasing: bool,
    /// Synthesis ladders only: re-analysis reproduced the coefficients.
    pub reanalysis_ok: bool,
    /// Signed coefficients were accepted in permissive mode.
    pub outside_theorem_scope: bool,
    /// Share of the coefficient-side sum carried by the top 10% of indices.
    pub tail_indicator: f64,
}

impl Default for ConfidenceFlags {
    fn default() -> Self {
        Self {
            integration_converged: true,
            m_omega_truncated: false,
            ladder_decreasing: true,
            reanalysis_ok: true,
            outside_theorem_scope: false,
            tail_indicator: 0.0,
        }
    }
}

impl ConfidenceFlags {
    pub fn all_ok(&self) -> bool {
        self.integration_converged
            && !self.m_omega_truncated
            && self.ladder_decreasing
            && self.reanalysis_ok
            && !self.outside_theorem_scope
    }
}

/// One verification record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub theorem: Theorem,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub s: Option<f64>,
    pub r: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub omega: Option<String>,
    pub corpus_id: String,
    pub lhs: f64,
    pub normalizer: f64,
    pub ratio: f64,
    pub truncation: usize,
    pub flags: ConfidenceFlags,
}

fn ratio(lhs: f64, normalizer: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / normalizer
    }
}

/// `(sum over the top 10% of indices / total)^(1/s)` of `(mult(n)|c_n|)^s`.
fn tail_indicator(coeffs: &[f64], s: f64, mult: impl Fn(usize) -> f64) -> f64 {
    let n = coeffs.len();
    let start = n - n.div_ceil(10);
    let total = weighted_coeff_norm(coeffs, s, &mult);
    if total == 0.0 {
        return 0.0;
    }
    let tail = weighted_coeff_norm(&coeffs[start..], s, |k| mult(k + start));
    tail / total
}

/// How signed coefficients are treated by the synthesis bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignPolicy {
    #[default]
    Strict,
    /// Accept signed coefficients and mark the report as outside theorem scope.
    Permissive,
}

/// Which synthesis inequality a ladder run checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SynthesisKind {
    Paley,
    HausdorffYoung,
    Hyp { r: f64 },
}

/// Coefficient-side normalizer of a synthesis bound, excluding the `M_omega` power.
struct SynthesisNormalizer {
    exponent: f64,
    sigma_power: f64,
    omega_power: f64,
    m_power: f64,
}

impl SynthesisNormalizer {
    fn new(kind: SynthesisKind, q: f64) -> Self {
        let qc = conjugate(q);
        match kind {
            SynthesisKind::Paley => Self {
                exponent: q,
                sigma_power: 1.0 / q - 1.0 / qc,
                omega_power: 1.0 / q - 1.0 / qc,
                m_power: 1.0 / qc - 1.0 / q,
            },
            SynthesisKind::HausdorffYoung => Self {
                exponent: qc,
                sigma_power: 1.0 / qc - 1.0 / q,
                omega_power: 0.0,
                m_power: 0.0,
            },
            SynthesisKind::Hyp { r } => Self {
                exponent: conjugate(r),
                sigma_power: 1.0 - 2.0 / r,
                omega_power: 1.0 / q - 1.0 / r,
                m_power: 1.0 / r - 1.0 / q,
            },
        }
    }
}

/// One rung of a synthesis ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderStep {
    pub degree: usize,
    pub norm: f64,
    /// `||Phi_N - Phi_{N_prev}||_{L_q}`.
    pub distance: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisCheck {
    pub report: InequalityReport,
    pub ladder: Vec<LadderStep>,
    pub reanalysis_error: f64,
}

/// Partial-sum degrees `N/8, N/4, N/2, N` (deduplicated, at least 1 unless `N = 0`).
pub fn ladder_degrees(degree: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..4).rev().map(|k| degree >> k).filter(|&d| d > 0).collect();
    out.dedup();
    if out.is_empty() {
        out.push(degree);
    }
    out
}

/// Runs the synthesis ladder for `phi` and records the bound's ratio at full truncation.
#[allow(clippy::too_many_arguments)]
pub fn synthesis_check(
    kind: SynthesisKind,
    phi: &CoefficientSequence,
    q: f64,
    omega: Option<&WeightSequence>,
    m_omega: Option<&PaleyConstant>,
    policy: SignPolicy,
    corpus_id: &str,
) -> Result<SynthesisCheck> {
    check_q(q)?;
    if let SynthesisKind::Hyp { r } = kind {
        check_range("r", r, conjugate(q), q, false)?;
    }
    let needs_omega = !matches!(kind, SynthesisKind::HausdorffYoung);
    let omega = if needs_omega {
        let w = omega.ok_or_else(|| Error::Precondition("weight sequence required".into()))?;
        w.require_covers(phi.truncation())?;
        Some(w)
    } else {
        None
    };
    let mut outside_scope = false;
    if let Some((index, &value)) = phi.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
        match policy {
            SignPolicy::Strict => return Err(Error::NegativeCoefficient { index, value }),
            SignPolicy::Permissive => outside_scope = true,
        }
    }
    let params = *phi.params();
    let spec = SynthesisNormalizer::new(kind, q);
    let mult = multiplier(&params, spec.sigma_power, omega.map(|w| (w, spec.omega_power)));
    let coeff_norm = weighted_coeff_norm(phi.values(), spec.exponent, &mult);
    let (m_factor, m_truncated) = if spec.m_power != 0.0 {
        let m = match m_omega {
            Some(m) => *m,
            None => compute_m_omega(omega.expect("omega present"), &params),
        };
        if !m.is_finite() {
            return Err(Error::Precondition(format!(
                "M_omega diverges for weight {}",
                omega.map(|w| w.id()).unwrap_or("")
            )));
        }
        (m.value.powf(spec.m_power), m.truncated)
    } else {
        (1.0, false)
    };
    let normalizer = m_factor * coeff_norm;

    let mut ladder = Vec::new();
    let mut prev: Option<usize> = None;
    for degree in ladder_degrees(phi.truncation()) {
        let part = phi.truncated(degree);
        let est = lp_norm_expansion(&part, q)?;
        let distance = match prev {
            Some(lo) => {
                let mut block = part.values().to_vec();
                block[..=lo].iter_mut().for_each(|v| *v = 0.0);
                let block = CoefficientSequence::new(params, block)?;
                let d = lp_norm_expansion(&block, q)?;
                Some((d.value, d.converged))
            }
            None => None,
        };
        ladder.push(LadderStep {
            degree,
            norm: est.value,
            distance: distance.map(|d| d.0),
            converged: est.converged && distance.is_none_or(|d| d.1),
        });
        prev = Some(degree);
    }
    let dists: Vec<f64> = ladder.iter().filter_map(|s| s.distance).collect();
    let scale = ladder.last().map(|s| s.norm).unwrap_or(0.0);
    let ladder_decreasing = dists
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-9) + LADDER_NOISE_FLOOR * scale);

    let reanalysis_error = {
        let f = FunctionSpec::orthonormal(corpus_id, phi.clone());
        let back = analyze(&f, phi.truncation(), &params)?;
        back.coeffs
            .values()
            .iter()
            .zip(phi.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    };
    let phi_scale = phi.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let top = ladder.last().expect("ladder is non-empty");
    let lhs = top.norm;
    let r_field = match kind {
        SynthesisKind::Hyp { r } => Some(r),
        _ => None,
    };
    let theorem = match kind {
        SynthesisKind::Paley => Theorem::PaleyB,
        SynthesisKind::HausdorffYoung => Theorem::HyB,
        SynthesisKind::Hyp { .. } => Theorem::HypB,
    };
    let report = InequalityReport {
        theorem,
        p: None,
        q: Some(q),
        s: None,
        r: r_field,
        alpha: params.alpha(),
        beta: params.beta(),
        omega: omega.map(|w| w.id().to_string()),
        corpus_id: corpus_id.to_string(),
        lhs,
        normalizer,
        ratio: ratio(lhs, normalizer),
        truncation: phi.truncation(),
        flags: ConfidenceFlags {
            integration_converged: ladder.iter().all(|s| s.converged),
            m_omega_truncated: m_truncated,
            ladder_decreasing,
            reanalysis_ok: reanalysis_error <= REANALYSIS_TOL * phi_scale,
            outside_theorem_scope: outside_scope,
            tail_indicator: tail_indicator(phi.values(), spec.exponent, &mult),
        },
    };
    Ok(SynthesisCheck {
        report,
        ladder,
        reanalysis_error,
    })
}

/// Paley synthesis bound: `||Phi_N||_q` against `M^{1/q'-1/q}` times the weighted `q`-sum.
pub fn paley_synthesis_bound(
    phi: &CoefficientSequence,
    q: f64,
    omega: &WeightSequence,
    policy: SignPolicy,
) -> Result<InequalityReport> {
    Ok(synthesis_check(SynthesisKind::Paley, phi, q, Some(omega), None, policy, "phi")?.report)
}

/// Hausdorff-Young synthesis bound: `||Phi_N||_q` against the weighted `q'`-sum.
pub fn hausdorff_young_synthesis_bound(
    phi: &CoefficientSequence,
    q: f64,
    policy: SignPolicy,
) -> Result<InequalityReport> {
    Ok(synthesis_check(SynthesisKind::HausdorffYoung, phi, q, None, None, policy, "phi")?.report)
}

/// Interpolated synthesis bound with `q' <= r <= q`.
pub fn hyp_synthesis_bound(
    phi: &CoefficientSequence,
    q: f64,
    r: f64,
    omega: &WeightSequence,
    policy: SignPolicy,
) -> Result<InequalityReport> {
    Ok(synthesis_check(
        SynthesisKind::Hyp { r },
        phi,
        q,
        Some(omega),
        None,
        policy,
        "phi",
    )?
    .report)
}

/// Which families a sweep covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremSet {
    pub paley: bool,
    pub hausdorff_young: bool,
    pub hyp: bool,
    /// Also run the synthesis (b) parts.
    pub synthesis: bool,
}

impl TheoremSet {
    pub fn all() -> Self {
        Self {
            paley: true,
            hausdorff_young: true,
            hyp: true,
            synthesis: true,
        }
    }
}

/// Default exponent grid for the analysis parts.
pub const DEFAULT_P_GRID: [f64; 4] = [1.25, 1.5, 1.75, 2.0];
/// Points of the default `s` (or `r`) grid.
pub const DEFAULT_INTERPOLATION_POINTS: usize = 5;

/// `count` evenly spaced points of `[lo, hi]` (a single point when they coincide).
pub fn even_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 || (hi - lo).abs() < EXPONENT_SLACK {
        return vec![lo];
    }
    (0..count)
        .map(|k| {
            if k == count - 1 {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (count - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub theorems: TheoremSet,
    /// Exponents `p` of the analysis parts.
    pub p_grid: Vec<f64>,
    /// Exponents `q` of the synthesis parts; defaults to the conjugates of `p_grid`.
    pub q_grid: Option<Vec<f64>>,
    /// Explicit `s` values; otherwise an even grid of `[p, p']`.
    pub s_grid: Option<Vec<f64>>,
    /// Explicit `r` values; otherwise an even grid of `[q', q]`.
    pub r_grid: Option<Vec<f64>>,
    pub interpolation_points: usize,
    /// Truncation degree `N` of every expansion.
    pub degree: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            theorems: TheoremSet::all(),
            p_grid: DEFAULT_P_GRID.to_vec(),
            q_grid: None,
            s_grid: None,
            r_grid: None,
            interpolation_points: DEFAULT_INTERPOLATION_POINTS,
            degree: 200,
        }
    }
}

/// Running maximum of one (theorem, exponents, weight) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub theorem: Theorem,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub s: Option<f64>,
    pub r: Option<f64>,
    pub omega: Option<String>,
    pub max_ratio: f64,
    pub argmax: String,
    pub count: usize,
    pub all_confident: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub reports: Vec<InequalityReport>,
    pub summary: Vec<SummaryRow>,
}

impl Sweep {
    pub fn all_confident(&self) -> bool {
        self.reports.iter().all(|r| r.flags.all_ok())
    }
}

fn cmp_opt(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
    }
}

fn cell_order(a: &InequalityReport, b: &InequalityReport) -> Ordering {
    a.theorem
        .cmp(&b.theorem)
        .then(cmp_opt(a.p, b.p))
        .then(cmp_opt(a.q, b.q))
        .then(cmp_opt(a.s, b.s))
        .then(cmp_opt(a.r, b.r))
        .then(a.omega.cmp(&b.omega))
}

/// Deterministic report order: (theorem, exponents, weight, corpus id).
pub fn sort_reports(reports: &mut [InequalityReport]) {
    reports.sort_by(|a, b| cell_order(a, b).then(a.corpus_id.cmp(&b.corpus_id)));
}

/// Running maxima per cell, in report order. Reports must already be sorted.
pub fn summarize(reports: &[InequalityReport]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = Vec::new();
    for rep in reports {
        let same = rows.last().is_some_and(|row| {
            row.theorem == rep.theorem
                && cmp_opt(row.p, rep.p).is_eq()
                && cmp_opt(row.q, rep.q).is_eq()
                && cmp_opt(row.s, rep.s).is_eq()
                && cmp_opt(row.r, rep.r).is_eq()
                && row.omega == rep.omega
        });
        if same {
            let row = rows.last_mut().expect("checked");
            if rep.ratio > row.max_ratio {
                row.max_ratio = rep.ratio;
                row.argmax = rep.corpus_id.clone();
            }
            row.count += 1;
            row.all_confident &= rep.flags.all_ok();
        } else {
            rows.push(SummaryRow {
                theorem: rep.theorem,
                p: rep.p,
                q: rep.q,
                s: rep.s,
                r: rep.r,
                omega: rep.omega.clone(),
                max_ratio: rep.ratio,
                argmax: rep.corpus_id.clone(),
                count: 1,
                all_confident: rep.flags.all_ok(),
            });
        }
    }
    rows
}

struct ItemContext<'a> {
    f: &'a FunctionSpec,
    coeffs: CoefficientSequence,
    analysis_converged: bool,
    norms: BTreeMap<u64, (f64, bool)>,
}

fn analysis_reports(
    ctx: &ItemContext<'_>,
    config: &SweepConfig,
    omegas: &[(WeightSequence, PaleyConstant)],
    params: &JacobiParams,
) -> Result<Vec<InequalityReport>> {
    let mut out = Vec::new();
    let c = &ctx.coeffs;
    let base = |theorem, p: f64, s: Option<f64>, omega: Option<&WeightSequence>| InequalityReport {
        theorem,
        p: Some(p),
        q: None,
        s,
        r: None,
        alpha: params.alpha(),
        beta: params.beta(),
        omega: omega.map(|w| w.id().to_string()),
        corpus_id: ctx.f.id.clone(),
        lhs: 0.0,
        normalizer: 0.0,
        ratio: 0.0,
        truncation: c.truncation(),
        flags: ConfidenceFlags::default(),
    };
    for &p in &config.p_grid {
        check_p(p)?;
        let Some(&(norm, norm_ok)) = ctx.norms.get(&p.to_bits()) else {
            continue;
        };
        let converged = norm_ok && ctx.analysis_converged;
        let pc = conjugate(p);
        let sigma = params.sigma().value();
        if config.theorems.hausdorff_young {
            let lhs = hausdorff_young_lhs(c, p)?;
            let e = 1.0 / pc - 1.0 / p;
            let mut rep = base(Theorem::HyA, p, None, None);
            rep.lhs = lhs;
            rep.normalizer = norm;
            rep.ratio = ratio(lhs, norm);
            rep.flags.integration_converged = converged;
            rep.flags.tail_indicator =
                tail_indicator(c.values(), pc, |n| ((n + 1) as f64).powf(e * sigma));
            out.push(rep);
        }
        for (w, m) in omegas {
            if config.theorems.paley {
                let e = 1.0 / p - 1.0 / pc;
                let lhs = paley_lhs(c, p, w)?;
                let normalizer = m.value.powf(e) * norm;
                let mut rep = base(Theorem::PaleyA, p, None, Some(w));
                rep.lhs = lhs;
                rep.normalizer = normalizer;
                rep.ratio = ratio(lhs, normalizer);
                rep.flags.integration_converged = converged;
                rep.flags.m_omega_truncated = m.truncated;
                rep.flags.tail_indicator = tail_indicator(c.values(), p, |n| {
                    ((n + 1) as f64).powf(e * sigma) * w.eval(n).powf(e)
                });
                out.push(rep);
            }
            if config.theorems.hyp {
                let s_values = match &config.s_grid {
                    Some(g) => g
                        .iter()
                        .copied()
                        .filter(|&s| s >= p - EXPONENT_SLACK && s <= pc + EXPONENT_SLACK)
                        .collect(),
                    None => even_grid(p, pc, config.interpolation_points),
                };
                for s in s_values {
                    let lhs = hyp_lhs(c, p, s, w)?;
                    let ew = 1.0 / s - 1.0 / pc;
                    let normalizer = m.value.powf(ew) * norm;
                    let mut rep = base(Theorem::HypA, p, Some(s), Some(w));
                    rep.lhs = lhs;
                    rep.normalizer = normalizer;
                    rep.ratio = ratio(lhs, normalizer);
                    rep.flags.integration_converged = converged;
                    rep.flags.m_omega_truncated = m.truncated;
                    rep.flags.tail_indicator = tail_indicator(c.values(), s, |n| {
                        ((n + 1) as f64).powf((2.0 / s - 1.0) * sigma) * w.eval(n).powf(ew)
                    });
                    out.push(rep);
                }
            }
        }
    }
    Ok(out)
}

fn synthesis_reports(
    ctx: &ItemContext<'_>,
    config: &SweepConfig,
    omegas: &[(WeightSequence, PaleyConstant)],
) -> Result<Vec<InequalityReport>> {
    let q_grid: Vec<f64> = match &config.q_grid {
        Some(g) => g.clone(),
        None => config.p_grid.iter().map(|&p| conjugate(p)).collect(),
    };
    let phi = CoefficientSequence::new(
        *ctx.coeffs.params(),
        ctx.coeffs.values().iter().map(|v| v.abs()).collect(),
    )?;
    let id = ctx.f.id.as_str();
    let mut out = Vec::new();
    let mut push = |mut rep: InequalityReport| {
        rep.flags.integration_converged &= ctx.analysis_converged;
        out.push(rep);
    };
    for q in q_grid {
        check_q(q)?;
        if config.theorems.hausdorff_young {
            let chk = synthesis_check(
                SynthesisKind::HausdorffYoung,
                &phi,
                q,
                None,
                None,
                SignPolicy::Strict,
                id,
            )?;
            push(chk.report);
        }
        for (w, m) in omegas {
            if config.theorems.paley {
                let chk = synthesis_check(
                    SynthesisKind::Paley,
                    &phi,
                    q,
                    Some(w),
                    Some(m),
                    SignPolicy::Strict,
                    id,
                )?;
                push(chk.report);
            }
            if config.theorems.hyp {
                let qc = conjugate(q);
                let r_values = match &config.r_grid {
                    Some(g) => g
                        .iter()
                        .copied()
                        .filter(|&r| r >= qc - EXPONENT_SLACK && r <= q + EXPONENT_SLACK)
                        .collect(),
                    None => even_grid(qc, q, config.interpolation_points),
                };
                for r in r_values {
                    let chk = synthesis_check(
                        SynthesisKind::Hyp { r },
                        &phi,
                        q,
                        Some(w),
                        Some(m),
                        SignPolicy::Strict,
                        id,
                    )?;
                    push(chk.report);
                }
            }
        }
    }
    Ok(out)
}

/// Runs every (function, exponent, weight) combination of the configured
/// families and returns sorted reports plus per-cell running maxima.
///
/// Analysis parts use the coefficients of each corpus function; synthesis
/// parts use their absolute values as the non-negative sequence `phi`.
/// Exponents outside a function's declared `valid_p` range are skipped.
pub fn verify_sweep(
    corpus: &[FunctionSpec],
    config: &SweepConfig,
    omegas: &[WeightSequence],
    params: &JacobiParams,
) -> Result<Sweep> {
    let needs_omega = config.theorems.paley || config.theorems.hyp;
    let omegas: Vec<(WeightSequence, PaleyConstant)> = if needs_omega {
        omegas
            .iter()
            .map(|w| {
                w.require_covers(config.degree)?;
                let m = compute_m_omega(w, params);
                if m.is_finite() {
                    Ok((w.clone(), m))
                } else {
                    Err(Error::Precondition(format!(
                        "M_omega diverges for weight {}",
                        w.id()
                    )))
                }
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let per_item: Vec<Result<Vec<InequalityReport>>> = corpus
        .par_iter()
        .map(|f| {
            let analysis = analyze(f, config.degree, params)?;
            let mut norms = BTreeMap::new();
            for &p in &config.p_grid {
                if f.supports_p(p) {
                    let est = lp_norm(f, p, params)?;
                    norms.insert(p.to_bits(), (est.value, est.converged));
                }
            }
            let ctx = ItemContext {
                f,
                coeffs: analysis.coeffs,
                analysis_converged: analysis.converged,
                norms,
            };
            let mut reps = analysis_reports(&ctx, config, &omegas, params)?;
            if config.theorems.synthesis {
                reps.extend(synthesis_reports(&ctx, config, &omegas)?);
            }
            Ok(reps)
        })
        .collect();
    let mut reports = Vec::new();
    for r in per_item {
        reports.extend(r?);
    }
    sort_reports(&mut reports);
    let summary = summarize(&reports);
    Ok(Sweep { reports, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leg() -> JacobiParams {
        JacobiParams::legendre()
    }

    /// Brute-force sup: every candidate level, sum recomputed from scratch.
    fn brute_m(omega: &[f64], two_sigma: f64) -> f64 {
        omega
            .iter()
            .map(|&t| {
                let s: f64 = omega
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w >= t)
                    .map(|(n, _)| ((n + 1) as f64).powf(two_sigma))
                    .sum();
                t * s
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate(2.0), 2.0);
        assert_eq!(conjugate(1.5), 3.0);
        assert_eq!(conjugate(1.0), f64::INFINITY);
        assert_eq!(conjugate(f64::INFINITY), 1.0);
    }

    #[test]
    fn m_omega_analytic_cases() {
        let m = compute_m_omega(&WeightSequence::power(-2.0), &leg());
        assert_eq!(m.value, 1.0);
        assert_eq!(m.attained_at, 1.0);
        assert!(!m.truncated && !m.diverged);

        let cheb = JacobiParams::new(-0.5, -0.5).unwrap();
        let m = compute_m_omega(&WeightSequence::power(-1.0), &cheb);
        assert!((m.value - 1.0).abs() < 1e-15);
        assert!(!m.diverged);
    }

    #[test]
    fn m_omega_constant_weight_diverges() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (1.0, 2.0)] {
            let m = compute_m_omega(&WeightSequence::power(0.0), &JacobiParams::new(a, b).unwrap());
            assert!(m.diverged && m.value.is_infinite());
        }
    }

    #[test]
    fn m_omega_table_matches_brute_force() {
        let vals = vec![0.3, 2.0, 0.3, 0.7, 1.1, 0.05, 2.0];
        let w = WeightSequence::table("t", vals.clone()).unwrap();
        let m = compute_m_omega(&w, &leg());
        assert!((m.value - brute_m(&vals, 1.0)).abs() < 1e-14);
        assert!(!m.truncated);
    }

    #[test]
    fn table_validation() {
        assert!(matches!(
            WeightSequence::table("bad", vec![1.0, 0.0]),
            Err(Error::NonPositiveWeight { index: 1, .. })
        ));
        assert!(WeightSequence::table("empty", vec![]).is_err());
        assert!(WeightSequence::parse("pow:-2").is_ok());
        assert!(WeightSequence::parse("exp:1").is_err());
        assert!(WeightSequence::parse("pow:abc").is_err());
    }

    #[test]
    fn paley_lhs_examples() {
        let w = WeightSequence::power(-2.0);
        let c = CoefficientSequence::new(leg(), vec![3.0, -4.0]).unwrap();
        assert!((paley_lhs(&c, 2.0, &w).unwrap() - 5.0).abs() < 1e-14);
        let e0 = CoefficientSequence::unit(leg(), 0, 4);
        for p in [1.1, 1.5, 2.0] {
            assert!((paley_lhs(&e0, p, &w).unwrap() - 1.0).abs() < 1e-15);
        }
        // p = 1.5: 1/p - 1/p' = 1/3, multiplier 4^{1/6} (1/16)^{1/3}
        let e3 = CoefficientSequence::unit(leg(), 3, 3);
        let expect = 4f64.powf(1.0 / 6.0) / 16f64.powf(1.0 / 3.0);
        assert!((paley_lhs(&e3, 1.5, &w).unwrap() - expect).abs() < 1e-15);
        assert!(paley_lhs(&e3, 1.0, &w).is_err());
        assert!(paley_lhs(&e3, 2.5, &w).is_err());
    }

    #[test]
    fn hy_lhs_examples() {
        let e0 = CoefficientSequence::unit(leg(), 0, 2);
        assert!((hausdorff_young_lhs(&e0, 1.3).unwrap() - 1.0).abs() < 1e-15);
        let e3 = CoefficientSequence::unit(leg(), 3, 3);
        let v = hausdorff_young_lhs(&e3, 1.5).unwrap();
        assert!((v - 4f64.powf(-1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn hyp_lhs_examples() {
        let w = WeightSequence::power(-2.0);
        let e1 = CoefficientSequence::unit(leg(), 1, 1);
        let v = hyp_lhs(&e1, 1.5, 2.0, &w).unwrap();
        assert!((v - 4f64.powf(-1.0 / 6.0)).abs() < 1e-15);
        assert!(matches!(
            hyp_lhs(&e1, 1.5, 3.5, &w),
            Err(Error::InvalidExponent { name: "s", .. })
        ));
        assert!(hyp_lhs(&e1, 1.5, 1.4, &w).is_err());
    }

    #[test]
    fn lhs_rejects_short_table() {
        let w = WeightSequence::table("short", vec![1.0, 0.5]).unwrap();
        let c = CoefficientSequence::unit(leg(), 0, 5);
        assert!(matches!(paley_lhs(&c, 1.5, &w), Err(Error::Precondition(_))));
    }

    #[test]
    fn synthesis_unit_vector() {
        let e0 = CoefficientSequence::unit(leg(), 0, 0);
        let w = WeightSequence::power(-2.0);
        let rep = paley_synthesis_bound(&e0, 2.0, &w, SignPolicy::Strict).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-12);
        assert!((rep.ratio - 1.0).abs() < 1e-12);
        let rep = hyp_synthesis_bound(&e0, 2.0, 2.0, &w, SignPolicy::Strict).unwrap();
        assert!((rep.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn synthesis_geometric_parseval() {
        let n = 40;
        let phi: Vec<f64> = (0..=n).map(|k| 0.5f64.powi(k)).collect();
        let phi = CoefficientSequence::new(leg(), phi).unwrap();
        let w = WeightSequence::power(-2.0);
        let chk = synthesis_check(
            SynthesisKind::Paley,
            &phi,
            2.0,
            Some(&w),
            None,
            SignPolicy::Strict,
            "geo",
        )
        .unwrap();
        assert!((chk.report.lhs - (4.0f64 / 3.0).sqrt()).abs() < 1e-10);
        assert!(chk.report.flags.ladder_decreasing);
        assert!(chk.report.flags.reanalysis_ok);
        assert_eq!(chk.ladder.len(), 4);
    }

    #[test]
    fn synthesis_sign_policy() {
        let phi = CoefficientSequence::new(leg(), vec![1.0, -0.5]).unwrap();
        let w = WeightSequence::power(-2.0);
        assert!(matches!(
            paley_synthesis_bound(&phi, 2.0, &w, SignPolicy::Strict),
            Err(Error::NegativeCoefficient { index: 1, .. })
        ));
        let rep = paley_synthesis_bound(&phi, 2.0, &w, SignPolicy::Permissive).unwrap();
        assert!(rep.flags.outside_theorem_scope);
        assert!(!rep.flags.all_ok());
    }

    #[test]
    fn synthesis_exponent_checks() {
        let phi = CoefficientSequence::unit(leg(), 0, 1);
        let w = WeightSequence::power(-2.0);
        assert!(hausdorff_young_synthesis_bound(&phi, 1.5, SignPolicy::Strict).is_err());
        assert!(hyp_synthesis_bound(&phi, 4.0, 1.2, &w, SignPolicy::Strict).is_err());
        assert!(hyp_synthesis_bound(&phi, 4.0, 4.0 / 3.0, &w, SignPolicy::Strict).is_ok());
    }

    #[test]
    fn ladder_degree_sets() {
        assert_eq!(ladder_degrees(128), vec![16, 32, 64, 128]);
        assert_eq!(ladder_degrees(200), vec![25, 50, 100, 200]);
        assert_eq!(ladder_degrees(3), vec![1, 3]);
        assert_eq!(ladder_degrees(0), vec![0]);
    }

    #[test]
    fn grid_endpoints() {
        let g = even_grid(1.5, 3.0, 5);
        assert_eq!(g, vec![1.5, 1.875, 2.25, 2.625, 3.0]);
        assert_eq!(even_grid(2.0, 2.0, 5), vec![2.0]);
    }

    #[test]
    fn sweep_single_constant_function() {
        let e0 = CoefficientSequence::unit(leg(), 0, 0);
        let corpus = vec![FunctionSpec::orthonormal("p0", e0)];
        let config = SweepConfig {
            p_grid: vec![2.0],
            degree: 4,
            ..SweepConfig::default()
        };
        let sweep = verify_sweep(&corpus, &config, &[WeightSequence::power(-2.0)], &leg()).unwrap();
        assert!(!sweep.reports.is_empty());
        for rep in &sweep.reports {
            assert!((rep.ratio - 1.0).abs() < 1e-10, "{rep:?}");
        }
        let mut sorted = sweep.reports.clone();
        sort_reports(&mut sorted);
        assert_eq!(sorted, sweep.reports);
    }

    #[test]
    fn sweep_rejects_divergent_weight() {
        let corpus = vec![FunctionSpec::orthonormal("p0", CoefficientSequence::unit(leg(), 0, 0))];
        let err = verify_sweep(&corpus, &SweepConfig::default(), &[WeightSequence::power(0.0)], &leg());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }
}
