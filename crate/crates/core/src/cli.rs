//! Command-line front end.
//!
//! Every command writes one record per row, as JSON lines or CSV, to `--out`
//! or stdout. Exit status is 0 on success, 2 for bad configuration and 3
//! when a numerical confidence check fails; in the last case the report is
//! still written in full.
//!
//! The `verify --summary` CSV has the fixed header
//! `theorem,p,q,s,r,omega,max_ratio,argmax,count,all_confident`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counterexample::{build_gn, divergence_trace, duality_check, Trial};
use crate::corpus::{parse_weight, Corpus};
use crate::error::Error;
use crate::inequalities::{
    compute_m_omega, verify_sweep, InequalityReport, SweepConfig, TheoremSet, WeightSequence,
    DEFAULT_OMEGA_TRUNCATION, DEFAULT_P_GRID,
};
use crate::jacobi::{eval_jacobi, eval_orthonormal, JacobiParams};
use crate::quadrature::gauss_jacobi_rule;
use crate::transform::{analyze, lp_norm};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONFIDENCE: i32 = 3;

/// Header of the summary CSV written by `verify --summary`.
pub const SUMMARY_HEADER: &str = "theorem,p,q,s,r,omega,max_ratio,argmax,count,all_confident";

#[derive(Debug, Parser)]
#[command(name = "jacobi-paley", version, about = "Jacobi expansions and Paley-type inequality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Jsonl, global = true)]
    pub format: Format,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremChoice {
    Paley,
    Hy,
    Hyp,
    All,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<JacobiParams, Failure> {
        JacobiParams::new(self.alpha, self.beta).map_err(Failure::from)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Values of P_n and its orthonormal version.
    Eval {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        t: Vec<f64>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Gauss-Jacobi nodes and weights.
    Quad {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Coefficients of corpus functions.
    Transform {
        #[arg(long, default_value = "full")]
        corpus: String,
        /// Restrict to these corpus ids.
        #[arg(long, value_delimiter = ',')]
        function: Vec<String>,
        #[arg(long, default_value_t = 32)]
        max_degree: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Paley weight constant of one or more weights.
    Mseq {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        omega: Vec<String>,
        /// Truncation for power families.
        #[arg(long, default_value_t = DEFAULT_OMEGA_TRUNCATION)]
        truncation: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Ratio sweep of the inequalities over a corpus.
    Verify {
        #[arg(long, value_enum, default_value_t = TheoremChoice::All)]
        theorem: TheoremChoice,
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        q: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        r: Vec<f64>,
        /// Weights as `pow:<e>` or table files; defaults to `pow:-2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        omega: Vec<String>,
        #[arg(long, default_value = "full")]
        corpus: String,
        #[arg(long, default_value_t = 200)]
        max_degree: usize,
        /// Skip the synthesis parts.
        #[arg(long)]
        analysis_only: bool,
        /// Extra exponents p drawn uniformly from (1, 2], seeded by `--seed`.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the per-cell summary CSV here.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Growth trace of the polynomials g_N.
    Counterexample {
        #[arg(long, default_value = "pow:-2", allow_hyphen_values = true)]
        omega: String,
        /// `lo..hi` for powers of two, or a comma list.
        #[arg(long, default_value = "16..4096")]
        ladder: String,
        /// Add the duality lower bound from a bump of this width.
        #[arg(long)]
        bump_width: Option<f64>,
        #[command(flatten)]
        params: ParamArgs,
    },
}

/// Why a run stopped short of status 0.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
    Io(io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numerical(_) => EXIT_CONFIDENCE,
            Self::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Numerical(m) => write!(f, "numerical confidence failure: {m}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EigenNoConvergence { .. } | Error::Inconsistency { .. } => {
                Self::Numerical(e.to_string())
            }
            Error::Config(m) => Self::Config(m),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::Io(io::Error::other(e))
    }
}

/// Parses `lo..hi` (powers of two from `lo` to `hi`) or `a,b,c`.
pub fn parse_ladder(spec: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Config(format!("bad ladder {spec:?}"));
    let out: Vec<usize> = if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        std::iter::successors(Some(lo), |&n| n.checked_mul(2))
            .take_while(|&n| n <= hi)
            .collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if out.is_empty() || out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad());
    }
    Ok(out)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: Serialize>(rows: &[T], format: Format, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut w = sink(out)?;
    match format {
        Format::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut w, row).map_err(io::Error::other)?;
                w.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            for row in rows {
                c.serialize(row)?;
            }
            c.flush()?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct EvalRow {
    n: usize,
    t: f64,
    alpha: f64,
    beta: f64,
    value: f64,
    orthonormal: f64,
}

#[derive(Serialize)]
struct QuadRow {
    index: usize,
    node: f64,
    weight: f64,
}

#[derive(Serialize)]
struct TransformRow<'a> {
    corpus_id: &'a str,
    n: usize,
    coefficient: f64,
    converged: bool,
}

#[derive(Serialize)]
struct MseqRow<'a> {
    omega: &'a str,
    alpha: f64,
    beta: f64,
    sigma: f64,
    m_omega: f64,
    attained_at: f64,
    truncation: usize,
    truncated: bool,
    diverged: bool,
}

#[derive(Serialize)]
struct TraceOut<'a> {
    omega: &'a str,
    alpha: f64,
    beta: f64,
    n: usize,
    budget: f64,
    sup_norm: f64,
    grid_sup_norm: f64,
    ratio: f64,
    growth_model: &'static str,
    growth_exponent: f64,
    bump_lower_bound: Option<f64>,
}

/// `InequalityReport` with the flags inlined, for CSV.
#[derive(Serialize)]
struct FlatReport<'a> {
    theorem: &'static str,
    p: Option<f64>,
    q: Option<f64>,
    s: Option<f64>,
    r: Option<f64>,
    alpha: f64,
    beta: f64,
    omega: Option<&'a str>,
    corpus_id: &'a str,
    lhs: f64,
    normalizer: f64,
    ratio: f64,
    truncation: usize,
    integration_converged: bool,
    m_omega_truncated: bool,
    ladder_decreasing: bool,
    reanalysis_ok: bool,
    outside_theorem_scope: bool,
    tail_indicator: f64,
}

impl<'a> From<&'a InequalityReport> for FlatReport<'a> {
    fn from(r: &'a InequalityReport) -> Self {
        Self {
            theorem: r.theorem.label(),
            p: r.p,
            q: r.q,
            s: r.s,
            r: r.r,
            alpha: r.alpha,
            beta: r.beta,
            omega: r.omega.as_deref(),
            corpus_id: &r.corpus_id,
            lhs: r.lhs,
            normalizer: r.normalizer,
            ratio: r.ratio,
            truncation: r.truncation,
            integration_converged: r.flags.integration_converged,
            m_omega_truncated: r.flags.m_omega_truncated,
            ladder_decreasing: r.flags.ladder_decreasing,
            reanalysis_ok: r.flags.reanalysis_ok,
            outside_theorem_scope: r.flags.outside_theorem_scope,
            tail_indicator: r.flags.tail_indicator,
        }
    }
}

fn check_unit_interval(t: f64) -> Result<(), Failure> {
    if (-1.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Failure::Config(format!("t = {t} lies outside [-1, 1]")))
    }
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Result<(), Failure> {
    let (format, out) = (cli.format, &cli.out);
    match &cli.command {
        Command::Eval { n, t, params } => {
            let q = params.params()?;
            let mut rows = Vec::with_capacity(n.len() * t.len());
            for &ni in n {
                for &ti in t {
                    check_unit_interval(ti)?;
                    rows.push(EvalRow {
                        n: ni,
                        t: ti,
                        alpha: q.alpha(),
                        beta: q.beta(),
                        value: eval_jacobi(&q, ni, ti)?,
                        orthonormal: eval_orthonormal(&q, ni, ti)?,
                    });
                }
            }
            emit(&rows, format, out)
        }
        Command::Quad { m, params } => {
            let rule = gauss_jacobi_rule(&params.params()?, *m)?;
            let rows: Vec<QuadRow> = rule
                .iter()
                .enumerate()
                .map(|(index, (node, weight))| QuadRow {
                    index,
                    node,
                    weight,
                })
                .collect();
            emit(&rows, format, out)
        }
        Command::Transform {
            corpus,
            function,
            max_degree,
            params,
        } => run_transform(corpus, function, *max_degree, &params.params()?, format, out),
        Command::Mseq {
            omega,
            truncation,
            params,
        } => {
            let q = params.params()?;
            let weights = omega
                .iter()
                .map(|s| parse_weight(s).map(|w| w.with_truncation(*truncation)))
                .collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<MseqRow> = weights
                .iter()
                .map(|w| {
                    let m = compute_m_omega(w, &q);
                    MseqRow {
                        omega: w.id(),
                        alpha: q.alpha(),
                        beta: q.beta(),
                        sigma: q.sigma().value(),
                        m_omega: m.value,
                        attained_at: m.attained_at,
                        truncation: m.truncation,
                        truncated: m.truncated,
                        diverged: m.diverged,
                    }
                })
                .collect();
            emit(&rows, format, out)?;
            if rows.iter().any(|r| r.truncated && !r.diverged) {
                return Err(Failure::Numerical(
                    "M_omega did not settle under doubling of the truncation".into(),
                ));
            }
            Ok(())
        }
        Command::Verify {
            theorem,
            p,
            q,
            s,
            r,
            omega,
            corpus,
            max_degree,
            analysis_only,
            samples,
            seed,
            summary,
            params,
        } => {
            let mut corpus = Corpus::load(corpus)?;
            let theorems = match theorem {
                TheoremChoice::Paley => TheoremSet {
                    paley: true,
                    hausdorff_young: false,
                    hyp: false,
                    synthesis: !analysis_only,
                },
                TheoremChoice::Hy => TheoremSet {
                    paley: false,
                    hausdorff_young: true,
                    hyp: false,
                    synthesis: !analysis_only,
                },
                TheoremChoice::Hyp => TheoremSet {
                    paley: false,
                    hausdorff_young: false,
                    hyp: true,
                    synthesis: !analysis_only,
                },
                TheoremChoice::All => TheoremSet {
                    synthesis: !analysis_only,
                    ..TheoremSet::all()
                },
            };
            let mut p_grid = if p.is_empty() {
                DEFAULT_P_GRID.to_vec()
            } else {
                p.clone()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for _ in 0..*samples {
                // rounded so that the printed exponent is the one used
                let x: f64 = rng.gen_range(0.0..1.0);
                p_grid.push(((2.0 - x) * 1e6).round() / 1e6);
            }
            p_grid.sort_by(f64::total_cmp);
            p_grid.dedup();
            let nonempty = |v: &Vec<f64>| (!v.is_empty()).then(|| v.clone());
            let config = SweepConfig {
                theorems,
                p_grid,
                q_grid: nonempty(q),
                s_grid: nonempty(s),
                r_grid: nonempty(r),
                degree: *max_degree,
                ..SweepConfig::default()
            };
            let mut weights: Vec<WeightSequence> = omega
                .iter()
                .map(|s| parse_weight(s))
                .collect::<Result<_, _>>()?;
            if weights.is_empty() {
                weights = std::mem::take(&mut corpus.omegas);
            }
            if weights.is_empty() {
                weights.push(WeightSequence::parse("pow:-2")?);
            }
            let sweep = verify_sweep(&corpus.functions, &config, &weights, &params.params()?)?;
            match format {
                Format::Jsonl => emit(&sweep.reports, format, out)?,
                Format::Csv => {
                    let flat: Vec<FlatReport> = sweep.reports.iter().map(FlatReport::from).collect();
                    emit(&flat, format, out)?
                }
            }
            if let Some(path) = summary {
                emit(&sweep.summary, Format::Csv, &Some(path.clone()))?;
            }
            let bad = sweep.reports.iter().filter(|r| !r.flags.all_ok()).count();
            if bad > 0 {
                return Err(Failure::Numerical(format!(
                    "{bad} of {} reports carry a failed confidence flag",
                    sweep.reports.len()
                )));
            }
            Ok(())
        }
        Command::Counterexample {
            omega,
            ladder,
            bump_width,
            params,
        } => {
            let q = params.params()?;
            let degrees = parse_ladder(ladder)?;
            let w = parse_weight(omega)?;
            let m = compute_m_omega(&w, &q);
            if !m.is_finite() {
                return Err(Failure::Config(format!(
                    "M_omega is infinite for weight {}",
                    w.id()
                )));
            }
            let trace = divergence_trace(&w, &q, &degrees)?;
            let model = match trace.growth.model {
                crate::counterexample::GrowthModel::Logarithmic => "logarithmic",
                crate::counterexample::GrowthModel::Power => "power",
            };
            let mut rows = Vec::with_capacity(trace.rows.len());
            for row in &trace.rows {
                let bump = match bump_width {
                    Some(width) => {
                        let g = build_gn(&w, &q, row.degree)?;
                        Some(duality_check(&g, &[Trial::Bump { width: *width }])?)
                    }
                    None => None,
                };
                rows.push(TraceOut {
                    omega: w.id(),
                    alpha: q.alpha(),
                    beta: q.beta(),
                    n: row.degree,
                    budget: row.budget,
                    sup_norm: row.sup_norm,
                    grid_sup_norm: row.grid_sup_norm,
                    ratio: row.ratio,
                    growth_model: model,
                    growth_exponent: trace.growth.exponent(),
                    bump_lower_bound: bump,
                });
            }
            emit(&rows, format, out)?;
            if m.truncated {
                return Err(Failure::Numerical(
                    "M_omega did not settle under doubling of the truncation".into(),
                ));
            }
            Ok(())
        }
    }
}

fn run_transform(
    corpus: &str,
    only: &[String],
    degree: usize,
    params: &JacobiParams,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let corpus = Corpus::load(corpus)?;
    for id in only {
        if !corpus.functions.iter().any(|f| &f.id == id) {
            return Err(Failure::Config(format!("no corpus function {id:?}")));
        }
    }
    let selected: Vec<_> = corpus
        .functions
        .iter()
        .filter(|f| only.is_empty() || only.contains(&f.id))
        .collect();
    let mut rows = Vec::new();
    let mut unconverged = Vec::new();
    let analyses = selected
        .iter()
        .map(|f| analyze(f, degree, params))
        .collect::<Result<Vec<_>, _>>()?;
    for (f, a) in selected.iter().zip(&analyses) {
        if !a.converged || !lp_norm(f, 2.0, params)?.converged {
            unconverged.push(f.id.clone());
        }
        for (n, &c) in a.coeffs.values().iter().enumerate() {
            rows.push(TransformRow {
                corpus_id: &f.id,
                n,
                coefficient: c,
                converged: a.converged,
            });
        }
    }
    emit(&rows, format, out)?;
    if unconverged.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "adaptive integration did not converge for {}",
            unconverged.join(", ")
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_forms() {
        assert_eq!(parse_ladder("16..128").unwrap(), [16, 32, 64, 128]);
        assert_eq!(parse_ladder("16..100").unwrap(), [16, 32, 64]);
        assert_eq!(parse_ladder("3, 5,9").unwrap(), [3, 5, 9]);
        for bad in ["", "0..8", "8..4", "4,2", "a..b", "1,,2"] {
            assert!(parse_ladder(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn error_classes() {
        assert_eq!(Failure::from(Error::Domain(2.0)).exit_code(), EXIT_CONFIG);
        assert_eq!(
            Failure::from(Error::Inconsistency {
                n: 1,
                grid: 2.0,
                endpoint: 1.0
            })
            .exit_code(),
            EXIT_CONFIDENCE
        );
    }

    #[test]
    fn summary_header_matches_row_fields() {
        let mut c = csv::Writer::from_writer(Vec::new());
        c.serialize(crate::inequalities::SummaryRow {
            theorem: crate::inequalities::Theorem::HyA,
            p: Some(2.0),
            q: None,
            s: None,
            r: None,
            omega: None,
            max_ratio: 1.0,
            argmax: "one".into(),
            count: 1,
            all_confident: true,
        })
        .unwrap();
        let text = String::from_utf8(c.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), SUMMARY_HEADER);
    }

    #[test]
    fn cli_parses() {
        let cli = Cli::try_parse_from([
            "jacobi-paley",
            "counterexample",
            "--alpha",
            "-0.5",
            "--omega",
            "pow:-2",
            "--format",
            "csv",
        ])
        .unwrap();
        assert_eq!(cli.format, Format::Csv);
        assert!(matches!(cli.command, Command::Counterexample { .. }));
    }
}
