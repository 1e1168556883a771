//! Command-line front end: every library operation behind one binary, with
//! CSV/JSON emission for plots and an acceptance-suite runner.
//!
//! Exit codes: 0 when the requested checks pass, 1 when a check fails
//! (counterexample found, bound violated, residual out of budget), 2 for
//! configuration problems, 3 when a computation refuses to answer at the
//! requested accuracy (window too coarse, truncation tail too large,
//! precision unattainable).

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqc::analysis::{
    delone_check, gap_stats, progression_decompose, progression_intersection, relation_probe,
    relation_probe_from_zeros, AnalysisError,
};
use fqc::builtins;
use fqc::criteria;
use fqc::dirichlet::{torus_zero_curve, DirichletError, FrequencyVec};
use fqc::io::{pair_from_path, poly_from_path, IoError};
use fqc::measure::{
    build_measure, build_spectrum, spectrum_growth, verify_summation, verify_summation_symmetric,
    MeasureError, TestFunction,
};
use fqc::polynomial::{MultiPoly, StablePair};
use fqc::series::{coeff_bound_check, SeriesError};
use fqc::stability::{falsify_stability, StabilityError, StabilityVerdict};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fqc",
    about = "Positive crystalline measures from stable polynomial pairs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    emit: Emit,
    /// Write output to DIR/<subcommand>.<ext> instead of stdout.
    #[arg(long, value_name = "DIR", global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized search in the run.
    #[arg(long, default_value_t = 17, global = true)]
    seed: u64,
}

/// Where a pair comes from: a builtin name or a JSON pair file.
#[derive(Args)]
struct PairSource {
    /// Builtin pair: poisson, lasso, lee-yang, spectral, spectral-phase.
    #[arg(long, conflicts_with = "pair")]
    builtin: Option<String>,
    /// JSON pair file (P's terms plus "ell" and "eta").
    #[arg(long, value_name = "FILE")]
    pair: Option<PathBuf>,
    /// Accept pair files whose eta leaves Q(0) != 1.
    #[arg(long, requires = "pair")]
    relaxed: bool,
    /// Frequencies, comma separated (e.g. 1,1.41421356237). Required with
    /// --pair; overrides the builtin default otherwise.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<f64>>,
}

impl PairSource {
    fn resolve(&self) -> Result<(StablePair, FrequencyVec), CliError> {
        let (pair, default_xi) = match (&self.builtin, &self.pair) {
            (Some(name), None) => {
                let (pair, xi) = builtins::by_name(name).ok_or_else(|| {
                    CliError::config(format!(
                        "unknown builtin '{name}' (try: {})",
                        builtins::PAIR_NAMES.join(", ")
                    ))
                })?;
                (pair, Some(xi))
            }
            (None, Some(path)) => (pair_from_path(path, self.relaxed)?, None),
            _ => {
                return Err(CliError::config(
                    "exactly one of --builtin or --pair is required".into(),
                ))
            }
        };
        let xi = match (&self.xi, default_xi) {
            (Some(values), _) => FrequencyVec::new(values.clone())?,
            (None, Some(xi)) => xi,
            (None, None) => {
                return Err(CliError::config(
                    "pair files carry no frequencies; pass --xi".into(),
                ))
            }
        };
        if xi.len() != pair.n() {
            return Err(CliError::config(format!(
                "--xi has {} entries but the polynomial has {} variables",
                xi.len(),
                pair.n()
            )));
        }
        Ok((pair, xi))
    }
}

/// Where a bare polynomial comes from (stability, coeffs, curve).
#[derive(Args)]
struct PolySource {
    /// Builtin polynomial: the P of any builtin pair, or "unstable".
    #[arg(long, conflicts_with = "poly")]
    builtin: Option<String>,
    /// JSON polynomial file.
    #[arg(long, value_name = "FILE")]
    poly: Option<PathBuf>,
}

impl PolySource {
    fn resolve(&self) -> Result<MultiPoly, CliError> {
        match (&self.builtin, &self.poly) {
            (Some(name), None) => builtins::poly_by_name(name).ok_or_else(|| {
                CliError::config(format!(
                    "unknown builtin '{name}' (try: {}, unstable)",
                    builtins::PAIR_NAMES.join(", ")
                ))
            }),
            (None, Some(path)) => Ok(poly_from_path(path)?),
            _ => Err(CliError::config(
                "exactly one of --builtin or --poly is required".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Random search for an interior polydisk zero (stability falsifier).
    Stability {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PolySource,
        /// Evaluation budget for the search.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Log-coefficient table with the explicit sup-norm bound check.
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PolySource,
        /// Total-degree truncation of the table.
        #[arg(long, default_value_t = 40)]
        degree_max: u32,
    },
    /// Zeros of F(s) on a symmetric window of the imaginary axis.
    Zeros {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PairSource,
        /// Window halfwidth A: zeros are found on [-A, A].
        #[arg(long, default_value_t = 100.0)]
        window: f64,
        /// Grid cells per 2 pi / W; higher separates closer zeros.
        #[arg(long, default_value_t = 32)]
        oversample: u32,
    },
    /// Zero set of a polynomial on the unit 2-torus.
    Curve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PolySource,
        /// Marching-squares cells per axis.
        #[arg(long, default_value_t = 512)]
        resolution: usize,
    },
    /// Check the summation identity against a concrete test function.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PairSource,
        /// Zero-window halfwidth A.
        #[arg(long, default_value_t = 200.0)]
        window: f64,
        /// Coefficient truncation degree D.
        #[arg(long, default_value_t = 40)]
        degree_max: u32,
        /// Gaussian width (the default test function).
        #[arg(long, default_value_t = 1.0, conflicts_with = "cosine_width")]
        sigma: f64,
        /// Use the compactly supported cosine window of this width instead.
        #[arg(long)]
        cosine_width: Option<f64>,
        /// Use the folded one-sum form (self-dual pairs only).
        #[arg(long)]
        symmetric: bool,
    },
    /// Atoms of the transform side on [-A, A].
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PairSource,
        /// Halfwidth A of the reported frequency window.
        #[arg(long, default_value_t = 80.0)]
        window: f64,
        /// Also fit the log-log growth slope over these halfwidths.
        #[arg(long, value_delimiter = ',', num_args = 0.., default_missing_value = "10,20,40,80")]
        growth: Option<Vec<f64>>,
    },
    /// Consecutive-gap statistics of the zero set.
    Gaps {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PairSource,
        /// Window halfwidth A.
        #[arg(long, default_value_t = 200.0)]
        window: f64,
    },
    /// Uniform discreteness and relative density on a window.
    Delone {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PairSource,
        /// Window halfwidth A (must be at least 5 R).
        #[arg(long, default_value_t = 200.0)]
        window: f64,
        /// Separation radius r.
        #[arg(long)]
        r: f64,
        /// Density radius R.
        #[arg(long)]
        big_r: f64,
    },
    /// Atoms meeting an arithmetic progression, or the full decomposition.
    Progression {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PairSource,
        /// Window halfwidth A.
        #[arg(long, default_value_t = 200.0)]
        window: f64,
        /// Progression offset a.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        offset: f64,
        /// Progression step d (> 0). Required unless --decompose.
        #[arg(long)]
        step: Option<f64>,
        /// Decompose the whole zero set into progressions instead.
        #[arg(long, conflicts_with = "step")]
        decompose: bool,
        /// Cap on reported hits.
        #[arg(long, default_value_t = 64)]
        limit: usize,
        /// Largest denominator tried when reconstructing frequency ratios.
        #[arg(long, default_value_t = 1000)]
        max_den: u64,
    },
    /// Empirical integer-relation probe on zeros or explicit values.
    Relations {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: PairSource,
        /// Window halfwidth A used to collect zeros.
        #[arg(long, default_value_t = 100.0)]
        window: f64,
        /// How many positive zeros to probe.
        #[arg(long, default_value_t = 8)]
        count: usize,
        /// Decimal digits of the lattice scale (<= 14).
        #[arg(long, default_value_t = 10)]
        precision: u32,
        /// Max-norm bound on accepted coefficient vectors.
        #[arg(long, default_value_t = 1000)]
        max_coeff: i64,
        /// Probe these comma-separated values instead of zeros.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["window", "count"])]
        values: Option<Vec<f64>>,
    },
    /// Run the full acceptance suite and print one line per criterion.
    ReproduceAll {
        #[command(flatten)]
        common: Common,
        /// Run only criteria whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(message: String) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::config(e.to_string())
    }
}

impl From<DirichletError> for CliError {
    fn from(e: DirichletError) -> Self {
        let code = match e {
            DirichletError::WindowTooCoarse { .. } | DirichletError::ContourHitsZero => {
                EXIT_NUMERICAL
            }
            _ => EXIT_CONFIG,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        let code = match &e {
            MeasureError::TailTooLarge(_) => EXIT_NUMERICAL,
            MeasureError::Zeros(DirichletError::WindowTooCoarse { .. })
            | MeasureError::Zeros(DirichletError::ContourHitsZero) => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        let code = match e {
            AnalysisError::PrecisionUnattainable(_, _) => EXIT_NUMERICAL,
            AnalysisError::NotPeriodic(_) => EXIT_CHECK_FAILED,
            _ => EXIT_CONFIG,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        CliError::config(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::config(e.to_string())
    }
}

/// Print a line to stdout, dying quietly with the conventional SIGPIPE
/// status when the reader has gone away — `fqc zeros ... | head` must not
/// panic mid-pipe.
macro_rules! sayln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let mut out = std::io::stdout().lock();
        if out.write_fmt(format_args!($($t)*)).is_err() || out.write_all(b"\n").is_err() {
            std::process::exit(141);
        }
    }};
}

/// One rendered output: the JSON and CSV forms of the same report.
struct Rendered {
    json: String,
    csv: String,
}

fn rendered<T: Serialize>(value: &T, csv: String) -> Result<Rendered, CliError> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::config(format!("serialization failed: {e}")))?;
    Ok(Rendered { json, csv })
}

fn deliver(common: &Common, name: &str, out: Rendered) -> Result<(), CliError> {
    let (mut body, ext) = match common.emit {
        Emit::Csv => (out.csv, "csv"),
        Emit::Json => (out.json, "json"),
    };
    // Exactly one trailing newline whether the renderer added one or not.
    while body.ends_with('\n') {
        body.pop();
    }
    match &common.out {
        None => {
            sayln!("{body}");
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::config(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("{name}.{ext}"));
            body.push('\n');
            std::fs::write(&path, body.as_bytes())
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            sayln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Stability {
            common,
            source,
            budget,
        } => {
            let poly = source.resolve()?;
            let report = falsify_stability(&poly, budget, common.seed)?;
            let mut csv = String::from("verdict,samples_used,min_modulus,witness_value\n");
            let _ = writeln!(
                csv,
                "{:?},{},{:.17e},{}",
                report.verdict,
                report.samples_used,
                report.min_modulus,
                report
                    .witness_value
                    .map_or(String::new(), |v| format!("{v:.17e}"))
            );
            let failed = report.verdict == StabilityVerdict::CounterexampleFound;
            deliver(&common, "stability", rendered(&report, csv)?)?;
            Ok(if failed { EXIT_CHECK_FAILED } else { 0 })
        }
        Command::Coeffs {
            common,
            source,
            degree_max,
        } => {
            let poly = source.resolve()?;
            let table = fqc::series::log_coeffs_recurrence(&poly, degree_max)?;
            let bound = coeff_bound_check(&poly, degree_max)?;
            #[derive(Serialize)]
            struct CoeffsOut<'a> {
                bound: &'a fqc::series::CoeffBoundReport,
                coeffs: Vec<CoeffRow>,
            }
            #[derive(Serialize)]
            struct CoeffRow {
                exp: Vec<u32>,
                re: f64,
                im: f64,
            }
            let rows: Vec<CoeffRow> = table
                .iter()
                .map(|(k, c)| CoeffRow {
                    exp: k.as_slice().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect();
            let mut csv = String::new();
            for i in 1..=poly.n() {
                let _ = write!(csv, "k{i},");
            }
            csv.push_str("re,im\n");
            for row in &rows {
                for e in &row.exp {
                    let _ = write!(csv, "{e},");
                }
                let _ = writeln!(csv, "{:.17e},{:.17e}", row.re, row.im);
            }
            let failed = !bound.pass;
            deliver(
                &common,
                "coeffs",
                rendered(
                    &CoeffsOut {
                        bound: &bound,
                        coeffs: rows,
                    },
                    csv,
                )?,
            )?;
            Ok(if failed { EXIT_CHECK_FAILED } else { 0 })
        }
        Command::Zeros {
            common,
            source,
            window,
            oversample,
        } => {
            let (pair, xi) = source.resolve()?;
            let series =
                fqc::dirichlet::DirichletSeries::new(&pair, &xi, fqc::dirichlet::Side::P)?;
            let zeros = fqc::dirichlet::find_zeros(&series, (-window, window), oversample)?;
            let mut csv = String::from("gamma,multiplicity,residual\n");
            for (g, m, r) in zeros.iter() {
                let _ = writeln!(csv, "{g:.17e},{m},{r:.3e}");
            }
            deliver(&common, "zeros", rendered(&zeros, csv)?)?;
            Ok(0)
        }
        Command::Curve {
            common,
            source,
            resolution,
        } => {
            let poly = source.resolve()?;
            let curves = torus_zero_curve(&poly, resolution)?;
            let mut csv = String::from("x,y\n");
            for (i, comp) in curves.components.iter().enumerate() {
                if i > 0 {
                    csv.push('\n'); // blank line separates components
                }
                for &(x, y) in &comp.points {
                    let _ = writeln!(csv, "{x:.17e},{y:.17e}");
                }
            }
            deliver(&common, "curve", rendered(&curves, csv)?)?;
            Ok(0)
        }
        Command::Verify {
            common,
            source,
            window,
            degree_max,
            sigma,
            cosine_width,
            symmetric,
        } => {
            let (pair, xi) = source.resolve()?;
            let test = match cosine_width {
                Some(width) => TestFunction::CosineWindow { width },
                None => TestFunction::Gaussian { sigma },
            };
            let report = if symmetric {
                verify_summation_symmetric(&pair, &xi, test, window, degree_max)?
            } else {
                verify_summation(&pair, &xi, test, window, degree_max)?
            };
            let mut csv = String::from(
                "lhs,rhs_re,rhs_im,residual,tail_estimate,window,degree_max,zero_count\n",
            );
            let _ = writeln!(
                csv,
                "{:.17e},{:.17e},{:.17e},{:.3e},{:.3e},{},{},{}",
                report.lhs,
                report.rhs.re,
                report.rhs.im,
                report.residual,
                report.tail_estimate,
                report.window,
                report.degree_max,
                report.zero_count
            );
            let failed = report.residual > report.tail_estimate + 1e-6;
            deliver(&common, "verify", rendered(&report, csv)?)?;
            Ok(if failed { EXIT_CHECK_FAILED } else { 0 })
        }
        Command::Spectrum {
            common,
            source,
            window,
            growth,
        } => {
            let (pair, xi) = source.resolve()?;
            let spectrum = build_spectrum(&pair, &xi, window)?;
            #[derive(Serialize)]
            struct SpectrumOut<'a> {
                spectrum: &'a fqc::measure::SpectrumMeasure,
                growth: Option<fqc::measure::GrowthReport>,
            }
            let growth_report = growth
                .as_ref()
                .map(|windows| spectrum_growth(&spectrum, windows));
            let mut csv = String::from("position,re_weight,im_weight\n");
            for atom in spectrum.atoms() {
                let _ = writeln!(
                    csv,
                    "{:.17e},{:.17e},{:.17e}",
                    atom.position, atom.weight.re, atom.weight.im
                );
            }
            deliver(
                &common,
                "spectrum",
                rendered(
                    &SpectrumOut {
                        spectrum: &spectrum,
                        growth: growth_report,
                    },
                    csv,
                )?,
            )?;
            Ok(0)
        }
        Command::Gaps {
            common,
            source,
            window,
        } => {
            let (pair, xi) = source.resolve()?;
            let measure = build_measure(&pair, &xi, window)?;
            let stats = gap_stats(&measure)?;
            let mut csv = String::from("min_gap,max_gap,count,window_lo,window_hi\n");
            let _ = writeln!(
                csv,
                "{:.17e},{:.17e},{},{},{}",
                stats.min_gap, stats.max_gap, stats.count, stats.window.0, stats.window.1
            );
            deliver(&common, "gaps", rendered(&stats, csv)?)?;
            Ok(0)
        }
        Command::Delone {
            common,
            source,
            window,
            r,
            big_r,
        } => {
            let (pair, xi) = source.resolve()?;
            let measure = build_measure(&pair, &xi, window)?;
            let report = delone_check(&measure, r, big_r)?;
            let mut csv = String::from("r,big_r,min_gap,widest_hole,separated,dense,pass\n");
            let _ = writeln!(
                csv,
                "{},{},{:.17e},{:.17e},{},{},{}",
                report.r,
                report.big_r,
                report.min_gap,
                report.widest_hole,
                report.separated,
                report.dense,
                report.pass
            );
            let failed = !report.pass;
            deliver(&common, "delone", rendered(&report, csv)?)?;
            Ok(if failed { EXIT_CHECK_FAILED } else { 0 })
        }
        Command::Progression {
            common,
            source,
            window,
            offset,
            step,
            decompose,
            limit,
            max_den,
        } => {
            let (pair, xi) = source.resolve()?;
            let measure = build_measure(&pair, &xi, window)?;
            if decompose {
                let dec = progression_decompose(&measure, max_den)?;
                let mut csv = String::from("period,offset\n");
                for o in &dec.offsets {
                    let _ = writeln!(csv, "{:.17e},{o:.17e}", dec.period);
                }
                let failed = !dec.leftover.is_empty();
                deliver(&common, "progression", rendered(&dec, csv)?)?;
                Ok(if failed { EXIT_CHECK_FAILED } else { 0 })
            } else {
                let step = step.ok_or_else(|| {
                    CliError::config("pass --step D for intersection or --decompose".into())
                })?;
                if !(step > 0.0) {
                    return Err(CliError::config("--step must be positive".into()));
                }
                let hits = progression_intersection(&measure, offset, step, limit);
                let mut csv = String::from("n,gamma\n");
                for (n, g) in &hits.hits {
                    let _ = writeln!(csv, "{n},{g:.17e}");
                }
                deliver(&common, "progression", rendered(&hits, csv)?)?;
                Ok(0)
            }
        }
        Command::Relations {
            common,
            source,
            window,
            count,
            precision,
            max_coeff,
            values,
        } => {
            let probe = match values {
                Some(values) => relation_probe(&values, precision, max_coeff)?,
                None => {
                    let (pair, xi) = source.resolve()?;
                    let measure = build_measure(&pair, &xi, window)?;
                    relation_probe_from_zeros(measure.zeros(), count, precision, max_coeff)?
                }
            };
            let mut csv = String::from("index,coefficient\n");
            if let Some(q) = &probe.found {
                for (i, c) in q.iter().enumerate() {
                    let _ = writeln!(csv, "{i},{c}");
                }
            }
            deliver(&common, "relations", rendered(&probe, csv)?)?;
            Ok(0)
        }
        Command::ReproduceAll { common, filter } => {
            let results = criteria::run_all(filter.as_deref());
            if results.is_empty() {
                return Err(CliError::config(format!(
                    "filter matched no criteria (known: {})",
                    criteria::names().collect::<Vec<_>>().join(", ")
                )));
            }
            let mut csv = String::from("id,name,pass,seconds,detail\n");
            for r in &results {
                sayln!(
                    "{} criterion {:2} {:<24} [{:6.2}s] {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.seconds,
                    r.detail
                );
                let _ = writeln!(
                    csv,
                    "{},{},{},{:.3},\"{}\"",
                    r.id,
                    r.name,
                    r.pass,
                    r.seconds,
                    r.detail.replace('"', "'")
                );
            }
            let failed = results.iter().filter(|r| !r.pass).count();
            let total = results.len();
            sayln!(
                "{} of {total} criteria passed{}",
                total - failed,
                if failed > 0 { " — FAIL" } else { "" }
            );
            if common.out.is_some() {
                deliver(&common, "reproduce-all", rendered(&results, csv)?)?;
            }
            Ok(if failed > 0 { EXIT_CHECK_FAILED } else { 0 })
        }
    }
}
