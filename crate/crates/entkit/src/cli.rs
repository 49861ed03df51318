//! Command-line front end: `measure`, `figure` and `protocol`.
//!
//! Exit codes are a fixed contract: `0` success, `2` usage or parse errors, `3` domain errors.
//! Every output is a pure function of the flags, so identical invocations produce identical bytes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::channel;
use crate::cloning;
use crate::measures::{self, EntropyKind, MeasureKind};
use crate::protocols::{self, CdcFamily, CdcOutcomes, HadamardOutcome};
use crate::qcore::{c, ComplexMatrix, DensityMatrix};
use crate::statezoo::{self, MixedFamily, PureFamily};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for malformed flags, state specs or input files.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for arguments outside a mathematical domain.
pub const EXIT_DOMAIN: i32 = 3;

/// Significant digits used for every printed number.
pub const SIGNIFICANT_DIGITS: usize = 12;
/// Default number of grid points per swept axis.
pub const DEFAULT_STEPS: usize = 101;
/// Environment variable limiting the worker threads used by sweeps.
pub const THREADS_ENV: &str = "ENTKIT_THREADS";

/// Every figure id the `figure` command knows.
pub const FIGURE_IDS: [&str; 14] =
    ["3.1", "3.2", "3.3", "3.4", "3.5", "4.1", "4.2", "4.3", "5.1", "5.2", "5.3", "5.4", "5.5", "5.6"];

/// Failure of a command, carrying its exit code class.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, unparsable spec or unreadable input; exit code 2.
    Usage(String),
    /// A library domain error; exit code 3.
    Domain(crate::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Domain(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

// ---------------------------------------------------------------------------------------------
// Flags
// ---------------------------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(name = "entkit", version, about = "Entanglement measures, channel sweeps and protocol transcripts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one entanglement measure on a state.
    Measure(MeasureArgs),
    /// Write the data behind a figure as CSV.
    Figure(FigureArgs),
    /// Run a protocol and print its JSON transcript.
    #[command(subcommand)]
    Protocol(ProtocolCommand),
}

#[derive(Debug, Args)]
struct MeasureArgs {
    /// State spec `family:key=value,...`, e.g. `werner:F=0.75` or `bell:1`.
    #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
    state: Option<String>,
    /// JSON file holding a density matrix as rows of `[re, im]` pairs.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Subsystem dimensions for `--matrix`, e.g. `2,2`; defaults to a square split.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Measure name.
    #[arg(long)]
    kind: MeasureKind,
    /// Logarithm base for the von Neumann and linear entropies.
    #[arg(long, default_value_t = 2.0)]
    base: f64,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Figure id, one of 3.1–3.5, 4.1–4.3, 5.1–5.6.
    id: String,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid points per swept axis (at least 2).
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
}

#[derive(Debug, Subcommand)]
enum ProtocolCommand {
    /// Controlled dense coding.
    Cdc(CdcArgs),
    /// Secret sharing over a cloned channel.
    SecretShare(SecretShareArgs),
}

#[derive(Debug, Args)]
struct CdcArgs {
    /// Channel spec: ghz, ghz_class:i=N, pati:l=X, ghz4, w3, w4, liqiu_w:n=X, qutrit_ghz.
    #[arg(long)]
    family: String,
    /// Cliff's measurement angle.
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    /// Paul's measurement angle (four-party channels).
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Cliff's outcome index.
    #[arg(long, default_value_t = 0)]
    controller: usize,
    /// Paul's outcome index.
    #[arg(long)]
    paul: Option<usize>,
    /// Alice's auxiliary readout.
    #[arg(long, default_value_t = 0)]
    aux: usize,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Output JSON path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SecretShareArgs {
    /// Squared machine amplitude c² (exclusive with --c).
    #[arg(long, conflicts_with = "c", required_unless_present = "c")]
    c2: Option<f64>,
    /// Machine amplitude c.
    #[arg(long)]
    c: Option<f64>,
    /// Charlie's secret bit.
    #[arg(long, default_value_t = 0)]
    bit: u8,
    /// Alice's Hadamard-basis outcome: plus or minus.
    #[arg(long, default_value = "plus")]
    alice: String,
    /// Input Schmidt weight λ₁ for the witness check on the cloned pair.
    #[arg(long)]
    lambda1: Option<f64>,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Output JSON path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Number of simulated runs to sample next to the exact values.
    #[arg(long)]
    montecarlo: Option<u64>,
    /// Seed for `--montecarlo`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

// ---------------------------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------------------------

/// Runs the binary: parses `std::env::args`, writes to stdout/stderr, returns the exit code.
pub fn main() -> i32 {
    if let Err(e) = configure_threads(std::env::var(THREADS_ENV).ok().as_deref()) {
        eprintln!("entkit: {e}");
        return e.exit_code();
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(std::env::args_os(), &mut lock) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("entkit: {e}");
            e.exit_code()
        }
    }
}

/// Sizes the global rayon pool from the value of `ENTKIT_THREADS` (unset: rayon's default).
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = match v.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'")),
    };
    // A pool that is already built (e.g. a second call in-process) keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (including the program name) and runs the command, writing to `out`
/// unless an `--out` path is given.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return emit(out, None, e.to_string().as_bytes());
            }
            return usage(e.to_string().trim_end().to_string());
        }
    };
    match cli.command {
        Command::Measure(a) => cmd_measure(&a, out),
        Command::Figure(a) => {
            let csv = figure_csv(&a.id, a.steps)?;
            emit(out, a.out.as_deref(), csv.as_bytes())
        }
        Command::Protocol(ProtocolCommand::Cdc(a)) => cmd_cdc(&a, out),
        Command::Protocol(ProtocolCommand::SecretShare(a)) => cmd_secret_share(&a, out),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).or_else(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(bytes).or_else(|e| usage(format!("cannot write output: {e}"))),
    }
}

// ---------------------------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------------------------

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, 12)`, scientific otherwise, trailing zeros dropped, `-0` as `0`.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific formatting has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        let s = trim_zeros(format!("{x:.decimals$}"));
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

// ---------------------------------------------------------------------------------------------
// State specs
// ---------------------------------------------------------------------------------------------

/// A state named on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Mixed(MixedFamily),
    Pure(PureFamily),
}

impl StateSpec {
    pub fn density(&self) -> crate::Result<DensityMatrix> {
        match *self {
            StateSpec::Mixed(m) => statezoo::make_mixed(m),
            StateSpec::Pure(p) => Ok(statezoo::make_pure(p)?.density()),
        }
    }
}

/// `family` plus its `key=value` pairs (a lone value is stored under the key `""`).
struct SpecParts<'a> {
    family: &'a str,
    pairs: Vec<(String, f64)>,
}

impl<'a> SpecParts<'a> {
    fn parse(spec: &'a str) -> Result<Self, CliError> {
        let (family, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let family = family.trim();
        if family.is_empty() {
            return usage(format!("empty family in '{spec}'"));
        }
        let mut pairs: Vec<(String, f64)> = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').unwrap_or(("", item));
            let key = k.trim().to_ascii_lowercase();
            let value: f64 =
                v.trim().parse().or_else(|_| usage(format!("'{}' is not a number in '{spec}'", v.trim())))?;
            if pairs.iter().any(|(k, _)| *k == key) {
                return usage(format!("parameter '{key}' given twice in '{spec}'"));
            }
            pairs.push((key, value));
        }
        Ok(SpecParts { family, pairs })
    }

    /// Takes the value of `key` (or a lone positional value), failing if absent.
    fn take(&mut self, key: &str) -> Result<f64, CliError> {
        let pos = self.pairs.iter().position(|(k, _)| k == key).or_else(|| {
            if self.pairs.len() == 1 && self.pairs[0].0.is_empty() {
                Some(0)
            } else {
                None
            }
        });
        match pos {
            Some(i) => Ok(self.pairs.remove(i).1),
            None => usage(format!("{} needs parameter '{key}'", self.family)),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        match self.pairs.first() {
            None => Ok(()),
            Some((k, _)) if k.is_empty() => usage(format!("{} takes no positional value", self.family)),
            Some((k, _)) => usage(format!("{} has no parameter '{k}'", self.family)),
        }
    }
}

fn as_index<T: TryFrom<u64>>(family: &str, key: &str, x: f64) -> Result<T, CliError> {
    if x.fract() != 0.0 || x < 0.0 || x > u32::MAX as f64 {
        return usage(format!("{family}: '{key}' must be a non-negative integer, got {x}"));
    }
    T::try_from(x as u64).or_else(|_| usage(format!("{family}: '{key}' = {x} is too large")))
}

/// Parses a state spec such as `werner:F=0.75`, `bell:1`, `wei:x=0.1,y=0.1,a=0,b=0,gamma=0.8`.
pub fn parse_state_spec(spec: &str) -> Result<StateSpec, CliError> {
    let mut p = SpecParts::parse(spec)?;
    let s = match p.family {
        "werner" => StateSpec::Mixed(MixedFamily::Werner { f: p.take("f")? }),
        "mjwk" => StateSpec::Mixed(MixedFamily::Mjwk { c: p.take("c")? }),
        "wei" => StateSpec::Mixed(MixedFamily::Wei {
            x: p.take("x")?,
            y: p.take("y")?,
            a: p.take("a")?,
            b: p.take("b")?,
            gamma: p.take("gamma")?,
        }),
        "werner_derivative" => StateSpec::Mixed(MixedFamily::WernerDerivative { f: p.take("f")?, a: p.take("a")? }),
        "nmems" => StateSpec::Mixed(MixedFamily::Nmems { p: p.take("p")? }),
        "ih_mems" => {
            StateSpec::Mixed(MixedFamily::IhMems { p: [p.take("p1")?, p.take("p2")?, p.take("p3")?, p.take("p4")?] })
        }
        "cloned_mems" => StateSpec::Mixed(MixedFamily::ClonedMems { c2: p.take("c2")? }),
        "bell" => {
            let k = p.take("k")?;
            StateSpec::Pure(PureFamily::Bell { k: as_index("bell", "k", k)? })
        }
        "ghz3" | "ghz" => StateSpec::Pure(PureFamily::Ghz3),
        "ghz4" => StateSpec::Pure(PureFamily::Ghz4),
        "ghz_class" => {
            let i = p.take("i")?;
            StateSpec::Pure(PureFamily::GhzClass { i: as_index("ghz_class", "i", i)? })
        }
        "w3" => StateSpec::Pure(PureFamily::W3Prototype),
        "w3_nonprototype" => StateSpec::Pure(PureFamily::W3NonPrototype),
        "w4" => StateSpec::Pure(PureFamily::W4),
        "pati" => StateSpec::Pure(PureFamily::Pati { l: p.take("l")? }),
        "liqiu_w" => StateSpec::Pure(PureFamily::LiqiuW { n: p.take("n")? }),
        "qutrit_ghz" | "qutrit_ghz3" => StateSpec::Pure(PureFamily::QutritGhz3),
        "max_entangled" => {
            let n = p.take("n")?;
            StateSpec::Pure(PureFamily::GeneralizedMaxEntangled { n: as_index("max_entangled", "n", n)? })
        }
        other => return usage(format!("unknown state family '{other}'")),
    };
    p.finish()?;
    Ok(s)
}

/// Parses a controlled-dense-coding channel spec such as `ghz_class:i=2` or `pati:l=0.5`.
pub fn parse_cdc_family(spec: &str) -> Result<CdcFamily, CliError> {
    let mut p = SpecParts::parse(spec)?;
    let f = match p.family {
        "ghz" => CdcFamily::Ghz,
        "ghz_class" => {
            let i = p.take("i")?;
            CdcFamily::GhzClass { i: as_index("ghz_class", "i", i)? }
        }
        "pati" => CdcFamily::Pati { l: p.take("l")? },
        "ghz4" => CdcFamily::Ghz4,
        "w3" => CdcFamily::W3,
        "w4" => CdcFamily::W4,
        "liqiu_w" => CdcFamily::LiqiuW { n: p.take("n")? },
        "qutrit_ghz" => CdcFamily::QutritGhz,
        other => return usage(format!("unknown protocol family '{other}'")),
    };
    p.finish()?;
    Ok(f)
}

/// Reads a density matrix from JSON: an array of rows, each an array of `[re, im]` pairs.
pub fn parse_matrix_json(text: &str, dims: Option<&[usize]>) -> Result<DensityMatrix, CliError> {
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(text).or_else(|e| usage(format!("matrix JSON must be rows of [re, im] pairs: {e}")))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return usage(format!("matrix must be square and non-empty, got {n} rows"));
    }
    let dims = match dims {
        Some(d) => d.to_vec(),
        None => {
            let k = (n as f64).sqrt().round() as usize;
            if k * k == n && k > 1 {
                vec![k, k]
            } else {
                vec![n]
            }
        }
    };
    if dims.iter().product::<usize>() != n {
        return usage(format!("dims {dims:?} do not multiply to {n}"));
    }
    let m = ComplexMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1]));
    Ok(DensityMatrix::new(dims, m)?)
}

fn cmd_measure(a: &MeasureArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rho = match (&a.state, &a.matrix) {
        (Some(spec), _) => {
            if a.dims.is_some() {
                return usage("--dims only applies to --matrix");
            }
            parse_state_spec(spec)?.density()?
        }
        (None, Some(path)) => {
            let text =
                std::fs::read_to_string(path).or_else(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            parse_matrix_json(&text, a.dims.as_deref())?
        }
        (None, None) => return usage("one of --state or --matrix is required"),
    };
    let v = measures::evaluate(a.kind, &rho, a.base)?;
    emit(out, None, format!("{}\n", format_sig(v.value)).as_bytes())
}

// ---------------------------------------------------------------------------------------------
// Figures
// ---------------------------------------------------------------------------------------------

/// A figure's data: column names and rows sorted by the leading parameter columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub id: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureTable {
    /// CSV text: header row, LF endings, [`SIGNIFICANT_DIGITS`] significant digits.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_sig(x))).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV is UTF-8")
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

/// `steps` equally spaced points on `[lo, hi]`.
fn closed_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64).collect()
}

/// `steps` equally spaced points on `(lo, hi]`.
fn half_open_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (1..=steps).map(|k| lo + (hi - lo) * k as f64 / steps as f64).collect()
}

fn sweep(params: Vec<Vec<f64>>, f: impl Fn(&[f64]) -> crate::Result<Vec<f64>> + Sync) -> crate::Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = params
        .par_iter()
        .map(|p| {
            let mut row = p.clone();
            row.extend(f(p)?);
            Ok(row)
        })
        .collect::<crate::Result<_>>()?;
    let width = params.first().map_or(0, Vec::len);
    rows.sort_by(|a, b| {
        a[..width]
            .iter()
            .zip(&b[..width])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(rows)
}

fn axis(grid: Vec<f64>) -> Vec<Vec<f64>> {
    grid.into_iter().map(|x| vec![x]).collect()
}

fn plane(xs: &[f64], ys: &[f64]) -> Vec<Vec<f64>> {
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| vec![x, y])).collect()
}

/// Werner and MJWK at equal concurrence `C`: `(ρ_werner, ρ_mjwk)`.
fn werner_mjwk_at(cc: f64) -> crate::Result<(DensityMatrix, DensityMatrix)> {
    Ok((statezoo::werner((1.0 + cc) / 2.0)?, statezoo::mjwk(cc)?))
}

/// The Wei member used in the M-sweep: `x = y = 0`, `a = b = (1−γ)/2`, for which `M = 2γ²`.
pub fn wei_sweep_member(gamma: f64) -> MixedFamily {
    let a = (1.0 - gamma) / 2.0;
    MixedFamily::Wei { x: 0.0, y: 0.0, a, b: a, gamma }
}

/// Werner singlet fraction with `M = m`: `F = (1 + 3√(m/2))/4`.
pub fn werner_fraction_for_m(m: f64) -> f64 {
    (1.0 + 3.0 * (m / 2.0).sqrt()) / 4.0
}

fn qubit_fidelity(rho: &DensityMatrix) -> crate::Result<f64> {
    channel::optimal_fidelity(rho, 2)
}

fn linear_entropy(rho: &DensityMatrix) -> crate::Result<f64> {
    measures::entropy(rho, EntropyKind::Linear, 2.0)
}

/// Runs one controlled-dense-coding branch, mapping a zero-probability branch to `None`.
fn cdc_branch(
    family: CdcFamily,
    theta: f64,
    epsilon: Option<f64>,
    out: CdcOutcomes,
) -> crate::Result<Option<protocols::CdcReport>> {
    match protocols::cdc_run(family, theta, epsilon, out) {
        Ok(r) => Ok(Some(r)),
        Err(crate::Error::Domain(m)) if m.contains("zero probability") => Ok(None),
        Err(e) => Err(e),
    }
}

/// Builds the table for a figure id with `steps` grid points per axis.
pub fn figure_table(id: &str, steps: usize) -> Result<FigureTable, CliError> {
    if steps < 2 {
        return usage(format!("--steps must be at least 2, got {steps}"));
    }
    let (columns, rows): (Vec<&'static str>, crate::Result<Vec<Vec<f64>>>) = match id {
        "3.1" => (
            vec!["p", "concurrence", "N", "M"],
            sweep(axis(closed_grid(0.0, 1.0, steps)), |x| {
                let rho = statezoo::nmems(x[0])?;
                Ok(vec![measures::concurrence(&rho)?, channel::n_value(&rho)?, channel::m_value(&rho)?])
            }),
        ),
        "3.2" => (
            vec!["C", "f_werner", "f_mjwk"],
            sweep(axis(closed_grid(0.0, 1.0, steps)), |x| {
                let (w, m) = werner_mjwk_at(x[0])?;
                Ok(vec![qubit_fidelity(&w)?, qubit_fidelity(&m)?])
            }),
        ),
        "3.3" => (
            vec!["C", "M_werner", "f_werner", "M_mjwk", "f_mjwk"],
            sweep(axis(closed_grid(0.0, 1.0, steps)), |x| {
                let (w, m) = werner_mjwk_at(x[0])?;
                Ok(vec![channel::m_value(&w)?, qubit_fidelity(&w)?, channel::m_value(&m)?, qubit_fidelity(&m)?])
            }),
        ),
        "3.4" => (
            vec!["M", "F_werner", "f_werner", "gamma_wei", "f_wei"],
            sweep(axis(closed_grid(0.5, 2.0, steps)), |x| {
                let fw = werner_fraction_for_m(x[0]);
                let gamma = (x[0] / 2.0).sqrt();
                let w = statezoo::werner(fw)?;
                let wei = statezoo::make_mixed(wei_sweep_member(gamma))?;
                Ok(vec![fw, qubit_fidelity(&w)?, gamma, qubit_fidelity(&wei)?])
            }),
        ),
        "3.5" => (
            vec!["C", "SL_werner", "f_werner", "SL_mjwk", "f_mjwk"],
            sweep(axis(closed_grid(0.0, 1.0, steps)), |x| {
                let (w, m) = werner_mjwk_at(x[0])?;
                Ok(vec![linear_entropy(&w)?, qubit_fidelity(&w)?, linear_entropy(&m)?, qubit_fidelity(&m)?])
            }),
        ),
        "4.1" => (
            vec!["d", "entropy_gap"],
            sweep(axis(half_open_grid(0.0, 0.5, steps)), |x| {
                let pair = cloning::qutrit_cloned_pair(x[0])?;
                Ok(vec![cloning::dense_coding_entropy_gap(&pair.joint)?])
            }),
        ),
        "4.2" => (
            vec!["d", "singlet_fraction", "fidelity"],
            sweep(axis(half_open_grid(cloning::non_optimal_filter_lower_bound(), 0.5, steps)), |x| {
                let pair = cloning::qutrit_cloned_pair(x[0])?;
                let distilled = cloning::distill(&pair.joint, &cloning::non_optimal_filter(x[0])?)?;
                let f = measures::singlet_fraction(&distilled)?;
                Ok(vec![f, channel::fidelity_from_singlet_fraction(f, 3)])
            }),
        ),
        "4.3" => (
            vec!["d", "chi_undistilled", "chi_distilled"],
            sweep(axis(half_open_grid(cloning::non_optimal_filter_lower_bound(), 0.5, steps)), |x| {
                let pair = cloning::qutrit_cloned_pair(x[0])?;
                let distilled = cloning::distill(&pair.joint, &cloning::non_optimal_filter(x[0])?)?;
                Ok(vec![cloning::dense_coding_capacity(&pair.joint)?, cloning::dense_coding_capacity(&distilled)?])
            }),
        ),
        "5.1" => (
            vec!["theta", "bits_ghz_class_1", "bits_ghz_class_2"],
            sweep(axis(closed_grid(0.0, FRAC_PI_2, steps)), |x| {
                Ok(vec![
                    protocols::cdc_average(CdcFamily::GhzClass { i: 1 }, x[0], None)?.bits_transmitted_avg,
                    protocols::cdc_average(CdcFamily::GhzClass { i: 2 }, x[0], None)?.bits_transmitted_avg,
                ])
            }),
        ),
        "5.2" => (
            vec!["theta", "l", "success"],
            sweep(
                half_open_grid(0.0, 1.0, steps)
                    .into_iter()
                    .map(|l| vec![protocols::pati_matched_angle(l).expect("l > 0"), l])
                    .collect(),
                |x| Ok(vec![protocols::cdc_average(CdcFamily::Pati { l: x[1] }, x[0], None)?.success_probability]),
            ),
        ),
        "5.3" => (
            vec!["theta", "concurrence"],
            sweep(axis(closed_grid(FRAC_PI_4, FRAC_PI_2, steps)), |x| {
                let run = protocols::cdc_run(CdcFamily::Ghz, x[0], None, CdcOutcomes::default())?;
                Ok(vec![run.prefilter_concurrence])
            }),
        ),
        "5.4" => (
            vec!["theta", "epsilon", "C1"],
            sweep(plane(&closed_grid(0.0, FRAC_PI_4, steps), &closed_grid(0.0, FRAC_PI_2, steps)), |x| {
                let out = CdcOutcomes { controller: 0, paul: Some(0), aux: 0 };
                let run = cdc_branch(CdcFamily::Ghz4, x[0], Some(x[1]), out)?;
                Ok(vec![run.map_or(0.0, |r| r.amplitude_concurrence)])
            }),
        ),
        "5.5" => (
            vec!["theta", "concurrence", "amplitude_concurrence"],
            sweep(axis(closed_grid(FRAC_PI_4, FRAC_PI_2, steps)), |x| {
                let run = cdc_branch(CdcFamily::W3, x[0], None, CdcOutcomes::default())?;
                Ok(run.map_or(vec![0.0, 0.0], |r| vec![r.shared_concurrence, r.amplitude_concurrence]))
            }),
        ),
        "5.6" => (
            vec!["theta", "epsilon", "concurrence", "amplitude_concurrence"],
            sweep(plane(&closed_grid(FRAC_PI_4, FRAC_PI_2, steps), &closed_grid(FRAC_PI_4, FRAC_PI_2, steps)), |x| {
                let out = CdcOutcomes { controller: 0, paul: Some(0), aux: 0 };
                let run = cdc_branch(CdcFamily::W4, x[0], Some(x[1]), out)?;
                Ok(run.map_or(vec![0.0, 0.0], |r| vec![r.shared_concurrence, r.amplitude_concurrence]))
            }),
        ),
        other => return usage(format!("unknown figure id '{other}' (known: {})", FIGURE_IDS.join(", "))),
    };
    Ok(FigureTable { id: id.to_string(), columns, rows: rows? })
}

/// CSV text of a figure.
pub fn figure_csv(id: &str, steps: usize) -> Result<String, CliError> {
    Ok(figure_table(id, steps)?.to_csv())
}

// ---------------------------------------------------------------------------------------------
// Protocol transcripts
// ---------------------------------------------------------------------------------------------

#[derive(Serialize)]
struct CdcTranscript {
    protocol: &'static str,
    run: protocols::CdcReport,
    average: protocols::CdcAverage,
    #[serde(skip_serializing_if = "Option::is_none")]
    montecarlo: Option<protocols::MonteCarloSummary>,
}

#[derive(Serialize)]
struct SecretShareTranscript {
    protocol: &'static str,
    run: protocols::SecretShareReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<protocols::WitnessChecks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    montecarlo: Option<protocols::MonteCarloSummary>,
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_string_pretty(value).or_else(|e| usage(format!("cannot serialize transcript: {e}")))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn cmd_cdc(a: &CdcArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let family = parse_cdc_family(&a.family)?;
    let outcomes = CdcOutcomes { controller: a.controller, paul: a.paul, aux: a.aux };
    let run = protocols::cdc_run(family, a.theta, a.epsilon, outcomes)?;
    let average = protocols::cdc_average(family, a.theta, a.epsilon)?;
    let montecarlo = match a.sampling.montecarlo {
        Some(n) => Some(protocols::cdc_monte_carlo(family, a.theta, a.epsilon, n, a.sampling.seed)?),
        None => None,
    };
    let t = CdcTranscript { protocol: "cdc", run, average, montecarlo };
    emit(out, a.out.as_deref(), &json_bytes(&t)?)
}

fn cmd_secret_share(a: &SecretShareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cc = match (a.c2, a.c) {
        (Some(c2), _) if c2.is_finite() && c2 >= 0.0 => c2.sqrt(),
        (Some(c2), _) => return Err(CliError::Domain(crate::Error::Domain(format!("c² = {c2} must be non-negative")))),
        (None, Some(cc)) => cc,
        (None, None) => return usage("one of --c2 or --c is required"),
    };
    let alice = match a.alice.as_str() {
        "plus" | "+" => HadamardOutcome::Plus,
        "minus" | "-" => HadamardOutcome::Minus,
        other => return usage(format!("--alice must be plus or minus, got '{other}'")),
    };
    let run = protocols::secret_share_run(cc, a.bit, alice)?;
    let witness = match a.lambda1 {
        Some(l) => Some(protocols::secret_share_witness_checks(cc, l)?),
        None => None,
    };
    let montecarlo = match a.sampling.montecarlo {
        Some(n) => Some(protocols::secret_share_monte_carlo(cc, n, a.sampling.seed)?),
        None => None,
    };
    let t = SecretShareTranscript { protocol: "secret_share", run, witness, montecarlo };
    emit(out, a.out.as_deref(), &json_bytes(&t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> Result<String, CliError> {
        let mut buf = Vec::new();
        run(std::iter::once("entkit").chain(args.iter().copied()), &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.5), "0.5");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig(123456.789), "123456.789");
        assert_eq!(format_sig(1.5e-7), "1.5e-07");
        assert_eq!(format_sig(2.5e13), "2.5e+13");
        assert_eq!(format_sig(0.9999999999999), "1");
        assert_eq!(format_sig(1e-5), "0.00001");
    }

    #[test]
    fn state_spec_grammar() {
        assert_eq!(parse_state_spec("werner:F=0.75").unwrap(), StateSpec::Mixed(MixedFamily::Werner { f: 0.75 }));
        assert_eq!(parse_state_spec("bell:1").unwrap(), StateSpec::Pure(PureFamily::Bell { k: 1 }));
        assert_eq!(parse_state_spec("bell:k=4").unwrap(), StateSpec::Pure(PureFamily::Bell { k: 4 }));
        assert_eq!(parse_state_spec("ghz3").unwrap(), StateSpec::Pure(PureFamily::Ghz3));
        assert!(matches!(parse_state_spec("werner"), Err(CliError::Usage(_))));
        assert!(matches!(parse_state_spec("werner:F=abc"), Err(CliError::Usage(_))));
        assert!(matches!(parse_state_spec("werner:F=0.5,q=1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_state_spec("bell:1.5"), Err(CliError::Usage(_))));
        assert!(matches!(parse_state_spec("nope:x=1"), Err(CliError::Usage(_))));
        // Parses fine; the domain check happens when the state is built.
        let s = parse_state_spec("werner:F=0.1").unwrap();
        assert!(s.density().is_err());
    }

    #[test]
    fn measure_examples() {
        assert_eq!(run_str(&["measure", "--state", "werner:F=0.75", "--kind", "concurrence"]).unwrap(), "0.5\n");
        assert_eq!(run_str(&["measure", "--state", "bell:1", "--kind", "negativity"]).unwrap(), "1\n");
        assert_eq!(run_str(&["measure", "--state", "nmems:p=0.3", "--kind", "concurrence"]).unwrap(), "0\n");
    }

    #[test]
    fn exit_code_classes() {
        let e = run_str(&["measure", "--state", "werner:F=0.1", "--kind", "concurrence"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_DOMAIN);
        let e = run_str(&["measure", "--state", "werner:F=0.5", "--kind", "bogus"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        let e = run_str(&["figure", "9.9"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        let e = run_str(&["figure", "3.1", "--steps", "1"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        let e = run_str(&["protocol", "secret-share", "--c2", "0.2"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_DOMAIN);
        let e = run_str(&["frobnicate"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        assert!(configure_threads(Some("zero")).is_err());
        assert!(configure_threads(Some("0")).is_err());
    }

    #[test]
    fn matrix_json_input() {
        let text = "[[[0.5,0],[0,0],[0,0],[0.5,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0.5,0],[0,0],[0,0],[0.5,0]]]";
        let rho = parse_matrix_json(text, None).unwrap();
        assert_eq!(rho.dims(), &[2, 2]);
        assert!((measures::concurrence(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(parse_matrix_json("[[1,2]]", None), Err(CliError::Usage(_))));
        assert!(matches!(parse_matrix_json(text, Some(&[3, 3])), Err(CliError::Usage(_))));
        let not_psd = "[[[1,0],[2,0]],[[2,0],[0,0]]]";
        assert!(matches!(parse_matrix_json(not_psd, None), Err(CliError::Domain(_))));
    }

    #[test]
    fn every_figure_builds_on_a_coarse_grid() {
        for id in FIGURE_IDS {
            let t = figure_table(id, 3).unwrap();
            assert!(!t.rows.is_empty(), "{id}");
            assert!(t.rows.iter().all(|r| r.len() == t.columns.len()), "{id}");
            assert!(t.rows.iter().flatten().all(|x| x.is_finite()), "{id}");
        }
    }

    #[test]
    fn wei_sweep_member_has_the_requested_m() {
        for g in [0.5, 0.7, 1.0] {
            let rho = statezoo::make_mixed(wei_sweep_member(g)).unwrap();
            assert!((channel::m_value(&rho).unwrap() - 2.0 * g * g).abs() < 1e-12);
        }
        let w = statezoo::werner(werner_fraction_for_m(1.3)).unwrap();
        assert!((channel::m_value(&w).unwrap() - 1.3).abs() < 1e-12);
    }
}
