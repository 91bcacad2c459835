//! Command-line front end. Every command computes its full output before
//! anything is written; `main` only prints or stores the returned text.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::hull::{convex_combine_members, decompose, extreme_point, recompose};
use crate::io::{to_json, FunctionFile, OracleReport, ReportFile, WeightsFile};
use crate::membership::{is_member, verify_on_grid};
use crate::operators::{
    apply_h1, apply_h2, apply_im_closed, check_h1, check_h2, h1_factor_discrepancy,
    AGREEMENT_TOLERANCE,
};
use crate::random::{random_series, rescale_to_phi};
use crate::series::{DEFAULT_MAX_TRUNC, HARD_MAX_TRUNC};
use crate::{ClassParams, Complex64, Grid, H1Factor, H1Param, H2Param, ImOrder, Series};

pub const MAX_TRUNC_ENV: &str = "FPGFT_MAX_TRUNC";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NON_MEMBER: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fpgft",
    version,
    about = "Membership, extreme points and operators for M_w(A, B, m)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient membership test, optionally with grid sampling of the ratio condition.
    Membership(MembershipArgs),
    /// Apply I^m, H1 or H2 to a function file.
    Apply(ApplyArgs),
    /// Emit the extreme point f_n.
    Extreme(ExtremeArgs),
    /// Barycentric weights of a member over the extreme points.
    Decompose(DecomposeArgs),
    /// Rebuild a function from barycentric weights.
    Recompose(RecomposeArgs),
    /// Convex combination of member files.
    Combine(CombineArgs),
    /// Parameter sweep over (A, B, m) cells, CSV output.
    Sweep(SweepArgs),
    /// Seeded random function file.
    GenRandom(GenRandomArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ClassArgs {
    #[arg(long = "a", allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long = "b", allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long = "m")]
    pub m: u32,
}

impl ClassArgs {
    fn params(&self) -> Result<ClassParams, Failure> {
        Ok(ClassParams::new(self.a, self.b, ImOrder::new(self.m)?)?)
    }
}

#[derive(Args, Debug)]
pub struct MembershipArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub class: ClassArgs,
    /// Also sample the ratio condition on a polar grid.
    #[arg(long)]
    pub grid: bool,
    #[arg(long, value_delimiter = ',', default_values_t = crate::membership::DEFAULT_RADII)]
    pub radii: Vec<f64>,
    #[arg(long, default_value_t = crate::membership::DEFAULT_ANGLES)]
    pub angles: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Im,
    H1,
    H2,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub op: OpKind,
    /// m for Im, gamma for H1, C for H2.
    #[arg(long, allow_hyphen_values = true)]
    pub param: f64,
    /// Use the published 1/(gamma+n) multiplier for H1.
    #[arg(long)]
    pub paper_coeff: bool,
    /// Compare with the quadrature oracle at this point z ("re,im").
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub oracle_check: Option<Complex64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExtremeArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub class: ClassArgs,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub w: Complex64,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub class: ClassArgs,
}

#[derive(Args, Debug)]
pub struct RecomposeArgs {
    pub weights: PathBuf,
    #[command(flatten)]
    pub class: ClassArgs,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub w: Complex64,
}

#[derive(Args, Debug)]
pub struct CombineArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub weights: Vec<f64>,
    #[command(flatten)]
    pub class: ClassArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub spec: PathBuf,
}

#[derive(Args, Debug)]
pub struct GenRandomArgs {
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub class: ClassArgs,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub trunc: u32,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub w: Complex64,
    /// Target phi as a fraction of the bound; drawn from U[0, 1] when absent.
    #[arg(long)]
    pub phi_fraction: Option<f64>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

/// Range `start..=stop` split into `steps` equally spaced values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            s => (0..s)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (s - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepSource {
    /// One function file for every cell (path relative to the spec file).
    File(PathBuf),
    /// The extreme point f_n built from each cell's own parameters.
    Extreme {
        n: u32,
        k: u32,
        #[serde(default)]
        w: [f64; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub radii: Vec<f64>,
    pub angles: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub a: Range,
    pub b: Range,
    pub m: Vec<u32>,
    pub source: SweepSource,
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub file: Option<(PathBuf, String)>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            file: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotAMember { .. } | Error::InputNotMember { .. } => EXIT_NON_MEMBER,
            ref e if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Truncation cap from `FPGFT_MAX_TRUNC`, defaulting to 64.
pub fn max_trunc_from_env() -> Result<u32, Failure> {
    match std::env::var(MAX_TRUNC_ENV) {
        Err(_) => Ok(DEFAULT_MAX_TRUNC),
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(n) if (1..=HARD_MAX_TRUNC).contains(&n) => Ok(n),
            _ => Err(Failure::input(format!(
                "{MAX_TRUNC_ENV} must be an integer in 1..={HARD_MAX_TRUNC}, got {v:?}"
            ))),
        },
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_function(path: &Path, cap: u32) -> Result<Series, Failure> {
    let file: FunctionFile = serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    file.to_series(cap)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn check_cap(f: &Series, cap: u32) -> Result<(), Failure> {
    if f.trunc() > cap {
        return Err(Error::TruncTooLarge {
            trunc: f.trunc(),
            cap,
        }
        .into());
    }
    Ok(())
}

fn function_json(f: &Series) -> String {
    to_json(&FunctionFile::from_series(f))
}

pub fn execute(cli: &Cli, cap: u32) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Membership(a) => membership(a, cap),
        Command::Apply(a) => apply(a, cap),
        Command::Extreme(a) => {
            let p = a.class.params()?;
            let f = extreme_point(a.n, &p, a.w, a.k)?;
            check_cap(&f, cap)?;
            Ok(Outcome::ok(function_json(&f)))
        }
        Command::Decompose(a) => {
            let p = a.class.params()?;
            let f = load_function(&a.file, cap)?;
            let ws = decompose(&f, &p)?;
            Ok(Outcome::ok(to_json(&WeightsFile::from_weights(&ws))))
        }
        Command::Recompose(a) => {
            let p = a.class.params()?;
            let file: WeightsFile = serde_json::from_str(&read_text(&a.weights)?)
                .map_err(|e| Failure::input(format!("{}: {e}", a.weights.display())))?;
            let ws = file.to_weights(a.k)?;
            let f = recompose(&ws, &p, a.w, a.k)?;
            check_cap(&f, cap)?;
            Ok(Outcome::ok(function_json(&f)))
        }
        Command::Combine(a) => {
            let p = a.class.params()?;
            let fs = a
                .files
                .iter()
                .map(|path| load_function(path, cap))
                .collect::<Result<Vec<_>, _>>()?;
            let (f, report) = convex_combine_members(&fs, &a.weights, &p)?;
            let out = CombineOutput {
                function: FunctionFile::from_series(&f),
                report: ReportFile::new(&report, None),
            };
            Ok(Outcome::ok(to_json(&out)))
        }
        Command::Sweep(a) => sweep(&a.spec, cap),
        Command::GenRandom(a) => {
            let p = a.class.params()?;
            if a.trunc < a.k || a.trunc > cap {
                return Err(Failure::input(format!(
                    "trunc must lie in [k, {cap}], got {}",
                    a.trunc
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let fraction = match a.phi_fraction {
                Some(u) if u.is_finite() && u >= 0.0 => u,
                Some(u) => {
                    return Err(Failure::input(format!(
                        "phi fraction must be >= 0, got {u}"
                    )))
                }
                None => rand::Rng::gen(&mut rng),
            };
            let f = random_series(&mut rng, a.w, a.k, a.trunc)?;
            let f = rescale_to_phi(&f, &p, fraction)?;
            Ok(Outcome::ok(function_json(&f)))
        }
    }
}

#[derive(Serialize)]
struct CombineOutput {
    function: FunctionFile,
    report: ReportFile,
}

fn membership(a: &MembershipArgs, cap: u32) -> Result<Outcome, Failure> {
    let p = a.class.params()?;
    let f = load_function(&a.file, cap)?;
    let report = is_member(&f, &p)?;
    let grid = if a.grid {
        let g = Grid::new(a.radii.clone(), a.angles)?;
        Some(verify_on_grid(&f, &p, &g)?)
    } else {
        None
    };
    Ok(Outcome {
        code: if report.member {
            EXIT_OK
        } else {
            EXIT_NON_MEMBER
        },
        stdout: to_json(&ReportFile::new(&report, grid.as_ref())),
        file: None,
    })
}

fn apply(a: &ApplyArgs, cap: u32) -> Result<Outcome, Failure> {
    let f = load_function(&a.file, cap)?;
    if a.paper_coeff && a.op != OpKind::H1 {
        return Err(Failure::input("--paper-coeff only applies to H1"));
    }
    let factor = if a.paper_coeff {
        H1Factor::PaperStated
    } else {
        H1Factor::Derived
    };
    let (g, oracle) = match a.op {
        OpKind::Im => {
            if a.oracle_check.is_some() {
                return Err(Failure::input("--oracle-check applies to H1 and H2 only"));
            }
            if a.param < 0.0 || a.param.fract() != 0.0 || a.param > u32::MAX as f64 {
                return Err(Failure::input(format!(
                    "m must be a nonnegative integer, got {}",
                    a.param
                )));
            }
            (apply_im_closed(&f, ImOrder::new(a.param as u32)?)?, None)
        }
        OpKind::H1 => {
            let p = H1Param::new(a.param)?;
            let report = match a.oracle_check {
                None => None,
                Some(z) => {
                    let chk = check_h1(&f, p, factor, z)?;
                    let label = if a.paper_coeff { "paper" } else { "derived" };
                    let mut r = OracleReport::new("H1", Some(label), &chk, AGREEMENT_TOLERANCE);
                    if a.paper_coeff {
                        let predicted = h1_factor_discrepancy(&f, p, z);
                        let actual = chk.oracle - chk.transform;
                        r.predicted_diff = Some([predicted.re, predicted.im]);
                        r.prediction_rel_error =
                            Some((actual - predicted).norm() / predicted.norm());
                    }
                    Some(r)
                }
            };
            (apply_h1(&f, p, factor), report)
        }
        OpKind::H2 => {
            let p = H2Param::new(a.param)?;
            let report = match a.oracle_check {
                None => None,
                Some(z) => {
                    let chk = check_h2(&f, p, z)?;
                    Some(OracleReport::new("H2", None, &chk, AGREEMENT_TOLERANCE))
                }
            };
            (apply_h2(&f, p), report)
        }
    };
    let body = function_json(&g);
    let report = oracle.as_ref().map(to_json).unwrap_or_default();
    // A derived-factor disagreement means the numerics failed; the stated
    // factor is expected to disagree.
    let code = match &oracle {
        Some(r) if !r.agrees && !a.paper_coeff => EXIT_NUMERICAL,
        _ => EXIT_OK,
    };
    Ok(match &a.out {
        Some(path) => Outcome {
            code,
            stdout: report,
            file: Some((path.clone(), body)),
        },
        None => Outcome {
            code,
            stdout: body + &report,
            file: None,
        },
    })
}

const SWEEP_HEADER: [&str; 12] = [
    "A",
    "B",
    "m",
    "phi",
    "bound",
    "margin",
    "member",
    "worst_ratio",
    "grid_passes",
    "grid_failures",
    "grid_errors",
    "skipped",
];

fn sweep(spec_path: &Path, cap: u32) -> Result<Outcome, Failure> {
    let spec: SweepSpec = serde_json::from_str(&read_text(spec_path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", spec_path.display())))?;
    let fixed = match &spec.source {
        SweepSource::File(rel) => {
            let base = spec_path.parent().unwrap_or_else(|| Path::new("."));
            Some(load_function(&base.join(rel), cap)?)
        }
        SweepSource::Extreme { .. } => None,
    };
    let grid = match &spec.grid {
        Some(g) => Some(Grid::new(g.radii.clone(), g.angles)?),
        None => None,
    };

    let mut cells = Vec::new();
    for a in spec.a.values() {
        for b in spec.b.values() {
            for &m in &spec.m {
                cells.push((a, b, m));
            }
        }
    }
    let rows: Vec<Result<Vec<String>, Failure>> = cells
        .par_iter()
        .map(|&(a, b, m)| sweep_cell(a, b, m, &spec.source, fixed.as_ref(), grid.as_ref(), cap))
        .collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::input(e.to_string());
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row?).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::input(e.to_string()))?;
    Ok(Outcome::ok(
        String::from_utf8(bytes).expect("csv output is utf-8"),
    ))
}

fn sweep_cell(
    a: f64,
    b: f64,
    m: u32,
    source: &SweepSource,
    fixed: Option<&Series>,
    grid: Option<&Grid>,
    cap: u32,
) -> Result<Vec<String>, Failure> {
    let mut row = vec![a.to_string(), b.to_string(), m.to_string()];
    let skipped = |mut row: Vec<String>, reason: String| {
        row.extend(std::iter::repeat_n(String::new(), 8));
        row.push(reason);
        row
    };
    let p = match ImOrder::new(m).and_then(|m| ClassParams::new(a, b, m)) {
        Ok(p) => p,
        Err(e) => return Ok(skipped(row, e.to_string())),
    };
    let f = match (source, fixed) {
        (_, Some(f)) => f.clone(),
        (SweepSource::Extreme { n, k, w }, None) => {
            match extreme_point(*n, &p, Complex64::new(w[0], w[1]), *k) {
                Ok(f) if f.trunc() <= cap => f,
                Ok(f) => {
                    return Ok(skipped(
                        row,
                        Error::TruncTooLarge {
                            trunc: f.trunc(),
                            cap,
                        }
                        .to_string(),
                    ))
                }
                Err(e) => return Ok(skipped(row, e.to_string())),
            }
        }
        (SweepSource::File(_), None) => unreachable!("file source is loaded up front"),
    };
    let report = is_member(&f, &p)?;
    row.push(report.phi.to_string());
    row.push(report.bound.to_string());
    row.push(report.margin.to_string());
    row.push(report.member.to_string());
    match grid {
        Some(g) => {
            let gr = verify_on_grid(&f, &p, g)?;
            row.push(gr.worst.map(|s| s.ratio.to_string()).unwrap_or_default());
            row.push(gr.passes.to_string());
            row.push(gr.failures.to_string());
            row.push(gr.errors.to_string());
        }
        None => row.extend(std::iter::repeat_n(String::new(), 4)),
    }
    row.push(String::new());
    Ok(row)
}

/// Parses arguments, runs the command and performs the output. Returns the
/// process exit code.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = max_trunc_from_env().and_then(|cap| execute(&cli, cap));
    match result {
        Ok(outcome) => {
            if let Some((path, body)) = &outcome.file {
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            print!("{}", outcome.stdout);
            outcome.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
