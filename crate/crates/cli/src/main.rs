//! `spectral-lp`: spectral LP bounds on code size from the command line.
//!
//! Every command prints one JSON record (`schema_version`, `command`, `inputs`,
//! `results`, `timings_ms`) unless `--format csv` is requested. Exit codes:
//! 0 on success, 1 on invalid input, 2 when no bound or certificate results.

mod output;
mod range;

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spectral_lp::certificate::{certificate_at_optimum, DEFAULT_GRID_POINTS};
use spectral_lp::spectral::{all_zeros, largest_zero};
use spectral_lp::{
    bound_sweep, build_unchecked, hamming_rate, johnson_rate, projective_real_rate, sphere_rate, spectral_bound,
    verify_certificate, BoundOptions, BoundOutcome, BoundQuery, Certificate, CertificateOptions, DistanceParam,
    Family, FamilySpec, Field, RateArgument, RatePoint, VerificationReport,
};

use output::{opt, opt_num, print_json, sig, write_csv};

#[derive(Parser)]
#[command(name = "spectral-lp", version, about = "Spectral linear-programming upper bounds on code size")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Best spectral bound for one code-size question.
    Bound(BoundArgs),
    /// Bounds over a range of distances (and optionally lengths).
    Table(TableArgs),
    /// Asymptotic rate curves.
    Rate(RateArgs),
    /// Zeros of the orthogonal polynomial p_{k+1}.
    Zeros(ZerosArgs),
    /// Build and verify an explicit LP certificate.
    Certify(CertifyArgs),
    /// Re-verify a certificate produced by `certify`.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Space {
    Hamming,
    Johnson,
    Sphere,
    ProjectiveReal,
    ProjectiveComplex,
    ProjectiveQuaternion,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Serialize)]
struct SpaceArgs {
    /// Metric space.
    #[arg(long)]
    space: Space,
    /// Length (Hamming, Johnson) or dimension (sphere in R^n, projective over F^n).
    #[arg(short = 'n', long = "n")]
    n: u32,
    /// Weight for Johnson space, at most n/2.
    #[arg(short = 'w', long = "w")]
    w: Option<u32>,
}

#[derive(Args, Serialize)]
struct FormatArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Significant digits in CSV output.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
}

#[derive(Args, Serialize)]
struct EngineArgs {
    /// Largest degree k considered.
    #[arg(long)]
    k_cap: Option<usize>,
    /// Absolute eigenvalue tolerance (full double resolution if omitted).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true, group(ArgGroup::new("distance").required(true).args(["d", "t"])))]
struct BoundArgs {
    #[command(flatten)]
    #[serde(flatten)]
    space: SpaceArgs,
    /// Minimum distance (Hamming), or half the minimum distance (Johnson).
    #[arg(short = 'd', long = "d")]
    d: Option<u32>,
    /// Largest inner product (sphere), or largest |inner product| (projective).
    #[arg(short = 't', long = "t")]
    t: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    engine: EngineArgs,
    /// Include every degree of the window (JSON only).
    #[arg(long)]
    per_k: bool,
    #[command(flatten)]
    #[serde(flatten)]
    format: FormatArgs,
}

#[derive(Args, Serialize)]
#[command(group(ArgGroup::new("distances").required(true).args(["d_range", "t_range"])))]
struct TableArgs {
    #[command(flatten)]
    #[serde(flatten)]
    space: SpaceArgs,
    /// Lengths start:stop[:step]; overrides -n.
    #[arg(long)]
    n_range: Option<String>,
    /// Distances start:stop[:step].
    #[arg(long)]
    d_range: Option<String>,
    /// Inner products start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    t_range: Option<String>,
    /// Add (1/n) log2 of the bound.
    #[arg(long)]
    rate: bool,
    #[command(flatten)]
    #[serde(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    #[serde(flatten)]
    format: FormatArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Curve {
    /// Binary codes, relative distance delta.
    Mrrw1,
    /// Constant-weight codes, relative weight omega, relative distance 2 delta.
    Mrrw2,
    /// Spherical codes, largest inner product t.
    KlSphere,
    /// Real projective codes, largest |inner product| t.
    KlProjectiveReal,
}

#[derive(Args, Serialize)]
struct RateArgs {
    #[arg(long, value_enum)]
    curve: Curve,
    /// Value or start:stop:step (mrrw1, mrrw2).
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Relative weight (mrrw2).
    #[arg(long)]
    omega: Option<f64>,
    /// Value or start:stop:step (kl-sphere, kl-projective-real).
    #[arg(short = 't', long = "t", allow_hyphen_values = true)]
    t: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    format: FormatArgs,
}

#[derive(Args, Serialize)]
struct ZerosArgs {
    #[command(flatten)]
    #[serde(flatten)]
    space: SpaceArgs,
    /// Degree k; the zeros reported are those of p_{k+1}.
    #[arg(short = 'k', long = "k")]
    k: usize,
    /// All zeros, not only the largest.
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    #[serde(flatten)]
    format: FormatArgs,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true, group(ArgGroup::new("distance").required(true).args(["d", "t"])))]
struct CertifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    space: SpaceArgs,
    #[arg(short = 'd', long = "d")]
    d: Option<u32>,
    #[arg(short = 't', long = "t")]
    t: Option<f64>,
    /// Degree of the certificate (the engine's optimum if omitted).
    #[arg(short = 'k', long = "k")]
    k: Option<usize>,
    /// Perturbation of the last diagonal entry (optimal if omitted).
    #[arg(long)]
    rho: Option<f64>,
    /// Grid size for the pointwise checks on continuous spaces.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    #[command(flatten)]
    #[serde(flatten)]
    engine: EngineArgs,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Certificate JSON (a `certify` record or a bare certificate); `-` reads stdin.
    path: String,
    /// Grid size (the stored one if omitted).
    #[arg(long)]
    grid: Option<usize>,
}

/// Exit status of a command that ran.
type Outcome = Result<u8, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Bound(a) => cmd_bound(&a),
        Command::Table(a) => cmd_table(&a),
        Command::Rate(a) => cmd_rate(&a),
        Command::Zeros(a) => cmd_zeros(&a),
        Command::Certify(a) => cmd_certify(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn family_spec(space: Space, n: u32, w: Option<u32>) -> Result<FamilySpec, String> {
    if w.is_some() && !matches!(space, Space::Johnson) {
        return Err("-w applies to the johnson space only".into());
    }
    Ok(match space {
        Space::Hamming => FamilySpec::Hamming { n },
        Space::Johnson => FamilySpec::Johnson { n, w: w.ok_or("johnson space needs a weight -w")? },
        Space::Sphere => FamilySpec::Sphere { n },
        Space::ProjectiveReal => FamilySpec::Projective { n, field: Field::Real },
        Space::ProjectiveComplex => FamilySpec::Projective { n, field: Field::Complex },
        Space::ProjectiveQuaternion => FamilySpec::Projective { n, field: Field::Quaternion },
    })
}

fn query(space: Space, n: u32, w: Option<u32>, d: Option<u32>, t: Option<f64>) -> Result<BoundQuery, String> {
    let family = family_spec(space, n, w)?;
    let distance = match (space, d, t) {
        (Space::Hamming | Space::Johnson, Some(d), None) => DistanceParam::Distance(d),
        (Space::Hamming | Space::Johnson, _, _) => return Err(format!("{space:?} space takes -d, not -t").to_lowercase()),
        (_, None, Some(t)) => DistanceParam::InnerProduct(t),
        _ => return Err(format!("{space:?} space takes -t, not -d").to_lowercase()),
    };
    Ok(BoundQuery { family, distance })
}

fn bound_options(e: &EngineArgs, per_k: bool) -> BoundOptions {
    BoundOptions { k_cap: e.k_cap, tol: e.tol, per_k }
}

const BOUND_HEADER: [&str; 14] = [
    "space", "n", "w", "d", "t", "status", "k_star", "k_min", "k_max", "lambda_k", "threshold", "p1_tau0",
    "bound_log2", "bound_value",
];

fn bound_row(space: Space, q: &BoundQuery, out: &BoundOutcome, p: usize) -> Vec<String> {
    let (n, w) = match q.family {
        FamilySpec::Hamming { n } | FamilySpec::Sphere { n } | FamilySpec::Projective { n, .. } => (n, None),
        FamilySpec::Johnson { n, w } => (n, Some(w)),
        FamilySpec::Jacobi { .. } => (0, None),
    };
    let (d, t) = match q.distance {
        DistanceParam::Distance(d) => (Some(d), None),
        DistanceParam::InnerProduct(t) => (None, Some(t)),
    };
    let mut row = vec![
        serde_json::to_value(space).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default(),
        n.to_string(),
        opt(w),
        opt(d),
        opt_num(t, 17),
    ];
    match out {
        BoundOutcome::Bound(b) => row.extend([
            "bound".into(),
            b.k_star.to_string(),
            b.k_window.k_min.to_string(),
            b.k_window.k_max.to_string(),
            sig(b.lambda_k, p),
            sig(b.threshold, p),
            sig(b.p1_tau0, p),
            sig(b.bound_log2, p),
            opt_num(b.bound_value, p),
        ]),
        BoundOutcome::NoBound(nb) => row.extend([
            "no_bound".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            sig(nb.threshold, p),
            String::new(),
            String::new(),
            String::new(),
        ]),
    }
    row
}

fn cmd_bound(a: &BoundArgs) -> Outcome {
    let start = Instant::now();
    let q = query(a.space.space, a.space.n, a.space.w, a.d, a.t)?;
    let out = spectral_bound(&q, &bound_options(&a.engine, a.per_k)).map_err(|e| e.to_string())?;
    let code = if out.bound().is_some() { 0 } else { 2 };
    match a.format.format {
        Format::Json => print_json("bound", a, &out, elapsed_ms(start)),
        Format::Csv => write_csv(&BOUND_HEADER, &[bound_row(a.space.space, &q, &out, a.format.precision as usize)])?,
    }
    if let BoundOutcome::NoBound(nb) = &out {
        eprintln!("no bound: {:?} (threshold {}, reached {} at k_cap {})", nb.reason, nb.threshold, nb.lambda_at_cap, nb.k_cap);
    }
    Ok(code)
}

#[derive(Serialize)]
struct TableRow {
    query: BoundQuery,
    outcome: Option<BoundOutcome>,
    /// `(1/n) bound_log2`, with `--rate`.
    #[serde(skip_serializing_if = "Option::is_none")]
    rate: Option<f64>,
    error: Option<String>,
}

fn cmd_table(a: &TableArgs) -> Outcome {
    let start = Instant::now();
    let ns = match &a.n_range {
        Some(r) => range::parse_u32(r)?,
        None => vec![a.space.n],
    };
    let mut queries = Vec::new();
    for &n in &ns {
        if let Some(r) = &a.d_range {
            for d in range::parse_u32(r)? {
                queries.push(query(a.space.space, n, a.space.w, Some(d), None)?);
            }
        } else if let Some(r) = &a.t_range {
            for t in range::parse_f64(r)? {
                queries.push(query(a.space.space, n, a.space.w, None, Some(t))?);
            }
        }
    }
    let results = bound_sweep(&queries, &bound_options(&a.engine, false));
    let rows: Vec<TableRow> = results
        .into_iter()
        .map(|(q, r)| match r {
            Ok(out) => {
                let n = Family::new(q.family).ok().and_then(|f| f.n()).unwrap_or(1);
                let rate = if a.rate { out.bound().map(|b| b.bound_log2 / n as f64) } else { None };
                TableRow { query: q, outcome: Some(out), rate, error: None }
            }
            Err(e) => TableRow { query: q, outcome: None, rate: None, error: Some(e.to_string()) },
        })
        .collect();
    let any_ok = rows.iter().any(|r| r.outcome.is_some());
    match a.format.format {
        Format::Json => print_json("table", a, &rows, elapsed_ms(start)),
        Format::Csv => {
            let p = a.format.precision as usize;
            let mut header = BOUND_HEADER.to_vec();
            if a.rate {
                header.push("rate");
            }
            header.push("error");
            let mut csv_rows = Vec::new();
            for r in &rows {
                let mut row = match &r.outcome {
                    Some(out) => bound_row(a.space.space, &r.query, out, p),
                    None => {
                        let empty = BoundOutcome::NoBound(spectral_lp::NoBound {
                            reason: spectral_lp::NoBoundReason::ThresholdNotReached,
                            threshold: f64::NAN,
                            k_cap: 0,
                            lambda_at_cap: f64::NAN,
                        });
                        let mut row = bound_row(a.space.space, &r.query, &empty, p);
                        row[5] = "error".into();
                        row[10] = String::new();
                        row
                    }
                };
                if a.rate {
                    row.push(opt_num(r.rate, p));
                }
                row.push(r.error.clone().unwrap_or_default());
                csv_rows.push(row);
            }
            write_csv(&header, &csv_rows)?;
        }
    }
    Ok(if any_ok { 0 } else { 1 })
}

#[derive(Serialize)]
#[serde(untagged)]
enum RateRow {
    Point(RatePoint),
    Error { argument: RateArgument, error: String },
}

fn cmd_rate(a: &RateArgs) -> Outcome {
    let start = Instant::now();
    let grid = |name: &str, v: &Option<String>| -> Result<Vec<f64>, String> {
        range::parse_f64(v.as_deref().ok_or_else(|| format!("curve {:?} needs --{name}", a.curve).to_lowercase())?)
    };
    let mut rows = Vec::new();
    let mut push = |arg: RateArgument, r: spectral_lp::Result<RatePoint>| {
        rows.push(match r {
            Ok(p) => RateRow::Point(p),
            Err(e) => RateRow::Error { argument: arg, error: e.to_string() },
        })
    };
    match a.curve {
        Curve::Mrrw1 => {
            for d in grid("delta", &a.delta)? {
                push(RateArgument::Scalar(d), hamming_rate(d));
            }
        }
        Curve::Mrrw2 => {
            let omega = a.omega.ok_or("curve mrrw2 needs --omega")?;
            for d in grid("delta", &a.delta)? {
                push(RateArgument::Pair { omega, delta: d }, johnson_rate(omega, d));
            }
        }
        Curve::KlSphere => {
            for t in grid("t", &a.t)? {
                push(RateArgument::Scalar(t), sphere_rate(t));
            }
        }
        Curve::KlProjectiveReal => {
            for t in grid("t", &a.t)? {
                push(RateArgument::Scalar(t), projective_real_rate(t));
            }
        }
    }
    let any_ok = rows.iter().any(|r| matches!(r, RateRow::Point(_)));
    match a.format.format {
        Format::Json => print_json("rate", a, &rows, elapsed_ms(start)),
        Format::Csv => {
            let p = a.format.precision as usize;
            let split = |arg: &RateArgument| match *arg {
                RateArgument::Scalar(x) => (None, x),
                RateArgument::Pair { omega, delta } => (Some(omega), delta),
            };
            let csv_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| match r {
                    RateRow::Point(pt) => {
                        let (omega, x) = split(&pt.argument);
                        vec![opt_num(omega, 17), sig(x, 17), sig(pt.auxiliary, p), sig(pt.rate, p), pt.boundary.to_string(), String::new()]
                    }
                    RateRow::Error { argument, error } => {
                        let (omega, x) = split(argument);
                        vec![opt_num(omega, 17), sig(x, 17), String::new(), String::new(), String::new(), error.clone()]
                    }
                })
                .collect();
            write_csv(&["omega", "argument", "auxiliary", "rate", "boundary", "error"], &csv_rows)?;
        }
    }
    Ok(if any_ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct ZerosResult {
    /// Degree of the polynomial whose zeros are reported.
    degree: usize,
    largest_zero: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeros: Option<Vec<f64>>,
}

fn cmd_zeros(a: &ZerosArgs) -> Outcome {
    let start = Instant::now();
    let family = Family::new(family_spec(a.space.space, a.space.n, a.space.w)?).map_err(|e| e.to_string())?;
    let degree = a.k + 1;
    let largest = largest_zero(&family, degree).map_err(|e| e.to_string())?;
    let zeros = if a.all { Some(all_zeros(&family, degree).map_err(|e| e.to_string())?) } else { None };
    let res = ZerosResult { degree, largest_zero: largest, zeros };
    match a.format.format {
        Format::Json => print_json("zeros", a, &res, elapsed_ms(start)),
        Format::Csv => {
            let p = a.format.precision as usize;
            let all = res.zeros.clone().unwrap_or_else(|| vec![largest]);
            let rows: Vec<Vec<String>> =
                all.iter().enumerate().map(|(i, z)| vec![degree.to_string(), i.to_string(), sig(*z, p)]).collect();
            write_csv(&["degree", "index", "zero"], &rows)?;
        }
    }
    Ok(0)
}

fn report_failures(report: &VerificationReport) -> u8 {
    if report.all_passed {
        return 0;
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} (margin {}, tolerance {})", c.name, c.margin, c.tolerance);
    }
    2
}

fn cmd_certify(a: &CertifyArgs) -> Outcome {
    let start = Instant::now();
    let q = query(a.space.space, a.space.n, a.space.w, a.d, a.t)?;
    q.resolve().map_err(|e| e.to_string())?;
    let opts = CertificateOptions { rho: a.rho, grid_points: a.grid, tol: a.engine.tol, k_cap: a.engine.k_cap };
    let cert = match a.k {
        Some(k) => build_unchecked(&q, k, &opts),
        None => certificate_at_optimum(&q, &opts),
    };
    let cert = match cert {
        Ok(c) => c,
        Err(e @ (spectral_lp::Error::OutsideWindow { .. } | spectral_lp::Error::NegativeCoefficient { .. })) => {
            eprintln!("no certificate: {e}");
            return Ok(2);
        }
        Err(e) => return Err(e.to_string()),
    };
    print_json("certify", a, &cert, elapsed_ms(start));
    Ok(report_failures(&cert.checks))
}

#[derive(Serialize)]
struct VerifyResult {
    /// The report equals the one stored in the certificate.
    matches_stored: bool,
    report: VerificationReport,
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let start = Instant::now();
    let text = if a.path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
        s
    } else {
        std::fs::read_to_string(&a.path).map_err(|e| format!("{}: {e}", a.path))?
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("not JSON: {e}"))?;
    let body = match value.get("results") {
        Some(r) if value.get("command").and_then(|c| c.as_str()) == Some("certify") => r.clone(),
        Some(_) => return Err("record is not a certify record".into()),
        None => value,
    };
    let cert: Certificate = serde_json::from_value(body).map_err(|e| format!("not a certificate: {e}"))?;
    let report = verify_certificate(&cert, a.grid.unwrap_or(cert.checks.grid_points));
    let res = VerifyResult { matches_stored: report == cert.checks, report };
    let code = report_failures(&res.report);
    print_json("verify", a, &res, elapsed_ms(start));
    Ok(code)
}
