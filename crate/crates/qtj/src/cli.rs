//! The `qtj` command-line entry point: one subcommand per pipeline, JSON
//! envelopes by default, CSV projections on request, and a manifest binding
//! every run to its inputs. Exit codes: 0 success, 2 input error, 3 numeric
//! degeneracy.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::dioph::{cf_expand, cf_expand_heuristic, convergents, pair_quality, CFExpansion};
use crate::eisenstein::{automorphy_residual, partial_g, Mode};
use crate::foliation::{
    act, canonicalize_sign, reduce_modulus, slope_direction, FoliationPoint, Gl2Z, Modulus, Theta,
};
use crate::modular::{j_classical, j_quantum};
use crate::numerics::{
    decimal_digits, parse_decimal, parse_rational, BigReal, CValue, ExactComplex, QuadIrr,
    Rational, MIN_PRECISION,
};
use crate::report::{
    emit, input_hash, payload_digest, OutputFormat, ReportEnvelope, RunManifest, SCHEMA_VERSION,
};
use crate::schemes::{SchemeId, SetDescriptor};
use crate::weierstrass::{residual_series, ZSpec};

const DEFAULT_PRECISION: usize = 256;

#[derive(Parser, Debug)]
#[command(
    name = "qtj",
    version,
    about = "Finite-stage invariants of quantum tori"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Optional key=value config file supplying defaults (precision, out).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Working precision in bits (default: QTJ_PRECISION or 256).
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Output format: json (default) or csv.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction expansion and convergents of a slope.
    Cf {
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Partially summed Eisenstein series over an index set.
    Eisenstein {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        set: String,
        /// Slope, required when the set is a quantum window.
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        exact: bool,
    },
    /// Automorphy residuals over one or many matrices.
    Automorphy {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        set: String,
        #[arg(long)]
        theta: Option<String>,
        /// Explicit matrix a,b,c,d.
        #[arg(long)]
        matrix: Option<String>,
        /// Number of random unimodular matrices to draw instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_entry: i64,
        #[arg(long)]
        exact: bool,
    },
    /// Act on a moduli point and reduce the modulus.
    Orbit {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        reduce: bool,
    },
    /// Classical modular invariant from extrapolated box sums.
    Jclass {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        box_max: u64,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Quantum modular invariant over convergent windows.
    Jquant {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        mu: String,
        /// Stage list: `lo..hi` (inclusive) or comma-separated.
        #[arg(long)]
        stages: String,
        #[arg(long, default_value_t = 4)]
        window: usize,
    },
    /// Residuals of the cubic equation along a scheme.
    #[command(name = "weier-residual")]
    WeierResidual {
        #[arg(long)]
        mu: String,
        /// Evaluation point: complex literal or `t=<real>` on the slope line.
        #[arg(long)]
        z: String,
        /// `classical:<radii>` or `quantum:<theta>:<window>`.
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        stages: Option<String>,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }
}

fn numeric<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}

pub fn run_from_env() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    run(&argv, &mut std::io::stdout())
}

pub fn run(argv: &[String], out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, argv, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qtj: {}", e.message());
            e.code()
        }
    }
}

fn execute(cli: &Cli, argv: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let started = Instant::now();
    let (config, config_bytes) = load_config(cli.global.config.as_deref())?;
    let precision = resolve_precision(&cli.global, &config)?;
    let format = resolve_format(&cli.global, &config)?;
    let payload = build_payload(&cli.command, precision)?;
    let digest = payload_digest(&payload);
    let manifest = RunManifest {
        command: command_name(&cli.command).to_string(),
        argv: argv.to_vec(),
        config,
        precision,
        version: env!("CARGO_PKG_VERSION").to_string(),
        input_hash: input_hash(argv, &config_bytes),
        payload_digest: digest,
        wall_ms: started.elapsed().as_millis(),
    };
    let envelope = ReportEnvelope {
        schema_version: SCHEMA_VERSION,
        payload,
        manifest,
    };
    match &cli.global.output_file {
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|e| CliError::Io(e.to_string()))?;
            emit(&envelope, format, &mut f).map_err(numeric)?;
        }
        None => {
            emit(&envelope, format, out).map_err(numeric)?;
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cf { .. } => "cf",
        Command::Eisenstein { .. } => "eisenstein",
        Command::Automorphy { .. } => "automorphy",
        Command::Orbit { .. } => "orbit",
        Command::Jclass { .. } => "jclass",
        Command::Jquant { .. } => "jquant",
        Command::WeierResidual { .. } => "weier-residual",
    }
}

fn load_config(
    path: Option<&std::path::Path>,
) -> Result<(BTreeMap<String, String>, Vec<u8>), CliError> {
    let Some(path) = path else {
        return Ok((BTreeMap::new(), Vec::new()));
    };
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?;
    let text = String::from_utf8_lossy(&bytes);
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Input(format!("config line {} is not key=value", lineno + 1))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok((map, bytes))
}

fn resolve_precision(g: &GlobalArgs, config: &BTreeMap<String, String>) -> Result<usize, CliError> {
    let p = if let Some(p) = g.precision {
        p
    } else if let Some(p) = config.get("precision") {
        p.parse()
            .map_err(|_| CliError::Input(format!("bad precision in config: {p:?}")))?
    } else if let Ok(p) = std::env::var("QTJ_PRECISION") {
        p.parse()
            .map_err(|_| CliError::Input(format!("bad QTJ_PRECISION: {p:?}")))?
    } else {
        DEFAULT_PRECISION
    };
    if p < MIN_PRECISION {
        return Err(CliError::Input(format!(
            "precision {p} is below the minimum of {MIN_PRECISION} bits"
        )));
    }
    Ok(p)
}

fn resolve_format(
    g: &GlobalArgs,
    config: &BTreeMap<String, String>,
) -> Result<OutputFormat, CliError> {
    let name = g
        .out
        .clone()
        .or_else(|| config.get("out").cloned())
        .unwrap_or_else(|| "json".to_string());
    match name.as_str() {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        other => Err(CliError::Input(format!("unknown output format {other:?}"))),
    }
}

// ---------------------------------------------------------------- parsers

/// A slope given on the command line.
pub enum ParsedTheta {
    Exact(QuadIrr),
    /// Decimal literal: accepted, but expansions are flagged heuristic.
    Heuristic(Rational),
}

/// `quad:a:b:c:d`, `rat:p:q`, or a decimal literal (heuristic mode).
pub fn parse_theta(s: &str) -> Result<ParsedTheta, String> {
    if let Some(rest) = s.strip_prefix("quad:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("quad slope needs a:b:c:d, got {s:?}"));
        }
        let nums: Vec<BigInt> = parts
            .iter()
            .map(|p| {
                p.parse::<BigInt>()
                    .map_err(|_| format!("bad integer {p:?}"))
            })
            .collect::<Result<_, _>>()?;
        let d: u64 = parts[3]
            .parse()
            .map_err(|_| format!("bad radicand {:?}", parts[3]))?;
        let q = QuadIrr::new(nums[0].clone(), nums[1].clone(), nums[2].clone(), d)
            .map_err(|e| e.to_string())?;
        return Ok(ParsedTheta::Exact(q));
    }
    if let Some(rest) = s.strip_prefix("rat:") {
        let (p, q) = rest
            .split_once(':')
            .ok_or_else(|| format!("rat slope needs p:q, got {s:?}"))?;
        let r = parse_rational(&format!("{p}/{q}")).map_err(|e| e.to_string())?;
        return Ok(ParsedTheta::Exact(QuadIrr::from_rational(&r)));
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Ok(ParsedTheta::Heuristic(
            parse_decimal(s).map_err(|e| e.to_string())?,
        ));
    }
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    Ok(ParsedTheta::Exact(QuadIrr::from_rational(&r)))
}

fn require_exact_theta(s: &str) -> Result<QuadIrr, CliError> {
    match parse_theta(s).map_err(CliError::Input)? {
        ParsedTheta::Exact(q) => Ok(q),
        ParsedTheta::Heuristic(_) => Err(CliError::Input(
            "this pipeline needs an exact slope (quad:a:b:c:d or rat:p:q)".into(),
        )),
    }
}

/// One number: rational `p/q`, integer, or decimal literal.
fn parse_real_number(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if (s.contains('.') || s.contains(['e', 'E'])) && !s.contains('/') {
        parse_decimal(s).map_err(|e| e.to_string())
    } else {
        parse_rational(s).map_err(|e| e.to_string())
    }
}

/// Complex literal: `i`, `-i`, `2i`, `x+yi`, `x-yi`, `x` (rational or
/// decimal components).
pub fn parse_complex_components(s: &str) -> Result<(Rational, Rational), String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if !s.ends_with('i') {
        return Ok((parse_real_number(&s)?, Rational::from_integer(0.into())));
    }
    let body = &s[..s.len() - 1];
    // split at the last +/- that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx] as char;
        if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
            split = Some(idx);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let re = if re_str.is_empty() {
        Rational::from_integer(0.into())
    } else {
        parse_real_number(re_str)?
    };
    let im = match im_str {
        "" | "+" => Rational::from_integer(1.into()),
        "-" => Rational::from_integer((-1).into()),
        other => parse_real_number(other)?,
    };
    Ok((re, im))
}

/// Modulus: `i`, `x+yi`, or `gauss:<re>,<im>` with quadratic components
/// `a:b:c:d`.
pub fn parse_mu(s: &str) -> Result<Modulus, String> {
    if let Some(rest) = s.strip_prefix("gauss:") {
        let (re, im) = rest
            .split_once(',')
            .ok_or_else(|| format!("gauss modulus needs re,im quadratic parts, got {s:?}"))?;
        let quad = |part: &str| -> Result<QuadIrr, String> {
            let fields: Vec<&str> = part.split(':').collect();
            if fields.len() != 4 {
                return Err(format!("quadratic component needs a:b:c:d, got {part:?}"));
            }
            let a: BigInt = fields[0]
                .parse()
                .map_err(|_| format!("bad integer {:?}", fields[0]))?;
            let b: BigInt = fields[1]
                .parse()
                .map_err(|_| format!("bad integer {:?}", fields[1]))?;
            let c: BigInt = fields[2]
                .parse()
                .map_err(|_| format!("bad integer {:?}", fields[2]))?;
            let d: u64 = fields[3]
                .parse()
                .map_err(|_| format!("bad radicand {:?}", fields[3]))?;
            QuadIrr::new(a, b, c, d).map_err(|e| e.to_string())
        };
        let mu = ExactComplex::new(quad(re)?, quad(im)?);
        return Modulus::exact(mu).map_err(|e| e.to_string());
    }
    let (re, im) = parse_complex_components(s)?;
    let mu = ExactComplex::new(QuadIrr::from_rational(&re), QuadIrr::from_rational(&im));
    Modulus::exact(mu).map_err(|e| e.to_string())
}

/// Matrix `a,b,c,d` with determinant +-1.
pub fn parse_matrix(s: &str) -> Result<Gl2Z, String> {
    let parts: Vec<&str> = s
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .collect();
    if parts.len() != 4 {
        return Err(format!("matrix needs a,b,c,d, got {s:?}"));
    }
    let v: Vec<BigInt> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<BigInt>()
                .map_err(|_| format!("bad integer {p:?}"))
        })
        .collect::<Result<_, _>>()?;
    Gl2Z::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()).map_err(|e| e.to_string())
}

/// Set syntax: `box:N[:noorigin]`, `qwin:s:L[:pos][:enriched]`,
/// `explicit:m1,n1;m2,n2;...`, with prefixes `T[a,b,c,d]:` and
/// `shift[m0,n0]:`.
pub fn parse_set(s: &str, theta: Option<&QuadIrr>) -> Result<SetDescriptor, String> {
    if let Some(rest) = s.strip_prefix("T[") {
        let (mat, inner) = rest
            .split_once("]:")
            .ok_or_else(|| format!("transform prefix needs T[a,b,c,d]:, got {s:?}"))?;
        let a = parse_matrix(mat)?;
        return Ok(SetDescriptor::Transformed(
            a,
            Box::new(parse_set(inner, theta)?),
        ));
    }
    if let Some(rest) = s.strip_prefix("shift[") {
        let (pair, inner) = rest
            .split_once("]:")
            .ok_or_else(|| format!("shift prefix needs shift[m0,n0]:, got {s:?}"))?;
        let (m0, n0) = pair
            .split_once(',')
            .ok_or_else(|| format!("shift needs m0,n0, got {pair:?}"))?;
        let m0: BigInt = m0
            .trim()
            .parse()
            .map_err(|_| format!("bad integer {m0:?}"))?;
        let n0: BigInt = n0
            .trim()
            .parse()
            .map_err(|_| format!("bad integer {n0:?}"))?;
        return Ok(SetDescriptor::Translated(
            (m0, n0),
            Box::new(parse_set(inner, theta)?),
        ));
    }
    if let Some(rest) = s.strip_prefix("box:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let radius: u64 = parts[0]
            .parse()
            .map_err(|_| format!("bad radius {:?}", parts[0]))?;
        let mut include_origin = true;
        for flag in &parts[1..] {
            match *flag {
                "noorigin" => include_origin = false,
                other => return Err(format!("unknown box flag {other:?}")),
            }
        }
        return Ok(SetDescriptor::Box {
            radius,
            include_origin,
        });
    }
    if let Some(rest) = s.strip_prefix("qwin:") {
        let theta = theta.ok_or("quantum window needs --theta")?;
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() < 2 {
            return Err(format!("quantum window needs qwin:s:L, got {s:?}"));
        }
        let start: usize = parts[0]
            .parse()
            .map_err(|_| format!("bad start {:?}", parts[0]))?;
        let len: usize = parts[1]
            .parse()
            .map_err(|_| format!("bad length {:?}", parts[1]))?;
        let mut with_negation = true;
        let mut enriched = false;
        for flag in &parts[2..] {
            match *flag {
                "pos" => with_negation = false,
                "enriched" => enriched = true,
                other => return Err(format!("unknown window flag {other:?}")),
            }
        }
        return Ok(SetDescriptor::QuantumWindow {
            theta: theta.clone(),
            start,
            len,
            with_negation,
            enriched,
        });
    }
    if let Some(rest) = s.strip_prefix("explicit:") {
        let mut pairs = Vec::new();
        for chunk in rest.split(';').filter(|c| !c.is_empty()) {
            let (m, n) = chunk
                .split_once(',')
                .ok_or_else(|| format!("explicit pair needs m,n, got {chunk:?}"))?;
            let m: BigInt = m.trim().parse().map_err(|_| format!("bad integer {m:?}"))?;
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad integer {n:?}"))?;
            pairs.push((m, n));
        }
        return Ok(SetDescriptor::Explicit(pairs));
    }
    Err(format!("unknown set syntax {s:?}"))
}

/// Stage list: `lo..hi` (inclusive) or a comma-separated list.
pub fn parse_stages(s: &str) -> Result<Vec<u64>, String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.parse().map_err(|_| format!("bad stage {lo:?}"))?;
        let hi: u64 = hi.parse().map_err(|_| format!("bad stage {hi:?}"))?;
        if hi < lo {
            return Err(format!("empty stage range {s:?}"));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad stage {p:?}"))
        })
        .collect()
}

/// Scheme syntax: `classical:r1,r2,...` or `quantum:<theta>:<window>`.
pub fn parse_scheme(s: &str) -> Result<SchemeId, String> {
    if let Some(rest) = s.strip_prefix("classical:") {
        let radii: Vec<u64> = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("bad radius {p:?}"))
            })
            .collect::<Result<_, _>>()?;
        return SchemeId::classical(radii).map_err(|e| e.to_string());
    }
    if let Some(rest) = s.strip_prefix("quantum:") {
        let (theta_str, len_str) = rest
            .rsplit_once(':')
            .ok_or_else(|| format!("quantum scheme needs quantum:<theta>:<window>, got {s:?}"))?;
        let theta = match parse_theta(theta_str)? {
            ParsedTheta::Exact(q) => q,
            ParsedTheta::Heuristic(_) => {
                return Err("quantum scheme needs an exact slope".into());
            }
        };
        let window: usize = len_str
            .parse()
            .map_err(|_| format!("bad window {len_str:?}"))?;
        // the stage list is supplied separately; seed with stage 0
        return SchemeId::quantum(theta, window, vec![0]).map_err(|e| e.to_string());
    }
    Err(format!("unknown scheme syntax {s:?}"))
}

// ------------------------------------------------------------- payloads

fn build_payload(cmd: &Command, prec: usize) -> Result<Value, CliError> {
    match cmd {
        Command::Cf { theta, terms } => payload_cf(theta, *terms, prec),
        Command::Eisenstein {
            mu,
            k,
            set,
            theta,
            exact,
        } => payload_eisenstein(mu, *k, set, theta.as_deref(), *exact, prec),
        Command::Automorphy {
            mu,
            k,
            set,
            theta,
            matrix,
            random,
            seed,
            max_entry,
            exact,
        } => payload_automorphy(
            mu,
            *k,
            set,
            theta.as_deref(),
            matrix.as_deref(),
            *random,
            *seed,
            *max_entry,
            *exact,
            prec,
        ),
        Command::Orbit {
            mu,
            theta,
            matrix,
            reduce,
        } => payload_orbit(mu, theta.as_deref(), matrix.as_deref(), *reduce, prec),
        Command::Jclass { mu, box_max, order } => payload_jclass(mu, *box_max, *order, prec),
        Command::Jquant {
            theta,
            mu,
            stages,
            window,
        } => payload_jquant(theta, mu, stages, *window, prec),
        Command::WeierResidual {
            mu,
            z,
            scheme,
            stages,
        } => payload_weier(mu, z, scheme, stages.as_deref(), prec),
    }
}

fn dec(x: &BigReal, prec: usize) -> String {
    x.to_decimal(decimal_digits(prec))
}

fn cvalue_fields(v: &CValue, prec: usize) -> (String, String) {
    let c = v.to_complex(prec);
    (dec(c.re(), prec), dec(c.im(), prec))
}

fn payload_cf(theta: &str, terms: usize, prec: usize) -> Result<Value, CliError> {
    if terms == 0 {
        return Err(CliError::Input("--terms must be at least 1".into()));
    }
    let cf: CFExpansion = match parse_theta(theta).map_err(CliError::Input)? {
        ParsedTheta::Exact(q) => cf_expand(&q, terms).map_err(numeric)?,
        ParsedTheta::Heuristic(r) => {
            let x = BigReal::from_rational(&r, prec);
            cf_expand_heuristic(&x, terms).map_err(numeric)?
        }
    };
    let shown = terms.min(cf.quotients.len());
    let count = terms.min(cf.available());
    let convs = convergents(&cf, count).map_err(numeric)?;
    let conv_rows: Vec<Value> = convs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "index": i,
                "p": p.m.to_string(),
                "q": p.n.to_string(),
                "quality": dec(&pair_quality(p).to_real(prec), prec),
            })
        })
        .collect();
    Ok(json!({
        "kind": "cf",
        "theta": theta,
        "quotients": cf.quotients[..shown].iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "preperiod": cf.period.map(|p| p.0),
        "period": cf.period.map(|p| p.1),
        "terminated": cf.terminated,
        "heuristic": cf.heuristic,
        "precision": prec,
        "convergents": conv_rows,
    }))
}

fn payload_eisenstein(
    mu_str: &str,
    k: i64,
    set_str: &str,
    theta: Option<&str>,
    exact: bool,
    prec: usize,
) -> Result<Value, CliError> {
    let mu = parse_mu(mu_str).map_err(CliError::Input)?;
    let theta_q = theta.map(require_exact_theta).transpose()?;
    let d = parse_set(set_str, theta_q.as_ref()).map_err(CliError::Input)?;
    let mode = if exact { Mode::Exact } else { Mode::Float };
    let ps = partial_g(&mu, k, &d, prec, mode).map_err(numeric)?;
    let (re, im) = cvalue_fields(&ps.value, prec);
    let mut payload = json!({
        "kind": "eisenstein",
        "mu": mu_str,
        "k": k,
        "classical_weight": 2 * k,
        "set": d.text_form(),
        "value_re": re,
        "value_im": im,
        "term_count": ps.term_count,
        "mode": if exact { "exact" } else { "float" },
        "precision": prec,
        "shape_dependent": k == 1,
    });
    if let Some(e) = ps.value.as_exact() {
        payload["value_exact_re"] = Value::String(e.re.text_form());
        payload["value_exact_im"] = Value::String(e.im.text_form());
    }
    Ok(payload)
}

#[allow(clippy::too_many_arguments)]
fn payload_automorphy(
    mu_str: &str,
    k: i64,
    set_str: &str,
    theta: Option<&str>,
    matrix: Option<&str>,
    random: Option<usize>,
    seed: u64,
    max_entry: i64,
    exact: bool,
    prec: usize,
) -> Result<Value, CliError> {
    let mu = parse_mu(mu_str).map_err(CliError::Input)?;
    let theta_q = theta.map(require_exact_theta).transpose()?;
    let d = parse_set(set_str, theta_q.as_ref()).map_err(CliError::Input)?;
    let mode = if exact { Mode::Exact } else { Mode::Float };
    let matrices: Vec<Gl2Z> = match (matrix, random) {
        (Some(m), None) => vec![parse_matrix(m).map_err(CliError::Input)?],
        (None, Some(count)) => random_unimodular(count, seed, max_entry),
        (None, None) => vec![Gl2Z::identity()],
        (Some(_), Some(_)) => {
            return Err(CliError::Input(
                "--matrix and --random are mutually exclusive".into(),
            ))
        }
    };
    let mut cases = Vec::with_capacity(matrices.len());
    for (i, a) in matrices.iter().enumerate() {
        let r = automorphy_residual(a, &mu, k, &d, prec, mode).map_err(numeric)?;
        let mag = r.abs_real(prec);
        cases.push(json!({
            "index": i,
            "matrix": a.to_string(),
            "det": a.det().to_string(),
            "residual_abs": dec(&mag, prec),
            "exact_zero": r.is_zero() && exact,
        }));
    }
    Ok(json!({
        "kind": "automorphy",
        "mu": mu_str,
        "k": k,
        "set": d.text_form(),
        "mode": if exact { "exact" } else { "float" },
        "precision": prec,
        "seed": seed,
        "cases": cases,
    }))
}

fn random_unimodular(count: usize, seed: u64, max_entry: i64) -> Vec<Gl2Z> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(-max_entry..=max_entry);
        let b = rng.gen_range(-max_entry..=max_entry);
        let c = rng.gen_range(-max_entry..=max_entry);
        let d = rng.gen_range(-max_entry..=max_entry);
        if (a * d - b * c).abs() == 1 {
            out.push(Gl2Z::from_i64(a, b, c, d).expect("unimodular by construction"));
        }
    }
    out
}

fn payload_orbit(
    mu_str: &str,
    theta: Option<&str>,
    matrix: Option<&str>,
    reduce: bool,
    prec: usize,
) -> Result<Value, CliError> {
    let mu = parse_mu(mu_str).map_err(CliError::Input)?;
    let theta_v = match theta {
        None => Theta::Infinity,
        Some(s) => Theta::Finite(require_exact_theta(s)?),
    };
    let mut point = FoliationPoint::new(mu, theta_v);
    let mut acted_matrix = Gl2Z::identity();
    if let Some(m) = matrix {
        acted_matrix = parse_matrix(m).map_err(CliError::Input)?;
        point = act(&acted_matrix, &point).map_err(numeric)?;
    }
    let canonical = canonicalize_sign(&point);
    let (reduced, g) = if reduce {
        reduce_modulus(&canonical.modulus).map_err(numeric)?
    } else {
        (canonical.modulus.clone(), Gl2Z::identity())
    };
    let slope = slope_direction(&canonical, prec).ok();
    let muc = canonical.modulus.to_complex(prec);
    let rc = reduced.to_complex(prec);
    let mut payload = json!({
        "kind": "orbit",
        "mu": mu_str,
        "theta": canonical.theta.to_string(),
        "applied_matrix": acted_matrix.to_string(),
        "acted_mu_re": dec(muc.re(), prec),
        "acted_mu_im": dec(muc.im(), prec),
        "half_plane_sign": canonical.modulus.half_plane_sign(),
        "reduced_mu": reduced.to_string(),
        "reduced_mu_re": dec(rc.re(), prec),
        "reduced_mu_im": dec(rc.im(), prec),
        "reduction_matrix": g.to_string(),
        "precision": prec,
    });
    if let Some(s) = slope {
        let c = s.to_complex(prec);
        payload["slope_direction_re"] = Value::String(dec(c.re(), prec));
        payload["slope_direction_im"] = Value::String(dec(c.im(), prec));
    }
    Ok(payload)
}

fn payload_jclass(
    mu_str: &str,
    box_max: u64,
    order: usize,
    prec: usize,
) -> Result<Value, CliError> {
    let mu = parse_mu(mu_str).map_err(CliError::Input)?;
    let jc = j_classical(&mu, box_max, prec, order).map_err(numeric)?;
    let boxes: Vec<Value> = jc
        .g2_boxes
        .iter()
        .zip(&jc.g3_boxes)
        .map(|((r, v2), (_, v3))| {
            // box histories carry the same normalization as the headline values
            let g2 = v2.mul_i64(60);
            let g3 = v3.mul_i64(140);
            json!({
                "radius": r,
                "g2_re": dec(g2.re(), prec),
                "g2_im": dec(g2.im(), prec),
                "g3_re": dec(g3.re(), prec),
                "g3_im": dec(g3.im(), prec),
            })
        })
        .collect();
    Ok(json!({
        "kind": "jclass",
        "mu": mu_str,
        "box_max": box_max,
        "order": order,
        "precision": prec,
        "j_re": dec(jc.j.re(), prec),
        "j_im": dec(jc.j.im(), prec),
        "error_bound": dec(&jc.error_bound, prec),
        "g2_re": dec(jc.g2.re(), prec),
        "g2_im": dec(jc.g2.im(), prec),
        "g3_re": dec(jc.g3.re(), prec),
        "g3_im": dec(jc.g3.im(), prec),
        "g2_bound": dec(&jc.g2_bound, prec),
        "g3_bound": dec(&jc.g3_bound, prec),
        "boxes": boxes,
    }))
}

fn payload_jquant(
    theta_str: &str,
    mu_str: &str,
    stages_str: &str,
    window: usize,
    prec: usize,
) -> Result<Value, CliError> {
    let theta = require_exact_theta(theta_str)?;
    let mu = parse_mu(mu_str).map_err(CliError::Input)?;
    let stages = parse_stages(stages_str).map_err(CliError::Input)?;
    validate_stage_list(&stages)?;
    let rep = j_quantum(&mu, &theta, &stages, window, prec).map_err(numeric)?;
    let stage_rows: Vec<Value> = rep
        .stages
        .iter()
        .map(|r| {
            json!({
                "stage": r.stage,
                "q_den": r.q_den.to_string(),
                "re": r.j.as_ref().map(|j| dec(j.re(), prec)),
                "im": r.j.as_ref().map(|j| dec(j.im(), prec)),
                "im_fraction": r.im_fraction.as_ref().map(|f| dec(f, prec)),
                "class": r.class,
                "degenerate": r.degenerate,
            })
        })
        .collect();
    let class_rows: Vec<Value> = rep
        .class_stats
        .iter()
        .map(|c| {
            json!({
                "class": c.class,
                "members": c.members,
                "diameter": dec(&c.diameter, prec),
                "median_re": dec(&c.median_re, prec),
                "median_im": dec(&c.median_im, prec),
            })
        })
        .collect();
    Ok(json!({
        "kind": "jquant",
        "mu": mu_str,
        "theta": theta.text_form(),
        "window": window,
        "precision": prec,
        "preperiod": rep.period.0,
        "period": rep.period.1,
        "stages": stage_rows,
        "class_stats": class_rows,
    }))
}

fn validate_stage_list(stages: &[u64]) -> Result<(), CliError> {
    if stages.is_empty() || !stages.windows(2).all(|w| w[0] < w[1]) {
        return Err(CliError::Input(
            "stage list must be strictly increasing and nonempty".into(),
        ));
    }
    Ok(())
}

fn payload_weier(
    mu_str: &str,
    z_str: &str,
    scheme_str: &str,
    stages_str: Option<&str>,
    prec: usize,
) -> Result<Value, CliError> {
    let mu = parse_mu(mu_str).map_err(CliError::Input)?;
    let mut scheme = parse_scheme(scheme_str).map_err(CliError::Input)?;
    let stages: Vec<u64> = match (&scheme, stages_str) {
        (SchemeId::ClassicalCone { radii }, None) => (0..radii.len() as u64).collect(),
        (SchemeId::ClassicalCone { .. }, Some(s)) => parse_stages(s).map_err(CliError::Input)?,
        (SchemeId::QuantumTheta { .. }, Some(s)) => parse_stages(s).map_err(CliError::Input)?,
        (SchemeId::QuantumTheta { .. }, None) => {
            return Err(CliError::Input("quantum schemes need --stages".into()))
        }
    };
    validate_stage_list(&stages)?;
    if let SchemeId::ClassicalCone { radii } = &scheme {
        if let Some(&bad) = stages.iter().find(|&&s| s as usize >= radii.len()) {
            return Err(CliError::Input(format!(
                "stage {bad} is outside the scheme's {} radii",
                radii.len()
            )));
        }
    }
    if let SchemeId::QuantumTheta {
        stages: ref mut sch_stages,
        ..
    } = scheme
    {
        *sch_stages = stages.clone();
    }
    let z = if let Some(t) = z_str.strip_prefix("t=") {
        ZSpec::SlopeParam(parse_real_number(t).map_err(CliError::Input)?)
    } else {
        let (re, im) = parse_complex_components(z_str).map_err(CliError::Input)?;
        ZSpec::Absolute(CValue::Exact(ExactComplex::new(
            QuadIrr::from_rational(&re),
            QuadIrr::from_rational(&im),
        )))
    };
    let series = residual_series(&z, &mu, &scheme, &stages, prec).map_err(numeric)?;
    let rows: Vec<Value> = series
        .rows
        .iter()
        .map(|r| {
            json!({
                "stage": r.stage,
                "label": r.label,
                "residual_abs": dec(&r.residual, prec),
                "normalized": r.normalized.as_ref().map(|n| dec(n, prec)),
            })
        })
        .collect();
    Ok(json!({
        "kind": "weier-residual",
        "mu": mu_str,
        "z": z_str,
        "scheme": scheme_str,
        "precision": prec,
        "rows": rows,
        "fitted_exponent": series.fitted_exponent,
    }))
}
