//! Command-line front end for the certification library.
//!
//! Exit codes: 0 when every requested certification passes, 1 when at least
//! one fails or is indeterminate, 2 on usage or precondition errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use yamabe_cert::bubble::run_checks;
use yamabe_cert::certify::{
    certify_dimension, certify_interval, find_cbar, tc_of_c, Certificate, DEFAULT_PRECISION_BITS,
};
use yamabe_cert::exact::{format_rational, parse_rational, parse_rational_strict, rational_to_f64};
use yamabe_cert::search::{search, SearchOptions};
use yamabe_cert::{CoeffVector, Error, RatInterval, Rational};

#[derive(Parser, Debug)]
#[command(name = "yamabe-cert", version, about = "Exact certification of bubble profile sign conditions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Record wall-clock times in certificates (otherwise 0, for byte-stable output).
    #[arg(long, global = true)]
    timing: bool,
    /// Worker threads for table and search.
    #[arg(long, env = "YAMABE_CERT_THREADS", global = true)]
    threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the sign conditions at one dimension.
    Certify {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        tail: TailArg,
        #[command(flatten)]
        tc: TcArg,
        /// Moment enclosure width for interval certificates (rational).
        #[arg(long)]
        precision: Option<String>,
    },
    /// Certify every dimension in a range.
    Table {
        #[arg(long)]
        n_min: i64,
        #[arg(long)]
        n_max: i64,
        #[command(flatten)]
        tail: TailArg,
        #[command(flatten)]
        tc: TcArg,
        #[arg(long)]
        precision: Option<String>,
    },
    /// Largest certified c-bar with the conditions holding on [-c-bar/(n-2), 0].
    Cbar {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        tail: TailArg,
        /// Relative bisection tolerance (rational).
        #[arg(long, default_value = "1/10000")]
        precision: String,
    },
    /// Search for tail coefficients of a given degree and recheck exactly.
    Search {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// T_c for the margin (float accepted).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tc: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_den: u64,
    },
    /// Floating-point diagnostics of the bubble family.
    BubbleCheck {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value = "-1/10", allow_hyphen_values = true)]
        tc: String,
    },
}

#[derive(Args, Debug)]
struct TailArg {
    /// "paper-d6", "chenwu-d1", or a file of rationals a_1 .. a_d.
    #[arg(long, default_value = "paper-d6")]
    tail: String,
}

#[derive(Args, Debug)]
struct TcArg {
    /// T_c as a rational "a/b", or an interval "lo:hi".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    tc: String,
}

enum Tc {
    Point(Rational),
    Interval(RatInterval),
}

fn parse_tc(s: &str) -> Result<Tc, Error> {
    match s.split_once(':') {
        Some((lo, hi)) => Ok(Tc::Interval(RatInterval::new(parse_rational_strict(lo)?, parse_rational_strict(hi)?)?)),
        None => Ok(Tc::Point(parse_rational_strict(s)?)),
    }
}

fn load_tail(src: &str) -> Result<CoeffVector, Error> {
    match src {
        "paper-d6" => Ok(CoeffVector::preset_degree_six()),
        "chenwu-d1" => Ok(CoeffVector::preset_degree_one()),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read tail file {path:?}: {e}")))?;
            let coeffs = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or(""))
                .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ','))
                .filter(|t| !t.is_empty())
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.is_empty() {
                return Err(Error::Usage(format!("tail file {path:?} holds no coefficients")));
            }
            Ok(CoeffVector::from_tail(coeffs))
        }
    }
}

fn precision_of(s: Option<&str>) -> Result<Rational, Error> {
    let p = match s {
        Some(s) => parse_rational_strict(s)?,
        None => Rational::from_integer(2.into()).pow(-(DEFAULT_PRECISION_BITS as i32)),
    };
    if p <= Rational::from_integer(0.into()) {
        return Err(Error::Usage("precision must be positive".into()));
    }
    Ok(p)
}

fn certify_one(n: i64, tail: &CoeffVector, tc: &Tc, precision: &Rational) -> Result<Certificate, Error> {
    match tc {
        Tc::Point(t) => certify_dimension(n, tail, t),
        Tc::Interval(iv) => certify_interval(n, tail, iv, precision),
    }
}

/// Replaces every `elapsed_ms` by 0.
fn zero_timing(v: &mut Json) {
    match v {
        Json::Object(m) => {
            if let Some(t) = m.get_mut("elapsed_ms") {
                *t = json!(0);
            }
            m.values_mut().for_each(zero_timing);
        }
        Json::Array(a) => a.iter_mut().for_each(zero_timing),
        _ => {}
    }
}

struct Output {
    text: String,
    pass: bool,
}

fn json_output(mut v: Json, pass: bool, timing: bool) -> Output {
    if !timing {
        zero_timing(&mut v);
    }
    let mut text = serde_json::to_string_pretty(&v).expect("serializable");
    text.push('\n');
    Output { text, pass }
}

fn csv_output(certs: &[Certificate]) -> Output {
    let mut text = String::from(Certificate::CSV_HEADER);
    text.push('\n');
    for c in certs {
        text.push_str(&c.csv_row());
        text.push('\n');
    }
    Output { text, pass: certs.iter().all(Certificate::passed) }
}

fn json_only(format: Format, what: &str) -> Result<(), Error> {
    if format == Format::Csv {
        return Err(Error::Usage(format!("{what} supports only --format json")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Output, Error> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(Error::Usage("--threads must be positive".into()));
        }
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Certify { n, tail, tc, precision } => {
            let tail = load_tail(&tail.tail)?;
            let tc = parse_tc(&tc.tc)?;
            let cert = certify_one(*n, &tail, &tc, &precision_of(precision.as_deref())?)?;
            Ok(match g.format {
                Format::Json => {
                    let pass = cert.passed();
                    json_output(cert.to_json(), pass, g.timing)
                }
                Format::Csv => csv_output(std::slice::from_ref(&cert)),
            })
        }
        Command::Table { n_min, n_max, tail, tc, precision } => {
            if n_min > n_max {
                return Err(Error::Usage(format!("empty range: n-min {n_min} > n-max {n_max}")));
            }
            let tail = load_tail(&tail.tail)?;
            let tc = parse_tc(&tc.tc)?;
            let precision = precision_of(precision.as_deref())?;
            let certs = (*n_min..=*n_max)
                .into_par_iter()
                .map(|n| certify_one(n, &tail, &tc, &precision))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(match g.format {
                Format::Json => {
                    let pass = certs.iter().all(Certificate::passed);
                    json_output(Json::Array(certs.iter().map(Certificate::to_json).collect()), pass, g.timing)
                }
                Format::Csv => csv_output(&certs),
            })
        }
        Command::Cbar { n, tail, precision } => {
            json_only(g.format, "cbar")?;
            let tail = load_tail(&tail.tail)?;
            let precision = parse_rational_strict(precision)?;
            let r = find_cbar(*n, &tail, &precision)?;
            let tc_bar = tc_of_c(*n, &r.cbar);
            let v = json!({
                "n": r.n,
                "tail": tail.tail_strings(),
                "cbar": format_rational(&r.cbar),
                "cbar_float": rational_to_f64(&r.cbar),
                "upper": format_rational(&r.upper),
                "tc_bar": format_rational(&tc_bar),
                "precision": format_rational(&precision),
                "moment_precision": format_rational(&r.moment_precision),
                "evaluations": r.evaluations,
                "certificate": r.certificate.to_json(),
            });
            Ok(json_output(v, r.certificate.passed(), g.timing))
        }
        Command::Search { d, n, budget, seed, tc, max_den } => {
            json_only(g.format, "search")?;
            if !tc.is_finite() || *tc > 0.0 {
                return Err(Error::UnsupportedDomain(format!("T_c must be finite and <= 0, got {tc}")));
            }
            let options = SearchOptions { tc: *tc, max_den: *max_den, ..SearchOptions::new(*budget, *seed) };
            let report = search(*d, *n, options)?;
            let pass = report.certified().next().is_some();
            Ok(json_output(report.to_json(), pass, g.timing))
        }
        Command::BubbleCheck { n, tc } => {
            json_only(g.format, "bubble-check")?;
            let tc = rational_to_f64(&parse_rational(tc)?);
            let checks = run_checks(*n, tc)?;
            let pass = checks.iter().all(|c| c.pass);
            let v = json!({
                "n": n,
                "tc": tc,
                "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                "pass": pass,
                "version": yamabe_cert::VERSION,
            });
            Ok(json_output(v, pass, g.timing))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.global.output.clone();
    match run(cli) {
        Ok(out) => {
            let written = match &output {
                Some(path) => fs::write(path, &out.text),
                None => std::io::stdout().lock().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
