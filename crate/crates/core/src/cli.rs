//! The `patpop` command line.
//!
//! Output is exact unless `--float` is given. JSON output has the shape
//! `{"command": ..., "params": {...}, "results": [...]}` with big integers as
//! decimal strings; some commands add a `summary` object. CSV rows for
//! counting commands use the columns
//! `n,class,pattern,count,class_size,ratio_num,ratio_den,ratio_float`.
//!
//! Errors go to stderr as `{"error": {"kind": ..., "message": ...}}` with a
//! nonzero exit status.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::analysis::{
    self, class_id_of, conjecture_check, popularity_sequence, Backend, LimitEstimate,
    PopularitySequence, TableConfig,
};
use crate::closed;
use crate::count::{self, brute, enumerate_class, Engine};
use crate::error::{Error, Result};
use crate::foata::{self, Involution, StandardForm};
use crate::perm::{Pattern, PatternSet, Permutation};
use crate::series;

pub const TRUNCATION_ENV: &str = "PATPOP_TRUNCATION";
pub const TOLERANCE_ENV: &str = "PATPOP_TOLERANCE";

#[derive(Parser, Debug)]
#[command(name = "patpop", version, about = "Consecutive pattern popularity in permutation avoidance classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print ratios as floating point instead of num/den.
    #[arg(long, global = true)]
    float: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class sizes |Av_n(P)|.
    Count {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        n: Sizes,
        /// Count by enumeration instead of the DP.
        #[arg(long)]
        brute: bool,
    },
    /// List the members of Av_n(P) in lexicographic order.
    Enumerate {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Total occurrences of a pattern over Av_n(P) and the ratio p_n / (n |A_n|).
    Popularity {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        pattern: Pattern,
        #[arg(long)]
        n: Sizes,
        #[arg(long, default_value = "dp")]
        backend: Backend,
    },
    /// Ratios for n = 1..=n-max and a limit estimate.
    Sequence {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        pattern: Pattern,
        #[arg(long, default_value_t = 60)]
        n_max: usize,
        #[arg(long, default_value = "dp")]
        backend: Backend,
    },
    /// Limit estimates against the claimed values for the 18 classes.
    Table1 {
        /// Restrict to one class id.
        #[arg(long)]
        class: Option<u8>,
        #[arg(long, default_value_t = analysis::DEFAULT_DP_N_MAX)]
        dp_n_max: usize,
        #[arg(long, default_value_t = analysis::DEFAULT_CLOSED_FORM_N_MAX)]
        closed_n_max: usize,
        /// Overrides both default tolerances.
        #[arg(long, env = TOLERANCE_ENV)]
        tolerance: Option<f64>,
    },
    /// Check the closed forms and recurrences against the DP.
    VerifyClosedForms {
        #[arg(long, default_value_t = 14)]
        n_max: usize,
    },
    /// Exact power series checks and coefficient dumps.
    Series {
        #[arg(long, env = TRUNCATION_ENV, default_value_t = 30)]
        order: usize,
        /// Dump the coefficients of one series instead of running the checks.
        #[arg(long, value_enum)]
        dump: Option<SeriesName>,
    },
    /// Saddle-point bound and involution asymptotics.
    Saddle {
        #[arg(long, default_value = "20,40,80,160")]
        n: Sizes,
        /// Also scan (fp_n / I_n) / sqrt(n) over this range, e.g. 100..2000.
        #[arg(long)]
        fixed_points: Option<Sizes>,
        /// Also compare I_n / n! with its asymptotic form at this size.
        #[arg(long)]
        asymptotic: Option<usize>,
    },
    /// Convert between involutions and Av(123,132) via the Foata transform.
    Foata {
        #[command(flatten)]
        input: FoataInput,
        /// Also report the cycle shape of every length-3 window.
        #[arg(long)]
        classify: bool,
    },
    /// Compare limit estimates in Av(P) and Av(P + p).
    Conjecture {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        remove: Pattern,
        /// Patterns to compare; defaults to all that both classes allow.
        #[arg(long, default_value = "")]
        targets: PatternSet,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[arg(long, env = TOLERANCE_ENV, default_value_t = analysis::DP_TOLERANCE)]
        tolerance: f64,
    },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct ClassArgs {
    /// Comma-separated patterns to avoid, e.g. 123,132.
    #[arg(long)]
    avoid: Option<PatternSet>,
    /// One of the 18 numbered classes.
    #[arg(long = "class")]
    class_id: Option<u8>,
}

impl ClassArgs {
    fn resolve(&self) -> Result<PatternSet> {
        match (&self.avoid, self.class_id) {
            (Some(ps), _) => Ok(ps.clone()),
            (None, Some(id)) => Ok(analysis::class(id)?.avoided),
            (None, None) => Err(Error::InvalidQuery("give --avoid or --class".into())),
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FoataInput {
    /// Involution in one-line form; prints its hat word.
    #[arg(long)]
    to_perm: Option<Permutation>,
    /// Word avoiding 123 and 132; prints the involution.
    #[arg(long)]
    from_perm: Option<Permutation>,
    /// Involution in standard cycle form, e.g. "(3)(1 2)".
    #[arg(long)]
    from_cycles: Option<StandardForm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesName {
    /// sum u_n z^n
    #[value(name = "f")]
    SmallF,
    /// exp(z + z^2/2) int_0^z exp(-t - t^2/2) dt
    #[value(name = "F")]
    BigF,
    /// sum 2314_n z^n / n! over Av(123,132)
    #[value(name = "G")]
    BigG,
    /// exp(z + z^2/2)
    #[value(name = "I")]
    Involutions,
}

/// Sizes given as `7`, `3..10`, `3..=10` (both inclusive) or `20,40,80`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

impl FromStr for Sizes {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("sizes must look like 7, 3..10 or 20,40,80, got {s:?}"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let sizes: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
            let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
            if lo > hi {
                return Err(Error::Domain(format!("empty size range {s:?}")));
            }
            (lo..=hi).collect()
        } else {
            s.split(',').map(num).collect::<Result<_>>()?
        };
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!("sizes must be strictly increasing, got {s:?}")));
        }
        Ok(Sizes(sizes))
    }
}

impl Sizes {
    fn max(&self) -> usize {
        *self.0.last().expect("nonempty by construction")
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed(_) | Error::InvalidQuery(_) => 2,
        Error::Domain(_) => 3,
        Error::Verification(_) => 4,
        Error::InsufficientData(_) => 5,
        Error::Numeric(_) => 6,
        Error::Unsupported(_) => 7,
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "{}", error_json("usage", first));
            return 2;
        }
    };
    let report = match execute(&cli.command, cli.float) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(e.kind(), &e.to_string()));
            return exit_code(&e);
        }
    };
    let rendered = render(&report, cli.format);
    let status = report.failure.as_ref().map(|e| {
        let _ = writeln!(err, "{}", error_json(e.kind(), &e.to_string()));
        exit_code(e)
    });
    let written = match &cli.output {
        Some(path) => std::fs::write(path, rendered.as_bytes()),
        None => out.write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "{}", error_json("io", &e.to_string()));
        return 1;
    }
    status.unwrap_or(0)
}

type Row = Map<String, Value>;

const COUNT_COLUMNS: &[&str] =
    &["n", "class", "pattern", "count", "class_size", "ratio_num", "ratio_den", "ratio_float"];

struct Report {
    command: &'static str,
    params: Row,
    results: Vec<Row>,
    summary: Option<Row>,
    text: String,
    csv_columns: Option<&'static [&'static str]>,
    /// Set when the command ran but a check it performs failed.
    failure: Option<Error>,
}

impl Report {
    fn new(command: &'static str, params: Value) -> Self {
        let Value::Object(params) = params else { unreachable!("params are an object") };
        Report { command, params, results: Vec::new(), summary: None, text: String::new(), csv_columns: None, failure: None }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.text.clone(),
        Format::Json => {
            let mut top = Map::new();
            top.insert("command".into(), Value::from(report.command));
            top.insert("params".into(), Value::Object(report.params.clone()));
            top.insert("results".into(), Value::Array(report.results.iter().cloned().map(Value::Object).collect()));
            if let Some(s) = &report.summary {
                top.insert("summary".into(), Value::Object(s.clone()));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let columns: Vec<String> = match report.csv_columns {
                Some(cols) => cols.iter().map(|c| c.to_string()).collect(),
                None => report.results.first().map(|r| r.keys().cloned().collect()).unwrap_or_default(),
            };
            let mut s = columns.join(",");
            s.push('\n');
            for row in &report.results {
                let cells: Vec<String> =
                    columns.iter().map(|c| csv_cell(row.get(c).unwrap_or(&Value::Null))).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    }
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

fn env_params() -> Value {
    let mut env = Map::new();
    for key in [TRUNCATION_ENV, TOLERANCE_ENV] {
        if let Ok(v) = std::env::var(key) {
            env.insert(key.into(), Value::from(v));
        }
    }
    Value::Object(env)
}

fn class_label(ps: &PatternSet) -> String {
    match class_id_of(ps) {
        Some(id) => id.to_string(),
        None => format!("Av({ps})"),
    }
}

fn ratio_text(r: &BigRational, float: bool) -> String {
    if float {
        format!("{}", closed::to_f64(r))
    } else {
        r.to_string()
    }
}

fn ratio_value(r: &BigRational, float: bool) -> Value {
    if float {
        Value::from(closed::to_f64(r))
    } else {
        Value::from(r.to_string())
    }
}

fn count_row(n: usize, class: &str, pattern: &str, count: &BigUint, size: &BigUint, ratio: Option<&BigRational>, value: Value, float: bool) -> Row {
    let mut row = Row::new();
    row.insert("n".into(), Value::from(n));
    row.insert("class".into(), Value::from(class));
    row.insert("pattern".into(), Value::from(pattern));
    row.insert("value".into(), value);
    row.insert("count".into(), Value::from(count.to_string()));
    row.insert("class_size".into(), Value::from(size.to_string()));
    match ratio {
        Some(r) => {
            row.insert("ratio_num".into(), Value::from(r.numer().to_string()));
            row.insert("ratio_den".into(), Value::from(r.denom().to_string()));
            row.insert("ratio_float".into(), Value::from(closed::to_f64(r)));
            if !float {
                row.insert("ratio".into(), Value::from(r.to_string()));
            }
        }
        None => {
            for k in ["ratio_num", "ratio_den", "ratio_float"] {
                row.insert(k.into(), Value::Null);
            }
        }
    }
    row
}

fn estimate_row(e: &LimitEstimate) -> Row {
    let Value::Object(m) = json!({
        "estimate": e.estimate,
        "raw": e.raw,
        "n_max": e.n_max,
        "extrapolated": e.extrapolated,
        "points": e.points,
        "difference_ratio": e.difference_ratio,
        "monotone": e.monotone,
        "clamped": e.clamped,
        "low_confidence": e.low_confidence,
    }) else {
        unreachable!()
    };
    m
}

fn estimate_text(e: &LimitEstimate) -> String {
    let mut flags = Vec::new();
    if e.low_confidence {
        flags.push("low-confidence");
    }
    if e.clamped {
        flags.push("clamped");
    }
    let flags = if flags.is_empty() { String::new() } else { format!(" [{}]", flags.join(", ")) };
    format!("{:.6} (raw {:.6} at n = {}){flags}", e.estimate, e.raw, e.n_max)
}

fn single_or_table(rows: &[(usize, String)]) -> String {
    let mut s = String::new();
    if let [(_, v)] = rows {
        let _ = writeln!(s, "{v}");
    } else {
        for (n, v) in rows {
            let _ = writeln!(s, "{n}\t{v}");
        }
    }
    s
}

fn execute(command: &Command, float: bool) -> Result<Report> {
    match command {
        Command::Count { class, n, brute: use_brute } => {
            let ps = class.resolve()?;
            let label = class_label(&ps);
            let mut report = Report::new(
                "count",
                json!({"avoid": ps.to_string(), "class": label, "n": n.0, "method": if *use_brute { "brute" } else { "dp" }}),
            );
            let sizes: Vec<BigUint> = if *use_brute {
                n.0.iter().map(|&k| brute::class_size(k, &ps)).collect()
            } else {
                let table = count::occurrence_table(n.max(), &ps, &[], Engine::Auto)?;
                n.0.iter().map(|&k| table[k].class_size.clone()).collect()
            };
            let mut text = Vec::new();
            for (&k, size) in n.0.iter().zip(&sizes) {
                report.results.push(count_row(k, &label, "", size, size, None, Value::from(size.to_string()), float));
                text.push((k, size.to_string()));
            }
            report.text = single_or_table(&text);
            report.csv_columns = Some(COUNT_COLUMNS);
            Ok(report)
        }
        Command::Enumerate { class, n, limit } => {
            let ps = class.resolve()?;
            let mut report = Report::new(
                "enumerate",
                json!({"avoid": ps.to_string(), "class": class_label(&ps), "n": n, "limit": limit}),
            );
            for p in enumerate_class(*n, &ps).take(limit.unwrap_or(usize::MAX)) {
                let word = p.to_string();
                let _ = writeln!(report.text, "{word}");
                let mut row = Row::new();
                row.insert("n".into(), Value::from(*n));
                row.insert("value".into(), Value::from(word));
                report.results.push(row);
            }
            Ok(report)
        }
        Command::Popularity { class, pattern, n, backend } => {
            let ps = class.resolve()?;
            let label = class_label(&ps);
            let mut report = Report::new(
                "popularity",
                json!({"avoid": ps.to_string(), "class": label, "pattern": pattern.to_string(), "n": n.0, "backend": backend.to_string()}),
            );
            let seq = popularity_sequence(&ps, pattern, n.max(), *backend)?;
            let mut text = Vec::new();
            for &k in &n.0 {
                let e = seq.entries.iter().find(|e| e.n == k).ok_or_else(|| {
                    Error::Domain(format!("popularity is reported for n >= 1, got {k}"))
                })?;
                let (value, shown) = match &e.ratio {
                    Some(r) => (ratio_value(r, float), ratio_text(r, float)),
                    None => (Value::from("N/A"), "N/A".to_string()),
                };
                report.results.push(count_row(k, &label, &pattern.to_string(), &e.count, &e.class_size, e.ratio.as_ref(), value, float));
                text.push((k, shown));
            }
            report.text = single_or_table(&text);
            report.csv_columns = Some(COUNT_COLUMNS);
            Ok(report)
        }
        Command::Sequence { class, pattern, n_max, backend } => {
            let ps = class.resolve()?;
            let seq = popularity_sequence(&ps, pattern, *n_max, *backend)?;
            sequence_report(&ps, &seq, *n_max, float)
        }
        Command::Table1 { class, dp_n_max, closed_n_max, tolerance } => {
            let mut config = TableConfig { dp_n_max: *dp_n_max, closed_form_n_max: *closed_n_max, ..TableConfig::default() };
            if let Some(t) = tolerance {
                config.dp_tolerance = *t;
                config.closed_form_tolerance = *t;
            }
            let mut report = Report::new(
                "table1",
                json!({
                    "class": class,
                    "dp_n_max": config.dp_n_max,
                    "closed_n_max": config.closed_form_n_max,
                    "dp_tolerance": config.dp_tolerance,
                    "closed_form_tolerance": config.closed_form_tolerance,
                    "env": env_params(),
                }),
            );
            let entries = match class {
                Some(id) => analysis::class_report(&analysis::class(*id)?, &config)?,
                None => analysis::table1_report(&config)?,
            };
            let (mut pass, mut fail, mut open) = (0, 0, 0);
            let _ = writeln!(report.text, "class\tpattern\tclaim\testimate\tbackend\tverdict");
            for e in &entries {
                match e.verdict {
                    analysis::Verdict::Pass => pass += 1,
                    analysis::Verdict::Fail => fail += 1,
                    analysis::Verdict::NotJudged => open += 1,
                }
                let mut row = Row::new();
                row.insert("class".into(), Value::from(e.class_id));
                row.insert("pattern".into(), Value::from(e.pattern.to_string()));
                row.insert("claim".into(), Value::from(e.claim.to_string()));
                row.insert("backend".into(), Value::from(e.backend.to_string()));
                row.insert("tolerance".into(), Value::from(e.tolerance));
                row.insert("verdict".into(), Value::from(e.verdict.to_string()));
                let shown = match &e.estimate {
                    Some(est) => {
                        row.extend(estimate_row(est));
                        estimate_text(est)
                    }
                    None => {
                        row.insert("estimate".into(), Value::from("N/A"));
                        "N/A".into()
                    }
                };
                let _ = writeln!(
                    report.text,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    e.class_id, e.pattern, e.claim, shown, e.backend, e.verdict
                );
                report.results.push(row);
            }
            let Value::Object(summary) = json!({"pass": pass, "fail": fail, "not_judged": open}) else { unreachable!() };
            let _ = writeln!(report.text, "pass {pass}, fail {fail}, not judged {open}");
            report.summary = Some(summary);
            Ok(report)
        }
        Command::VerifyClosedForms { n_max } => verify_closed_forms(*n_max),
        Command::Series { order, dump } => series_report(*order, *dump),
        Command::Saddle { n, fixed_points, asymptotic } => saddle_report(n, fixed_points.as_ref(), *asymptotic),
        Command::Foata { input, classify } => foata_report(input, *classify),
        Command::Conjecture { class, remove, targets, n_max, tolerance } => {
            let ps = class.resolve()?;
            let targets: Vec<Pattern> = targets.iter().cloned().collect();
            let mut report = Report::new(
                "conjecture",
                json!({
                    "avoid": ps.to_string(),
                    "class": class_label(&ps),
                    "remove": remove.to_string(),
                    "targets": targets.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "n_max": n_max,
                    "tolerance": tolerance,
                    "env": env_params(),
                }),
            );
            let c = conjecture_check(&ps, remove, &targets, *n_max, *tolerance)?;
            let restricted = ps.with(remove.clone())?;
            let _ = writeln!(report.text, "A = Av({ps}), B = Av({restricted}), n_max = {n_max}");
            match &c.hypothesis {
                Some(h) => {
                    let _ = writeln!(report.text, "pop_A({remove}) ~ {}", estimate_text(h));
                }
                None => {
                    let _ = writeln!(report.text, "pop_A({remove}) undefined");
                }
            }
            if c.degenerate {
                let _ = writeln!(report.text, "{remove} never occurs in A up to n_max; A and B coincide");
            }
            if !c.hypothesis_plausible {
                let _ = writeln!(report.text, "warning: pop_A({remove}) does not look like 0");
            }
            for x in &c.comparisons {
                let _ = writeln!(
                    report.text,
                    "{}\tA {:.6}\tB {:.6}\tdiff {:.6}\t{}",
                    x.pattern,
                    x.in_base.estimate,
                    x.in_restricted.estimate,
                    x.difference,
                    if x.within_tolerance { "agree" } else { "differ" }
                );
                let mut row = Row::new();
                row.insert("pattern".into(), Value::from(x.pattern.to_string()));
                row.insert("estimate_a".into(), Value::from(x.in_base.estimate));
                row.insert("estimate_b".into(), Value::from(x.in_restricted.estimate));
                row.insert("difference".into(), Value::from(x.difference));
                row.insert("within_tolerance".into(), Value::from(x.within_tolerance));
                row.insert("low_confidence".into(), Value::from(x.in_base.low_confidence || x.in_restricted.low_confidence));
                report.results.push(row);
            }
            let Value::Object(summary) = json!({
                "hypothesis_estimate": c.hypothesis.as_ref().map(|h| h.estimate),
                "hypothesis_plausible": c.hypothesis_plausible,
                "degenerate": c.degenerate,
                "all_within_tolerance": c.all_within_tolerance(),
            }) else {
                unreachable!()
            };
            report.summary = Some(summary);
            Ok(report)
        }
    }
}

fn sequence_report(ps: &PatternSet, seq: &PopularitySequence, n_max: usize, float: bool) -> Result<Report> {
    let label = class_label(ps);
    let mut report = Report::new(
        "sequence",
        json!({"avoid": ps.to_string(), "class": label, "pattern": seq.pattern.to_string(), "n_max": n_max, "backend": seq.backend.to_string()}),
    );
    let pattern = seq.pattern.to_string();
    for e in &seq.entries {
        let (value, shown) = match &e.ratio {
            Some(r) => (ratio_value(r, float), ratio_text(r, float)),
            None => (Value::from("N/A"), "N/A".to_string()),
        };
        let _ = writeln!(report.text, "{}\t{}\t{}\t{}", e.n, e.count, e.class_size, shown);
        report.results.push(count_row(e.n, &label, &pattern, &e.count, &e.class_size, e.ratio.as_ref(), value, float));
    }
    match analysis::estimate_limit(seq) {
        Ok(est) => {
            let _ = writeln!(report.text, "limit ~ {}", estimate_text(&est));
            report.summary = Some(estimate_row(&est));
        }
        Err(Error::InsufficientData(msg)) => {
            let _ = writeln!(report.text, "limit: {msg}");
        }
        Err(e) => return Err(e),
    }
    report.csv_columns = Some(COUNT_COLUMNS);
    Ok(report)
}

fn check_row(check: &str, n: Option<usize>, expected: String, actual: String) -> Row {
    let mut row = Row::new();
    row.insert("check".into(), Value::from(check));
    row.insert("n".into(), n.map(Value::from).unwrap_or(Value::Null));
    row.insert("expected".into(), Value::from(expected.clone()));
    row.insert("actual".into(), Value::from(actual.clone()));
    row.insert("ok".into(), Value::from(expected == actual));
    row
}

fn verify_closed_forms(n_max: usize) -> Result<Report> {
    if n_max < 5 {
        return Err(Error::Domain(format!("closed-form checks need n-max >= 5, got {n_max}")));
    }
    let mut report = Report::new("verify-closed-forms", json!({"n_max": n_max}));
    let p = |s: &str| -> Pattern { s.parse().expect("static pattern") };

    let class11: PatternSet = "123,132,321".parse().expect("static");
    let targets = [p("231"), p("312"), p("213")];
    let table = count::occurrence_table(n_max, &class11, &targets, Engine::Auto)?;
    for n in 3..=n_max {
        let ni = n as i64;
        let rec = &table[n];
        let pairs = [
            ("class 11 size", closed::class11_size(ni)?, rec.class_size.clone()),
            ("class 11 p231", closed::count_231_class11(ni)?, rec.occurrences[&targets[0]].clone()),
            ("class 11 p312", closed::count_312_class11(ni)?, rec.occurrences[&targets[1]].clone()),
            ("class 11 p213", closed::count_213_class11(ni)?, rec.occurrences[&targets[2]].clone()),
        ];
        for (name, want, got) in pairs {
            report.results.push(check_row(name, Some(n), want.to_string(), got.to_string()));
        }
    }
    for n in 5..=n_max {
        let ni = n as i64;
        let refined = count::refined_counts_class11(n)?;
        let prev2 = count::refined_counts_class11(n - 2)?;
        let prev1 = count::refined_counts_class11(n - 1)?;
        let l = closed::rec_312_l(ni, &prev2.left.occ312)?;
        let r = closed::rec_312_r(ni, &prev1.left.occ312)?;
        report.results.push(check_row("312 left recurrence", Some(n), l.to_string(), refined.left.occ312.to_string()));
        report.results.push(check_row("312 right recurrence", Some(n), r.to_string(), refined.right.occ312.to_string()));
    }

    let class18: PatternSet = "132,231".parse().expect("static");
    let t18 = [p("123"), p("213"), p("312"), p("321")];
    let table = count::occurrence_table(n_max, &class18, &t18, Engine::Auto)?;
    for n in 2..=n_max {
        let c = closed::class18_counts(n as i64)?;
        let rec = &table[n];
        for (q, want) in t18.iter().zip([&c.p123, &c.p213, &c.p312, &c.p321]) {
            report.results.push(check_row(&format!("class 18 p{q}"), Some(n), want.to_string(), rec.occurrences[q].to_string()));
        }
    }

    let class17: PatternSet = "123,132".parse().expect("static");
    let q = p("2314");
    let table = count::occurrence_table(n_max, &class17, std::slice::from_ref(&q), Engine::Auto)?;
    let rec2314 = closed::seq_2314_class17(n_max);
    for n in 4..=n_max {
        report.results.push(check_row("class 17 p2314", Some(n), rec2314[n].to_string(), table[n].occurrences[&q].to_string()));
    }

    let failed: Vec<String> = report
        .results
        .iter()
        .filter(|r| r["ok"] == Value::Bool(false))
        .map(|r| format!("{} at n = {}", r["check"].as_str().unwrap_or(""), r["n"]))
        .collect();
    let total = report.results.len();
    let _ = writeln!(report.text, "{} of {total} checks agree for n <= {n_max}", total - failed.len());
    for f in &failed {
        let _ = writeln!(report.text, "mismatch: {f}");
    }
    if !failed.is_empty() {
        report.failure = Some(Error::Verification(format!("{} closed-form checks failed", failed.len())));
    }
    Ok(report)
}

fn series_report(order: usize, dump: Option<SeriesName>) -> Result<Report> {
    let mut report = Report::new(
        "series",
        json!({"order": order, "dump": dump.map(|d| format!("{d:?}")), "env": env_params()}),
    );
    if let Some(name) = dump {
        let s = match name {
            SeriesName::SmallF => series::verify_f_closed_form(order)?,
            SeriesName::BigF => series::series_f(order)?,
            SeriesName::BigG => series::g_from_recurrence(order),
            SeriesName::Involutions => series::egf_involutions(order),
        };
        for (k, c) in s.coeffs().iter().enumerate() {
            let _ = writeln!(report.text, "{k}\t{c}");
            let mut row = Row::new();
            row.insert("k".into(), Value::from(k));
            row.insert("value".into(), Value::from(c.to_string()));
            report.results.push(row);
        }
        return Ok(report);
    }
    let checks: [(&str, Box<dyn Fn() -> Result<()>>); 4] = [
        ("G Cauchy problem", Box::new(move || series::verify_g_cauchy(order).map(|_| ()))),
        ("G closed form", Box::new(move || series::verify_g_closed_form(order))),
        ("f closed form", Box::new(move || series::verify_f_closed_form(order).map(|_| ()))),
        ("n! [z^n] F is a natural number", Box::new(move || series::series_f(order).map(|_| ()))),
    ];
    let mut first_failure = None;
    for (name, check) in checks {
        let outcome = check();
        let status = match &outcome {
            Ok(()) => "ok".to_string(),
            Err(e) => e.to_string(),
        };
        let _ = writeln!(report.text, "{name}: {status}");
        let mut row = Row::new();
        row.insert("check".into(), Value::from(name));
        row.insert("ok".into(), Value::from(outcome.is_ok()));
        row.insert("message".into(), Value::from(status));
        report.results.push(row);
        if let Err(e) = outcome {
            first_failure.get_or_insert(e);
        }
    }
    report.failure = first_failure;
    Ok(report)
}

fn saddle_report(n: &Sizes, fixed_points: Option<&Sizes>, asymptotic: Option<usize>) -> Result<Report> {
    let mut report = Report::new(
        "saddle",
        json!({"n": n.0, "fixed_points": fixed_points.map(|s| [s.0[0], s.max()]), "asymptotic": asymptotic, "precision_bits": series::PRECISION_BITS}),
    );
    let _ = writeln!(report.text, "n\tlog bound\tlog n*I_n/n!\tratio\texact <= bound");
    let mut ratios = Vec::new();
    for &k in &n.0 {
        let r = series::saddle_bound(k)?;
        let _ = writeln!(
            report.text,
            "{k}\t{:.12}\t{:.12}\t{:.12}\t{}",
            r.log_bound_f64(),
            r.log_reference_f64(),
            r.ratio,
            r.exact_within_bound()
        );
        let mut row = Row::new();
        row.insert("n".into(), Value::from(k));
        row.insert("log_bound".into(), Value::from(r.log_bound.to_string()));
        row.insert("log_reference".into(), Value::from(r.log_reference.to_string()));
        row.insert("ratio".into(), Value::from(r.ratio));
        row.insert("exact_coefficient".into(), Value::from(r.exact_coefficient.to_string()));
        row.insert("exact_within_bound".into(), Value::from(r.exact_within_bound()));
        report.results.push(row);
        ratios.push(r.ratio);
    }
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let _ = writeln!(report.text, "ratio strictly decreasing: {decreasing}");
    let mut summary = Row::new();
    summary.insert("ratio_strictly_decreasing".into(), Value::from(decreasing));
    if let Some(range) = fixed_points {
        let scan = series::fixed_point_scan(range.0[0], range.max())?;
        let _ = writeln!(
            report.text,
            "(fp_n / I_n) / sqrt(n) over {}..{}: min {:.6}, max {:.6}, within (0.8, 1.2): {}, fp_n / I_n increasing: {}",
            scan.lo, scan.hi, scan.min, scan.max, scan.within_band, scan.increasing
        );
        summary.insert(
            "fixed_points".into(),
            json!({"lo": scan.lo, "hi": scan.hi, "min": scan.min, "max": scan.max, "within_band": scan.within_band, "increasing": scan.increasing}),
        );
    }
    if let Some(k) = asymptotic {
        let ratio = series::involution_asymptotic_ratio(k)?;
        let _ = writeln!(report.text, "I_n / n! against its asymptotic form at n = {k}: {ratio:.9}");
        summary.insert("asymptotic_ratio".into(), json!({"n": k, "ratio": ratio}));
    }
    report.summary = Some(summary);
    Ok(report)
}

fn foata_report(input: &FoataInput, classify: bool) -> Result<Report> {
    let (inv, mode, given) = if let Some(p) = &input.to_perm {
        (Involution::new(p.clone())?, "to-perm", p.to_string())
    } else if let Some(w) = &input.from_perm {
        (foata::foata_unhat(w)?, "from-perm", w.to_string())
    } else if let Some(sf) = &input.from_cycles {
        (sf.to_involution(), "from-cycles", sf.to_string())
    } else {
        unreachable!("clap requires one input")
    };
    let sf = foata::standard_form(&inv);
    let hat = foata::foata_hat(&inv);
    let mut report = Report::new("foata", json!({"mode": mode, "input": given, "classify": classify}));
    let mut row = Row::new();
    row.insert("involution".into(), Value::from(inv.to_string()));
    row.insert("standard_form".into(), Value::from(sf.to_string()));
    row.insert("hat".into(), Value::from(hat.to_string()));
    row.insert("value".into(), Value::from(if mode == "to-perm" { hat.to_string() } else { inv.to_string() }));
    let _ = writeln!(report.text, "{}", row["value"].as_str().expect("string"));
    report.results.push(row);
    if classify {
        let _ = writeln!(report.text, "standard form {sf}");
        for start in 1..=inv.len().saturating_sub(2) {
            let shape = foata::window_shape_at(&inv, start)?;
            let window: Vec<String> = hat.word()[start - 1..start + 2].iter().map(|x| x.to_string()).collect();
            let _ = writeln!(report.text, "{start}\t{}\t{}\t{}", window.join(","), shape.notation(), shape.pattern());
            let mut row = Row::new();
            row.insert("start".into(), Value::from(start));
            row.insert("window".into(), Value::from(window.join(",")));
            row.insert("shape".into(), Value::from(shape.notation()));
            row.insert("pattern".into(), Value::from(shape.pattern().to_string()));
            row.insert("has_fixed_point".into(), Value::from(shape.has_fixed_point()));
            report.results.push(row);
        }
    }
    Ok(report)
}
