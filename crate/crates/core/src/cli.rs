//! Command-line interface: argument parsing, dispatch and CSV/JSON output.
//!
//! Exit codes: 0 on success, 2 on bad input (including unknown flags), 3 on
//! numerical failure or an inconclusive limit check.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::correlations::{continuum_correlation_with, verify_limit};
use crate::error::{Error, Result};
use crate::gelfand::{
    character_s2n, coset_type, extreme_character, spherical_restriction, zonal_spherical, ThomaPoint,
};
use crate::kernels::{KernelEvaluator, KernelParams};
use crate::measures::{
    lattice_correlation, mixed_z_measure, negative_binomial_tail, z_measure, ZParams,
    DEFAULT_LATTICE_NMAX,
};
use crate::pairings::{cycle_count, enumerate_matchings, t_measure, Permutation};
use crate::partitions::{
    enumerate_partitions, frobenius_coordinates, hook_products, HalfInteger, YoungDiagram,
};
use crate::specfun::{whittaker_w_by, whittaker_w_complex, whittaker_w_deriv, Method, WhittakerIndex};

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "ZPFAFF_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "zpfaff", version, about = "z-measures, Whittaker kernels and Pfaffian correlation functions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partitions of n with hook products and (A|B) coordinates.
    /// CSV: lambda,hook,hook_prime,negatives,positives
    Partitions {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
    },
    /// The z-measure on partitions of n.
    /// CSV: lambda,measure
    Zmeasure {
        #[command(flatten)]
        z: ZArg,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
    },
    /// The mixed z-measure on all diagrams with at most nmax boxes.
    /// CSV: n,lambda,measure,tail_bound (mass of all larger diagrams)
    Mixed {
        #[command(flatten)]
        z: ZArg,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        nmax: usize,
    },
    /// Lattice correlation function of a set of half-integers.
    /// CSV: x,value,truncation_bound,n_max,terms
    LatticeCorr {
        #[command(flatten)]
        z: ZArg,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        xi: f64,
        /// Points such as "1/2,5/2" or "0.5,2.5".
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = DEFAULT_LATTICE_NMAX)]
        nmax: usize,
    },
    /// Matchings of {-n..n}\{0} with cycle counts and t-measures.
    /// CSV: matching,cycles,measure
    Pairings {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// The Gelfand pair (S(2n), H(n)).
    Gelfand {
        #[command(subcommand)]
        op: GelfandOp,
    },
    /// Whittaker function W_{k,m}(x) on a list of points.
    /// CSV: x,re,im[,derivative]
    Whittaker {
        /// k as "re" or "re,im".
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// m as "re" or "re,im".
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Comma-separated points.
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Also print dW/dx (real-valued cases only).
        #[arg(long)]
        derivative: bool,
    },
    /// Whittaker kernels.
    Kernel {
        #[command(subcommand)]
        op: KernelOp,
    },
    /// Continuum correlation function Pf[K(x_i, x_j)].
    /// CSV: points,value
    Corr {
        #[command(flatten)]
        z: ZArg,
        /// Comma-separated distinct positive points.
        #[arg(long)]
        points: String,
    },
    /// Rescaled lattice correlations against the continuum one along a xi ladder.
    /// CSV: xi,lattice_points,lattice_value,truncation_bound,rescaled,rescaled_bound,continuum,deviation,relative_deviation,inconclusive
    VerifyLimit {
        #[command(flatten)]
        z: ZArg,
        /// Comma-separated positive points.
        #[arg(long)]
        u: String,
        /// Comma-separated xi values.
        #[arg(long)]
        xi: String,
        #[arg(long, default_value_t = DEFAULT_LATTICE_NMAX)]
        nmax: usize,
    },
}

#[derive(Debug, Args)]
pub struct ZArg {
    /// Complex parameter as "re,im" (or "re").
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
}

#[derive(Debug, Args)]
pub struct PermArg {
    /// One-line notation: images of 1..2n, comma-separated.
    #[arg(long, conflicts_with = "cycles")]
    pub perm: Option<String>,
    /// Cycle notation such as "(1,3,5)(6,7)(2,4,8)"; needs --size.
    #[arg(long, requires = "size")]
    pub cycles: Option<String>,
    /// Number of symbols for --cycles.
    #[arg(long)]
    pub size: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum GelfandOp {
    /// Coset type of a permutation of 1..2n.
    /// CSV: permutation,coset_type
    CosetType {
        #[command(flatten)]
        g: PermArg,
    },
    /// Irreducible character of S(N).
    /// CSV: mu,class,value
    Character {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        class: String,
    },
    /// Zonal spherical function w^lambda(g), exact.
    /// CSV: lambda,permutation,value,decimal
    Zonal {
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        g: PermArg,
    },
    /// Sum over partitions of n of M^(n)_{z,zbar,1/2}(lambda) w^lambda(g).
    /// CSV: n,permutation,value
    Restriction {
        #[command(flatten)]
        z: ZArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        g: PermArg,
    },
    /// Extreme character at a Thoma point on a coset type.
    /// CSV: rho,value
    Extreme {
        #[arg(long, default_value = "")]
        alpha: String,
        #[arg(long, default_value = "")]
        beta: String,
        #[arg(long)]
        rho: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum KernelOp {
    /// w_a(x) for a = -1/2 or 1/2.
    /// CSV: x,value
    W {
        #[command(flatten)]
        z: ZArg,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        x: String,
    },
    /// Scalar Whittaker kernel K(x, y).
    /// CSV: x,y,value
    Scalar {
        #[command(flatten)]
        z: ZArg,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// S(x, y) with its quadrature error estimate.
    /// CSV: x,y,value,error
    S {
        #[command(flatten)]
        z: ZArg,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// The 2x2 matrix kernel [[S, S_y], [S_x, S_xy]].
    /// CSV: row,col1,col2,error
    Matrix {
        #[command(flatten)]
        z: ZArg,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Series,
    Integral,
    Asymptotic,
}

/// Tabular result; JSON output defaults to an array of row objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub json: Option<Value>,
    /// Exit code 3 after printing.
    pub inconclusive: bool,
}

impl Output {
    fn table(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new(), json: None, inconclusive: false }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        if let Some(v) = &self.json {
            return v.clone();
        }
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> =
                        self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect();
                    Value::Object(m)
                })
                .collect(),
        )
    }

    /// Renders in the requested format.
    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        let fail = |e: &dyn std::fmt::Display| Error::Numerical(format!("output: {e}"));
        match format {
            Format::Json => {
                let mut s = serde_json::to_vec_pretty(&self.to_json()).map_err(|e| fail(&e))?;
                s.push(b'\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).map_err(|e| fail(&e))?;
                for r in &self.rows {
                    w.write_record(r.iter().map(cell)).map_err(|e| fail(&e))?;
                }
                w.into_inner().map_err(|e| fail(&e))
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn num(x: f64) -> Value {
    json!(x)
}

fn text(s: impl ToString) -> Value {
    Value::String(s.to_string())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// `"re,im"` or `"re"`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parameter(format!("expected a complex number \"re,im\", got {s:?}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let f = |p: &str| p.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [re] => Ok(Complex64::new(f(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(f(re)?, f(im)?)),
        _ => Err(bad()),
    }
}

/// Comma-separated finite reals.
pub fn parse_reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parameter(format!("not a number: {p:?}")))
        })
        .collect()
}

/// Comma-separated half-integers such as `1/2` or `2.5`.
pub fn parse_half_integers(s: &str) -> Result<Vec<HalfInteger>> {
    s.split(',').map(|p| HalfInteger::parse(p).map_err(|e| Error::Parameter(e.to_string()))).collect()
}

/// Comma-separated parts; the empty string is the empty partition.
pub fn parse_partition(s: &str) -> Result<YoungDiagram> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let parts = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parameter(format!("not a part: {p:?}"))))
        .collect::<Result<Vec<_>>>()?;
    YoungDiagram::new(parts).map_err(|e| Error::Parameter(e.to_string()))
}

/// Cycle notation `(1,3,5)(6,7)` on `size` symbols.
pub fn parse_cycles(s: &str, size: usize) -> Result<Permutation> {
    let bad = || Error::Parameter(format!("malformed cycles {s:?}"));
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = inner.find(')').ok_or_else(bad)?;
        let cyc = inner[..close]
            .split([',', ' '])
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        cycles.push(cyc);
        rest = inner[close + 1..].trim_start();
    }
    let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
    Permutation::from_cycles(size, &refs)
}

fn permutation(arg: &PermArg) -> Result<Permutation> {
    match (&arg.perm, &arg.cycles, arg.size) {
        (Some(p), None, _) => {
            let images = p
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parameter(format!("not a label: {x:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_labels(&images)
        }
        (None, Some(c), Some(size)) => parse_cycles(c, size),
        _ => Err(Error::Parameter("give --perm, or --cycles with --size".into())),
    }
}

fn perm_text(g: &Permutation) -> String {
    join(&g.labels())
}

fn whittaker_index(k: &str, m: &str) -> Result<WhittakerIndex> {
    Ok(WhittakerIndex::new(parse_complex(k)?, parse_complex(m)?))
}

/// Runs one command.
pub fn execute(command: &Command) -> Result<Output> {
    match command {
        Command::Partitions { n, theta } => {
            let mut o = Output::table(vec!["lambda", "hook", "hook_prime", "negatives", "positives"]);
            for lambda in enumerate_partitions(*n)? {
                let (h, hp) = hook_products(&lambda, *theta)?;
                let ab = frobenius_coordinates(&lambda, *theta)?;
                o.push(vec![
                    text(&lambda),
                    num(h),
                    num(hp),
                    text(join(&ab.negatives)),
                    text(join(&ab.positives)),
                ]);
            }
            Ok(o)
        }
        Command::Zmeasure { z, theta, n } => {
            let p = ZParams::new(parse_complex(&z.z)?, *theta)?;
            let mut o = Output::table(vec!["lambda", "measure"]);
            for lambda in enumerate_partitions(*n)? {
                o.push(vec![text(&lambda), num(z_measure(&lambda, &p)?)]);
            }
            Ok(o)
        }
        Command::Mixed { z, theta, xi, nmax } => {
            let p = ZParams::with_xi(parse_complex(&z.z)?, *theta, *xi)?;
            let tail = negative_binomial_tail(*nmax, p.size_parameter(), *xi);
            let mut o = Output::table(vec!["n", "lambda", "measure", "tail_bound"]);
            for n in 0..=*nmax {
                for lambda in enumerate_partitions(n)? {
                    o.push(vec![json!(n), text(&lambda), num(mixed_z_measure(&lambda, &p)?), num(tail)]);
                }
            }
            Ok(o)
        }
        Command::LatticeCorr { z, theta, xi, x, nmax } => {
            let p = ZParams::with_xi(parse_complex(&z.z)?, *theta, *xi)?;
            let pts = parse_half_integers(x)?;
            let r = lattice_correlation(&pts, &p, *nmax)?;
            let mut o = Output::table(vec!["x", "value", "truncation_bound", "n_max", "terms"]);
            o.push(vec![
                text(join(&pts)),
                num(r.value),
                num(r.truncation_bound),
                json!(r.n_max_used),
                json!(r.terms_summed),
            ]);
            Ok(o)
        }
        Command::Pairings { n, t } => {
            let mut o = Output::table(vec!["matching", "cycles", "measure"]);
            for x in enumerate_matchings(*n)? {
                o.push(vec![text(&x), json!(cycle_count(&x)), num(t_measure(&x, *t)?)]);
            }
            Ok(o)
        }
        Command::Gelfand { op } => gelfand(op),
        Command::Whittaker { k, m, x, method, derivative } => {
            let idx = whittaker_index(k, m)?;
            let mut cols = vec!["x", "re", "im"];
            if *derivative {
                cols.push("derivative");
            }
            let mut o = Output::table(cols);
            for xv in parse_reals(x)? {
                let w = match method {
                    MethodArg::Auto => whittaker_w_complex(idx, xv)?,
                    MethodArg::Series => whittaker_w_by(idx, xv, Method::Series)?,
                    MethodArg::Integral => whittaker_w_by(idx, xv, Method::Integral)?,
                    MethodArg::Asymptotic => whittaker_w_by(idx, xv, Method::Asymptotic)?,
                };
                let mut row = vec![num(xv), num(w.re), num(w.im)];
                if *derivative {
                    row.push(num(whittaker_w_deriv(idx, xv)?));
                }
                o.push(row);
            }
            Ok(o)
        }
        Command::Kernel { op } => kernel(op),
        Command::Corr { z, points } => {
            let ev = KernelEvaluator::new(&KernelParams::new(parse_complex(&z.z)?)?)?;
            let pts = parse_reals(points)?;
            let v = continuum_correlation_with(&pts, &ev)?;
            let mut o = Output::table(vec!["points", "value"]);
            o.push(vec![text(join(&pts)), num(v)]);
            Ok(o)
        }
        Command::VerifyLimit { z, u, xi, nmax } => {
            let report = verify_limit(&parse_reals(u)?, parse_complex(&z.z)?, &parse_reals(xi)?, *nmax)?;
            let mut o = Output::table(vec![
                "xi",
                "lattice_points",
                "lattice_value",
                "truncation_bound",
                "rescaled",
                "rescaled_bound",
                "continuum",
                "deviation",
                "relative_deviation",
                "inconclusive",
            ]);
            for e in &report.ladder {
                o.push(vec![
                    num(e.xi),
                    text(join(&e.lattice_points)),
                    num(e.lattice_value),
                    num(e.truncation_bound),
                    num(e.rescaled),
                    num(e.rescaled_bound),
                    num(report.continuum),
                    num(e.deviation),
                    e.relative_deviation.map_or(Value::Null, num),
                    json!(e.inconclusive),
                ]);
            }
            o.json = Some(serde_json::to_value(&report).map_err(|e| Error::Numerical(e.to_string()))?);
            o.inconclusive = report.inconclusive;
            Ok(o)
        }
    }
}

fn gelfand(op: &GelfandOp) -> Result<Output> {
    match op {
        GelfandOp::CosetType { g } => {
            let g = permutation(g)?;
            let mut o = Output::table(vec!["permutation", "coset_type"]);
            o.push(vec![text(perm_text(&g)), text(coset_type(&g)?)]);
            Ok(o)
        }
        GelfandOp::Character { mu, class } => {
            let (mu, class) = (parse_partition(mu)?, parse_partition(class)?);
            let mut o = Output::table(vec!["mu", "class", "value"]);
            o.push(vec![text(&mu), text(&class), json!(character_s2n(&mu, &class)?)]);
            Ok(o)
        }
        GelfandOp::Zonal { lambda, g } => {
            let lambda = parse_partition(lambda)?;
            let g = permutation(g)?;
            let w = zonal_spherical(&lambda, &g)?;
            let mut o = Output::table(vec!["lambda", "permutation", "value", "decimal"]);
            o.push(vec![
                text(&lambda),
                text(perm_text(&g)),
                text(w),
                num(*w.numer() as f64 / *w.denom() as f64),
            ]);
            Ok(o)
        }
        GelfandOp::Restriction { z, n, g } => {
            let p = ZParams::new(parse_complex(&z.z)?, 0.5)?;
            let g = permutation(g)?;
            let mut o = Output::table(vec!["n", "permutation", "value"]);
            o.push(vec![json!(n), text(perm_text(&g)), num(spherical_restriction(&p, *n, &g)?)]);
            Ok(o)
        }
        GelfandOp::Extreme { alpha, beta, rho } => {
            let omega = ThomaPoint::new(parse_reals(alpha)?, parse_reals(beta)?)?;
            let rho = parse_partition(rho)?;
            let mut o = Output::table(vec!["rho", "value"]);
            o.push(vec![text(&rho), num(extreme_character(&omega, &rho))]);
            Ok(o)
        }
    }
}

fn kernel(op: &KernelOp) -> Result<Output> {
    let evaluator = |z: &ZArg| -> Result<KernelEvaluator> {
        KernelEvaluator::new(&KernelParams::new(parse_complex(&z.z)?)?)
    };
    match op {
        KernelOp::W { z, a, x } => {
            let ev = evaluator(z)?;
            let mut o = Output::table(vec!["x", "value"]);
            for xv in parse_reals(x)? {
                o.push(vec![num(xv), num(ev.w(*a, xv)?)]);
            }
            Ok(o)
        }
        KernelOp::Scalar { z, x, y } => {
            let mut o = Output::table(vec!["x", "y", "value"]);
            o.push(vec![num(*x), num(*y), num(evaluator(z)?.scalar_kernel(*x, *y)?)]);
            Ok(o)
        }
        KernelOp::S { z, x, y } => {
            let e = evaluator(z)?.s_estimate(*x, *y)?;
            let mut o = Output::table(vec!["x", "y", "value", "error"]);
            o.push(vec![num(*x), num(*y), num(e.value), num(e.error)]);
            Ok(o)
        }
        KernelOp::Matrix { z, x, y } => {
            let p = evaluator(z)?.s_partials(*x, *y)?;
            let mut o = Output::table(vec!["row", "col1", "col2", "error"]);
            o.push(vec![json!(1), num(p.s), num(p.s_y), num(p.error)]);
            o.push(vec![json!(2), num(p.s_x), num(p.s_xy), num(p.error)]);
            o.json = Some(json!({
                "x": x,
                "y": y,
                "matrix": [[p.s, p.s_y], [p.s_x, p.s_xy]],
                "error": p.error,
            }));
            Ok(o)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_parameter_class() {
        2
    } else {
        3
    }
}

/// Sizes the global worker pool from [`WORKERS_ENV`]; unset means all cores.
pub fn configure_workers() -> Result<()> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parameter(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Parameter(format!("cannot size the worker pool: {e}")))
}

/// Parses `args` (including the program name), runs the command and writes
/// the result; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|o| Ok((o.render(cli.format)?, o.inconclusive)));
    match result {
        Ok((bytes, inconclusive)) => {
            let written = match &cli.out {
                Some(path) => File::create(path).and_then(|mut f| f.write_all(&bytes)),
                None => stdout.write_all(&bytes),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return 2;
            }
            if inconclusive {
                let _ = writeln!(stderr, "inconclusive: a truncation bound exceeds 10% of its lattice value");
                return 3;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    if let Err(e) = configure_workers() {
        let _ = writeln!(err, "error: {e}");
        return exit_code(&e);
    }
    run(std::env::args_os(), &mut out, &mut err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["zpfaff"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert_eq!(parse_partition("(3,1)").unwrap().parts(), &[3, 1]);
        assert!(parse_partition("1,3").is_err());
        let g = parse_cycles("(1,3,5)(6,7)(2,4,8)", 8).unwrap();
        assert_eq!(g.labels(), vec![3, 4, 5, 8, 1, 7, 6, 2]);
        assert_eq!(parse_half_integers("1/2,2.5").unwrap()[1].twice(), 5);
    }

    #[test]
    fn zmeasure_rows() {
        let (code, out, _) = call(&["zmeasure", "--z", "1,0", "--theta", "0.5", "--n", "2"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "lambda,measure");
        let v: Vec<f64> = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
        assert!((v[0] - 8.0 / 9.0).abs() < 1e-14 && (v[1] - 1.0 / 9.0).abs() < 1e-14);
        assert!(lines[1].starts_with("(2),"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["zmeasure", "--bogus"]).0, 2);
        assert_eq!(call(&["zmeasure", "--z", "1,0", "--theta", "-1", "--n", "2"]).0, 2);
        assert_eq!(call(&["pairings", "--n", "9"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn gelfand_commands() {
        let (code, out, _) = call(&["gelfand", "coset-type", "--cycles", "(1,3,5)(6,7)(2,4,8)", "--size", "8"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"(3,1)\""), "{out}");
        let (_, out, _) = call(&["gelfand", "zonal", "--lambda", "2", "--perm", "2,3,4,1", "--format", "json"]);
        assert!(out.contains("\"value\": \"1\""), "{out}");
    }

    #[test]
    fn matrix_json() {
        let (code, out, _) = call(&["kernel", "matrix", "--z", "0.3,0.4", "--x", "1", "--y", "1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let m = &v["matrix"];
        assert!(m[0][0].as_f64().unwrap().abs() < 1e-8);
        assert!(m[1][1].as_f64().unwrap().abs() < 1e-6);
    }
}
