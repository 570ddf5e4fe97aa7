//! Command-line front end. [`run`] is the whole program minus process I/O so
//! that tests can drive it directly.

use std::cmp::Ordering;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::krull::{coordinate_dimension, falsify_upper_bound, matrix_strings};
use crate::linear::{
    check_tropical_axiom, truncated_tropicalization, AxiomInput, AxiomVerdict, CircuitSet, MonomialBasis,
    PrimeOracle,
};
use crate::poly::{Mode, Monomial, Polynomial};
use crate::prime::{
    check_admissible, classify_prime, compare_polynomials, leading_class, member_ip, variety_of_prime,
    AdmissibleMatrix,
};
use crate::sampling;
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::svg::{render_svg, BoundingBox};
use crate::text::{self, format_monomial, parse_classical_n, parse_polynomial_n, parse_polynomials};
use crate::trace::{parse_trace_json, verify_trace};
use crate::variety::{affine_prevariety_with, hypersurface, prevariety_with, PolyComplex, VarietyOptions};

pub const SEED_ENV: &str = "TROPICA_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Laurent,
    Poly,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Laurent => Mode::Laurent,
            ModeArg::Poly => Mode::Poly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "tropica", version, about = "Tropical commutative algebra workbench")]
pub struct Cli {
    /// Laurent polynomials or ordinary polynomials.
    #[arg(long, global = true, value_enum, default_value = "laurent")]
    pub mode: ModeArg,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Degree bound for truncated computations.
    #[arg(long, global = true)]
    pub degree: Option<i64>,
    /// Plot window `xmin,xmax,ymin,ymax`.
    #[arg(long, global = true, default_value = "-5,5,-5,5", allow_hyphen_values = true)]
    pub bbox: String,
    /// Random seed; the TROPICA_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random trials for commands that sample.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Intersect cells on the rayon thread pool.
    #[arg(long, global = true)]
    pub parallel: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a polynomial at a point of R^n.
    Eval {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(allow_negative_numbers = true, required = true)]
        point: Vec<String>,
    },
    /// List the bend relations of a polynomial.
    Bend {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Tropical hypersurface as a polyhedral complex.
    Hypersurface {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Intersection of the hypersurfaces of the generators.
    Prevariety {
        #[arg(required = true)]
        polys: Vec<String>,
    },
    /// Prevariety over T^n, stratified by variables set to -inf.
    AffinePrevariety {
        #[arg(required = true)]
        polys: Vec<String>,
    },
    /// Krull dimension of the coordinate semiring with a witness prime.
    Dim {
        #[arg(required = true)]
        polys: Vec<String>,
    },
    /// Validate an admissible matrix and classify its prime.
    PrimeCheck { matrix: String },
    /// Compare two polynomials in the order of a prime.
    PrimeCompare {
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// The at most one point of the variety of a prime.
    PrimeVariety { matrix: String },
    /// Membership of a polynomial in the ideal of a prime.
    PrimeMember {
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Check a derivation trace file.
    TraceVerify { file: PathBuf },
    /// Check the monomial elimination axiom for a prime's ideal or a
    /// tropicalized classical ideal.
    TidealCheck {
        #[arg(long, conflicts_with = "classical")]
        matrix: Option<String>,
        #[arg(long, num_args = 1..)]
        classical: Vec<String>,
        /// Extra sample polynomials (prime mode).
        samples: Vec<String>,
    },
    /// Circuits of the tropicalization of a classical ideal.
    TidealTrop {
        #[arg(required = true)]
        classical: Vec<String>,
    },
    /// SVG plot of the prevariety of plane generators.
    Plot {
        #[arg(required = true)]
        polys: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Domain(String),
    #[error("step {step}: {message}")]
    Rejected { step: usize, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Domain(_) | CliError::Rejected { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, extra) = match self {
            CliError::Parse(_) => ("parse", None),
            CliError::Io(_) => ("io", None),
            CliError::Domain(_) => ("domain", None),
            CliError::Rejected { step, .. } => ("rejected", Some(*step)),
        };
        let message = match self {
            CliError::Rejected { message, .. } => message.clone(),
            other => other.to_string(),
        };
        let mut err = json!({ "kind": kind, "message": message });
        if let Some(step) = extra {
            err["step"] = json!(step);
        }
        json!({ "error": err })
    }
}

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

fn domain_err(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name) and execute. `env_seed` is the
/// value of `TROPICA_SEED`, if set.
pub fn run<I, S>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let seed = match env_seed {
        Some(s) => match s.trim().parse::<u64>() {
            Ok(v) => v,
            Err(_) => {
                let err = CliError::Parse(format!("{SEED_ENV} must be an unsigned integer, got `{s}`"));
                return failure(&err);
            }
        },
        None => cli.seed,
    };
    match execute(&cli, seed) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(err) => failure(&err),
    }
}

fn failure(err: &CliError) -> Outcome {
    Outcome { code: err.exit_code(), stdout: String::new(), stderr: format!("{}\n", err.to_json()) }
}

enum Output {
    Json(Value),
    Complex(PolyComplex),
    Svg(String),
}

fn execute(cli: &Cli, seed: u64) -> Result<String, CliError> {
    let out = dispatch(cli, seed)?;
    match (out, cli.format) {
        (Output::Svg(s), _) => Ok(s),
        (Output::Complex(x), Format::Svg) => render_svg(&x, &parse_bbox(&cli.bbox)?).map_err(domain_err),
        (Output::Complex(x), Format::Text) => Ok(complex_text(&x)),
        (Output::Complex(x), Format::Json) => Ok(pretty(&serde_json::to_value(x.to_json()).expect("json"))),
        (Output::Json(_), Format::Svg) => Err(CliError::Parse("--format svg applies to complexes only".into())),
        (Output::Json(v), Format::Text) => Ok(value_text(&v)),
        (Output::Json(v), Format::Json) => Ok(pretty(&v)),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}

fn complex_text(x: &PolyComplex) -> String {
    let mut s = format!("ambient {} dim {} cells {}\n", x.ambient(), x.dim(), x.cells().len());
    for c in x.cells() {
        let point: Vec<String> = c.interior.iter().map(format_rational).collect();
        s.push_str(&format!(
            "cell dim {} stratum {:?} point ({}) {}\n",
            c.dim,
            c.stratum,
            point.join(", "),
            c.polyhedron
        ));
    }
    s
}

fn parse_bbox(text: &str) -> Result<BoundingBox, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Parse(format!("--bbox needs four comma-separated rationals, got `{text}`")));
    }
    let v: Vec<Rational> = parts.iter().map(|p| parse_rational(p)).collect::<Result<_, _>>().map_err(parse_err)?;
    BoundingBox::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()).map_err(parse_err)
}

/// A matrix given inline as JSON or as `@path`.
fn parse_matrix(arg: &str, mode: Mode) -> Result<AdmissibleMatrix, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    let raw: Vec<Vec<Value>> = serde_json::from_str(&text).map_err(|e| parse_err(format!("matrix: {e}")))?;
    let rows: Vec<Vec<Rational>> = raw
        .iter()
        .map(|r| r.iter().map(entry).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if width == 0 {
        return Err(CliError::Parse("matrix must have at least one non-empty row".into()));
    }
    check_admissible(rows, width - 1, mode).map_err(domain_err)
}

fn entry(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(parse_err),
        Value::Number(n) => n
            .as_i64()
            .map(crate::scalar::int)
            .ok_or_else(|| CliError::Parse(format!("matrix entry {n} must be an integer or a \"p/q\" string"))),
        other => Err(CliError::Parse(format!("matrix entry {other} must be an integer or a \"p/q\" string"))),
    }
}

fn polys(texts: &[String], mode: Mode) -> Result<Vec<Polynomial>, CliError> {
    parse_polynomials(texts, None, mode).map_err(parse_err)
}

fn poly_n(text: &str, n: usize, mode: Mode) -> Result<Polynomial, CliError> {
    parse_polynomial_n(text, n, mode).map_err(parse_err)
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn monomials(ms: &[Monomial]) -> Vec<String> {
    ms.iter().map(format_monomial).collect()
}

fn dispatch(cli: &Cli, seed: u64) -> Result<Output, CliError> {
    let mode: Mode = cli.mode.into();
    let opts = VarietyOptions { parallel: cli.parallel };
    match &cli.command {
        Command::Eval { poly, point } => {
            let p: Vec<Rational> =
                point.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>().map_err(parse_err)?;
            let f = poly_n(poly, p.len(), mode)?;
            let value = f.evaluate(&p).map_err(domain_err)?;
            Ok(Output::Json(json!({
                "polynomial": f.to_string(),
                "point": strings(&p),
                "value": value.to_string(),
                "maximizers": monomials(&f.maximizers_at(&p).map_err(domain_err)?),
                "vanishes": f.vanishes_at(&p).map_err(domain_err)?,
            })))
        }
        Command::Bend { poly } => {
            let f = text::parse_polynomial(poly, mode).map_err(parse_err)?;
            let pairs: Vec<[String; 2]> =
                f.bend_pairs().iter().map(|p| [p.left.to_string(), p.right.to_string()]).collect();
            Ok(Output::Json(json!({ "polynomial": f.to_string(), "pairs": pairs })))
        }
        Command::Hypersurface { poly } => {
            let f = text::parse_polynomial(poly, mode).map_err(parse_err)?;
            Ok(Output::Complex(hypersurface(&f)))
        }
        Command::Prevariety { polys: texts } => {
            Ok(Output::Complex(prevariety_with(&polys(texts, mode)?, opts).map_err(domain_err)?))
        }
        Command::AffinePrevariety { polys: texts } => {
            Ok(Output::Complex(affine_prevariety_with(&polys(texts, Mode::Poly)?, opts).map_err(domain_err)?))
        }
        Command::Dim { polys: texts } => {
            let gens = polys(texts, mode)?;
            let report = coordinate_dimension(&gens).map_err(domain_err)?;
            let mut v = serde_json::to_value(report.to_json()).expect("json");
            if let Some(trials) = cli.trials {
                let mut rng = sampling::rng(seed);
                let f = falsify_upper_bound(&gens, report.variety_dim, trials, &mut rng).map_err(domain_err)?;
                let hits: Vec<Vec<Vec<String>>> = f.hits.iter().map(matrix_strings).collect();
                v["falsification"] = json!({ "trials": f.trials, "seed": seed, "hits": hits });
            }
            Ok(Output::Json(v))
        }
        Command::PrimeCheck { matrix } => {
            let u = parse_matrix(matrix, mode)?;
            let c = classify_prime(&u);
            Ok(Output::Json(json!({
                "admissible": true,
                "rank": c.rank,
                "kind": c.kind,
                "variables": u.arity(),
            })))
        }
        Command::PrimeCompare { matrix, f, g } => {
            let u = parse_matrix(matrix, mode)?;
            let f = poly_n(f, u.arity(), mode)?;
            let g = poly_n(g, u.arity(), mode)?;
            let order = match compare_polynomials(&u, &f, &g).map_err(domain_err)? {
                Ordering::Less => "less",
                Ordering::Equal => "equal",
                Ordering::Greater => "greater",
            };
            Ok(Output::Json(json!({ "order": order })))
        }
        Command::PrimeVariety { matrix } => {
            let u = parse_matrix(matrix, mode)?;
            let point = variety_of_prime(&u).map(|p| strings(&p));
            Ok(Output::Json(json!({ "point": point })))
        }
        Command::PrimeMember { matrix, poly } => {
            let u = parse_matrix(matrix, mode)?;
            let f = poly_n(poly, u.arity(), mode)?;
            let member = member_ip(&u, &f).map_err(domain_err)?;
            let class = if f.is_zero() {
                Vec::new()
            } else {
                monomials(&leading_class(&u, &f).map_err(domain_err)?.monomials())
            };
            Ok(Output::Json(json!({ "member": member, "leading_class": class })))
        }
        Command::TraceVerify { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
            let trace = parse_trace_json(&text).map_err(parse_err)?;
            verify_trace(&trace)
                .map_err(|r| CliError::Rejected { step: r.step, message: r.reason.to_string() })?;
            Ok(Output::Json(json!({
                "accepted": true,
                "steps": trace.steps.len(),
                "goal": [trace.goal.left.to_string(), trace.goal.right.to_string()],
            })))
        }
        Command::TidealCheck { matrix, classical, samples } => {
            let d = cli.degree.unwrap_or(2);
            if let Some(matrix) = matrix {
                let u = parse_matrix(matrix, mode)?;
                let basis = match mode {
                    Mode::Laurent => MonomialBasis::laurent_window(u.arity(), d),
                    Mode::Poly => MonomialBasis::graded(u.arity(), d),
                };
                let oracle = PrimeOracle::new(u.clone(), basis.clone()).map_err(domain_err)?;
                let mut vectors = Vec::new();
                for s in samples {
                    let f = poly_n(s, u.arity(), mode)?;
                    vectors.push(basis.vector_of(&f).map_err(domain_err)?);
                }
                let mut rng = sampling::rng(seed);
                vectors.extend(oracle.sample_members(&mut rng, cli.trials.unwrap_or(100), 4));
                let verdict = check_tropical_axiom(AxiomInput::Oracle {
                    oracle: &oracle,
                    samples: &vectors,
                    max_pairs: usize::MAX,
                })
                .map_err(domain_err)?;
                verdict_json(&verdict, &basis)
            } else if !classical.is_empty() {
                let circuits = circuits_of(classical, mode, cli.degree)?;
                let verdict = check_tropical_axiom(AxiomInput::Circuits(&circuits)).map_err(domain_err)?;
                verdict_json(&verdict, &circuits.basis)
            } else {
                Err(CliError::Parse("tideal-check needs --matrix or --classical".into()))
            }
        }
        Command::TidealTrop { classical } => {
            let circuits = circuits_of(classical, mode, cli.degree)?;
            Ok(Output::Json(serde_json::to_value(circuits.to_json()).expect("json")))
        }
        Command::Plot { polys: texts } => {
            let gens = polys(texts, mode)?;
            let x = prevariety_with(&gens, opts).map_err(domain_err)?;
            Ok(Output::Svg(render_svg(&x, &parse_bbox(&cli.bbox)?).map_err(domain_err)?))
        }
    }
}

fn circuits_of(texts: &[String], mode: Mode, degree: Option<i64>) -> Result<CircuitSet, CliError> {
    if mode == Mode::Laurent && texts.iter().any(|t| t.contains("^-")) {
        return Err(CliError::Parse("classical generators must be ordinary polynomials".into()));
    }
    let n = text::infer_arity(texts).map_err(parse_err)?;
    let gens = texts
        .iter()
        .map(|t| parse_classical_n(t, n, Mode::Poly))
        .collect::<Result<Vec<_>, _>>()
        .map_err(parse_err)?;
    let max_deg = gens.iter().flat_map(|g| g.keys().map(Monomial::degree)).max().unwrap_or(0);
    truncated_tropicalization(&gens, n, degree.unwrap_or(max_deg)).map_err(domain_err)
}

fn verdict_json(verdict: &AxiomVerdict, basis: &MonomialBasis) -> Result<Output, CliError> {
    Ok(Output::Json(match verdict {
        AxiomVerdict::Pass { triples } => json!({ "verdict": "pass", "triples": triples }),
        AxiomVerdict::Counterexample { f, g, u } => json!({
            "verdict": "counterexample",
            "f": basis.polynomial_of(f).map_err(domain_err)?.to_string(),
            "g": basis.polynomial_of(g).map_err(domain_err)?.to_string(),
            "u": format_monomial(&basis.monomials()[*u]),
        }),
    }))
}
