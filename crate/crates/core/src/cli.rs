//! Command-line front end. Every command prints one JSON document on
//! standard output; failures print `{"error": code, "detail": ...}`.
//! Exit status is 0 on success, 1 on domain errors, 2 on syntax or usage
//! errors.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coanalysis::{
    certificate_from_fibration, check_certificate, coanalyzable_bounded, dagger_fiberability_demo, fiberable_bounded,
    CoAnalysisCertificate, FiniteStructure, Tuple,
};
use crate::codim::{codim_lower_bound_capped, jacobian_at, strongly_d_independent_capped, DEFAULT_MAX_SIZE};
use crate::constant_param::{
    assemble, build_certificate, decide_creation, verify_certificate, CertificateCase, CreationVerdict,
};
use crate::diffpoly::{order_vector, DiffPolynomial};
use crate::dimension::{Dim, Discreteness};
use crate::error::Error;
use crate::exact_algebra::{format_rational, Rational};
use crate::parse::{max_var_index, parse_descriptor, parse_diffpoly, parse_transseries, parse_univariate};
use crate::transseries::Transseries;

#[derive(Debug, Parser)]
#[command(name = "transdim", version, about = "Exact transseries and differential-algebra toolkit")]
struct Cli {
    /// Bound on matrix side length for minor enumeration, or on the number
    /// of witness candidates in certificate checking.
    #[arg(long, global = true)]
    max_size: Option<u64>,
    /// Accepted for compatibility; output is always JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize a transseries and report its sign and dominant monomial.
    TsEval {
        #[arg(long = "f")]
        f: String,
    },
    /// Compare two transseries in the field order.
    TsCompare {
        #[arg(long = "f")]
        f: String,
        #[arg(long = "g")]
        g: String,
    },
    /// Membership in Λ.
    TsLambda {
        #[arg(long = "f")]
        f: String,
    },
    /// Membership in Ω.
    TsOmega {
        #[arg(long = "f")]
        f: String,
    },
    /// Evaluate a differential polynomial; the arity is the number of points.
    DpEval {
        #[arg(long = "P")]
        p: String,
        #[arg(long = "point", required = true)]
        point: Vec<String>,
    },
    /// Separant of a differential polynomial in one indeterminate.
    DpSeparant {
        #[arg(long = "P")]
        p: String,
    },
    /// Rank of the matrix of top-order partials at a point.
    CodimRank {
        #[arg(long = "P", required = true)]
        p: Vec<String>,
        #[arg(long = "point", required = true)]
        point: Vec<String>,
    },
    /// Strong d-independence at a point, and the codimension lower bound
    /// when every polynomial vanishes there.
    CodimStrongIndep {
        #[arg(long = "P", required = true)]
        p: Vec<String>,
        #[arg(long = "point", required = true)]
        point: Vec<String>,
    },
    /// Dimension interval of a set descriptor.
    DimEval {
        #[arg(long = "set")]
        set: String,
        /// Optional point to test for membership, one coordinate per flag.
        #[arg(long = "point")]
        point: Vec<String>,
    },
    /// Decide whether F(Y)·Y′ − G(Y) creates a constant over ℚ.
    RosenlichtDecide {
        #[arg(long = "F")]
        f: String,
        #[arg(long = "G")]
        g: String,
    },
    /// Parametrization-by-constants certificate.
    RosenlichtCertify {
        #[arg(long = "F")]
        f: String,
        #[arg(long = "G")]
        g: String,
    },
    /// Check the certificate identity at points read one per line from a file.
    RosenlichtVerify {
        #[arg(long = "F")]
        f: String,
        #[arg(long = "G")]
        g: String,
        #[arg(long = "points")]
        points: Option<PathBuf>,
        #[arg(long = "point")]
        point: Vec<String>,
    },
    /// Check a co-analysis certificate given as a JSON file.
    CoanCheck {
        #[arg(long = "input")]
        input: PathBuf,
    },
    /// Bounded co-analyzability and fiberability of a finite set.
    CoanDecide {
        #[arg(long = "input")]
        input: PathBuf,
        #[arg(long = "r")]
        r: u32,
        #[arg(long = "e")]
        e: usize,
    },
    /// Dagger fibration of the zero set of Y·Y″ − (Y′)² on a rational grid.
    CoanDemo,
}

enum Failure {
    Domain(Error),
    Usage { code: &'static str, detail: String },
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn render(&self) -> (i32, String) {
        let (code, status, detail) = match self {
            Failure::Domain(e) => (e.code(), if e.is_syntax() { 2 } else { 1 }, error_detail(e)),
            Failure::Usage { code, detail } => (*code, 2, Value::String(detail.clone())),
            Failure::Io(msg) => ("IoError", 1, Value::String(msg.clone())),
        };
        (status, json!({ "error": code, "detail": detail }).to_string())
    }
}

fn error_detail(e: &Error) -> Value {
    match e {
        Error::Syntax { position, message } => json!({ "position": position, "message": message }),
        other => Value::String(other.to_string()),
    }
}

type CliResult = std::result::Result<String, Failure>;

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable output")
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => (0, e.to_string()),
                _ => Failure::Usage { code: "UsageError", detail: e.kind().to_string() }.render(),
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => (0, out),
        Err(f) => f.render(),
    }
}

fn points(src: &[String]) -> Result<Vec<Transseries>, Error> {
    src.iter().map(|s| parse_transseries(s)).collect()
}

fn family(src: &[String], arity: usize) -> Result<Vec<DiffPolynomial>, Error> {
    src.iter().map(|s| parse_diffpoly(s, arity)).collect()
}

fn max_size(cli: &Cli, default: u64) -> u64 {
    cli.max_size.unwrap_or(default)
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::TsEval { f } => ts_eval(f),
        Command::TsCompare { f, g } => {
            let (f, g) = (parse_transseries(f)?, parse_transseries(g)?);
            #[derive(Serialize)]
            struct Out {
                order: &'static str,
            }
            let order = match f.cmp_value(&g) {
                std::cmp::Ordering::Less => "Less",
                std::cmp::Ordering::Equal => "Equal",
                std::cmp::Ordering::Greater => "Greater",
            };
            Ok(to_json(&Out { order }))
        }
        Command::TsLambda { f } => Ok(to_json(&Member { member: parse_transseries(f)?.lambda_member() })),
        Command::TsOmega { f } => Ok(to_json(&Member { member: parse_transseries(f)?.omega_member() })),
        Command::DpEval { p, point } => {
            let pt = points(point)?;
            let poly = parse_diffpoly(p, pt.len())?;
            #[derive(Serialize)]
            struct Out {
                value: String,
            }
            Ok(to_json(&Out { value: poly.evaluate(&pt)?.to_string() }))
        }
        Command::DpSeparant { p } => {
            let arity = max_var_index(p)?.max(1);
            let poly = parse_diffpoly(p, arity)?;
            #[derive(Serialize)]
            struct Out {
                separant: String,
            }
            Ok(to_json(&Out { separant: poly.separant()?.to_string() }))
        }
        Command::CodimRank { p, point } => {
            let pt = points(point)?;
            let fam = family(p, pt.len())?;
            let orders = order_vector(&fam)?;
            let m = jacobian_at(&fam, &pt, &orders)?;
            let cap = usize::try_from(max_size(cli, DEFAULT_MAX_SIZE as u64)).unwrap_or(usize::MAX);
            let rank = m.minor_rank_capped(cap)?;
            #[derive(Serialize)]
            struct Out {
                rank: usize,
                orders: Vec<usize>,
                matrix: Vec<Vec<String>>,
            }
            Ok(to_json(&Out {
                rank,
                orders,
                matrix: m.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
            }))
        }
        Command::CodimStrongIndep { p, point } => {
            let pt = points(point)?;
            let fam = family(p, pt.len())?;
            let cap = usize::try_from(max_size(cli, DEFAULT_MAX_SIZE as u64)).unwrap_or(usize::MAX);
            let rep = strongly_d_independent_capped(&fam, &pt, cap)?;
            let bound = match codim_lower_bound_capped(&fam, &pt, cap) {
                Ok(b) => Some(b),
                Err(Error::NotVanishing(_)) => None,
                Err(e) => return Err(e.into()),
            };
            #[derive(Serialize)]
            struct Out {
                independent: bool,
                rank: usize,
                orders: Vec<usize>,
                codim_lower_bound: Option<usize>,
            }
            Ok(to_json(&Out {
                independent: rep.independent,
                rank: rep.rank,
                orders: rep.orders,
                codim_lower_bound: bound,
            }))
        }
        Command::DimEval { set, point } => {
            let d = parse_descriptor(set)?;
            let iv = d.dim_eval()?;
            let member = if point.is_empty() { None } else { Some(d.member(&points(point)?)?) };
            #[derive(Serialize)]
            struct Out {
                lo: Dim,
                hi: Dim,
                discrete: Discreteness,
                #[serde(skip_serializing_if = "Option::is_none")]
                member: Option<bool>,
            }
            Ok(to_json(&Out { lo: iv.lo, hi: iv.hi, discrete: d.discreteness_flag()?, member }))
        }
        Command::RosenlichtDecide { f, g } => {
            let (f, g) = (parse_univariate(f)?, parse_univariate(g)?);
            Ok(verdict_json(&decide_creation(&f, &g)?).to_string())
        }
        Command::RosenlichtCertify { f, g } => {
            let (f, g) = (parse_univariate(f)?, parse_univariate(g)?);
            let cert = build_certificate(&f, &g)?;
            Ok(to_json(&CertificateOut::from(&cert)))
        }
        Command::RosenlichtVerify { f, g, points: file, point } => {
            let (fp, gp) = (parse_univariate(f)?, parse_univariate(g)?);
            let mut lines: Vec<String> = point.clone();
            if let Some(path) = file {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                lines.extend(
                    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from),
                );
            }
            let pts = points(&lines)?;
            let cert = build_certificate(&fp, &gp)?;
            let statuses = verify_certificate(&fp, &gp, &cert, &pts)?;
            #[derive(Serialize)]
            struct Row {
                point: String,
                status: &'static str,
            }
            #[derive(Serialize)]
            struct Out {
                results: Vec<Row>,
            }
            Ok(to_json(&Out {
                results: pts
                    .iter()
                    .zip(statuses)
                    .map(|(p, s)| Row { point: p.to_string(), status: s.as_str() })
                    .collect(),
            }))
        }
        Command::CoanCheck { input } => {
            let doc: CheckInput = read_json(input)?;
            let limit = cli.max_size.map(u128::from);
            let valid = match limit {
                Some(l) if witness_space(&doc) > l => {
                    return Err(Error::SizeLimit(format!("witness search exceeds --max-size {l}")).into())
                }
                _ => check_certificate(&doc.structure, doc.n, &doc.set, &doc.certificate)?,
            };
            #[derive(Serialize)]
            struct Out {
                valid: bool,
            }
            Ok(to_json(&Out { valid }))
        }
        Command::CoanDecide { input, r, e } => {
            let doc: SetInput = read_json(input)?;
            doc.structure.validate()?;
            let fib = fiberable_bounded(&doc.structure, &doc.set, *r, *e)?;
            let certificate = fib.as_ref().map(|w| certificate_from_fibration(w, *r, *e));
            #[derive(Serialize)]
            struct Out {
                coanalyzable: bool,
                fiberable: bool,
                witness: Option<Value>,
                certificate: Option<CoAnalysisCertificate>,
            }
            Ok(to_json(&Out {
                coanalyzable: coanalyzable_bounded(&doc.structure, doc.set.len(), *r, *e),
                fiberable: fib.is_some(),
                witness: fib.as_ref().map(|w| serde_json::to_value(w).expect("serializable")),
                certificate,
            }))
        }
        Command::CoanDemo => Ok(to_json(&dagger_fiberability_demo()?)),
    }
}

#[derive(Serialize)]
struct Member {
    member: bool,
}

fn ts_eval(src: &str) -> CliResult {
    let f = parse_transseries(src)?;
    #[derive(Serialize)]
    struct Out {
        value: String,
        sign: crate::transseries::OrderedSign,
        dominant: Option<String>,
        tree: Value,
    }
    Ok(to_json(&Out {
        value: f.to_string(),
        sign: f.sign(),
        dominant: f.dominant_monomial().ok().map(ToString::to_string),
        tree: f.to_json(),
    }))
}

fn verdict_json(v: &CreationVerdict) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("verdict".into(), json!(v.tag()));
    out.insert("field".into(), json!(v.field()));
    match v {
        CreationVerdict::ExactDerivative(r) => {
            out.insert("R".into(), json!(r.to_string()));
        }
        CreationVerdict::LogDerivative { c, factors } => {
            out.insert("c".into(), json!(format_rational(c)));
            let fs: Vec<Value> =
                factors.iter().map(|(p, n)| json!({ "factor": p.to_string(), "exponent": n })).collect();
            out.insert("factors".into(), Value::Array(fs));
            out.insert("R".into(), json!(assemble(factors).to_string()));
        }
        CreationVerdict::NoCreation { caveat } => {
            out.insert("caveat".into(), json!(caveat));
        }
        CreationVerdict::Undecided(reason) => {
            out.insert("reason".into(), json!(reason));
        }
    }
    Value::Object(out)
}

#[derive(Serialize)]
struct ExcludedOut {
    g_zeros: String,
    r_den_zeros: String,
    r_num_zeros: Option<String>,
}

#[derive(Serialize)]
struct CertificateOut {
    case: &'static str,
    #[serde(rename = "R")]
    r: String,
    c: Option<String>,
    b_exponent: Option<String>,
    fiber_bound: usize,
    excluded: ExcludedOut,
}

impl From<&crate::constant_param::ParametrizationCertificate> for CertificateOut {
    fn from(c: &crate::constant_param::ParametrizationCertificate) -> Self {
        CertificateOut {
            case: match c.case {
                CertificateCase::LogDerivative => "LogDerivative",
                CertificateCase::ExactDerivative => "ExactDerivative",
            },
            r: c.r.to_string(),
            c: c.c.as_ref().map(format_rational),
            b_exponent: c.b_exponent.as_ref().map(ToString::to_string),
            fiber_bound: c.fiber_bound,
            excluded: ExcludedOut {
                g_zeros: c.excluded.g_zeros.to_string(),
                r_den_zeros: c.excluded.r_den_zeros.to_string(),
                r_num_zeros: c.excluded.r_num_zeros.as_ref().map(ToString::to_string),
            },
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckInput {
    structure: FiniteStructure,
    n: usize,
    set: BTreeSet<Tuple>,
    certificate: CoAnalysisCertificate,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetInput {
    structure: FiniteStructure,
    #[allow(dead_code)]
    n: usize,
    set: BTreeSet<Tuple>,
}

fn witness_space(doc: &CheckInput) -> u128 {
    let max_d = doc.certificate.dims.iter().copied().max().unwrap_or(0);
    (doc.structure.size as u128).checked_pow(max_d as u32).unwrap_or(u128::MAX)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> std::result::Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage { code: "SyntaxError", detail: e.to_string() })
}

/// Canonical rendering shared with tests.
pub fn render_rational(r: &Rational) -> String {
    format_rational(r)
}
