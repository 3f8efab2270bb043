//! `sregular`: command-line surface of the slice-regular toolkit.
//!
//! Function arguments accept three JSON shapes, auto-detected by their keys:
//! a polynomial `{"coeffs": [[w,x,y,z], ...]}`, a quotient
//! `{"den": {...}, "num": {...}}` evaluated as `den^{-*} * num`, or a
//! transformation matrix `{"a": [...], "c": [...], "b": [...], "d": [...]}`
//! evaluated regularly as `(qc + d)^{-*} * (qa + b)`. Any such argument, and
//! any quaternion or grid argument, may be inline JSON, a path to a JSON
//! file, or `-` for stdin.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse or validation
//! error, 3 singular input or evaluation, 4 I/O error. Output depends only
//! on the arguments (and `--seed` where one is taken), byte for byte.

use std::fmt;
use std::fs;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use slice_regular::quotient::RationalEvaluator;
use slice_regular::{
    act, batch, canonical_form, classify_pole, grid_points, moebius_from_params,
    moebius_map_pair, rft_eval, rft_rational, run_suite, zero_set, Error, GridSpec, MatrixH,
    Quaternion, RegularPolynomial, RegularRational, SingularLocus, Suite,
};

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_SINGULAR: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "sregular", version, about = "Slice-regular quaternionic calculator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a polynomial, quotient, or matrix at a point.
    ///
    /// Prints the value as a bare [w,x,y,z] array, or a structured
    /// singularity report (exit 3) naming the offending sphere or point.
    Eval {
        /// Function document (JSON, path, or -).
        function: String,
        /// Evaluation point as [w,x,y,z].
        #[arg(long)]
        point: String,
    },
    /// Multiply transformation matrices.
    ///
    /// The product AB acts as F_B after F_A; arguments are given in
    /// application order.
    Compose {
        /// Two or more matrix documents.
        #[arg(required = true, num_args = 2..)]
        matrices: Vec<String>,
    },
    /// Right action of a matrix on a polynomial or quotient: f.A.
    Act {
        /// Polynomial or quotient document.
        function: String,
        /// Matrix document.
        matrix: String,
    },
    /// Canonical affine or single-pole form of a matrix transformation.
    Canonical {
        matrix: String,
    },
    /// Classify a matrix transformation's pole: affine, real, or sphere.
    Classify {
        matrix: String,
    },
    /// Zero set of a polynomial: isolated points and whole spheres.
    Zeros {
        /// Polynomial document {"coeffs": [...]}.
        polynomial: String,
    },
    /// Build a unit-ball Moebius matrix.
    ///
    /// Either from parameters (--a interior point, --u unit quaternion,
    /// the map q -> (1 - q conj(a))^{-*} * (q - a) u) or as a boundary
    /// rotation sending --from to --to.
    Moebius {
        /// Interior point a, |a| < 1.
        #[arg(long, requires = "u", conflicts_with_all = ["from", "to"])]
        a: Option<String>,
        /// Unit quaternion factor u.
        #[arg(long, requires = "a")]
        u: Option<String>,
        /// Boundary point to map from, |q| = 1.
        #[arg(long, requires = "to")]
        from: Option<String>,
        /// Boundary point to map to, |q| = 1.
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Run a verification suite and print its report as JSON.
    ///
    /// Exit 0 when every check passes, 1 otherwise.
    Verify {
        /// One of: algebra, quotient, zeros, action, antihom, sp11, all.
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Override the per-check trial counts.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the per-check tolerances.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sample a function over a grid for external plotting.
    ///
    /// Rows carry (input, output, singular flag) in grid order; singular
    /// rows have no output value and do not fail the command.
    Sample {
        /// Function document (polynomial, quotient, or matrix).
        function: String,
        /// Grid spec: {"plane": {"unit": [0,1,0,0], "lo": -1, "hi": 1,
        /// "res": 10}} or {"sphere": {"x": 0, "y": 1, "res": 100}}.
        #[arg(long)]
        grid: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// A failure ready to become the process exit code. An empty message means
/// the command already printed its own report.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl fmt::Display) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::Singular { .. } | Error::SingularMatrix { .. } | Error::DivisionByZero => {
            EXIT_SINGULAR
        }
        Error::NonConvergence { .. } | Error::Inconsistency(_) => EXIT_FAIL,
        _ => EXIT_PARSE,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        fail(code_for(&e), e)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

/// Resolves an argument to JSON text: inline if it looks like JSON, stdin
/// for `-`, otherwise a file path.
fn read_doc(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim();
    if trimmed == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| fail(EXIT_IO, format!("reading stdin: {}", e)))?;
        Ok(text)
    } else if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(trimmed).map_err(|e| fail(EXIT_IO, format!("reading {}: {}", trimmed, e)))
    }
}

fn parse_doc<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = read_doc(arg)?;
    serde_json::from_str(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {}", what, e)))
}

enum FnDoc {
    Poly(RegularPolynomial),
    Quotient(RegularRational),
    Matrix(MatrixH),
}

fn parse_fn_doc(arg: &str) -> Result<FnDoc, Failure> {
    let text = read_doc(arg)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| fail(EXIT_PARSE, format!("function document: {}", e)))?;
    let keys = value
        .as_object()
        .ok_or_else(|| fail(EXIT_PARSE, "function document must be a JSON object"))?;
    let from = |what| move |e| fail(EXIT_PARSE, format!("{}: {}", what, e));
    if keys.contains_key("coeffs") {
        serde_json::from_value(value).map(FnDoc::Poly).map_err(from("polynomial"))
    } else if keys.contains_key("den") || keys.contains_key("num") {
        serde_json::from_value(value).map(FnDoc::Quotient).map_err(from("quotient"))
    } else if keys.contains_key("a") && keys.contains_key("d") {
        serde_json::from_value(value).map(FnDoc::Matrix).map_err(from("matrix"))
    } else {
        Err(fail(
            EXIT_PARSE,
            "expected {\"coeffs\": ...}, {\"den\": ..., \"num\": ...}, or {\"a\": ..., \"c\": ..., \"b\": ..., \"d\": ...}",
        ))
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string(value)
        .map_err(|e| fail(EXIT_IO, format!("serializing output: {}", e)))?;
    println!("{}", text);
    Ok(())
}

#[derive(Serialize)]
struct SingularReport {
    singular: bool,
    locus: SingularLocus,
    den_s: f64,
}

#[derive(Serialize)]
struct SampleRow {
    input: Quaternion,
    output: Option<Quaternion>,
    singular: bool,
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Eval { function, point } => {
            let f = parse_fn_doc(&function)?;
            let q: Quaternion = parse_doc(&point, "point")?;
            let value = match f {
                FnDoc::Poly(p) => Ok(p.eval(q)),
                FnDoc::Quotient(r) => r.eval(q),
                FnDoc::Matrix(m) => rft_eval(&m, q),
            };
            match value {
                Ok(v) => print_json(&v),
                Err(Error::Singular { locus, den_s }) => {
                    print_json(&SingularReport {
                        singular: true,
                        locus,
                        den_s,
                    })?;
                    Err(fail(EXIT_SINGULAR, ""))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Compose { matrices } => {
            let mut product: Option<MatrixH> = None;
            for arg in &matrices {
                let m: MatrixH = parse_doc(arg, "matrix")?;
                product = Some(match product {
                    Some(p) => p.mul(&m),
                    None => m,
                });
            }
            print_json(&product.expect("clap enforces at least two matrices"))
        }
        Cmd::Act { function, matrix } => {
            let r = match parse_fn_doc(&function)? {
                FnDoc::Poly(p) => RegularRational::from_polynomial(p),
                FnDoc::Quotient(r) => r,
                FnDoc::Matrix(_) => {
                    return Err(fail(EXIT_PARSE, "act expects a polynomial or quotient, not a matrix"))
                }
            };
            let m: MatrixH = parse_doc(&matrix, "matrix")?;
            print_json(&act(&r, &m)?)
        }
        Cmd::Canonical { matrix } => {
            let m: MatrixH = parse_doc(&matrix, "matrix")?;
            print_json(&canonical_form(&m)?)
        }
        Cmd::Classify { matrix } => {
            let m: MatrixH = parse_doc(&matrix, "matrix")?;
            print_json(&classify_pole(&m)?)
        }
        Cmd::Zeros { polynomial } => {
            let f = match parse_fn_doc(&polynomial)? {
                FnDoc::Poly(p) => p,
                _ => return Err(fail(EXIT_PARSE, "zeros expects a polynomial {\"coeffs\": ...}")),
            };
            print_json(&zero_set(&f)?)
        }
        Cmd::Moebius { a, u, from, to } => {
            let m = match (a, u, from, to) {
                (Some(a), Some(u), None, None) => {
                    moebius_from_params(parse_doc(&a, "a")?, parse_doc(&u, "u")?)?
                }
                (None, None, Some(from), Some(to)) => {
                    moebius_map_pair(parse_doc(&from, "from")?, parse_doc(&to, "to")?)?
                }
                _ => return Err(fail(EXIT_PARSE, "give either --a with --u, or --from with --to")),
            };
            print_json(&m)
        }
        Cmd::Verify {
            suite,
            seed,
            trials,
            tol,
        } => {
            let suite = Suite::from_str(&suite).map_err(|e| fail(EXIT_PARSE, e))?;
            let report = run_suite(suite, seed, trials, tol);
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| fail(EXIT_IO, format!("serializing report: {}", e)))?;
            println!("{}", text);
            if report.pass {
                Ok(())
            } else {
                Err(fail(EXIT_FAIL, ""))
            }
        }
        Cmd::Sample {
            function,
            grid,
            out,
            format,
        } => {
            let eval = SampleEval::new(parse_fn_doc(&function)?)?;
            let spec: GridSpec = parse_doc(&grid, "grid spec")?;
            let points = grid_points(&spec)?;
            let rows: Vec<SampleRow> = batch::map_indexed(points.len(), |k| {
                let input = points[k];
                match eval.at(input) {
                    Ok(v) => SampleRow {
                        input,
                        output: Some(v),
                        singular: false,
                    },
                    Err(_) => SampleRow {
                        input,
                        output: None,
                        singular: true,
                    },
                }
            });
            let text = match format {
                Format::Json => {
                    let mut t = serde_json::to_string_pretty(&rows)
                        .map_err(|e| fail(EXIT_IO, format!("serializing rows: {}", e)))?;
                    t.push('\n');
                    t
                }
                Format::Csv => csv_rows(&rows),
            };
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| fail(EXIT_IO, format!("writing {}: {}", path.display(), e))),
                None => {
                    print!("{}", text);
                    Ok(())
                }
            }
        }
    }
}

/// Per-point evaluation for `sample`: polynomials directly, quotients and
/// matrices through a prepared evaluator whose only per-point error is a
/// singularity.
enum SampleEval {
    Poly(RegularPolynomial),
    Rational(RationalEvaluator),
}

impl SampleEval {
    fn new(doc: FnDoc) -> Result<SampleEval, Failure> {
        Ok(match doc {
            FnDoc::Poly(p) => SampleEval::Poly(p),
            FnDoc::Quotient(r) => SampleEval::Rational(r.evaluator()?),
            FnDoc::Matrix(m) => SampleEval::Rational(rft_rational(&m)?.evaluator()?),
        })
    }

    fn at(&self, q: Quaternion) -> Result<Quaternion, Error> {
        match self {
            SampleEval::Poly(p) => Ok(p.eval(q)),
            SampleEval::Rational(r) => r.eval(q),
        }
    }
}

fn csv_rows(rows: &[SampleRow]) -> String {
    let mut text = String::from("in_w,in_x,in_y,in_z,out_w,out_x,out_y,out_z,singular\n");
    for row in rows {
        let q = row.input;
        text.push_str(&format!("{},{},{},{},", q.w, q.x, q.y, q.z));
        match row.output {
            Some(v) => text.push_str(&format!("{},{},{},{}", v.w, v.x, v.y, v.z)),
            None => text.push_str(",,,"),
        }
        text.push_str(&format!(",{}\n", row.singular));
    }
    text
}
