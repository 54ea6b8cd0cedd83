//! `btensor`: classify tensors, split them, localize their H-eigenvalues.
//!
//! Reports go to stdout (or `--out`) as compact JSON with `%.17g` numbers.
//! Failures print `{"error": code, "detail": text, "witness": ...}` to stderr
//! and exit with 2 for bad input or usage, 3 when the tensor does not meet
//! the operation's requirements, 1 for internal errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use btensor::decompose::DecomposerRegistry;
use btensor::eigenloc::{intervals_z, LocalizerRegistry};
use btensor::json::{tensor_from_str, to_json_string};
use btensor::oracle::{SolveOptions, SolverRegistry};
use btensor::{classify, definiteness, laplacian_bounds, laplacian_tensor, Error, Hypergraph, Tensor};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "btensor", version, about = "Structured tensor classes, splittings and H-eigenvalue intervals")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Common {
    /// Residual tolerance for eigenpairs
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tensor JSON (hypergraph JSON for `laplacian`)
    input: PathBuf,
}

#[derive(Subcommand)]
enum Verb {
    /// Membership flags and witnesses for every class
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Split a B or doubly B-tensor into a Z part and a nonnegative part
    Decompose {
        /// b or doubly-b; picks the first that applies when omitted
        #[arg(long)]
        method: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Intervals containing the eigenvalues
    Intervals {
        /// z, even-sym, odd-n2 or gerschgorin
        #[arg(long)]
        method: String,
        #[command(flatten)]
        common: Common,
    },
    /// H-eigenpairs: exhaustive for dimension 2, a found subset otherwise
    Oracle {
        /// n2 or search; n2 for dimension 2 when omitted
        #[arg(long)]
        method: Option<String>,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Laplacian tensor of a uniform hypergraph with its eigenvalue bounds
    Laplacian {
        #[command(flatten)]
        common: Common,
    },
    /// Sufficient-condition definiteness check for even order symmetric tensors
    Definiteness {
        #[command(flatten)]
        common: Common,
    },
}

impl Verb {
    fn common(&self) -> &Common {
        match self {
            Verb::Classify { common }
            | Verb::Decompose { common, .. }
            | Verb::Intervals { common, .. }
            | Verb::Oracle { common, .. }
            | Verb::Laplacian { common }
            | Verb::Definiteness { common } => common,
        }
    }
}

/// A failure with its report code and exit status.
struct Failure {
    code: &'static str,
    detail: String,
    witness: Option<serde_json::Value>,
    status: u8,
}

impl Failure {
    fn usage(detail: impl Into<String>) -> Self {
        Failure { code: "usage_error", detail: detail.into(), witness: None, status: 2 }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Input(_) | Error::Json(_) => 2,
            Error::Precondition(_) | Error::ClassViolation { .. } | Error::DegenerateMargin { .. } => 3,
            Error::Internal(_) => 1,
        };
        let witness = e.witness().and_then(|w| serde_json::to_value(w).ok());
        Failure { code: e.code(), detail: e.to_string(), witness, status }
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    detail: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a serde_json::Value>,
}

#[derive(Serialize)]
struct LaplacianReport {
    tensor: Tensor,
    bounds: btensor::Interval,
    z_intervals: btensor::IntervalUnion,
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: "input_error",
        detail: format!("cannot read {}: {e}", path.display()),
        witness: None,
        status: 2,
    })
}

fn read_tensor(path: &Path) -> Result<Tensor, Failure> {
    Ok(tensor_from_str(&read_input(path)?)?)
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<String, Failure> {
    Ok(to_json_string(v)?)
}

fn run(verb: &Verb) -> Result<String, Failure> {
    let common = verb.common();
    match verb {
        Verb::Classify { .. } => json(&classify(&read_tensor(&common.input)?)),
        Verb::Decompose { method, .. } => {
            let a = read_tensor(&common.input)?;
            let registry = DecomposerRegistry::builtin();
            let d = match method {
                Some(name) => registry.get(name).ok_or_else(|| {
                    Failure::usage(format!("unknown decomposition `{name}`; expected one of {:?}", registry.names()))
                })?,
                // nothing applies: report why the weaker class fails
                None => match registry.select(&a) {
                    Some(d) => d,
                    None => registry.get("doubly-b").expect("builtin"),
                },
            };
            json(&d.decompose(&a)?)
        }
        Verb::Intervals { method, .. } => {
            let registry = LocalizerRegistry::builtin();
            let l = registry.get(method).ok_or_else(|| {
                Failure::usage(format!("unknown method `{method}`; expected one of {:?}", registry.names()))
            })?;
            json(&l.localize(&read_tensor(&common.input)?)?)
        }
        Verb::Oracle { method, restarts, seed, .. } => {
            if !(common.tol >= 0.0) {
                return Err(Failure::usage(format!("--tol must be nonnegative, got {}", common.tol)));
            }
            let a = read_tensor(&common.input)?;
            let registry = SolverRegistry::builtin();
            let solver = match method {
                Some(name) => registry.get(name).ok_or_else(|| {
                    Failure::usage(format!("unknown solver `{name}`; expected one of {:?}", registry.names()))
                })?,
                None => registry.select(&a).expect("search applies to every tensor"),
            };
            let opts = SolveOptions { restarts: *restarts, seed: *seed, tol: common.tol };
            json(&solver.solve(&a, &opts)?)
        }
        Verb::Laplacian { .. } => {
            let g = Hypergraph::from_json_str(&read_input(&common.input)?)?;
            let tensor = laplacian_tensor(&g)?;
            let z_intervals = intervals_z(&tensor)?;
            json(&LaplacianReport { bounds: laplacian_bounds(&g), z_intervals, tensor })
        }
        Verb::Definiteness { .. } => json(&definiteness(&read_tensor(&common.input)?)?),
    }
}

fn fail(f: &Failure) -> ExitCode {
    let report = ErrorReport { error: f.code, detail: &f.detail, witness: f.witness.as_ref() };
    let text = to_json_string(&report).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", f.code));
    eprintln!("{text}");
    ExitCode::from(f.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let detail = e.render().to_string();
            return fail(&Failure::usage(detail.trim_end()));
        }
    };
    let report = match run(&cli.verb) {
        Ok(r) => r,
        Err(f) => return fail(&f),
    };
    match &cli.verb.common().out {
        Some(path) => {
            if let Err(e) = fs::write(path, format!("{report}\n")) {
                return fail(&Failure {
                    code: "output_error",
                    detail: format!("cannot write {}: {e}", path.display()),
                    witness: None,
                    status: 2,
                });
            }
        }
        None => println!("{report}"),
    }
    ExitCode::SUCCESS
}
