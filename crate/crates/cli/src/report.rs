use std::fmt;

use qspa::{Error, Tolerances};
use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "qspa";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variables that override the default tolerance set.
pub const TOLERANCE_VARS: [&str; 5] = [
    "QSPA_TOL_HERMITICITY",
    "QSPA_TOL_PSD_CLIP",
    "QSPA_TOL_RECONSTRUCTION",
    "QSPA_TOL_JACOBI",
    "QSPA_TOL_JACOBI_MAX_SWEEPS",
];

#[derive(Debug)]
pub enum CliError {
    /// Malformed input, bad flags, unreadable files.
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                Error::DimensionMismatch { .. } => "dimension_mismatch",
                Error::InvalidArgument(_) => "invalid_argument",
                Error::NonFinite { .. } => "non_finite",
                Error::NotHermitian { .. } => "not_hermitian",
                Error::TraceNotOne { .. } => "trace_not_one",
                Error::NotPositive { .. } => "not_positive",
                Error::NotCp { .. } => "not_cp",
                Error::TraceIncreasing { .. } => "trace_increasing",
                Error::TrivialMap => "trivial_map",
                Error::NonPositiveAlpha { .. } => "non_positive_alpha",
                Error::NoConvergence { .. } => "no_convergence",
                Error::BudgetExceeded { .. } => "budget_exceeded",
                Error::InconsistentMoments(_) => "inconsistent_moments",
                Error::IllConditioned { .. } => "ill_conditioned",
                Error::DegenerateOutcomes { .. } => "degenerate_outcomes",
                Error::ProbabilitySum { .. } => "probability_sum",
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_var<T: std::str::FromStr>(name: &str, lookup: &impl Fn(&str) -> Option<String>) -> CliResult<Option<T>> {
    match lookup(name) {
        None => Ok(None),
        Some(raw) => raw
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("{name}={raw:?} is not a valid value"))),
    }
}

/// Defaults with any `QSPA_TOL_*` overrides applied.
pub fn resolve_tolerances(lookup: impl Fn(&str) -> Option<String>) -> CliResult<Tolerances> {
    let mut tol = Tolerances::DEFAULT;
    let floats = [
        (TOLERANCE_VARS[0], &mut tol.hermiticity),
        (TOLERANCE_VARS[1], &mut tol.psd_clip),
        (TOLERANCE_VARS[2], &mut tol.reconstruction),
        (TOLERANCE_VARS[3], &mut tol.jacobi),
    ];
    for (name, slot) in floats {
        if let Some(v) = parse_var::<f64>(name, &lookup)? {
            if !(v.is_finite() && v > 0.0) {
                return Err(usage(format!("{name} must be a positive number")));
            }
            *slot = v;
        }
    }
    if let Some(v) = parse_var::<usize>(TOLERANCE_VARS[4], &lookup)? {
        if v == 0 {
            return Err(usage(format!("{} must be positive", TOLERANCE_VARS[4])));
        }
        tol.jacobi_max_sweeps = v;
    }
    Ok(tol)
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    tolerances: &'a Tolerances,
    max_operator_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    code: &'static str,
    message: String,
}

pub struct Context<'a> {
    pub command: &'a str,
    pub tolerances: Tolerances,
    pub max_operator_dim: usize,
}

impl Context<'_> {
    pub fn success(&self, seed: Option<u64>, result: Value) -> String {
        self.render(seed, Some(result), None)
    }

    pub fn failure(&self, err: &CliError) -> String {
        let kind = if err.exit_code() == 3 { "numerical" } else { "validation" };
        self.render(None, None, Some(ErrorBody { kind, code: err.code(), message: err.to_string() }))
    }

    fn render(&self, seed: Option<u64>, result: Option<Value>, error: Option<ErrorBody>) -> String {
        let envelope = Envelope {
            tool: TOOL,
            version: VERSION,
            command: self.command,
            tolerances: &self.tolerances,
            max_operator_dim: self.max_operator_dim,
            seed,
            result,
            error,
        };
        let mut out = serde_json::to_string_pretty(&envelope).expect("report serializes");
        out.push('\n');
        out
    }
}
