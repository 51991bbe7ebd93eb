//! Command-line front end. The binary only parses arguments and forwards to
//! [`run`], which returns the text to print and the exit code.
//!
//! Exit codes: 0 pass, 1 constraint or verification failure, 2 I/O or schema
//! error, 3 hypothesis violation, 4 generator failure.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::Error;
use crate::hardy::{verify_interpolant, TaylorSeries};
use crate::io::{self, Instance, IoError, MatrixJson, SolutionFile};
use crate::lifting::{derive, generate_random, validate, InstanceKind, LiftingDataSet};
use crate::matrix::*;
use crate::nehari::{self, NehariProblem};
use crate::redheffer::{build_coefficients, solution_taylor};
use crate::report::{all_pass, Residual};
use crate::schur::SchurParameter;
use crate::suite::{run_suite, SuiteConfig};

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "RELAXCL_TOL";
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_DEGREE: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "relaxcl", version, about = "Relaxed commutant lifting and relaxed Nehari solver")]
pub struct Cli {
    /// Include wall-clock timing in reports (breaks byte-for-byte stability).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the lifting constraints of an instance.
    Validate(ValidateArgs),
    /// Compute a solution for the central or a given Schur parameter.
    Solve(SolveArgs),
    /// Print the Nehari coefficient digest of a Nehari instance.
    Nehari(NehariArgs),
    /// Verify a solution file against its instance.
    Verify(VerifyArgs),
    /// Write a random instance.
    Gen(GenArgs),
    /// Run the acceptance matrix.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub input: PathBuf,
    /// Tolerance (default 1e-6, or the value of RELAXCL_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub input: PathBuf,
    /// Parameter file; mutually exclusive with --central.
    #[arg(long, conflicts_with = "central")]
    pub param: Option<PathBuf>,
    /// Use V = 0.
    #[arg(long)]
    pub central: bool,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Solution file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NehariArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    pub solution: PathBuf,
    /// Verify only the first degree + 1 coefficients; the rest count as tail.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// Dims `h',h,h0`: random R = SQ with a contraction S.
    Generic,
    /// Dims `h',h,h0`: like generic with S unitary, so R*R = Q*Q.
    GenericIsometric,
    /// Dims `N,u,y,K`: a Nehari problem with K random taps.
    Nehari,
    /// Dims `h',h`: R = I, Q unitary, T' sharing eigenvalues with Q.
    Classical,
    /// Dims `h',h`: classical shape without the intertwining relation.
    ClassicalShape,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Comma-separated dimensions, see --kind.
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Target value of ‖A‖.
    #[arg(long, default_value_t = 0.8)]
    pub norm: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Instances per criterion (default: each criterion's full count).
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("generator failed: {0}; try another seed or larger dimensions")]
    Generator(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotStrict(_) | Error::HankelNotStrict { .. } | Error::CornerNotPd | Error::NotClassicalShape(_) => {
                CliError::Hypothesis(e.to_string())
            }
            Error::EmptySolutionSpace => CliError::Generator(e.to_string()),
            Error::DimensionMismatch(_) | Error::Invalid(_) => CliError::Io(IoError::Schema(e.to_string())),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Usage(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Generator(_) => 4,
            CliError::Numeric(_) => 1,
        }
    }
}

/// What a command produced: text for standard output (empty when it went to
/// a file) and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// The tolerance from the flag, else the environment, else the default.
pub fn resolve_tol(flag: Option<f64>) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{TOL_ENV}={s} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!("tolerance must be positive, got {tol}")))
    }
}

#[derive(Debug, Serialize)]
struct RunReport {
    command: Value,
    instance: Value,
    residuals: Vec<Residual>,
    pass: bool,
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
}

fn digest(instance: &Instance) -> Value {
    match instance {
        Instance::Lifting(ds) => json!({
            "kind": "lifting",
            "dims": {"h_prime": ds.h_prime(), "h": ds.h(), "h0": ds.h0()},
            "norms": {
                "A": operator_norm(&ds.a),
                "T_prime": operator_norm(&ds.t_prime),
                "R": operator_norm(&ds.r),
                "Q": operator_norm(&ds.q),
            },
        }),
        Instance::Nehari(p) => json!({
            "kind": "nehari",
            "dims": {"N": p.n_window, "u_dim": p.u_dim, "y_dim": p.y_dim, "K": p.num_taps()},
            "norms": {"A": operator_norm(&nehari::hankel(p, p.hankel_rows()))},
        }),
    }
}

fn emit(text: String, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            io::write_text(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Outcome {
    let start = Instant::now();
    let timing = cli.timing;
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(&a, timing.then_some(start)),
        Command::Solve(a) => cmd_solve(&a, timing.then_some(start)),
        Command::Nehari(a) => cmd_nehari(&a, timing.then_some(start)),
        Command::Verify(a) => cmd_verify(&a, timing.then_some(start)),
        Command::Gen(a) => cmd_gen(&a),
        Command::Suite(a) => cmd_suite(&a, timing.then_some(start)),
    };
    match result {
        Ok(o) => o,
        Err(e) => Outcome { stdout: String::new(), code: e.exit_code() }.with_error(&e),
    }
}

impl Outcome {
    fn with_error(mut self, e: &CliError) -> Self {
        eprintln!("error: {e}");
        self.stdout.clear();
        self
    }
}

fn elapsed(start: Option<Instant>) -> Option<f64> {
    start.map(|s| (s.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3)
}

fn lifting_of(instance: &Instance) -> LiftingDataSet {
    match instance {
        Instance::Lifting(ds) => ds.clone(),
        Instance::Nehari(p) => nehari::lifting_data(p),
    }
}

pub fn cmd_validate(a: &ValidateArgs, start: Option<Instant>) -> Result<Outcome, CliError> {
    let tol = resolve_tol(a.tol)?;
    let instance = io::read_instance(&a.input)?;
    let ds = lifting_of(&instance);
    let rep = validate(&ds, tol)?;
    let pass = rep.is_valid();
    let report = RunReport {
        command: json!({"name": "validate", "input": a.input.display().to_string(), "tol": tol}),
        instance: digest(&instance),
        residuals: rep.residuals.clone(),
        pass,
        seed: None,
        timing_ms: elapsed(start),
        details: Some(json!({"strictness": rep.strictness})),
    };
    let stdout = emit(io::to_canonical(&report), a.out.as_deref())?;
    Ok(Outcome { stdout, code: if pass { 0 } else { 1 } })
}

fn parameter_for(a: &SolveArgs, in_dim: usize, out_dim: usize) -> Result<SchurParameter, CliError> {
    match (&a.param, a.central) {
        (Some(path), false) => Ok(io::read_parameter(path)?.resolve(in_dim, out_dim)?),
        (None, true) => Ok(SchurParameter::zero(in_dim, out_dim)),
        _ => Err(CliError::Usage("give exactly one of --param and --central".into())),
    }
}

fn series_json(s: &TaylorSeries) -> Vec<MatrixJson> {
    s.coeffs.iter().map(MatrixJson::from_matrix).collect()
}

/// Checks of a Nehari candidate `H`: `σ_max(L) ≤ 1 + tol + slack`.
fn nehari_rows(p: &NehariProblem, h: &TaylorSeries, tol: f64) -> (Vec<Residual>, f64, Option<f64>) {
    let rep = nehari::assemble_l(p, h);
    let slack = rep.tail_slack.unwrap_or(0.0);
    let rows = vec![Residual::at_most("σ_max(L) − 1 (truncated)", rep.sigma_max - 1.0, tol + slack)];
    (rows, rep.sigma_max, rep.tail_slack)
}

pub fn cmd_solve(a: &SolveArgs, start: Option<Instant>) -> Result<Outcome, CliError> {
    let tol = resolve_tol(a.tol)?;
    let instance = io::read_instance(&a.input)?;
    let (series, rows, sigma_max, details) = match &instance {
        Instance::Lifting(ds) => {
            let val = validate(ds, tol)?;
            if !val.is_valid() {
                let failed: Vec<&str> = val.residuals.iter().filter(|r| !r.pass).map(|r| r.identity.as_str()).collect();
                return Err(CliError::Hypothesis(format!("lifting constraints fail: {}", failed.join(", "))));
            }
            if let Some(reason) = &val.strictness.reason {
                return Err(CliError::Hypothesis(format!("not strict: {reason}")));
            }
            let rc = build_coefficients(&derive(ds)?)?;
            let v = parameter_for(a, rc.v_in_dim(), rc.w_dim())?;
            let sol = solution_taylor(&rc, &v, a.degree)?;
            let rep = verify_interpolant(ds, &sol, a.degree, tol)?;
            let details = json!({"r_spec_X1": rc.r_spec_x1, "sigma_upper": rep.sigma_upper});
            (sol.gamma, rep.residuals, rep.sigma_max, details)
        }
        Instance::Nehari(p) => {
            let nc = nehari::coefficients(p)?;
            let v = parameter_for(a, p.u_dim, p.y_dim + p.u_dim)?;
            let h = nehari::solve_h(&nc, &v, a.degree)?;
            let (mut rows, sigma, slack) = nehari_rows(p, &h, tol);
            rows.push(Residual::below("r_spec(T_state)", nc.r_spec_t_state, 1.0));
            (h, rows, sigma, json!({"tail_slack": slack}))
        }
    };
    let pass = all_pass(&rows);
    let report = RunReport {
        command: json!({
            "name": "solve",
            "input": a.input.display().to_string(),
            "param": a.param.as_ref().map(|p| p.display().to_string()),
            "central": a.central,
            "degree": a.degree,
            "tol": tol,
        }),
        instance: digest(&instance),
        residuals: rows,
        pass,
        seed: None,
        timing_ms: elapsed(start),
        details: Some(details),
    };
    let file = SolutionFile {
        kind: instance.kind().into(),
        h: series_json(&series),
        tail_bound: series.tail_bound,
        sigma_max,
        report: serde_json::to_value(&report).expect("report serializes"),
    };
    let stdout = emit(io::to_canonical(&file), a.out.as_deref())?;
    Ok(Outcome { stdout, code: if pass { 0 } else { 1 } })
}

pub fn cmd_nehari(a: &NehariArgs, start: Option<Instant>) -> Result<Outcome, CliError> {
    let tol = resolve_tol(a.tol)?;
    let instance = io::read_instance(&a.input)?;
    let Instance::Nehari(p) = &instance else {
        return Err(CliError::Io(IoError::Schema("the nehari command needs a nehari instance".into())));
    };
    let nc = nehari::coefficients(p)?;
    let n = nc.lambda.nrows();
    let inverse_res = operator_norm(&(&nc.lambda * &nc.lambda_cross - identity(n)));
    let g_res = g_solve_residual(p, &nc.g_row);
    let central = nehari::solve_h(&nc, &SchurParameter::zero(p.u_dim, p.y_dim + p.u_dim), a.degree)?;
    let (mut rows, sigma, slack) = nehari_rows(p, &central, tol);
    let hat_m = nehari::hat_m_check(&nc, a.degree)?;
    rows.extend([
        Residual::at_most("‖ΛΛ× − I‖", inverse_res, 1e-9),
        Residual::at_most("G-solve residual", g_res, 1e-9),
        Residual::below("r_spec(T_state)", nc.r_spec_t_state, 1.0),
        Residual::at_most("‖M̂_t*M̂_t − I‖", hat_m.residual, hat_m.slack.unwrap_or(0.0) + tol),
    ]);
    let pass = all_pass(&rows);
    let mats = |ms: &[CMatrix]| ms.iter().map(MatrixJson::from_matrix).collect::<Vec<_>>();
    let report = RunReport {
        command: json!({"name": "nehari", "input": a.input.display().to_string(), "degree": a.degree, "tol": tol}),
        instance: digest(&instance),
        residuals: rows,
        pass,
        seed: None,
        timing_ms: elapsed(start),
        details: Some(json!({
            "Lambda": MatrixJson::from_matrix(&nc.lambda),
            "Lambda_cross": MatrixJson::from_matrix(&nc.lambda_cross),
            "G": mats(&nc.g_row),
            "T_state": MatrixJson::from_matrix(&nc.t_state),
            "C1": MatrixJson::from_matrix(&nc.c1),
            "C2": MatrixJson::from_matrix(&nc.c2),
            "r_spec_T_state": nc.r_spec_t_state,
            "central_sigma_max": sigma,
            "central_tail_slack": slack,
            "hat_M": hat_m,
        })),
    };
    let stdout = emit(io::to_canonical(&report), a.out.as_deref())?;
    Ok(Outcome { stdout, code: if pass { 0 } else { 1 } })
}

/// `max_k ‖Σⱼ Λ_{kj}G_j* − F₋ₖ*‖` over the leading corner.
fn g_solve_residual(p: &NehariProblem, g: &[CMatrix]) -> f64 {
    let u = p.u_dim;
    let lambda = nehari::gram(p);
    let mut worst: f64 = 0.0;
    for k in 0..g.len() {
        let mut acc = -p.tap(k + 1).adjoint();
        for (j, gj) in g.iter().enumerate() {
            acc += block(&lambda, k * u, j * u, u, u) * gj.adjoint();
        }
        worst = worst.max(operator_norm(&acc));
    }
    worst
}

pub fn cmd_verify(a: &VerifyArgs, start: Option<Instant>) -> Result<Outcome, CliError> {
    let tol = resolve_tol(a.tol)?;
    let instance = io::read_instance(&a.input)?;
    let file = io::read_solution(&a.solution)?;
    if file.kind != instance.kind() {
        return Err(CliError::Io(IoError::Schema(format!(
            "solution is for a {} instance, input is {}",
            file.kind,
            instance.kind()
        ))));
    }
    let series = file.series()?;
    let deg = a.degree.unwrap_or(series.degree()).min(series.degree());
    let (rows, sigma) = match &instance {
        Instance::Lifting(ds) => {
            let sol = crate::redheffer::SolutionTaylor { a_part: ds.a.clone(), gamma: series };
            let rep = verify_interpolant(ds, &sol, deg, tol)?;
            (rep.residuals, rep.sigma_max)
        }
        Instance::Nehari(p) => {
            if (series.rows, series.cols) != (p.y_dim, p.u_dim) {
                return Err(CliError::Io(IoError::Schema(format!(
                    "coefficients are {}x{}, expected {}x{}",
                    series.rows, series.cols, p.y_dim, p.u_dim
                ))));
            }
            let trimmed = truncate(&series, deg);
            let (rows, sigma, _) = nehari_rows(p, &trimmed, tol);
            (rows, sigma)
        }
    };
    let pass = all_pass(&rows);
    let report = RunReport {
        command: json!({
            "name": "verify",
            "input": a.input.display().to_string(),
            "solution": a.solution.display().to_string(),
            "degree": deg,
            "tol": tol,
        }),
        instance: digest(&instance),
        residuals: rows,
        pass,
        seed: None,
        timing_ms: elapsed(start),
        details: Some(json!({"sigma_max": sigma})),
    };
    let stdout = emit(io::to_canonical(&report), a.out.as_deref())?;
    Ok(Outcome { stdout, code: if pass { 0 } else { 1 } })
}

/// Keeps coefficients `0..=deg`; the dropped energy joins the tail bound.
fn truncate(s: &TaylorSeries, deg: usize) -> TaylorSeries {
    if deg >= s.degree() {
        return s.clone();
    }
    let dropped: f64 = s.coeffs[deg + 1..].iter().map(|c0| operator_norm(c0).powi(2)).sum();
    TaylorSeries::new(s.rows, s.cols, s.coeffs[..=deg].to_vec(), s.tail_bound.map(|t| t + dropped))
}

pub fn cmd_gen(a: &GenArgs) -> Result<Outcome, CliError> {
    if !(a.norm.is_finite() && (0.0..=1.0).contains(&a.norm)) {
        return Err(CliError::Usage(format!("--norm must lie in [0, 1], got {}", a.norm)));
    }
    let need = match a.kind {
        GenKind::Generic | GenKind::GenericIsometric => 3,
        GenKind::Nehari => 4,
        GenKind::Classical | GenKind::ClassicalShape => 2,
    };
    if a.dims.len() != need {
        return Err(CliError::Usage(format!("--kind {:?} needs {need} dimensions, got {}", a.kind, a.dims.len())));
    }
    let d = &a.dims;
    let positive = if a.kind == GenKind::Nehari { &d[..3] } else { &d[..] };
    if positive.contains(&0) {
        return Err(CliError::Usage("dimensions must be positive".into()));
    }
    let instance = match a.kind {
        GenKind::Nehari => {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(a.seed);
            Instance::Nehari(NehariProblem::random(&mut rng, d[0], d[1], d[2], d[3], a.norm))
        }
        kind => {
            let k = match kind {
                GenKind::Generic => InstanceKind::Generic { h_prime: d[0], h: d[1], h0: d[2], isometric: false },
                GenKind::GenericIsometric => InstanceKind::Generic { h_prime: d[0], h: d[1], h0: d[2], isometric: true },
                GenKind::Classical => InstanceKind::Classical { h_prime: d[0], h: d[1] },
                _ => InstanceKind::ClassicalShape { h_prime: d[0], h: d[1] },
            };
            Instance::Lifting(generate_random(&k, a.norm, a.seed).map_err(|e| CliError::Generator(e.to_string()))?)
        }
    };
    let stdout = emit(io::to_canonical(&instance.to_file()), a.out.as_deref())?;
    Ok(Outcome { stdout, code: 0 })
}

pub fn cmd_suite(a: &SuiteArgs, start: Option<Instant>) -> Result<Outcome, CliError> {
    let cfg = SuiteConfig { seeds: a.seeds, degree: a.degree };
    let rep = run_suite(&cfg);
    for c0 in &rep.criteria {
        eprintln!("{}", c0.line());
    }
    let mut v = serde_json::to_value(&rep).expect("suite report serializes");
    if let Some(t) = elapsed(start) {
        v["timing_ms"] = json!(t);
    }
    let stdout = emit(io::canonical_json(&v), a.out.as_deref())?;
    Ok(Outcome { stdout, code: if rep.pass { 0 } else { 1 } })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { stdout: text, code }
            } else {
                eprint!("{text}");
                Outcome { stdout: String::new(), code }
            }
        }
    }
}
