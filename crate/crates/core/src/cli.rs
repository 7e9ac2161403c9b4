//! Command dispatch for the `tcp-bounds` binary.
//!
//! Exit status: 0 on success, 1 when a mathematical hypothesis fails (non-P
//! tensor, degenerate `q`, rejected solution), 2 on I/O or validation errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{bound_report, compare_upper_bounds, BoundOptions, BoundReport, Diagnostic};
use crate::error::TcpError;
use crate::io::{parse_problem, ProblemFile};
use crate::operators::{
    alpha_f_best, alpha_f_diagonal, check_p_tensor_sampled, estimate_alpha, AlphaEstimate,
    AlphaKind, GridSpec, PVerdict,
};
use crate::report::{Format, Report, Value};
use crate::solve::{solve_enumerate, verify_solution, SolveOptions, TcpInstance, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tcp-bounds",
    version,
    about = "Error bounds for tensor complementarity problems with P-tensors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate alpha(F_A) (or alpha(T_A) with --kind t)
    Alpha {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = KindArg::F)]
        kind: KindArg,
    },
    /// Sampled P-tensor check
    CheckP {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Enumerate solutions by support enumeration
    Solve {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Verify a candidate solution given by --z or the file
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Bounds on the norm of any solution
    SolBounds {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// New and baseline absolute error bounds at --u
    Bounds {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Relative error bounds at --u
    RelBounds {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// All bounds side by side and the upper-bound ratio
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KindArg {
    F,
    T,
}

/// A comma separated vector taken as one argument value.
pub type Point = Vec<f64>;

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Problem file
    #[arg(long)]
    pub file: PathBuf,
    /// Test point, comma separated; overrides `u` in the file
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub u: Option<Point>,
    /// Solution, comma separated; overrides `z` in the file
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub z: Option<Point>,
    /// Grid points per axis for alpha estimates
    #[arg(long, default_value_t = GridSpec::default().points_per_axis)]
    pub grid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn parse_vector(s: &str) -> Result<Point, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect()
}

/// Result of one command: exit status and the text for stdout and stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_command(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

struct Failure {
    code: i32,
    message: String,
    report: Option<Report>,
}

impl From<TcpError> for Failure {
    fn from(e: TcpError) -> Self {
        let code = if e.is_hypothesis_failure() {
            EXIT_HYPOTHESIS
        } else {
            EXIT_INVALID
        };
        Failure {
            code,
            message: e.to_string(),
            report: None,
        }
    }
}

fn hypothesis(message: impl Into<String>, report: Report) -> Failure {
    Failure {
        code: EXIT_HYPOTHESIS,
        message: message.into(),
        report: Some(report),
    }
}

pub fn run_command(command: &Command) -> Outcome {
    let common = command.common();
    match dispatch(command) {
        Ok(report) => Outcome {
            code: EXIT_OK,
            stdout: report.render(common.format),
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: f
                .report
                .map(|r| r.render(common.format))
                .unwrap_or_default(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Alpha { common, .. }
            | Command::CheckP { common, .. }
            | Command::Solve { common }
            | Command::Verify { common }
            | Command::SolBounds { common }
            | Command::Bounds { common }
            | Command::RelBounds { common }
            | Command::Compare { common } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Alpha { .. } => "alpha",
            Command::CheckP { .. } => "check-p",
            Command::Solve { .. } => "solve",
            Command::Verify { .. } => "verify",
            Command::SolBounds { .. } => "sol-bounds",
            Command::Bounds { .. } => "bounds",
            Command::RelBounds { .. } => "rel-bounds",
            Command::Compare { .. } => "compare",
        }
    }
}

fn flag_list(flags: &[Diagnostic]) -> Value {
    Value::List(flags.iter().map(|f| f.as_str().to_string()).collect())
}

fn push_alpha(r: &mut Report, alpha: &AlphaEstimate) {
    r.real("alpha", alpha.value)
        .text("alpha_kind", alpha.kind.as_str())
        .text("alpha_method", alpha.method.as_str())
        .push("alpha_certified", Value::Bool(alpha.certified));
}

fn dispatch(command: &Command) -> Result<Report, Failure> {
    let common = command.common();
    let problem = parse_problem(&common.file)?;
    let inst = problem.instance()?;
    let grid = GridSpec::with_points(common.grid);
    let mut r = Report::new(command.name());

    match command {
        Command::Alpha { kind, .. } => {
            let a = inst.tensor();
            let est = match kind {
                KindArg::F if a.order() % 2 == 0 && a.is_positive_diagonal() => {
                    alpha_f_diagonal(a)?
                }
                KindArg::F => estimate_alpha(a, AlphaKind::F, grid)?,
                KindArg::T => estimate_alpha(a, AlphaKind::T, grid)?,
            };
            r.real("value", est.value)
                .text("kind", est.kind.as_str())
                .text("method", est.method.as_str())
                .push("certified", Value::Bool(est.certified))
                .push(
                    "grid_points_per_axis",
                    Value::Int(est.grid_points_per_axis as i64),
                )
                .push("refinement_steps", Value::Int(est.refinement_steps as i64))
                .vector("argmin", &est.argmin);
            if est.value <= 0.0 {
                // a sampled minimum can only overestimate, so this proves non-P
                r.text("verdict", "NOT_P");
                return Err(hypothesis(
                    format!("alpha estimate {} is not positive", est.value),
                    r,
                ));
            }
            Ok(r)
        }
        Command::CheckP { samples, .. } => {
            match check_p_tensor_sampled(inst.tensor(), *samples, common.seed) {
                PVerdict::LikelyP {
                    samples_evaluated,
                    min_objective,
                } => {
                    r.text("verdict", "LIKELY_P")
                        .push("samples_evaluated", Value::Int(samples_evaluated as i64))
                        .real("min_objective", min_objective);
                    Ok(r)
                }
                PVerdict::NotP { witness, objective } => {
                    r.text("verdict", "NOT_P")
                        .vector("witness", &witness)
                        .real("objective", objective);
                    Err(hypothesis("tensor is not a P-tensor", r))
                }
            }
        }
        Command::Solve { .. } => {
            let opts = SolveOptions {
                seed: common.seed,
                tol: common.tol,
                ..SolveOptions::default()
            };
            let sols = solve_enumerate(&inst, &opts)?;
            r.push("solutions", Value::Int(sols.len() as i64));
            for (k, c) in sols.iter().enumerate() {
                let k = k + 1;
                r.vector(format!("z_{k}"), &c.z)
                    .vector(format!("w_{k}"), &c.w)
                    .push(format!("support_{k}"), Value::Indices(c.support.clone()))
                    .real(format!("max_violation_{k}"), c.max_violation);
            }
            if sols.is_empty() {
                return Err(hypothesis("solver found no solution", r));
            }
            Ok(r)
        }
        Command::Verify { .. } => {
            let z = common
                .z
                .clone()
                .or_else(|| problem.z.clone())
                .ok_or_else(|| missing("z"))?;
            let cert = verify_solution(&inst, &z, common.tol)?;
            r.vector("z", &cert.z)
                .vector("w", &cert.w)
                .push("support", Value::Indices(cert.support.clone()))
                .real("max_violation", cert.max_violation)
                .real("tol", cert.tol)
                .push("pass", Value::Bool(cert.passed()));
            if !cert.passed() {
                return Err(hypothesis("candidate is not a solution", r));
            }
            Ok(r)
        }
        Command::SolBounds { .. } => {
            let alpha = alpha_f_best(inst.tensor(), grid)?;
            let (lb, ub) = crate::bounds::solution_norm_bounds(&inst, &alpha)?;
            push_alpha(&mut r, &alpha);
            r.real("sol_lb", lb).real("sol_ub", ub);
            let flags = if alpha.certified {
                vec![]
            } else {
                vec![Diagnostic::UncertifiedAlpha]
            };
            r.push("flags", flag_list(&flags));
            Ok(r)
        }
        Command::Bounds { .. } | Command::RelBounds { .. } | Command::Compare { .. } => {
            let report = full_report(&problem, &inst, common, grid)?;
            push_alpha(&mut r, &report.alpha);
            r.vector("z", &report.z)
                .vector("u", &report.u)
                .real("a_norm_root", report.a_norm_root)
                .vector("v", &report.residual.v)
                .real("v_inf", report.residual.v_inf)
                .push("t", Value::Int(report.residual.t as i64 + 1))
                .real("v_t", report.residual.v_t)
                .real("discriminant", report.discriminant)
                .real("error_inf", report.error_inf);
            match command {
                Command::Bounds { .. } => {
                    r.real("lb_new", report.lb_new)
                        .real("ub_new", report.ub_new)
                        .real("lb_base", report.lb_base)
                        .real("ub_base", report.ub_base)
                        .push("flags", flag_list(&report.flags));
                    Ok(r)
                }
                Command::RelBounds { .. } => {
                    r.push("flags", flag_list(&report.flags));
                    match (report.rel_lb, report.rel_ub) {
                        (Some(lb), Some(ub)) => {
                            r.real("rel_lb", lb).real("rel_ub", ub);
                            Ok(r)
                        }
                        _ if report.has_flag(Diagnostic::DegenerateQ) => {
                            Err(hypothesis(TcpError::DegenerateQ.to_string(), r))
                        }
                        _ => Err(hypothesis(TcpError::DegenerateZ.to_string(), r)),
                    }
                }
                _ => {
                    let ratio = compare_upper_bounds(&report)?;
                    let opt = |x: Option<f64>| {
                        x.map(Value::Real)
                            .unwrap_or(Value::Text("undefined".into()))
                    };
                    r.real("lb_new", report.lb_new)
                        .real("ub_new", report.ub_new)
                        .real("lb_base", report.lb_base)
                        .real("ub_base", report.ub_base)
                        .push("rel_lb", opt(report.rel_lb))
                        .push("rel_ub", opt(report.rel_ub))
                        .push("sol_lb", opt(report.sol_lb))
                        .push("sol_ub", opt(report.sol_ub))
                        .real("ratio_ub", ratio)
                        .push("flags", flag_list(&report.flags));
                    Ok(r)
                }
            }
        }
    }
}

fn missing(name: &str) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: format!(
            "missing required vector {name}: pass --{name} or set `{name}` in the problem file"
        ),
        report: None,
    }
}

fn resolve_u(problem: &ProblemFile, common: &CommonArgs) -> Result<Vec<f64>, Failure> {
    let u = common
        .u
        .clone()
        .or_else(|| problem.u.clone())
        .ok_or_else(|| missing("u"))?;
    if u.len() != problem.dim {
        return Err(TcpError::DimensionMismatch {
            expected: problem.dim,
            found: u.len(),
        }
        .into());
    }
    Ok(u)
}

fn full_report(
    problem: &ProblemFile,
    inst: &TcpInstance,
    common: &CommonArgs,
    grid: GridSpec,
) -> Result<BoundReport, Failure> {
    let u = resolve_u(problem, common)?;
    let mut flags = Vec::new();
    let z = match common.z.clone().or_else(|| problem.z.clone()) {
        Some(z) => z,
        None => {
            let opts = SolveOptions {
                seed: common.seed,
                tol: common.tol,
                ..SolveOptions::default()
            };
            let sols = solve_enumerate(inst, &opts)?;
            if sols.len() > 1 {
                flags.push(Diagnostic::MultipleSolutions);
            }
            sols.into_iter()
                .next()
                .ok_or_else(|| hypothesis("solver found no solution", Report::new("solve")))?
                .z
        }
    };
    let alpha = alpha_f_best(inst.tensor(), grid)?;
    let opts = BoundOptions {
        tol: common.tol,
        ..BoundOptions::default()
    };
    let mut report = bound_report(inst, &z, &u, &alpha, &opts)?;
    report.flags.extend(flags);
    Ok(report)
}
