//! Batch front end: JSON experiment configs in, `trace.csv` /
//! `result.json` / `compare.csv` out.
//!
//! Exit codes: 0 converged, 1 usage or parse error, 2 iteration budget
//! exhausted, 3 parameter violation, 4 divergence.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::diagnostics::{trace_stats, TraceSummary};
use crate::error::Error;
use crate::hilbert::Vector;
use crate::problems::{make_problem, InclusionProblem, ProblemSpec};
use crate::splitting::{
    baseline_solve, default_gamma, default_theta1, default_theta2, frab_solve, validate_baseline, validate_params,
    BaselineMethod, BaselineParams, FrabParams, InitialPoints, LambdaSchedule, SolveTrace, Status, StoppingRule,
    UpdateForm, Violation,
};

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MAX_ITER: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_DIVERGED: i32 = 4;

pub const TRACE_HEADER: &str = "k,residual,iterate_norm,lambda_k";
pub const COMPARE_HEADER: &str = "algorithm,theta1,theta2,iterations,final_residual,empirical_rate";

const DEFAULT_TOL: f64 = 1e-8;
const DEFAULT_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<AlgorithmConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithms: Option<Vec<AlgorithmConfig>>,
    #[serde(default, skip_serializing_if = "InitialConfig::is_empty")]
    pub initial: InitialConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

/// Either one start point (history `u_{-1} = u_0 = u_1`) or the full
/// history `[u_{-1}, u_0, u_1]`. Defaults to the origin.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
}

impl InitialConfig {
    fn is_empty(&self) -> bool {
        self.start.is_none() && self.points.is_none()
    }
}

/// One solver block, tagged by `name`. Missing fields take defaults
/// derived from the problem constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum AlgorithmConfig {
    Frab(FrabConfig),
    ForwardBackward(BaselineConfig),
    Tseng(BaselineConfig),
    Frb(BaselineConfig),
    InertialViscosityFbf(BaselineConfig),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrabConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<LambdaSchedule<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub update_form: Option<UpdateForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negate_theta1: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Inertia of the viscosity scheme.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Contraction factor of the viscosity scheme.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<LambdaSchedule<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

impl AlgorithmConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Frab(_) => "frab",
            Self::ForwardBackward(_) => "forward_backward",
            Self::Tseng(_) => "tseng",
            Self::Frb(_) => "frb",
            Self::InertialViscosityFbf(_) => "inertial_viscosity_fbf",
        }
    }

    /// Label if set, otherwise the algorithm name.
    pub fn display_name(&self) -> String {
        let label = match self {
            Self::Frab(c) => c.label.clone(),
            Self::ForwardBackward(c) | Self::Tseng(c) | Self::Frb(c) | Self::InertialViscosityFbf(c) => c.label.clone(),
        };
        label.unwrap_or_else(|| self.name().to_string())
    }

    fn baseline_method(&self) -> Option<BaselineMethod> {
        match self {
            Self::Frab(_) => None,
            Self::ForwardBackward(_) => Some(BaselineMethod::ForwardBackward),
            Self::Tseng(_) => Some(BaselineMethod::Tseng),
            Self::Frb(_) => Some(BaselineMethod::Frb),
            Self::InertialViscosityFbf(_) => Some(BaselineMethod::InertialViscosityFbf),
        }
    }

    /// Same block with every default filled in.
    pub fn resolve(&self, problem: &InclusionProblem<f64>, init: &InitialPoints<f64>) -> Self {
        let l = problem.lipschitz();
        let start = init.u_1.to_vec();
        match self {
            Self::Frab(c) => {
                let gamma = c.gamma.unwrap_or_else(|| default_gamma(l));
                let theta1 = c.theta1.unwrap_or_else(|| default_theta1(gamma, l));
                let theta2 = c.theta2.unwrap_or_else(|| default_theta2(theta1, gamma, l));
                Self::Frab(FrabConfig {
                    label: c.label.clone(),
                    gamma: Some(gamma),
                    theta1: Some(theta1),
                    theta2: Some(theta2),
                    anchor: Some(c.anchor.clone().unwrap_or(start)),
                    schedule: Some(c.schedule.unwrap_or_default()),
                    update_form: Some(c.update_form.unwrap_or_default()),
                    negate_theta1: Some(c.negate_theta1.unwrap_or(false)),
                    tol: Some(c.tol.unwrap_or(DEFAULT_TOL)),
                    max_iter: Some(c.max_iter.unwrap_or(DEFAULT_MAX_ITER)),
                })
            }
            other => {
                let c = other.baseline_config();
                let filled = BaselineConfig {
                    label: c.label.clone(),
                    gamma: Some(c.gamma.unwrap_or_else(|| default_gamma(l))),
                    theta: Some(c.theta.unwrap_or(0.1)),
                    kappa: Some(c.kappa.unwrap_or(0.5)),
                    anchor: Some(c.anchor.clone().unwrap_or(start)),
                    schedule: Some(c.schedule.unwrap_or_default()),
                    tol: Some(c.tol.unwrap_or(DEFAULT_TOL)),
                    max_iter: Some(c.max_iter.unwrap_or(DEFAULT_MAX_ITER)),
                };
                other.with_baseline_config(filled)
            }
        }
    }

    fn baseline_config(&self) -> &BaselineConfig {
        match self {
            Self::ForwardBackward(c) | Self::Tseng(c) | Self::Frb(c) | Self::InertialViscosityFbf(c) => c,
            Self::Frab(_) => unreachable!("frab has no baseline block"),
        }
    }

    fn with_baseline_config(&self, c: BaselineConfig) -> Self {
        match self {
            Self::ForwardBackward(_) => Self::ForwardBackward(c),
            Self::Tseng(_) => Self::Tseng(c),
            Self::Frb(_) => Self::Frb(c),
            Self::InertialViscosityFbf(_) => Self::InertialViscosityFbf(c),
            Self::Frab(_) => unreachable!("frab has no baseline block"),
        }
    }

    /// Stopping rule of a resolved block.
    fn stopping(&self) -> (f64, usize) {
        match self {
            Self::Frab(c) => (c.tol.unwrap_or(DEFAULT_TOL), c.max_iter.unwrap_or(DEFAULT_MAX_ITER)),
            other => {
                let c = other.baseline_config();
                (c.tol.unwrap_or(DEFAULT_TOL), c.max_iter.unwrap_or(DEFAULT_MAX_ITER))
            }
        }
    }

    /// `(θ1, θ2)` for the comparison table; methods without two-step
    /// inertia report their one-step weight (or 0) and 0.
    fn inertia(&self) -> (f64, f64) {
        match self {
            Self::Frab(c) => (c.theta1.unwrap_or(0.0), c.theta2.unwrap_or(0.0)),
            Self::InertialViscosityFbf(c) => (c.theta.unwrap_or(0.0), 0.0),
            _ => (0.0, 0.0),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("parameter violations:\n{}", .0.join("\n"))]
    Violations(Vec<String>),
    #[error("{0}")]
    Diverged(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io { .. } => EXIT_USAGE,
            Self::Violations(_) => EXIT_VIOLATION,
            Self::Diverged(_) => EXIT_DIVERGED,
        }
    }
}

pub fn exit_code_for(status: Status) -> i32 {
    match status {
        Status::Converged => EXIT_CONVERGED,
        Status::MaxIter => EXIT_MAX_ITER,
        Status::ParameterError => EXIT_VIOLATION,
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, HarnessError> {
    serde_json::from_str(text).map_err(|e| HarnessError::Usage(format!("config does not parse: {e}")))
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

/// A block ready to run.
#[derive(Debug, Clone)]
pub struct PreparedRun {
    pub resolved: AlgorithmConfig,
    solver: Solver,
}

#[derive(Debug, Clone)]
enum Solver {
    Frab(FrabParams<f64>),
    Baseline(BaselineMethod, BaselineParams<f64>),
}

/// Problem, starting history and validated blocks of one config.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub problem: InclusionProblem<f64>,
    pub init: InitialPoints<f64>,
    pub runs: Vec<PreparedRun>,
}

/// Builds the problem and resolves and validates every block. All
/// violations across blocks are reported together.
pub fn prepare(config: &ExperimentConfig, blocks: &[AlgorithmConfig]) -> Result<Prepared, HarnessError> {
    let problem = make_problem(&config.problem, config.seed)
        .map_err(|e| HarnessError::Usage(format!("problem {}: {e}", config.problem.kind_name())))?;
    let init = resolve_initial(&config.initial, problem.dim())?;
    let mut runs = Vec::with_capacity(blocks.len());
    let mut violations = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let resolved = block.resolve(&problem, &init);
        let (solver, found) = build_solver(&resolved, &problem)?;
        let tag = if blocks.len() > 1 { format!("block {} ({}): ", i + 1, resolved.display_name()) } else { String::new() };
        violations.extend(found.into_iter().map(|v| format!("{tag}{v}")));
        runs.push(PreparedRun { resolved, solver });
    }
    if violations.is_empty() {
        Ok(Prepared { problem, init, runs })
    } else {
        Err(HarnessError::Violations(violations))
    }
}

fn resolve_initial(c: &InitialConfig, dim: usize) -> Result<InitialPoints<f64>, HarnessError> {
    let vec = |v: &[f64], what: &str| -> Result<Vector<f64>, HarnessError> {
        if v.len() != dim {
            return Err(HarnessError::Usage(format!("{what} has dimension {} but the problem has {dim}", v.len())));
        }
        Vector::new(v.to_vec()).map_err(|e| HarnessError::Usage(format!("{what}: {e}")))
    };
    match (&c.start, &c.points) {
        (Some(_), Some(_)) => Err(HarnessError::Usage("initial: give either `start` or `points`, not both".into())),
        (Some(s), None) => Ok(InitialPoints::constant(vec(s, "initial.start")?)),
        (None, Some(p)) if p.len() == 3 => Ok(InitialPoints::new(
            vec(&p[0], "initial.points[0]")?,
            vec(&p[1], "initial.points[1]")?,
            vec(&p[2], "initial.points[2]")?,
        )),
        (None, Some(p)) => Err(HarnessError::Usage(format!(
            "initial.points needs exactly 3 points [u_-1, u_0, u_1], got {}",
            p.len()
        ))),
        (None, None) => Ok(InitialPoints::constant(Vector::zeros(dim))),
    }
}

fn build_solver(
    resolved: &AlgorithmConfig,
    problem: &InclusionProblem<f64>,
) -> Result<(Solver, Vec<Violation>), HarnessError> {
    let dim = problem.dim();
    let anchor_of = |a: &Option<Vec<f64>>| -> Result<Vector<f64>, HarnessError> {
        let a = a.as_deref().unwrap_or_default();
        if a.len() != dim {
            return Err(HarnessError::Usage(format!("anchor has dimension {} but the problem has {dim}", a.len())));
        }
        Vector::new(a.to_vec()).map_err(|e| HarnessError::Usage(format!("anchor: {e}")))
    };
    let (tol, max_iter) = resolved.stopping();
    let stopping = StoppingRule::new(tol, max_iter);
    let mut extra = Vec::new();
    if !(tol > 0.0 && tol.is_finite()) {
        extra.push(Violation::Other(format!("tolerance must be positive and finite, got {tol}")));
    }
    match resolved {
        AlgorithmConfig::Frab(c) => {
            let schedule = c.schedule.unwrap_or_default();
            let params = FrabParams {
                gamma: c.gamma.unwrap_or_default(),
                theta1: c.theta1.unwrap_or_default(),
                theta2: c.theta2.unwrap_or_default(),
                anchor: anchor_of(&c.anchor)?,
                schedule,
                stopping,
                update_form: c.update_form.unwrap_or_default(),
                negate_theta1: c.negate_theta1.unwrap_or(false),
            };
            let mut v = validate_params(
                params.gamma,
                params.theta1,
                params.theta2,
                problem.lipschitz(),
                problem.mu_f(),
                problem.mu_g(),
            )
            .violations;
            if let Err(e) = schedule.validate() {
                v.push(Violation::Other(e.to_string()));
            }
            v.extend(extra);
            Ok((Solver::Frab(params), v))
        }
        other => {
            let c = other.baseline_config();
            let method = other.baseline_method().expect("baseline block");
            let schedule = c.schedule.unwrap_or_default();
            let params = BaselineParams {
                gamma: c.gamma.unwrap_or_default(),
                theta: c.theta.unwrap_or_default(),
                kappa: c.kappa.unwrap_or_default(),
                anchor: anchor_of(&c.anchor)?,
                schedule,
                stopping,
            };
            let mut v = validate_baseline(method, &params, problem.lipschitz(), problem.mu_f()).violations;
            if let Err(e) = schedule.validate() {
                v.push(Violation::Other(e.to_string()));
            }
            v.extend(extra);
            Ok((Solver::Baseline(method, params), v))
        }
    }
}

/// Outcome of one solver run with its rendered artifacts.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub resolved: AlgorithmConfig,
    pub trace: SolveTrace<f64>,
    pub summary: TraceSummary,
    pub trace_csv: String,
    pub result_json: serde_json::Value,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        exit_code_for(self.trace.status)
    }
}

pub fn execute(prepared: &Prepared, run: &PreparedRun, config: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let (f, g) = (prepared.problem.f(), prepared.problem.g());
    let trace = match &run.solver {
        Solver::Frab(p) => frab_solve(f, g, p, &prepared.init),
        Solver::Baseline(m, p) => baseline_solve(*m, f, g, p, &prepared.init),
    }
    .map_err(|e| match e {
        Error::Divergence { .. } => HarnessError::Diverged(format!("{}: {e}", run.resolved.display_name())),
        Error::InfeasibleParameters(v) => HarnessError::Violations(v.iter().map(|v| v.to_string()).collect()),
        other => HarnessError::Usage(other.to_string()),
    })?;
    let summary = trace_stats(&trace).map_err(|e| HarnessError::Usage(e.to_string()))?;
    let trace_csv = render_trace_csv(&trace);
    let result_json = render_result(prepared, run, config, &trace, &summary);
    Ok(RunReport { resolved: run.resolved.clone(), trace, summary, trace_csv, result_json })
}

/// Prepares and runs the single `algorithm` block without touching disk.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let block = config
        .algorithm
        .clone()
        .ok_or_else(|| HarnessError::Usage("run needs an `algorithm` block".into()))?;
    let prepared = prepare(config, &[block])?;
    execute(&prepared, &prepared.runs[0], config)
}

/// One row per iteration: `k` is the step index, the residual and norm
/// belong to the iterate that step produced, `lambda_k` is the anchor
/// weight it used.
pub fn render_trace_csv(trace: &SolveTrace<f64>) -> String {
    let mut out = String::with_capacity(64 * (trace.iterations + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (i, ((r, n), l)) in trace.residuals.iter().zip(&trace.iterate_norms).zip(&trace.lambdas).enumerate() {
        writeln!(out, "{},{r:.16e},{n:.16e},{l:.16e}", i + 1).expect("write to string");
    }
    out
}

fn render_result(
    prepared: &Prepared,
    run: &PreparedRun,
    config: &ExperimentConfig,
    trace: &SolveTrace<f64>,
    summary: &TraceSummary,
) -> serde_json::Value {
    let init = &prepared.init;
    let points = vec![init.u_m1.to_vec(), init.u_0.to_vec(), init.u_1.to_vec()];
    let echo = ExperimentConfig {
        problem: config.problem.clone(),
        algorithm: Some(run.resolved.clone()),
        algorithms: None,
        initial: InitialConfig { start: None, points: Some(points.clone()) },
        out_dir: None,
        seed: config.seed,
    };
    let p = &prepared.problem;
    json!({
        "status": trace.status.as_str(),
        "iterations": trace.iterations,
        "final": trace.final_point.to_vec(),
        "final_residual": summary.final_residual,
        "rate": summary.rate,
        "params": run.resolved,
        "problem": {
            "spec": config.problem,
            "label": p.label(),
            "dim": p.dim(),
            "lipschitz": p.lipschitz(),
            "mu_f": p.mu_f(),
            "mu_g": p.mu_g(),
        },
        "initial": { "points": points },
        "seed": config.seed,
        "config": echo,
    })
}

/// Writes `contents` to a sibling temp file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io { path: path.to_path_buf(), source };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let mut file = fs::File::create(&tmp).map_err(io)?;
    file.write_all(contents).map_err(io)?;
    file.sync_all().map_err(io)?;
    drop(file);
    fs::rename(&tmp, path).map_err(io)
}

fn write_run(dir: &Path, report: &RunReport) -> Result<(), HarnessError> {
    write_atomic(&dir.join("trace.csv"), report.trace_csv.as_bytes())?;
    let json = serde_json::to_string_pretty(&report.result_json).expect("result serializes");
    write_atomic(&dir.join("result.json"), format!("{json}\n").as_bytes())
}

#[derive(Debug, Clone, Default)]
pub struct CliOptions {
    pub out_dir: Option<PathBuf>,
    pub quiet: bool,
}

fn out_dir(opts: &CliOptions, config: &ExperimentConfig) -> PathBuf {
    opts.out_dir.clone().or_else(|| config.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."))
}

fn report_error(e: &HarnessError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

/// `run <config>`: returns the process exit code.
pub fn run_command(path: &Path, opts: &CliOptions) -> i32 {
    match try_run(path, opts) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    }
}

fn try_run(path: &Path, opts: &CliOptions) -> Result<i32, HarnessError> {
    let config = load_config(path)?;
    let report = run_experiment(&config)?;
    let dir = out_dir(opts, &config);
    write_run(&dir, &report)?;
    if !opts.quiet {
        println!(
            "{}: {} after {} iterations, residual {:.3e}, rate {:.4} -> {}",
            report.resolved.display_name(),
            report.trace.status.as_str(),
            report.trace.iterations,
            report.summary.final_residual,
            report.summary.rate,
            dir.display()
        );
    }
    Ok(report.exit_code())
}

/// `compare <config>`: runs every block concurrently on one problem.
pub fn compare_command(path: &Path, opts: &CliOptions) -> i32 {
    match try_compare(path, opts) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    }
}

fn compare_blocks(config: &ExperimentConfig) -> Vec<AlgorithmConfig> {
    match (&config.algorithms, &config.algorithm) {
        (Some(list), _) if !list.is_empty() => list.clone(),
        (_, Some(one)) => vec![one.clone()],
        _ => Vec::new(),
    }
}

/// Runs all blocks of `config` (no disk I/O); rows follow block order.
pub fn compare_experiment(config: &ExperimentConfig) -> Result<Vec<RunReport>, HarnessError> {
    let blocks = compare_blocks(config);
    if blocks.is_empty() {
        return Err(HarnessError::Usage("no algorithms configured".into()));
    }
    let prepared = prepare(config, &blocks)?;
    let stopping = prepared.runs[0].resolved.stopping();
    if prepared.runs.iter().any(|r| r.resolved.stopping() != stopping) {
        return Err(HarnessError::Usage("compare needs the same tol and max_iter in every block".into()));
    }
    let results: Vec<Result<RunReport, HarnessError>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            prepared.runs.iter().map(|run| s.spawn(|| execute(&prepared, run, config))).collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });
    results.into_iter().collect()
}

pub fn render_compare_csv(reports: &[RunReport]) -> String {
    let mut out = String::from(COMPARE_HEADER);
    out.push('\n');
    for r in reports {
        let (t1, t2) = r.resolved.inertia();
        writeln!(
            out,
            "{},{t1:.16e},{t2:.16e},{},{:.16e},{:.16e}",
            csv_field(&r.resolved.display_name()),
            r.trace.iterations,
            r.summary.final_residual,
            r.summary.rate
        )
        .expect("write to string");
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn try_compare(path: &Path, opts: &CliOptions) -> Result<i32, HarnessError> {
    let config = load_config(path)?;
    let reports = compare_experiment(&config)?;
    let dir = out_dir(opts, &config);
    for (i, r) in reports.iter().enumerate() {
        write_run(&dir.join(format!("{:02}_{}", i + 1, sanitize(&r.resolved.display_name()))), r)?;
    }
    write_atomic(&dir.join("compare.csv"), render_compare_csv(&reports).as_bytes())?;
    if !opts.quiet {
        for r in &reports {
            println!(
                "{:<24} {:<10} {:>8} iterations  residual {:.3e}",
                r.resolved.display_name(),
                r.trace.status.as_str(),
                r.trace.iterations,
                r.summary.final_residual
            );
        }
    }
    Ok(EXIT_CONVERGED)
}

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// `validate <config>`: resolves and checks every block without solving.
pub fn validate_command(path: &Path, opts: &CliOptions) -> i32 {
    let result = load_config(path).and_then(|config| {
        let blocks = compare_blocks(&config);
        if blocks.is_empty() {
            return Err(HarnessError::Usage("no algorithms configured".into()));
        }
        prepare(&config, &blocks)
    });
    match result {
        Ok(prepared) => {
            if !opts.quiet {
                for run in &prepared.runs {
                    println!("ok: {}", serde_json::to_string(&run.resolved).expect("block serializes"));
                }
            }
            EXIT_CONVERGED
        }
        Err(e) => report_error(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> ExperimentConfig {
        parse_config(text).unwrap()
    }

    #[test]
    fn parse_minimal_and_roundtrip() {
        let c = config(r#"{"problem": {"kind": "vi_rotation"}, "algorithm": {"name": "frab"}}"#);
        assert_eq!(c.seed, 0);
        assert_eq!(c.algorithm, Some(AlgorithmConfig::Frab(FrabConfig::default())));
        let back = parse_config(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_config(r#"{"problem": {"kind": "vi_rotation"}, "algoritm": {"name": "frab"}}"#).is_err());
        assert!(parse_config(r#"{"problem": {"kind": "vi_rotation"}, "algorithm": {"name": "sgd"}}"#).is_err());
        assert!(parse_config("{").is_err());
    }

    #[test]
    fn resolve_fills_every_default() {
        let c = config(
            r#"{"problem": {"kind": "vi_rotation"}, "algorithm": {"name": "frab", "gamma": 0.2},
                "initial": {"start": [1, -1]}}"#,
        );
        let prepared = prepare(&c, &[c.algorithm.clone().unwrap()]).unwrap();
        let AlgorithmConfig::Frab(r) = &prepared.runs[0].resolved else { panic!() };
        let t1 = default_theta1(0.2, 1.0);
        assert_eq!(r.theta1, Some(t1));
        assert_eq!(r.theta2, Some(default_theta2(t1, 0.2, 1.0)));
        assert_eq!(r.anchor, Some(vec![1.0, -1.0]));
        assert_eq!((r.tol, r.max_iter), (Some(1e-8), Some(1_000_000)));
        assert!(r.schedule.is_some() && r.update_form.is_some() && r.negate_theta1.is_some());
    }

    #[test]
    fn violations_exit_three() {
        let c = config(r#"{"problem": {"kind": "vi_rotation"}, "algorithm": {"name": "frab", "gamma": 0.5}}"#);
        let err = run_experiment(&c).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VIOLATION);
        assert!(err.to_string().contains("γ ∈ (0, 1/(2L))"), "{err}");
    }

    #[test]
    fn box_problem_projects_anchor() {
        let c = config(
            r#"{"problem": {"kind": "composite", "f": {"kind": "normal_cone_box", "lower": [-1, -1], "upper": [1, 1]},
                            "g": {"kind": "zero", "dim": 2}},
                "algorithm": {"name": "frab", "anchor": [5, 5]}}"#,
        );
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.exit_code(), EXIT_CONVERGED);
        let f = r.result_json["final"].as_array().unwrap();
        assert!((f[0].as_f64().unwrap() - 1.0).abs() < 1e-3 && (f[1].as_f64().unwrap() - 1.0).abs() < 1e-3);
        for key in ["status", "iterations", "final", "rate", "params", "problem"] {
            assert!(r.result_json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn result_echo_reproduces_the_run() {
        let c = config(
            r#"{"problem": {"kind": "weak_pair", "mu_f": -0.5, "mu_g": 1}, "algorithm": {"name": "frab", "gamma": 0.4},
                "initial": {"start": [1.5]}, "seed": 7}"#,
        );
        let first = run_experiment(&c).unwrap();
        let echo: ExperimentConfig = serde_json::from_value(first.result_json["config"].clone()).unwrap();
        let again = run_experiment(&echo).unwrap();
        assert_eq!(first.trace_csv, again.trace_csv);
        assert_eq!(again.result_json["params"], first.result_json["params"]);
    }

    #[test]
    fn trace_csv_format() {
        let c = config(
            r#"{"problem": {"kind": "vi_rotation"}, "algorithm": {"name": "frab", "gamma": 0.2, "max_iter": 3, "tol": 1e-16},
                "initial": {"start": [1, -1]}}"#,
        );
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.exit_code(), EXIT_MAX_ITER);
        let lines: Vec<&str> = r.trace_csv.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines.len(), 4);
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields[0], "1");
        assert_eq!(fields[3], "5.0000000000000000e-1");
        let mantissa = fields[1].split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    }

    #[test]
    fn compare_rows_and_errors() {
        let c = config(
            r#"{"problem": {"kind": "vi_affine", "matrix": [[1, 0], [0, 2]], "offset": [-1, -4]},
                "algorithms": [{"name": "frab", "gamma": 0.1, "theta1": 0.1, "theta2": -0.05, "tol": 1e-5},
                               {"name": "frab", "gamma": 0.1, "theta1": 0.1, "theta2": 0, "tol": 1e-5},
                               {"name": "frb", "tol": 1e-5}],
                "initial": {"start": [0, 0]}}"#,
        );
        let reports = compare_experiment(&c).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.trace.status == Status::Converged));
        let csv = render_compare_csv(&reports);
        assert_eq!(csv.lines().next().unwrap(), COMPARE_HEADER);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(3).unwrap().starts_with("frb,"));

        let empty = config(r#"{"problem": {"kind": "vi_rotation"}, "algorithms": []}"#);
        let err = compare_experiment(&empty).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert_eq!(err.to_string(), "no algorithms configured");

        let bad = config(
            r#"{"problem": {"kind": "vi_rotation"}, "algorithms": [{"name": "frb"}, {"name": "tseng", "gamma": 2}]}"#,
        );
        let err = compare_experiment(&bad).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VIOLATION);
        assert!(err.to_string().contains("block 2 (tseng)"), "{err}");
    }

    #[test]
    fn initial_point_errors() {
        let both = config(
            r#"{"problem": {"kind": "vi_rotation"}, "algorithm": {"name": "frab"},
                "initial": {"start": [0, 0], "points": [[0, 0], [0, 0], [0, 0]]}}"#,
        );
        assert_eq!(run_experiment(&both).unwrap_err().exit_code(), EXIT_USAGE);
        let wrong = config(r#"{"problem": {"kind": "vi_rotation"}, "algorithm": {"name": "frab"}, "initial": {"start": [0]}}"#);
        assert_eq!(run_experiment(&wrong).unwrap_err().exit_code(), EXIT_USAGE);
        let bad_problem = config(r#"{"problem": {"kind": "weak_pair", "mu_f": -1, "mu_g": 0.5}, "algorithm": {"name": "frab"}}"#);
        assert_eq!(run_experiment(&bad_problem).unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nested").join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
