//! The `selmer` command-line tool.
//!
//! Subcommands: `table`, `constants`, `verify`, `perron`, `fit`. Exit codes:
//! 0 success, 1 failed verification or numerical failure, 2 invalid
//! configuration (including an unknown instance), 3 coverage exceeded,
//! 4 I/O failure.

pub mod config;
pub mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use selmer_core::analysis::{
    circle_identity_report, digamma, dirichlet_l1, ein, exp_integral_e1, gamma_euler,
    perron_truncated, ContourSpec, PerronReport, EULER_GAMMA,
};
use selmer_core::lfunc::{load_coefficients, LeadingSource};
use selmer_core::mertens::{fit_decay, mertens_constant_m_limit, DecayFit, M1Constant, MConstant};
use selmer_core::{LeadingCoefficient, Mertens, MertensConfig, ReportKind, ScanOptions, SelbergInstance};

pub use config::{parse_bound, parse_grid, ConfigFile};
pub use output::{read_column, rows_to_csv, Row, CSV_HEADER};

/// Names accepted by `--instance`.
pub const INSTANCES: [&str; 5] = ["zeta", "dirichlet", "dedekind", "rankin-delta", "rankin"];

/// Default `--tau-n` for `rankin-delta`.
pub const DEFAULT_TAU_N: usize = 100_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown instance `{0}`; valid instances: zeta, dirichlet, dedekind, rankin-delta, rankin")]
    UnknownInstance(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0} check(s) failed")]
    VerifyFailed(usize),
    #[error(transparent)]
    Core(#[from] selmer_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use selmer_core::Error as E;
        match self {
            CliError::UnknownInstance(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 4,
            CliError::VerifyFailed(_) => 1,
            CliError::Core(e) => match e {
                E::Coverage { .. } => 3,
                E::Io(_) => 4,
                E::Capacity { .. }
                | E::Format { .. }
                | E::DeligneBound { .. }
                | E::Gap { .. }
                | E::Domain(_) => 2,
                E::InsufficientData { .. } | E::Pole | E::Quadrature { .. } | E::Accuracy { .. } => 1,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "selmer", version, about = "Mertens theorems for Selberg-class L-functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one report kind over an x-grid.
    Table(TableArgs),
    /// Leading coefficient, M and M1 with their error estimates.
    Constants(ConstantsArgs),
    /// Circle-contour and special-function identity checks.
    Verify(VerifyArgs),
    /// Truncated Perron integral against the partial Dirichlet sum.
    Perron(PerronArgs),
    /// Fit the decay of a residual column from a table.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for prime sums.
    #[arg(long, env = "SELMER_THREADS", global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InstanceArgs {
    /// One of zeta, dirichlet, dedekind, rankin-delta, rankin.
    #[arg(long)]
    pub instance: Option<String>,
    /// Fundamental discriminant for dirichlet and dedekind.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    /// Coefficient file for f (rankin).
    #[arg(long)]
    pub coeff_f: Option<PathBuf>,
    /// Coefficient file for g (rankin); defaults to f.
    #[arg(long)]
    pub coeff_g: Option<PathBuf>,
    /// Weight of the coefficient files.
    #[arg(long)]
    pub weight: Option<u32>,
    /// Number of tau values for rankin-delta.
    #[arg(long)]
    pub tau_n: Option<usize>,
    /// Leading coefficient for rankin instances instead of the empirical fit.
    #[arg(long, allow_hyphen_values = true)]
    pub leading: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BoundArgs {
    /// Truncation bound for M.
    #[arg(long, value_parser = parse_bound)]
    pub pmax: Option<u64>,
    /// Integration bound for the M1 integral estimator.
    #[arg(long, value_parser = parse_bound)]
    pub umax: Option<u64>,
    /// Bound for the limit estimators and the empirical leading coefficient.
    #[arg(long, value_parser = parse_bound)]
    pub xmax: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// mertens1, mertens2, mertens3 or pnt.
    #[arg(long)]
    pub kind: Option<String>,
    /// `start:stop:log10`, `start:stop:log10/N` or a comma list.
    #[arg(long)]
    pub xs: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Tolerance for the integral identities; checks with a tighter
    /// documented tolerance keep it.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PerronArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_parser = parse_bound)]
    pub x: Option<u64>,
    /// Segment height; defaults to exp(sqrt(log x)).
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Table written by `selmer table`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Column to fit against x.
    #[arg(long)]
    pub column: Option<String>,
}

/// Options shared by every subcommand after merging flags and config file.
struct Resolved {
    file: ConfigFile,
    scan: ScanOptions,
    out: Option<PathBuf>,
    format: Option<Format>,
}

fn resolve(common: &CommonArgs) -> Result<Resolved, CliError> {
    let file = match &common.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let threads: Option<usize> = file.pick(common.threads, "threads")?;
    if threads == Some(0) {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    let out = file.pick(common.out.clone(), "out")?;
    let format = file.pick(common.format, "format")?;
    Ok(Resolved {
        scan: ScanOptions {
            threads,
            ..ScanOptions::default()
        },
        file,
        out,
        format,
    })
}

fn require<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required setting `{what}`")))
}

/// Builds the instance named by the flags and config file.
pub fn build_instance(args: &InstanceArgs, file: &ConfigFile) -> Result<SelbergInstance, CliError> {
    let name: String = require(file.pick(args.instance.clone(), "instance")?, "instance")?;
    let d: Option<i64> = file.pick(args.d, "d")?;
    let leading: Option<f64> = file.pick(args.leading, "leading")?;
    if leading.is_some() && !name.starts_with("rankin") {
        return Err(CliError::Usage(format!("--leading applies to rankin instances, not {name}")));
    }
    let inst = match name.as_str() {
        "zeta" => SelbergInstance::zeta(),
        "dirichlet" => SelbergInstance::dirichlet(require(d, "d")?)?,
        "dedekind" => SelbergInstance::dedekind_quadratic(require(d, "d")?)?,
        "rankin-delta" => {
            let n = file.pick(args.tau_n, "tau-n")?.unwrap_or(DEFAULT_TAU_N);
            SelbergInstance::rankin_delta_with_leading(n, leading)?
        }
        "rankin" => {
            let weight = file.pick(args.weight, "weight")?.unwrap_or(12);
            let f_path: PathBuf = require(file.pick(args.coeff_f.clone(), "coeff-f")?, "coeff-f")?;
            let f = Arc::new(load_coefficients(&f_path, weight)?);
            let g = match file.pick(args.coeff_g.clone(), "coeff-g")? {
                Some(p) if p != f_path => Arc::new(load_coefficients(&p, weight)?),
                _ => f.clone(),
            };
            SelbergInstance::rankin_selberg(f, g, leading)?
        }
        other => return Err(CliError::UnknownInstance(other.to_string())),
    };
    Ok(inst)
}

fn mertens_config(b: &BoundArgs, r: &Resolved) -> Result<MertensConfig, CliError> {
    let bound = |flag: Option<u64>, key: &str| -> Result<Option<u64>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => match r.file.get::<String>(key)? {
                Some(s) => parse_bound(&s).map(Some).map_err(CliError::Usage),
                None => Ok(None),
            },
        }
    };
    let d = MertensConfig::default();
    Ok(MertensConfig {
        p_max: bound(b.pmax, "pmax")?.unwrap_or(d.p_max),
        u_max: bound(b.umax, "umax")?.unwrap_or(d.u_max),
        x_max: bound(b.xmax, "xmax")?.unwrap_or(d.x_max),
        scan: r.scan,
    })
}

fn check_format(f: Option<Format>, allowed: &[Format], default: Format) -> Result<Format, CliError> {
    let f = f.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!("format {f:?} is not available for this command")))
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

/// Evaluates `kind` for every x on the grid.
pub fn table_rows(
    instance: &SelbergInstance,
    config: MertensConfig,
    kind: ReportKind,
    xs: &[f64],
) -> Result<Vec<Row>, CliError> {
    let ctx = Mertens::new(instance, config);
    xs.iter()
        .map(|&x| Ok(Row::from(&ctx.report(kind, x)?)))
        .collect()
}

fn cmd_table(a: &TableArgs) -> Result<(), CliError> {
    let r = resolve(&a.common)?;
    let instance = build_instance(&a.instance, &r.file)?;
    let kind: ReportKind = require(r.file.pick(a.kind.clone(), "kind")?, "kind")?
        .parse()
        .map_err(|e: selmer_core::Error| CliError::Usage(e.to_string()))?;
    let xs = parse_grid(&require(r.file.pick(a.xs.clone(), "xs")?, "xs")?)?;
    let config = mertens_config(&a.bounds, &r)?;
    let format = check_format(r.format, &[Format::Csv, Format::Json], Format::Csv)?;
    if let Some(cov) = instance.coverage() {
        if let Some(&x) = xs.iter().find(|&&x| x.floor() as u64 > cov) {
            return Err(selmer_core::Error::Coverage { p: x.floor() as u64, max_x: cov }.into());
        }
    }
    let rows = r.scan.install(|| table_rows(&instance, config, kind, &xs))??;
    let bytes = match format {
        Format::Json => to_json(&rows)?,
        _ => rows_to_csv(&rows)?,
    };
    output::emit(r.out.as_deref(), &bytes)
}

#[derive(Debug, Clone, Serialize)]
pub struct LeadingReport {
    #[serde(flatten)]
    pub coefficient: LeadingCoefficient,
    #[serde(flatten)]
    pub source: LeadingSource,
}

/// Output of `selmer constants`.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub instance: String,
    pub degree: usize,
    pub pole_order: i32,
    pub leading: LeadingReport,
    pub m: MConstant,
    /// `sum_{p <= x_max} b(p)/p - m log log x_max`.
    pub m_limit: f64,
    pub m_gap: f64,
    pub m1: M1Constant,
}

pub fn constants_report(instance: &SelbergInstance, config: MertensConfig) -> Result<ConstantsReport, CliError> {
    let ctx = Mertens::new(instance, config);
    let leading = ctx.leading()?;
    let m = ctx.m_constant()?;
    let x_lim = instance.coverage().map_or(config.x_max, |c| c.min(config.x_max));
    let m_limit = mertens_constant_m_limit(instance, x_lim as f64, &config.scan)?;
    let m1 = ctx.m1_constant()?;
    Ok(ConstantsReport {
        instance: instance.name().to_string(),
        degree: instance.degree(),
        pole_order: instance.pole_order(),
        leading: LeadingReport {
            coefficient: leading,
            source: instance.leading_source(),
        },
        m_gap: (m.value - m_limit).abs(),
        m,
        m_limit,
        m1,
    })
}

fn constants_text(c: &ConstantsReport) -> String {
    let f = output::fmt_f64;
    let mut s = String::new();
    let _ = writeln!(s, "instance         {} (k = {}, m = {})", c.instance, c.degree, c.pole_order);
    let _ = writeln!(
        s,
        "leading c        {} +- {} ({})",
        f(c.leading.coefficient.value),
        f(c.leading.coefficient.uncertainty),
        match c.leading.source {
            LeadingSource::Exact { .. } => "exact",
            LeadingSource::AnalyticL1 { .. } => "L(1, chi)",
            LeadingSource::Config { .. } => "configured",
            LeadingSource::EmpiricalFit => "empirical fit",
        }
    );
    let _ = writeln!(s, "M                {} (tail bound {}, P = {})", f(c.m.value), f(c.m.tail_bound), c.m.p_max);
    let _ = writeln!(s, "M limit          {} (gap {})", f(c.m_limit), f(c.m_gap));
    let _ = writeln!(s, "M1 integral      {} (U = {})", f(c.m1.integral_estimate), c.m1.u_max);
    let _ = writeln!(s, "M1 limit         {} (x = {})", f(c.m1.limit_estimate), c.m1.x_max);
    let _ = writeln!(s, "M1 gap           {}", f(c.m1.gap));
    match (&c.m1.envelope, c.m1.tail_uncertainty) {
        (Some(env), Some(t)) => {
            let _ = writeln!(s, "M1 tail          {} (fitted C = {})", f(t), f(env.c_estimate));
        }
        (Some(env), None) => {
            let _ = writeln!(s, "M1 tail          unavailable (fitted C = {} is not positive)", f(env.c_estimate));
        }
        _ => {
            let _ = writeln!(s, "M1 tail          unavailable (too few envelope points)");
        }
    }
    if let Some(w) = &c.m1.warning {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

fn cmd_constants(a: &ConstantsArgs) -> Result<(), CliError> {
    let r = resolve(&a.common)?;
    let instance = build_instance(&a.instance, &r.file)?;
    let config = mertens_config(&a.bounds, &r)?;
    let format = check_format(r.format, &[Format::Text, Format::Json], Format::Text)?;
    let report = r.scan.install(|| constants_report(&instance, config))??;
    let bytes = match format {
        Format::Json => to_json(&report)?,
        _ => constants_text(&report).into_bytes(),
    };
    output::emit(r.out.as_deref(), &bytes)
}

/// One line of `selmer verify`.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub parameter: Option<f64>,
    pub computed: f64,
    pub expected: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerifyCheck {
    fn new(name: &str, parameter: Option<f64>, computed: f64, expected: f64, abs_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            parameter,
            computed,
            expected,
            abs_error,
            tolerance,
            pass: abs_error <= tolerance,
        }
    }
}

/// Default tolerance for the integral identities.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-9;

/// Circle identities at these arguments.
pub const CIRCLE_POINTS: [f64; 3] = [0.1, 1.0, 5.0];

/// `Ein(w) = gamma + log w + E1(w)` at these arguments.
pub const EIN_E1_POINTS: [f64; 5] = [1e-3, 0.1, 1.0, 5.0, 20.0];

const CIRCLE_QUAD_TOL: f64 = 1e-13;
const CIRCLE_MAX_NODES: usize = 1 << 20;

/// All identity checks; `tol` only ever tightens the documented tolerances.
pub fn verify_checks(tol: f64) -> Result<Vec<VerifyCheck>, CliError> {
    let mut out = Vec::new();
    for w in CIRCLE_POINTS {
        let rep = circle_identity_report(w, CIRCLE_QUAD_TOL, CIRCLE_MAX_NODES)?;
        for c in &rep.checks {
            let limit = if c.name == "circle_mean" { 1e-10 } else { DEFAULT_VERIFY_TOL };
            out.push(VerifyCheck::new(c.name, Some(w), c.lhs_re, c.rhs_re, c.abs_error, limit.min(tol)));
        }
    }
    let g = gamma_euler();
    out.push(VerifyCheck::new("gamma_euler", None, g, EULER_GAMMA, (g - EULER_GAMMA).abs(), 1e-12f64.min(tol)));
    for w in EIN_E1_POINTS {
        let lhs = ein(w);
        let rhs = EULER_GAMMA + w.ln() + exp_integral_e1(w);
        out.push(VerifyCheck::new("ein_e1_identity", Some(w), lhs, rhs, (lhs - rhs).abs(), 1e-10f64.min(tol)));
    }
    let dg = digamma(1.0);
    out.push(VerifyCheck::new("digamma_one", None, dg, -EULER_GAMMA, (dg + EULER_GAMMA).abs(), 1e-10f64.min(tol)));
    let l1 = dirichlet_l1(-4)?;
    let pi4 = std::f64::consts::FRAC_PI_4;
    out.push(VerifyCheck::new("dirichlet_l1_minus4", None, l1, pi4, (l1 - pi4).abs(), 1e-10f64.min(tol)));
    Ok(out)
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let r = resolve(&a.common)?;
    let tol: f64 = r.file.pick(a.tol, "tol")?.unwrap_or(DEFAULT_VERIFY_TOL);
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let format = check_format(r.format, &[Format::Text, Format::Json], Format::Text)?;
    let checks = verify_checks(tol)?;
    let bytes = match format {
        Format::Json => to_json(&checks)?,
        _ => {
            let mut s = String::new();
            for c in &checks {
                let param = c.parameter.map(|w| format!(" w={w}")).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{} {}{}: computed {} expected {} |error| {:.3e} <= {:.0e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    param,
                    output::fmt_f64(c.computed),
                    output::fmt_f64(c.expected),
                    c.abs_error,
                    c.tolerance
                );
            }
            s.into_bytes()
        }
    };
    output::emit(r.out.as_deref(), &bytes)?;
    match checks.iter().filter(|c| !c.pass).count() {
        0 => Ok(()),
        n => Err(CliError::VerifyFailed(n)),
    }
}

/// Default x for `selmer perron`.
pub const DEFAULT_PERRON_X: u64 = 1_000;

pub fn perron_report(
    instance: &SelbergInstance,
    x: f64,
    t_max: Option<f64>,
    quad_tol: Option<f64>,
    scan: &ScanOptions,
) -> Result<PerronReport, CliError> {
    let mut spec = ContourSpec::new(x)?;
    if let Some(t) = t_max {
        spec = spec.with_t_max(t)?;
    }
    if let Some(tol) = quad_tol {
        spec = spec.with_quadrature(tol, spec.max_nodes)?;
    }
    Ok(perron_truncated(instance, &spec, scan)?)
}

fn cmd_perron(a: &PerronArgs) -> Result<(), CliError> {
    let r = resolve(&a.common)?;
    let mut inst_args = a.instance.clone();
    if inst_args.instance.is_none() && r.file.get::<String>("instance")?.is_none() {
        inst_args.instance = Some("zeta".into());
    }
    let instance = build_instance(&inst_args, &r.file)?;
    let x = match a.x {
        Some(x) => x,
        None => match r.file.get::<String>("x")? {
            Some(s) => parse_bound(&s).map_err(CliError::Usage)?,
            None => DEFAULT_PERRON_X,
        },
    };
    let t_max = r.file.pick(a.t_max, "t-max")?;
    let tol = r.file.pick(a.tol, "tol")?;
    let format = check_format(r.format, &[Format::Text, Format::Json], Format::Text)?;
    let rep = perron_report(&instance, x as f64, t_max, tol, &r.scan)?;
    let bytes = match format {
        Format::Json => to_json(&rep)?,
        _ => {
            let f = output::fmt_f64;
            format!(
                "instance      {}\nx             {}\nb             {}\nT             {}\nintegral      {} {:+e}i\npartial sum   {}\ngap           {}\nnodes         {}\n",
                instance.name(),
                rep.x,
                f(rep.b),
                f(rep.t_max),
                f(rep.integral_re),
                rep.integral_im,
                f(rep.partial_sum),
                f(rep.gap),
                rep.nodes
            )
            .into_bytes()
        }
    };
    output::emit(r.out.as_deref(), &bytes)
}

/// Fits the decay of `column` against x in a table file.
pub fn fit_table(path: &Path, column: &str) -> Result<DecayFit, CliError> {
    Ok(fit_decay(&read_column(path, column)?)?)
}

fn cmd_fit(a: &FitArgs) -> Result<(), CliError> {
    let r = resolve(&a.common)?;
    let input: PathBuf = require(r.file.pick(a.input.clone(), "in")?, "in")?;
    let column = r.file.pick(a.column.clone(), "column")?.unwrap_or_else(|| "residual".into());
    let format = check_format(r.format, &[Format::Text, Format::Json], Format::Text)?;
    let fit = fit_table(&input, &column)?;
    let bytes = match format {
        Format::Json => to_json(&fit)?,
        _ => {
            let f = output::fmt_f64;
            format!(
                "points        {}\ndropped       {}\nC             {}\nintercept     {}\nrms misfit    {}\n",
                fit.points.len(),
                fit.dropped,
                f(fit.c_estimate),
                f(fit.intercept),
                f(fit.rms_misfit)
            )
            .into_bytes()
        }
    };
    output::emit(r.out.as_deref(), &bytes)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Table(a) => cmd_table(a),
        Command::Constants(a) => cmd_constants(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Perron(a) => cmd_perron(a),
        Command::Fit(a) => cmd_fit(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::UnknownInstance("x".into()).exit_code(), 2);
        assert_eq!(CliError::Io("x".into()).exit_code(), 4);
        assert_eq!(CliError::VerifyFailed(1).exit_code(), 1);
        let cov = selmer_core::Error::Coverage { p: 10, max_x: 5 };
        assert_eq!(CliError::from(cov).exit_code(), 3);
    }

    #[test]
    fn instance_building() {
        let file = ConfigFile::default();
        let mut a = InstanceArgs {
            instance: Some("dedekind".into()),
            d: Some(-4),
            ..Default::default()
        };
        assert_eq!(build_instance(&a, &file).unwrap().degree(), 2);
        a.instance = Some("nope".into());
        assert!(matches!(build_instance(&a, &file), Err(CliError::UnknownInstance(_))));
        a.instance = Some("dirichlet".into());
        a.d = None;
        assert!(matches!(build_instance(&a, &file), Err(CliError::Usage(_))));
        a.instance = Some("zeta".into());
        a.leading = Some(1.0);
        assert!(matches!(build_instance(&a, &file), Err(CliError::Usage(_))));
    }

    #[test]
    fn config_supplies_instance() {
        let file = ConfigFile::parse("instance = dirichlet\nd = 5").unwrap();
        let inst = build_instance(&InstanceArgs::default(), &file).unwrap();
        assert_eq!(inst.discriminant(), Some(5));
        let a = InstanceArgs {
            d: Some(-8),
            ..Default::default()
        };
        assert_eq!(build_instance(&a, &file).unwrap().discriminant(), Some(-8));
    }

    #[test]
    fn verify_suite_passes() {
        let checks = verify_checks(DEFAULT_VERIFY_TOL).unwrap();
        assert_eq!(checks.len(), 3 * CIRCLE_POINTS.len() + 1 + EIN_E1_POINTS.len() + 2);
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
        // a tighter request is honored, a looser one is not
        assert!(verify_checks(1e-30).unwrap().iter().any(|c| !c.pass));
        assert!(verify_checks(1.0).unwrap().iter().all(|c| c.tolerance <= DEFAULT_VERIFY_TOL));
    }
}
