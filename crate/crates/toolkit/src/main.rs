//! `bergman`: verification, evaluation, growth study, extremal search and
//! projection from the command line.
//!
//! Exit status: 0 success, 1 a check or bound failed, 2 usage, input or I/O
//! error.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bergman_core::diskquad::QuadratureSpec;
use bergman_core::extremal::{Family, SearchConfig};
use bergman_core::funcspace::CompactMonomial;
use bergman_core::norms::{bloch_seminorm, functional_p};
use bergman_core::operators::{
    adjoint_series, project, project_monomial_closed, project_polynomial_series, AdjointForm,
};
use bergman_core::{Complex64, Error};
use bergman_toolkit::fnspec::FunctionSpec;
use bergman_toolkit::report::{self, Format, SearchSummary};
use bergman_toolkit::search::search_parallel;
use bergman_toolkit::verify::{self, VerifyConfig, GROWTH_MAX_N};
use bergman_toolkit::ToolkitError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "bergman",
    version,
    about = "Adjoint Bergman projection toolkit"
)]
struct Cli {
    /// JSON file with default values for any flag; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Evaluate quantities of a function given as a JSON spec.
    Eval(EvalArgs),
    /// Growth of the adjoint on the normalized family at z_n = 1 - 1/n.
    Growth(GrowthArgs),
    /// Search for large ratios 𝒫(f)/‖f‖_B.
    Extremal(ExtremalArgs),
    /// Bergman projection of a compact monomial or a polynomial.
    Project(ProjectArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    Structured,
    Csv,
}

#[derive(Args, Default)]
struct Common {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol")]
    tol: Vec<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Run only this check; repeatable.
    #[arg(long)]
    only: Vec<String>,
    /// Let the g_z^n Bloch check gate the aggregate result.
    #[arg(long)]
    strict_gzn: bool,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, Debug)]
enum Query {
    Value,
    Derivative,
    Bloch,
    PFunctional,
    Adjoint,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    /// Function spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Quantity to compute; repeatable. Defaults to all of them.
    #[arg(long, value_enum)]
    query: Vec<Query>,
    /// Evaluation point `re,im` for value, derivative and adjoint.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
}

#[derive(Args)]
struct GrowthArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Args)]
struct ExtremalArgs {
    #[command(flatten)]
    common: Common,
    /// Polynomial degree (ignored with --atoms).
    #[arg(long)]
    degree: Option<usize>,
    /// Search over combinations of this many Möbius atoms.
    #[arg(long)]
    atoms: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    step_init: Option<f64>,
    #[arg(long)]
    step_tol: Option<f64>,
    /// History CSV path (restart, iteration, value).
    #[arg(long)]
    history: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectArgs {
    #[command(flatten)]
    common: Common,
    /// Compact monomial `a,b,R` for conj(w)^a w^b on |w| < R.
    #[arg(long)]
    monomial: Option<String>,
    /// Polynomial function spec; prints the series projection coefficients.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
}

/// Config file contents; every field optional, unknown keys rejected.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    alpha: Option<f64>,
    beta: Option<f64>,
    seed: Option<u64>,
    #[serde(default)]
    tol: BTreeMap<String, f64>,
    only: Option<Vec<String>>,
    strict_gzn: Option<bool>,
    spec: Option<PathBuf>,
    query: Option<Vec<String>>,
    z: Option<[f64; 2]>,
    n_min: Option<usize>,
    n_max: Option<usize>,
    degree: Option<usize>,
    atoms: Option<usize>,
    restarts: Option<usize>,
    iterations: Option<usize>,
    step_init: Option<f64>,
    step_tol: Option<f64>,
    history: Option<PathBuf>,
    monomial: Option<[f64; 3]>,
}

/// Command failure: `Check` maps to exit 1, everything else to 2.
enum Failure {
    Check(String),
    Input(ToolkitError),
}

impl From<ToolkitError> for Failure {
    fn from(e: ToolkitError) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Input(ToolkitError::Usage(msg.into()))
}

fn read_file(path: &Path) -> Result<String, ToolkitError> {
    std::fs::read_to_string(path).map_err(|source| ToolkitError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, ToolkitError> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|source| ToolkitError::Io {
                path: p.to_path_buf(),
                source,
            }),
    }
}

fn finish(mut w: Box<dyn Write>) -> Result<(), ToolkitError> {
    w.flush()?;
    Ok(())
}

fn parse_point(text: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.parse::<f64>()).collect();
    match nums {
        Ok(v) if v.len() == 2 => Ok(Complex64::new(v[0], v[1])),
        _ => Err(usage(format!("expected `re,im`, got `{text}`"))),
    }
}

struct Resolved {
    out: Option<PathBuf>,
    format: Format,
    alpha: Option<f64>,
    beta: Option<f64>,
    seed: Option<u64>,
    tol: BTreeMap<String, f64>,
}

fn resolve(common: &Common, file: &FileConfig) -> Result<Resolved, Failure> {
    let mut tol = file.tol.clone();
    for item in &common.tol {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("--tol expects name=value, got `{item}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| usage(format!("--tol {name}: `{value}` is not a number")))?;
        tol.insert(name.trim().to_string(), value);
    }
    let format = match common
        .format
        .or(file.format)
        .unwrap_or(FormatArg::Structured)
    {
        FormatArg::Structured => Format::Structured,
        FormatArg::Csv => Format::Csv,
    };
    Ok(Resolved {
        out: common.out.clone().or_else(|| file.out.clone()),
        format,
        alpha: common.alpha.or(file.alpha),
        beta: common.beta.or(file.beta),
        seed: common.seed.or(file.seed),
        tol,
    })
}

fn cmd_verify(args: &VerifyArgs, file: &FileConfig) -> Outcome {
    let r = resolve(&args.common, file)?;
    let mut config = VerifyConfig::default();
    if let Some(alpha) = r.alpha {
        config.alpha = alpha;
    }
    if let Some(seed) = r.seed {
        config.seed = seed;
    }
    config.strict_gzn = args.strict_gzn || file.strict_gzn.unwrap_or(false);
    for (name, value) in &r.tol {
        config.set_tolerance(name, *value)?;
    }
    let only = if args.only.is_empty() {
        file.only.clone()
    } else {
        Some(args.only.clone())
    };
    if let Some(only) = only {
        config.select(only)?;
    }
    let out = open_out(r.out.as_deref())?;
    let reports = verify::run_all(&config);
    let pass = verify::aggregate_pass(&reports);
    let mut out = out;
    report::write_verify(&mut out, &reports, pass, r.format)?;
    finish(out)?;
    for rep in &reports {
        eprintln!(
            "{:<12} {}",
            rep.name,
            if rep.pass {
                "pass"
            } else if rep.informational {
                "note"
            } else {
                "FAIL"
            }
        );
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Check("verification failed".into()))
    }
}

#[derive(Serialize)]
struct EvalRow {
    quantity: String,
    value: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    at: Option<[f64; 2]>,
}

fn cmd_eval(args: &EvalArgs, file: &FileConfig) -> Outcome {
    let r = resolve(&args.common, file)?;
    let spec_path = args
        .spec
        .clone()
        .or_else(|| file.spec.clone())
        .ok_or_else(|| usage("eval needs --spec"))?;
    let f = FunctionSpec::parse(&read_file(&spec_path)?)?.build()?;
    let mut queries = args.query.clone();
    if queries.is_empty() {
        if let Some(names) = &file.query {
            for n in names {
                queries.push(
                    Query::from_str(n, true).map_err(|_| usage(format!("unknown query `{n}`")))?,
                );
            }
        }
    }
    if queries.is_empty() {
        queries = vec![
            Query::Value,
            Query::Derivative,
            Query::Bloch,
            Query::PFunctional,
            Query::Adjoint,
        ];
    }
    let z = match (&args.z, file.z) {
        (Some(text), _) => parse_point(text)?,
        (None, Some([re, im])) => Complex64::new(re, im),
        (None, None) => Complex64::new(0.5, 0.0),
    };
    let beta = r.beta.unwrap_or(2.0);
    let mut rows = Vec::new();
    let pair = |c: Complex64| vec![c.re, c.im];
    for q in queries {
        let (quantity, value, at) = match q {
            Query::Value => ("value", pair(f.eval(z)?), Some([z.re, z.im])),
            Query::Derivative => ("derivative", pair(f.eval_deriv(z)?), Some([z.re, z.im])),
            Query::Bloch => {
                let s = bloch_seminorm(&f);
                (
                    "bloch_seminorm",
                    vec![s.value],
                    Some([s.argmax.re, s.argmax.im]),
                )
            }
            Query::PFunctional => {
                let s = functional_p(&f);
                (
                    "p_functional",
                    vec![s.value],
                    Some([s.argmax.re, s.argmax.im]),
                )
            }
            Query::Adjoint => {
                let form = AdjointForm::new(beta)?;
                (
                    "adjoint",
                    pair(adjoint_series(&f, form, z)?),
                    Some([z.re, z.im]),
                )
            }
        };
        rows.push(EvalRow {
            quantity: quantity.into(),
            value,
            at,
        });
    }
    let mut out = open_out(r.out.as_deref())?;
    match r.format {
        Format::Structured => report::write_json(&mut out, &rows)?,
        Format::Csv => {
            writeln!(out, "quantity,re,im")?;
            for row in &rows {
                writeln!(
                    out,
                    "{},{},{}",
                    row.quantity,
                    row.value[0],
                    row.value.get(1).copied().unwrap_or(0.0)
                )?;
            }
        }
    }
    finish(out)?;
    Ok(())
}

fn cmd_growth(args: &GrowthArgs, file: &FileConfig) -> Outcome {
    let r = resolve(&args.common, file)?;
    let alpha = r.alpha.unwrap_or(-1.0);
    if !(alpha > -2.0 && alpha <= -1.0) {
        return Err(usage(format!("--alpha {alpha} outside (-2, -1]")));
    }
    let n_min = args.n_min.or(file.n_min).unwrap_or(64);
    let n_max = args.n_max.or(file.n_max).unwrap_or(8192);
    if n_max > GROWTH_MAX_N {
        return Err(usage(format!(
            "n_max {n_max} exceeds the closed-form range {GROWTH_MAX_N}"
        )));
    }
    if n_min < 2 || n_min >= n_max {
        return Err(usage("need 2 <= n_min < n_max"));
    }
    let mut tol = 0.15;
    for (name, value) in &r.tol {
        if name != "growth" {
            return Err(usage(format!("unknown tolerance `{name}` for growth")));
        }
        tol = *value;
    }
    let mut grid = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        grid.push(n);
        n *= 2;
    }
    let rows = grid
        .iter()
        .map(|&n| Ok((n, verify::growth_value(n, alpha)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let points: Vec<(f64, f64)> = rows.iter().map(|&(n, v)| (n as f64, v)).collect();
    let slope = verify::loglog_slope(&points);
    let mut out = open_out(r.out.as_deref())?;
    report::write_growth(&mut out, &rows, slope)?;
    finish(out)?;
    let target = 2.0 + alpha;
    let ok = (slope - target).abs() <= tol;
    eprintln!(
        "slope {slope:.6}, expected {target} ± {tol}: {}",
        if ok { "pass" } else { "FAIL" }
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("slope outside window".into()))
    }
}

fn cmd_extremal(args: &ExtremalArgs, file: &FileConfig) -> Outcome {
    let r = resolve(&args.common, file)?;
    if !r.tol.is_empty() {
        return Err(usage("extremal takes no tolerance overrides"));
    }
    let defaults = SearchConfig::default();
    let family = match args.atoms.or(file.atoms) {
        Some(atoms) => Family::MobiusCombo { atoms },
        None => Family::Polynomial {
            degree: args
                .degree
                .or(file.degree)
                .unwrap_or(match defaults.family {
                    Family::Polynomial { degree } => degree,
                    Family::MobiusCombo { .. } => 21,
                }),
        },
    };
    let config = SearchConfig {
        family,
        restarts: args.restarts.or(file.restarts).unwrap_or(defaults.restarts),
        iterations: args
            .iterations
            .or(file.iterations)
            .unwrap_or(defaults.iterations),
        seed: r.seed.unwrap_or(defaults.seed),
        step_init: args
            .step_init
            .or(file.step_init)
            .unwrap_or(defaults.step_init),
        step_tol: args.step_tol.or(file.step_tol).unwrap_or(defaults.step_tol),
    };
    config.validate()?;
    let result = match search_parallel(&config) {
        Ok(r) => r,
        Err(e @ Error::BoundViolation { .. }) => return Err(Failure::Check(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let mut out = open_out(r.out.as_deref())?;
    match r.format {
        Format::Structured => report::write_json(&mut out, &SearchSummary::from(&result))?,
        Format::Csv => report::write_history(&mut out, &result)?,
    }
    finish(out)?;
    if let Some(path) = args.history.clone().or_else(|| file.history.clone()) {
        let mut h = open_out(Some(&path))?;
        report::write_history(&mut h, &result)?;
        finish(h)?;
    }
    eprintln!(
        "best ratio {:.9} over {} restarts",
        result.best_value, result.restarts_run
    );
    Ok(())
}

#[derive(Serialize)]
struct ProjectOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    closed: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature_error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<[f64; 2]>>,
}

fn cmd_project(args: &ProjectArgs, file: &FileConfig) -> Outcome {
    let r = resolve(&args.common, file)?;
    let mut output = ProjectOutput {
        closed: None,
        quadrature: None,
        quadrature_error_estimate: None,
        coefficients: None,
    };
    let monomial = match (&args.monomial, file.monomial) {
        (Some(text), _) => {
            let v: Vec<&str> = text.split(',').map(str::trim).collect();
            let parsed = (v.len() == 3)
                .then(|| {
                    Some((
                        v[0].parse::<u32>().ok()?,
                        v[1].parse::<u32>().ok()?,
                        v[2].parse::<f64>().ok()?,
                    ))
                })
                .flatten();
            Some(parsed.ok_or_else(|| usage(format!("--monomial expects a,b,R, got `{text}`")))?)
        }
        (None, Some([a, b, radius])) => {
            if a < 0.0
                || b < 0.0
                || a.fract() != 0.0
                || b.fract() != 0.0
                || a > u32::MAX as f64
                || b > u32::MAX as f64
            {
                return Err(usage("monomial exponents must be nonnegative integers"));
            }
            Some((a as u32, b as u32, radius))
        }
        (None, None) => None,
    };
    let spec_path = args.spec.clone().or_else(|| file.spec.clone());
    match (monomial, spec_path) {
        (Some((a, b, radius)), None) => {
            let fm = CompactMonomial::new(a, b, radius)?;
            let z = match (&args.z, file.z) {
                (Some(text), _) => parse_point(text)?,
                (None, Some([re, im])) => Complex64::new(re, im),
                (None, None) => Complex64::new(0.0, 0.0),
            };
            let closed = project_monomial_closed(&fm, z)?;
            let quad = project(&fm, z, &QuadratureSpec::default())?;
            output.closed = Some([closed.re, closed.im]);
            output.quadrature = Some([quad.value.re, quad.value.im]);
            output.quadrature_error_estimate = Some(quad.error_estimate);
        }
        (None, Some(path)) => {
            let spec = FunctionSpec::parse(&read_file(&path)?)?;
            let FunctionSpec::Polynomial { coeffs } = &spec else {
                return Err(usage("project --spec needs a polynomial"));
            };
            spec.build()?;
            let c: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
            output.coefficients = Some(
                project_polynomial_series(&c)
                    .iter()
                    .map(|c| [c.re, c.im])
                    .collect(),
            );
        }
        _ => return Err(usage("project needs exactly one of --monomial or --spec")),
    }
    let mut out = open_out(r.out.as_deref())?;
    report::write_json(&mut out, &output)?;
    finish(out)?;
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let file = match &cli.config {
        Some(path) => serde_json::from_str::<FileConfig>(&read_file(path)?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Verify(a) => cmd_verify(a, &file),
        Command::Eval(a) => cmd_eval(a, &file),
        Command::Growth(a) => cmd_growth(a, &file),
        Command::Extremal(a) => cmd_extremal(a, &file),
        Command::Project(a) => cmd_project(a, &file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("bergman: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("bergman: {e}");
            ExitCode::from(2)
        }
    }
}
