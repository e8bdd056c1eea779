//! `riesz` — fractional-derivative approximations, Crank-Nicolson
//! solvers for Riesz reaction-dispersion problems, and the standard
//! convergence tables.
//!
//! Exit codes: 0 on success, 2 for invalid arguments, 3 for numerical
//! failures (singular systems, unreachable tolerances, IO errors).

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use riesz_core::coefficients::{coefficient_table, Family, FractionalOrder, Method};
use riesz_core::operators::CompactFormula;
use riesz_core::solver1d::{assemble1d, error_norms, exact_field, run1d, Problem1D};
use riesz_core::solver2d::{assemble2d, error_norms2d, exact_field2d, run2d, Problem2D};
use riesz_core::Error;

use riesz_cli::harness::{deriv_study, run_table, ErrorMetric, TableOverrides};
use riesz_cli::io::{emit, fmt_sci6};

#[derive(Parser)]
#[command(
    name = "riesz",
    version,
    about = "High-order approximations and solvers for Riesz fractional derivatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print leading coefficients of a fractional power-series family.
    Coeffs(CoeffsArgs),
    /// Evaluate a derivative formula on the bundled quartic profile.
    Deriv(DerivArgs),
    /// Run the 1D Crank-Nicolson solver on a bundled example problem.
    #[command(name = "solve1d")]
    Solve1d(Solve1dArgs),
    /// Run the 2D Crank-Nicolson solver on a bundled example problem.
    #[command(name = "solve2d")]
    Solve2d(Solve2dArgs),
    /// Reproduce one of the five standard convergence tables.
    Table(TableArgs),
}

#[derive(clap::Args)]
struct CoeffsArgs {
    /// Coefficient family.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Fractional derivative order in (1, 2).
    #[arg(long)]
    alpha: f64,
    /// Shift parameter (mu family only).
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Approximation order 1..=4 (mu family only).
    #[arg(long)]
    p: Option<u32>,
    /// Number of coefficients to print.
    #[arg(long)]
    count: usize,
    /// Generation route.
    #[arg(long, value_enum, default_value_t = MethodArg::Rec)]
    method: MethodArg,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(clap::Args)]
struct DerivArgs {
    /// Formula: the three compact schemes or the meshfree evaluator.
    #[arg(long, value_enum)]
    formula: FormulaArg,
    /// Fractional derivative order in (1, 2).
    #[arg(long)]
    alpha: f64,
    /// First shift of the combined formula (f9 only; default -1).
    #[arg(long, allow_negative_numbers = true)]
    s1: Option<f64>,
    /// Second shift of the combined formula (f9 only; default 1).
    #[arg(long, allow_negative_numbers = true)]
    s2: Option<f64>,
    /// Approximation order of the meshfree evaluator (gen only).
    #[arg(long)]
    p: Option<u32>,
    /// Shift of the meshfree evaluator (gen only).
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Spatial step.
    #[arg(long = "h")]
    h: f64,
    /// Evaluation point in [0, 1].
    #[arg(long = "at")]
    at: f64,
    /// Error metric: "a" solves the compact system, "b" measures the
    /// truncation residual at the node.
    #[arg(long, value_enum, default_value_t = MetricArg::B)]
    metric: MetricArg,
}

#[derive(clap::Args)]
struct Solve1dArgs {
    /// Fractional derivative order in (1, 2).
    #[arg(long)]
    alpha: f64,
    /// Number of spatial cells.
    #[arg(long = "M")]
    m: usize,
    /// Number of time steps over [0, 1].
    #[arg(long = "N")]
    n: usize,
    /// Bundled problem to solve.
    #[arg(long, value_enum, default_value_t = Example1dArg::Ex2)]
    example: Example1dArg,
    /// Write the final-time field (x,numeric,exact,error) to this file.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(clap::Args)]
struct Solve2dArgs {
    /// Fractional derivative order along x, in (1, 2).
    #[arg(long)]
    alpha: f64,
    /// Fractional derivative order along y, in (1, 2).
    #[arg(long)]
    beta: f64,
    /// Number of cells along x.
    #[arg(long = "Ma")]
    m_a: usize,
    /// Number of cells along y.
    #[arg(long = "Mb")]
    m_b: usize,
    /// Number of time steps over [0, 1].
    #[arg(long = "N")]
    n: usize,
    /// Bundled problem to solve.
    #[arg(long, value_enum, default_value_t = Example2dArg::Ex3)]
    example: Example2dArg,
    /// Write the final-time field (x,y,numeric,exact,error) to this file.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TableArgs {
    /// Table id, 1-5.
    #[arg(long)]
    id: u8,
    /// Comma-separated derivative orders (default: the standard five).
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Keep only the first K refinement levels.
    #[arg(long = "max-level")]
    max_level: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "grunwald")]
    Grunwald,
    #[value(name = "kappa2")]
    Kappa2,
    #[value(name = "kappa2t")]
    Kappa2Tilde,
    #[value(name = "mu")]
    Mu,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    #[value(name = "rec")]
    Rec,
    #[value(name = "conv")]
    Conv,
    #[value(name = "series")]
    Series,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    #[value(name = "csv")]
    Csv,
    #[value(name = "json")]
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    #[value(name = "f7")]
    F7,
    #[value(name = "f8")]
    F8,
    #[value(name = "f9")]
    F9,
    #[value(name = "gen")]
    Gen,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    #[value(name = "a")]
    A,
    #[value(name = "b")]
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example1dArg {
    #[value(name = "ex2")]
    Ex2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example2dArg {
    #[value(name = "ex3")]
    Ex3,
}

/// Binary-level error: numerical/validation failures from the core, or
/// IO failures while emitting output.
enum CliError {
    Core(Error),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_invalid_input() => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "output failed: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn invalid(msg: &str) -> CliError {
    CliError::Core(Error::InvalidArgument(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Deriv(args) => cmd_deriv(args),
        Command::Solve1d(args) => cmd_solve1d(args),
        Command::Solve2d(args) => cmd_solve2d(args),
        Command::Table(args) => cmd_table(args),
    }
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<(), CliError> {
    let order = FractionalOrder::new(args.alpha)?;
    let family = match args.family {
        FamilyArg::Mu => {
            let p = args.p.ok_or_else(|| invalid("--family mu requires --p"))?;
            let s = args.s.ok_or_else(|| invalid("--family mu requires --s"))?;
            Family::Mu { p, s }
        }
        other => {
            if args.p.is_some() || args.s.is_some() {
                return Err(invalid("--p/--s apply to the mu family only"));
            }
            match other {
                FamilyArg::Grunwald => Family::Grunwald,
                FamilyArg::Kappa2 => Family::Kappa2,
                FamilyArg::Kappa2Tilde => Family::Kappa2Tilde,
                FamilyArg::Mu => unreachable!("handled above"),
            }
        }
    };
    let method = match args.method {
        MethodArg::Rec => Method::Recursion,
        MethodArg::Conv => Method::Convolution,
        MethodArg::Series => Method::SeriesOracle,
    };
    let table = coefficient_table(family, &order, args.count, method)?;
    let content = match args.format {
        FormatArg::Csv => {
            let mut out = String::from("index,value\n");
            for (i, v) in table.values().iter().enumerate() {
                out.push_str(&format!("{i},{v}\n"));
            }
            out
        }
        FormatArg::Json => {
            let doc = serde_json::json!({
                "family": family_tag(args.family),
                "alpha": args.alpha,
                "p": table.p(),
                "s": table.s(),
                "method": method_tag(args.method),
                "count": args.count,
                "values": table.values(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
            s.push('\n');
            s
        }
    };
    emit(None, &content)?;
    Ok(())
}

fn family_tag(f: FamilyArg) -> &'static str {
    match f {
        FamilyArg::Grunwald => "grunwald",
        FamilyArg::Kappa2 => "kappa2",
        FamilyArg::Kappa2Tilde => "kappa2t",
        FamilyArg::Mu => "mu",
    }
}

fn method_tag(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Rec => "rec",
        MethodArg::Conv => "conv",
        MethodArg::Series => "series",
    }
}

fn cmd_deriv(args: DerivArgs) -> Result<(), CliError> {
    let order = FractionalOrder::new(args.alpha)?;
    let metric = match args.metric {
        MetricArg::A => ErrorMetric::Solve,
        MetricArg::B => ErrorMetric::Direct,
    };
    let (formula, generalized) = match args.formula {
        FormulaArg::Gen => {
            if args.s1.is_some() || args.s2.is_some() {
                return Err(invalid("--s1/--s2 apply to the f9 formula only"));
            }
            let p = args.p.ok_or_else(|| invalid("--formula gen requires --p"))?;
            let s = args.s.ok_or_else(|| invalid("--formula gen requires --s"))?;
            (None, Some((p, s)))
        }
        other => {
            if args.p.is_some() || args.s.is_some() {
                return Err(invalid("--p/--s apply to the gen formula only"));
            }
            let formula = match other {
                FormulaArg::F7 => {
                    reject_shifts(&args)?;
                    CompactFormula::F7
                }
                FormulaArg::F8 => {
                    reject_shifts(&args)?;
                    CompactFormula::F8
                }
                FormulaArg::F9 => CompactFormula::F9 {
                    s1: args.s1.unwrap_or(-1.0),
                    s2: args.s2.unwrap_or(1.0),
                },
                FormulaArg::Gen => unreachable!("handled above"),
            };
            (Some(formula), None)
        }
    };
    let report = deriv_study(formula, generalized, &order, args.h, args.at, metric)?;
    let mut out = String::from("formula,alpha,h,at,metric,value,exact,error\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{}\n",
        formula_tag(args.formula),
        args.alpha,
        args.h,
        args.at,
        metric.tag(),
        report.value,
        report.exact,
        fmt_sci6(report.error),
    ));
    emit(None, &out)?;
    Ok(())
}

fn reject_shifts(args: &DerivArgs) -> Result<(), CliError> {
    if args.s1.is_some() || args.s2.is_some() {
        return Err(invalid("--s1/--s2 apply to the f9 formula only"));
    }
    Ok(())
}

fn formula_tag(f: FormulaArg) -> &'static str {
    match f {
        FormulaArg::F7 => "f7",
        FormulaArg::F8 => "f8",
        FormulaArg::F9 => "f9",
        FormulaArg::Gen => "gen",
    }
}

fn cmd_solve1d(args: Solve1dArgs) -> Result<(), CliError> {
    let order = FractionalOrder::new(args.alpha)?;
    let Example1dArg::Ex2 = args.example;
    let problem = Problem1D::example2(order, 1.0)?;
    let scheme = assemble1d(&problem, args.m, args.n)?;
    let numeric = run1d(&scheme, &problem)?;
    let exact = exact_field(&problem, scheme.grid(), problem.final_time())
        .expect("the bundled problem carries its exact solution");
    let norms = error_norms(&numeric, &exact)?;
    let mut out = String::from("alpha,M,N,tau,h,max_abs,discrete_l2\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        args.alpha,
        args.m,
        args.n,
        fmt_sci6(scheme.tau()),
        fmt_sci6(scheme.h()),
        fmt_sci6(norms.max_abs),
        fmt_sci6(norms.discrete_l2),
    ));
    emit(None, &out)?;
    if let Some(path) = &args.dump {
        let mut dump = String::from("x,numeric,exact,error\n");
        for i in 0..=scheme.m() {
            let x = scheme.grid().node(i);
            let n_v = numeric.value(i);
            let e_v = exact.value(i);
            dump.push_str(&format!("{},{},{},{}\n", x, n_v, e_v, n_v - e_v));
        }
        emit(Some(path.as_path()), &dump)?;
    }
    Ok(())
}

fn cmd_solve2d(args: Solve2dArgs) -> Result<(), CliError> {
    let order_a = FractionalOrder::new(args.alpha)?;
    let order_b = FractionalOrder::new(args.beta)?;
    let Example2dArg::Ex3 = args.example;
    let problem = Problem2D::example3(order_a, order_b, 1.0)?;
    let scheme = assemble2d(&problem, args.m_a, args.m_b, args.n)?;
    let numeric = run2d(&scheme, &problem)?;
    let exact = exact_field2d(&problem, scheme.grid_a(), scheme.grid_b(), problem.final_time())
        .expect("the bundled problem carries its exact solution");
    let norms = error_norms2d(&numeric, &exact)?;
    let mut out = String::from("alpha,beta,Ma,Mb,N,tau,ha,hb,max_abs,discrete_l2\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{}\n",
        args.alpha,
        args.beta,
        args.m_a,
        args.m_b,
        args.n,
        fmt_sci6(scheme.tau()),
        fmt_sci6(scheme.grid_a().h()),
        fmt_sci6(scheme.grid_b().h()),
        fmt_sci6(norms.max_abs),
        fmt_sci6(norms.discrete_l2),
    ));
    emit(None, &out)?;
    if let Some(path) = &args.dump {
        let mut dump = String::from("x,y,numeric,exact,error\n");
        for j in 0..=scheme.m_b() {
            for i in 0..=scheme.m_a() {
                let x = scheme.grid_a().node(i);
                let y = scheme.grid_b().node(j);
                let n_v = numeric.value(i, j);
                let e_v = exact.value(i, j);
                dump.push_str(&format!("{},{},{},{},{}\n", x, y, n_v, e_v, n_v - e_v));
            }
        }
        emit(Some(path.as_path()), &dump)?;
    }
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<(), CliError> {
    let overrides = TableOverrides { alphas: args.alphas, max_level: args.max_level };
    let report = run_table(args.id, &overrides)?;
    let content = match args.format {
        FormatArg::Csv => report.to_csv(),
        FormatArg::Json => report.to_json(),
    };
    emit(args.out.as_deref(), &content)?;
    Ok(())
}
