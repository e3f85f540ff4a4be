//! Command-line front end: problem definition via flags or a flat config
//! file, evaluation, classification, tracing, sweeps, and limit-point
//! reports. Output is CSV on stdout (header always present, LF endings);
//! diagnostics go to stderr with disjoint exit codes per failure class.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use funeq::error::Error;
use funeq::expr::ParseError;
use funeq::interval::format_extents;
use funeq::oracle::residual_sweep;
use funeq::parity::{Parity, ParityDomain, ParityProblem};
use funeq::penlp::{classify, constraint_witness, validate_initial_set, Classification, WitnessVerdict};
use funeq::scale::{make_scale_problem, ScaleProblem};
use funeq::shift_scale::{make_problem, ShiftScaleProblem};
use funeq::three_term::ThreeTermProblem;
use funeq::{EquationSpec, Expr, InitialData, Interval, IntervalUnion};

const EXIT_INTERNAL: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_OUT_OF_DOMAIN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "funeq",
    about = "Initial value problems for shift/scale/parity functional equations",
    after_help = "Config file: flat key=value lines (equation, b, init-set, init-fn, \
                  init-on, tol, unsafe); command-line flags take precedence."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Equation family: periodic | shift-scale | scale | even | odd | three-term
    #[arg(long, global = true)]
    equation: Option<String>,

    /// Scale factor of the equation (shift-scale and scale families)
    #[arg(long, global = true, allow_negative_numbers = true)]
    b: Option<f64>,

    /// Initial set, e.g. "[1,2)" or "(-1,-0.5]u[0.5,1)"
    #[arg(long = "init-set", global = true)]
    init_set: Option<String>,

    /// Initial function expression; repeatable, paired in order with --init-on
    #[arg(long = "init-fn", global = true)]
    init_fn: Vec<String>,

    /// Interval a repeated --init-fn applies to
    #[arg(long = "init-on", global = true)]
    init_on: Vec<String>,

    /// Optional flat key=value config file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Comparison tolerance for sweeps and witness verdicts
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,

    /// Proceed past a failed initial-set validation (witness only)
    #[arg(long = "unsafe", global = true)]
    unsafe_mode: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the extension at query points; CSV "x,y"
    Eval {
        #[arg(allow_negative_numbers = true)]
        queries: Vec<f64>,
    },
    /// Well-posedness verdict for the initial interval
    Classify,
    /// Iteration trace from a query point into the initial set; CSV "n,x_n,side"
    Trace {
        #[arg(allow_negative_numbers = true)]
        x: f64,
    },
    /// Evaluate over a grid and report the defining-equation residual
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, allow_negative_numbers = true)]
        step: f64,
    },
    /// The limit points of the selected equation family
    LimitPoints,
    /// Candidate values of y(x) at several iteration depths
    Witness {
        #[arg(allow_negative_numbers = true)]
        x: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        depths: Vec<u32>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::IntervalSyntax(_) | Error::InvalidInterval(_) => EXIT_PARSE,
            Error::OutOfDomain { .. } | Error::Domain(_) => EXIT_OUT_OF_DOMAIN,
            Error::Penlp { .. }
            | Error::Shape { .. }
            | Error::ZeroB
            | Error::Argument(_)
            | Error::Coverage { .. }
            | Error::Overlap { .. }
            | Error::Degenerate { .. } => EXIT_VALIDATION,
            Error::RecursionDepth(_) | Error::IterationCap(_) | Error::Internal(_) => {
                EXIT_INTERNAL
            }
        };
        Failure::new(code, format!("error: {e}"))
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::from(Error::from(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Fully resolved run configuration after merging flags over the config file.
struct RunConfig {
    equation: String,
    b: Option<f64>,
    init_set: Option<String>,
    init_fn: Vec<String>,
    init_on: Vec<String>,
    tol: f64,
    unsafe_mode: bool,
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut equation = cli.equation.clone();
    let mut b = cli.b;
    let mut init_set = cli.init_set.clone();
    let mut init_fn = cli.init_fn.clone();
    let mut init_on = cli.init_on.clone();
    let mut tol = cli.tol;
    let mut unsafe_mode = cli.unsafe_mode;

    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::new(EXIT_VALIDATION, format!("error: cannot read {}: {e}", path.display()))
        })?;
        let mut file_fns = Vec::new();
        let mut file_ons = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::new(
                    EXIT_VALIDATION,
                    format!("error: {}:{}: expected key=value", path.display(), lineno + 1),
                ));
            };
            let (key, value) = (key.trim(), value.trim().to_string());
            match key {
                "equation" => {
                    equation.get_or_insert(value);
                }
                "b" => {
                    let parsed = parse_flag_number(key, &value)?;
                    b.get_or_insert(parsed);
                }
                "init-set" => {
                    init_set.get_or_insert(value);
                }
                "init-fn" => file_fns.push(value),
                "init-on" => file_ons.push(value),
                "tol" => {
                    let parsed = parse_flag_number(key, &value)?;
                    tol.get_or_insert(parsed);
                }
                "unsafe" => unsafe_mode = unsafe_mode || value == "true" || value == "1",
                other => {
                    return Err(Failure::new(
                        EXIT_VALIDATION,
                        format!("error: {}:{}: unknown key `{other}`", path.display(), lineno + 1),
                    ))
                }
            }
        }
        if init_fn.is_empty() {
            init_fn = file_fns;
            init_on = file_ons;
        }
    }

    let equation = equation.ok_or_else(|| {
        Failure::new(EXIT_VALIDATION, "error: --equation is required (flag or config)")
    })?;
    Ok(RunConfig {
        equation,
        b,
        init_set,
        init_fn,
        init_on,
        tol: tol.unwrap_or(1e-9),
        unsafe_mode,
    })
}

fn parse_flag_number(key: &str, value: &str) -> Result<f64, Failure> {
    value.parse::<f64>().map_err(|_| {
        Failure::new(EXIT_VALIDATION, format!("error: `{value}` is not a number for {key}"))
    })
}

enum Problem {
    ShiftScale(ShiftScaleProblem),
    Scale(ScaleProblem),
    Parity(ParityProblem),
    ThreeTerm(ThreeTermProblem),
}

impl Problem {
    fn evaluate(&self, x: f64) -> Result<f64, Error> {
        match self {
            Problem::ShiftScale(p) => p.evaluate(x),
            Problem::Scale(p) => p.evaluate(x),
            Problem::Parity(p) => p.extend(x),
            Problem::ThreeTerm(p) => p.evaluate(x),
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let config = resolve_config(&cli)?;
    match cli.command {
        Command::Eval { queries } => cmd_eval(&config, &queries),
        Command::Classify => cmd_classify(&config),
        Command::Trace { x } => cmd_trace(&config, x),
        Command::Sweep { from, to, step } => cmd_sweep(&config, from, to, step),
        Command::LimitPoints => cmd_limit_points(&config),
        Command::Witness { x, depths } => cmd_witness(&config, x, &depths),
    }
}

fn equation_spec(config: &RunConfig) -> Result<EquationSpec, Failure> {
    let need_b = || {
        config.b.ok_or_else(|| {
            Failure::new(EXIT_VALIDATION, "error: this equation family requires --b")
        })
    };
    match config.equation.as_str() {
        "periodic" => {
            if let Some(b) = config.b {
                if b != 1.0 {
                    return Err(Failure::new(
                        EXIT_VALIDATION,
                        "error: the periodic family fixes b=1",
                    ));
                }
            }
            Ok(EquationSpec::ShiftScale { b: 1.0 })
        }
        "shift-scale" => Ok(EquationSpec::ShiftScale { b: need_b()? }),
        "scale" => Ok(EquationSpec::PureScale { b: need_b()? }),
        "even" => Ok(EquationSpec::EvenParity),
        "odd" => Ok(EquationSpec::OddParity),
        "three-term" => Ok(EquationSpec::ThreeTerm),
        other => Err(Failure::new(
            EXIT_VALIDATION,
            format!(
                "error: unknown equation family `{other}` (expected periodic, shift-scale, scale, even, odd or three-term)"
            ),
        )),
    }
}

fn initial_set(config: &RunConfig) -> Result<IntervalUnion, Failure> {
    let text = config.init_set.as_ref().ok_or_else(|| {
        Failure::new(EXIT_VALIDATION, "error: --init-set is required for this command")
    })?;
    Ok(IntervalUnion::parse(text)?)
}

fn initial_data(config: &RunConfig) -> Result<InitialData, Failure> {
    if config.init_fn.is_empty() {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "error: at least one --init-fn expression is required",
        ));
    }
    if config.init_on.is_empty() && config.init_fn.len() == 1 {
        let set = initial_set(config)?;
        let expr = Expr::parse(&config.init_fn[0])?;
        return Ok(InitialData::uniform(set, expr)?);
    }
    if config.init_on.len() != config.init_fn.len() {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "error: --init-fn and --init-on must be paired one-to-one",
        ));
    }
    let mut pieces = Vec::with_capacity(config.init_fn.len());
    for (fn_text, on_text) in config.init_fn.iter().zip(&config.init_on) {
        pieces.push((Interval::parse(on_text)?, Expr::parse(fn_text)?));
    }
    let data = InitialData::new(pieces)?;
    if let Some(text) = &config.init_set {
        let declared = IntervalUnion::parse(text)?;
        if declared != *data.set() {
            return Err(Failure::new(
                EXIT_VALIDATION,
                format!(
                    "error: --init-on pieces cover {} but --init-set declares {declared}",
                    data.set()
                ),
            ));
        }
    }
    Ok(data)
}

fn build_problem(config: &RunConfig) -> Result<Problem, Failure> {
    let eq = equation_spec(config)?;
    let data = initial_data(config)?;
    Ok(match eq {
        EquationSpec::ShiftScale { b } => Problem::ShiftScale(make_problem(b, data)?),
        EquationSpec::PureScale { b } => Problem::Scale(make_scale_problem(b, data)?),
        EquationSpec::EvenParity | EquationSpec::OddParity => {
            let parity = if eq == EquationSpec::EvenParity { Parity::Even } else { Parity::Odd };
            let (lo, hi) = data.set().bounds();
            let half_width = lo.abs().max(hi.abs());
            let problem = ParityProblem::new(parity, ParityDomain::Symmetric(half_width), data)?;
            problem.validate_rep_set()?;
            Problem::Parity(problem)
        }
        EquationSpec::ThreeTerm => {
            validate_initial_set(&eq, data.set())?;
            let mut pos = None;
            let mut neg = None;
            for (iv, expr) in data.pieces() {
                if iv.lo() > 0.0 {
                    if pos.is_some() {
                        return Err(Failure::new(
                            EXIT_VALIDATION,
                            "error: the three-term family takes one piece per side",
                        ));
                    }
                    if !close_rel(iv.hi(), 3.0 * iv.lo()) {
                        return Err(Error::Shape {
                            expected: "[eps, 3*eps) on the positive side".to_string(),
                        }
                        .into());
                    }
                    pos = Some((iv.lo(), expr.clone()));
                } else if iv.hi() < 0.0 {
                    if neg.is_some() {
                        return Err(Failure::new(
                            EXIT_VALIDATION,
                            "error: the three-term family takes one piece per side",
                        ));
                    }
                    if !close_rel(-iv.lo(), 3.0 * -iv.hi()) {
                        return Err(Error::Shape {
                            expected: "(-3*delta, -delta] on the negative side".to_string(),
                        }
                        .into());
                    }
                    neg = Some((-iv.hi(), expr.clone()));
                } else {
                    return Err(Error::Penlp { limit_point: 0.0 }.into());
                }
            }
            Problem::ThreeTerm(ThreeTermProblem::new(pos, neg)?)
        }
    })
}

fn close_rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn cmd_eval(config: &RunConfig, queries: &[f64]) -> Result<String, Failure> {
    let problem = build_problem(config)?;
    let mut out = String::from("x,y\n");
    for &x in queries {
        let y = problem.evaluate(x)?;
        writeln!(out, "{},{}", fmt_num(x), fmt_num(y)).unwrap();
    }
    Ok(out)
}

fn cmd_classify(config: &RunConfig) -> Result<String, Failure> {
    let eq = equation_spec(config)?;
    let set = initial_set(config)?;
    validate_initial_set(&eq, &set)?;
    if set.parts().len() != 1 {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "error: classification takes a single initial interval",
        ));
    }
    let verdict = classify(&eq, set.parts()[0])?;
    let line = match verdict {
        Classification::WellPosed { i_max } => {
            format!("well-posed; I_max={}", format_extents(&i_max))
        }
        Classification::Overdetermined { redundant } => {
            format!("overdetermined; redundant={redundant}")
        }
        Classification::Underdetermined { i_max } => {
            let blocks: Vec<String> = (0..5)
                .map(|n| i_max.block(n).map(|iv| iv.to_string()))
                .collect::<Result<_, _>>()
                .map_err(Failure::from)?;
            format!("underdetermined; I_max={}u...", blocks.join("u"))
        }
        Classification::PenlpViolation { limit_point } => {
            return Err(Error::Penlp { limit_point }.into())
        }
    };
    Ok(format!("{line}\n"))
}

fn cmd_trace(config: &RunConfig, x: f64) -> Result<String, Failure> {
    let problem = build_problem(config)?;
    let Problem::ShiftScale(p) = &problem else {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "error: trace applies to the periodic and shift-scale families",
        ));
    };
    let reference = if p.b() == 1.0 { None } else { Some(p.b() / (p.b() - 1.0)) };
    let trace = p.trace(x)?;
    let mut out = String::from("n,x_n,side\n");
    for (n, point) in trace.points.iter().enumerate() {
        let side = match reference {
            Some(r) if *point > r => "above",
            Some(r) if *point < r => "below",
            _ => "-",
        };
        writeln!(out, "{},{},{}", n, fmt_num(*point), side).unwrap();
    }
    Ok(out)
}

fn cmd_sweep(config: &RunConfig, from: f64, to: f64, step: f64) -> Result<String, Failure> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Failure::new(EXIT_VALIDATION, "error: --step must be positive"));
    }
    if to < from {
        return Err(Failure::new(EXIT_VALIDATION, "error: --to must not precede --from"));
    }
    let eq = equation_spec(config)?;
    let problem = build_problem(config)?;
    let mut grid = Vec::new();
    let mut i = 0u64;
    loop {
        let x = from + i as f64 * step;
        if x > to + step * 1e-9 {
            break;
        }
        grid.push(x);
        i += 1;
    }
    let mut out = String::from("x,y\n");
    for &x in &grid {
        let y = problem.evaluate(x)?;
        writeln!(out, "{},{}", fmt_num(x), fmt_num(y)).unwrap();
    }
    // the residual pass keeps only grid points whose mapped partners are
    // themselves solvable, so a sweep may legally graze the domain edge
    let evaluable: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&x| partner_points(&eq, x).iter().all(|&p| problem.evaluate(p).is_ok()))
        .collect();
    if evaluable.is_empty() {
        writeln!(out, "# residual,0").unwrap();
    } else {
        let report = residual_sweep(|x| problem.evaluate(x), &eq, &evaluable, config.tol)?;
        writeln!(out, "# residual,{}", fmt_num(report.max_abs_residual)).unwrap();
    }
    Ok(out)
}

fn partner_points(eq: &EquationSpec, x: f64) -> Vec<f64> {
    match eq {
        EquationSpec::ShiftScale { b } => vec![x + 1.0, b * x],
        EquationSpec::PureScale { b } => vec![x, b * x],
        EquationSpec::EvenParity | EquationSpec::OddParity => vec![x, -x],
        EquationSpec::ThreeTerm => vec![x, 2.0 * x, 3.0 * x],
    }
}

fn cmd_limit_points(config: &RunConfig) -> Result<String, Failure> {
    let eq = equation_spec(config)?;
    eq.validate()?;
    let mut out = String::from("limit_point\n");
    for l in eq.limit_points() {
        writeln!(out, "{}", fmt_num(l)).unwrap();
    }
    Ok(out)
}

fn cmd_witness(config: &RunConfig, x: f64, depths: &[u32]) -> Result<String, Failure> {
    let eq = equation_spec(config)?;
    if !matches!(eq, EquationSpec::ThreeTerm | EquationSpec::PureScale { .. }) {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "error: witness applies to the scale and three-term families",
        ));
    }
    let set = initial_set(config)?;
    if let Err(e) = validate_initial_set(&eq, &set) {
        if !config.unsafe_mode {
            return Err(Failure::new(
                EXIT_VALIDATION,
                format!("{} (pass --unsafe to probe it anyway)", Failure::from(e).message),
            ));
        }
    }
    if config.init_fn.len() != 1 {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "error: witness takes exactly one --init-fn expression",
        ));
    }
    let f = Expr::parse(&config.init_fn[0])?;
    let report = constraint_witness(&eq, &f, x, depths, config.tol)?;
    let mut out = String::from("depth,candidate\n");
    for (depth, value) in &report.candidates {
        writeln!(out, "{},{}", depth, fmt_num(*value)).unwrap();
    }
    match report.verdict {
        WitnessVerdict::Consistent => writeln!(out, "# verdict,CONSISTENT").unwrap(),
        WitnessVerdict::Inconsistent { depth_a, value_a, depth_b, value_b } => writeln!(
            out,
            "# verdict,INCONSISTENT,{}:{},{}:{}",
            depth_a,
            fmt_num(value_a),
            depth_b,
            fmt_num(value_b)
        )
        .unwrap(),
    }
    Ok(out)
}
