//! Command-line front end. Exit codes: 0 found/true, 1 not found/false,
//! 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::encode::{self, Mode};
use crate::io::{fragment_text, read_system, result_json, tdes_json, FragmentDoc};
use crate::logic::{parse, Evaluator, Formula};
use crate::synth::{oracle_on, synthesize_on, SynthesisResult, DEFAULT_ORACLE_BUDGET};
use crate::tdes::{activity_dot, tdes_dot, TimedDes, UntimedDes, DEFAULT_STATE_CAP};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "tdsynth", version, about = "Fragment synthesis for timed discrete event systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search horizons in range for a fragment satisfying the formula.
    Synth(SynthArgs),
    /// Evaluate a fragment against a formula.
    Check(CheckArgs),
    /// Build the timed DES and print statistics or DOT.
    Build(BuildArgs),
    /// Brute-force enumeration of all fragments.
    Oracle(OracleArgs),
    /// Print the feasibility model for one horizon.
    DumpIlp(DumpArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => Mode::Paper,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

#[derive(Args, Debug)]
pub struct SystemArg {
    /// System description (JSON).
    #[arg(long)]
    pub system: PathBuf,
    /// Maximum number of timed states to construct.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct FormulaArg {
    /// Formula text, e.g. "F[1,5] ap2 & F[1,5] ap4".
    #[arg(long)]
    pub formula: Option<String>,
    /// File holding the formula text.
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[command(flatten)]
    pub formula: FormulaArg,
    #[arg(long, default_value_t = 1)]
    pub hmin: usize,
    #[arg(long)]
    pub hmax: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock times in the output.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Fragment JSON.
    #[arg(long)]
    pub fragment: PathBuf,
    /// System JSON; defaults to the fragment's "system" entry.
    #[arg(long)]
    pub system: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
    #[command(flatten)]
    pub formula: FormulaArg,
    /// Position to evaluate at.
    #[arg(long, default_value_t = 0)]
    pub at: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// With --format dot, draw the untimed activity graph instead.
    #[arg(long)]
    pub untimed: bool,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[command(flatten)]
    pub formula: FormulaArg,
    #[arg(long, default_value_t = 1)]
    pub hmin: usize,
    #[arg(long)]
    pub hmax: usize,
    /// Maximum number of visited fragment prefixes.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[command(flatten)]
    pub formula: FormulaArg,
    #[arg(long)]
    pub horizon: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

/// An input error with the file it came from.
struct Failure(String);

impl Failure {
    fn at(path: &Path, e: Error) -> Self {
        Failure(format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.to_string())
    }
}

type Exit = Result<i32, Failure>;

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Exit {
    match cmd {
        Command::Synth(a) => synth(a, out),
        Command::Check(a) => check(a, out),
        Command::Build(a) => build(a, out),
        Command::Oracle(a) => oracle(a, out),
        Command::DumpIlp(a) => dump(a, out),
    }
}

fn load_system(path: &Path) -> Result<UntimedDes, Failure> {
    let u = read_system(path).map_err(|e| Failure::at(path, e))?;
    let errors: Vec<String> = u
        .validate()
        .into_iter()
        .filter(|d| d.severity == crate::tdes::Severity::Error)
        .map(|d| d.to_string())
        .collect();
    if !errors.is_empty() {
        return Err(Failure(format!("{}:\n  {}", path.display(), errors.join("\n  "))));
    }
    Ok(u)
}

fn load_tdes(a: &SystemArg) -> Result<TimedDes, Failure> {
    let u = load_system(&a.system)?;
    TimedDes::build(&u, a.state_cap).map_err(|e| Failure::at(&a.system, e))
}

fn load_formula(a: &FormulaArg) -> Result<Formula, Failure> {
    let (text, origin) = match (&a.formula, &a.formula_file) {
        (Some(t), _) => (t.clone(), "formula".to_string()),
        (None, Some(p)) => (
            std::fs::read_to_string(p).map_err(|e| Failure::at(p, e.into()))?,
            p.display().to_string(),
        ),
        (None, None) => unreachable!("clap requires one of the two"),
    };
    let text = text.trim_end().to_string();
    parse(&text).map_err(|e| match e {
        Error::Syntax { pos, ref msg } => Failure(format!(
            "{origin}: syntax error at {pos}: {msg}\n  {text}\n  {caret:>width$}",
            caret = "^",
            width = pos + 1
        )),
        other => Failure(format!("{origin}: {other}")),
    })
}

fn render_result(
    g: &TimedDes,
    r: &SynthesisResult,
    format: Format,
    timings: bool,
    out: &mut dyn Write,
) -> Exit {
    match format {
        Format::Json => {
            let v = result_json(g, r, timings);
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
        Format::Dot => {
            let path = r.fragment().map(|f| g.to_indices(f)).transpose()?;
            write!(out, "{}", tdes_dot(g, path.as_ref()))?;
        }
        Format::Text => {
            for a in &r.attempts {
                let verdict = if a.feasible { "feasible" } else { "infeasible" };
                match a.mode {
                    Some(mode) => write!(
                        out,
                        "H={:<3} mode={mode} vars={} constraints={} nodes={} {verdict}",
                        a.horizon, a.variables, a.constraints, a.nodes,
                    )?,
                    None => write!(out, "H={:<3} oracle visited={} {verdict}", a.horizon, a.nodes)?,
                }
                if timings {
                    write!(out, " time={:.3}s", a.wall_time.as_secs_f64())?;
                }
                writeln!(out)?;
            }
            match (r.horizon(), r.fragment()) {
                (Some(h), Some(f)) => {
                    writeln!(out, "found at horizon {h}")?;
                    write!(out, "{}", fragment_text(g, f))?;
                }
                _ => {
                    let hmax = match r.outcome {
                        crate::synth::Outcome::NotFound { horizon_max } => horizon_max,
                        _ => unreachable!(),
                    };
                    writeln!(out, "not found up to horizon {hmax}")?;
                }
            }
        }
    }
    Ok(if r.is_found() { 0 } else { 1 })
}

fn synth(a: SynthArgs, out: &mut dyn Write) -> Exit {
    let g = load_tdes(&a.system)?;
    let phi = load_formula(&a.formula)?;
    let r = synthesize_on(&g, &phi, a.hmin, a.hmax, a.mode.into())?;
    render_result(&g, &r, a.format, a.timings, out)
}

fn oracle(a: OracleArgs, out: &mut dyn Write) -> Exit {
    let g = load_tdes(&a.system)?;
    let phi = load_formula(&a.formula)?;
    let r = oracle_on(&g, &phi, a.hmin, a.hmax, a.budget)?;
    render_result(&g, &r, a.format, false, out)
}

fn check(a: CheckArgs, out: &mut dyn Write) -> Exit {
    let text = std::fs::read_to_string(&a.fragment).map_err(|e| Failure::at(&a.fragment, e.into()))?;
    let doc = FragmentDoc::from_json(&text).map_err(|e| Failure::at(&a.fragment, e))?;
    let system = match (&a.system, doc.system_path(&a.fragment)) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => p,
        (None, None) => {
            return Err(Failure(format!(
                "{}: no system given (use --system or a \"system\" entry)",
                a.fragment.display()
            )))
        }
    };
    let g = load_tdes(&SystemArg {
        system,
        state_cap: a.state_cap,
    })?;
    let phi = load_formula(&a.formula)?;
    let f = doc.resolve(&g).map_err(|e| Failure::at(&a.fragment, e))?;
    let ev = Evaluator::new(&phi, &g)?;
    let holds = ev.eval(f.view(), &g, a.at)?;
    match a.format {
        Format::Json => {
            let v = serde_json::json!({
                "formula": phi.to_string(),
                "horizon": f.horizon(),
                "at": a.at,
                "holds": holds,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
        Format::Dot => write!(out, "{}", tdes_dot(&g, Some(&f)))?,
        Format::Text => writeln!(
            out,
            "{} at k={} on a fragment of horizon {}: {}",
            phi,
            a.at,
            f.horizon(),
            holds
        )?,
    }
    Ok(if holds { 0 } else { 1 })
}

fn build(a: BuildArgs, out: &mut dyn Write) -> Exit {
    let g = load_tdes(&a.system)?;
    match a.format {
        Format::Dot if a.untimed => write!(out, "{}", activity_dot(g.dynamics()))?,
        Format::Dot => write!(out, "{}", tdes_dot(&g, None))?,
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&tdes_json(&g)).expect("json")
        )?,
        Format::Text => {
            writeln!(out, "activities: {}", g.dynamics().num_activities())?;
            writeln!(out, "events: {} (+ tick)", g.dynamics().num_events())?;
            writeln!(out, "timed states: {}", g.len())?;
            writeln!(out, "transitions: {}", g.num_transitions())?;
            for i in 0..g.len() {
                writeln!(out, "  s{i}: {}", g.describe(i))?;
            }
        }
    }
    Ok(0)
}

fn dump(a: DumpArgs, out: &mut dyn Write) -> Exit {
    let g = load_tdes(&a.system)?;
    let phi = load_formula(&a.formula)?;
    let enc = encode::encode(&g, &phi, a.horizon, a.mode.into())?;
    write!(out, "{}", enc.dump())?;
    Ok(0)
}
