//! Command-line front end for the qcwfa toolkit.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qcwfa::compiler::{check_string, enumerate_strings, BlockLayout, StringCheck};
use qcwfa::format::{qcfa_from_json, qcfa_to_json, wfa_from_json, wfa_to_json};
use qcwfa::qcfa::{default_max_steps, TraceRow};
use qcwfa::wfa::{EvalError, EvalTraceRow};
use qcwfa::{compile, palindrome_machine, Qcfa, Verdict, Wfa};
use rayon::prelude::*;

#[derive(Parser, Debug)]
#[command(name = "qcwfa", version, about = "Exact 2QCFA simulation and compilation to two-way weighted automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a 2QCFA on one input and print its exact acceptance and rejection probabilities.
    Simulate {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        trace: bool,
    },
    /// Compile a 2QCFA into a two-way weighted automaton file.
    Compile {
        machine: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a weighted automaton on one input.
    Eval {
        wfa: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        trace: bool,
    },
    /// Compare simulator and compiled automaton on every input up to a length.
    Check {
        machine: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        trace: bool,
    },
    /// Write a built-in machine file.
    Example {
        name: ExampleName,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ExampleName {
    Palindrome,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    InLanguage = 0,
    NotInLanguage = 1,
    Failure = 2,
    BudgetExhausted = 3,
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::InLanguage => Status::InLanguage,
            Verdict::NotInLanguage => Status::NotInLanguage,
        }
    }
}

/// A usage or file error, reported on stderr with exit status 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn fail(context: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError(format!("{context}: {e}"))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| fail(path.display(), e))
}

pub fn load_machine(path: &Path) -> Result<Qcfa, CliError> {
    qcfa_from_json(&read(path)?).map_err(|e| fail(path.display(), e))
}

pub fn load_wfa(path: &Path) -> Result<Wfa, CliError> {
    wfa_from_json(&read(path)?).map_err(|e| fail(path.display(), e))
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| fail(path.display(), e)),
        None => out.write_all(text.as_bytes()).map_err(|e| fail("stdout", e)),
    }
}

pub fn sim_trace_line(m: &Qcfa, row: &TraceRow) -> String {
    format!(
        "{} | {} | {} | {}",
        row.step, m.classical_states[row.state], row.head, row.amplitudes
    )
}

pub fn eval_trace_line(w: &Wfa, row: &EvalTraceRow) -> String {
    let active: Vec<String> = row
        .active
        .iter()
        .map(|(&s, weight)| format!("{}: {weight}", w.states()[s]))
        .collect();
    format!("{} | {} | {{{}}}", row.step, row.head, active.join(", "))
}

fn verdict_label(v: Option<Verdict>, budget: bool) -> &'static str {
    match v {
        Some(v) => v.label(),
        None if budget => "budget-exhausted",
        None => "error",
    }
}

pub fn check_row_line(row: &StringCheck) -> String {
    let mut line = format!(
        "{:?} | {} | {} | {}",
        row.input,
        verdict_label(row.simulator, row.budget_exhausted),
        verdict_label(row.automaton, row.budget_exhausted),
        if row.agree() { "agree" } else { "DISAGREE" },
    );
    if let Some(p) = &row.p_rej {
        let _ = write!(line, " | p_rej = {p}");
    }
    if let Some(m) = &row.trace_mismatch {
        let _ = write!(line, " | trace mismatch: {m}");
    }
    if let Some(e) = &row.error {
        let _ = write!(line, " | error: {e}");
    }
    line
}

fn simulate(m: &Qcfa, input: &str, max_steps: Option<usize>, trace: bool, out: &mut String) -> Result<Status, CliError> {
    let budget = max_steps.unwrap_or_else(|| default_max_steps(m, input.chars().count()));
    let r = m.run(input, budget, trace).map_err(|e| fail("simulate", e))?;
    for row in r.trace.iter().flatten() {
        let _ = writeln!(out, "{}", sim_trace_line(m, row));
    }
    let _ = writeln!(out, "p_acc = {}", r.p_acc);
    let _ = writeln!(out, "p_rej = {}", r.p_rej);
    let _ = writeln!(out, "halt = {}", r.halt.label());
    let _ = writeln!(out, "steps = {}", r.steps);
    let _ = writeln!(out, "verdict = {}", verdict_label(r.verdict(), true));
    Ok(r.verdict().map_or(Status::BudgetExhausted, Status::from))
}

fn evaluate(w: &Wfa, input: &str, max_steps: Option<usize>, trace: bool, out: &mut String) -> Result<Status, CliError> {
    let budget = max_steps.unwrap_or_else(|| w.default_max_steps(input.chars().count()));
    let e = match w.evaluate(input, budget, trace) {
        Ok(e) => e,
        Err(EvalError::BudgetExhausted(steps)) => {
            let _ = writeln!(out, "steps = {steps}");
            let _ = writeln!(out, "verdict = budget-exhausted");
            return Ok(Status::BudgetExhausted);
        }
        Err(err) => return Err(fail("eval", err)),
    };
    for row in e.trace.iter().flatten() {
        let _ = writeln!(out, "{}", eval_trace_line(w, row));
    }
    let verdict = if e.value.is_zero() { Verdict::InLanguage } else { Verdict::NotInLanguage };
    let _ = writeln!(out, "W∘x = {}", e.value);
    let _ = writeln!(out, "steps = {}", e.steps);
    let _ = writeln!(out, "verdict = {}", verdict.label());
    Ok(verdict.into())
}

fn check(
    m: &Qcfa,
    max_len: usize,
    max_steps: Option<usize>,
    jobs: usize,
    trace: bool,
    out: &mut String,
) -> Result<Status, CliError> {
    let w = compile(m).map_err(|e| fail("compile", e))?;
    let layout = BlockLayout::for_machine(m);
    let inputs = enumerate_strings(&m.sigma, max_len);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| fail("thread pool", e))?;
    // Indexed parallel collect keeps enumeration order.
    let rows: Vec<StringCheck> =
        pool.install(|| inputs.par_iter().map(|x| check_string(m, &w, &layout, x, max_steps, trace)).collect());

    for row in &rows {
        let _ = writeln!(out, "{}", check_row_line(row));
        if trace && row.error.is_none() {
            let budget = max_steps.unwrap_or_else(|| default_max_steps(m, row.input.chars().count()));
            if let Ok(r) = m.run(&row.input, budget, true) {
                for t in r.trace.iter().flatten() {
                    let _ = writeln!(out, "  sim {}", sim_trace_line(m, t));
                }
            }
            if let Ok(e) = w.evaluate(&row.input, 2 * budget + 1, true) {
                for t in e.trace.iter().flatten() {
                    let _ = writeln!(out, "  wfa {}", eval_trace_line(&w, t));
                }
            }
        }
    }
    let agreeing = rows.iter().filter(|r| r.agree()).count();
    let budget = rows.iter().filter(|r| r.budget_exhausted).count();
    let _ = write!(out, "{} strings, {agreeing} agree", rows.len());
    if budget > 0 {
        let _ = write!(out, ", {budget} budget-exhausted");
    }
    out.push('\n');

    Ok(if rows.iter().any(|r| !r.agree() && !r.budget_exhausted) {
        Status::NotInLanguage
    } else if budget > 0 {
        Status::BudgetExhausted
    } else {
        Status::InLanguage
    })
}

/// Runs one command, writing its report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    let mut text = String::new();
    let status = match &cli.command {
        Command::Simulate { machine, input, max_steps, trace } => {
            simulate(&load_machine(machine)?, input, *max_steps, *trace, &mut text)?
        }
        Command::Compile { machine, output } => {
            let w = compile(&load_machine(machine)?).map_err(|e| fail(machine.display(), e))?;
            emit(&wfa_to_json(&w), output.as_deref(), out)?;
            Status::InLanguage
        }
        Command::Eval { wfa, input, max_steps, trace } => evaluate(&load_wfa(wfa)?, input, *max_steps, *trace, &mut text)?,
        Command::Check { machine, max_len, max_steps, jobs, trace } => {
            check(&load_machine(machine)?, *max_len, *max_steps, *jobs, *trace, &mut text)?
        }
        Command::Example { name: ExampleName::Palindrome, output } => {
            emit(&qcfa_to_json(&palindrome_machine()), output.as_deref(), out)?;
            Status::InLanguage
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| fail("stdout", e))?;
    Ok(status)
}

/// Entry point shared by the binary: parses `args` and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Failure as i32 } else { 0 };
        }
    };
    let stdout = io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(status) => status as i32,
        Err(e) => {
            eprintln!("error: {e}");
            Status::Failure as i32
        }
    }
}
