//! The `parse`, `prove` and `check` commands, independent of the process:
//! each takes file contents and returns what to print and the exit code.
//! Input errors are returned as `Err` and map to exit code 2.

use anyhow::{anyhow, Context, Result};
use dcalc_core::contraction::Acceptance;
use dcalc_core::lexicon::Grammar;
use dcalc_core::nd::check_nd;
use dcalc_core::prover::{analyses, Problem, SearchOptions};
use dcalc_core::{Formula, Signature, Symbol};
use serde::Serialize;

use crate::report::{self, Report};
use crate::run::Runner;
use crate::sequent::parse_sequent;
use crate::{latex, proof_text};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// The comb must spell the input in order.
    #[default]
    Parse,
    /// Any comb will do.
    Net,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub goal: Option<String>,
    pub all: bool,
    pub trace: bool,
    pub format: Format,
    pub mode: Mode,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

fn line_errors(what: &str, errs: Vec<dcalc_core::formula::LineError>) -> anyhow::Error {
    let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
    anyhow!("{}:\n  {}", what, msgs.join("\n  "))
}

fn goal_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let f = Formula::parse(text.trim(), sig).with_context(|| format!("in --goal `{}`", text))?;
    if let Some(v) = f.violations().first() {
        return Err(anyhow!("goal {} is ill-sorted: {}", f, v));
    }
    Ok(f)
}

fn render(report: &Report, opts: &Options) -> Output {
    let stdout = match opts.format {
        Format::Text => report.text(),
        Format::Json => report.json(),
        Format::Latex => report.latex(opts.trace),
    };
    Output {
        stdout,
        code: if report.readings > 0 { 0 } else { 1 },
    }
}

fn mode_name(m: Mode) -> String {
    match m {
        Mode::Parse => "parse".into(),
        Mode::Net => "net".into(),
    }
}

/// Parse a sentence with a grammar.
pub fn parse(grammar: &str, sentence: &str, opts: &Options) -> Result<Output> {
    let g = Grammar::parse(grammar).map_err(|e| line_errors("grammar errors", e))?;
    let goal = opts
        .goal
        .as_deref()
        .map(|t| goal_formula(t, &g.signature))
        .transpose()?;
    let tokens: Vec<Symbol> = sentence.split_whitespace().map(Symbol::new).collect();
    let mut list = analyses(&g, &tokens, goal.as_ref())?;
    if opts.mode == Mode::Net {
        for a in &mut list {
            a.problem.acceptance = Acceptance::Net;
        }
    }
    let runner = Runner::new(opts.jobs);
    let search = SearchOptions {
        all: opts.all,
        keep_rejected: opts.trace,
    };
    let mut reports = Vec::new();
    let mut readings = 0;
    for a in &list {
        let outcome = runner.search(&a.problem, search)?;
        readings += outcome.readings.len();
        reports.push(report::analysis(&a.problem, &outcome, opts.trace));
        if readings > 0 && !opts.all {
            break;
        }
    }
    let report = Report {
        command: "parse".into(),
        input: tokens.iter().map(|t| t.as_str()).collect::<Vec<_>>().join(" "),
        goal: goal.as_ref().unwrap_or(&g.goal).to_string(),
        mode: mode_name(opts.mode),
        analyses: reports,
        readings,
    };
    Ok(render(&report, opts))
}

/// Decide a sequent over a signature.
pub fn prove(signature: &str, sequent: &str, opts: &Options) -> Result<Output> {
    let sig = Signature::parse(signature).map_err(|e| line_errors("signature errors", e))?;
    let s = parse_sequent(sequent, &sig)?;
    let goal = match &opts.goal {
        Some(t) => goal_formula(t, &sig)?,
        None => s.goal.clone(),
    };
    let acceptance = match (&s.goal_term, opts.mode) {
        (Some(t), Mode::Parse) => Acceptance::String(t.clone()),
        _ => Acceptance::Net,
    };
    let mode = if matches!(acceptance, Acceptance::Net) {
        Mode::Net
    } else {
        Mode::Parse
    };
    let (terms, hyps) = s.hypotheses.iter().cloned().unzip();
    let problem = Problem::new(hyps, terms, goal.clone(), acceptance)?;
    let runner = Runner::new(opts.jobs);
    let outcome = runner.search(
        &problem,
        SearchOptions {
            all: opts.all,
            keep_rejected: opts.trace,
        },
    )?;
    let report = Report {
        command: "prove".into(),
        input: sequent.trim().into(),
        goal: goal.to_string(),
        mode: mode_name(mode),
        readings: outcome.readings.len(),
        analyses: vec![report::analysis(&problem, &outcome, opts.trace)],
    };
    Ok(render(&report, opts))
}

#[derive(Debug, Serialize)]
struct CheckReport {
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    sequent: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Check a proof file.
pub fn check(proof: &str, format: Format) -> Result<Output> {
    let (_, p) = proof_text::parse_file(proof)?;
    let result = check_nd(&p);
    let report = match &result {
        Ok(s) => CheckReport {
            ok: true,
            sequent: Some(s.to_string()),
            path: None,
            error: None,
        },
        Err(e) => CheckReport {
            ok: false,
            sequent: None,
            path: Some(e.path.clone()),
            error: Some(e.kind.to_string()),
        },
    };
    let stdout = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Latex if result.is_ok() => latex::proof(&p),
        _ => match &result {
            Ok(s) => format!("ok: {}\n", s),
            Err(e) => format!("violation: {}\n", e),
        },
    };
    Ok(Output {
        stdout,
        code: if result.is_ok() { 0 } else { 1 },
    })
}
