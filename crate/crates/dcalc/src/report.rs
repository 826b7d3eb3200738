//! Reports for `parse` and `prove`, rendered as text, JSON or LaTeX from the
//! same data so that every format shows the same readings.

use std::fmt::Write;

use dcalc_core::aps::{Aps, ElementOrigin};
use dcalc_core::contraction::{Trace, Verdict};
use dcalc_core::prover::{Outcome, Problem};
use serde::Serialize;

use crate::{latex, proof_text};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub goal: String,
    /// `parse` (word order must match) or `net` (any comb).
    pub mode: String,
    pub analyses: Vec<AnalysisReport>,
    /// Total readings over all analyses.
    pub readings: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Hypothesis {
    pub term: String,
    pub formula: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub atom: String,
    /// Occurrences with the polarity of the goal.
    pub goal_polarity: usize,
    /// Occurrences with the polarity of a hypothesis.
    pub hypothesis_polarity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub hypotheses: Vec<Hypothesis>,
    pub linkings: u128,
    pub tried: usize,
    pub nets: usize,
    pub duplicates: usize,
    pub steps: usize,
    pub mismatches: Vec<Mismatch>,
    pub readings: Vec<ReadingReport>,
    /// Only with `--trace`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejected: Option<Vec<RejectedReport>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extraction_failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub rule: String,
    pub redex: Vec<String>,
    pub result: String,
    pub row: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReadingReport {
    /// 1-based position of the linking in enumeration order.
    pub linking: usize,
    pub pairs: String,
    pub comb: String,
    pub logical_steps: Vec<String>,
    pub sequent: String,
    pub proof: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StepReport>>,
    #[serde(skip)]
    pub latex_proof: String,
    #[serde(skip)]
    pub latex_trace: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub element: String,
    pub origin: String,
    pub rule: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RejectedReport {
    pub linking: usize,
    pub pairs: String,
    /// `stuck` or `wrong_string`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comb: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
    pub trace: Vec<StepReport>,
}

fn steps(trace: &Trace, aps: &Aps) -> Vec<StepReport> {
    trace
        .steps
        .iter()
        .map(|s| StepReport {
            rule: s.rule.to_string(),
            redex: s.consumed.iter().map(|e| e.to_string()).collect(),
            result: s.result.to_string(),
            row: aps.row(&s.premisses),
        })
        .collect()
}

fn origin(o: ElementOrigin) -> String {
    match o {
        ElementOrigin::Link(l) => format!("link {}", l),
        ElementOrigin::Input(v) => format!("input {}", v),
    }
}

pub fn analysis(problem: &Problem, outcome: &Outcome, trace: bool) -> AnalysisReport {
    let readings = outcome
        .readings
        .iter()
        .map(|r| {
            let aps = Aps::from_structure(&r.structure, &problem.terms).expect("checked structure converts");
            let comb = r.comb.string().map(|s| s.to_string()).unwrap_or_default();
            ReadingReport {
                linking: r.index + 1,
                pairs: r.linking.to_string(),
                comb: format!("{} : {}", comb, problem.goal),
                logical_steps: r.trace.logical_steps().map(|s| s.rule.to_string()).collect(),
                sequent: dcalc_core::nd::check_nd(&r.proof)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|e| format!("invalid: {}", e)),
                proof: proof_text::print_proof(&r.proof),
                trace: trace.then(|| steps(&r.trace, &aps)),
                latex_proof: latex::proof(&r.proof),
                latex_trace: latex::trace(&r.trace, &aps),
            }
        })
        .collect();
    let rejected = trace.then(|| {
        outcome
            .rejected
            .iter()
            .map(|r| {
                let structure = problem.frame().apply(&r.linking);
                let aps = Aps::from_structure(&structure, &problem.terms).expect("checked structure converts");
                let (verdict, comb, diagnostics) = match &r.verdict {
                    Verdict::Stuck { diagnostics, .. } => (
                        "stuck",
                        None,
                        diagnostics
                            .iter()
                            .map(|d| Diagnostic {
                                element: d.element.to_string(),
                                origin: origin(d.origin),
                                rule: d.rule.to_string(),
                                reason: d.reason.to_string(),
                            })
                            .collect(),
                    ),
                    Verdict::WrongString { comb, .. } => ("wrong_string", Some(aps.row(&comb.premisses)), Vec::new()),
                    Verdict::Net { .. } => ("net", None, Vec::new()),
                };
                RejectedReport {
                    linking: r.index + 1,
                    pairs: r.linking.to_string(),
                    verdict: verdict.into(),
                    comb,
                    diagnostics,
                    trace: steps(r.verdict.trace(), &aps),
                }
            })
            .collect()
    });
    AnalysisReport {
        hypotheses: problem
            .hypotheses
            .iter()
            .zip(&problem.terms)
            .map(|(f, t)| Hypothesis {
                term: t.to_string(),
                formula: f.to_string(),
            })
            .collect(),
        linkings: outcome.linkings,
        tried: outcome.tried,
        nets: outcome.nets,
        duplicates: outcome.duplicates,
        steps: outcome.steps,
        mismatches: outcome
            .mismatches
            .iter()
            .map(|m| Mismatch {
                atom: m.atom.to_string(),
                goal_polarity: m.hypotheses,
                hypothesis_polarity: m.conclusions,
            })
            .collect(),
        readings,
        rejected,
        extraction_failures: outcome
            .extraction_failures
            .iter()
            .map(|(i, e)| format!("linking {}: {}", i + 1, e))
            .collect(),
    }
}

fn indent(text: &str, by: usize) -> String {
    text.lines().map(|l| format!("{:by$}{}\n", "", l, by = by)).collect()
}

impl Report {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.input);
        let _ = writeln!(out, "goal: {}   mode: {}", self.goal, self.mode);
        for (i, a) in self.analyses.iter().enumerate() {
            let hyps: Vec<String> = a
                .hypotheses
                .iter()
                .map(|h| format!("{}:{}", h.term, h.formula))
                .collect();
            let _ = writeln!(out, "analysis {}: {} |- {}", i + 1, hyps.join(", "), self.goal);
            for m in &a.mismatches {
                let _ = writeln!(
                    out,
                    "  count mismatch: {} has {} occurrence(s) of goal polarity, {} of hypothesis polarity",
                    m.atom, m.goal_polarity, m.hypothesis_polarity
                );
            }
            let _ = writeln!(
                out,
                "  linkings {}, tried {}, nets {}, readings {}, duplicates {}, steps {}",
                a.linkings,
                a.tried,
                a.nets,
                a.readings.len(),
                a.duplicates,
                a.steps
            );
            for (j, r) in a.readings.iter().enumerate() {
                let _ = writeln!(out, "  reading {} (linking {}: {})", j + 1, r.linking, r.pairs);
                let _ = writeln!(out, "    comb: {}", r.comb);
                if r.logical_steps.is_empty() {
                    out.push_str("    logical steps: none\n");
                } else {
                    let _ = writeln!(out, "    logical steps: {}", r.logical_steps.join(" "));
                }
                let _ = writeln!(out, "    sequent: {}", r.sequent);
                out.push_str("    proof:\n");
                out.push_str(&indent(&r.proof, 6));
                if let Some(t) = &r.trace {
                    out.push_str("    trace:\n");
                    for (k, s) in t.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "      {}. {} {} -> {} {}",
                            k + 1,
                            s.rule,
                            s.redex.join(" "),
                            s.result,
                            s.row
                        );
                    }
                }
            }
            for r in a.rejected.iter().flatten() {
                let _ = write!(out, "  rejected linking {} ({}): {}", r.linking, r.pairs, r.verdict);
                if let Some(c) = &r.comb {
                    let _ = write!(out, " {}", c);
                }
                out.push('\n');
                for d in &r.diagnostics {
                    let _ = writeln!(out, "    {} {} ({}): {}", d.rule, d.element, d.origin, d.reason);
                }
            }
            for e in &a.extraction_failures {
                let _ = writeln!(out, "  extraction failed: {}", e);
            }
        }
        let _ = writeln!(out, "readings: {}", self.readings);
        out
    }

    pub fn latex(&self, trace: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "% {}: {}", self.command, self.input);
        for (i, a) in self.analyses.iter().enumerate() {
            for (j, r) in a.readings.iter().enumerate() {
                let _ = writeln!(out, "% analysis {}, reading {}", i + 1, j + 1);
                out.push_str(&r.latex_proof);
                if trace {
                    out.push_str(&r.latex_trace);
                }
            }
        }
        out
    }
}
