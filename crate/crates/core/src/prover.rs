//! The decision pipeline: unfold a sequent, enumerate axiom linkings,
//! contract each candidate and extract a proof from every net.
//!
//! Checking one candidate is a pure function of the problem and the
//! linked structure, so callers may check candidates in any order or in
//! parallel and feed the results to a [`Collector`] in enumeration order.

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::aps::{ApsError, Comb};
use crate::contraction::{is_proof_net, Acceptance, Trace, Verdict};
use crate::formula::Formula;
use crate::lexicon::{Cover, Grammar, UnknownWords};
use crate::nd::{extract, ExtractError, NdProof};
use crate::proof_structure::{unfold, CountMismatch, Linking, ProofFrame, ProofStructure};
use crate::terms::{StringTerm, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("{hypotheses} hypotheses but {terms} string terms")]
    Arity { hypotheses: usize, terms: usize },
    #[error("formula {formula} is ill-sorted: {reason}")]
    IllSorted { formula: String, reason: String },
    #[error("hypothesis {index}: string term has sort {term} but formula has sort {formula}")]
    SortMismatch { index: usize, term: u32, formula: u32 },
    #[error("goal string term has sort {term} but goal formula has sort {formula}")]
    GoalSort { term: u32, formula: u32 },
}

/// A sequent to decide: `terms[i] : hypotheses[i] ⊢ ? : goal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub hypotheses: Vec<Formula>,
    pub terms: Vec<StringTerm>,
    pub goal: Formula,
    pub acceptance: Acceptance,
}

fn well_sorted(f: &Formula) -> Result<(), ProblemError> {
    match f.violations().first() {
        None => Ok(()),
        Some(v) => Err(ProblemError::IllSorted {
            formula: alloc::format!("{}", f),
            reason: alloc::format!("{}", v),
        }),
    }
}

impl Problem {
    /// Validate arities and sorts.
    pub fn new(
        hypotheses: Vec<Formula>,
        terms: Vec<StringTerm>,
        goal: Formula,
        acceptance: Acceptance,
    ) -> Result<Problem, ProblemError> {
        if hypotheses.len() != terms.len() {
            return Err(ProblemError::Arity {
                hypotheses: hypotheses.len(),
                terms: terms.len(),
            });
        }
        for f in hypotheses.iter().chain([&goal]) {
            well_sorted(f)?;
        }
        for (index, (f, t)) in hypotheses.iter().zip(&terms).enumerate() {
            if f.sort() != t.sort() {
                return Err(ProblemError::SortMismatch {
                    index,
                    term: t.sort().get(),
                    formula: f.sort().get(),
                });
            }
        }
        if let Acceptance::String(s) = &acceptance {
            if s.sort() != goal.sort() {
                return Err(ProblemError::GoalSort {
                    term: s.sort().get(),
                    formula: goal.sort().get(),
                });
            }
        }
        Ok(Problem {
            hypotheses,
            terms,
            goal,
            acceptance,
        })
    }

    /// The usual sequent: the goal term is the concatenation of the
    /// hypothesis terms.
    pub fn concatenated(
        hypotheses: Vec<Formula>,
        terms: Vec<StringTerm>,
        goal: Formula,
    ) -> Result<Problem, ProblemError> {
        let s = terms.iter().fold(StringTerm::empty(), |acc, t| acc.concat(t));
        Problem::new(hypotheses, terms, goal, Acceptance::String(s))
    }

    pub fn frame(&self) -> ProofFrame {
        unfold(&self.hypotheses, &self.goal)
    }

    /// Contract one linked structure and, if it is a net, extract a proof.
    pub fn check(&self, structure: &ProofStructure) -> Result<Checked, ApsError> {
        let verdict = is_proof_net(structure, &self.terms, &self.acceptance)?;
        let proof = verdict.is_net().then(|| extract(structure, &self.terms));
        Ok(Checked { verdict, proof })
    }

    /// Contract only; no extraction.
    pub fn verdict(&self, structure: &ProofStructure) -> Result<Verdict, ApsError> {
        is_proof_net(structure, &self.terms, &self.acceptance)
    }
}

/// The result of checking one candidate.
#[derive(Debug, Clone)]
pub struct Checked {
    pub verdict: Verdict,
    /// Present exactly when the verdict is a net.
    pub proof: Option<Result<NdProof, ExtractError>>,
}

#[derive(Debug, Clone)]
pub struct Reading {
    /// Position of the linking in enumeration order.
    pub index: usize,
    pub linking: Linking,
    pub structure: ProofStructure,
    pub trace: Trace,
    pub comb: Comb,
    pub proof: NdProof,
}

/// A candidate that is not a net.
#[derive(Debug, Clone)]
pub struct Rejected {
    pub index: usize,
    pub linking: Linking,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    /// Exhaust all linkings instead of stopping at the first reading.
    pub all: bool,
    /// Keep the verdicts of rejected candidates.
    pub keep_rejected: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// Atoms whose counts differ; when non-empty nothing was tried.
    pub mismatches: Vec<CountMismatch>,
    /// Number of linkings of the frame.
    pub linkings: u128,
    /// Candidates actually checked.
    pub tried: usize,
    /// Candidates that contracted to an accepted comb.
    pub nets: usize,
    /// Distinct readings, in enumeration order.
    pub readings: Vec<Reading>,
    /// Nets whose proof equals an earlier reading's.
    pub duplicates: usize,
    /// Contraction steps over all candidates.
    pub steps: usize,
    pub rejected: Vec<Rejected>,
    /// Nets from which extraction failed. Always empty unless there is a
    /// bug; kept so it shows up in reports.
    pub extraction_failures: Vec<(usize, ExtractError)>,
}

impl Outcome {
    pub fn derivable(&self) -> bool {
        !self.readings.is_empty()
    }
}

/// Assembles an [`Outcome`] from candidates fed in enumeration order.
#[derive(Debug)]
pub struct Collector {
    options: SearchOptions,
    outcome: Outcome,
    seen: Vec<NdProof>,
}

impl Collector {
    pub fn new(frame: &ProofFrame, options: SearchOptions) -> Collector {
        Collector {
            options,
            outcome: Outcome {
                mismatches: frame.count_mismatches(),
                linkings: frame.linking_count(),
                ..Outcome::default()
            },
            seen: Vec::new(),
        }
    }

    /// Whether more candidates are wanted.
    pub fn wants_more(&self) -> bool {
        self.options.all || self.outcome.readings.is_empty()
    }

    pub fn push(&mut self, index: usize, linking: Linking, structure: ProofStructure, checked: Checked) {
        let o = &mut self.outcome;
        o.tried += 1;
        o.steps += checked.verdict.trace().steps.len();
        match (checked.verdict, checked.proof) {
            (Verdict::Net { trace, comb }, Some(Ok(proof))) => {
                o.nets += 1;
                let canonical = proof.canonical();
                if self.seen.contains(&canonical) {
                    o.duplicates += 1;
                } else {
                    self.seen.push(canonical);
                    o.readings.push(Reading {
                        index,
                        linking,
                        structure,
                        trace,
                        comb,
                        proof,
                    });
                }
            }
            (Verdict::Net { .. }, Some(Err(e))) => {
                o.nets += 1;
                o.extraction_failures.push((index, e));
            }
            (verdict, _) => {
                if self.options.keep_rejected {
                    o.rejected.push(Rejected {
                        index,
                        linking,
                        verdict,
                    });
                }
            }
        }
    }

    pub fn finish(self) -> Outcome {
        self.outcome
    }
}

/// Decide a problem sequentially.
pub fn search(problem: &Problem, options: SearchOptions) -> Result<Outcome, ApsError> {
    let frame = problem.frame();
    let mut c = Collector::new(&frame, options);
    if let Ok(linkings) = frame.linkings() {
        for (index, l) in linkings.enumerate() {
            if !c.wants_more() {
                break;
            }
            let ps = frame.apply(&l);
            let checked = problem.check(&ps)?;
            c.push(index, l, ps, checked);
        }
    }
    Ok(c.finish())
}

/// Whether some linking is accepted; no extraction, stops at the first.
pub fn derivable(problem: &Problem) -> Result<bool, ApsError> {
    let frame = problem.frame();
    let Ok(linkings) = frame.linkings() else {
        return Ok(false);
    };
    for l in linkings {
        if problem.verdict(&frame.apply(&l))?.is_net() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One lexical analysis of a sentence, ready to decide.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub cover: Cover,
    pub problem: Problem,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SentenceError {
    #[error("{0}")]
    Unknown(UnknownWords),
    #[error("empty sentence")]
    Empty,
    #[error("{0}")]
    Problem(ProblemError),
}

/// Every lexical analysis of `tokens`, each as a problem requiring the
/// final comb to list the sentence's words in order.
pub fn analyses(grammar: &Grammar, tokens: &[Symbol], goal: Option<&Formula>) -> Result<Vec<Analysis>, SentenceError> {
    if tokens.is_empty() {
        return Err(SentenceError::Empty);
    }
    let goal = goal.unwrap_or(&grammar.goal);
    let covers = grammar.covers(tokens).map_err(SentenceError::Unknown)?;
    covers
        .into_iter()
        .map(|cover| {
            let entries = grammar.entries();
            let hypotheses = cover
                .placements
                .iter()
                .map(|p| entries[p.entry].formula.clone())
                .collect();
            let terms = cover
                .placements
                .iter()
                .map(|p| entries[p.entry].string.clone())
                .collect();
            let leaves = cover.token_leaves(tokens.len());
            let problem = Problem::new(hypotheses, terms, goal.clone(), Acceptance::Leaves(leaves))
                .map_err(SentenceError::Problem)?;
            Ok(Analysis { cover, problem })
        })
        .collect()
}
