//! Natural deduction with string terms.
//!
//! A proof is a tree of [`NdProof`] nodes, each carrying the string term and
//! formula it concludes. Leaves are either sequent hypotheses
//! ([`NdRule::Lexical`]) or hypotheses discharged further down
//! ([`NdRule::Hypothesis`]), whose string is a row of fresh words
//! `p0+1+p1+...+1+pn`, one per segment.
//!
//! Premiss order follows the string each premiss contributes to:
//!
//! | rule | premisses | conclusion term |
//! |------|-----------|-----------------|
//! | `\E` | `α:A`, `γ:A\C` | `α+γ` |
//! | `/E` | `γ:C/B`, `β:B` | `γ+β` |
//! | `•I` | `α:A`, `β:B` | `α+β` |
//! | `↑ₖE` | `γ:C↑ₖB`, `β:B` | `γ ×ₖ β` |
//! | `↓ₖE` | `α:A`, `γ:A↓ₖC` | `α ×ₖ γ` |
//! | `⊙ₖI` | `α:A`, `β:B` | `α ×ₖ β` |
//! | `•E`, `⊙ₖE` | `δ:A•B`, `σ:C` | `σ` with `α+β` (resp. `α ×ₖ β`) replaced by `δ` |
//!
//! Introductions of `\`, `/`, `↑ₖ` and `↓ₖ` discharge one hypothesis from
//! their single premiss: `\I` strips it as a prefix, `/I` as a suffix, `↑ₖI`
//! replaces it with a separator and `↓ₖI` strips it as a circumfix.

mod extract;
pub mod oracle;
mod to_net;

pub use extract::{extract, ExtractError};
pub use to_net::{net_of_nd, Directive, NdNet};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Connective, Formula};
use crate::terms::{Item, StringTerm, Symbol, WrapError};

/// A discharge label.
pub type Label = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NdRule {
    /// The `i`-th hypothesis of the sequent.
    Lexical(usize),
    /// A hypothesis discharged below.
    Hypothesis(Label),
    /// `\E`, `/E`, `↑ₖE`, `↓ₖE`.
    Elim(Connective),
    /// `•E`, `⊙ₖE`, discharging the hypotheses for the left and right
    /// components.
    ElimDischarge(Connective, Label, Label),
    /// `•I`, `⊙ₖI`.
    Intro(Connective),
    /// `\I`, `/I`, `↑ₖI`, `↓ₖI`.
    IntroDischarge(Connective, Label),
}

impl NdRule {
    /// A short name: `lex`, `hyp`, `\E`, `↑>I`, ...
    pub fn name(&self) -> String {
        match self {
            NdRule::Lexical(_) => String::from("lex"),
            NdRule::Hypothesis(_) => String::from("hyp"),
            NdRule::Elim(c) | NdRule::ElimDischarge(c, ..) => alloc::format!("{}E", c.unicode()),
            NdRule::Intro(c) | NdRule::IntroDischarge(c, _) => alloc::format!("{}I", c.unicode()),
        }
    }

    /// Whether the rule corresponds to a par link.
    pub fn is_par(&self) -> bool {
        matches!(self, NdRule::ElimDischarge(..) | NdRule::IntroDischarge(..))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NdProof {
    pub rule: NdRule,
    pub term: StringTerm,
    pub formula: Formula,
    pub premisses: Vec<NdProof>,
}

/// A sequent with string terms: `α1:A1, ..., αn:An ⊢ γ:C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub hypotheses: Vec<(StringTerm, Formula)>,
    pub term: StringTerm,
    pub goal: Formula,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (t, a)) in self.hypotheses.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", t, a)?;
        }
        write!(f, " |- {}:{}", self.term, self.goal)
    }
}

impl NdProof {
    pub fn leaf(rule: NdRule, term: StringTerm, formula: Formula) -> NdProof {
        NdProof {
            rule,
            term,
            formula,
            premisses: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premisses.iter().map(NdProof::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premisses.iter().map(NdProof::depth).max().unwrap_or(0)
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&NdProof> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(p) = stack.pop() {
            out.push(p);
            stack.extend(p.premisses.iter().rev());
        }
        out
    }

    /// Number of rules that become par links in a proof net.
    pub fn par_rules(&self) -> usize {
        self.nodes().iter().filter(|p| p.rule.is_par()).count()
    }

    /// The sequent proved, with lexical leaves ordered by index. Assumes
    /// the indices are `0..n`; [`check_nd`] verifies that.
    pub fn sequent(&self) -> Sequent {
        let mut hyps: Vec<(usize, StringTerm, Formula)> = self
            .nodes()
            .into_iter()
            .filter_map(|p| match p.rule {
                NdRule::Lexical(i) => Some((i, p.term.clone(), p.formula.clone())),
                _ => None,
            })
            .collect();
        hyps.sort_by_key(|h| h.0);
        Sequent {
            hypotheses: hyps.into_iter().map(|(_, t, f)| (t, f)).collect(),
            term: self.term.clone(),
            goal: self.formula.clone(),
        }
    }

    /// Rename discharge labels to `0, 1, ...` in pre-order of the
    /// discharging rules, and hypothesis words to `p0, p1, ...` in order of
    /// first occurrence, so that proofs differing only in those names
    /// compare equal.
    pub fn canonical(&self) -> NdProof {
        let mut labels = BTreeMap::new();
        for p in self.nodes() {
            match p.rule {
                NdRule::ElimDischarge(_, a, b) => {
                    let n = labels.len() as Label;
                    labels.entry(a).or_insert(n);
                    let n = labels.len() as Label;
                    labels.entry(b).or_insert(n);
                }
                NdRule::IntroDischarge(_, a) => {
                    let n = labels.len() as Label;
                    labels.entry(a).or_insert(n);
                }
                _ => {}
            }
        }
        // Hypothesis words, ordered by label then position.
        let mut hyp_words: Vec<(Label, usize, Symbol)> = Vec::new();
        for p in self.nodes() {
            if let NdRule::Hypothesis(l) = p.rule {
                for (i, w) in p.term.words().enumerate() {
                    hyp_words.push((labels.get(&l).copied().unwrap_or(l), i, w.clone()));
                }
            }
        }
        hyp_words.sort();
        let words: BTreeMap<Symbol, Symbol> = hyp_words
            .into_iter()
            .enumerate()
            .map(|(i, (_, _, w))| (w, Symbol::from(alloc::format!("p{}", i))))
            .collect();
        self.rename(&labels, &words)
    }

    fn rename(&self, labels: &BTreeMap<Label, Label>, words: &BTreeMap<Symbol, Symbol>) -> NdProof {
        let l = |x: Label| labels.get(&x).copied().unwrap_or(x);
        let rule = match self.rule {
            NdRule::Hypothesis(a) => NdRule::Hypothesis(l(a)),
            NdRule::ElimDischarge(c, a, b) => NdRule::ElimDischarge(c, l(a), l(b)),
            NdRule::IntroDischarge(c, a) => NdRule::IntroDischarge(c, l(a)),
            r => r,
        };
        let term = self
            .term
            .items()
            .iter()
            .map(|i| match i {
                Item::Word(w) => Item::Word(words.get(w).cloned().unwrap_or_else(|| w.clone())),
                Item::Sep => Item::Sep,
            })
            .collect();
        NdProof {
            rule,
            term,
            formula: self.formula.clone(),
            premisses: self.premisses.iter().map(|p| p.rename(labels, words)).collect(),
        }
    }
}

/// Compact one-line rendering, for diagnostics.
impl fmt::Display for NdProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            NdRule::Lexical(i) => write!(f, "lex{}", i)?,
            NdRule::Hypothesis(l) => write!(f, "hyp{}", l)?,
            NdRule::ElimDischarge(_, a, b) => write!(f, "({} {} {}", self.rule.name(), a, b)?,
            NdRule::IntroDischarge(_, a) => write!(f, "({} {}", self.rule.name(), a)?,
            _ => write!(f, "({}", self.rule.name())?,
        }
        for p in &self.premisses {
            write!(f, " {}", p)?;
        }
        if !self.premisses.is_empty() {
            f.write_str(")")?;
        }
        write!(f, "[{}:{}]", self.term, self.formula)
    }
}

/// The string-term side of each rule, shared by the checker, the
/// extraction and the generator.
pub mod strings {
    use super::*;

    pub fn elim(conn: Connective, left: &StringTerm, right: &StringTerm) -> Result<StringTerm, WrapError> {
        match conn {
            Connective::Under | Connective::Over | Connective::Prod => Ok(left.concat(right)),
            Connective::Up(k) | Connective::Down(k) | Connective::Wrap(k) => left.wrap(k, right),
        }
    }

    /// `•I` and `⊙ₖI` combine like eliminations.
    pub fn intro_tensor(conn: Connective, left: &StringTerm, right: &StringTerm) -> Result<StringTerm, WrapError> {
        elim(conn, left, right)
    }

    /// The conclusion of `\I`, `/I`, `↑ₖI`, `↓ₖI` from the premiss term and
    /// the discharged hypothesis term, if the hypothesis sits where the rule
    /// needs it.
    pub fn intro_discharge(conn: Connective, body: &StringTerm, hyp: &StringTerm) -> Option<StringTerm> {
        match conn {
            Connective::Under => body.strip_prefix(hyp),
            Connective::Over => body.strip_suffix(hyp),
            Connective::Up(k) => {
                let at = body.find(hyp)?;
                let tau = body.splice(at, hyp.len(), &StringTerm::sep());
                (tau.wrap(k, hyp).ok()? == *body).then_some(tau)
            }
            Connective::Down(k) => {
                let j = hyp.separator_index(k).ok()?;
                let items = hyp.items();
                let pre = StringTerm::from_items(items[..j].to_vec());
                let suf = StringTerm::from_items(items[j + 1..].to_vec());
                let tau = body.strip_prefix(&pre)?.strip_suffix(&suf)?;
                (hyp.wrap(k, &tau).ok()? == *body).then_some(tau)
            }
            Connective::Prod | Connective::Wrap(_) => None,
        }
    }

    /// The conclusion of `•E`/`⊙ₖE`: `minor` with the combination of the
    /// two hypothesis terms replaced by `major`.
    pub fn elim_discharge(
        conn: Connective,
        major: &StringTerm,
        minor: &StringTerm,
        left: &StringTerm,
        right: &StringTerm,
    ) -> Option<StringTerm> {
        let pattern = match conn {
            Connective::Prod => left.concat(right),
            Connective::Wrap(k) => left.wrap(k, right).ok()?,
            _ => return None,
        };
        let at = minor.find(&pattern)?;
        Some(minor.splice(at, pattern.len(), major))
    }

    /// `p0+1+...+1+pn` with the given words.
    pub fn hypothesis(words: &[Symbol]) -> StringTerm {
        StringTerm::separated(words.iter().cloned())
    }
}

/// What is wrong with a proof node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NdErrorKind {
    Arity {
        expected: usize,
        found: usize,
    },
    /// A premiss or the conclusion has the wrong formula.
    Formula {
        expected: Formula,
        found: Formula,
    },
    /// The rule's conclusion formula is not built with its connective.
    Connective,
    Term {
        expected: StringTerm,
        found: StringTerm,
    },
    /// The discharged hypothesis is not where the rule needs it.
    HypothesisPlacement(Label),
    Wrap(WrapError),
    /// A hypothesis term is not a row of distinct fresh words.
    NotFresh(Label),
    HypothesisFormula(Label),
    Undischarged(Label),
    DischargedTwice(Label),
    /// The same label discharged at two different nodes.
    LabelReused(Label),
    /// Discharged hypothesis not used in the premiss.
    Unused(Label),
    /// Lexical indices are not exactly `0..n`.
    LexicalIndices,
    /// The node's term has a different sort from its formula.
    Sort,
}

impl fmt::Display for NdErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NdErrorKind::Arity { expected, found } => {
                write!(f, "expected {} premisses, found {}", expected, found)
            }
            NdErrorKind::Formula { expected, found } => {
                write!(f, "expected formula {}, found {}", expected, found)
            }
            NdErrorKind::Connective => f.write_str("formula does not match the rule's connective"),
            NdErrorKind::Term { expected, found } => {
                write!(f, "expected term '{}', found '{}'", expected, found)
            }
            NdErrorKind::HypothesisPlacement(l) => {
                write!(f, "hypothesis {} is not where the rule needs it", l)
            }
            NdErrorKind::Wrap(e) => write!(f, "{}", e),
            NdErrorKind::NotFresh(l) => write!(f, "hypothesis {} does not use fresh words", l),
            NdErrorKind::HypothesisFormula(l) => {
                write!(f, "hypothesis {} has the wrong formula", l)
            }
            NdErrorKind::Undischarged(l) => write!(f, "hypothesis {} is never discharged", l),
            NdErrorKind::DischargedTwice(l) => write!(f, "hypothesis {} is used twice", l),
            NdErrorKind::LabelReused(l) => write!(f, "label {} is discharged twice", l),
            NdErrorKind::Unused(l) => write!(f, "hypothesis {} is discharged but not used", l),
            NdErrorKind::LexicalIndices => f.write_str("lexical hypotheses are not numbered 0..n"),
            NdErrorKind::Sort => f.write_str("term sort differs from formula sort"),
        }
    }
}

/// A violation at the node reached by following `path` (premiss indices)
/// from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NdError {
    pub path: Vec<usize>,
    pub kind: NdErrorKind,
}

impl fmt::Display for NdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("at root")?;
        for i in &self.path {
            write!(f, ".{}", i)?;
        }
        write!(f, ": {}", self.kind)
    }
}

type Open = BTreeMap<Label, (Formula, StringTerm)>;

struct Checker {
    path: Vec<usize>,
    lexical: Vec<usize>,
    discharged: BTreeSet<Label>,
    lexical_words: BTreeSet<Symbol>,
    hypothesis_words: BTreeMap<Symbol, Label>,
}

/// Check every rule application, the discharge bookkeeping and the string
/// equations. Reports the first violation in pre-order.
pub fn check_nd(proof: &NdProof) -> Result<Sequent, NdError> {
    let mut c = Checker {
        path: Vec::new(),
        lexical: Vec::new(),
        discharged: BTreeSet::new(),
        lexical_words: BTreeSet::new(),
        hypothesis_words: BTreeMap::new(),
    };
    for p in proof.nodes() {
        if let NdRule::Lexical(_) = p.rule {
            c.lexical_words.extend(p.term.words().cloned());
        }
    }
    let open = c.node(proof)?;
    if let Some((&l, _)) = open.iter().next() {
        return Err(NdError {
            path: Vec::new(),
            kind: NdErrorKind::Undischarged(l),
        });
    }
    c.lexical.sort_unstable();
    if c.lexical.iter().enumerate().any(|(i, &x)| i != x) {
        return Err(NdError {
            path: Vec::new(),
            kind: NdErrorKind::LexicalIndices,
        });
    }
    Ok(proof.sequent())
}

impl Checker {
    fn fail<T>(&self, kind: NdErrorKind) -> Result<T, NdError> {
        Err(NdError {
            path: self.path.clone(),
            kind,
        })
    }

    fn expect_formula(&self, expected: &Formula, found: &Formula) -> Result<(), NdError> {
        if expected == found {
            Ok(())
        } else {
            self.fail(NdErrorKind::Formula {
                expected: expected.clone(),
                found: found.clone(),
            })
        }
    }

    fn expect_term(&self, expected: Result<StringTerm, WrapError>, found: &StringTerm) -> Result<(), NdError> {
        match expected {
            Ok(e) if e == *found => Ok(()),
            Ok(e) => self.fail(NdErrorKind::Term {
                expected: e,
                found: found.clone(),
            }),
            Err(w) => self.fail(NdErrorKind::Wrap(w)),
        }
    }

    fn children(&mut self, p: &NdProof) -> Result<Open, NdError> {
        let mut open = Open::new();
        for (i, q) in p.premisses.iter().enumerate() {
            self.path.push(i);
            let sub = self.node(q)?;
            self.path.pop();
            for (l, h) in sub {
                if open.insert(l, h).is_some() {
                    return self.fail(NdErrorKind::DischargedTwice(l));
                }
            }
        }
        Ok(open)
    }

    fn discharge(&mut self, open: &mut Open, label: Label, formula: &Formula) -> Result<StringTerm, NdError> {
        if !self.discharged.insert(label) {
            return self.fail(NdErrorKind::LabelReused(label));
        }
        match open.remove(&label) {
            Some((f, t)) if f == *formula => Ok(t),
            Some(_) => self.fail(NdErrorKind::HypothesisFormula(label)),
            None => self.fail(NdErrorKind::Unused(label)),
        }
    }

    fn node(&mut self, p: &NdProof) -> Result<Open, NdError> {
        let arity = match p.rule {
            NdRule::Lexical(_) | NdRule::Hypothesis(_) => 0,
            NdRule::IntroDischarge(..) => 1,
            _ => 2,
        };
        if p.premisses.len() != arity {
            return self.fail(NdErrorKind::Arity {
                expected: arity,
                found: p.premisses.len(),
            });
        }
        if p.term.sort().get() as i64 != p.formula.raw_sort() {
            return self.fail(NdErrorKind::Sort);
        }
        let mut open = self.children(p)?;
        let prem = &p.premisses;
        match p.rule {
            NdRule::Lexical(i) => self.lexical.push(i),
            NdRule::Hypothesis(l) => {
                let words: Vec<&Symbol> = p.term.words().collect();
                let fresh = words.len() == p.term.sort().get() as usize + 1
                    && StringTerm::separated(words.iter().map(|w| (*w).clone())) == p.term
                    && words.iter().all(|w| !self.lexical_words.contains(*w));
                if !fresh {
                    return self.fail(NdErrorKind::NotFresh(l));
                }
                for w in words {
                    if let Some(&other) = self.hypothesis_words.get(w) {
                        if other != l {
                            return self.fail(NdErrorKind::NotFresh(l));
                        }
                    }
                    self.hypothesis_words.insert(w.clone(), l);
                }
                if open.insert(l, (p.formula.clone(), p.term.clone())).is_some() {
                    return self.fail(NdErrorKind::DischargedTwice(l));
                }
            }
            NdRule::Elim(conn) => {
                // The functor is the right premiss for \ and ↓, the left one
                // otherwise.
                let (functor, arg, functor_right) = match conn {
                    Connective::Under | Connective::Down(_) => (&prem[1], &prem[0], true),
                    Connective::Over | Connective::Up(_) => (&prem[0], &prem[1], false),
                    _ => return self.fail(NdErrorKind::Connective),
                };
                let Some((c, l, r)) = functor.formula.as_binary() else {
                    return self.fail(NdErrorKind::Connective);
                };
                if c != conn {
                    return self.fail(NdErrorKind::Connective);
                }
                let (expected_arg, result) = if functor_right { (l, r) } else { (r, l) };
                self.expect_formula(expected_arg, &arg.formula)?;
                self.expect_formula(result, &p.formula)?;
                self.expect_term(strings::elim(conn, &prem[0].term, &prem[1].term), &p.term)?;
            }
            NdRule::Intro(conn) => {
                let Some((c, l, r)) = p.formula.as_binary() else {
                    return self.fail(NdErrorKind::Connective);
                };
                if c != conn || !matches!(conn, Connective::Prod | Connective::Wrap(_)) {
                    return self.fail(NdErrorKind::Connective);
                }
                self.expect_formula(l, &prem[0].formula)?;
                self.expect_formula(r, &prem[1].formula)?;
                self.expect_term(strings::intro_tensor(conn, &prem[0].term, &prem[1].term), &p.term)?;
            }
            NdRule::IntroDischarge(conn, label) => {
                let Some((c, l, r)) = p.formula.as_binary() else {
                    return self.fail(NdErrorKind::Connective);
                };
                if c != conn {
                    return self.fail(NdErrorKind::Connective);
                }
                let (hyp_formula, body_formula) = match conn {
                    Connective::Under | Connective::Down(_) => (l, r),
                    Connective::Over | Connective::Up(_) => (r, l),
                    _ => return self.fail(NdErrorKind::Connective),
                };
                self.expect_formula(body_formula, &prem[0].formula)?;
                let hyp = self.discharge(&mut open, label, hyp_formula)?;
                match strings::intro_discharge(conn, &prem[0].term, &hyp) {
                    Some(t) => self.expect_term(Ok(t), &p.term)?,
                    None => return self.fail(NdErrorKind::HypothesisPlacement(label)),
                }
            }
            NdRule::ElimDischarge(conn, a, b) => {
                let Some((c, fa, fb)) = prem[0].formula.as_binary() else {
                    return self.fail(NdErrorKind::Connective);
                };
                if c != conn || !matches!(conn, Connective::Prod | Connective::Wrap(_)) {
                    return self.fail(NdErrorKind::Connective);
                }
                self.expect_formula(&prem[1].formula, &p.formula)?;
                // Hypotheses are discharged from the minor premiss only.
                let in_major = prem[0]
                    .nodes()
                    .iter()
                    .any(|q| matches!(q.rule, NdRule::Hypothesis(l) if l == a || l == b));
                if in_major {
                    return self.fail(NdErrorKind::HypothesisPlacement(a));
                }
                let mut minor_open = open;
                let ta = self.discharge(&mut minor_open, a, fa)?;
                let tb = self.discharge(&mut minor_open, b, fb)?;
                open = minor_open;
                match strings::elim_discharge(conn, &prem[0].term, &prem[1].term, &ta, &tb) {
                    Some(t) => self.expect_term(Ok(t), &p.term)?,
                    None => return self.fail(NdErrorKind::HypothesisPlacement(a)),
                }
            }
        }
        Ok(open)
    }
}

/// Supplies fresh hypothesis words `p0, p1, ...`, skipping any word in use.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    next: u32,
    next_label: Label,
    avoid: BTreeSet<Symbol>,
}

impl Fresh {
    pub fn avoiding<'a>(words: impl IntoIterator<Item = &'a Symbol>) -> Fresh {
        Fresh {
            next: 0,
            next_label: 0,
            avoid: words.into_iter().cloned().collect(),
        }
    }

    pub fn word(&mut self) -> Symbol {
        loop {
            let w = Symbol::from(alloc::format!("p{}", self.next));
            self.next += 1;
            if !self.avoid.contains(&w) {
                return w;
            }
        }
    }

    pub fn label(&mut self) -> Label {
        self.next_label += 1;
        self.next_label - 1
    }

    /// A hypothesis term of the given sort.
    pub fn term(&mut self, sort: u32) -> StringTerm {
        let words: Vec<Symbol> = (0..=sort).map(|_| self.word()).collect();
        strings::hypothesis(&words)
    }
}

#[cfg(test)]
mod tests;
