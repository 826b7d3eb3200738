//! Formulas of the Displacement calculus and their sorts.
//!
//! A formula is either an atom, whose sort comes from a [`Signature`], or a
//! binary connective applied to two subformulas. Operands are stored in the
//! order they are written: `A\C` has left `A` and right `C`, `C^>B` has left
//! `C` and right `B`, and so on.
//!
//! | connective | written  | sort                    |
//! |------------|----------|-------------------------|
//! | `A\C`      | `A\C`    | s(C) − s(A)             |
//! | `C/B`      | `C/B`    | s(C) − s(B)             |
//! | `A•B`      | `A*B`    | s(A) + s(B)             |
//! | `C↑ₖB`     | `C^kB`   | s(C) + 1 − s(B)         |
//! | `A↓ₖC`     | `A!kC`   | s(C) + 1 − s(A)         |
//! | `A⊙ₖB`     | `A ok B` | s(A) + s(B) − 1         |
//!
//! Sorts are computed once, when a node is built, and cached on the node.
//! Construction never fails; ill-sorted formulas are reported by
//! [`Formula::violations`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::terms::{Mode, Sort, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    /// `A\C`
    Under,
    /// `C/B`
    Over,
    /// `A•B`
    Prod,
    /// `C↑ₖB`
    Up(Mode),
    /// `A↓ₖC`
    Down(Mode),
    /// `A⊙ₖB`
    Wrap(Mode),
}

impl Connective {
    pub fn mode(self) -> Option<Mode> {
        match self {
            Connective::Up(k) | Connective::Down(k) | Connective::Wrap(k) => Some(k),
            _ => None,
        }
    }

    /// Raw sort of `left op right` given the operand sorts.
    pub fn sort(self, left: i64, right: i64) -> i64 {
        match self {
            Connective::Under => right - left,
            Connective::Over => left - right,
            Connective::Prod => left + right,
            Connective::Up(_) => left + 1 - right,
            Connective::Down(_) => right + 1 - left,
            Connective::Wrap(_) => left + right - 1,
        }
    }

    /// ASCII operator as used by the parser and printer.
    pub fn ascii(self) -> AsciiOp {
        AsciiOp(self)
    }

    /// Unicode operator symbol with its mode, e.g. `↑>`.
    pub fn unicode(self) -> UnicodeOp {
        UnicodeOp(self)
    }
}

pub struct AsciiOp(Connective);

impl fmt::Display for AsciiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Connective::Under => f.write_str("\\"),
            Connective::Over => f.write_str("/"),
            Connective::Prod => f.write_str("*"),
            Connective::Up(k) => write!(f, "^{}", k),
            Connective::Down(k) => write!(f, "!{}", k),
            Connective::Wrap(k) => write!(f, " o{} ", k),
        }
    }
}

pub struct UnicodeOp(Connective);

impl fmt::Display for UnicodeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Connective::Under => f.write_str("\\"),
            Connective::Over => f.write_str("/"),
            Connective::Prod => f.write_str("•"),
            Connective::Up(k) => write!(f, "↑{}", k),
            Connective::Down(k) => write!(f, "↓{}", k),
            Connective::Wrap(k) => write!(f, "⊙{}", k),
        }
    }
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Atom(Symbol),
    Binary(Connective, Formula, Formula),
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Node {
    kind: Kind,
    sort: i64,
    connectives: u32,
}

/// A shared, immutable formula.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula(Arc<Node>);

impl Formula {
    pub fn atom(name: impl Into<Symbol>, sort: Sort) -> Formula {
        Formula(Arc::new(Node {
            kind: Kind::Atom(name.into()),
            sort: sort.get() as i64,
            connectives: 0,
        }))
    }

    pub fn binary(op: Connective, left: Formula, right: Formula) -> Formula {
        let sort = op.sort(left.raw_sort(), right.raw_sort());
        let connectives = 1 + left.0.connectives + right.0.connectives;
        Formula(Arc::new(Node {
            kind: Kind::Binary(op, left, right),
            sort,
            connectives,
        }))
    }

    pub fn under(a: Formula, c: Formula) -> Formula {
        Formula::binary(Connective::Under, a, c)
    }

    pub fn over(c: Formula, b: Formula) -> Formula {
        Formula::binary(Connective::Over, c, b)
    }

    pub fn prod(a: Formula, b: Formula) -> Formula {
        Formula::binary(Connective::Prod, a, b)
    }

    pub fn up(c: Formula, k: Mode, b: Formula) -> Formula {
        Formula::binary(Connective::Up(k), c, b)
    }

    pub fn down(a: Formula, k: Mode, c: Formula) -> Formula {
        Formula::binary(Connective::Down(k), a, c)
    }

    pub fn wrap(a: Formula, k: Mode, b: Formula) -> Formula {
        Formula::binary(Connective::Wrap(k), a, b)
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn as_atom(&self) -> Option<&Symbol> {
        match &self.0.kind {
            Kind::Atom(a) => Some(a),
            Kind::Binary(..) => None,
        }
    }

    pub fn as_binary(&self) -> Option<(Connective, &Formula, &Formula)> {
        match &self.0.kind {
            Kind::Atom(_) => None,
            Kind::Binary(op, l, r) => Some((*op, l, r)),
        }
    }

    pub fn is_atom(&self) -> bool {
        self.as_atom().is_some()
    }

    /// The cached sort, possibly negative for ill-sorted formulas.
    pub fn raw_sort(&self) -> i64 {
        self.0.sort
    }

    /// The sort of a well-sorted formula. Negative raw sorts clamp to 0.
    pub fn sort(&self) -> Sort {
        Sort::new(self.0.sort.max(0) as u32)
    }

    pub fn connective_count(&self) -> u32 {
        self.0.connectives
    }

    /// True when only `\`, `/`, `*` and sort-0 atoms occur.
    pub fn is_lambek(&self) -> bool {
        match &self.0.kind {
            Kind::Atom(_) => self.0.sort == 0,
            Kind::Binary(op, l, r) => {
                matches!(op, Connective::Under | Connective::Over | Connective::Prod) && l.is_lambek() && r.is_lambek()
            }
        }
    }

    pub fn is_well_sorted(&self) -> bool {
        self.violations().is_empty()
    }

    /// Every sort side condition that fails anywhere in the formula,
    /// innermost first.
    pub fn violations(&self) -> Vec<SortViolation> {
        let mut out = Vec::new();
        self.collect_violations(&mut out);
        out
    }

    fn collect_violations(&self, out: &mut Vec<SortViolation>) {
        let (op, l, r) = match &self.0.kind {
            Kind::Atom(_) => return,
            Kind::Binary(op, l, r) => (*op, l, r),
        };
        l.collect_violations(out);
        r.collect_violations(out);
        let mut report = |kind| {
            out.push(SortViolation {
                formula: self.clone(),
                kind,
            })
        };
        if self.raw_sort() < 0 {
            report(ViolationKind::NegativeSort(self.raw_sort()));
        }
        match op {
            Connective::Down(k) | Connective::Wrap(k) => {
                let wrapped = l.raw_sort();
                if wrapped < 1 {
                    report(ViolationKind::WrappedSortZero(wrapped));
                } else if let Mode::At(n) = k {
                    if i64::from(n.get()) > wrapped {
                        report(ViolationKind::ModeOutOfRange {
                            index: n.get(),
                            sort: wrapped,
                        });
                    }
                }
            }
            Connective::Up(k) => {
                if l.raw_sort() < r.raw_sort() {
                    report(ViolationKind::ExtractionSort {
                        body: l.raw_sort(),
                        extracted: r.raw_sort(),
                    });
                } else if let Mode::At(n) = k {
                    if i64::from(n.get()) > self.raw_sort() {
                        report(ViolationKind::ModeOutOfRange {
                            index: n.get(),
                            sort: self.raw_sort(),
                        });
                    }
                }
            }
            _ => {}
        }
    }

    /// Parse the ASCII syntax, resolving atoms against `sig`.
    pub fn parse(text: &str, sig: &Signature) -> Result<Formula, FormulaError> {
        let mut p = Parser { src: text, pos: 0, sig };
        let f = p.expr()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(f)
    }

    /// Parse and reject ill-sorted formulas.
    pub fn parse_checked(text: &str, sig: &Signature) -> Result<Formula, FormulaError> {
        let f = Formula::parse(text, sig)?;
        let violations = f.violations();
        if violations.is_empty() {
            Ok(f)
        } else {
            Err(FormulaError::IllSorted(violations))
        }
    }

    /// Display adapter using `•`, `↑`, `↓`, `⊙`.
    pub fn unicode(&self) -> UnicodeFormula<'_> {
        UnicodeFormula(self)
    }

    fn write_with(
        &self,
        f: &mut fmt::Formatter<'_>,
        op_text: &dyn Fn(Connective, &mut fmt::Formatter<'_>) -> fmt::Result,
    ) -> fmt::Result {
        match &self.0.kind {
            Kind::Atom(a) => f.write_str(a),
            Kind::Binary(op, l, r) => {
                let bare_left = l.is_atom() || (*op == Connective::Over && is_op(l, Connective::Over));
                let bare_right = r.is_atom() || (*op == Connective::Under && is_op(r, Connective::Under));
                write_operand(l, bare_left, f, op_text)?;
                op_text(*op, f)?;
                write_operand(r, bare_right, f, op_text)
            }
        }
    }
}

fn is_op(f: &Formula, op: Connective) -> bool {
    matches!(f.as_binary(), Some((o, _, _)) if o == op)
}

fn write_operand(
    f: &Formula,
    bare: bool,
    out: &mut fmt::Formatter<'_>,
    op_text: &dyn Fn(Connective, &mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if bare {
        f.write_with(out, op_text)
    } else {
        out.write_str("(")?;
        f.write_with(out, op_text)?;
        out.write_str(")")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|op, f| write!(f, "{}", op.ascii()))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", self)
    }
}

pub struct UnicodeFormula<'a>(&'a Formula);

impl fmt::Display for UnicodeFormula<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write_with(f, &|op, f| write!(f, "{}", op.unicode()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    NegativeSort(i64),
    /// The first argument of `↓` or `⊙` must have sort at least 1.
    WrappedSortZero(i64),
    /// `C↑B` needs s(C) ≥ s(B).
    ExtractionSort {
        body: i64,
        extracted: i64,
    },
    /// `At(n)` names a separator that does not exist.
    ModeOutOfRange {
        index: u32,
        sort: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortViolation {
    pub formula: Formula,
    pub kind: ViolationKind,
}

impl fmt::Display for SortViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "in {}: ", self.formula)?;
        match &self.kind {
            ViolationKind::NegativeSort(s) => write!(f, "computed sort {} is negative", s),
            ViolationKind::WrappedSortZero(s) => {
                write!(f, "wrapped argument has sort {}, needs at least 1", s)
            }
            ViolationKind::ExtractionSort { body, extracted } => {
                write!(f, "body sort {} is smaller than extracted sort {}", body, extracted)
            }
            ViolationKind::ModeOutOfRange { index, sort } => {
                write!(f, "mode {} exceeds available sort {}", index, sort)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("ill-sorted formula: {}", join_violations(.0))]
    IllSorted(Vec<SortViolation>),
}

fn join_violations(v: &[SortViolation]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{}", x)).collect();
    parts.join("; ")
}

/// Atom sorts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    atoms: BTreeMap<Symbol, Sort>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Add or replace an atom.
    pub fn insert(&mut self, name: impl Into<Symbol>, sort: Sort) -> Option<Sort> {
        self.atoms.insert(name.into(), sort)
    }

    pub fn get(&self, name: &str) -> Option<Sort> {
        self.atoms.get(name).copied()
    }

    pub fn atom(&self, name: &str) -> Option<Formula> {
        self.atoms
            .get_key_value(name)
            .map(|(k, s)| Formula::atom(k.clone(), *s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, Sort)> {
        self.atoms.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Parse `atom sort` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Signature, Vec<LineError>> {
        let mut sig = Signature::new();
        let mut errors = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            match parse_atom_line(line) {
                Ok((name, sort)) => {
                    if sig.insert(name, sort).is_some() {
                        errors.push(LineError::new(i + 1, format!("atom `{}` declared twice", name)));
                    }
                }
                Err(message) => errors.push(LineError::new(i + 1, message)),
            }
        }
        if errors.is_empty() {
            Ok(sig)
        } else {
            Err(errors)
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, sort) in &self.atoms {
            writeln!(f, "{} {}", name, sort)?;
        }
        Ok(())
    }
}

/// An error tied to a 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl LineError {
    pub fn new(line: usize, message: impl Into<String>) -> LineError {
        LineError {
            line,
            message: message.into(),
        }
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// `name sort` with a valid atom name and a non-negative integer sort.
pub(crate) fn parse_atom_line(line: &str) -> Result<(&str, Sort), String> {
    let mut parts = line.split_whitespace();
    let (name, sort) = match (parts.next(), parts.next(), parts.next()) {
        (Some(n), Some(s), None) => (n, s),
        _ => return Err(format!("expected `atom sort`, found `{}`", line)),
    };
    if !is_atom_name(name) {
        return Err(format!("invalid atom name `{}`", name));
    }
    let sort: u32 = sort
        .parse()
        .map_err(|_| format!("invalid sort `{}` for atom `{}`", sort, name))?;
    Ok((name, Sort::new(sort)))
}

pub fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic()) && chars.all(|c| c.is_alphanumeric() || c == '_')
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> FormulaError {
        FormulaError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    /// `primary (op primary)*` where a chain of more than one operator is
    /// only allowed for `/` (grouping left) and `\` (grouping right).
    fn expr(&mut self) -> Result<Formula, FormulaError> {
        let mut operands = alloc::vec![self.primary()?];
        let mut ops = Vec::new();
        while let Some(op) = self.operator()? {
            if let Some(&first) = ops.first() {
                if first != op || !matches!(op, Connective::Over | Connective::Under) {
                    return Err(self.error("mixed or non-associative operators need parentheses"));
                }
            }
            ops.push(op);
            operands.push(self.primary()?);
        }
        match ops.first() {
            None => Ok(operands.pop().unwrap()),
            Some(Connective::Under) => {
                let mut acc = operands.pop().unwrap();
                while let Some(l) = operands.pop() {
                    acc = Formula::under(l, acc);
                }
                Ok(acc)
            }
            Some(&op) => {
                let mut it = operands.into_iter();
                let mut acc = it.next().unwrap();
                for r in it {
                    acc = Formula::binary(op, acc, r);
                }
                Ok(acc)
            }
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let f = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(f)
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                    self.bump();
                }
                let name = &self.src[start..self.pos];
                self.sig
                    .atom(name)
                    .ok_or_else(|| FormulaError::UnknownAtom(name.into()))
            }
            _ => Err(self.error("expected an atom or `(`")),
        }
    }

    fn operator(&mut self) -> Result<Option<Connective>, FormulaError> {
        self.skip_ws();
        let op = match self.peek() {
            Some('\\') => {
                self.bump();
                Connective::Under
            }
            Some('/') => {
                self.bump();
                Connective::Over
            }
            Some('*') => {
                self.bump();
                Connective::Prod
            }
            Some('^') => {
                self.bump();
                Connective::Up(self.mode()?)
            }
            Some('!') => {
                self.bump();
                Connective::Down(self.mode()?)
            }
            Some('o') => {
                self.bump();
                Connective::Wrap(self.mode()?)
            }
            _ => return Ok(None),
        };
        Ok(Some(op))
    }

    fn mode(&mut self) -> Result<Mode, FormulaError> {
        match self.peek() {
            Some('>') => {
                self.bump();
                Ok(Mode::First)
            }
            Some('<') => {
                self.bump();
                Ok(Mode::Last)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.bump();
                }
                self.src[start..self.pos]
                    .parse::<u32>()
                    .ok()
                    .and_then(Mode::at)
                    .ok_or_else(|| self.error("mode index must be a positive integer"))
            }
            _ => Err(self.error("expected a mode `>`, `<` or an index")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn sig() -> Signature {
        Signature::parse("np 0\nn 0\ns 0\ninf 1\npp 0\n").unwrap()
    }

    fn f(s: &str) -> Formula {
        Formula::parse(s, &sig()).unwrap()
    }

    #[test]
    fn table_sorts() {
        assert_eq!(f("(np\\s)^>np").raw_sort(), 1);
        assert_eq!(f("np").raw_sort(), 0);
        assert_eq!(f("(s^>np)!>s").raw_sort(), 0);
        assert_eq!(f("inf*inf").raw_sort(), 2);
        assert_eq!(f("inf o> inf").raw_sort(), 1);
        assert_eq!(f("inf\\s").raw_sort(), -1);
    }

    #[test]
    fn violations_reported() {
        assert!(f("(np\\s)^>np").is_well_sorted());
        let v = f("np\\(s o> s)").violations();
        assert!(v.iter().any(|x| matches!(x.kind, ViolationKind::WrappedSortZero(0))));
        let v = f("s^2np").violations();
        assert_eq!(v[0].kind, ViolationKind::ModeOutOfRange { index: 2, sort: 1 });
        let v = f("np^>inf").violations();
        assert!(matches!(v[0].kind, ViolationKind::ExtractionSort { .. }));
        assert!(f("(inf*inf)!2(s*inf)").violations().is_empty());
        assert!(!f("inf!2s").violations().is_empty());
    }

    #[test]
    fn associativity_and_printing() {
        let under = f("np\\np\\s");
        assert_eq!(under, f("np\\(np\\s)"));
        assert_eq!(under.to_string(), "np\\np\\s");
        let over = f("s/np/np");
        assert_eq!(over, f("(s/np)/np"));
        assert_eq!(over.to_string(), "s/np/np");
        assert_eq!(f("(np\\s)/np").to_string(), "(np\\s)/np");
        assert_eq!(f("np\\(s/np)").to_string(), "np\\(s/np)");
        assert_eq!(f("(s^>np)!>s").to_string(), "(s^>np)!>s");
        assert_eq!(f("inf o2 (np*np)").to_string(), "inf o2 (np*np)");
        assert_eq!(f("s/(s/np)").to_string(), "s/(s/np)");
        assert!(Formula::parse("np\\s/np", &sig()).is_err());
        assert!(Formula::parse("np*np*np", &sig()).is_err());
        assert!(matches!(
            Formula::parse("vp", &sig()),
            Err(FormulaError::UnknownAtom(_))
        ));
        assert!(Formula::parse("s^0np", &sig()).is_err());
        assert_eq!(f("(s^>np)!>s").unicode().to_string(), "(s↑>np)↓>s");
    }

    #[test]
    fn signature_errors_carry_lines() {
        let err = Signature::parse("np 0\n\nbad\ns x\nnp 1\n").unwrap_err();
        let lines: Vec<usize> = err.iter().map(|e| e.line).collect();
        assert_eq!(lines, [3, 4, 5]);
    }
}
