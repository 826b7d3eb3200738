//! String terms: sequences of words and separators.
//!
//! A string term denotes a string with holes. The separator `1` marks a
//! position where other material can later be inserted by one of the wrap
//! operations; the *sort* of a term is its number of separators.
//!
//! The textual syntax joins items with `+` and writes the separator as `1`,
//! e.g. `rang+1+up`. The empty term prints as the empty string.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;
use core::ops::{Add, Deref};

use thiserror::Error;

/// Number of separators in a string term or in the denotation of a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sort(u32);

impl Sort {
    pub const ZERO: Sort = Sort(0);

    pub const fn new(value: u32) -> Sort {
        Sort(value)
    }

    pub const fn get(self) -> u32 {
        self.0
    }
}

impl Add for Sort {
    type Output = Sort;

    fn add(self, rhs: Sort) -> Sort {
        Sort(self.0 + rhs.0)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which separator a wrap operation targets.
///
/// `First` and `Last` are kept distinct from `At(1)` and `At(sort)`: `Last`
/// has no fixed numeric index until the sort of the wrapped term is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// `>`: the leftmost separator.
    First,
    /// `<`: the rightmost separator.
    Last,
    /// `n`: the n-th separator counted from the left, starting at 1.
    At(NonZeroU32),
}

impl Mode {
    /// `At(n)`; `None` when `n == 0`.
    pub fn at(n: u32) -> Option<Mode> {
        NonZeroU32::new(n).map(Mode::At)
    }

    /// The 1-based index of the targeted separator in a term of sort `sort`,
    /// or `None` when no such separator exists.
    pub fn position(self, sort: u32) -> Option<u32> {
        match self {
            _ if sort == 0 => None,
            Mode::First => Some(1),
            Mode::Last => Some(sort),
            Mode::At(n) if n.get() <= sort => Some(n.get()),
            Mode::At(_) => None,
        }
    }

    /// The suffix used in the concrete syntax: `>`, `<` or the index.
    pub fn symbol(self) -> ModeSymbol {
        ModeSymbol(self)
    }
}

/// Display adapter for [`Mode::symbol`].
pub struct ModeSymbol(Mode);

impl fmt::Display for ModeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Mode::First => f.write_str(">"),
            Mode::Last => f.write_str("<"),
            Mode::At(n) => write!(f, "{}", n),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbol().fmt(f)
    }
}

/// An interned-by-sharing word or variable name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Deref for Symbol {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl core::borrow::Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Symbol {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Symbol {
        Symbol(Arc::from(s))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One position of a string term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Word(Symbol),
    Sep,
}

impl Item {
    pub fn sort(&self) -> u32 {
        match self {
            Item::Word(_) => 0,
            Item::Sep => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WrapError {
    #[error("cannot wrap a term of sort 0")]
    WrapOnSortZero,
    #[error("separator {index} requested but the term has sort {sort}")]
    IndexOutOfRange { index: u32, sort: u32 },
}

/// An ordered sequence of words and separators. The empty sequence is ε.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StringTerm {
    items: Vec<Item>,
}

impl StringTerm {
    pub fn empty() -> StringTerm {
        StringTerm { items: Vec::new() }
    }

    pub fn from_items(items: Vec<Item>) -> StringTerm {
        StringTerm { items }
    }

    pub fn word(symbol: impl Into<Symbol>) -> StringTerm {
        StringTerm {
            items: alloc::vec![Item::Word(symbol.into())],
        }
    }

    pub fn sep() -> StringTerm {
        StringTerm {
            items: alloc::vec![Item::Sep],
        }
    }

    /// `w0 + 1 + w1 + ... + 1 + wn` for the given words.
    pub fn separated<I, S>(words: I) -> StringTerm
    where
        I: IntoIterator<Item = S>,
        S: Into<Symbol>,
    {
        let mut items = Vec::new();
        for (i, w) in words.into_iter().enumerate() {
            if i > 0 {
                items.push(Item::Sep);
            }
            items.push(Item::Word(w.into()));
        }
        StringTerm { items }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Item> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn sort(&self) -> Sort {
        Sort(self.items.iter().filter(|i| matches!(i, Item::Sep)).count() as u32)
    }

    pub fn words(&self) -> impl Iterator<Item = &Symbol> {
        self.items.iter().filter_map(|i| match i {
            Item::Word(w) => Some(w),
            Item::Sep => None,
        })
    }

    pub fn concat(&self, other: &StringTerm) -> StringTerm {
        let mut items = Vec::with_capacity(self.items.len() + other.items.len());
        items.extend_from_slice(&self.items);
        items.extend_from_slice(&other.items);
        StringTerm { items }
    }

    /// Index into `items` of the separator targeted by `mode`.
    pub fn separator_index(&self, mode: Mode) -> Result<usize, WrapError> {
        let sort = self.sort().get();
        if sort == 0 {
            return Err(WrapError::WrapOnSortZero);
        }
        let wanted = match mode.position(sort) {
            Some(p) => p,
            None => {
                let index = match mode {
                    Mode::At(n) => n.get(),
                    _ => unreachable!("first/last always resolve when sort > 0"),
                };
                return Err(WrapError::IndexOutOfRange { index, sort });
            }
        };
        let mut seen = 0;
        for (i, item) in self.items.iter().enumerate() {
            if let Item::Sep = item {
                seen += 1;
                if seen == wanted {
                    return Ok(i);
                }
            }
        }
        unreachable!("position() checked the separator count")
    }

    /// Replace the separator selected by `mode` with `inner`.
    pub fn wrap(&self, mode: Mode, inner: &StringTerm) -> Result<StringTerm, WrapError> {
        let at = self.separator_index(mode)?;
        let mut items = Vec::with_capacity(self.items.len() + inner.items.len() - 1);
        items.extend_from_slice(&self.items[..at]);
        items.extend_from_slice(&inner.items);
        items.extend_from_slice(&self.items[at + 1..]);
        Ok(StringTerm { items })
    }

    /// Position of the first contiguous occurrence of `needle`.
    /// The empty needle occurs at 0.
    pub fn find(&self, needle: &StringTerm) -> Option<usize> {
        if needle.is_empty() {
            return Some(0);
        }
        self.items
            .windows(needle.items.len())
            .position(|w| w == needle.items.as_slice())
    }

    /// Replace `len` items starting at `start` with `replacement`.
    pub fn splice(&self, start: usize, len: usize, replacement: &StringTerm) -> StringTerm {
        let mut items = Vec::with_capacity(self.items.len() - len + replacement.items.len());
        items.extend_from_slice(&self.items[..start]);
        items.extend_from_slice(&replacement.items);
        items.extend_from_slice(&self.items[start + len..]);
        StringTerm { items }
    }

    pub fn strip_prefix(&self, prefix: &StringTerm) -> Option<StringTerm> {
        self.items
            .strip_prefix(prefix.items.as_slice())
            .map(|rest| StringTerm::from_items(rest.to_vec()))
    }

    pub fn strip_suffix(&self, suffix: &StringTerm) -> Option<StringTerm> {
        self.items
            .strip_suffix(suffix.items.as_slice())
            .map(|rest| StringTerm::from_items(rest.to_vec()))
    }

    /// Parse the `+`-separated syntax. The empty (or all-blank) input is ε.
    pub fn parse(text: &str) -> Result<StringTerm, TermSyntaxError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(StringTerm::empty());
        }
        let mut items = Vec::new();
        for (index, piece) in trimmed.split('+').enumerate() {
            let piece = piece.trim();
            if piece == "1" {
                items.push(Item::Sep);
            } else if is_word(piece) {
                items.push(Item::Word(Symbol::new(piece)));
            } else {
                return Err(TermSyntaxError {
                    index,
                    piece: piece.into(),
                });
            }
        }
        Ok(StringTerm { items })
    }
}

/// Whether `s` is a valid word in the string-term syntax.
pub fn is_word(s: &str) -> bool {
    !s.is_empty() && s != "1" && s.chars().all(is_word_char)
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '-'
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid string term item {piece:?} at position {index}")]
pub struct TermSyntaxError {
    pub index: usize,
    pub piece: String,
}

impl fmt::Display for StringTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match item {
                Item::Word(w) => f.write_str(w)?,
                Item::Sep => f.write_str("1")?,
            }
        }
        Ok(())
    }
}

impl FromIterator<Item> for StringTerm {
    fn from_iter<T: IntoIterator<Item = Item>>(iter: T) -> Self {
        StringTerm {
            items: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn t(s: &str) -> StringTerm {
        StringTerm::parse(s).unwrap()
    }

    #[test]
    fn sorts() {
        assert_eq!(t("mary").sort(), Sort::new(0));
        assert_eq!(t("rang+1+up").sort(), Sort::new(1));
        assert_eq!(t("p+1+q+1+r").sort(), Sort::new(2));
        assert_eq!(StringTerm::empty().sort(), Sort::ZERO);
    }

    #[test]
    fn concat_examples() {
        assert_eq!(t("mary").concat(&t("rang")), t("mary+rang"));
        assert_eq!(StringTerm::empty().concat(&t("a+1+b")), t("a+1+b"));
        let ab = t("a+1").concat(&t("1+b"));
        assert_eq!(ab, t("a+1+1+b"));
        assert_eq!(ab.sort(), Sort::new(2));
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(
            t("rang+1+up").wrap(Mode::First, &t("everyone")).unwrap(),
            t("rang+everyone+up")
        );
        assert_eq!(t("1").wrap(Mode::First, &t("b+1+c")).unwrap(), t("b+1+c"));
        assert_eq!(t("a+1+b+1+c").wrap(Mode::Last, &t("beta")).unwrap(), t("a+1+b+beta+c"));
        assert_eq!(
            t("a+1+b+1+c").wrap(Mode::at(2).unwrap(), &t("1")).unwrap(),
            t("a+1+b+1+c")
        );
        assert_eq!(
            t("a+1+b+1+c").wrap(Mode::at(1).unwrap(), &t("x")).unwrap(),
            t("a+x+b+1+c")
        );
    }

    #[test]
    fn wrap_errors() {
        assert_eq!(t("a+b").wrap(Mode::First, &t("x")), Err(WrapError::WrapOnSortZero));
        assert_eq!(
            t("a+1+b").wrap(Mode::at(2).unwrap(), &t("x")),
            Err(WrapError::IndexOutOfRange { index: 2, sort: 1 })
        );
        assert_eq!(Mode::at(0), None);
    }

    #[test]
    fn syntax_round_trip_and_errors() {
        for s in ["rang+1+up", "1", "gave+1+the+cold+shoulder", "", "p0+1+1+p1"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(t(" a + 1 + b ").to_string(), "a+1+b");
        assert!(StringTerm::parse("a++b").is_err());
        assert!(StringTerm::parse("a+b c").is_err());
    }

    fn arb_term() -> impl Strategy<Value = StringTerm> {
        prop::collection::vec(
            prop_oneof![Just(Item::Sep), "[a-e]{1,3}".prop_map(|w| Item::Word(Symbol::from(w))),],
            0..8,
        )
        .prop_map(StringTerm::from_items)
    }

    fn arb_mode() -> impl Strategy<Value = Mode> {
        prop_oneof![
            Just(Mode::First),
            Just(Mode::Last),
            (1u32..4).prop_map(|n| Mode::at(n).unwrap())
        ]
    }

    proptest! {
        #[test]
        fn concat_sort_is_additive(a in arb_term(), b in arb_term()) {
            prop_assert_eq!(a.concat(&b).sort(), a.sort() + b.sort());
        }

        #[test]
        fn concat_is_associative_with_identity(a in arb_term(), b in arb_term(), c in arb_term()) {
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
            prop_assert_eq!(StringTerm::empty().concat(&a), a.clone());
            prop_assert_eq!(a.concat(&StringTerm::empty()), a);
        }

        #[test]
        fn wrap_sort_and_mode_coincidences(a in arb_term(), b in arb_term(), k in arb_mode()) {
            if let Ok(w) = a.wrap(k, &b) {
                prop_assert_eq!(w.sort().get() + 1, a.sort().get() + b.sort().get());
            }
            if a.sort().get() >= 1 {
                let n = a.sort().get();
                prop_assert_eq!(a.wrap(Mode::First, &b), a.wrap(Mode::at(1).unwrap(), &b));
                prop_assert_eq!(a.wrap(Mode::Last, &b), a.wrap(Mode::at(n).unwrap(), &b));
            }
        }

        #[test]
        fn printer_round_trips(a in arb_term()) {
            prop_assert_eq!(StringTerm::parse(&a.to_string()).unwrap(), a);
        }
    }
}
