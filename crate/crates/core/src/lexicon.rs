//! Lexical entries, grammars and matching sentences against entries.
//!
//! Grammar text format, one item per line, `#` starting a comment:
//!
//! ```text
//! np 0                                  # atom declarations come first
//! s 0
//! goal s                                # optional, defaults to `s`
//! mary := mary : np                     # head := string term : formula
//! rang_up := rang+1+up : (np\s)^>np
//! ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{parse_atom_line, strip_comment, Formula, LineError, Signature};
use crate::terms::{is_word, Item, StringTerm, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub headword: Symbol,
    pub string: StringTerm,
    pub formula: Formula,
}

impl LexEntry {
    /// Problems with this entry: ill-sorted formula, sort mismatch, no word.
    pub fn problems(&self) -> Vec<String> {
        let mut out: Vec<String> = self.formula.violations().iter().map(|v| format!("{}", v)).collect();
        if self.string.words().next().is_none() {
            out.push(format!("string term `{}` contains no word", self.string));
        }
        if out.is_empty() && self.string.sort() != self.formula.sort() {
            out.push(format!(
                "string `{}` has sort {} but formula {} has sort {}",
                self.string,
                self.string.sort(),
                self.formula,
                self.formula.sort()
            ));
        }
        out
    }

    /// The surface pieces between separators, skipping empty ones.
    pub fn pieces(&self) -> Vec<Vec<Symbol>> {
        self.string
            .items()
            .split(|i| matches!(i, Item::Sep))
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.iter()
                    .map(|i| match i {
                        Item::Word(w) => w.clone(),
                        Item::Sep => unreachable!(),
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} := {} : {}", self.headword, self.string, self.formula)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub signature: Signature,
    pub goal: Formula,
    entries: Vec<LexEntry>,
    by_head: BTreeMap<Symbol, Vec<usize>>,
    by_first_word: BTreeMap<Symbol, Vec<usize>>,
}

impl Grammar {
    pub fn new(signature: Signature, goal: Formula, entries: Vec<LexEntry>) -> Grammar {
        let mut by_head: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
        let mut by_first_word: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_head.entry(e.headword.clone()).or_default().push(i);
            if let Some(w) = e.string.words().next() {
                by_first_word.entry(w.clone()).or_default().push(i);
            }
        }
        Grammar {
            signature,
            goal,
            entries,
            by_head,
            by_first_word,
        }
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    /// All entries filed under `headword`, in file order.
    pub fn lookup(&self, headword: &str) -> Vec<&LexEntry> {
        self.by_head
            .get(headword)
            .map(|ix| ix.iter().map(|&i| &self.entries[i]).collect())
            .unwrap_or_default()
    }

    /// Parse and validate grammar text, reporting every problem found.
    pub fn parse(text: &str) -> Result<Grammar, Vec<LineError>> {
        let mut errors = Vec::new();
        let mut signature = Signature::new();
        let mut goal_line = None;
        let mut entry_lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if line.contains(":=") {
                entry_lines.push((line_no, line));
            } else if let Some(rest) = line.strip_prefix("goal ") {
                if goal_line.is_some() {
                    errors.push(LineError::new(line_no, "goal declared twice"));
                }
                goal_line = Some((line_no, rest.trim()));
            } else if !entry_lines.is_empty() {
                errors.push(LineError::new(
                    line_no,
                    format!("atom declaration `{}` after the first entry", line),
                ));
            } else {
                match parse_atom_line(line) {
                    Ok((name, sort)) => {
                        if signature.insert(name, sort).is_some() {
                            errors.push(LineError::new(line_no, format!("atom `{}` declared twice", name)));
                        }
                    }
                    Err(m) => errors.push(LineError::new(line_no, m)),
                }
            }
        }

        let goal = match goal_line {
            Some((line_no, text)) => match Formula::parse_checked(text, &signature) {
                Ok(f) => Some(f),
                Err(e) => {
                    errors.push(LineError::new(line_no, format!("goal: {}", e)));
                    None
                }
            },
            None => {
                let s = signature.atom("s");
                if s.is_none() {
                    errors.push(LineError::new(0, "no `goal` line and no atom `s` to default to"));
                }
                s
            }
        };

        let mut entries = Vec::new();
        for (line_no, line) in entry_lines {
            match parse_entry(line, &signature) {
                Ok(e) => {
                    for p in e.problems() {
                        errors.push(LineError::new(line_no, format!("entry `{}`: {}", e.headword, p)));
                    }
                    entries.push(e);
                }
                Err(m) => errors.push(LineError::new(line_no, m)),
            }
        }

        match goal {
            Some(goal) if errors.is_empty() => Ok(Grammar::new(signature, goal, entries)),
            _ => Err(errors),
        }
    }

    /// Every way of covering `tokens` with lexical entries.
    ///
    /// An entry covers one token per word of its string term. Each piece
    /// between separators covers consecutive tokens, and the pieces appear
    /// left to right; other material may only sit between pieces.
    pub fn covers(&self, tokens: &[Symbol]) -> Result<Vec<Cover>, UnknownWords> {
        let known: Vec<bool> = tokens
            .iter()
            .map(|t| self.entries.iter().any(|e| e.string.words().any(|w| w == t)))
            .collect();
        if known.iter().any(|k| !k) {
            let words = tokens
                .iter()
                .zip(&known)
                .filter(|(_, k)| !**k)
                .map(|(t, _)| t.clone())
                .collect();
            return Err(UnknownWords(words));
        }
        let mut search = CoverSearch {
            grammar: self,
            tokens,
            covered: alloc::vec![false; tokens.len()],
            placements: Vec::new(),
            out: Vec::new(),
        };
        search.run();
        Ok(search.out)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signature)?;
        writeln!(f, "goal {}", self.goal)?;
        for e in &self.entries {
            writeln!(f, "{}", e)?;
        }
        Ok(())
    }
}

fn parse_entry(line: &str, sig: &Signature) -> Result<LexEntry, String> {
    let (head, rest) = line.split_once(":=").ok_or("expected `:=`")?;
    let (term, formula) = rest
        .split_once(':')
        .ok_or_else(|| String::from("expected `head := term : formula`"))?;
    let head = head.trim();
    if !is_word(head) {
        return Err(format!("invalid headword `{}`", head));
    }
    let string = StringTerm::parse(term).map_err(|e| format!("{}", e))?;
    let formula = Formula::parse(formula.trim(), sig).map_err(|e| format!("{}", e))?;
    Ok(LexEntry {
        headword: Symbol::new(head),
        string,
        formula,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownWords(pub Vec<Symbol>);

impl fmt::Display for UnknownWords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown word")?;
        if self.0.len() > 1 {
            f.write_str("s")?;
        }
        for (i, w) in self.0.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, w)?;
        }
        Ok(())
    }
}

/// One entry placed on the sentence: token index for each word of its
/// string term, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub entry: usize,
    pub tokens: Vec<usize>,
}

/// An exact cover of the sentence, placements ordered by first token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub placements: Vec<Placement>,
}

impl Cover {
    /// `(hypothesis, word position)` of each token, in sentence order.
    pub fn token_leaves(&self, token_count: usize) -> Vec<(usize, usize)> {
        let mut out = alloc::vec![(0, 0); token_count];
        for (h, p) in self.placements.iter().enumerate() {
            for (pos, &t) in p.tokens.iter().enumerate() {
                out[t] = (h, pos);
            }
        }
        out
    }
}

struct CoverSearch<'a> {
    grammar: &'a Grammar,
    tokens: &'a [Symbol],
    covered: Vec<bool>,
    placements: Vec<Placement>,
    out: Vec<Cover>,
}

impl CoverSearch<'_> {
    fn run(&mut self) {
        let start = match self.covered.iter().position(|c| !c) {
            Some(s) => s,
            None => {
                self.out.push(Cover {
                    placements: self.placements.clone(),
                });
                return;
            }
        };
        let candidates = match self.grammar.by_first_word.get(&self.tokens[start]) {
            Some(c) => c.clone(),
            None => return,
        };
        for e in candidates {
            let pieces = self.grammar.entries[e].pieces();
            let mut used = Vec::new();
            self.place(e, &pieces, 0, start, true, &mut used);
        }
    }

    fn fits(&self, piece: &[Symbol], at: usize) -> bool {
        at + piece.len() <= self.tokens.len()
            && piece
                .iter()
                .enumerate()
                .all(|(i, w)| !self.covered[at + i] && self.tokens[at + i] == *w)
    }

    /// Place `pieces[k..]`, the next one starting at `from` (exactly there
    /// when `anchored`).
    fn place(
        &mut self,
        entry: usize,
        pieces: &[Vec<Symbol>],
        k: usize,
        from: usize,
        anchored: bool,
        used: &mut Vec<usize>,
    ) {
        if k == pieces.len() {
            for &t in used.iter() {
                self.covered[t] = true;
            }
            self.placements.push(Placement {
                entry,
                tokens: used.clone(),
            });
            self.run();
            self.placements.pop();
            for &t in used.iter() {
                self.covered[t] = false;
            }
            return;
        }
        let last = if anchored { from } else { self.tokens.len() };
        for at in from..=last.min(self.tokens.len()) {
            if !self.fits(&pieces[k], at) {
                continue;
            }
            let n = pieces[k].len();
            used.extend(at..at + n);
            for t in at..at + n {
                self.covered[t] = true;
            }
            self.place(entry, pieces, k + 1, at + n, false, used);
            for t in at..at + n {
                self.covered[t] = false;
            }
            used.truncate(used.len() - n);
        }
    }
}
