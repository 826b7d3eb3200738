//! Sequent syntax for `prove`: `x:np, y:np\s |- x+y:s`.
//!
//! `⊢` may replace `|-`. The goal term may be `...` or left out
//! (`x:np |- np`), in which case any comb is accepted. A hypothesis term that
//! is a single word but whose formula has sort n > 0 stands for the
//! separated term `w_0+1+…+1+w_n`.

use anyhow::{anyhow, bail, Context, Result};
use dcalc_core::{Formula, Signature, StringTerm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentText {
    pub hypotheses: Vec<(StringTerm, Formula)>,
    pub goal: Formula,
    /// `None` for `...` or a missing goal term.
    pub goal_term: Option<StringTerm>,
}

fn formula(text: &str, sig: &Signature) -> Result<Formula> {
    let f = Formula::parse(text.trim(), sig).with_context(|| format!("in formula `{}`", text.trim()))?;
    if let Some(v) = f.violations().first() {
        bail!("formula `{}` is ill-sorted: {}", f, v);
    }
    Ok(f)
}

fn term(text: &str) -> Result<StringTerm> {
    StringTerm::parse(text).with_context(|| format!("in string term `{}`", text.trim()))
}

pub fn parse_sequent(text: &str, sig: &Signature) -> Result<SequentText> {
    let (left, right) = text
        .split_once("|-")
        .or_else(|| text.split_once('⊢'))
        .ok_or_else(|| anyhow!("expected `|-` between hypotheses and goal"))?;
    let mut hypotheses = Vec::new();
    if !left.trim().is_empty() {
        for (i, h) in left.split(',').enumerate() {
            let (t, f) = h
                .split_once(':')
                .ok_or_else(|| anyhow!("hypothesis {}: expected `term : formula`", i + 1))?;
            let f = formula(f, sig).with_context(|| format!("hypothesis {}", i + 1))?;
            let mut t = term(t).with_context(|| format!("hypothesis {}", i + 1))?;
            let sort = f.sort().get();
            if sort > 0 && t.sort().get() == 0 && t.len() == 1 {
                let w = t.words().next().expect("one word").clone();
                t = StringTerm::separated((0..=sort).map(|k| format!("{}_{}", w, k)));
            }
            hypotheses.push((t, f));
        }
    }
    let (goal_term, goal) = match right.split_once(':') {
        Some((t, f)) if t.trim() == "..." => (None, formula(f, sig)?),
        Some((t, f)) => (Some(term(t)?), formula(f, sig)?),
        None => (None, formula(right, sig)?),
    };
    Ok(SequentText {
        hypotheses,
        goal,
        goal_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::parse("np 0\ns 0\n").unwrap()
    }

    #[test]
    fn plain() {
        let s = parse_sequent("x:np, y:np\\s |- x+y:s", &sig()).unwrap();
        assert_eq!(s.hypotheses.len(), 2);
        assert_eq!(s.goal_term.unwrap().to_string(), "x+y");
        assert_eq!(s.goal.to_string(), "s");
    }

    #[test]
    fn net_goal_and_expansion() {
        let s = parse_sequent("v:(np\\s)^>np, o:np, x:np |- ... : s", &sig()).unwrap();
        assert!(s.goal_term.is_none());
        assert_eq!(s.hypotheses[0].0.to_string(), "v_0+1+v_1");
        let s = parse_sequent("|- np\\np", &sig()).unwrap();
        assert!(s.hypotheses.is_empty());
        assert!(s.goal_term.is_none());
    }

    #[test]
    fn errors() {
        assert!(parse_sequent("x:np", &sig()).is_err());
        assert!(parse_sequent("x np |- x:np", &sig()).is_err());
        assert!(parse_sequent("x:vp |- x:np", &sig()).is_err());
        assert!(parse_sequent("x:np |- x+:np", &sig()).is_err());
    }
}
