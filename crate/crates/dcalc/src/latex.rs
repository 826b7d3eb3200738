//! LaTeX output: proof trees for `bussproofs`, traces as tables.

use std::fmt::Write;

use dcalc_core::aps::Aps;
use dcalc_core::contraction::Trace;
use dcalc_core::formula::Kind;
use dcalc_core::nd::{NdProof, NdRule};
use dcalc_core::{Connective, Formula, Item, Mode, StringTerm};

fn mode(m: Mode) -> String {
    match m {
        Mode::First => ">".into(),
        Mode::Last => "<".into(),
        Mode::At(n) => n.to_string(),
    }
}

pub fn connective(c: Connective) -> String {
    match c {
        Connective::Under => "\\backslash ".into(),
        Connective::Over => "/".into(),
        Connective::Prod => "\\bullet ".into(),
        Connective::Up(k) => format!("\\uparrow_{{{}}}", mode(k)),
        Connective::Down(k) => format!("\\downarrow_{{{}}}", mode(k)),
        Connective::Wrap(k) => format!("\\odot_{{{}}}", mode(k)),
    }
}

fn escape(s: &str) -> String {
    s.replace('_', "\\_")
}

pub fn formula(f: &Formula) -> String {
    fn go(f: &Formula, top: bool, out: &mut String) {
        match f.kind() {
            Kind::Atom(a) => {
                let _ = write!(out, "\\mathit{{{}}}", escape(a.as_str()));
            }
            Kind::Binary(c, l, r) => {
                if !top {
                    out.push('(');
                }
                go(l, false, out);
                out.push_str(&connective(*c));
                go(r, false, out);
                if !top {
                    out.push(')');
                }
            }
        }
    }
    let mut out = String::new();
    go(f, true, &mut out);
    out
}

pub fn term(t: &StringTerm) -> String {
    if t.is_empty() {
        return "\\epsilon".into();
    }
    t.items()
        .iter()
        .map(|i| match i {
            Item::Word(w) => format!("\\mathrm{{{}}}", escape(w.as_str())),
            Item::Sep => "\\mathbf{1}".into(),
        })
        .collect::<Vec<_>>()
        .join("+")
}

fn rule_label(r: &NdRule) -> String {
    match r {
        NdRule::Lexical(_) | NdRule::Hypothesis(_) => String::new(),
        NdRule::Elim(c) => format!("{}E", connective(*c)),
        NdRule::Intro(c) => format!("{}I", connective(*c)),
        NdRule::ElimDischarge(c, a, b) => format!("{}E^{{{},{}}}", connective(*c), a, b),
        NdRule::IntroDischarge(c, l) => format!("{}I^{{{}}}", connective(*c), l),
    }
}

/// A `prooftree` environment for `bussproofs`.
pub fn proof(p: &NdProof) -> String {
    let mut out = String::from("\\begin{prooftree}\n");
    node(p, &mut out);
    out.push_str("\\end{prooftree}\n");
    out
}

fn node(p: &NdProof, out: &mut String) {
    let judgement = format!("{} : {}", term(&p.term), formula(&p.formula));
    match (&p.rule, p.premisses.len()) {
        (NdRule::Hypothesis(l), _) => {
            let _ = writeln!(out, "\\AxiomC{{$[{}]^{{{}}}$}}", judgement, l);
        }
        (_, 0) => {
            let _ = writeln!(out, "\\AxiomC{{${}$}}", judgement);
        }
        (r, n) => {
            for q in &p.premisses {
                node(q, out);
            }
            let inf = if n == 1 { "UnaryInfC" } else { "BinaryInfC" };
            let _ = writeln!(out, "\\RightLabel{{${}$}}", rule_label(r));
            let _ = writeln!(out, "\\{}{{${}$}}", inf, judgement);
        }
    }
}

/// A table with one row per contraction step. `aps` is the structure the
/// trace started from, used to name points.
pub fn trace(t: &Trace, aps: &Aps) -> String {
    let mut out = String::from("\\begin{tabular}{rlll}\n");
    out.push_str("step & rule & redex & result \\\\\n\\hline\n");
    for (i, s) in t.steps.iter().enumerate() {
        let redex: Vec<String> = s.consumed.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(
            out,
            "{} & \\texttt{{{}}} & {} & \\texttt{{{}}} \\\\",
            i + 1,
            escape(&s.rule.to_string()),
            redex.join(", "),
            escape(&aps.row(&s.premisses))
        );
    }
    out.push_str("\\end{tabular}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use dcalc_core::Signature;

    #[test]
    fn formulas() {
        let sig = Signature::parse("np 0\ns 0\n").unwrap();
        let f = Formula::parse("(s^>np)!>s", &sig).unwrap();
        assert_eq!(
            formula(&f),
            "(\\mathit{s}\\uparrow_{>}\\mathit{np})\\downarrow_{>}\\mathit{s}"
        );
        assert_eq!(
            term(&StringTerm::parse("rang+1+up").unwrap()),
            "\\mathrm{rang}+\\mathbf{1}+\\mathrm{up}"
        );
        assert_eq!(term(&StringTerm::empty()), "\\epsilon");
    }
}
