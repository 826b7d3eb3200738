//! Text form of natural-deduction proofs.
//!
//! A proof file starts with atom declarations (`np 0`, one per line, as in
//! a signature file) followed by one proof:
//!
//! ```text
//! np 0
//! s 0
//! (\E [x+y : s]
//!   (lex 0 [x : np])
//!   (lex 1 [y : np\s]))
//! ```
//!
//! Each node is `(RULE ARGS [TERM : FORMULA] PREMISSES)`. Rules are `lex i`,
//! `hyp l`, an operator followed by `E` or `I` (`\E`, `/I 3`, `^>E`, `!2I 0`,
//! `o<I`, `*E 0 1`), where the numbers are the lexical index, hypothesis
//! label, or discharged labels. Unicode operators (`•`, `↑`, `↓`, `⊙`) are
//! accepted too.

use std::fmt::Write;

use anyhow::{anyhow, bail, Context, Result};
use dcalc_core::nd::{Label, NdProof, NdRule};
use dcalc_core::{Connective, Formula, Mode, Signature, StringTerm};

pub fn rule_token(rule: &NdRule) -> String {
    let op = |c: &Connective| c.ascii().to_string().trim().to_string();
    match rule {
        NdRule::Lexical(i) => format!("lex {}", i),
        NdRule::Hypothesis(l) => format!("hyp {}", l),
        NdRule::Elim(c) => format!("{}E", op(c)),
        NdRule::ElimDischarge(c, a, b) => format!("{}E {} {}", op(c), a, b),
        NdRule::Intro(c) => format!("{}I", op(c)),
        NdRule::IntroDischarge(c, l) => format!("{}I {}", op(c), l),
    }
}

/// Print `p` one node per line.
pub fn print_proof(p: &NdProof) -> String {
    let mut out = String::new();
    write_node(p, 0, &mut out);
    out
}

fn write_node(p: &NdProof, indent: usize, out: &mut String) {
    let _ = write!(
        out,
        "{:indent$}({} [{} : {}]",
        "",
        rule_token(&p.rule),
        p.term,
        p.formula,
        indent = indent
    );
    for q in &p.premisses {
        out.push('\n');
        write_node(q, indent + 2, out);
    }
    out.push(')');
}

/// Print a proof file: the atoms used, then the proof.
pub fn print_file(p: &NdProof, sig: &Signature) -> String {
    format!("{}{}\n", sig, print_proof(p))
}

/// Parse a proof file.
pub fn parse_file(text: &str) -> Result<(Signature, NdProof)> {
    let start = text
        .lines()
        .scan(0, |offset, line| {
            let here = *offset;
            *offset += line.len() + 1;
            Some((here, line))
        })
        .find(|(_, l)| l.trim_start().starts_with('('))
        .map(|(o, l)| o + (l.len() - l.trim_start().len()))
        .ok_or_else(|| anyhow!("no proof found: expected a line starting with `(`"))?;
    let sig = Signature::parse(&text[..start]).map_err(|errs| {
        let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        anyhow!("in atom declarations: {}", msgs.join("; "))
    })?;
    let p = parse_proof(&text[start..], &sig)?;
    Ok((sig, p))
}

/// Parse a single proof.
pub fn parse_proof(text: &str, sig: &Signature) -> Result<NdProof> {
    let mut r = Reader { text, pos: 0, sig };
    let p = r.node()?;
    r.skip_ws();
    if r.pos != text.len() {
        bail!("unexpected text after the proof at byte {}", r.pos);
    }
    Ok(p)
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Reader<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let t = r.trim_start();
            self.pos += r.len() - t.len();
            if t.starts_with('#') {
                self.pos += t.find('\n').unwrap_or(t.len());
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            bail!("expected `{}` at byte {}", c, self.pos)
        }
    }

    fn token(&mut self) -> &'a str {
        self.skip_ws();
        let r = self.rest();
        let n = r
            .find(|c: char| c.is_whitespace() || c == '[' || c == '(' || c == ')')
            .unwrap_or(r.len());
        let t = &self.text[self.pos..self.pos + n];
        self.pos += n;
        t
    }

    fn node(&mut self) -> Result<NdProof> {
        self.expect('(')?;
        let at = self.pos;
        let rule = self.token().to_string();
        let mut args: Vec<u64> = Vec::new();
        loop {
            self.skip_ws();
            if self.rest().starts_with('[') {
                break;
            }
            let t = self.token();
            args.push(
                t.parse()
                    .with_context(|| format!("rule `{}`: expected a number or `[`, got `{}`", rule, t))?,
            );
        }
        let rule = parse_rule(&rule, &args).with_context(|| format!("at byte {}", at))?;
        self.expect('[')?;
        let close = self
            .rest()
            .find(']')
            .ok_or_else(|| anyhow!("unclosed `[` at byte {}", self.pos))?;
        let inside = &self.text[self.pos..self.pos + close];
        self.pos += close + 1;
        let (t, f) = inside
            .split_once(':')
            .ok_or_else(|| anyhow!("expected `[term : formula]`, got `[{}]`", inside))?;
        let term = StringTerm::parse(t).with_context(|| format!("in term `{}`", t.trim()))?;
        let formula = Formula::parse(f.trim(), self.sig).with_context(|| format!("in formula `{}`", f.trim()))?;
        let mut premisses = Vec::new();
        loop {
            self.skip_ws();
            if self.rest().starts_with(')') {
                self.pos += 1;
                break;
            }
            if self.rest().is_empty() {
                bail!("unclosed `(`");
            }
            premisses.push(self.node()?);
        }
        Ok(NdProof {
            rule,
            term,
            formula,
            premisses,
        })
    }
}

fn parse_mode(s: &str) -> Result<Mode> {
    match s {
        ">" => Ok(Mode::First),
        "<" => Ok(Mode::Last),
        n => n
            .parse()
            .ok()
            .and_then(Mode::at)
            .ok_or_else(|| anyhow!("invalid mode `{}`", n)),
    }
}

fn parse_connective(s: &str) -> Result<Connective> {
    let mut chars = s.chars();
    let head = chars.next().ok_or_else(|| anyhow!("missing operator"))?;
    let mode = chars.as_str();
    let c = match head {
        '\\' => Connective::Under,
        '/' => Connective::Over,
        '*' | '•' => Connective::Prod,
        '^' | '↑' => Connective::Up(parse_mode(mode)?),
        '!' | '↓' => Connective::Down(parse_mode(mode)?),
        'o' | '⊙' => Connective::Wrap(parse_mode(mode)?),
        _ => bail!("unknown operator `{}`", s),
    };
    if matches!(c, Connective::Under | Connective::Over | Connective::Prod) && !mode.is_empty() {
        bail!("unknown operator `{}`", s);
    }
    Ok(c)
}

fn label(n: u64) -> Result<Label> {
    Label::try_from(n).map_err(|_| anyhow!("label {} too large", n))
}

fn parse_rule(token: &str, args: &[u64]) -> Result<NdRule> {
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(anyhow!("rule `{}` takes {} number(s), got {}", token, n, args.len()))
        }
    };
    match token {
        "lex" => {
            arity(1)?;
            return Ok(NdRule::Lexical(args[0] as usize));
        }
        "hyp" => {
            arity(1)?;
            return Ok(NdRule::Hypothesis(label(args[0])?));
        }
        _ => {}
    }
    let (op, kind) = token
        .char_indices()
        .last()
        .map(|(i, k)| (&token[..i], k))
        .ok_or_else(|| anyhow!("empty rule"))?;
    let c = parse_connective(op).with_context(|| format!("in rule `{}`", token))?;
    let discharging = match kind {
        'E' => matches!(c, Connective::Prod | Connective::Wrap(_)),
        'I' => !matches!(c, Connective::Prod | Connective::Wrap(_)),
        _ => bail!("rule `{}` must end in E or I", token),
    };
    Ok(match (kind, discharging) {
        ('E', false) => {
            arity(0)?;
            NdRule::Elim(c)
        }
        ('E', true) => {
            arity(2)?;
            NdRule::ElimDischarge(c, label(args[0])?, label(args[1])?)
        }
        (_, false) => {
            arity(0)?;
            NdRule::Intro(c)
        }
        (_, true) => {
            arity(1)?;
            NdRule::IntroDischarge(c, label(args[0])?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dcalc_core::nd::check_nd;

    const EXAMPLE: &str = "\
np 0
s 0
# mary rang everyone up
(!>E [mary+rang+everyone+up : s]
  (^>I 0 [mary+rang+1+up : s^>np]
    (\\E [mary+rang+p0+up : s]
      (lex 0 [mary : np])
      (^>E [rang+p0+up : np\\s]
        (lex 1 [rang+1+up : (np\\s)^>np])
        (hyp 0 [p0 : np]))))
  (lex 2 [everyone : (s^>np)!>s]))
";

    #[test]
    fn parse_and_print() {
        let (sig, p) = parse_file(EXAMPLE).unwrap();
        let seq = check_nd(&p).unwrap();
        assert_eq!(seq.term.to_string(), "mary+rang+everyone+up");
        let printed = print_file(&p, &sig);
        let (_, q) = parse_file(&printed).unwrap();
        assert_eq!(p, q);
        assert_eq!(print_file(&q, &sig), printed);
    }

    #[test]
    fn rule_tokens_round_trip() {
        for (t, args) in [
            ("\\E", &[][..]),
            ("/I", &[3][..]),
            ("o2E", &[0, 1][..]),
            ("*I", &[][..]),
            ("!<I", &[4][..]),
        ] {
            let r = parse_rule(t, args).unwrap();
            let printed = rule_token(&r);
            let mut parts = printed.split(' ');
            let head = parts.next().unwrap();
            let nums: Vec<u64> = parts.map(|n| n.parse().unwrap()).collect();
            assert_eq!(parse_rule(head, &nums).unwrap(), r);
        }
        assert_eq!(parse_rule("↑>E", &[]).unwrap(), parse_rule("^>E", &[]).unwrap());
        assert!(parse_rule("\\I", &[]).is_err());
        assert!(parse_rule("%E", &[]).is_err());
        assert!(parse_rule("*>E", &[0, 1]).is_err());
    }

    #[test]
    fn syntax_errors() {
        assert!(parse_file("np 0\n").is_err());
        assert!(parse_file("np 0\n(lex 0 [x : np]").is_err());
        assert!(parse_file("np 0\n(lex 0 [x np])").is_err());
        assert!(parse_file("np 0\n(lex 0 [x : np]) extra").is_err());
    }
}
