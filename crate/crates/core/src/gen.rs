//! Random well-sorted formulas and natural-deduction proofs.
//!
//! Proofs are grown top-down from a goal formula. Hypotheses opened by
//! introduction rules are handed down with a hint of where their string has
//! to end up (prefix, suffix, anywhere, or wrapping the rest), and are
//! routed to premisses accordingly. Routing is a heuristic: every candidate
//! is checked with [`check_nd`](crate::nd::check_nd) and rejected on failure.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Connective, Formula, Signature};
use crate::nd::{check_nd, strings, Label, NdProof, NdRule};
use crate::terms::{Mode, StringTerm, Symbol};

pub mod sequents;

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub atoms: Vec<Formula>,
    /// Only `/`, `\` and `•`.
    pub lambek: bool,
    pub max_depth: u32,
    /// Connectives in auxiliary formulas picked by elimination rules.
    pub aux_connectives: u32,
}

impl GenConfig {
    /// Atoms `np`, `n`, `s` of sort 0 and `inf` of sort 1.
    pub fn standard(max_depth: u32) -> GenConfig {
        GenConfig {
            atoms: standard_signature()
                .iter()
                .map(|(a, s)| Formula::atom(a.clone(), s))
                .collect(),
            lambek: false,
            max_depth,
            aux_connectives: 1,
        }
    }
}

pub fn standard_signature() -> Signature {
    Signature::parse("np 0\nn 0\ns 0\ninf 1\n").expect("valid signature")
}

fn random_mode<R: Rng>(rng: &mut R) -> Mode {
    match rng.gen_range(0..4) {
        0 => Mode::First,
        1 => Mode::Last,
        _ => Mode::at(rng.gen_range(1..=2)).expect("nonzero"),
    }
}

fn random_connective<R: Rng>(rng: &mut R, lambek: bool) -> Connective {
    let n = if lambek { 3 } else { 6 };
    match rng.gen_range(0..n) {
        0 => Connective::Under,
        1 => Connective::Over,
        2 => Connective::Prod,
        3 => Connective::Up(random_mode(rng)),
        4 => Connective::Down(random_mode(rng)),
        _ => Connective::Wrap(random_mode(rng)),
    }
}

/// A formula with exactly `connectives` connectives, not necessarily well
/// sorted.
pub fn random_shape<R: Rng>(rng: &mut R, atoms: &[Formula], connectives: u32, lambek: bool) -> Formula {
    if connectives == 0 {
        return atoms.choose(rng).expect("atoms").clone();
    }
    let left = rng.gen_range(0..connectives);
    let l = random_shape(rng, atoms, left, lambek);
    let r = random_shape(rng, atoms, connectives - 1 - left, lambek);
    Formula::binary(random_connective(rng, lambek), l, r)
}

/// A well-sorted formula with up to `max_connectives` connectives.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[Formula], max_connectives: u32, lambek: bool) -> Formula {
    loop {
        let n = rng.gen_range(0..=max_connectives);
        let f = random_shape(rng, atoms, n, lambek);
        if f.is_well_sorted() {
            return f;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    Left,
    Right,
    Any,
    Wraps(Mode),
}

#[derive(Debug, Clone)]
struct Pending {
    formula: Formula,
    place: Place,
    kind: PendingKind,
}

#[derive(Debug, Clone)]
enum PendingKind {
    Hyp(Label, StringTerm),
    /// The two hypotheses of a `•E`/`⊙ₖE`, to be recombined by `•I`/`⊙ₖI`.
    Pair(Connective, Box<Pending>, Box<Pending>),
}

struct Gen<'a, R> {
    rng: &'a mut R,
    cfg: &'a GenConfig,
    words: u32,
    labels: Label,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh_term(&mut self, prefix: &str, sort: u32) -> StringTerm {
        let words: Vec<Symbol> = (0..=sort)
            .map(|_| {
                self.words += 1;
                Symbol::from(alloc::format!("{}{}", prefix, self.words - 1))
            })
            .collect();
        strings::hypothesis(&words)
    }

    fn aux(&mut self) -> Formula {
        random_formula(self.rng, &self.cfg.atoms, self.cfg.aux_connectives, self.cfg.lambek)
    }

    fn lexical(&mut self, goal: &Formula) -> NdProof {
        let term = self.fresh_term("w", goal.sort().get());
        // Indices are assigned once the proof is complete.
        NdProof::leaf(NdRule::Lexical(usize::MAX), term, goal.clone())
    }

    fn use_pending(&mut self, p: Pending) -> NdProof {
        match p.kind {
            PendingKind::Hyp(l, term) => NdProof::leaf(NdRule::Hypothesis(l), term, p.formula),
            PendingKind::Pair(conn, a, b) => {
                let a = self.use_pending(*a);
                let b = self.use_pending(*b);
                let term = strings::intro_tensor(conn, &a.term, &b.term).expect("sorts checked");
                NdProof {
                    rule: NdRule::Intro(conn),
                    term,
                    formula: p.formula,
                    premisses: alloc::vec![a, b],
                }
            }
        }
    }

    fn new_hyp(&mut self, formula: &Formula, place: Place) -> (Label, StringTerm, Pending) {
        let label = self.labels;
        self.labels += 1;
        let term = self.fresh_term("p", formula.sort().get());
        let pending = Pending {
            formula: formula.clone(),
            place,
            kind: PendingKind::Hyp(label, term.clone()),
        };
        (label, term, pending)
    }

    /// Route pending hypotheses to the two premisses of a binary rule.
    fn route(&mut self, pending: Vec<Pending>, wrap: bool) -> Option<(Vec<Pending>, Vec<Pending>)> {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for p in pending {
            let left = match (p.place, wrap) {
                (Place::Any, _) => self.rng.gen_bool(0.5),
                (Place::Left, false) => true,
                (Place::Right, false) => false,
                (Place::Wraps(_), false) => return None,
                (_, true) => true,
            };
            if left {
                l.push(p)
            } else {
                r.push(p)
            }
        }
        Some((l, r))
    }

    fn gen(&mut self, goal: &Formula, depth: u32, mut pending: Vec<Pending>) -> Option<NdProof> {
        // Leaves.
        if pending.len() == 1 && pending[0].formula == *goal && (depth == 0 || self.rng.gen_bool(0.6)) {
            return Some(self.use_pending(pending.pop().unwrap()));
        }
        if pending.is_empty() && (depth == 0 || self.rng.gen_bool(0.15)) {
            return Some(self.lexical(goal));
        }
        if depth == 0 {
            return None;
        }
        let d = depth - 1;
        // A pending hypothesis to consume as an argument, if any.
        let target = (!pending.is_empty()).then(|| self.rng.gen_range(0..pending.len()));
        let choice = self.rng.gen_range(0..10);
        match (goal.as_binary(), choice) {
            (Some((conn, a, b)), 0..=4) => {
                let (a, b) = (a.clone(), b.clone());
                match conn {
                    Connective::Under | Connective::Over | Connective::Up(_) | Connective::Down(_) => {
                        let (hf, body, place) = match conn {
                            Connective::Under => (a, b, Place::Left),
                            Connective::Over => (b, a, Place::Right),
                            Connective::Up(_) => (b, a, Place::Any),
                            Connective::Down(k) => (a, b, Place::Wraps(k)),
                            _ => unreachable!(),
                        };
                        let (label, hterm, p) = self.new_hyp(&hf, place);
                        pending.push(p);
                        let body = self.gen(&body, d, pending)?;
                        let term = strings::intro_discharge(conn, &body.term, &hterm)?;
                        Some(NdProof {
                            rule: NdRule::IntroDischarge(conn, label),
                            term,
                            formula: goal.clone(),
                            premisses: alloc::vec![body],
                        })
                    }
                    Connective::Prod | Connective::Wrap(_) => {
                        let (pl, pr) = self.route(pending, matches!(conn, Connective::Wrap(_)))?;
                        let l = self.gen(&a, d, pl)?;
                        let r = self.gen(&b, d, pr)?;
                        let term = strings::intro_tensor(conn, &l.term, &r.term).ok()?;
                        Some(NdProof {
                            rule: NdRule::Intro(conn),
                            term,
                            formula: goal.clone(),
                            premisses: alloc::vec![l, r],
                        })
                    }
                }
            }
            (_, 8..=9) => {
                // •E / ⊙ₖE through a pair of hypotheses recombined below.
                let a = self.aux();
                let b = self.aux();
                let conn = if self.cfg.lambek || self.rng.gen_bool(0.5) {
                    Connective::Prod
                } else {
                    Connective::Wrap(random_mode(self.rng))
                };
                let pair = Formula::binary(conn, a.clone(), b.clone());
                if !pair.is_well_sorted() {
                    return None;
                }
                let (la, ta, pa) = self.new_hyp(&a, Place::Any);
                let (lb, tb, pb) = self.new_hyp(&b, Place::Any);
                let mut minor_pending = Vec::new();
                let mut major_pending = Vec::new();
                for p in pending {
                    if self.rng.gen_bool(0.3) && p.place == Place::Any {
                        major_pending.push(p);
                    } else {
                        minor_pending.push(p);
                    }
                }
                minor_pending.push(Pending {
                    formula: pair.clone(),
                    place: Place::Any,
                    kind: PendingKind::Pair(conn, Box::new(pa), Box::new(pb)),
                });
                let major = self.gen(&pair, d, major_pending)?;
                let minor = self.gen(goal, d, minor_pending)?;
                let term = strings::elim_discharge(conn, &major.term, &minor.term, &ta, &tb)?;
                Some(NdProof {
                    rule: NdRule::ElimDischarge(conn, la, lb),
                    term,
                    formula: goal.clone(),
                    premisses: alloc::vec![major, minor],
                })
            }
            _ => {
                // Elimination with an auxiliary formula, preferably one that
                // consumes a pending hypothesis as the argument.
                let chosen = match target {
                    Some(i) if self.rng.gen_bool(0.7) => Some(i),
                    _ => None,
                };
                let x = match chosen {
                    Some(i) => pending[i].formula.clone(),
                    None => self.aux(),
                };
                let n = if self.cfg.lambek { 2 } else { 4 };
                let pick = match chosen.map(|i| pending[i].place) {
                    Some(Place::Left) => 0,
                    Some(Place::Right) => 1,
                    Some(Place::Wraps(_)) => 3,
                    _ => self.rng.gen_range(0..n),
                };
                let (conn, functor, functor_right) = match pick {
                    0 => (Connective::Under, Formula::under(x.clone(), goal.clone()), true),
                    1 => (Connective::Over, Formula::over(goal.clone(), x.clone()), false),
                    2 => {
                        let k = random_mode(self.rng);
                        (Connective::Up(k), Formula::up(goal.clone(), k, x.clone()), false)
                    }
                    _ => {
                        let k = match chosen.map(|i| pending[i].place) {
                            Some(Place::Wraps(k)) => k,
                            _ => random_mode(self.rng),
                        };
                        (Connective::Down(k), Formula::down(x.clone(), k, goal.clone()), true)
                    }
                };
                if !functor.is_well_sorted() {
                    return None;
                }
                let wrap = matches!(conn, Connective::Up(_) | Connective::Down(_));
                // The chosen hypothesis goes to the argument, the rest is
                // routed by placement.
                let arg = chosen.map(|i| pending.swap_remove(i));
                let (mut pl, mut pr) = self.route(pending, wrap)?;
                if let Some(a) = arg {
                    if functor_right {
                        pl.push(a)
                    } else {
                        pr.push(a)
                    }
                }
                let (first, second) = if functor_right { (&x, &functor) } else { (&functor, &x) };
                let l = self.gen(first, d, pl)?;
                let r = self.gen(second, d, pr)?;
                let term = strings::elim(conn, &l.term, &r.term).ok()?;
                Some(NdProof {
                    rule: NdRule::Elim(conn),
                    term,
                    formula: goal.clone(),
                    premisses: alloc::vec![l, r],
                })
            }
        }
    }
}

fn number_lexical(p: &mut NdProof, next: &mut usize) {
    if let NdRule::Lexical(_) = p.rule {
        p.rule = NdRule::Lexical(*next);
        *next += 1;
    }
    for q in &mut p.premisses {
        number_lexical(q, next);
    }
}

/// One attempt at a proof of `goal`; `None` when the attempt fails.
pub fn try_proof<R: Rng>(rng: &mut R, cfg: &GenConfig, goal: &Formula) -> Option<NdProof> {
    let mut g = Gen {
        rng,
        cfg,
        words: 0,
        labels: 0,
    };
    let depth = g.rng.gen_range(1..=cfg.max_depth);
    let mut p = g.gen(goal, depth, Vec::new())?;
    if p.depth() > cfg.max_depth as usize + 1 {
        return None;
    }
    number_lexical(&mut p, &mut 0);
    check_nd(&p).ok()?;
    Some(p)
}

/// A checked proof of a random goal, retrying until one is found. Proofs
/// that are a single leaf are skipped unless `allow_axiom`.
pub fn random_proof<R: Rng>(rng: &mut R, cfg: &GenConfig, allow_axiom: bool) -> NdProof {
    loop {
        let goal = random_formula(rng, &cfg.atoms, 2, cfg.lambek);
        if let Some(p) = try_proof(rng, cfg, &goal) {
            if allow_axiom || !p.premisses.is_empty() {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::SmallRng;
    use rand::SeedableRng;

    #[test]
    fn formulas_are_well_sorted() {
        let mut rng = SmallRng::seed_from_u64(1);
        let cfg = GenConfig::standard(4);
        for _ in 0..500 {
            let f = random_formula(&mut rng, &cfg.atoms, 5, false);
            assert!(f.is_well_sorted());
        }
    }

    #[test]
    fn proofs_check() {
        let mut rng = SmallRng::seed_from_u64(2);
        let cfg = GenConfig::standard(6);
        let mut par = 0;
        for _ in 0..200 {
            let p = random_proof(&mut rng, &cfg, false);
            assert!(check_nd(&p).is_ok());
            assert!(p.depth() <= 7);
            par += p.par_rules();
        }
        assert!(par > 0);
    }
}
