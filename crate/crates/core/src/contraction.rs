//! Contraction of abstract proof structures.
//!
//! Structural contractions:
//!
//! * `[+]` splices a comb into the comb consuming its conclusion;
//! * `[×ₖ]` applies a wrap link once both its premisses are combs and the
//!   separator designated by `k` is a literal premiss of the left comb. The
//!   separators of an auxiliary input are off limits, except the gap a `↓ₖ`
//!   or `⊙ₖ` par link expects to be filled.
//!
//! Logical contractions, one per par link, all act on one comb `X`:
//!
//! * `[\]` / `[/]`: the tether block of the withdrawn input is a prefix /
//!   suffix of the comb concluding the premiss; the rest goes to the main
//!   point;
//! * `[↑ₖ]`: the tether block is an infix, replaced by a separator, with the
//!   prefix of the right sort for `k`;
//! * `[↓ₖ]`: the tether block is split around the rest of the comb at the
//!   separator designated by `k`;
//! * `[•]`: the two tether blocks are adjacent in some comb and are replaced
//!   by the par link's premiss;
//! * `[⊙ₖ]`: the first block is split around the second, which sits at the
//!   separator designated by `k`; the span is replaced by the premiss.
//!
//! Blocks other than tether blocks may be empty. Each step removes at least
//! one element, so a run takes at most as many steps as there are elements.
//! A structure is a proof net when a single comb remains.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::aps::{Aps, ApsError, Comb, ElemId, Element, ElementOrigin, ParLink, PointKind, Premiss, WrapLink};
use crate::formula::Connective;
use crate::proof_structure::{ProofStructure, Side};
use crate::terms::{Mode, StringTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Plus,
    Wrap(Mode),
    Under,
    Over,
    Prod,
    Up(Mode),
    Down(Mode),
    Circ(Mode),
}

impl Rule {
    pub fn is_logical(self) -> bool {
        !matches!(self, Rule::Plus | Rule::Wrap(_))
    }

    fn of_par(p: &ParLink) -> Rule {
        match p.tag.connective {
            Connective::Under => Rule::Under,
            Connective::Over => Rule::Over,
            Connective::Prod => Rule::Prod,
            Connective::Up(k) => Rule::Up(k),
            Connective::Down(k) => Rule::Down(k),
            Connective::Wrap(k) => Rule::Circ(k),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Plus => f.write_str("[+]"),
            Rule::Wrap(k) => write!(f, "[×{}]", k),
            Rule::Under => f.write_str("[\\]"),
            Rule::Over => f.write_str("[/]"),
            Rule::Prod => f.write_str("[•]"),
            Rule::Up(k) => write!(f, "[↑{}]", k),
            Rule::Down(k) => write!(f, "[↓{}]", k),
            Rule::Circ(k) => write!(f, "[⊙{}]", k),
        }
    }
}

/// A contraction site: the upper comb for `[+]`, the wrap link for `[×ₖ]`,
/// the par link for logical rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Redex {
    pub rule: Rule,
    pub target: ElemId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    /// Elements removed, in the order: target, then the combs it absorbed.
    pub consumed: Vec<ElemId>,
    /// The comb produced. It reuses the id of the wrap or par link, or of
    /// the lower comb for `[+]`.
    pub result: ElemId,
    pub premisses: Vec<Premiss>,
    /// Elements examined by the search that found this redex.
    pub scanned: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<Step>,
    /// Elements present before the first step.
    pub initial_elements: usize,
}

impl Trace {
    pub fn logical_steps(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| s.rule.is_logical())
    }

    /// `[+] [×>] ...` on one line.
    pub fn rules(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&alloc::format!("{}", s.rule));
        }
        out
    }
}

/// Why a par or wrap link cannot be contracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StuckReason {
    /// The premiss of the par link is not produced by a comb.
    TopNotComb,
    /// Tether points of one input are not consecutive, separator-interleaved
    /// premisses of a single comb.
    TethersScattered,
    /// The tethers are in a comb other than the one concluding the premiss.
    WrongComb,
    NotPrefix,
    NotSuffix,
    /// `[↑ₖ]`: the prefix before the infix has the wrong sort.
    SortCondition {
        prefix: u32,
        expected: u32,
    },
    /// `[↓ₖ]`: the tether blocks do not surround the rest of the comb at
    /// the required separator.
    NotCircumfix,
    /// `[•]`/`[⊙ₖ]`: the blocks are not adjacent/nested as required.
    NotAdjacent,
    /// The result would have its own conclusion among its premisses.
    Cycle,
    /// A wrap premiss is not produced by a comb.
    WrapPremissNotComb,
    /// The designated separator lies inside a point rather than being a
    /// literal premiss, or does not exist.
    SeparatorNotExposed,
    /// `[+]`: the conclusion is not consumed by a comb.
    NotPlugged,
    /// The designated separator belongs to an auxiliary input whose par
    /// link needs it intact.
    TetherSeparator,
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StuckReason::TopNotComb => f.write_str("premiss is not the conclusion of a comb"),
            StuckReason::TethersScattered => f.write_str("auxiliary input is not a contiguous block of one comb"),
            StuckReason::WrongComb => f.write_str("auxiliary input is not in the comb above the par link"),
            StuckReason::NotPrefix => f.write_str("auxiliary input is not a prefix"),
            StuckReason::NotSuffix => f.write_str("auxiliary input is not a suffix"),
            StuckReason::SortCondition { prefix, expected } => write!(
                f,
                "infix preceded by material of sort {}, mode needs {}",
                prefix, expected
            ),
            StuckReason::NotCircumfix => f.write_str("auxiliary input is not a circumfix"),
            StuckReason::NotAdjacent => f.write_str("auxiliary inputs are not adjacent"),
            StuckReason::Cycle => f.write_str("contraction would create a cycle"),
            StuckReason::WrapPremissNotComb => f.write_str("wrap premiss is not a comb"),
            StuckReason::SeparatorNotExposed => f.write_str("designated separator not exposed"),
            StuckReason::NotPlugged => f.write_str("conclusion does not feed a comb"),
            StuckReason::TetherSeparator => f.write_str("designated separator is inside an auxiliary input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub element: ElemId,
    pub origin: ElementOrigin,
    pub rule: Rule,
    pub reason: StuckReason,
}

/// The outcome of matching a redex: what to remove and what to insert.
struct Rewrite {
    rule: Rule,
    consumed: Vec<ElemId>,
    result: ElemId,
    comb: Comb,
}

fn comb_at(aps: &Aps, id: Option<ElemId>) -> Option<(ElemId, &Comb)> {
    let id = id?;
    aps.comb(id).map(|c| (id, c))
}

fn no_cycle(comb: Comb) -> Result<Comb, StuckReason> {
    if comb.premisses.contains(&Premiss::Point(comb.conclusion)) {
        Err(StuckReason::Cycle)
    } else {
        Ok(comb)
    }
}

fn match_plus(aps: &Aps, upper: ElemId) -> Result<Rewrite, StuckReason> {
    let u = aps.comb(upper).expect("[+] target is a comb");
    let (lower, l) = comb_at(aps, aps.consumer(u.conclusion)).ok_or(StuckReason::NotPlugged)?;
    if lower == upper {
        return Err(StuckReason::Cycle);
    }
    let at = l
        .premisses
        .iter()
        .position(|p| *p == Premiss::Point(u.conclusion))
        .expect("consumer lists the point");
    let mut premisses = Vec::with_capacity(l.premisses.len() + u.premisses.len() - 1);
    premisses.extend_from_slice(&l.premisses[..at]);
    premisses.extend_from_slice(&u.premisses);
    premisses.extend_from_slice(&l.premisses[at + 1..]);
    let comb = no_cycle(Comb {
        premisses,
        conclusion: l.conclusion,
    })?;
    Ok(Rewrite {
        rule: Rule::Plus,
        consumed: alloc::vec![upper, lower],
        result: lower,
        comb,
    })
}

/// Index of the literal separator that mode `k` designates in `premisses`.
fn exposed_separator(aps: &Aps, premisses: &[Premiss], k: Mode) -> Option<usize> {
    let total = aps.sort_of(premisses);
    let j = k.position(total)?;
    let mut acc = 0;
    for (i, p) in premisses.iter().enumerate() {
        if acc == j - 1 && *p == Premiss::Sep {
            return Some(i);
        }
        acc += aps.premiss_sort(p);
        if acc > j - 1 {
            return None;
        }
    }
    None
}

/// A separator between two consecutive tether points of one auxiliary input
/// may only be filled where the owning par link expects material: the gap
/// of a `↓ₖ` input, or of the first input of `⊙ₖ`. Filling any other one
/// breaks the block its par link has to find, unless the filler is a lone
/// separator.
fn may_fill(aps: &Aps, premisses: &[Premiss], at: usize, filler: &[Premiss]) -> bool {
    if matches!(filler, [Premiss::Sep]) {
        return true;
    }
    let tether = |i: usize| match premisses.get(i) {
        Some(Premiss::Point(p)) => match aps.point(*p).kind {
            PointKind::Tether { par, group, pos } => Some((par, group, pos)),
            PointKind::Vertex(_) => None,
        },
        _ => None,
    };
    let (Some((par, group, pos)), Some(right)) = (at.checked_sub(1).and_then(tether), tether(at + 1)) else {
        return true;
    };
    if right != (par, group, pos + 1) {
        return true;
    }
    let Some(Element::Par(p)) = aps.element(par) else {
        return true;
    };
    let sort = p.groups[group as usize].len() as u32 - 1;
    match (p.tag.connective, group) {
        (Connective::Down(k), 0) | (Connective::Wrap(k), 0) => k.position(sort) == Some(pos + 1),
        _ => false,
    }
}

fn match_wrap(aps: &Aps, id: ElemId, w: &WrapLink) -> Result<Rewrite, StuckReason> {
    let (xid, x) = comb_at(aps, aps.producer(w.left)).ok_or(StuckReason::WrapPremissNotComb)?;
    let (yid, y) = comb_at(aps, aps.producer(w.right)).ok_or(StuckReason::WrapPremissNotComb)?;
    let at = exposed_separator(aps, &x.premisses, w.mode).ok_or(StuckReason::SeparatorNotExposed)?;
    if !may_fill(aps, &x.premisses, at, &y.premisses) {
        return Err(StuckReason::TetherSeparator);
    }
    let mut premisses = Vec::with_capacity(x.premisses.len() + y.premisses.len() - 1);
    premisses.extend_from_slice(&x.premisses[..at]);
    premisses.extend_from_slice(&y.premisses);
    premisses.extend_from_slice(&x.premisses[at + 1..]);
    let comb = no_cycle(Comb {
        premisses,
        conclusion: w.conclusion,
    })?;
    Ok(Rewrite {
        rule: Rule::Wrap(w.mode),
        consumed: alloc::vec![id, xid, yid],
        result: id,
        comb,
    })
}

/// Where a tether group sits in its comb: `(comb, start, end)`.
fn tether_block(aps: &Aps, group: &[crate::aps::PointId]) -> Result<(ElemId, usize, usize), StuckReason> {
    let (cid, c) = comb_at(aps, aps.consumer(group[0])).ok_or(StuckReason::TethersScattered)?;
    let start = c
        .premisses
        .iter()
        .position(|p| *p == Premiss::Point(group[0]))
        .expect("consumer lists the point");
    let end = start + 2 * group.len() - 1;
    if end > c.premisses.len() {
        return Err(StuckReason::TethersScattered);
    }
    for (i, p) in c.premisses[start..end].iter().enumerate() {
        let ok = if i % 2 == 0 {
            *p == Premiss::Point(group[i / 2])
        } else {
            *p == Premiss::Sep
        };
        if !ok {
            return Err(StuckReason::TethersScattered);
        }
    }
    Ok((cid, start, end))
}

fn match_par(aps: &Aps, id: ElemId, p: &ParLink) -> Result<Rewrite, StuckReason> {
    let rule = Rule::of_par(p);
    match p.tag.side {
        Side::R => {
            let (xid, x) = comb_at(aps, aps.producer(p.top)).ok_or(StuckReason::TopNotComb)?;
            let (start, end) = if matches!(p.tag.connective, Connective::Down(_)) {
                // A circumfix splits the block; checked below.
                if aps.consumer(p.groups[0][0]) != Some(xid) {
                    return Err(StuckReason::WrongComb);
                }
                (0, 0)
            } else {
                let (cid, start, end) = tether_block(aps, &p.groups[0])?;
                if cid != xid {
                    return Err(StuckReason::WrongComb);
                }
                (start, end)
            };
            let prem = &x.premisses;
            let premisses: Vec<Premiss> = match p.tag.connective {
                Connective::Under => {
                    if start != 0 {
                        return Err(StuckReason::NotPrefix);
                    }
                    prem[end..].to_vec()
                }
                Connective::Over => {
                    if end != prem.len() {
                        return Err(StuckReason::NotSuffix);
                    }
                    prem[..start].to_vec()
                }
                Connective::Up(k) => {
                    let before = aps.sort_of(&prem[..start]);
                    let total = before + 1 + aps.sort_of(&prem[end..]);
                    let j = k.position(total).expect("total sort is at least 1");
                    if before != j - 1 {
                        return Err(StuckReason::SortCondition {
                            prefix: before,
                            expected: j - 1,
                        });
                    }
                    let mut v = prem[..start].to_vec();
                    v.push(Premiss::Sep);
                    v.extend_from_slice(&prem[end..]);
                    v
                }
                Connective::Down(k) => {
                    // Tethers t0 1 ... 1 ta; the j-th separator is the gap.
                    let g = &p.groups[0];
                    let a = g.len() as u32 - 1;
                    let j = k.position(a).expect("well-sorted ↓ input") as usize;
                    let pre = 2 * j - 1;
                    let suf = 2 * (g.len() - j) - 1;
                    if prem.len() < pre + suf {
                        return Err(StuckReason::NotCircumfix);
                    }
                    let tail = &prem[prem.len() - suf..];
                    let tail_ok = tail.iter().enumerate().all(|(i, q)| {
                        if i % 2 == 0 {
                            *q == Premiss::Point(g[j + i / 2])
                        } else {
                            *q == Premiss::Sep
                        }
                    });
                    let head_ok = prem[..pre].iter().enumerate().all(|(i, q)| {
                        if i % 2 == 0 {
                            *q == Premiss::Point(g[i / 2])
                        } else {
                            *q == Premiss::Sep
                        }
                    });
                    if !(head_ok && tail_ok) {
                        return Err(StuckReason::NotCircumfix);
                    }
                    prem[pre..prem.len() - suf].to_vec()
                }
                _ => unreachable!("R-par connective"),
            };
            let comb = no_cycle(Comb {
                premisses,
                conclusion: p.main,
            })?;
            Ok(Rewrite {
                rule,
                consumed: alloc::vec![id, xid],
                result: id,
                comb,
            })
        }
        Side::L => {
            let (span_start, span_end, xid) = match p.tag.connective {
                Connective::Prod => {
                    let (ca, sa, ea) = tether_block(aps, &p.groups[0])?;
                    let (cb, sb, eb) = tether_block(aps, &p.groups[1])?;
                    if ca != cb || ea != sb {
                        return Err(StuckReason::NotAdjacent);
                    }
                    (sa, eb, ca)
                }
                Connective::Wrap(k) => {
                    let ga = &p.groups[0];
                    let (cb, sb, eb) = tether_block(aps, &p.groups[1])?;
                    let a = ga.len() as u32 - 1;
                    let j = k.position(a).expect("well-sorted ⊙ input") as usize;
                    let pre = 2 * j - 1;
                    let suf = 2 * (ga.len() - j) - 1;
                    let x = aps.comb(cb).expect("tether_block returns a comb");
                    let prem = &x.premisses;
                    if sb < pre || eb + suf > prem.len() {
                        return Err(StuckReason::NotAdjacent);
                    }
                    let head = &prem[sb - pre..sb];
                    let tail = &prem[eb..eb + suf];
                    let head_ok = head.iter().enumerate().all(|(i, q)| {
                        if i % 2 == 0 {
                            *q == Premiss::Point(ga[i / 2])
                        } else {
                            *q == Premiss::Sep
                        }
                    });
                    let tail_ok = tail.iter().enumerate().all(|(i, q)| {
                        if i % 2 == 0 {
                            *q == Premiss::Point(ga[j + i / 2])
                        } else {
                            *q == Premiss::Sep
                        }
                    });
                    if !(head_ok && tail_ok) {
                        return Err(StuckReason::NotAdjacent);
                    }
                    (sb - pre, eb + suf, cb)
                }
                _ => unreachable!("L-par connective"),
            };
            let x = aps.comb(xid).expect("comb");
            let mut premisses = Vec::with_capacity(x.premisses.len());
            premisses.extend_from_slice(&x.premisses[..span_start]);
            premisses.push(Premiss::Point(p.top));
            premisses.extend_from_slice(&x.premisses[span_end..]);
            let comb = no_cycle(Comb {
                premisses,
                conclusion: x.conclusion,
            })?;
            Ok(Rewrite {
                rule,
                consumed: alloc::vec![id, xid],
                result: id,
                comb,
            })
        }
    }
}

/// Structural or logical match rooted at `id`, if `id` can be a target.
fn match_at(aps: &Aps, id: ElemId) -> Option<Result<Rewrite, StuckReason>> {
    match aps.element(id)? {
        Element::Comb(_) => Some(match_plus(aps, id)),
        Element::Wrap(w) => Some(match_wrap(aps, id, w)),
        Element::Par(p) => Some(match_par(aps, id, p)),
    }
}

fn rule_at(aps: &Aps, id: ElemId) -> Option<Rule> {
    match aps.element(id)? {
        Element::Comb(_) => Some(Rule::Plus),
        Element::Wrap(w) => Some(Rule::Wrap(w.mode)),
        Element::Par(p) => Some(Rule::of_par(p)),
    }
}

fn commit(aps: &mut Aps, rw: Rewrite, scanned: usize) -> Step {
    for &e in &rw.consumed {
        aps.remove(e);
    }
    let premisses = rw.comb.premisses.clone();
    aps.insert(rw.result, Element::Comb(rw.comb));
    Step {
        rule: rw.rule,
        consumed: rw.consumed,
        result: rw.result,
        premisses,
        scanned,
    }
}

/// Deterministic search: one pass in id order; the first structural redex
/// wins, otherwise the first logical one. Returns the redex and the number
/// of elements examined.
pub fn find_redex(aps: &Aps) -> (Option<Redex>, usize) {
    let mut logical = None;
    let mut scanned = 0;
    for i in 0..aps.capacity() {
        let id = ElemId(i as u32);
        let Some(e) = aps.element(id) else { continue };
        scanned += 1;
        match e {
            Element::Comb(_) | Element::Wrap(_) => {
                if let Some(Ok(rw)) = match_at(aps, id) {
                    return (
                        Some(Redex {
                            rule: rw.rule,
                            target: id,
                        }),
                        scanned,
                    );
                }
            }
            Element::Par(_) => {
                if logical.is_none() {
                    if let Some(Ok(rw)) = match_at(aps, id) {
                        logical = Some(Redex {
                            rule: rw.rule,
                            target: id,
                        });
                    }
                }
            }
        }
    }
    (logical, scanned)
}

/// Every currently applicable redex, in id order.
pub fn all_redexes(aps: &Aps) -> Vec<Redex> {
    aps.elements()
        .filter_map(|(id, _)| match match_at(aps, id) {
            Some(Ok(rw)) => Some(Redex {
                rule: rw.rule,
                target: id,
            }),
            _ => None,
        })
        .collect()
}

/// Apply the redex rooted at `target`, whatever rule it is.
pub fn apply_at(aps: &mut Aps, target: ElemId) -> Result<Step, StuckReason> {
    let rw = match match_at(aps, target) {
        Some(r) => r?,
        None => return Err(StuckReason::NotPlugged),
    };
    Ok(commit(aps, rw, 0))
}

pub fn apply(aps: &mut Aps, redex: Redex) -> Result<Step, StuckReason> {
    match rule_at(aps, redex.target) {
        Some(r) if r == redex.rule => apply_at(aps, redex.target),
        _ => Err(StuckReason::NotPlugged),
    }
}

/// Contract to normal form with the deterministic strategy.
pub fn contract(aps: &mut Aps) -> Trace {
    let mut trace = Trace {
        steps: Vec::new(),
        initial_elements: aps.len(),
    };
    loop {
        let (redex, scanned) = find_redex(aps);
        let Some(redex) = redex else { break };
        let rw = match_at(aps, redex.target)
            .expect("target exists")
            .expect("find_redex only returns matches");
        trace.steps.push(commit(aps, rw, scanned));
    }
    trace
}

/// Why each remaining par or wrap link (and each comb stuck on a cycle)
/// cannot contract.
pub fn diagnose(aps: &Aps) -> Vec<Diagnostic> {
    aps.elements()
        .filter_map(|(id, e)| {
            let rule = rule_at(aps, id)?;
            match (e, match_at(aps, id)?) {
                (Element::Comb(_), Err(StuckReason::NotPlugged)) => None,
                (_, Err(reason)) => Some(Diagnostic {
                    element: id,
                    origin: aps.origin(id),
                    rule,
                    reason,
                }),
                (_, Ok(_)) => None,
            }
        })
        .collect()
}

/// What the final comb has to be for a structure to be accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acceptance {
    /// Any comb.
    Net,
    /// The comb's words and separators spell this term.
    String(StringTerm),
    /// The comb's leaf words are exactly these `(input, position)` pairs,
    /// in this order.
    Leaves(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Net {
        trace: Trace,
        comb: Comb,
    },
    /// Contraction got stuck before reaching a comb.
    Stuck {
        trace: Trace,
        diagnostics: Vec<Diagnostic>,
    },
    /// A comb was reached but it spells something else.
    WrongString {
        trace: Trace,
        comb: Comb,
    },
}

impl Verdict {
    pub fn is_net(&self) -> bool {
        matches!(self, Verdict::Net { .. })
    }

    pub fn trace(&self) -> &Trace {
        match self {
            Verdict::Net { trace, .. } | Verdict::Stuck { trace, .. } | Verdict::WrongString { trace, .. } => trace,
        }
    }
}

/// Contract `aps` in place and judge the result.
pub fn judge(aps: &mut Aps, acceptance: &Acceptance) -> Verdict {
    let trace = contract(aps);
    let comb = match aps.final_comb() {
        Some(c) => c.clone(),
        None => {
            return Verdict::Stuck {
                trace,
                diagnostics: diagnose(aps),
            }
        }
    };
    let ok = match acceptance {
        Acceptance::Net => true,
        Acceptance::String(s) => comb.string().as_ref() == Some(s),
        Acceptance::Leaves(l) => comb.leaves().as_ref() == Some(l),
    };
    if ok {
        Verdict::Net { trace, comb }
    } else {
        Verdict::WrongString { trace, comb }
    }
}

/// Convert and judge a linked structure.
pub fn is_proof_net(ps: &ProofStructure, terms: &[StringTerm], acceptance: &Acceptance) -> Result<Verdict, ApsError> {
    let mut aps = Aps::from_structure(ps, terms)?;
    Ok(judge(&mut aps, acceptance))
}
