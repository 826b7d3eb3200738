//! Abstract proof structures: formulas erased, `+` links and inputs turned
//! into combs.
//!
//! Conversion from a [`ProofStructure`]:
//!
//! * `L\`, `L/` and `R•` links become 2-premiss combs;
//! * `L↑ₖ`, `L↓ₖ` and `R⊙ₖ` links become wrap links `×ₖ` whose left premiss
//!   is the wrapping string and whose right premiss is the inserted one;
//! * the remaining links stay par links;
//! * a hypothesis with string term `w0+1+...+1+wn` becomes a comb with those
//!   leaf words and separators as premisses;
//! * an auxiliary input of sort n (a non-main conclusion of a par link) is
//!   replaced by n+1 fresh points, *tethered* to the par link, feeding a comb
//!   `t0 1 t1 ... 1 tn` whose conclusion is the input's point.
//!
//! Point ids are the structure's vertex ids, followed by the tether points.
//! Element ids are the indices of the converted links, followed by the input
//! combs in vertex order.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use thiserror::Error;

use crate::proof_structure::{LinkClass, LinkId, LinkTag, ProofStructure, Side, VertexId};
use crate::terms::{Item, Mode, StringTerm, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub u32);

impl PointId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ElemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A word of an input string, remembering where it came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafWord {
    pub word: Symbol,
    /// Index of the input (hypothesis) the word belongs to.
    pub hyp: usize,
    /// Position among that input's words.
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Premiss {
    Point(PointId),
    Sep,
    Leaf(LeafWord),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comb {
    pub premisses: Vec<Premiss>,
    pub conclusion: PointId,
}

impl Comb {
    /// The premisses as a string term, when they are all words and
    /// separators.
    pub fn string(&self) -> Option<StringTerm> {
        self.premisses
            .iter()
            .map(|p| match p {
                Premiss::Sep => Some(Item::Sep),
                Premiss::Leaf(l) => Some(Item::Word(l.word.clone())),
                Premiss::Point(_) => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(StringTerm::from_items)
    }

    /// Leaf identities in order, skipping separators; `None` if a point
    /// remains.
    pub fn leaves(&self) -> Option<Vec<(usize, usize)>> {
        self.premisses
            .iter()
            .filter(|p| !matches!(p, Premiss::Sep))
            .map(|p| match p {
                Premiss::Leaf(l) => Some((l.hyp, l.pos)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrapLink {
    pub mode: Mode,
    /// The string whose separator is replaced.
    pub left: PointId,
    /// The string inserted.
    pub right: PointId,
    pub conclusion: PointId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParLink {
    pub tag: LinkTag,
    /// The premiss.
    pub top: PointId,
    /// The arrow target. Equal to `top` for `L•` and `L⊙ₖ`.
    pub main: PointId,
    /// Tether points, one group per auxiliary input, in conclusion order.
    pub groups: Vec<Vec<PointId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    Comb(Comb),
    Wrap(WrapLink),
    Par(ParLink),
}

impl Element {
    pub fn conclusions(&self) -> Vec<PointId> {
        match self {
            Element::Comb(c) => alloc::vec![c.conclusion],
            Element::Wrap(w) => alloc::vec![w.conclusion],
            Element::Par(p) => {
                let mut out: Vec<PointId> = p.groups.iter().flatten().copied().collect();
                if p.tag.side == Side::R {
                    out.push(p.main);
                }
                out
            }
        }
    }

    pub fn premiss_points(&self) -> Vec<PointId> {
        match self {
            Element::Comb(c) => c
                .premisses
                .iter()
                .filter_map(|p| match p {
                    Premiss::Point(q) => Some(*q),
                    _ => None,
                })
                .collect(),
            Element::Wrap(w) => alloc::vec![w.left, w.right],
            Element::Par(p) => alloc::vec![p.top],
        }
    }

    pub fn as_comb(&self) -> Option<&Comb> {
        match self {
            Element::Comb(c) => Some(c),
            _ => None,
        }
    }
}

/// Where an element of the initial structure came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementOrigin {
    Link(LinkId),
    Input(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointKind {
    /// A vertex of the proof structure (possibly unused in this APS).
    Vertex(VertexId),
    /// A fresh point of the `group`-th auxiliary input of `par`.
    Tether { par: ElemId, group: u32, pos: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub kind: PointKind,
    pub sort: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApsError {
    #[error("input {vertex:?}: string term has sort {term_sort}, formula has sort {formula_sort}")]
    SortMismatch {
        vertex: VertexId,
        term_sort: u32,
        formula_sort: u32,
    },
    #[error("expected {expected} hypothesis strings, got {got}")]
    HypothesisCount { expected: usize, got: usize },
    #[error("input {0:?} is also the conclusion of a link")]
    InputConcluded(VertexId),
}

/// One hypothesis of a (sub)structure together with its string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Input {
    pub vertex: VertexId,
    pub term: StringTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aps {
    elements: Vec<Option<Element>>,
    origins: Vec<ElementOrigin>,
    points: Vec<Point>,
    producer: Vec<Option<ElemId>>,
    consumer: Vec<Option<ElemId>>,
    conclusion: PointId,
    live: usize,
}

impl Aps {
    /// Convert a complete structure; `terms[i]` is the string of hypothesis
    /// `i`.
    pub fn from_structure(ps: &ProofStructure, terms: &[StringTerm]) -> Result<Aps, ApsError> {
        if terms.len() != ps.hypotheses.len() {
            return Err(ApsError::HypothesisCount {
                expected: ps.hypotheses.len(),
                got: terms.len(),
            });
        }
        let links: Vec<LinkId> = ps.link_ids().collect();
        let inputs: Vec<Input> = ps
            .hypotheses
            .iter()
            .zip(terms)
            .map(|(&vertex, term)| Input {
                vertex,
                term: term.clone(),
            })
            .collect();
        Aps::from_parts(ps, &links, &inputs, ps.conclusion)
    }

    /// Convert the substructure made of `links` with the given inputs. Leaf
    /// words of `inputs[i]` get hypothesis index `i`.
    pub fn from_parts(
        ps: &ProofStructure,
        links: &[LinkId],
        inputs: &[Input],
        conclusion: VertexId,
    ) -> Result<Aps, ApsError> {
        let mut points: Vec<Point> = ps
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| Point {
                kind: PointKind::Vertex(VertexId(i as u32)),
                sort: v.formula.sort().get(),
            })
            .collect();
        let vp = |v: VertexId| PointId(v.0);
        let mut elements = Vec::new();
        let mut origins = Vec::new();
        // Input combs, keyed by vertex, collected then sorted.
        let mut input_combs: Vec<(VertexId, Comb)> = Vec::new();

        for &l in links {
            let link = ps.link(l);
            let id = ElemId(elements.len() as u32);
            let element = match link.tag.class() {
                LinkClass::Plus => Element::Comb(Comb {
                    premisses: link.premisses.iter().map(|&v| Premiss::Point(vp(v))).collect(),
                    conclusion: vp(link.conclusions[0]),
                }),
                LinkClass::Wrap(mode) => Element::Wrap(WrapLink {
                    mode,
                    left: vp(link.premisses[0]),
                    right: vp(link.premisses[1]),
                    conclusion: vp(link.conclusions[0]),
                }),
                LinkClass::Par => {
                    let mut groups = Vec::new();
                    for (g, aux) in link.auxiliary().enumerate() {
                        let n = ps.formula(aux).sort().get();
                        let mut group = Vec::new();
                        let mut row = Vec::new();
                        for pos in 0..=n {
                            let t = PointId(points.len() as u32);
                            points.push(Point {
                                kind: PointKind::Tether {
                                    par: id,
                                    group: g as u32,
                                    pos,
                                },
                                sort: 0,
                            });
                            group.push(t);
                            if pos > 0 {
                                row.push(Premiss::Sep);
                            }
                            row.push(Premiss::Point(t));
                        }
                        groups.push(group);
                        input_combs.push((
                            aux,
                            Comb {
                                premisses: row,
                                conclusion: vp(aux),
                            },
                        ));
                    }
                    Element::Par(ParLink {
                        tag: link.tag,
                        top: vp(link.premisses[0]),
                        main: vp(link.main.expect("par link has a main formula")),
                        groups,
                    })
                }
            };
            elements.push(Some(element));
            origins.push(ElementOrigin::Link(l));
        }

        for (h, input) in inputs.iter().enumerate() {
            let formula_sort = ps.formula(input.vertex).sort().get();
            let term_sort = input.term.sort().get();
            if formula_sort != term_sort {
                return Err(ApsError::SortMismatch {
                    vertex: input.vertex,
                    term_sort,
                    formula_sort,
                });
            }
            let mut pos = 0;
            let premisses = input
                .term
                .items()
                .iter()
                .map(|item| match item {
                    Item::Sep => Premiss::Sep,
                    Item::Word(w) => {
                        pos += 1;
                        Premiss::Leaf(LeafWord {
                            word: w.clone(),
                            hyp: h,
                            pos: pos - 1,
                        })
                    }
                })
                .collect();
            input_combs.push((
                input.vertex,
                Comb {
                    premisses,
                    conclusion: vp(input.vertex),
                },
            ));
        }
        input_combs.sort_by_key(|(v, _)| *v);
        for (v, comb) in input_combs {
            elements.push(Some(Element::Comb(comb)));
            origins.push(ElementOrigin::Input(v));
        }

        let mut aps = Aps {
            live: elements.len(),
            producer: alloc::vec![None; points.len()],
            consumer: alloc::vec![None; points.len()],
            elements,
            origins,
            points,
            conclusion: vp(conclusion),
        };
        for i in 0..aps.elements.len() {
            let id = ElemId(i as u32);
            let e = aps.elements[i].take().unwrap();
            for c in e.conclusions() {
                if aps.producer[c.index()].is_some() {
                    if let PointKind::Vertex(v) = aps.points[c.index()].kind {
                        return Err(ApsError::InputConcluded(v));
                    }
                }
            }
            aps.index(id, &e);
            aps.elements[i] = Some(e);
        }
        Ok(aps)
    }

    fn index(&mut self, id: ElemId, e: &Element) {
        for p in e.premiss_points() {
            self.consumer[p.index()] = Some(id);
        }
        for c in e.conclusions() {
            self.producer[c.index()] = Some(id);
        }
    }

    fn unindex(&mut self, id: ElemId, e: &Element) {
        for p in e.premiss_points() {
            if self.consumer[p.index()] == Some(id) {
                self.consumer[p.index()] = None;
            }
        }
        for c in e.conclusions() {
            if self.producer[c.index()] == Some(id) {
                self.producer[c.index()] = None;
            }
        }
    }

    /// Remove the element, returning it.
    pub fn remove(&mut self, id: ElemId) -> Option<Element> {
        let e = self.elements[id.index()].take()?;
        self.unindex(id, &e);
        self.live -= 1;
        Some(e)
    }

    /// Put `e` at `id`, which must be free.
    pub fn insert(&mut self, id: ElemId, e: Element) {
        assert!(self.elements[id.index()].is_none(), "element slot in use");
        self.index(id, &e);
        self.elements[id.index()] = Some(e);
        self.live += 1;
    }

    pub fn element(&self, id: ElemId) -> Option<&Element> {
        self.elements.get(id.index()).and_then(|e| e.as_ref())
    }

    pub fn comb(&self, id: ElemId) -> Option<&Comb> {
        self.element(id).and_then(Element::as_comb)
    }

    pub fn origin(&self, id: ElemId) -> ElementOrigin {
        self.origins[id.index()]
    }

    /// Total number of element slots, live or not.
    pub fn capacity(&self) -> usize {
        self.elements.len()
    }

    /// Number of live elements.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = (ElemId, &Element)> {
        self.elements
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.as_ref().map(|e| (ElemId(i as u32), e)))
    }

    pub fn point(&self, p: PointId) -> Point {
        self.points[p.index()]
    }

    pub fn producer(&self, p: PointId) -> Option<ElemId> {
        self.producer[p.index()]
    }

    pub fn consumer(&self, p: PointId) -> Option<ElemId> {
        self.consumer[p.index()]
    }

    pub fn conclusion(&self) -> PointId {
        self.conclusion
    }

    pub fn premiss_sort(&self, p: &Premiss) -> u32 {
        match p {
            Premiss::Point(q) => self.points[q.index()].sort,
            Premiss::Sep => 1,
            Premiss::Leaf(_) => 0,
        }
    }

    pub fn sort_of(&self, premisses: &[Premiss]) -> u32 {
        premisses.iter().map(|p| self.premiss_sort(p)).sum()
    }

    /// The single remaining comb, if the structure is one.
    pub fn final_comb(&self) -> Option<&Comb> {
        if self.live != 1 {
            return None;
        }
        self.elements()
            .next()
            .and_then(|(_, e)| e.as_comb())
            .filter(|c| c.conclusion == self.conclusion)
    }

    /// Number of par links still present.
    pub fn par_count(&self) -> usize {
        self.elements().filter(|(_, e)| matches!(e, Element::Par(_))).count()
    }

    pub fn point_name(&self, p: PointId) -> PointName {
        PointName(self.points[p.index()].kind, p)
    }

    /// Deterministic text: one element per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, e) in self.elements() {
            let _ = writeln!(out, "{} {}", id, ElementLine(self, e));
        }
        out
    }

    /// The premiss row of a comb as text, e.g. `[mary rang v4 up]`.
    pub fn row(&self, premisses: &[Premiss]) -> String {
        let mut out = String::from("[");
        for (i, p) in premisses.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = match p {
                Premiss::Point(q) => write!(out, "{}", self.point_name(*q)),
                Premiss::Sep => write!(out, "1"),
                Premiss::Leaf(l) => write!(out, "{}", l.word),
            };
        }
        out.push(']');
        out
    }
}

pub struct PointName(PointKind, PointId);

impl fmt::Display for PointName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            PointKind::Vertex(v) => write!(f, "v{}", v.0),
            PointKind::Tether { .. } => write!(f, "t{}", (self.1).0),
        }
    }
}

struct ElementLine<'a>(&'a Aps, &'a Element);

impl fmt::Display for ElementLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let aps = self.0;
        match self.1 {
            Element::Comb(c) => write!(f, "comb {} -> {}", aps.row(&c.premisses), aps.point_name(c.conclusion)),
            Element::Wrap(w) => write!(
                f,
                "wrap ×{} {} {} -> {}",
                w.mode,
                aps.point_name(w.left),
                aps.point_name(w.right),
                aps.point_name(w.conclusion)
            ),
            Element::Par(p) => {
                write!(
                    f,
                    "par {} {} main={} tethers",
                    p.tag,
                    aps.point_name(p.top),
                    aps.point_name(p.main)
                )?;
                for g in &p.groups {
                    f.write_str(" [")?;
                    for (i, t) in g.iter().enumerate() {
                        if i > 0 {
                            f.write_str(" ")?;
                        }
                        write!(f, "{}", aps.point_name(*t))?;
                    }
                    f.write_str("]")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Formula, Signature};
    use crate::proof_structure::{unfold, Linking};

    fn sig() -> Signature {
        Signature::parse("np 0\ns 0\ninf 1\n").unwrap()
    }

    fn f(s: &str) -> Formula {
        Formula::parse(s, &sig()).unwrap()
    }

    fn t(s: &str) -> StringTerm {
        StringTerm::parse(s).unwrap()
    }

    #[test]
    fn axiom_of_sort_two_is_a_comb() {
        let frame = unfold(&[f("inf*inf")], &f("inf*inf"));
        // Use the unexpanded structure: one vertex both hypothesis and goal.
        let ps = ProofStructure {
            vertices: alloc::vec![frame.structure.vertices[0].clone()],
            links: alloc::vec![],
            hypotheses: alloc::vec![VertexId(0)],
            conclusion: VertexId(0),
        };
        let aps = Aps::from_structure(&ps, &[t("p0+1+p1+1+p2")]).unwrap();
        let c = aps.final_comb().unwrap();
        assert_eq!(c.string().unwrap(), t("p0+1+p1+1+p2"));
        assert_eq!(aps.sort_of(&c.premisses), 2);
    }

    #[test]
    fn sort_mismatch_rejected() {
        let frame = unfold(&[f("np")], &f("np"));
        let ps = frame.apply(&frame.linkings().unwrap().next().unwrap());
        assert!(matches!(
            Aps::from_structure(&ps, &[t("a+1+b")]),
            Err(ApsError::SortMismatch { .. })
        ));
    }

    #[test]
    fn element_mapping_for_the_example() {
        let hyps = [f("np"), f("(np\\s)^>np"), f("(s^>np)!>s")];
        let frame = unfold(&hyps, &f("s"));
        let linking: Linking = frame.linkings().unwrap().next().unwrap();
        let ps = frame.apply(&linking);
        let aps = Aps::from_structure(&ps, &[t("mary"), t("rang+1+up"), t("everyone")]).unwrap();
        let kinds: alloc::vec::Vec<&str> = aps
            .elements()
            .map(|(_, e)| match e {
                Element::Comb(_) => "comb",
                Element::Wrap(_) => "wrap",
                Element::Par(_) => "par",
            })
            .collect();
        // links: L↑> (wrap), L\ (comb), L↓> (wrap), R↑> (par); then inputs:
        // three lexical combs and one auxiliary comb.
        assert_eq!(kinds, ["wrap", "comb", "wrap", "par", "comb", "comb", "comb", "comb"]);
        let par_count = ps.links.iter().filter(|l| l.tag.class() == LinkClass::Par).count();
        assert_eq!(aps.par_count(), par_count);
        // The np auxiliary input has sort 0: one tether point.
        let par = aps
            .elements()
            .find_map(|(_, e)| match e {
                Element::Par(p) => Some(p.clone()),
                _ => None,
            })
            .unwrap();
        assert_eq!(par.groups.len(), 1);
        assert_eq!(par.groups[0].len(), 1);
    }
}
