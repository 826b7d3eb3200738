//! Proof frames, axiom linkings and proof structures.
//!
//! [`unfold`] turns a sequent into a [`ProofFrame`]: every hypothesis is
//! decomposed as a premiss and the goal as a conclusion, one link per
//! connective occurrence, until only atoms are left. The link chosen for a
//! connective depends on its polarity:
//!
//! | formula | as hypothesis          | as goal                |
//! |---------|------------------------|------------------------|
//! | `C/B`   | tensor `L/`, `+`       | par `R/`               |
//! | `A\C`   | tensor `L\`, `+`       | par `R\`               |
//! | `A•B`   | par `L•`               | tensor `R•`, `+`       |
//! | `C↑ₖB`  | tensor `L↑ₖ`, `×ₖ`     | par `R↑ₖ`              |
//! | `A↓ₖC`  | tensor `L↓ₖ`, `×ₖ`     | par `R↓ₖ`              |
//! | `A⊙ₖB`  | par `L⊙ₖ`              | tensor `R⊙ₖ`, `×ₖ`     |
//!
//! Unfolding is leftmost-outermost: hypotheses in order, then the goal, each
//! formula before its subformulas, left subformula first. Vertex and link
//! ids follow creation order.
//!
//! A [`Linking`] pairs every atomic leaf of hypothesis polarity (a
//! conclusion of the frame) with a leaf of goal polarity (a hypothesis of
//! the frame) carrying the same atom. Applying it merges each pair into one
//! vertex.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::formula::{Connective, Formula};
use crate::terms::{Mode, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LinkId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Hypothesis(usize),
    Goal,
    Internal,
}

/// Whether a formula occurrence was unfolded as a premiss (`Hyp`) or as a
/// conclusion (`Goal`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Hyp,
    Goal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub formula: Formula,
    pub origin: Origin,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkKind {
    Tensor,
    Par,
}

/// What a link becomes in the abstract proof structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkClass {
    /// A 2-premiss comb.
    Plus,
    /// A wrap link `×ₖ`.
    Wrap(Mode),
    Par,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkTag {
    pub side: Side,
    pub connective: Connective,
}

impl LinkTag {
    pub fn new(side: Side, connective: Connective) -> LinkTag {
        LinkTag { side, connective }
    }

    pub fn kind(self) -> LinkKind {
        match (self.side, self.connective) {
            (Side::L, Connective::Prod | Connective::Wrap(_)) => LinkKind::Par,
            (Side::L, _) => LinkKind::Tensor,
            (Side::R, Connective::Prod | Connective::Wrap(_)) => LinkKind::Tensor,
            (Side::R, _) => LinkKind::Par,
        }
    }

    pub fn class(self) -> LinkClass {
        match (self.kind(), self.connective) {
            (LinkKind::Par, _) => LinkClass::Par,
            (LinkKind::Tensor, Connective::Under | Connective::Over | Connective::Prod) => LinkClass::Plus,
            (LinkKind::Tensor, c) => LinkClass::Wrap(c.mode().expect("discontinuous connective")),
        }
    }
}

impl fmt::Display for LinkTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::L => "L",
            Side::R => "R",
        };
        write!(f, "{}{}", side, self.connective.unicode())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub tag: LinkTag,
    pub premisses: Vec<VertexId>,
    pub conclusions: Vec<VertexId>,
    /// The arrow target; set exactly for par links.
    pub main: Option<VertexId>,
}

impl Link {
    pub fn kind(&self) -> LinkKind {
        self.tag.kind()
    }

    /// Conclusions of a par link other than its main formula.
    pub fn auxiliary(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.conclusions.iter().copied().filter(move |v| Some(*v) != self.main)
    }

    /// The formula the tensor link decomposes: the complex premiss of an
    /// L-link or the conclusion of an R-link.
    pub fn tensor_main(&self) -> Option<VertexId> {
        if self.kind() != LinkKind::Tensor {
            return None;
        }
        match (self.tag.side, self.tag.connective) {
            (Side::R, _) => Some(self.conclusions[0]),
            (Side::L, Connective::Over | Connective::Up(_)) => Some(self.premisses[0]),
            (Side::L, _) => Some(self.premisses[1]),
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.premisses.iter().chain(&self.conclusions).copied()
    }
}

/// Vertices and links, with the boundary of the structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStructure {
    pub vertices: Vec<Vertex>,
    pub links: Vec<Link>,
    /// The sequent's hypotheses, in order.
    pub hypotheses: Vec<VertexId>,
    pub conclusion: VertexId,
}

/// Violation of the link conditions on a structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureError {
    PremissTwice(VertexId),
    ConclusionTwice(VertexId),
    DanglingVertex(VertexId),
    BadArity(LinkId),
    MainMisplaced(LinkId),
}

impl ProofStructure {
    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.index()]
    }

    pub fn formula(&self, v: VertexId) -> &Formula {
        &self.vertices[v.index()].formula
    }

    pub fn link(&self, l: LinkId) -> &Link {
        &self.links[l.index()]
    }

    pub fn link_ids(&self) -> impl Iterator<Item = LinkId> {
        (0..self.links.len() as u32).map(LinkId)
    }

    /// For each vertex, the link it is a premiss of and the link it is a
    /// conclusion of.
    pub fn incidence(&self) -> (Vec<Option<LinkId>>, Vec<Option<LinkId>>) {
        let mut consumer = alloc::vec![None; self.vertices.len()];
        let mut producer = alloc::vec![None; self.vertices.len()];
        for (i, l) in self.links.iter().enumerate() {
            for p in &l.premisses {
                consumer[p.index()] = Some(LinkId(i as u32));
            }
            for c in &l.conclusions {
                producer[c.index()] = Some(LinkId(i as u32));
            }
        }
        (consumer, producer)
    }

    /// Check that links have the right shape and that each vertex is a
    /// premiss of at most one link and a conclusion of at most one.
    pub fn check(&self) -> Result<(), StructureError> {
        let n = self.vertices.len();
        let mut premiss = alloc::vec![false; n];
        let mut conclusion = alloc::vec![false; n];
        let mut touched = alloc::vec![false; n];
        for (i, l) in self.links.iter().enumerate() {
            let id = LinkId(i as u32);
            let (np, nc) = match l.kind() {
                LinkKind::Tensor => (2, 1),
                LinkKind::Par => (1, 2),
            };
            if l.premisses.len() != np || l.conclusions.len() != nc {
                return Err(StructureError::BadArity(id));
            }
            match (l.kind(), l.main) {
                (LinkKind::Tensor, None) => {}
                (LinkKind::Par, Some(m))
                    if (l.tag.side == Side::L && l.premisses[0] == m)
                        || (l.tag.side == Side::R && l.conclusions.contains(&m)) => {}
                _ => return Err(StructureError::MainMisplaced(id)),
            }
            for &p in &l.premisses {
                if core::mem::replace(&mut premiss[p.index()], true) {
                    return Err(StructureError::PremissTwice(p));
                }
                touched[p.index()] = true;
            }
            for &c in &l.conclusions {
                if core::mem::replace(&mut conclusion[c.index()], true) {
                    return Err(StructureError::ConclusionTwice(c));
                }
                touched[c.index()] = true;
            }
        }
        for &h in &self.hypotheses {
            touched[h.index()] = true;
        }
        touched[self.conclusion.index()] = true;
        if let Some(v) = touched.iter().position(|t| !t) {
            return Err(StructureError::DanglingVertex(VertexId(v as u32)));
        }
        Ok(())
    }

    /// One line per vertex, then one line per link:
    /// `kind tag [premisses] -> [conclusions] main=v?`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let origin = match v.origin {
                Origin::Hypothesis(h) => alloc::format!(" hyp {}", h),
                Origin::Goal => String::from(" goal"),
                Origin::Internal => String::new(),
            };
            let _ = writeln!(out, "v{}: {}{}", i, v.formula, origin);
        }
        for l in &self.links {
            let _ = writeln!(out, "{}", LinkLine(l));
        }
        out
    }
}

struct LinkLine<'a>(&'a Link);

impl fmt::Display for LinkLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.0;
        let kind = match l.kind() {
            LinkKind::Tensor => "tensor",
            LinkKind::Par => "par",
        };
        write!(f, "{} {} [", kind, l.tag)?;
        write_ids(f, &l.premisses)?;
        f.write_str("] -> [")?;
        write_ids(f, &l.conclusions)?;
        f.write_str("]")?;
        if let Some(m) = l.main {
            write!(f, " main={}", m)?;
        }
        Ok(())
    }
}

fn write_ids(f: &mut fmt::Formatter<'_>, ids: &[VertexId]) -> fmt::Result {
    for (i, v) in ids.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}", v)?;
    }
    Ok(())
}

/// An unfolded sequent before axiom linking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofFrame {
    pub structure: ProofStructure,
}

/// Unequal numbers of atomic hypotheses and conclusions for one atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMismatch {
    pub atom: Symbol,
    /// Leaves of goal polarity: the frame's atomic hypotheses.
    pub hypotheses: usize,
    /// Leaves of hypothesis polarity: the frame's atomic conclusions.
    pub conclusions: usize,
}

impl fmt::Display for CountMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "atom {}: {} occurrence(s) as hypothesis, {} as conclusion",
            self.atom, self.hypotheses, self.conclusions
        )
    }
}

/// Pairs `(hyp-polarity leaf, goal-polarity leaf)`, ordered by the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linking(pub Vec<(VertexId, VertexId)>);

impl fmt::Display for Linking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (h, g)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}-{}", h, g)?;
        }
        Ok(())
    }
}

/// Unfold `hypotheses ⊢ goal` into a frame.
pub fn unfold(hypotheses: &[Formula], goal: &Formula) -> ProofFrame {
    let mut b = Unfolder::default();
    let mut hyp_ids = Vec::with_capacity(hypotheses.len());
    for (i, h) in hypotheses.iter().enumerate() {
        let v = b.vertex(h.clone(), Origin::Hypothesis(i), Polarity::Hyp);
        hyp_ids.push(v);
        b.expand(v);
    }
    let g = b.vertex(goal.clone(), Origin::Goal, Polarity::Goal);
    b.expand(g);
    ProofFrame {
        structure: ProofStructure {
            vertices: b.vertices,
            links: b.links,
            hypotheses: hyp_ids,
            conclusion: g,
        },
    }
}

#[derive(Default)]
struct Unfolder {
    vertices: Vec<Vertex>,
    links: Vec<Link>,
}

impl Unfolder {
    fn vertex(&mut self, formula: Formula, origin: Origin, polarity: Polarity) -> VertexId {
        self.vertices.push(Vertex {
            formula,
            origin,
            polarity,
        });
        VertexId(self.vertices.len() as u32 - 1)
    }

    fn expand(&mut self, v: VertexId) {
        let vertex = &self.vertices[v.index()];
        let polarity = vertex.polarity;
        let (op, l, r) = match vertex.formula.as_binary() {
            Some((op, l, r)) => (op, l.clone(), r.clone()),
            None => return,
        };
        use Polarity::{Goal as G, Hyp as H};
        let side = match polarity {
            H => Side::L,
            G => Side::R,
        };
        let tag = LinkTag::new(side, op);
        // Polarities of the left and right subformula.
        let (pl, pr) = match (polarity, op) {
            (H, Connective::Over | Connective::Up(_)) => (H, G),
            (H, Connective::Under | Connective::Down(_)) => (G, H),
            (H, _) => (H, H),
            (G, Connective::Over | Connective::Up(_)) => (G, H),
            (G, Connective::Under | Connective::Down(_)) => (H, G),
            (G, _) => (G, G),
        };
        let a = self.vertex(l, Origin::Internal, pl);
        let b = self.vertex(r, Origin::Internal, pr);
        let link = match (polarity, op) {
            // C/B, C↑B: premisses [v, B], conclusion [C]
            (H, Connective::Over | Connective::Up(_)) => Link {
                tag,
                premisses: alloc::vec![v, b],
                conclusions: alloc::vec![a],
                main: None,
            },
            // A\C, A↓C: premisses [A, v], conclusion [C]
            (H, Connective::Under | Connective::Down(_)) => Link {
                tag,
                premisses: alloc::vec![a, v],
                conclusions: alloc::vec![b],
                main: None,
            },
            // A•B, A⊙B: premiss [v], conclusions [A, B]
            (H, _) => Link {
                tag,
                premisses: alloc::vec![v],
                conclusions: alloc::vec![a, b],
                main: Some(v),
            },
            // C/B, C↑B: premiss [C], conclusions [v, B]
            (G, Connective::Over | Connective::Up(_)) => Link {
                tag,
                premisses: alloc::vec![a],
                conclusions: alloc::vec![v, b],
                main: Some(v),
            },
            // A\C, A↓C: premiss [C], conclusions [A, v]
            (G, Connective::Under | Connective::Down(_)) => Link {
                tag,
                premisses: alloc::vec![b],
                conclusions: alloc::vec![a, v],
                main: Some(v),
            },
            // A•B, A⊙B: premisses [A, B], conclusion [v]
            (G, _) => Link {
                tag,
                premisses: alloc::vec![a, b],
                conclusions: alloc::vec![v],
                main: None,
            },
        };
        self.links.push(link);
        self.expand(a);
        self.expand(b);
    }
}

impl ProofFrame {
    pub fn structure(&self) -> &ProofStructure {
        &self.structure
    }

    /// Atomic vertices of the given polarity, in id order.
    pub fn leaves(&self, polarity: Polarity) -> Vec<VertexId> {
        self.structure
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.polarity == polarity && v.formula.is_atom())
            .map(|(i, _)| VertexId(i as u32))
            .collect()
    }

    fn counts(&self) -> BTreeMap<Symbol, (usize, usize)> {
        let mut counts: BTreeMap<Symbol, (usize, usize)> = BTreeMap::new();
        for v in &self.structure.vertices {
            if let Some(a) = v.formula.as_atom() {
                let c = counts.entry(a.clone()).or_default();
                match v.polarity {
                    Polarity::Goal => c.0 += 1,
                    Polarity::Hyp => c.1 += 1,
                }
            }
        }
        counts
    }

    /// Atoms whose hypothesis and conclusion counts differ.
    pub fn count_mismatches(&self) -> Vec<CountMismatch> {
        self.counts()
            .into_iter()
            .filter(|(_, (h, c))| h != c)
            .map(|(atom, (hypotheses, conclusions))| CountMismatch {
                atom,
                hypotheses,
                conclusions,
            })
            .collect()
    }

    /// Product over atoms of (occurrences)!, or 0 on a count mismatch.
    pub fn linking_count(&self) -> u128 {
        let counts = self.counts();
        if counts.values().any(|(h, c)| h != c) {
            return 0;
        }
        counts
            .values()
            .map(|&(n, _)| (1..=n as u128).product::<u128>())
            .product()
    }

    /// Lazily enumerate all linkings in lexicographic order of the chosen
    /// goal-polarity leaves.
    pub fn linkings(&self) -> Result<Linkings<'_>, Vec<CountMismatch>> {
        let mismatches = self.count_mismatches();
        if !mismatches.is_empty() {
            return Err(mismatches);
        }
        let hyp_leaves = self.leaves(Polarity::Hyp);
        let goal_leaves = self.leaves(Polarity::Goal);
        let formula = |v: VertexId| &self.structure.vertices[v.index()].formula;
        let candidates = hyp_leaves
            .iter()
            .map(|&h| {
                goal_leaves
                    .iter()
                    .copied()
                    .filter(|&g| formula(g) == formula(h))
                    .collect()
            })
            .collect();
        Ok(Linkings {
            frame: self,
            hyp_leaves,
            candidates,
            choice: Vec::new(),
            used: alloc::vec![false; self.structure.vertices.len()],
            started: false,
        })
    }

    /// Merge each linked pair into a single vertex and renumber.
    pub fn apply(&self, linking: &Linking) -> ProofStructure {
        let s = &self.structure;
        let mut partner = alloc::vec![None; s.vertices.len()];
        for &(h, g) in &linking.0 {
            partner[g.index()] = Some(h);
        }
        let mut map = alloc::vec![VertexId(0); s.vertices.len()];
        let mut vertices: Vec<Vertex> = Vec::with_capacity(s.vertices.len() - linking.0.len());
        for (i, v) in s.vertices.iter().enumerate() {
            if partner[i].is_none() {
                map[i] = VertexId(vertices.len() as u32);
                vertices.push(v.clone());
            }
        }
        for (i, p) in partner.iter().enumerate() {
            if let Some(h) = p {
                map[i] = map[h.index()];
                let merged = &mut vertices[map[i].index()];
                if merged.origin == Origin::Internal {
                    merged.origin = s.vertices[i].origin;
                }
            }
        }
        let remap = |ids: &[VertexId]| ids.iter().map(|v| map[v.index()]).collect();
        ProofStructure {
            vertices,
            links: s
                .links
                .iter()
                .map(|l| Link {
                    tag: l.tag,
                    premisses: remap(&l.premisses),
                    conclusions: remap(&l.conclusions),
                    main: l.main.map(|m| map[m.index()]),
                })
                .collect(),
            hypotheses: remap(&s.hypotheses),
            conclusion: map[s.conclusion.index()],
        }
    }
}

/// Iterator over the linkings of a frame.
pub struct Linkings<'a> {
    frame: &'a ProofFrame,
    hyp_leaves: Vec<VertexId>,
    candidates: Vec<Vec<VertexId>>,
    choice: Vec<usize>,
    used: Vec<bool>,
    started: bool,
}

impl Linkings<'_> {
    /// Extend `choice` to full length starting the search for depth `d` at
    /// candidate `from`; backtrack as needed. Returns false when exhausted.
    fn fill(&mut self, mut from: usize) -> bool {
        loop {
            let d = self.choice.len();
            if d == self.hyp_leaves.len() {
                return true;
            }
            let found = (from..self.candidates[d].len()).find(|&c| !self.used[self.candidates[d][c].index()]);
            match found {
                Some(c) => {
                    self.used[self.candidates[d][c].index()] = true;
                    self.choice.push(c);
                    from = 0;
                }
                None => match self.choice.pop() {
                    Some(c) => {
                        let d = self.choice.len();
                        self.used[self.candidates[d][c].index()] = false;
                        from = c + 1;
                    }
                    None => return false,
                },
            }
        }
    }

    fn current(&self) -> Linking {
        Linking(
            self.choice
                .iter()
                .enumerate()
                .map(|(d, &c)| (self.hyp_leaves[d], self.candidates[d][c]))
                .collect(),
        )
    }

    pub fn frame(&self) -> &ProofFrame {
        self.frame
    }
}

impl Iterator for Linkings<'_> {
    type Item = Linking;

    fn next(&mut self) -> Option<Linking> {
        let ok = if !self.started {
            self.started = true;
            self.fill(0)
        } else {
            match self.choice.pop() {
                None => false,
                Some(c) => {
                    let d = self.choice.len();
                    self.used[self.candidates[d][c].index()] = false;
                    self.fill(c + 1)
                }
            }
        };
        if ok {
            Some(self.current())
        } else {
            self.choice.clear();
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Signature;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn sig() -> Signature {
        Signature::parse("np 0\nn 0\ns 0\n").unwrap()
    }

    fn f(s: &str) -> Formula {
        Formula::parse(s, &sig()).unwrap()
    }

    #[test]
    fn axiom_frame() {
        let frame = unfold(&[f("np")], &f("np"));
        assert!(frame.structure.links.is_empty());
        let all: Vec<_> = frame.linkings().unwrap().collect();
        assert_eq!(all.len(), 1);
        let ps = frame.apply(&all[0]);
        assert_eq!(ps.vertices.len(), 1);
        assert_eq!(ps.hypotheses, [VertexId(0)]);
        assert_eq!(ps.conclusion, VertexId(0));
        ps.check().unwrap();
    }

    #[test]
    fn over_elimination_frame() {
        let frame = unfold(&[f("np/n"), f("n")], &f("np"));
        let s = &frame.structure;
        assert_eq!(s.links.len(), 1);
        let l = &s.links[0];
        assert_eq!(l.tag.to_string(), "L/");
        assert_eq!(l.premisses, [VertexId(0), VertexId(2)]);
        assert_eq!(l.conclusions, [VertexId(1)]);
        // leaves: np (v1, hyp pol), n (v2, goal pol), n (v3), np (v4 goal)
        assert_eq!(frame.leaves(Polarity::Hyp), [VertexId(1), VertexId(3)]);
        assert_eq!(frame.leaves(Polarity::Goal), [VertexId(2), VertexId(4)]);
        assert_eq!(frame.linkings().unwrap().count(), 1);
    }

    #[test]
    fn mismatch_reported() {
        let frame = unfold(&[f("np")], &f("s"));
        let err = frame.linkings().err().unwrap();
        assert_eq!(err.len(), 2);
        assert_eq!(err[0].atom.as_str(), "np");
        assert_eq!((err[0].hypotheses, err[0].conclusions), (0, 1));
        assert_eq!(err[1].atom.as_str(), "s");
        assert_eq!((err[1].hypotheses, err[1].conclusions), (1, 0));
    }

    #[test]
    fn dump_format() {
        let frame = unfold(&[f("np\\s")], &f("np\\s"));
        let dump = frame.structure.dump();
        assert!(dump.contains("tensor L\\ [v1, v0] -> [v2]"), "{}", dump);
        assert!(dump.contains("par R\\ [v5] -> [v4, v3] main=v3"), "{}", dump);
    }

    fn brute_force_count(frame: &ProofFrame) -> usize {
        // Try every injective assignment by permutation of goal leaves.
        let h = frame.leaves(Polarity::Hyp);
        let g = frame.leaves(Polarity::Goal);
        if h.len() != g.len() {
            return 0;
        }
        let mut idx: Vec<usize> = (0..g.len()).collect();
        let mut count = 0;
        loop {
            let ok = h
                .iter()
                .zip(&idx)
                .all(|(a, &b)| frame.structure.formula(*a) == frame.structure.formula(g[b]));
            if ok {
                count += 1;
            }
            // next permutation
            let mut i = idx.len();
            while i > 1 && idx[i - 2] >= idx[i - 1] {
                i -= 1;
            }
            if i <= 1 {
                break;
            }
            let mut j = idx.len() - 1;
            while idx[j] <= idx[i - 2] {
                j -= 1;
            }
            idx.swap(i - 2, j);
            idx[i - 1..].reverse();
        }
        count
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![Just("np"), Just("n"), Just("s")].prop_map(|a| Formula::atom(a, crate::Sort::ZERO));
        leaf.prop_recursive(3, 8, 2, |inner| {
            (inner.clone(), inner, 0..3u8).prop_map(|(l, r, op)| match op {
                0 => Formula::under(l, r),
                1 => Formula::over(l, r),
                _ => Formula::prod(l, r),
            })
        })
    }

    proptest! {
        #[test]
        fn linkings_match_factorial_product(
            hyps in prop::collection::vec(arb_formula(), 1..3),
            goal in arb_formula()
        ) {
            let frame = unfold(&hyps, &goal);
            let expected = brute_force_count(&frame);
            match frame.linkings() {
                Ok(it) => {
                    let all: Vec<Linking> = it.collect();
                    prop_assert_eq!(all.len(), expected);
                    prop_assert_eq!(all.len() as u128, frame.linking_count());
                    let mut sorted = all.clone();
                    sorted.sort_by(|a, b| a.0.cmp(&b.0));
                    prop_assert_eq!(&sorted, &all);
                    for l in &all {
                        let ps = frame.apply(l);
                        prop_assert!(ps.check().is_ok());
                        prop_assert_eq!(ps.hypotheses.len(), hyps.len());
                    }
                }
                Err(_) => prop_assert_eq!(expected, 0),
            }
        }

        #[test]
        fn frames_are_well_formed(
            hyps in prop::collection::vec(arb_formula(), 0..3),
            goal in arb_formula()
        ) {
            let frame = unfold(&hyps, &goal);
            prop_assert!(frame.structure.check().is_ok());
            let conn: u32 = hyps.iter().map(|h| h.connective_count()).sum::<u32>()
                + goal.connective_count();
            prop_assert_eq!(frame.structure.links.len() as u32, conn);
        }
    }
}
