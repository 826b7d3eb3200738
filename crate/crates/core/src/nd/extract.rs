//! From a proof net to a natural-deduction proof.
//!
//! Works on substructures: a set of links, the hypotheses of the
//! substructure each paired with a proof of it, and a conclusion.
//!
//! Without par links the substructure is a tree of tensor links rooted at
//! its conclusion, and the proof is read off bottom-up. Otherwise it is
//! contracted, and split at its last logical step:
//!
//! * for an introduction par link, the part that had been contracted into
//!   the comb above the link proves the body, with the auxiliary input as a
//!   fresh hypothesis; the rest proves the conclusion with the link's main
//!   vertex as a hypothesis proved by the introduction;
//! * for an elimination par link, the part contracted into the comb above
//!   its premiss proves the major premiss, and the part contracted into the
//!   comb holding its auxiliary inputs proves the minor one, with those
//!   inputs as fresh hypotheses; the rest proves the conclusion with the
//!   minor's conclusion as a hypothesis proved by the elimination.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use super::{strings, Fresh, NdProof, NdRule};
use crate::aps::{Aps, ApsError, ElemId, ElementOrigin, Input, PointId};
use crate::contraction::{apply_at, contract};
use crate::proof_structure::{LinkId, LinkKind, ProofStructure, Side, VertexId};
use crate::terms::StringTerm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtractError {
    Aps(ApsError),
    /// A substructure does not contract to a comb.
    NotNet,
    /// A substructure is not a tree of links over its hypotheses.
    Malformed,
    /// A string equation failed while combining sub-proofs.
    Term,
}

impl From<ApsError> for ExtractError {
    fn from(e: ApsError) -> Self {
        ExtractError::Aps(e)
    }
}

impl fmt::Display for ExtractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractError::Aps(e) => write!(f, "{}", e),
            ExtractError::NotNet => f.write_str("substructure does not contract to a comb"),
            ExtractError::Malformed => f.write_str("substructure is not a tree over its hypotheses"),
            ExtractError::Term => f.write_str("string terms do not combine"),
        }
    }
}

struct Sub {
    links: BTreeSet<LinkId>,
    hyps: BTreeMap<VertexId, NdProof>,
    conclusion: VertexId,
}

struct Extractor<'a> {
    ps: &'a ProofStructure,
    fresh: Fresh,
}

/// Read a proof off a proof net whose hypotheses have strings `terms`.
pub fn extract(ps: &ProofStructure, terms: &[StringTerm]) -> Result<NdProof, ExtractError> {
    if terms.len() != ps.hypotheses.len() {
        return Err(ExtractError::Aps(ApsError::HypothesisCount {
            expected: ps.hypotheses.len(),
            got: terms.len(),
        }));
    }
    let hyps = ps
        .hypotheses
        .iter()
        .zip(terms)
        .enumerate()
        .map(|(i, (&v, t))| (v, NdProof::leaf(NdRule::Lexical(i), t.clone(), ps.formula(v).clone())))
        .collect();
    let mut x = Extractor {
        ps,
        fresh: Fresh::avoiding(terms.iter().flat_map(|t| t.words())),
    };
    x.sub(Sub {
        links: ps.link_ids().collect(),
        hyps,
        conclusion: ps.conclusion,
    })
}

impl Extractor<'_> {
    fn sub(&mut self, s: Sub) -> Result<NdProof, ExtractError> {
        let has_par = s.links.iter().any(|&l| self.ps.link(l).kind() == LinkKind::Par);
        if !has_par {
            return self.tensor_tree(s);
        }
        let links: Vec<LinkId> = s.links.iter().copied().collect();
        let inputs: Vec<Input> = s
            .hyps
            .iter()
            .map(|(&vertex, p)| Input {
                vertex,
                term: p.term.clone(),
            })
            .collect();
        let aps = Aps::from_parts(self.ps, &links, &inputs, s.conclusion)?;
        let mut done = aps.clone();
        let trace = contract(&mut done);
        if done.final_comb().is_none() {
            return Err(ExtractError::NotNet);
        }
        let k = trace
            .steps
            .iter()
            .rposition(|st| st.rule.is_logical())
            .ok_or(ExtractError::Malformed)?;

        // Replay up to the last logical step, tracking which initial
        // elements each element absorbed.
        let mut state = aps.clone();
        let mut prov: Vec<BTreeSet<ElemId>> = (0..aps.capacity())
            .map(|i| BTreeSet::from([ElemId(i as u32)]))
            .collect();
        for st in &trace.steps[..k] {
            apply_at(&mut state, st.consumed[0]).map_err(|_| ExtractError::NotNet)?;
            let mut merged = BTreeSet::new();
            for c in &st.consumed {
                merged.append(&mut prov[c.index()]);
            }
            prov[st.result.index()] = merged;
        }

        let step = &trace.steps[k];
        let par = step.consumed[0];
        let lid = links[par.index()];
        let link = self.ps.link(lid);
        let conn = link.tag.connective;

        match link.tag.side {
            Side::R => {
                let top = link.premisses[0];
                let main = link.main.expect("par link");
                let aux = link.auxiliary().next().expect("R-par has one auxiliary");
                let label = self.fresh.label();
                let hterm = self.fresh.term(self.ps.formula(aux).sort().get());
                let hyp = NdProof::leaf(NdRule::Hypothesis(label), hterm.clone(), self.ps.formula(aux).clone());
                let (sub1, rest) = self.split(&aps, &prov[step.consumed[1].index()], s, top, &[(aux, hyp)])?;
                let body = self.sub(sub1)?;
                let term = strings::intro_discharge(conn, &body.term, &hterm).ok_or(ExtractError::Term)?;
                let intro = NdProof {
                    rule: NdRule::IntroDischarge(conn, label),
                    term,
                    formula: self.ps.formula(main).clone(),
                    premisses: alloc::vec![body],
                };
                let mut rest = rest;
                rest.links.remove(&lid);
                rest.hyps.insert(main, intro);
                self.sub(rest)
            }
            Side::L => {
                let d = link.premisses[0];
                let producer = state.producer(PointId(d.0)).ok_or(ExtractError::Malformed)?;
                let x = step.consumed[1];
                let below = state.comb(x).ok_or(ExtractError::Malformed)?.conclusion;
                let below = VertexId(below.0);
                let (sub1, rest) = self.split(&aps, &prov[producer.index()], s, d, &[])?;
                let major = self.sub(sub1)?;
                let mut parts = Vec::new();
                let mut extra = Vec::new();
                for aux in link.auxiliary() {
                    let label = self.fresh.label();
                    let term = self.fresh.term(self.ps.formula(aux).sort().get());
                    extra.push((
                        aux,
                        NdProof::leaf(NdRule::Hypothesis(label), term.clone(), self.ps.formula(aux).clone()),
                    ));
                    parts.push((label, term));
                }
                let (sub2, rest) = self.split(&aps, &prov[x.index()], rest, below, &extra)?;
                let minor = self.sub(sub2)?;
                let term = strings::elim_discharge(conn, &major.term, &minor.term, &parts[0].1, &parts[1].1)
                    .ok_or(ExtractError::Term)?;
                let elim = NdProof {
                    rule: NdRule::ElimDischarge(conn, parts[0].0, parts[1].0),
                    term,
                    formula: self.ps.formula(below).clone(),
                    premisses: alloc::vec![major, minor],
                };
                let mut rest = rest;
                rest.links.remove(&lid);
                rest.hyps.insert(below, elim);
                self.sub(rest)
            }
        }
    }

    /// Split off the substructure made of the initial elements in `prov`,
    /// concluding `conclusion`. `extra` gives proofs for inputs of `prov`
    /// that are not hypotheses of `s`. Returns it and the rest of `s`.
    fn split(
        &self,
        aps: &Aps,
        prov: &BTreeSet<ElemId>,
        mut s: Sub,
        conclusion: VertexId,
        extra: &[(VertexId, NdProof)],
    ) -> Result<(Sub, Sub), ExtractError> {
        let mut links = BTreeSet::new();
        let mut inputs = Vec::new();
        for &e in prov {
            match aps.origin(e) {
                ElementOrigin::Link(l) => {
                    links.insert(l);
                }
                ElementOrigin::Input(v) => inputs.push(v),
            }
        }
        // Auxiliary inputs of par links inside the part are recreated by the
        // conversion; the others are hypotheses.
        let auxiliaries: BTreeSet<VertexId> = links
            .iter()
            .filter(|&&l| self.ps.link(l).kind() == LinkKind::Par)
            .flat_map(|&l| self.ps.link(l).auxiliary().collect::<Vec<_>>())
            .collect();
        let mut hyps = BTreeMap::new();
        for v in inputs {
            if auxiliaries.contains(&v) {
                continue;
            }
            let proof = match s.hyps.remove(&v) {
                Some(p) => p,
                None => extra
                    .iter()
                    .find(|(x, _)| *x == v)
                    .map(|(_, p)| p.clone())
                    .ok_or(ExtractError::Malformed)?,
            };
            hyps.insert(v, proof);
        }
        for l in &links {
            s.links.remove(l);
        }
        Ok((
            Sub {
                links,
                hyps,
                conclusion,
            },
            s,
        ))
    }

    fn tensor_tree(&mut self, mut s: Sub) -> Result<NdProof, ExtractError> {
        let mut producer = BTreeMap::new();
        for &l in &s.links {
            for &c in &self.ps.link(l).conclusions {
                producer.insert(c, l);
            }
        }
        let mut used = 0;
        let root = s.conclusion;
        let proof = self.tree_at(&mut s, &producer, root, &mut used)?;
        if used != s.links.len() || !s.hyps.is_empty() {
            return Err(ExtractError::Malformed);
        }
        Ok(proof)
    }

    fn tree_at(
        &self,
        s: &mut Sub,
        producer: &BTreeMap<VertexId, LinkId>,
        v: VertexId,
        used: &mut usize,
    ) -> Result<NdProof, ExtractError> {
        if let Some(p) = s.hyps.remove(&v) {
            return Ok(p);
        }
        let &l = producer.get(&v).ok_or(ExtractError::Malformed)?;
        *used += 1;
        let link = self.ps.link(l);
        let a = self.tree_at(s, producer, link.premisses[0], used)?;
        let b = self.tree_at(s, producer, link.premisses[1], used)?;
        let conn = link.tag.connective;
        let term = strings::elim(conn, &a.term, &b.term).map_err(|_| ExtractError::Term)?;
        let rule = match link.tag.side {
            Side::L => NdRule::Elim(conn),
            Side::R => NdRule::Intro(conn),
        };
        Ok(NdProof {
            rule,
            term,
            formula: self.ps.formula(v).clone(),
            premisses: alloc::vec![a, b],
        })
    }
}
