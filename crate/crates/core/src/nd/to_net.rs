//! From a natural-deduction proof to a proof net, with a contraction
//! sequence that follows the proof.
//!
//! Each rule adds one link to the structure built for its premisses:
//!
//! * `\E`, `/E`, `•I`: a `+` link, contracted by two `[+]` steps that plug
//!   the premiss combs into it;
//! * `↑ₖE`, `↓ₖE`, `⊙ₖI`: a wrap link, contracted by `[×ₖ]`;
//! * `\I`, `/I`, `↑ₖI`, `↓ₖI`: a par link whose auxiliary conclusion is the
//!   discharged hypothesis, contracted by the matching logical step;
//! * `•E`, `⊙ₖE`: a par link from the major premiss to the two discharged
//!   hypotheses, contracted logically and then plugged with `[+]`.
//!
//! Hypotheses are single vertices: the net is not expanded to atoms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Label, NdProof, NdRule};
use crate::aps::{Aps, ApsError, Comb, ElemId, PointId};
use crate::contraction::{apply_at, contract, Step, StuckReason, Trace};
use crate::formula::{Connective, Formula};
use crate::proof_structure::{Link, LinkId, LinkTag, Origin, Polarity, ProofStructure, Side, Vertex, VertexId};
use crate::terms::StringTerm;

/// One step of the witness contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Directive {
    /// `[+]` on the comb concluding this vertex.
    Plus(VertexId),
    /// `[×ₖ]` on the wrap link made from this link.
    Wrap(LinkId),
    /// The logical contraction of the par link made from this link.
    Logical(LinkId),
}

#[derive(Debug, Clone)]
pub struct NdNet {
    pub structure: ProofStructure,
    /// Strings of the sequent hypotheses, in order.
    pub terms: Vec<StringTerm>,
    pub aps: Aps,
    /// The witness sequence, one directive per step.
    pub directives: Vec<Directive>,
    /// The witness contraction, replayed.
    pub witness: Trace,
    /// The comb reached by the witness.
    pub comb: Comb,
    /// The comb reached by the deterministic engine.
    pub engine: Trace,
    pub engine_comb: Option<Comb>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetOfNdError {
    Aps(ApsError),
    /// A directive did not apply.
    Stuck {
        step: usize,
        directive: Directive,
        reason: StuckReason,
    },
    /// The witness did not end in a single comb.
    Incomplete,
}

impl From<ApsError> for NetOfNdError {
    fn from(e: ApsError) -> Self {
        NetOfNdError::Aps(e)
    }
}

impl core::fmt::Display for NetOfNdError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NetOfNdError::Aps(e) => write!(f, "{}", e),
            NetOfNdError::Stuck {
                step,
                directive,
                reason,
            } => {
                write!(f, "witness step {} ({:?}) failed: {}", step, directive, reason)
            }
            NetOfNdError::Incomplete => f.write_str("witness did not reach a comb"),
        }
    }
}

struct Builder {
    vertices: Vec<Vertex>,
    links: Vec<Link>,
    lexical: BTreeMap<usize, (VertexId, StringTerm)>,
    hypotheses: BTreeMap<Label, VertexId>,
    directives: Vec<Directive>,
}

impl Builder {
    fn vertex(&mut self, formula: &Formula, origin: Origin, polarity: Polarity) -> VertexId {
        self.vertices.push(Vertex {
            formula: formula.clone(),
            origin,
            polarity,
        });
        VertexId(self.vertices.len() as u32 - 1)
    }

    fn link(
        &mut self,
        side: Side,
        conn: Connective,
        premisses: Vec<VertexId>,
        conclusions: Vec<VertexId>,
        main: Option<VertexId>,
    ) -> LinkId {
        self.links.push(Link {
            tag: LinkTag::new(side, conn),
            premisses,
            conclusions,
            main,
        });
        LinkId(self.links.len() as u32 - 1)
    }

    /// Build the structure for `p`; returns the vertex of its conclusion.
    fn build(&mut self, p: &NdProof) -> VertexId {
        match p.rule {
            NdRule::Lexical(i) => {
                let v = self.vertex(&p.formula, Origin::Hypothesis(i), Polarity::Hyp);
                self.lexical.insert(i, (v, p.term.clone()));
                v
            }
            NdRule::Hypothesis(l) => {
                let v = self.vertex(&p.formula, Origin::Internal, Polarity::Hyp);
                self.hypotheses.insert(l, v);
                v
            }
            NdRule::Elim(conn) | NdRule::Intro(conn) => {
                let a = self.build(&p.premisses[0]);
                let b = self.build(&p.premisses[1]);
                let c = self.vertex(&p.formula, Origin::Internal, Polarity::Hyp);
                let side = if matches!(p.rule, NdRule::Elim(_)) {
                    Side::L
                } else {
                    Side::R
                };
                let l = self.link(side, conn, alloc::vec![a, b], alloc::vec![c], None);
                match conn {
                    Connective::Under | Connective::Over | Connective::Prod => {
                        self.directives.push(Directive::Plus(a));
                        self.directives.push(Directive::Plus(b));
                    }
                    _ => self.directives.push(Directive::Wrap(l)),
                }
                c
            }
            NdRule::IntroDischarge(conn, label) => {
                let body = self.build(&p.premisses[0]);
                let h = self.hypotheses[&label];
                let v = self.vertex(&p.formula, Origin::Internal, Polarity::Goal);
                let conclusions = match conn {
                    Connective::Under | Connective::Down(_) => alloc::vec![h, v],
                    _ => alloc::vec![v, h],
                };
                let l = self.link(Side::R, conn, alloc::vec![body], conclusions, Some(v));
                self.directives.push(Directive::Logical(l));
                v
            }
            NdRule::ElimDischarge(conn, a, b) => {
                let d = self.build(&p.premisses[0]);
                let result = self.build(&p.premisses[1]);
                let ha = self.hypotheses[&a];
                let hb = self.hypotheses[&b];
                let l = self.link(Side::L, conn, alloc::vec![d], alloc::vec![ha, hb], Some(d));
                self.directives.push(Directive::Logical(l));
                self.directives.push(Directive::Plus(d));
                result
            }
        }
    }
}

fn run(aps: &mut Aps, directives: &[Directive]) -> Result<Trace, NetOfNdError> {
    let mut trace = Trace {
        steps: Vec::new(),
        initial_elements: aps.len(),
    };
    for (i, &d) in directives.iter().enumerate() {
        let target = match d {
            Directive::Plus(v) => aps.producer(PointId(v.0)),
            Directive::Wrap(l) | Directive::Logical(l) => Some(ElemId(l.0)),
        };
        let step: Result<Step, StuckReason> = match target {
            Some(t) => apply_at(aps, t),
            None => Err(StuckReason::NotPlugged),
        };
        match step {
            Ok(s) => trace.steps.push(s),
            Err(reason) => {
                return Err(NetOfNdError::Stuck {
                    step: i,
                    directive: d,
                    reason,
                })
            }
        }
    }
    Ok(trace)
}

/// Build the proof net of a checked proof and contract it twice: along
/// the proof, and with the deterministic engine.
pub fn net_of_nd(p: &NdProof) -> Result<NdNet, NetOfNdError> {
    let mut b = Builder {
        vertices: Vec::new(),
        links: Vec::new(),
        lexical: BTreeMap::new(),
        hypotheses: BTreeMap::new(),
        directives: Vec::new(),
    };
    let conclusion = b.build(p);
    if b.vertices[conclusion.index()].origin == Origin::Internal {
        b.vertices[conclusion.index()].origin = Origin::Goal;
    }
    b.vertices[conclusion.index()].polarity = Polarity::Goal;
    let (hypotheses, terms): (Vec<VertexId>, Vec<StringTerm>) = b.lexical.into_values().unzip();
    let structure = ProofStructure {
        vertices: b.vertices,
        links: b.links,
        hypotheses,
        conclusion,
    };
    let aps = Aps::from_structure(&structure, &terms)?;

    let mut witnessed = aps.clone();
    let witness = run(&mut witnessed, &b.directives)?;
    let comb = witnessed.final_comb().cloned().ok_or(NetOfNdError::Incomplete)?;

    let mut engined = aps.clone();
    let engine = contract(&mut engined);
    let engine_comb = engined.final_comb().cloned();

    Ok(NdNet {
        structure,
        terms,
        aps,
        directives: b.directives,
        witness,
        comb,
        engine,
        engine_comb,
    })
}
