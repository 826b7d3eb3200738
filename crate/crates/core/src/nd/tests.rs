use super::*;
use crate::contraction::{is_proof_net, Acceptance, Rule};
use crate::formula::Signature;
use crate::terms::Mode;

fn sig() -> Signature {
    Signature::parse("np 0\nn 0\ns 0\ninf 1\n").unwrap()
}

fn f(s: &str) -> Formula {
    Formula::parse(s, &sig()).unwrap()
}

fn t(s: &str) -> StringTerm {
    StringTerm::parse(s).unwrap()
}

fn lex(i: usize, term: &str, formula: &str) -> NdProof {
    NdProof::leaf(NdRule::Lexical(i), t(term), f(formula))
}

fn hyp(l: Label, term: &str, formula: &str) -> NdProof {
    NdProof::leaf(NdRule::Hypothesis(l), t(term), f(formula))
}

fn node(rule: NdRule, term: &str, formula: &str, premisses: Vec<NdProof>) -> NdProof {
    NdProof {
        rule,
        term: t(term),
        formula: f(formula),
        premisses,
    }
}

/// mary:np, rang+1+up:(np\s)↑>np, everyone:(s↑>np)↓>s ⊢ mary+rang+everyone+up:s
pub(crate) fn rang_up() -> NdProof {
    let up = Connective::Up(Mode::First);
    let down = Connective::Down(Mode::First);
    let verb = node(
        NdRule::Elim(up),
        "rang+p0+up",
        "np\\s",
        alloc::vec![lex(1, "rang+1+up", "(np\\s)^>np"), hyp(0, "p0", "np")],
    );
    let clause = node(
        NdRule::Elim(Connective::Under),
        "mary+rang+p0+up",
        "s",
        alloc::vec![lex(0, "mary", "np"), verb],
    );
    let gap = node(
        NdRule::IntroDischarge(up, 0),
        "mary+rang+1+up",
        "s^>np",
        alloc::vec![clause],
    );
    node(
        NdRule::Elim(down),
        "mary+rang+everyone+up",
        "s",
        alloc::vec![gap, lex(2, "everyone", "(s^>np)!>s")],
    )
}

#[test]
fn example_checks() {
    let p = rang_up();
    let seq = check_nd(&p).unwrap();
    assert_eq!(seq.hypotheses.len(), 3);
    assert_eq!(seq.term, t("mary+rang+everyone+up"));
    assert_eq!(p.par_rules(), 1);
}

#[test]
fn axiom_checks() {
    let p = lex(0, "a+1+b", "inf");
    assert_eq!(check_nd(&p).unwrap().term, t("a+1+b"));
}

#[test]
fn broken_concatenation() {
    let p = node(
        NdRule::Elim(Connective::Under),
        "y+x",
        "s",
        alloc::vec![lex(0, "x", "np"), lex(1, "y", "np\\s")],
    );
    let e = check_nd(&p).unwrap_err();
    assert!(e.path.is_empty());
    assert!(matches!(e.kind, NdErrorKind::Term { .. }));
}

#[test]
fn discharge_errors() {
    // Hypothesis never discharged.
    let p = node(
        NdRule::Elim(Connective::Under),
        "p0+y",
        "s",
        alloc::vec![hyp(3, "p0", "np"), lex(0, "y", "np\\s")],
    );
    assert_eq!(check_nd(&p).unwrap_err().kind, NdErrorKind::Undischarged(3));
    // \I needs the hypothesis as a prefix.
    let body = node(
        NdRule::Elim(Connective::Over),
        "y+p0",
        "s",
        alloc::vec![lex(0, "y", "s/np"), hyp(0, "p0", "np")],
    );
    let p = node(
        NdRule::IntroDischarge(Connective::Under, 0),
        "y",
        "np\\s",
        alloc::vec![body.clone()],
    );
    assert_eq!(check_nd(&p).unwrap_err().kind, NdErrorKind::HypothesisPlacement(0));
    let p = node(
        NdRule::IntroDischarge(Connective::Over, 0),
        "y",
        "s/np",
        alloc::vec![body],
    );
    assert!(check_nd(&p).is_ok());
    // Hypothesis words must be fresh.
    let p = node(
        NdRule::IntroDischarge(Connective::Under, 0),
        "y",
        "np\\s",
        alloc::vec![node(
            NdRule::Elim(Connective::Under),
            "y+y",
            "s",
            alloc::vec![hyp(0, "y", "np"), lex(0, "y", "np\\s")],
        )],
    );
    assert_eq!(check_nd(&p).unwrap_err().kind, NdErrorKind::NotFresh(0));
}

#[test]
fn product_elimination() {
    // x:(s/n)/np, y:np•n ⊢ x+y:s
    let body = node(
        NdRule::Elim(Connective::Over),
        "x+p0+p1",
        "s",
        alloc::vec![
            node(
                NdRule::Elim(Connective::Over),
                "x+p0",
                "s/n",
                alloc::vec![lex(0, "x", "(s/n)/np"), hyp(0, "p0", "np")]
            ),
            hyp(1, "p1", "n"),
        ],
    );
    let p = node(
        NdRule::ElimDischarge(Connective::Prod, 0, 1),
        "x+y",
        "s",
        alloc::vec![lex(1, "y", "np*n"), body],
    );
    check_nd(&p).unwrap();
    let net = net_of_nd(&p).unwrap();
    assert_eq!(net.comb.string(), Some(t("x+y")));
    let back = extract(&net.structure, &net.terms).unwrap();
    assert_eq!(check_nd(&back).unwrap(), check_nd(&p).unwrap());
}

#[test]
fn net_of_nd_example() {
    let p = rang_up();
    let net = net_of_nd(&p).unwrap();
    assert_eq!(net.comb.string(), Some(p.term.clone()));
    assert_eq!(net.engine_comb.as_ref().and_then(|c| c.string()), Some(p.term.clone()));
    let logical: Vec<Rule> = net.witness.logical_steps().map(|s| s.rule).collect();
    assert_eq!(logical, [Rule::Up(Mode::First)]);
    net.structure.check().unwrap();
}

#[test]
fn extract_example() {
    let p = rang_up();
    let net = net_of_nd(&p).unwrap();
    let back = extract(&net.structure, &net.terms).unwrap();
    let seq = check_nd(&back).unwrap();
    assert_eq!(seq, p.sequent());
    assert_eq!(back.canonical(), p.canonical());
}

#[test]
fn extract_from_unfolded_net() {
    use crate::proof_structure::unfold;
    let hyps = [f("np"), f("(np\\s)^>np"), f("(s^>np)!>s")];
    let terms = [t("mary"), t("rang+1+up"), t("everyone")];
    let frame = unfold(&hyps, &f("s"));
    let mut found = 0;
    for l in frame.linkings().unwrap() {
        let ps = frame.apply(&l);
        let v = is_proof_net(&ps, &terms, &Acceptance::String(t("mary+rang+everyone+up"))).unwrap();
        if v.is_net() {
            found += 1;
            let p = extract(&ps, &terms).unwrap();
            let seq = check_nd(&p).unwrap();
            assert_eq!(seq.term, t("mary+rang+everyone+up"));
            assert_eq!(seq.goal, f("s"));
        }
    }
    assert_eq!(found, 1);
}

#[test]
fn axiom_round_trip() {
    let p = lex(0, "mary", "np");
    let net = net_of_nd(&p).unwrap();
    assert!(net.structure.links.is_empty());
    assert!(net.witness.steps.is_empty());
    assert_eq!(extract(&net.structure, &net.terms).unwrap(), p);
}
