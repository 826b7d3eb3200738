//! Properties over generated proofs and formulas. Generators are seeded
//! from proptest so failures shrink to a seed.

use dcalc_core::contraction::{all_redexes, apply, contract};
use dcalc_core::gen::sequents::{for_each_balanced, skeletons};
use dcalc_core::gen::{random_formula, random_proof, standard_signature, GenConfig};
use dcalc_core::nd::oracle::Lambek;
use dcalc_core::nd::{check_nd, extract, net_of_nd, NdProof};
use dcalc_core::prover::{derivable, Problem};
use dcalc_core::{Formula, StringTerm};
use proptest::prelude::*;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

fn proof(seed: u64, lambek: bool) -> NdProof {
    let mut rng = SmallRng::seed_from_u64(seed);
    let mut cfg = GenConfig::standard(6);
    if lambek {
        cfg.lambek = true;
        cfg.atoms.retain(|a| a.sort().get() == 0);
    }
    random_proof(&mut rng, &cfg, true)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn round_trip(seed in any::<u64>()) {
        let p = proof(seed, false);
        let sequent = check_nd(&p).unwrap();
        let net = net_of_nd(&p).unwrap();
        prop_assert_eq!(net.comb.string(), Some(p.term.clone()));
        prop_assert_eq!(net.engine_comb.as_ref().and_then(|c| c.string()), Some(p.term.clone()));
        let q = extract(&net.structure, &net.terms).unwrap();
        prop_assert_eq!(check_nd(&q).unwrap(), sequent);
    }

    #[test]
    fn one_logical_step_per_par_rule(seed in any::<u64>()) {
        let p = proof(seed, false);
        let net = net_of_nd(&p).unwrap();
        prop_assert_eq!(net.engine.logical_steps().count(), p.par_rules());
        prop_assert_eq!(net.witness.logical_steps().count(), p.par_rules());
    }

    #[test]
    fn any_order_reaches_the_same_comb(seed in any::<u64>(), order in any::<u64>()) {
        let p = proof(seed, false);
        let net = net_of_nd(&p).unwrap();
        let mut rng = SmallRng::seed_from_u64(order);
        let mut a = net.aps.clone();
        let mut steps = 0;
        loop {
            let rs = all_redexes(&a);
            if rs.is_empty() {
                break;
            }
            apply(&mut a, rs[rng.gen_range(0..rs.len())]).unwrap();
            steps += 1;
        }
        prop_assert!(steps <= net.aps.len());
        prop_assert_eq!(a.final_comb(), Some(&net.comb));
    }

    #[test]
    fn steps_are_bounded_by_elements(seed in any::<u64>()) {
        let p = proof(seed, false);
        let mut a = net_of_nd(&p).unwrap().aps;
        let n = a.len();
        let t = contract(&mut a);
        prop_assert!(t.steps.len() <= n);
        prop_assert!(t.steps.iter().all(|s| s.scanned <= n));
    }

    #[test]
    fn lambek_proofs_are_lambek_derivable(seed in any::<u64>()) {
        let p = proof(seed, true);
        let s = check_nd(&p).unwrap();
        // Lexical order is not word order: sort the hypotheses by where their
        // word occurs in the conclusion.
        let mut placed: Vec<(usize, Formula)> = s
            .hypotheses
            .iter()
            .map(|(t, f)| (s.term.find(t).unwrap(), f.clone()))
            .collect();
        placed.sort_by_key(|(at, _)| *at);
        let hyps: Vec<Formula> = placed.into_iter().map(|(_, f)| f).collect();
        prop_assert!(Lambek::new().derivable(&hyps, &s.goal).unwrap());
    }

    #[test]
    fn sorts_follow_the_table(seed in any::<u64>()) {
        let mut rng = SmallRng::seed_from_u64(seed);
        let atoms = GenConfig::standard(1).atoms;
        let f = random_formula(&mut rng, &atoms, 6, false);
        fn check(f: &Formula) -> bool {
            match f.as_binary() {
                None => true,
                Some((c, l, r)) => f.raw_sort() == c.sort(l.raw_sort(), r.raw_sort()) && check(l) && check(r),
            }
        }
        prop_assert!(check(&f));
        prop_assert!(f.raw_sort() >= 0);
    }
}

#[test]
fn small_lambek_sequents_agree_with_the_oracle() {
    let sig = standard_signature();
    let atoms: Vec<Formula> = ["np", "n", "s"].iter().map(|a| sig.atom(a).unwrap()).collect();
    let mut lambek = Lambek::new();
    let mut n = 0;
    for sk in skeletons(3, 3) {
        for_each_balanced(&sk, &atoms, |h, g| {
            n += 1;
            let terms = (0..h.len()).map(|i| StringTerm::word(format!("w{}", i))).collect();
            let p = Problem::concatenated(h.to_vec(), terms, g.clone()).unwrap();
            assert_eq!(
                derivable(&p).unwrap(),
                lambek.derivable(h, g).unwrap(),
                "{:?} |- {}",
                h,
                g
            );
        });
    }
    assert!(n > 10_000);
}
