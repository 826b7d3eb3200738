//! Exhaustive enumeration of Lambek sequents `A1, …, An ⊢ C`.
//!
//! A sequent is a skeleton (the connective structure of each formula) plus
//! an atom at each leaf. Only atom-balanced assignments can be derivable:
//! every atom must occur as often with positive as with negative polarity.
//! [`for_each_balanced`] enumerates exactly those; the others are counted by
//! [`sequent_count`] and rejected by both deciders on the count alone.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Connective, Formula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Node(Connective, Box<Shape>, Box<Shape>),
}

const OPS: [Connective; 3] = [Connective::Under, Connective::Over, Connective::Prod];

impl Shape {
    pub fn connectives(&self) -> u32 {
        match self {
            Shape::Leaf => 0,
            Shape::Node(_, l, r) => 1 + l.connectives() + r.connectives(),
        }
    }

    fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(_, l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Push the polarity of each leaf, left to right; `true` is positive.
    fn polarities(&self, positive: bool, out: &mut Vec<bool>) {
        match self {
            Shape::Leaf => out.push(positive),
            Shape::Node(op, l, r) => {
                let (pl, pr) = match op {
                    Connective::Under => (!positive, positive),
                    Connective::Over => (positive, !positive),
                    _ => (positive, positive),
                };
                l.polarities(pl, out);
                r.polarities(pr, out);
            }
        }
    }

    fn fill(&self, atoms: &[Formula], leaves: &mut impl Iterator<Item = usize>) -> Formula {
        match self {
            Shape::Leaf => atoms[leaves.next().expect("enough leaves")].clone(),
            Shape::Node(op, l, r) => {
                let l = l.fill(atoms, leaves);
                let r = r.fill(atoms, leaves);
                Formula::binary(*op, l, r)
            }
        }
    }
}

/// All shapes with exactly `n` connectives over `\`, `/`, `•`.
pub fn shapes(n: u32) -> Vec<Shape> {
    if n == 0 {
        return alloc::vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for left in 0..n {
        let ls = shapes(left);
        let rs = shapes(n - 1 - left);
        for op in OPS {
            for l in &ls {
                for r in &rs {
                    out.push(Shape::Node(op, Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
    }
    out
}

/// Every skeleton with at most `max_hypotheses` hypotheses and at most
/// `bound` connectives in total; the goal shape comes last.
pub fn skeletons(bound: u32, max_hypotheses: usize) -> Vec<Vec<Shape>> {
    let by_size: Vec<Vec<Shape>> = (0..=bound).map(shapes).collect();
    let mut out = Vec::new();
    for n in 0..=max_hypotheses {
        let mut current = Vec::new();
        extend(&by_size, n + 1, bound, &mut current, &mut out);
    }
    out
}

fn extend(by_size: &[Vec<Shape>], slots: usize, left: u32, current: &mut Vec<Shape>, out: &mut Vec<Vec<Shape>>) {
    if current.len() == slots {
        out.push(current.clone());
        return;
    }
    for size in 0..=left {
        for s in &by_size[size as usize] {
            current.push(s.clone());
            extend(by_size, slots, left - size, current, out);
            current.pop();
        }
    }
}

/// Number of sequents over `atoms` atoms, balanced or not.
pub fn sequent_count(bound: u32, max_hypotheses: usize, atoms: u32) -> u128 {
    skeletons(bound, max_hypotheses)
        .iter()
        .map(|sk| (atoms as u128).pow(sk.iter().map(|s| s.leaves() as u32).sum()))
        .sum()
}

/// Call `f(hypotheses, goal)` for every atom-balanced filling of `skeleton`.
pub fn for_each_balanced(skeleton: &[Shape], atoms: &[Formula], mut f: impl FnMut(&[Formula], &Formula)) {
    let (goal, hyps) = skeleton.split_last().expect("goal shape");
    let mut pol = Vec::new();
    for h in hyps {
        h.polarities(false, &mut pol);
    }
    goal.polarities(true, &mut pol);
    let pos: Vec<usize> = (0..pol.len()).filter(|&i| pol[i]).collect();
    let neg: Vec<usize> = (0..pol.len()).filter(|&i| !pol[i]).collect();
    if pos.len() != neg.len() {
        return;
    }
    let mut assign = alloc::vec![0usize; pol.len()];
    let mut counts = alloc::vec![0usize; atoms.len()];
    let mut emit = |assign: &[usize]| {
        let mut it = assign.iter().copied();
        let hs: Vec<Formula> = hyps.iter().map(|h| h.fill(atoms, &mut it)).collect();
        let g = goal.fill(atoms, &mut it);
        f(&hs, &g);
    };
    positives(0, &pos, &neg, &mut assign, &mut counts, &mut emit);
}

fn positives(
    k: usize,
    pos: &[usize],
    neg: &[usize],
    assign: &mut [usize],
    counts: &mut [usize],
    emit: &mut impl FnMut(&[usize]),
) {
    if k == pos.len() {
        negatives(0, neg, assign, counts, emit);
        return;
    }
    for a in 0..counts.len() {
        assign[pos[k]] = a;
        counts[a] += 1;
        positives(k + 1, pos, neg, assign, counts, emit);
        counts[a] -= 1;
    }
}

fn negatives(k: usize, neg: &[usize], assign: &mut [usize], counts: &mut [usize], emit: &mut impl FnMut(&[usize])) {
    if k == neg.len() {
        emit(assign);
        return;
    }
    for a in 0..counts.len() {
        if counts[a] == 0 {
            continue;
        }
        assign[neg[k]] = a;
        counts[a] -= 1;
        negatives(k + 1, neg, assign, counts, emit);
        counts[a] += 1;
    }
}

fn random_shape<R: Rng>(rng: &mut R, n: u32) -> Shape {
    if n == 0 {
        return Shape::Leaf;
    }
    let left = rng.gen_range(0..n);
    let op = *OPS.choose(rng).expect("ops");
    Shape::Node(
        op,
        Box::new(random_shape(rng, left)),
        Box::new(random_shape(rng, n - 1 - left)),
    )
}

/// A random atom-balanced sequent with `hypotheses` hypotheses and exactly
/// `connectives` connectives, or `None` if the drawn skeleton has unequal
/// numbers of positive and negative leaves.
pub fn random_balanced<R: Rng>(
    rng: &mut R,
    hypotheses: usize,
    connectives: u32,
    atoms: &[Formula],
) -> Option<(Vec<Formula>, Formula)> {
    let mut sizes = alloc::vec![0u32; hypotheses + 1];
    for _ in 0..connectives {
        sizes[rng.gen_range(0..=hypotheses)] += 1;
    }
    let skeleton: Vec<Shape> = sizes.iter().map(|&n| random_shape(rng, n)).collect();
    let (goal, hyps) = skeleton.split_last().expect("goal shape");
    let mut pol = Vec::new();
    for h in hyps {
        h.polarities(false, &mut pol);
    }
    goal.polarities(true, &mut pol);
    let pos: Vec<usize> = (0..pol.len()).filter(|&i| pol[i]).collect();
    let mut neg: Vec<usize> = (0..pol.len()).filter(|&i| !pol[i]).collect();
    if pos.len() != neg.len() {
        return None;
    }
    neg.shuffle(rng);
    let mut assign = alloc::vec![0usize; pol.len()];
    for (&p, &n) in pos.iter().zip(&neg) {
        let a = rng.gen_range(0..atoms.len());
        assign[p] = a;
        assign[n] = a;
    }
    let mut it = assign.into_iter();
    let hs = hyps.iter().map(|h| h.fill(atoms, &mut it)).collect();
    Some((hs, goal.fill(atoms, &mut it)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Signature;
    use rand::rngs::SmallRng;
    use rand::SeedableRng;

    #[test]
    fn random_sequents_have_the_requested_size() {
        let sig = Signature::parse("a 0\nb 0\n").unwrap();
        let atoms: Vec<Formula> = sig.iter().map(|(a, s)| Formula::atom(a.clone(), s)).collect();
        let mut rng = SmallRng::seed_from_u64(1);
        let mut got = 0;
        for _ in 0..200 {
            if let Some((h, g)) = random_balanced(&mut rng, 3, 4, &atoms) {
                got += 1;
                assert_eq!(h.len(), 3);
                let n: u32 = h.iter().chain([&g]).map(|f| f.connective_count()).sum();
                assert_eq!(n, 4);
            }
        }
        assert!(got > 0);
    }

    #[test]
    fn shape_counts_are_catalan_times_ops() {
        let n: Vec<usize> = (0..5).map(|c| shapes(c).len()).collect();
        assert_eq!(n, [1, 3, 18, 135, 1134]);
    }

    #[test]
    fn counts() {
        // Two formulas at most, one connective at most: 3 + 27 for ⊢ C,
        // 9 + 2 * 81 for A ⊢ C.
        assert_eq!(sequent_count(1, 1, 3), 3 + 27 + 9 + 162);
        let sig = Signature::parse("a 0\nb 0\n").unwrap();
        let atoms: Vec<Formula> = sig.iter().map(|(a, s)| Formula::atom(a.clone(), s)).collect();
        let mut n = 0;
        for sk in skeletons(1, 1) {
            for_each_balanced(&sk, &atoms, |h, g| {
                n += 1;
                let mut leaves = h.len() + 1;
                leaves += h
                    .iter()
                    .chain([g])
                    .map(|f| f.connective_count() as usize)
                    .sum::<usize>();
                assert_eq!(leaves % 2, 0);
            });
        }
        // a ⊢ a, b ⊢ b, and ⊢ a\a, ⊢ a/a, ⊢ b\b, ⊢ b/b.
        assert_eq!(n, 6);
    }
}
