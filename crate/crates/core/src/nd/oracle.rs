//! Cut-free backward proof search for the Lambek calculus with empty
//! antecedents, used as an independent check on the proof-net decision
//! procedure for formulas over `/`, `\` and `•`.
//!
//! Rules, read bottom-up:
//!
//! ```text
//! Γ ⊢ A\C  from  A,Γ ⊢ C          Γ1,Δ,A\C,Γ2 ⊢ D  from  Δ ⊢ A  and  Γ1,C,Γ2 ⊢ D
//! Γ ⊢ C/B  from  Γ,B ⊢ C          Γ1,C/B,Δ,Γ2 ⊢ D  from  Δ ⊢ B  and  Γ1,C,Γ2 ⊢ D
//! Γ1,Γ2 ⊢ A•B  from  Γ1 ⊢ A and Γ2 ⊢ B      Γ1,A•B,Γ2 ⊢ D  from  Γ1,A,B,Γ2 ⊢ D
//! ```
//!
//! Every premiss has fewer connectives than the conclusion, so the search
//! terminates. Results are memoized on interned sequents.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::formula::{Connective, Formula, Kind};
use crate::terms::Symbol;

type Id = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    Atom(Id),
    Under(Id, Id),
    Over(Id, Id),
    Prod(Id, Id),
}

/// A prover with its memo table; reuse it across queries.
#[derive(Debug, Default)]
pub struct Lambek {
    shapes: Vec<Shape>,
    ids: BTreeMap<Shape, Id>,
    atoms: BTreeMap<Symbol, Id>,
    memo: BTreeMap<(Vec<Id>, Id), bool>,
}

/// The formula is outside the Lambek fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotLambek;

impl Lambek {
    pub fn new() -> Lambek {
        Lambek::default()
    }

    fn intern(&mut self, f: &Formula) -> Result<Id, NotLambek> {
        let shape = match f.kind() {
            Kind::Atom(a) => {
                let n = self.atoms.len() as Id;
                Shape::Atom(*self.atoms.entry(a.clone()).or_insert(n))
            }
            Kind::Binary(op, l, r) => {
                let l = self.intern(l)?;
                let r = self.intern(r)?;
                match op {
                    Connective::Under => Shape::Under(l, r),
                    Connective::Over => Shape::Over(l, r),
                    Connective::Prod => Shape::Prod(l, r),
                    _ => return Err(NotLambek),
                }
            }
        };
        if let Some(&id) = self.ids.get(&shape) {
            return Ok(id);
        }
        let id = self.shapes.len() as Id;
        self.shapes.push(shape);
        self.ids.insert(shape, id);
        Ok(id)
    }

    /// Number of memoized sequents.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear(&mut self) {
        self.memo.clear();
    }

    /// Decide `hypotheses ⊢ goal`.
    pub fn derivable(&mut self, hypotheses: &[Formula], goal: &Formula) -> Result<bool, NotLambek> {
        let gamma = hypotheses
            .iter()
            .map(|h| self.intern(h))
            .collect::<Result<Vec<_>, _>>()?;
        let c = self.intern(goal)?;
        if !self.balanced(&gamma, c) {
            return Ok(false);
        }
        Ok(self.prove(&gamma, c))
    }

    /// Each atom must occur as often positively as negatively.
    fn balanced(&self, gamma: &[Id], c: Id) -> bool {
        let mut count: BTreeMap<Id, i32> = BTreeMap::new();
        for &g in gamma {
            self.polarity(g, -1, &mut count);
        }
        self.polarity(c, 1, &mut count);
        count.values().all(|&n| n == 0)
    }

    fn polarity(&self, f: Id, sign: i32, count: &mut BTreeMap<Id, i32>) {
        match self.shapes[f as usize] {
            Shape::Atom(a) => *count.entry(a).or_insert(0) += sign,
            Shape::Under(a, c) => {
                self.polarity(a, -sign, count);
                self.polarity(c, sign, count);
            }
            Shape::Over(c, b) => {
                self.polarity(c, sign, count);
                self.polarity(b, -sign, count);
            }
            Shape::Prod(a, b) => {
                self.polarity(a, sign, count);
                self.polarity(b, sign, count);
            }
        }
    }

    fn prove(&mut self, gamma: &[Id], c: Id) -> bool {
        let key = (gamma.to_vec(), c);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = self.search(gamma, c);
        self.memo.insert(key, r);
        r
    }

    fn search(&mut self, gamma: &[Id], c: Id) -> bool {
        // Invertible rules first.
        match self.shapes[c as usize] {
            Shape::Under(a, c2) => {
                let mut g = Vec::with_capacity(gamma.len() + 1);
                g.push(a);
                g.extend_from_slice(gamma);
                return self.prove(&g, c2);
            }
            Shape::Over(c2, b) => {
                let mut g = gamma.to_vec();
                g.push(b);
                return self.prove(&g, c2);
            }
            _ => {}
        }
        if let Some(i) = gamma
            .iter()
            .position(|&g| matches!(self.shapes[g as usize], Shape::Prod(..)))
        {
            let Shape::Prod(a, b) = self.shapes[gamma[i] as usize] else {
                unreachable!()
            };
            let mut g = Vec::with_capacity(gamma.len() + 1);
            g.extend_from_slice(&gamma[..i]);
            g.push(a);
            g.push(b);
            g.extend_from_slice(&gamma[i + 1..]);
            return self.prove(&g, c);
        }
        match self.shapes[c as usize] {
            Shape::Atom(_) if gamma.len() == 1 && gamma[0] == c => return true,
            Shape::Prod(a, b) => {
                for split in 0..=gamma.len() {
                    if self.prove(&gamma[..split], a) && self.prove(&gamma[split..], b) {
                        return true;
                    }
                }
            }
            _ => {}
        }
        // Left rules for the slashes.
        for i in 0..gamma.len() {
            match self.shapes[gamma[i] as usize] {
                Shape::Under(a, c2) => {
                    // Δ = gamma[j..i]
                    for j in (0..=i).rev() {
                        if self.prove(&gamma[j..i], a) {
                            let mut g = Vec::with_capacity(gamma.len());
                            g.extend_from_slice(&gamma[..j]);
                            g.push(c2);
                            g.extend_from_slice(&gamma[i + 1..]);
                            if self.prove(&g, c) {
                                return true;
                            }
                        }
                    }
                }
                Shape::Over(c2, b) => {
                    // Δ = gamma[i+1..j]
                    for j in i + 1..=gamma.len() {
                        if self.prove(&gamma[i + 1..j], b) {
                            let mut g = Vec::with_capacity(gamma.len());
                            g.extend_from_slice(&gamma[..i]);
                            g.push(c2);
                            g.extend_from_slice(&gamma[j..]);
                            if self.prove(&g, c) {
                                return true;
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Signature;

    fn f(s: &str) -> Formula {
        let sig = Signature::parse("np 0\ns 0\nn 0\na 0\nb 0\n").unwrap();
        Formula::parse(s, &sig).unwrap()
    }

    fn d(h: &[&str], g: &str) -> bool {
        let h: Vec<Formula> = h.iter().map(|x| f(x)).collect();
        Lambek::new().derivable(&h, &f(g)).unwrap()
    }

    #[test]
    fn basics() {
        assert!(d(&["np", "np\\s"], "s"));
        assert!(!d(&["np"], "s"));
        assert!(d(&["(a/b)*b"], "a"));
        assert!(!d(&["np\\s", "np"], "s"));
        assert!(d(&["np"], "s/(np\\s)"));
        assert!(d(&["s/np", "np/n"], "s/n"));
        assert!(d(&[], "np\\np"));
        assert!(d(&[], "(np/np)/(np/np)"));
        assert!(!d(&["np*n"], "n*np"));
    }

    #[test]
    fn rejects_discontinuous() {
        let sig = Signature::parse("np 0\ns 0\n").unwrap();
        let up = Formula::parse("s^>np", &sig).unwrap();
        assert_eq!(Lambek::new().derivable(core::slice::from_ref(&up), &up), Err(NotLambek));
    }
}
