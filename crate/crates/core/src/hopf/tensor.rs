//! Elements of tensor powers of the free or quotient algebra: finite maps
//! from word tuples to rational coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::freealg::{format_scalar, GeneratorSet, NcPoly, Scalar, Word};

/// An element of the `arity`-fold tensor power. Tuple components are kept in
/// normal form whenever the value represents a quotient-algebra tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    arity: usize,
    terms: BTreeMap<Vec<Word>, Scalar>,
}

impl TensorPoly {
    pub fn new(arity: usize) -> TensorPoly {
        assert!(arity >= 1);
        TensorPoly { arity, terms: BTreeMap::new() }
    }

    /// `1 ⊗ 1 ⊗ .. ⊗ 1`.
    pub fn unit(arity: usize) -> TensorPoly {
        let mut t = TensorPoly::new(arity);
        t.add_term(vec![Word::empty(); arity], crate::freealg::s_int(1));
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<Word>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, tuple: &[Word]) -> Scalar {
        self.terms.get(tuple).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, tuple: Vec<Word>, c: Scalar) {
        assert_eq!(tuple.len(), self.arity, "tuple arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(tuple) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorPoly, c: &Scalar) {
        assert_eq!(self.arity, other.arity);
        if c.is_zero() {
            return;
        }
        for (tuple, k) in other.terms() {
            self.add_term(tuple.clone(), k.clone() * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        let mut t = TensorPoly::new(self.arity);
        t.add_scaled(self, c);
        t
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        let mut t = self.clone();
        t.add_scaled(other, &crate::freealg::s_int(-1));
        t
    }

    /// Outer product of polynomial factors, one per slot.
    pub fn from_factors(factors: &[NcPoly]) -> TensorPoly {
        let arity = factors.len();
        let mut t = TensorPoly::new(arity);
        let mut tuple: Vec<Word> = Vec::with_capacity(arity);
        fn expand(
            factors: &[NcPoly],
            at: usize,
            coeff: Scalar,
            tuple: &mut Vec<Word>,
            out: &mut TensorPoly,
        ) {
            if coeff.is_zero() {
                return;
            }
            if at == factors.len() {
                out.add_term(tuple.clone(), coeff);
                return;
            }
            for (w, c) in factors[at].terms() {
                tuple.push(w.clone());
                expand(factors, at + 1, coeff.clone() * c, tuple, out);
                tuple.pop();
            }
        }
        expand(factors, 0, Scalar::one(), &mut tuple, &mut t);
        t
    }

    /// Arity-1 tensors are plain polynomials.
    pub fn to_poly(&self) -> NcPoly {
        assert_eq!(self.arity, 1);
        let mut p = NcPoly::zero();
        for (tuple, c) in self.terms() {
            p.add_term(tuple[0].clone(), c.clone());
        }
        p
    }

    pub fn display(&self, gens: &GeneratorSet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (tuple, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !abs.is_one() {
                out.push_str(&format_scalar(&abs));
                out.push(' ');
            }
            let comps: Vec<String> = tuple
                .iter()
                .map(|w| if w.is_empty() { "1".to_string() } else { w.display(gens) })
                .collect();
            out.push_str(&comps.join(" (x) "));
        }
        out
    }
}
