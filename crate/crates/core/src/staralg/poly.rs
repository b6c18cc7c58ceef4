//! Polynomial elements: finitely supported monomial maps over a fixed set of
//! commuting generators, with truncated-series coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::{FormalScalar, Scalar};

/// Exponent vector over the algebra's generators.
pub type MultiIndex = Vec<u32>;

/// A polynomial with [`FormalScalar`] coefficients. Zero coefficients are
/// never stored; `gens` and `order` are fixed per algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    gens: usize,
    order: usize,
    terms: BTreeMap<MultiIndex, FormalScalar>,
}

impl Poly {
    pub fn zero(gens: usize, order: usize) -> Self {
        Poly { gens, order, terms: BTreeMap::new() }
    }

    pub fn constant(c: FormalScalar, gens: usize) -> Self {
        let order = c.order();
        let mut p = Poly::zero(gens, order);
        p.add_term(vec![0; gens], c);
        p
    }

    /// The monomial `gen^1` with unit coefficient.
    pub fn generator(idx: usize, gens: usize, order: usize) -> Self {
        let mut m = vec![0; gens];
        m[idx] = 1;
        let mut p = Poly::zero(gens, order);
        p.add_term(m, FormalScalar::one(order));
        p
    }

    pub fn monomial(exponents: MultiIndex, coeff: FormalScalar, gens: usize) -> Self {
        assert_eq!(exponents.len(), gens);
        let order = coeff.order();
        let mut p = Poly::zero(gens, order);
        p.add_term(exponents, coeff);
        p
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &FormalScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> FormalScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| FormalScalar::zero(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn add_term(&mut self, m: MultiIndex, c: FormalScalar) {
        assert_eq!(m.len(), self.gens);
        assert_eq!(c.order(), self.order);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            gens: self.gens,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &FormalScalar) -> Self {
        let mut out = Poly::zero(self.gens, self.order);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn scale_gauss(&self, s: &Scalar) -> Self {
        let mut out = Poly::zero(self.gens, self.order);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c.scale(s));
        }
        out
    }

    /// Commutative (undeformed) product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Poly::zero(self.gens, self.order);
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                let m: MultiIndex = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Partial derivative with respect to one generator.
    pub fn derivative(&self, gen: usize) -> Self {
        let mut out = Poly::zero(self.gens, self.order);
        for (m, c) in self.terms() {
            if m[gen] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[gen] -= 1;
            let factor = Scalar::from_ratio(crate::rat(m[gen] as i64, 1));
            out.add_term(m2, c.scale(&factor));
        }
        out
    }

    /// Iterated derivative `∂^k` with respect to one generator.
    pub fn derivative_n(&self, gen: usize, k: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            if p.is_zero() {
                break;
            }
            p = p.derivative(gen);
        }
        p
    }

    /// Coefficientwise conjugation (generators treated as real symbols).
    pub fn conj_coeffs(&self) -> Self {
        Poly {
            gens: self.gens,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Conjugation that also swaps generator pairs, used for the Wick model
    /// where the two generators are complex conjugates of each other.
    pub fn conj_swap(&self, swap: &[usize]) -> Self {
        let mut out = Poly::zero(self.gens, self.order);
        for (m, c) in self.terms() {
            let mut m2 = vec![0u32; self.gens];
            for (i, &e) in m.iter().enumerate() {
                m2[swap[i]] = e;
            }
            out.add_term(m2, c.conj());
        }
        out
    }

    /// Minimal λ-valuation over all coefficients; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.values().filter_map(FormalScalar::valuation).min()
    }

    /// Keeps only the λ^r coefficient of every term, shifted down to order 0.
    pub fn lambda_coeff(&self, r: usize) -> Self {
        let mut out = Poly::zero(self.gens, self.order);
        for (m, c) in self.terms() {
            out.add_term(
                m.clone(),
                FormalScalar::constant(c.coeff(r).clone(), self.order),
            );
        }
        out
    }

    /// Multiplies by λ^r.
    pub fn shift_up(&self, r: usize) -> Self {
        let mut out = Poly::zero(self.gens, self.order);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c.shift_up(r));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]")?;
            for (i, &e) in m.iter().enumerate() {
                if e == 1 {
                    write!(f, "·g{i}")?;
                } else if e > 1 {
                    write!(f, "·g{i}^{e}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Enumerates all exponent vectors of the given length with total degree
/// exactly `deg`, in lexicographic order.
pub fn exponents_of_degree(gens: usize, deg: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; gens];
    fill(&mut out, &mut cur, 0, deg);
    out
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut MultiIndex, pos: usize, remaining: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        fill(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}
