//! Equivalence transforms `T = id + Σ λ^r T_r` on a matrix algebra, used to
//! manufacture nontrivial Hermitian deformations: the twisted product is
//! `a ⋆ b = T⁻¹(T(a)·T(b))`.

use crate::linalg::ScalarMatrix;
use crate::{FormalScalar, Scalar};

/// A C-linear map on M_k, stored as a k²×k² matrix over Q(i) acting on the
/// row-major vectorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    dim: usize,
    mat: Vec<Scalar>, // (dim²)² entries, row-major
}

impl LinearMap {
    pub fn identity(dim: usize) -> Self {
        let n = dim * dim;
        let mut mat = vec![Scalar::zero(); n * n];
        for i in 0..n {
            mat[i * n + i] = Scalar::one();
        }
        LinearMap { dim, mat }
    }

    pub fn zero(dim: usize) -> Self {
        let n = dim * dim;
        LinearMap { dim, mat: vec![Scalar::zero(); n * n] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.mat[i * self.dim * self.dim + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: Scalar) {
        self.mat[i * self.dim * self.dim + j] = v;
    }

    /// The map `a ↦ l·a·r` for fixed matrices l, r over Q(i).
    pub fn sandwich(l: &[Scalar], r: &[Scalar], dim: usize) -> Self {
        let mut out = Self::zero(dim);
        // (l a r)_{ij} = Σ_{pq} l_{ip} a_{pq} r_{qj}
        for i in 0..dim {
            for j in 0..dim {
                for p in 0..dim {
                    for q in 0..dim {
                        let c = &l[i * dim + p] * &r[q * dim + j];
                        let row = i * dim + j;
                        let col = p * dim + q;
                        let cur = out.entry(row, col).clone();
                        out.set_entry(row, col, &cur + &c);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        LinearMap {
            dim: self.dim,
            mat: self.mat.iter().zip(&rhs.mat).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LinearMap { dim: self.dim, mat: self.mat.iter().map(|a| -a).collect() }
    }

    /// Composition `self ∘ rhs` as maps.
    pub fn compose(&self, rhs: &Self) -> Self {
        let n = self.dim * self.dim;
        let mut out = Self::zero(self.dim);
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.entry(i, j).clone();
                    out.set_entry(i, j, &cur + &(a * b));
                }
            }
        }
        out
    }

    /// Applies the map to a constant matrix over Q(i).
    pub fn apply_gauss(&self, a: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim * self.dim;
        (0..n)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..n {
                    let e = self.entry(i, j);
                    if !e.is_zero() && !a[j].is_zero() {
                        acc = &acc + &(e * &a[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Checks `T_r(a*) = T_r(a)*` on the matrix units.
    pub fn is_star_compatible(&self) -> bool {
        let d = self.dim;
        for p in 0..d {
            for q in 0..d {
                let mut unit = vec![Scalar::zero(); d * d];
                unit[p * d + q] = Scalar::one();
                // (e_pq)* = e_qp.
                let mut unit_star = vec![Scalar::zero(); d * d];
                unit_star[q * d + p] = Scalar::one();
                let lhs = self.apply_gauss(&unit_star);
                let image = self.apply_gauss(&unit);
                // rhs = (T e_pq)*: conjugate transpose of the image.
                let mut rhs = vec![Scalar::zero(); d * d];
                for i in 0..d {
                    for j in 0..d {
                        rhs[j * d + i] = image[i * d + j].conj();
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// `T = id + Σ_{r≥1} λ^r T_r`, invertible order by order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceTransform {
    dim: usize,
    order: usize,
    /// maps[r-1] is T_r.
    corrections: Vec<LinearMap>,
}

impl EquivalenceTransform {
    pub fn identity(dim: usize, order: usize) -> Self {
        EquivalenceTransform { dim, order, corrections: vec![LinearMap::zero(dim); order] }
    }

    pub fn new(dim: usize, order: usize, corrections: Vec<LinearMap>) -> Self {
        let mut c = corrections;
        c.resize(order, LinearMap::zero(dim));
        c.truncate(order);
        EquivalenceTransform { dim, order, corrections: c }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.corrections.iter().all(|m| *m == LinearMap::zero(self.dim))
    }

    fn map_at(&self, r: usize) -> LinearMap {
        if r == 0 {
            LinearMap::identity(self.dim)
        } else {
            self.corrections[r - 1].clone()
        }
    }

    /// The correction map T_r for r ≥ 1.
    pub fn correction(&self, r: usize) -> &LinearMap {
        &self.corrections[r - 1]
    }

    /// Applies T to a matrix with series entries, λ-linearly.
    pub fn apply(&self, a: &ScalarMatrix) -> ScalarMatrix {
        let d = self.dim;
        assert_eq!((a.rows(), a.cols()), (d, d));
        let n = self.order;
        // Decompose a by λ-order, apply each T_r, recombine.
        let mut out_coeffs: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); d * d]; n + 1];
        for s in 0..=n {
            let mut a_s = vec![Scalar::zero(); d * d];
            let mut nonzero = false;
            for i in 0..d {
                for j in 0..d {
                    let c = a.get(i, j).coeff(s).clone();
                    if !c.is_zero() {
                        nonzero = true;
                    }
                    a_s[i * d + j] = c;
                }
            }
            if !nonzero {
                continue;
            }
            for r in 0..=n - s {
                let mapped = self.map_at(r).apply_gauss(&a_s);
                for (idx, v) in mapped.into_iter().enumerate() {
                    if !v.is_zero() {
                        out_coeffs[r + s][idx] = &out_coeffs[r + s][idx] + &v;
                    }
                }
            }
        }
        ScalarMatrix::from_fn(d, d, n, |i, j| {
            FormalScalar::from_coeffs(
                (0..=n).map(|r| out_coeffs[r][i * d + j].clone()).collect(),
                n,
            )
        })
    }

    /// The order-by-order inverse: `S₀ = id`, `S_m = −Σ_{r=1}^m T_r S_{m−r}`.
    pub fn inverse(&self) -> Self {
        let mut inv: Vec<LinearMap> = Vec::with_capacity(self.order);
        for m in 1..=self.order {
            let mut s_m = LinearMap::zero(self.dim);
            for r in 1..=m {
                let s_prev = if m - r == 0 {
                    LinearMap::identity(self.dim)
                } else {
                    inv[m - r - 1].clone()
                };
                s_m = s_m.add(&self.corrections[r - 1].compose(&s_prev).neg());
            }
            inv.push(s_m);
        }
        EquivalenceTransform { dim: self.dim, order: self.order, corrections: inv }
    }

    /// Composition `(self ∘ rhs)(a) = self(rhs(a))` as formal series of maps.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut corrections = Vec::with_capacity(self.order);
        for m in 1..=self.order {
            // Identity∘identity only contributes at m = 0, so the full
            // convolution is exactly the order-m correction.
            let mut c = LinearMap::zero(self.dim);
            for r in 0..=m {
                c = c.add(&self.map_at(r).compose(&rhs.map_at(m - r)));
            }
            corrections.push(c);
        }
        EquivalenceTransform { dim: self.dim, order: self.order, corrections }
    }

    /// `T(a*) = T(a)*` on a spanning set (the matrix units, each order).
    pub fn is_star_compatible(&self) -> bool {
        self.corrections.iter().all(LinearMap::is_star_compatible)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn diag_h() -> Vec<Scalar> {
        vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()]
    }

    fn h_twist(order: usize) -> EquivalenceTransform {
        let h = diag_h();
        EquivalenceTransform::new(2, order, vec![LinearMap::sandwich(&h, &h, 2)])
    }

    #[test]
    fn inverse_composes_to_identity() {
        let t = h_twist(6);
        let tinv = t.inverse();
        let comp = t.compose(&tinv);
        assert!(comp.is_identity());
        let comp2 = tinv.compose(&t);
        assert!(comp2.is_identity());
    }

    #[test]
    fn sandwich_is_star_compatible_for_hermitian() {
        assert!(h_twist(6).is_star_compatible());
        // A non-Hermitian sandwich is not star compatible.
        let g = vec![Scalar::zero(), Scalar::one(), Scalar::zero(), Scalar::zero()];
        let t = EquivalenceTransform::new(2, 6, vec![LinearMap::sandwich(&g, &g, 2)]);
        assert!(!t.is_star_compatible());
    }

    #[test]
    fn apply_matches_hand_computation() {
        // T(e₁₁) = (1+λ)e₁₁ for the h = diag(1,0) sandwich twist.
        let t = h_twist(6);
        let mut e11 = ScalarMatrix::zero(2, 2, 6);
        e11.set(0, 0, FormalScalar::one(6));
        let image = t.apply(&e11);
        let expect = &FormalScalar::one(6) + &FormalScalar::lambda(6);
        assert_eq!(image.get(0, 0), &expect);
        assert!(image.get(0, 1).is_zero());
        assert!(image.get(1, 0).is_zero());
        assert!(image.get(1, 1).is_zero());
        let _ = rat(1, 1);
    }
}
