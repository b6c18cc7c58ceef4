//! Matrices with entries in a star algebra: M_n(A) with the usual product
//! over ⋆ and the conjugate-transpose involution. Houses projections,
//! transitions and fullness witnesses.

use crate::linalg::ScalarMatrix;
use crate::{FormalScalar, Scalar};

use super::{Algebra, AlgebraElement, AlgebraKind, StarError};

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOverAlgebra {
    algebra: Algebra,
    rows: usize,
    cols: usize,
    entries: Vec<AlgebraElement>,
}

impl MatrixOverAlgebra {
    pub fn zero(algebra: &Algebra, rows: usize, cols: usize) -> Self {
        MatrixOverAlgebra {
            algebra: algebra.clone(),
            rows,
            cols,
            entries: vec![algebra.zero(); rows * cols],
        }
    }

    pub fn identity(algebra: &Algebra, n: usize) -> Self {
        let mut m = Self::zero(algebra, n, n);
        for i in 0..n {
            m.set(i, i, algebra.unit());
        }
        m
    }

    pub fn from_entries(algebra: &Algebra, rows: usize, cols: usize, entries: Vec<AlgebraElement>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        for e in &entries {
            assert!(algebra.contains(e), "entry not in the algebra");
        }
        MatrixOverAlgebra { algebra: algebra.clone(), rows, cols, entries }
    }

    pub fn from_fn(
        algebra: &Algebra,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> AlgebraElement,
    ) -> Self {
        let mut m = Self::zero(algebra, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: AlgebraElement) {
        assert!(self.algebra.contains(&v), "entry not in the algebra");
        self.entries[i * self.cols + j] = v;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(&self.algebra, self.rows, self.cols, |i, j| {
            self.algebra.add(self.get(i, j), rhs.get(i, j))
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(&self.algebra, self.rows, self.cols, |i, j| {
            self.algebra.sub(self.get(i, j), rhs.get(i, j))
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(&self.algebra, self.rows, self.cols, |i, j| self.algebra.neg(self.get(i, j)))
    }

    pub fn scale(&self, s: &FormalScalar) -> Self {
        Self::from_fn(&self.algebra, self.rows, self.cols, |i, j| {
            self.algebra.scale(self.get(i, j), s)
        })
    }

    pub fn scale_gauss(&self, s: &Scalar) -> Self {
        Self::from_fn(&self.algebra, self.rows, self.cols, |i, j| {
            self.algebra.scale_gauss(self.get(i, j), s)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.algebra.is_zero(e))
    }

    /// Matrix product over the star product of the entry algebra.
    pub fn star_mul(&self, rhs: &Self) -> Result<Self, StarError> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zero(&self.algebra, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if self.algebra.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if self.algebra.is_zero(b) {
                        continue;
                    }
                    let prod = self.algebra.star_product(a, b)?;
                    let cur = self.algebra.add(out.get(i, j), &prod);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Matrix product over the undeformed product of the entry algebra.
    pub fn classical_mul(&self, rhs: &Self) -> Result<Self, StarError> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zero(&self.algebra, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                for j in 0..rhs.cols {
                    let prod = self.algebra.classical_product(self.get(i, k), rhs.get(k, j))?;
                    let cur = self.algebra.add(out.get(i, j), &prod);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Entrywise involution composed with the transpose.
    pub fn involution(&self) -> Self {
        Self::from_fn(&self.algebra, self.cols, self.rows, |i, j| {
            self.algebra.involution(self.get(j, i))
        })
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.involution()
    }

    pub fn trace(&self) -> AlgebraElement {
        assert_eq!(self.rows, self.cols);
        let mut t = self.algebra.zero();
        for i in 0..self.rows {
            t = self.algebra.add(&t, self.get(i, i));
        }
        t
    }

    pub fn valuation(&self) -> Option<usize> {
        self.entries.iter().filter_map(|e| self.algebra.valuation(e)).min()
    }

    pub fn lambda_coeff(&self, r: usize) -> Self {
        Self::from_fn(&self.algebra, self.rows, self.cols, |i, j| {
            self.algebra.lambda_coeff(self.get(i, j), r)
        })
    }

    pub fn shift_up(&self, r: usize) -> Self {
        Self::from_fn(&self.algebra, self.rows, self.cols, |i, j| {
            self.algebra.shift_up(self.get(i, j), r)
        })
    }

    pub fn classical_part(&self) -> Self {
        self.lambda_coeff(0)
    }

    /// Applies the matrix to a column vector of algebra elements via ⋆.
    pub fn star_apply(&self, v: &[AlgebraElement]) -> Result<Vec<AlgebraElement>, StarError> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![self.algebra.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.algebra.star_product(self.get(i, j), &v[j])?;
                out[i] = self.algebra.add(&out[i], &p);
            }
        }
        Ok(out)
    }

    /// Flattens M_n over a (twisted) matrix algebra into the block-twisted
    /// matrix algebra of size n·k; the canonical *-isomorphism of
    /// M_n(M_k) with M_{nk}.
    pub fn flatten(&self) -> Result<(Algebra, AlgebraElement), StarError> {
        let flat = self.algebra.matrix_algebra(self.rows)?;
        let AlgebraKind::TwistedMatrix { dim: k, .. } = self.algebra.kind() else {
            return Err(StarError::KindMismatch);
        };
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let big = ScalarMatrix::from_fn(n * k, n * k, self.algebra.order(), |bi, bj| {
            let (i, ii) = (bi / k, bi % k);
            let (j, jj) = (bj / k, bj % k);
            match self.get(i, j) {
                AlgebraElement::Matrix(m) => m.get(ii, jj).clone(),
                _ => unreachable!("twisted entries are matrices"),
            }
        });
        Ok((flat, AlgebraElement::Matrix(big)))
    }
}

/// M_n(A) as a star ring of its own; the generic star calculus runs over it.
#[derive(Debug, Clone)]
pub struct MatrixRing {
    pub algebra: Algebra,
    pub n: usize,
}

impl MatrixRing {
    pub fn new(algebra: &Algebra, n: usize) -> Self {
        MatrixRing { algebra: algebra.clone(), n }
    }

    /// Inverse of the classical part in the undeformed matrix algebra,
    /// embedded back as a classical matrix.
    pub fn classical_inverse(&self, m: &MatrixOverAlgebra) -> Result<MatrixOverAlgebra, StarError> {
        assert_eq!((m.rows(), m.cols()), (self.n, self.n));
        let order = self.algebra.order();
        match self.algebra.kind() {
            AlgebraKind::TwistedMatrix { dim: k, .. } => {
                let big = ScalarMatrix::from_fn(self.n * k, self.n * k, order, |bi, bj| {
                    let (i, ii) = (bi / k, bi % k);
                    let (j, jj) = (bj / k, bj % k);
                    match m.get(i, j) {
                        AlgebraElement::Matrix(e) => {
                            FormalScalar::constant(e.get(ii, jj).classical().clone(), order)
                        }
                        _ => unreachable!(),
                    }
                });
                let inv = big.invert().ok_or(StarError::NonInvertibleClassicalPart)?;
                Ok(MatrixOverAlgebra::from_fn(&self.algebra, self.n, self.n, |i, j| {
                    AlgebraElement::Matrix(ScalarMatrix::from_fn(*k, *k, order, |ii, jj| {
                        inv.get(i * k + ii, j * k + jj).clone()
                    }))
                }))
            }
            AlgebraKind::Discrete { points } => {
                let pts = points.len();
                let mut per_point = Vec::with_capacity(pts);
                for p in 0..pts {
                    let mp = ScalarMatrix::from_fn(self.n, self.n, order, |i, j| {
                        match m.get(i, j) {
                            AlgebraElement::Func(v) => {
                                FormalScalar::constant(v[p].classical().clone(), order)
                            }
                            _ => unreachable!(),
                        }
                    });
                    per_point.push(mp.invert().ok_or(StarError::NonInvertibleClassicalPart)?);
                }
                Ok(MatrixOverAlgebra::from_fn(&self.algebra, self.n, self.n, |i, j| {
                    AlgebraElement::Func(
                        (0..pts).map(|p| per_point[p].get(i, j).clone()).collect(),
                    )
                }))
            }
            AlgebraKind::Moyal { .. } | AlgebraKind::Wick => {
                // Polynomial classical parts must be constants.
                let mp = ScalarMatrix::from_fn(self.n, self.n, order, |i, j| {
                    match m.get(i, j) {
                        AlgebraElement::Poly(p) => {
                            let cls = p.lambda_coeff(0);
                            FormalScalar::constant(
                                cls.coeff(&vec![0; p.gens()]).classical().clone(),
                                order,
                            )
                        }
                        _ => unreachable!(),
                    }
                });
                // Any higher-degree classical content makes the element
                // non-invertible as a polynomial.
                for i in 0..self.n {
                    for j in 0..self.n {
                        if let AlgebraElement::Poly(p) = m.get(i, j) {
                            let cls = p.lambda_coeff(0);
                            if cls.degree().unwrap_or(0) > 0 {
                                return Err(StarError::NonInvertibleClassicalPart);
                            }
                        }
                    }
                }
                let inv = mp.invert().ok_or(StarError::NonInvertibleClassicalPart)?;
                Ok(MatrixOverAlgebra::from_fn(&self.algebra, self.n, self.n, |i, j| {
                    self.algebra.scalar(inv.get(i, j))
                }))
            }
        }
    }
}
