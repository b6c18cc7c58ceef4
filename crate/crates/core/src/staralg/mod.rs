//! Hermitian star-product algebras behind one interface: Weyl–Moyal and Wick
//! polynomial models, equivalence-twisted matrix algebras, and discrete
//! pointwise function algebras, plus matrices over them and star calculus.
//!
//! Conventions (chosen to satisfy `C₁(f,g) − C₁(g,f) = i{f,g}` and documented
//! here rather than claimed canonical):
//!
//! * Moyal on generators x₁..x_n, p₁..p_n:
//!   `C_r(f,g) = (i/2)^r Σ_{|a|+|b|=r} (−1)^{|b|}/(a!·b!) (∂_x^a ∂_p^b f)(∂_p^a ∂_x^b g)`,
//!   which gives `x ⋆ p = xp + iλ/2` and `x ⋆ p − p ⋆ x = iλ`.
//! * Wick on generators z, z̄: `C_r(f,g) = (1/r!)(∂_z̄^r f)(∂_z^r g)`, so the
//!   evaluation functional at 0 is positive and `z̄ ⋆ z − z ⋆ z̄ = λ`.
//! * Twisted matrix: `a ⋆ b = T⁻¹(T(a)·T(b))`; Hermitian iff T is
//!   *-compatible.
//! * Discrete pointwise: plain pointwise multiplication of series values.

pub mod calculus;
pub mod matrix;
pub mod poly;
pub mod twist;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::linalg::ScalarMatrix;
use crate::scalars::ScalarError;
use crate::{rat, FormalScalar, Rational, Scalar};

pub use matrix::{MatrixOverAlgebra, MatrixRing};
pub use poly::{MultiIndex, Poly};
pub use twist::{EquivalenceTransform, LinearMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StarError {
    #[error("product degree {degree} exceeds the configured cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },
    #[error("classical part is not invertible")]
    NonInvertibleClassicalPart,
    #[error("input must vanish at order zero")]
    NonNilpotentInput,
    #[error("outside the decidable domain: {0}")]
    DomainRestriction(String),
    #[error("equivalence transform is not *-compatible")]
    NotStarCompatible,
    #[error("element does not belong to this algebra")]
    KindMismatch,
    #[error("order-by-order solve failed: {0}")]
    SolveFailure(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The concrete algebra families.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraKind {
    /// Polynomials on R^{2n} with the Weyl–Moyal product; generators are
    /// x₁..x_n (indices 0..n) and p₁..p_n (indices n..2n).
    Moyal { pairs: usize },
    /// Polynomials in z, z̄ with the Wick product; generator 0 is z,
    /// generator 1 is z̄.
    Wick,
    /// M_k over Q(i)[[λ]] with product twisted by an equivalence transform.
    TwistedMatrix { dim: usize, twist: EquivalenceTransform },
    /// Functions on a finite point set with the pointwise product.
    Discrete { points: Vec<String> },
}

#[derive(Debug)]
struct AlgebraData {
    kind: AlgebraKind,
    order: usize,
    degree_cap: u32,
    id: String,
    /// Cached order-by-order inverse of the twist, when there is one.
    twist_inv: Option<EquivalenceTransform>,
    /// Cached ⋆-unit T⁻¹(1) for twisted algebras; the matrix identity is
    /// only the classical part of the unit when T moves constants.
    star_unit: Option<ScalarMatrix>,
}

/// A star-product algebra descriptor. Cheap to clone and safe to share
/// across threads; all operations are pure.
#[derive(Debug, Clone)]
pub struct Algebra {
    data: Arc<AlgebraData>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.kind == other.data.kind
                && self.data.order == other.data.order
                && self.data.degree_cap == other.data.degree_cap)
    }
}

/// An element of one of the concrete algebras.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraElement {
    Poly(Poly),
    Matrix(ScalarMatrix),
    Func(Vec<FormalScalar>),
}

impl Algebra {
    pub fn moyal(pairs: usize, order: usize, degree_cap: u32) -> Self {
        Algebra {
            data: Arc::new(AlgebraData {
                kind: AlgebraKind::Moyal { pairs },
                order,
                degree_cap,
                id: format!("moyal({pairs})"),
                twist_inv: None,
                star_unit: None,
            }),
        }
    }

    pub fn wick(order: usize, degree_cap: u32) -> Self {
        Algebra {
            data: Arc::new(AlgebraData {
                kind: AlgebraKind::Wick,
                order,
                degree_cap,
                id: "wick".into(),
                twist_inv: None,
                star_unit: None,
            }),
        }
    }

    pub fn twisted_matrix(dim: usize, twist: EquivalenceTransform, order: usize) -> Self {
        assert_eq!(twist.dim(), dim);
        assert_eq!(twist.order(), order);
        let inv = twist.inverse();
        let star_unit = Some(inv.apply(&ScalarMatrix::identity(dim, order)));
        Algebra {
            data: Arc::new(AlgebraData {
                kind: AlgebraKind::TwistedMatrix { dim, twist },
                order,
                degree_cap: u32::MAX,
                id: format!("twisted_matrix({dim})"),
                twist_inv: Some(inv),
                star_unit,
            }),
        }
    }

    /// Plain matrix algebra M_k, i.e. the identity twist.
    pub fn matrix(dim: usize, order: usize) -> Self {
        Self::twisted_matrix(dim, EquivalenceTransform::identity(dim, order), order)
    }

    pub fn discrete(points: Vec<String>, order: usize) -> Self {
        let id = format!("discrete({})", points.join(","));
        Algebra {
            data: Arc::new(AlgebraData {
                kind: AlgebraKind::Discrete { points },
                order,
                degree_cap: u32::MAX,
                id,
                twist_inv: None,
                star_unit: None,
            }),
        }
    }

    /// The scalar ring C[[λ]] itself, as a one-point discrete algebra.
    pub fn scalars(order: usize) -> Self {
        Self::discrete(vec!["*".into()], order)
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.data.kind
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn degree_cap(&self) -> u32 {
        self.data.degree_cap
    }

    pub fn id(&self) -> &str {
        &self.data.id
    }

    pub fn is_commutative(&self) -> bool {
        matches!(self.kind(), AlgebraKind::Discrete { .. })
    }

    /// The algebra M_n(A) flattened to a single (block-twisted) matrix
    /// algebra, using M_n(M_k) ≅ M_{nk}. Only matrix algebras flatten.
    pub fn matrix_algebra(&self, n: usize) -> Result<Algebra, StarError> {
        let AlgebraKind::TwistedMatrix { dim: k, twist } = self.kind() else {
            return Err(StarError::KindMismatch);
        };
        let k = *k;
        let big = n * k;
        let mut corrections = Vec::with_capacity(self.order());
        for r in 1..=self.order() {
            // Blockwise extension: the map acts on each k×k block separately.
            let mut map = LinearMap::zero(big);
            let base = twist.correction(r);
            for i in 0..n {
                for j in 0..n {
                    for ii in 0..k {
                        for jj in 0..k {
                            for pp in 0..k {
                                for qq in 0..k {
                                    let v = base.entry(ii * k + jj, pp * k + qq).clone();
                                    if v.is_zero() {
                                        continue;
                                    }
                                    let row = (i * k + ii) * big + (j * k + jj);
                                    let col = (i * k + pp) * big + (j * k + qq);
                                    map.set_entry(row, col, v);
                                }
                            }
                        }
                    }
                }
            }
            corrections.push(map);
        }
        Ok(Algebra::twisted_matrix(
            big,
            EquivalenceTransform::new(big, self.order(), corrections),
            self.order(),
        ))
    }

    fn gens(&self) -> usize {
        match self.kind() {
            AlgebraKind::Moyal { pairs } => 2 * pairs,
            AlgebraKind::Wick => 2,
            _ => 0,
        }
    }

    pub fn contains(&self, f: &AlgebraElement) -> bool {
        match (self.kind(), f) {
            (AlgebraKind::Moyal { pairs }, AlgebraElement::Poly(p)) => {
                p.gens() == 2 * pairs && p.order() == self.order()
            }
            (AlgebraKind::Wick, AlgebraElement::Poly(p)) => {
                p.gens() == 2 && p.order() == self.order()
            }
            (AlgebraKind::TwistedMatrix { dim, .. }, AlgebraElement::Matrix(m)) => {
                m.rows() == *dim && m.cols() == *dim && m.order() == self.order()
            }
            (AlgebraKind::Discrete { points }, AlgebraElement::Func(v)) => {
                v.len() == points.len() && v.iter().all(|s| s.order() == self.order())
            }
            _ => false,
        }
    }

    // -- element constructors ------------------------------------------------

    pub fn zero(&self) -> AlgebraElement {
        match self.kind() {
            AlgebraKind::Moyal { .. } | AlgebraKind::Wick => {
                AlgebraElement::Poly(Poly::zero(self.gens(), self.order()))
            }
            AlgebraKind::TwistedMatrix { dim, .. } => {
                AlgebraElement::Matrix(ScalarMatrix::zero(*dim, *dim, self.order()))
            }
            AlgebraKind::Discrete { points } => {
                AlgebraElement::Func(vec![FormalScalar::zero(self.order()); points.len()])
            }
        }
    }

    pub fn unit(&self) -> AlgebraElement {
        match self.kind() {
            AlgebraKind::Moyal { .. } | AlgebraKind::Wick => AlgebraElement::Poly(
                Poly::constant(FormalScalar::one(self.order()), self.gens()),
            ),
            AlgebraKind::TwistedMatrix { .. } => AlgebraElement::Matrix(
                self.data.star_unit.clone().expect("twisted algebras cache the star unit"),
            ),
            AlgebraKind::Discrete { points } => {
                AlgebraElement::Func(vec![FormalScalar::one(self.order()); points.len()])
            }
        }
    }

    /// Scalar multiple of the unit.
    pub fn scalar(&self, s: &FormalScalar) -> AlgebraElement {
        self.scale(&self.unit(), s)
    }

    /// Polynomial generator by index (Moyal: 0..n are x's, n..2n are p's;
    /// Wick: 0 is z, 1 is z̄).
    pub fn generator(&self, idx: usize) -> AlgebraElement {
        assert!(idx < self.gens(), "generator index out of range");
        AlgebraElement::Poly(Poly::generator(idx, self.gens(), self.order()))
    }

    /// Matrix unit e_{ij} for matrix algebras.
    pub fn matrix_unit(&self, i: usize, j: usize) -> AlgebraElement {
        let AlgebraKind::TwistedMatrix { dim, .. } = self.kind() else {
            panic!("matrix_unit on a non-matrix algebra");
        };
        let mut m = ScalarMatrix::zero(*dim, *dim, self.order());
        m.set(i, j, FormalScalar::one(self.order()));
        AlgebraElement::Matrix(m)
    }

    /// Indicator function of a point for discrete algebras.
    pub fn indicator(&self, point: &str) -> AlgebraElement {
        let AlgebraKind::Discrete { points } = self.kind() else {
            panic!("indicator on a non-discrete algebra");
        };
        let idx = points.iter().position(|p| p == point).expect("unknown point");
        let mut v = vec![FormalScalar::zero(self.order()); points.len()];
        v[idx] = FormalScalar::one(self.order());
        AlgebraElement::Func(v)
    }

    /// Function with the given point values for discrete algebras.
    pub fn func(&self, values: Vec<FormalScalar>) -> AlgebraElement {
        let AlgebraKind::Discrete { points } = self.kind() else {
            panic!("func on a non-discrete algebra");
        };
        assert_eq!(values.len(), points.len());
        AlgebraElement::Func(values)
    }

    // -- linear structure ----------------------------------------------------

    pub fn add(&self, f: &AlgebraElement, g: &AlgebraElement) -> AlgebraElement {
        match (f, g) {
            (AlgebraElement::Poly(a), AlgebraElement::Poly(b)) => AlgebraElement::Poly(a.add(b)),
            (AlgebraElement::Matrix(a), AlgebraElement::Matrix(b)) => {
                AlgebraElement::Matrix(a.add(b))
            }
            (AlgebraElement::Func(a), AlgebraElement::Func(b)) => {
                AlgebraElement::Func(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn sub(&self, f: &AlgebraElement, g: &AlgebraElement) -> AlgebraElement {
        self.add(f, &self.neg(g))
    }

    pub fn neg(&self, f: &AlgebraElement) -> AlgebraElement {
        match f {
            AlgebraElement::Poly(a) => AlgebraElement::Poly(a.neg()),
            AlgebraElement::Matrix(a) => AlgebraElement::Matrix(a.neg()),
            AlgebraElement::Func(a) => AlgebraElement::Func(a.iter().map(|x| -x).collect()),
        }
    }

    pub fn scale(&self, f: &AlgebraElement, s: &FormalScalar) -> AlgebraElement {
        match f {
            AlgebraElement::Poly(a) => AlgebraElement::Poly(a.scale(s)),
            AlgebraElement::Matrix(a) => AlgebraElement::Matrix(a.scale(s)),
            AlgebraElement::Func(a) => AlgebraElement::Func(a.iter().map(|x| x * s).collect()),
        }
    }

    pub fn scale_gauss(&self, f: &AlgebraElement, s: &Scalar) -> AlgebraElement {
        match f {
            AlgebraElement::Poly(a) => AlgebraElement::Poly(a.scale_gauss(s)),
            AlgebraElement::Matrix(a) => AlgebraElement::Matrix(a.scale_gauss(s)),
            AlgebraElement::Func(a) => {
                AlgebraElement::Func(a.iter().map(|x| x.scale(s)).collect())
            }
        }
    }

    pub fn is_zero(&self, f: &AlgebraElement) -> bool {
        match f {
            AlgebraElement::Poly(a) => a.is_zero(),
            AlgebraElement::Matrix(a) => a.is_zero(),
            AlgebraElement::Func(a) => a.iter().all(FormalScalar::is_zero),
        }
    }

    /// Minimal λ-valuation of the element; `None` for zero.
    pub fn valuation(&self, f: &AlgebraElement) -> Option<usize> {
        match f {
            AlgebraElement::Poly(a) => a.valuation(),
            AlgebraElement::Matrix(a) => {
                let mut min = None;
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        if let Some(v) = a.get(i, j).valuation() {
                            min = Some(min.map_or(v, |m: usize| m.min(v)));
                        }
                    }
                }
                min
            }
            AlgebraElement::Func(a) => a.iter().filter_map(FormalScalar::valuation).min(),
        }
    }

    /// Extracts the λ^r coefficient as a classical (order-zero) element.
    pub fn lambda_coeff(&self, f: &AlgebraElement, r: usize) -> AlgebraElement {
        let n = self.order();
        match f {
            AlgebraElement::Poly(a) => AlgebraElement::Poly(a.lambda_coeff(r)),
            AlgebraElement::Matrix(a) => {
                AlgebraElement::Matrix(ScalarMatrix::from_fn(a.rows(), a.cols(), n, |i, j| {
                    FormalScalar::constant(a.get(i, j).coeff(r).clone(), n)
                }))
            }
            AlgebraElement::Func(a) => AlgebraElement::Func(
                a.iter().map(|s| FormalScalar::constant(s.coeff(r).clone(), n)).collect(),
            ),
        }
    }

    /// Multiplies the element by λ^r.
    pub fn shift_up(&self, f: &AlgebraElement, r: usize) -> AlgebraElement {
        match f {
            AlgebraElement::Poly(a) => AlgebraElement::Poly(a.shift_up(r)),
            AlgebraElement::Matrix(a) => AlgebraElement::Matrix(ScalarMatrix::from_fn(
                a.rows(),
                a.cols(),
                self.order(),
                |i, j| a.get(i, j).shift_up(r),
            )),
            AlgebraElement::Func(a) => {
                AlgebraElement::Func(a.iter().map(|s| s.shift_up(r)).collect())
            }
        }
    }

    /// Classical part (order-zero coefficients) as an element.
    pub fn classical_part(&self, f: &AlgebraElement) -> AlgebraElement {
        self.lambda_coeff(f, 0)
    }

    // -- products ------------------------------------------------------------

    /// The star product of the algebra. Exact modulo λ^(N+1).
    pub fn star_product(
        &self,
        f: &AlgebraElement,
        g: &AlgebraElement,
    ) -> Result<AlgebraElement, StarError> {
        if !self.contains(f) || !self.contains(g) {
            return Err(StarError::KindMismatch);
        }
        match (self.kind(), f, g) {
            (AlgebraKind::Moyal { pairs }, AlgebraElement::Poly(a), AlgebraElement::Poly(b)) => {
                Ok(AlgebraElement::Poly(self.check_cap(moyal_star(a, b, *pairs, self.order()))?))
            }
            (AlgebraKind::Wick, AlgebraElement::Poly(a), AlgebraElement::Poly(b)) => {
                Ok(AlgebraElement::Poly(self.check_cap(wick_star(a, b, self.order()))?))
            }
            (
                AlgebraKind::TwistedMatrix { twist, .. },
                AlgebraElement::Matrix(a),
                AlgebraElement::Matrix(b),
            ) => {
                let prod = twist.apply(a).mul(&twist.apply(b));
                let inv = self.data.twist_inv.as_ref().expect("twisted algebras cache the inverse");
                Ok(AlgebraElement::Matrix(inv.apply(&prod)))
            }
            (AlgebraKind::Discrete { .. }, AlgebraElement::Func(a), AlgebraElement::Func(b)) => {
                Ok(AlgebraElement::Func(a.iter().zip(b).map(|(x, y)| x * y).collect()))
            }
            _ => Err(StarError::KindMismatch),
        }
    }

    /// The undeformed (classical) product C₀.
    pub fn classical_product(
        &self,
        f: &AlgebraElement,
        g: &AlgebraElement,
    ) -> Result<AlgebraElement, StarError> {
        match (f, g) {
            (AlgebraElement::Poly(a), AlgebraElement::Poly(b)) => {
                Ok(AlgebraElement::Poly(self.check_cap(a.mul(b))?))
            }
            (AlgebraElement::Matrix(a), AlgebraElement::Matrix(b)) => {
                Ok(AlgebraElement::Matrix(a.mul(b)))
            }
            (AlgebraElement::Func(a), AlgebraElement::Func(b)) => {
                Ok(AlgebraElement::Func(a.iter().zip(b).map(|(x, y)| x * y).collect()))
            }
            _ => Err(StarError::KindMismatch),
        }
    }

    fn check_cap(&self, p: Poly) -> Result<Poly, StarError> {
        if let Some(deg) = p.degree() {
            if deg > self.degree_cap() {
                return Err(StarError::DegreeOverflow { degree: deg, cap: self.degree_cap() });
            }
        }
        Ok(p)
    }

    /// The *-involution: coefficientwise conjugation for function algebras
    /// (with z ↔ z̄ for Wick), conjugate transpose for matrices.
    pub fn involution(&self, f: &AlgebraElement) -> AlgebraElement {
        match (self.kind(), f) {
            (AlgebraKind::Moyal { .. }, AlgebraElement::Poly(a)) => {
                AlgebraElement::Poly(a.conj_coeffs())
            }
            (AlgebraKind::Wick, AlgebraElement::Poly(a)) => {
                AlgebraElement::Poly(a.conj_swap(&[1, 0]))
            }
            (AlgebraKind::TwistedMatrix { .. }, AlgebraElement::Matrix(a)) => {
                AlgebraElement::Matrix(a.adjoint())
            }
            (AlgebraKind::Discrete { .. }, AlgebraElement::Func(a)) => {
                AlgebraElement::Func(a.iter().map(FormalScalar::conj).collect())
            }
            _ => panic!("element does not belong to this algebra"),
        }
    }

    pub fn is_hermitian_element(&self, f: &AlgebraElement) -> bool {
        self.involution(f) == *f
    }

    /// Star commutator `[f, g] = f⋆g − g⋆f`.
    pub fn commutator(
        &self,
        f: &AlgebraElement,
        g: &AlgebraElement,
    ) -> Result<AlgebraElement, StarError> {
        Ok(self.sub(&self.star_product(f, g)?, &self.star_product(g, f)?))
    }

    // -- canonical coordinates -----------------------------------------------

    /// Deterministic spanning basis: monomials of total degree ≤ `max_degree`
    /// for polynomial models (by degree, then lexicographically), matrix
    /// units for matrix algebras, point indicators for discrete ones.
    pub fn canonical_basis(&self, max_degree: u32) -> Vec<AlgebraElement> {
        match self.kind() {
            AlgebraKind::Moyal { .. } | AlgebraKind::Wick => {
                let gens = self.gens();
                let mut out = Vec::new();
                for d in 0..=max_degree.min(self.degree_cap()) {
                    for m in poly::exponents_of_degree(gens, d) {
                        out.push(AlgebraElement::Poly(Poly::monomial(
                            m,
                            FormalScalar::one(self.order()),
                            gens,
                        )));
                    }
                }
                out
            }
            AlgebraKind::TwistedMatrix { dim, .. } => {
                let mut out = Vec::new();
                for i in 0..*dim {
                    for j in 0..*dim {
                        out.push(self.matrix_unit(i, j));
                    }
                }
                out
            }
            AlgebraKind::Discrete { points } => {
                points.iter().map(|p| self.indicator(p)).collect()
            }
        }
    }

    /// Coordinates of an element over [`Self::canonical_basis`] with the same
    /// `max_degree`. Errors if a polynomial exceeds the degree bound.
    pub fn coords(&self, f: &AlgebraElement, max_degree: u32) -> Result<Vec<FormalScalar>, StarError> {
        match (self.kind(), f) {
            (AlgebraKind::Moyal { .. } | AlgebraKind::Wick, AlgebraElement::Poly(p)) => {
                if p.degree().unwrap_or(0) > max_degree {
                    return Err(StarError::DegreeOverflow {
                        degree: p.degree().unwrap_or(0),
                        cap: max_degree,
                    });
                }
                let gens = self.gens();
                let mut out = Vec::new();
                for d in 0..=max_degree.min(self.degree_cap()) {
                    for m in poly::exponents_of_degree(gens, d) {
                        out.push(p.coeff(&m));
                    }
                }
                Ok(out)
            }
            (AlgebraKind::TwistedMatrix { dim, .. }, AlgebraElement::Matrix(m)) => {
                let mut out = Vec::with_capacity(dim * dim);
                for i in 0..*dim {
                    for j in 0..*dim {
                        out.push(m.get(i, j).clone());
                    }
                }
                Ok(out)
            }
            (AlgebraKind::Discrete { .. }, AlgebraElement::Func(v)) => Ok(v.clone()),
            _ => Err(StarError::KindMismatch),
        }
    }

    /// Rebuilds an element from canonical coordinates.
    pub fn from_coords(
        &self,
        coords: &[FormalScalar],
        max_degree: u32,
    ) -> Result<AlgebraElement, StarError> {
        let basis = self.canonical_basis(max_degree);
        if basis.len() != coords.len() {
            return Err(StarError::SolveFailure("coordinate length mismatch".into()));
        }
        let mut acc = self.zero();
        for (b, c) in basis.iter().zip(coords) {
            acc = self.add(&acc, &self.scale(b, c));
        }
        Ok(acc)
    }

    // -- random sampling -----------------------------------------------------

    /// Random element for property suites: polynomial models get degree
    /// ≤ `max_degree`, matrices and functions get dense random entries. All
    /// coefficients are small Gaussian rationals spread over λ-orders.
    pub fn random_element(&self, rng: &mut impl Rng, max_degree: u32) -> AlgebraElement {
        let n = self.order();
        let rand_series = |rng: &mut dyn rand::RngCore| {
            FormalScalar::from_coeffs(
                (0..=n)
                    .map(|_| {
                        if rng.gen_range(0..3) == 0 {
                            Scalar::zero()
                        } else {
                            crate::gauss(
                                rng.gen_range(-4..=4),
                                rng.gen_range(1..=3),
                                rng.gen_range(-4..=4),
                                rng.gen_range(1..=3),
                            )
                        }
                    })
                    .collect(),
                n,
            )
        };
        match self.kind() {
            AlgebraKind::Moyal { .. } | AlgebraKind::Wick => {
                let gens = self.gens();
                let mut p = Poly::zero(gens, n);
                let terms = rng.gen_range(1..=4);
                for _ in 0..terms {
                    let d = rng.gen_range(0..=max_degree);
                    let all = poly::exponents_of_degree(gens, d);
                    let m = all[rng.gen_range(0..all.len())].clone();
                    p.add_term(m, rand_series(rng));
                }
                AlgebraElement::Poly(p)
            }
            AlgebraKind::TwistedMatrix { dim, .. } => {
                let d = *dim;
                AlgebraElement::Matrix(ScalarMatrix::from_fn(d, d, n, |_, _| rand_series(rng)))
            }
            AlgebraKind::Discrete { points } => {
                AlgebraElement::Func((0..points.len()).map(|_| rand_series(rng)).collect())
            }
        }
    }

    /// Random Hermitian element.
    pub fn random_hermitian(&self, rng: &mut impl Rng, max_degree: u32) -> AlgebraElement {
        let f = self.random_element(rng, max_degree);
        let half = FormalScalar::constant(Scalar::from_ratio(rat(1, 2)), self.order());
        self.scale(&self.add(&f, &self.involution(&f)), &half)
    }
}

// ---------------------------------------------------------------------------
// Moyal and Wick products
// ---------------------------------------------------------------------------

fn factorial(n: u32) -> Rational {
    let mut acc = rat(1, 1);
    for k in 2..=n as i64 {
        acc *= rat(k, 1);
    }
    acc
}

/// `(i/2)^r / (a! b!)` with the sign `(−1)^{|b|}`, as a Gaussian rational.
fn moyal_coefficient(r: u32, a: &[u32], b: &[u32]) -> Scalar {
    let mut denom = rat(1, 1);
    for &e in a.iter().chain(b) {
        denom *= factorial(e);
    }
    let two_r = rat(2i64.pow(r), 1);
    let sign = if b.iter().sum::<u32>() % 2 == 1 { rat(-1, 1) } else { rat(1, 1) };
    let magnitude = sign / (two_r * denom);
    // i^r cycles with period 4.
    match r % 4 {
        0 => Scalar::new(magnitude, rat(0, 1)),
        1 => Scalar::new(rat(0, 1), magnitude),
        2 => Scalar::new(-magnitude, rat(0, 1)),
        _ => Scalar::new(rat(0, 1), -magnitude),
    }
}

fn moyal_star(f: &Poly, g: &Poly, pairs: usize, order: usize) -> Poly {
    let mut out = f.mul(g);
    for r in 1..=order as u32 {
        // Σ over multi-indices a, b ∈ N^pairs with |a| + |b| = r.
        let mut c_r = Poly::zero(f.gens(), order);
        for asum in 0..=r {
            for a in poly::exponents_of_degree(pairs, asum) {
                for b in poly::exponents_of_degree(pairs, r - asum) {
                    // ∂_x^a ∂_p^b f and ∂_p^a ∂_x^b g.
                    let mut df = f.clone();
                    let mut dg = g.clone();
                    for j in 0..pairs {
                        df = df.derivative_n(j, a[j]);
                        df = df.derivative_n(pairs + j, b[j]);
                        dg = dg.derivative_n(pairs + j, a[j]);
                        dg = dg.derivative_n(j, b[j]);
                    }
                    if df.is_zero() || dg.is_zero() {
                        continue;
                    }
                    let term = df.mul(&dg).scale_gauss(&moyal_coefficient(r, &a, &b));
                    c_r = c_r.add(&term);
                }
            }
        }
        out = out.add(&c_r.shift_up(r as usize));
    }
    out
}

fn wick_star(f: &Poly, g: &Poly, order: usize) -> Poly {
    // Generator 0 is z, generator 1 is z̄; C_r(f,g) = (1/r!)(∂_z̄^r f)(∂_z^r g).
    let mut out = f.mul(g);
    for r in 1..=order as u32 {
        let df = f.derivative_n(1, r);
        if df.is_zero() {
            continue;
        }
        let dg = g.derivative_n(0, r);
        if dg.is_zero() {
            continue;
        }
        let inv_fact = Scalar::from_ratio(rat(1, 1) / factorial(r));
        out = out.add(&df.mul(&dg).scale_gauss(&inv_fact).shift_up(r as usize));
    }
    out
}

// ---------------------------------------------------------------------------
// Axiom checks
// ---------------------------------------------------------------------------

/// Outcome of a sampled axiom check, with the first counterexample if any.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: usize,
    /// First failing sample index and the lowest λ-order where the two sides
    /// differ.
    pub first_counterexample: Option<(usize, usize)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Verifies `(f⋆g)⋆h = f⋆(g⋆h)` on random triples.
pub fn check_associativity(algebra: &Algebra, samples: usize, seed: u64) -> AxiomReport {
    check_associativity_with(algebra, samples, seed, |a, f, g| a.star_product(f, g))
}

/// Same as [`check_associativity`] but with an arbitrary product closure;
/// test code uses this to demonstrate detection of corrupted cochains.
pub fn check_associativity_with(
    algebra: &Algebra,
    samples: usize,
    seed: u64,
    product: impl Fn(&Algebra, &AlgebraElement, &AlgebraElement) -> Result<AlgebraElement, StarError>,
) -> AxiomReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let deg = sample_degree(algebra, 3);
    let mut failures = 0;
    let mut first = None;
    for idx in 0..samples {
        let f = algebra.random_element(&mut rng, deg);
        let g = algebra.random_element(&mut rng, deg);
        let h = algebra.random_element(&mut rng, deg);
        let lhs = product(algebra, &product(algebra, &f, &g).unwrap(), &h).unwrap();
        let rhs = product(algebra, &f, &product(algebra, &g, &h).unwrap()).unwrap();
        let diff = algebra.sub(&lhs, &rhs);
        if !algebra.is_zero(&diff) {
            failures += 1;
            if first.is_none() {
                first = Some((idx, algebra.valuation(&diff).unwrap_or(0)));
            }
        }
    }
    AxiomReport { checked: samples, failures, first_counterexample: first }
}

/// Verifies the Hermitian axiom `(f⋆g)* = g*⋆f*` on random pairs.
pub fn check_hermitian(algebra: &Algebra, samples: usize, seed: u64) -> AxiomReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let deg = sample_degree(algebra, 2);
    let mut failures = 0;
    let mut first = None;
    for idx in 0..samples {
        let f = algebra.random_element(&mut rng, deg);
        let g = algebra.random_element(&mut rng, deg);
        let lhs = algebra.involution(&algebra.star_product(&f, &g).unwrap());
        let rhs = algebra
            .star_product(&algebra.involution(&g), &algebra.involution(&f))
            .unwrap();
        let diff = algebra.sub(&lhs, &rhs);
        if !algebra.is_zero(&diff) {
            failures += 1;
            if first.is_none() {
                first = Some((idx, algebra.valuation(&diff).unwrap_or(0)));
            }
        }
    }
    AxiomReport { checked: samples, failures, first_counterexample: first }
}

/// Degree budget so that `factors` many star factors stay under the cap.
fn sample_degree(algebra: &Algebra, factors: u32) -> u32 {
    match algebra.kind() {
        AlgebraKind::Moyal { .. } | AlgebraKind::Wick => {
            (algebra.degree_cap() / factors).max(1)
        }
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::calculus::{self, CentralLog, Phase};
    use super::*;
    use rand::SeedableRng;

    fn n() -> usize {
        crate::DEFAULT_ORDER
    }

    fn moyal1() -> Algebra {
        Algebra::moyal(1, n(), crate::DEFAULT_DEGREE_CAP as u32)
    }

    fn wick() -> Algebra {
        Algebra::wick(n(), crate::DEFAULT_DEGREE_CAP as u32)
    }

    /// Twisted M₂ with T = id + λ·(a ↦ h a h), h = diag(1, 0).
    pub(crate) fn twisted_m2() -> Algebra {
        let h = vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()];
        let t = EquivalenceTransform::new(2, n(), vec![LinearMap::sandwich(&h, &h, 2)]);
        Algebra::twisted_matrix(2, t, n())
    }

    fn i_lambda() -> FormalScalar {
        FormalScalar::lambda(n()).scale(&Scalar::i())
    }

    #[test]
    fn moyal_x_star_p_by_hand() {
        let a = moyal1();
        let x = a.generator(0);
        let p = a.generator(1);
        // x ⋆ p = xp + iλ/2.
        let xp = a.classical_product(&x, &p).unwrap();
        let half_il = i_lambda().scale(&Scalar::from_ratio(rat(1, 2)));
        let expect = a.add(&xp, &a.scalar(&half_il));
        assert_eq!(a.star_product(&x, &p).unwrap(), expect);
        // Canonical commutator x⋆p − p⋆x = iλ.
        let comm = a.commutator(&x, &p).unwrap();
        assert_eq!(comm, a.scalar(&i_lambda()));
    }

    #[test]
    fn moyal_x2_star_p2_by_hand() {
        // x² ⋆ p² = x²p² + 2iλ·xp − λ²/2, expanded by hand from the
        // bidifferential series.
        let a = moyal1();
        let x = a.generator(0);
        let p = a.generator(1);
        let x2 = a.classical_product(&x, &x).unwrap();
        let p2 = a.classical_product(&p, &p).unwrap();
        let got = a.star_product(&x2, &p2).unwrap();
        let xp = a.classical_product(&x, &p).unwrap();
        let mut expect = a.classical_product(&x2, &p2).unwrap();
        expect = a.add(&expect, &a.scale(&xp, &i_lambda().scale(&Scalar::from_int(2))));
        let minus_half_l2 =
            FormalScalar::lambda(n()).shift_up(1).scale(&Scalar::from_ratio(rat(-1, 2)));
        expect = a.add(&expect, &a.scalar(&minus_half_l2));
        assert_eq!(got, expect);
    }

    #[test]
    fn moyal_commutators_general_n() {
        let a = Algebra::moyal(2, n(), crate::DEFAULT_DEGREE_CAP as u32);
        for j in 0..2 {
            for k in 0..2 {
                let x = a.generator(j);
                let p = a.generator(2 + k);
                let comm = a.commutator(&x, &p).unwrap();
                let expect =
                    if j == k { a.scalar(&i_lambda()) } else { a.zero() };
                assert_eq!(comm, expect, "x_{j} ⋆ p_{k} commutator");
                assert!(a.is_zero(&a.commutator(&a.generator(j), &a.generator(k)).unwrap()));
                assert!(a
                    .is_zero(&a.commutator(&a.generator(2 + j), &a.generator(2 + k)).unwrap()));
            }
        }
    }

    #[test]
    fn unit_is_neutral() {
        for alg in [moyal1(), wick(), twisted_m2(), Algebra::discrete(vec!["a".into(), "b".into()], n())] {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
            for _ in 0..20 {
                let f = alg.random_element(&mut rng, 3);
                assert_eq!(alg.star_product(&alg.unit(), &f).unwrap(), f);
                assert_eq!(alg.star_product(&f, &alg.unit()).unwrap(), f);
            }
        }
    }

    #[test]
    fn wick_ladder_by_hand() {
        let a = wick();
        let z = a.generator(0);
        let zbar = a.generator(1);
        for r in 1..=4u32 {
            // z̄ ⋆ z^r = z̄·z^r + λ·r·z^{r−1}, from the closed-form pairing.
            let mut zr = a.unit();
            for _ in 0..r {
                zr = a.classical_product(&zr, &z).unwrap();
            }
            let got = a.star_product(&zbar, &zr).unwrap();
            let mut zr1 = a.unit();
            for _ in 0..r - 1 {
                zr1 = a.classical_product(&zr1, &z).unwrap();
            }
            let lam_r = FormalScalar::lambda(n()).scale(&Scalar::from_ratio(rat(r as i64, 1)));
            let expect =
                a.add(&a.classical_product(&zbar, &zr).unwrap(), &a.scale(&zr1, &lam_r));
            assert_eq!(got, expect, "r = {r}");
        }
        // z̄⋆z − z⋆z̄ = λ.
        let comm = a.commutator(&zbar, &z).unwrap();
        assert_eq!(comm, a.scalar(&FormalScalar::lambda(n())));
    }

    #[test]
    fn involution_and_hermitian_axiom() {
        let a = moyal1();
        let x = a.generator(0);
        let ix = a.scale_gauss(&x, &Scalar::i());
        assert_eq!(a.involution(&ix), a.neg(&ix));
        for alg in [moyal1(), wick(), twisted_m2()] {
            let rep = check_hermitian(&alg, 50, 11);
            assert!(rep.passed(), "{} hermitian axiom: {:?}", alg.id(), rep.first_counterexample);
            let rep = check_associativity(&alg, 30, 13);
            assert!(rep.passed(), "{} associativity: {:?}", alg.id(), rep.first_counterexample);
        }
    }

    #[test]
    fn discrete_is_associative_and_commutative() {
        let a = Algebra::discrete(vec!["p".into(), "q".into(), "r".into()], n());
        let rep = check_associativity(&a, 25, 17);
        assert!(rep.passed());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        let f = a.random_element(&mut rng, 0);
        let g = a.random_element(&mut rng, 0);
        assert!(a.is_zero(&a.commutator(&f, &g).unwrap()));
    }

    #[test]
    fn corrupted_cochain_fails_with_order() {
        // Adding λ²·(∂f)(∂²g) breaks associativity at order 2: that cochain
        // has Hochschild coboundary 2f'g'h' ≠ 0. (A term like (∂f)(∂g) would
        // be a cocycle and slip through to higher order.)
        let a = moyal1();
        let corrupted = |alg: &Algebra, f: &AlgebraElement, g: &AlgebraElement| {
            let honest = alg.star_product(f, g)?;
            let (AlgebraElement::Poly(pf), AlgebraElement::Poly(pg)) = (f, g) else {
                unreachable!()
            };
            let extra = pf.derivative(0).mul(&pg.derivative_n(0, 2)).shift_up(2);
            Ok(alg.add(&honest, &AlgebraElement::Poly(extra)))
        };
        let rep = check_associativity_with(&a, 20, 23, corrupted);
        assert!(!rep.passed());
        // Deterministic witness: with f = x, g = x², h = x³ the associator
        // defect −2λ²·f'g'h' shows up first at λ-order exactly 2.
        let x = a.generator(0);
        let x2 = a.classical_product(&x, &x).unwrap();
        let x3 = a.classical_product(&x2, &x).unwrap();
        let lhs = corrupted(&a, &corrupted(&a, &x, &x2).unwrap(), &x3).unwrap();
        let rhs = corrupted(&a, &x, &corrupted(&a, &x2, &x3).unwrap()).unwrap();
        let diff = a.sub(&lhs, &rhs);
        assert_eq!(a.valuation(&diff), Some(2));
    }

    #[test]
    fn twist_identity_leaves_product() {
        let base = Algebra::matrix(2, n());
        let (twisted, compat) =
            calculus::twist_algebra(&base, &EquivalenceTransform::identity(2, n())).unwrap();
        assert!(compat);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let f = base.random_element(&mut rng, 0);
            let g = base.random_element(&mut rng, 0);
            assert_eq!(
                base.star_product(&f, &g).unwrap(),
                twisted.star_product(&f, &g).unwrap()
            );
        }
    }

    #[test]
    fn twisted_product_by_hand() {
        // e₁₂ ⋆ e₂₁ = e₁₁·(1 − λ + λ² − …) for the diag(1,0) sandwich twist.
        let a = twisted_m2();
        let e12 = a.matrix_unit(0, 1);
        let e21 = a.matrix_unit(1, 0);
        let got = a.star_product(&e12, &e21).unwrap();
        let geo = FormalScalar::from_coeffs(
            (0..=n()).map(|r| if r % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) }).collect(),
            n(),
        );
        let expect = a.scale(&a.matrix_unit(0, 0), &geo);
        assert_eq!(got, expect);
    }

    #[test]
    fn twisted_conjugated_projection_is_idempotent() {
        // Q = T⁻¹(P₀) satisfies Q⋆Q = Q: conjugating an algebra map.
        let a = twisted_m2();
        let AlgebraKind::TwistedMatrix { twist, .. } = a.kind() else { unreachable!() };
        let p0 = match a.matrix_unit(0, 0) {
            AlgebraElement::Matrix(m) => m,
            _ => unreachable!(),
        };
        let q = AlgebraElement::Matrix(twist.inverse().apply(&p0));
        let qq = a.star_product(&q, &q).unwrap();
        assert_eq!(qq, q);
    }

    #[test]
    fn star_inverse_examples() {
        let a = moyal1();
        // (1 + λx)⁻¹ = 1 − λx + λ²x⋆x − …, verified by multiplying back.
        let one_plus_lx = a.add(&a.unit(), &a.shift_up(&a.generator(0), 1));
        let inv = calculus::star_inverse(&a, &one_plus_lx).unwrap();
        assert_eq!(a.star_product(&one_plus_lx, &inv).unwrap(), a.unit());
        // Unit matrix inverts to itself.
        let t = twisted_m2();
        assert_eq!(calculus::star_inverse(&t, &t.unit()).unwrap(), t.unit());
        // x has no invertible classical part.
        assert!(matches!(
            calculus::star_inverse(&a, &a.generator(0)),
            Err(StarError::NonInvertibleClassicalPart)
        ));
    }

    #[test]
    fn binomial_invsqrt_scalar_series() {
        let a = twisted_m2();
        // X = λ·1: frozen coefficients of (1+λ)^{−1/2}.
        let x = a.scalar(&FormalScalar::lambda(n()));
        let s = calculus::binomial_invsqrt(&a, &x).unwrap();
        let expect = FormalScalar::from_coeffs(
            vec![
                Scalar::from_ratio(rat(1, 1)),
                Scalar::from_ratio(rat(-1, 2)),
                Scalar::from_ratio(rat(3, 8)),
                Scalar::from_ratio(rat(-5, 16)),
                Scalar::from_ratio(rat(35, 128)),
                Scalar::from_ratio(rat(-63, 256)),
                Scalar::from_ratio(rat(231, 1024)),
            ],
            n(),
        );
        assert_eq!(s, a.scalar(&expect));
        // X = 0 gives 1; square-and-multiply replay.
        assert_eq!(calculus::binomial_invsqrt(&a, &a.zero()).unwrap(), a.unit());
        let one_plus_x = a.add(&a.unit(), &x);
        let replay = a
            .star_product(&a.star_product(&s, &s).unwrap(), &one_plus_x)
            .unwrap();
        assert_eq!(replay, a.unit());
        // Nonzero classical part is rejected.
        assert!(matches!(
            calculus::binomial_invsqrt(&a, &a.unit()),
            Err(StarError::NonNilpotentInput)
        ));
    }

    #[test]
    fn invsqrt_random_replay() {
        let a = twisted_m2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let x = a.shift_up(&a.random_element(&mut rng, 0), 1);
            let s = calculus::binomial_invsqrt(&a, &x).unwrap();
            let one_plus_x = a.add(&a.unit(), &x);
            let replay = a
                .star_product(&a.star_product(&s, &s).unwrap(), &one_plus_x)
                .unwrap();
            assert_eq!(replay, a.unit());
        }
    }

    #[test]
    fn star_exp_log_round_trip() {
        let a = twisted_m2();
        // t = 0 exponentiates to 1.
        let zero = CentralLog::nilpotent(a.zero());
        assert_eq!(calculus::star_exp(&a, &zero).unwrap(), a.unit());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let t = CentralLog::nilpotent(a.shift_up(&a.random_element(&mut rng, 0), 1));
            let u = calculus::star_exp(&a, &t).unwrap();
            let back = calculus::star_log(&a, &u).unwrap();
            assert!(back.phase.is_zero());
            assert_eq!(back.body, t.body);
        }
    }

    #[test]
    fn bch_matches_exponential_product() {
        let a = twisted_m2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let s = CentralLog::nilpotent(a.shift_up(&a.random_element(&mut rng, 0), 1));
            let t = CentralLog::nilpotent(a.shift_up(&a.random_element(&mut rng, 0), 1));
            let both = calculus::bch_compose(&a, &s, &t).unwrap();
            let lhs = a
                .star_product(
                    &calculus::star_exp(&a, &s).unwrap(),
                    &calculus::star_exp(&a, &t).unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, calculus::star_exp(&a, &both).unwrap());
        }
    }

    #[test]
    fn bch_degenerates_to_addition_when_commutative() {
        let a = Algebra::discrete(vec!["x".into(), "y".into()], n());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let s = CentralLog::nilpotent(a.shift_up(&a.random_element(&mut rng, 0), 1));
        let t = CentralLog::nilpotent(a.shift_up(&a.random_element(&mut rng, 0), 1));
        let both = calculus::bch_compose(&a, &s, &t).unwrap();
        assert_eq!(both.body, a.add(&s.body, &t.body));
    }

    #[test]
    fn star_exp_phase_domain() {
        let a = twisted_m2();
        // Quarter phases materialize as powers of i.
        let quarter = CentralLog { phase: Phase::Constant(rat(1, 4)), body: a.zero() };
        assert_eq!(
            calculus::star_exp(&a, &quarter).unwrap(),
            a.scale_gauss(&a.unit(), &Scalar::i())
        );
        let whole = CentralLog { phase: Phase::Constant(rat(3, 1)), body: a.zero() };
        assert_eq!(calculus::star_exp(&a, &whole).unwrap(), a.unit());
        // A third of a winding leaves Q(i).
        let third = CentralLog { phase: Phase::Constant(rat(1, 3)), body: a.zero() };
        assert!(matches!(
            calculus::star_exp(&a, &third),
            Err(StarError::DomainRestriction(_))
        ));
    }

    #[test]
    fn degree_cap_guards_commutative_product() {
        let a = Algebra::moyal(1, n(), 3);
        let x = a.generator(0);
        let x2 = a.classical_product(&x, &x).unwrap();
        assert!(matches!(
            a.star_product(&x2, &x2),
            Err(StarError::DegreeOverflow { degree: 4, cap: 3 })
        ));
    }

    #[test]
    fn coords_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for alg in [moyal1(), wick(), twisted_m2(), Algebra::discrete(vec!["a".into(), "b".into()], n())] {
            for _ in 0..5 {
                let f = alg.random_element(&mut rng, 3);
                let coords = alg.coords(&f, 3).unwrap();
                assert_eq!(alg.from_coords(&coords, 3).unwrap(), f);
            }
        }
    }

    #[test]
    fn flatten_is_multiplicative() {
        let a = twisted_m2();
        let ring = MatrixRing::new(&a, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let m1 = MatrixOverAlgebra::from_fn(&a, 2, 2, |_, _| a.random_element(&mut rng, 0));
        let m2 = MatrixOverAlgebra::from_fn(&a, 2, 2, |_, _| a.random_element(&mut rng, 0));
        let prod = m1.star_mul(&m2).unwrap();
        let (flat_alg, f1) = m1.flatten().unwrap();
        let (_, f2) = m2.flatten().unwrap();
        let (_, fp) = prod.flatten().unwrap();
        assert_eq!(flat_alg.star_product(&f1, &f2).unwrap(), fp);
        let _ = ring;
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraElement::Poly(p) => write!(f, "{p}"),
            AlgebraElement::Matrix(m) => {
                write!(f, "[")?;
                for i in 0..m.rows() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    for j in 0..m.cols() {
                        if j > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", m.get(i, j))?;
                    }
                }
                write!(f, "]")
            }
            AlgebraElement::Func(v) => {
                write!(f, "{{")?;
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "}}")
            }
        }
    }
}
