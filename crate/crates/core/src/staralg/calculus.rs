//! Star calculus: order-by-order inverses, binomial inverse square roots,
//! star exponentials and logarithms on their decidable domain, and the BCH
//! composition. Everything is generic over a [`StarRing`] so the same code
//! runs on algebra elements and on matrices over an algebra.

use crate::{rat, FormalScalar, Rational, Scalar};

use super::matrix::{MatrixOverAlgebra, MatrixRing};
use super::{Algebra, AlgebraElement, AlgebraKind, StarError};

/// The operations the order-by-order solvers need from a unital *-ring whose
/// elements are λ-filtered.
pub trait StarRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn order(&self) -> usize;
    fn zero_elem(&self) -> Self::Elem;
    fn unit_elem(&self) -> Self::Elem;
    fn add_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale_elem(&self, a: &Self::Elem, s: &Scalar) -> Self::Elem;
    fn mul_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, StarError>;
    fn classical_mul_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, StarError>;
    fn involution_elem(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero_elem(&self, a: &Self::Elem) -> bool;
    fn valuation_elem(&self, a: &Self::Elem) -> Option<usize>;
    fn lambda_coeff_elem(&self, a: &Self::Elem, r: usize) -> Self::Elem;
    fn shift_up_elem(&self, a: &Self::Elem, r: usize) -> Self::Elem;
    /// Inverse of the classical part in the undeformed ring, embedded as a
    /// classical element.
    fn classical_inverse_elem(&self, a: &Self::Elem) -> Result<Self::Elem, StarError>;
}

impl StarRing for Algebra {
    type Elem = AlgebraElement;

    fn order(&self) -> usize {
        Algebra::order(self)
    }
    fn zero_elem(&self) -> AlgebraElement {
        self.zero()
    }
    fn unit_elem(&self) -> AlgebraElement {
        self.unit()
    }
    fn add_elem(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.add(a, b)
    }
    fn sub_elem(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.sub(a, b)
    }
    fn scale_elem(&self, a: &AlgebraElement, s: &Scalar) -> AlgebraElement {
        self.scale_gauss(a, s)
    }
    fn mul_elem(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, StarError> {
        self.star_product(a, b)
    }
    fn classical_mul_elem(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement, StarError> {
        self.classical_product(a, b)
    }
    fn involution_elem(&self, a: &AlgebraElement) -> AlgebraElement {
        self.involution(a)
    }
    fn is_zero_elem(&self, a: &AlgebraElement) -> bool {
        self.is_zero(a)
    }
    fn valuation_elem(&self, a: &AlgebraElement) -> Option<usize> {
        self.valuation(a)
    }
    fn lambda_coeff_elem(&self, a: &AlgebraElement, r: usize) -> AlgebraElement {
        self.lambda_coeff(a, r)
    }
    fn shift_up_elem(&self, a: &AlgebraElement, r: usize) -> AlgebraElement {
        self.shift_up(a, r)
    }
    fn classical_inverse_elem(&self, a: &AlgebraElement) -> Result<AlgebraElement, StarError> {
        match (self.kind(), a) {
            (AlgebraKind::TwistedMatrix { .. }, AlgebraElement::Matrix(m)) => {
                let inv = m.classical().invert().ok_or(StarError::NonInvertibleClassicalPart)?;
                Ok(AlgebraElement::Matrix(inv))
            }
            (AlgebraKind::Discrete { .. }, AlgebraElement::Func(v)) => {
                let order = self.order();
                let mut out = Vec::with_capacity(v.len());
                for s in v {
                    let c = s.classical().inverse().ok_or(StarError::NonInvertibleClassicalPart)?;
                    out.push(FormalScalar::constant(c, order));
                }
                Ok(AlgebraElement::Func(out))
            }
            (AlgebraKind::Moyal { .. } | AlgebraKind::Wick, AlgebraElement::Poly(p)) => {
                let cls = p.lambda_coeff(0);
                if cls.degree().unwrap_or(0) > 0 {
                    return Err(StarError::NonInvertibleClassicalPart);
                }
                let c = cls
                    .coeff(&vec![0; p.gens()])
                    .classical()
                    .inverse()
                    .ok_or(StarError::NonInvertibleClassicalPart)?;
                Ok(self.scalar(&FormalScalar::constant(c, self.order())))
            }
            _ => Err(StarError::KindMismatch),
        }
    }
}

impl StarRing for MatrixRing {
    type Elem = MatrixOverAlgebra;

    fn order(&self) -> usize {
        self.algebra.order()
    }
    fn zero_elem(&self) -> MatrixOverAlgebra {
        MatrixOverAlgebra::zero(&self.algebra, self.n, self.n)
    }
    fn unit_elem(&self) -> MatrixOverAlgebra {
        MatrixOverAlgebra::identity(&self.algebra, self.n)
    }
    fn add_elem(&self, a: &MatrixOverAlgebra, b: &MatrixOverAlgebra) -> MatrixOverAlgebra {
        a.add(b)
    }
    fn sub_elem(&self, a: &MatrixOverAlgebra, b: &MatrixOverAlgebra) -> MatrixOverAlgebra {
        a.sub(b)
    }
    fn scale_elem(&self, a: &MatrixOverAlgebra, s: &Scalar) -> MatrixOverAlgebra {
        a.scale_gauss(s)
    }
    fn mul_elem(
        &self,
        a: &MatrixOverAlgebra,
        b: &MatrixOverAlgebra,
    ) -> Result<MatrixOverAlgebra, StarError> {
        a.star_mul(b)
    }
    fn classical_mul_elem(
        &self,
        a: &MatrixOverAlgebra,
        b: &MatrixOverAlgebra,
    ) -> Result<MatrixOverAlgebra, StarError> {
        a.classical_mul(b)
    }
    fn involution_elem(&self, a: &MatrixOverAlgebra) -> MatrixOverAlgebra {
        a.involution()
    }
    fn is_zero_elem(&self, a: &MatrixOverAlgebra) -> bool {
        a.is_zero()
    }
    fn valuation_elem(&self, a: &MatrixOverAlgebra) -> Option<usize> {
        a.valuation()
    }
    fn lambda_coeff_elem(&self, a: &MatrixOverAlgebra, r: usize) -> MatrixOverAlgebra {
        a.lambda_coeff(r)
    }
    fn shift_up_elem(&self, a: &MatrixOverAlgebra, r: usize) -> MatrixOverAlgebra {
        a.shift_up(r)
    }
    fn classical_inverse_elem(&self, a: &MatrixOverAlgebra) -> Result<MatrixOverAlgebra, StarError> {
        MatrixRing::classical_inverse(self, a)
    }
}

/// Two-sided star inverse by Newton iteration after inverting the classical
/// part in the undeformed ring; the residual order doubles each step.
pub fn star_inverse<R: StarRing>(ring: &R, u: &R::Elem) -> Result<R::Elem, StarError> {
    let mut v = ring.classical_inverse_elem(u)?;
    let unit = ring.unit_elem();
    for _ in 0..=(ring.order() + 1).ilog2() as usize + 1 {
        let resid = ring.sub_elem(&unit, &ring.mul_elem(u, &v)?);
        if ring.is_zero_elem(&resid) {
            break;
        }
        v = ring.add_elem(&v, &ring.mul_elem(&v, &resid)?);
    }
    let right = ring.sub_elem(&unit, &ring.mul_elem(u, &v)?);
    let left = ring.sub_elem(&unit, &ring.mul_elem(&v, u)?);
    if ring.is_zero_elem(&right) && ring.is_zero_elem(&left) {
        Ok(v)
    } else {
        Err(StarError::SolveFailure("star inverse did not converge".into()))
    }
}

/// Binomial coefficient `binom(−1/2, k)` as an exact rational.
pub fn binom_minus_half(k: usize) -> Rational {
    let mut acc = rat(1, 1);
    for j in 0..k {
        // (−1/2 − j) / (j + 1)
        acc *= rat(-1 - 2 * j as i64, 2 * (j as i64 + 1));
    }
    acc
}

/// `(1 + X)^{−1/2}` for X ≡ 0 mod λ, via the finite binomial series.
pub fn binomial_invsqrt<R: StarRing>(ring: &R, x: &R::Elem) -> Result<R::Elem, StarError> {
    if !ring.is_zero_elem(x) && ring.valuation_elem(x) == Some(0) {
        return Err(StarError::NonNilpotentInput);
    }
    let mut acc = ring.unit_elem();
    let mut power = ring.unit_elem();
    for k in 1..=ring.order() {
        power = ring.mul_elem(&power, x)?;
        if ring.is_zero_elem(&power) {
            break;
        }
        let coeff = Scalar::from_ratio(binom_minus_half(k));
        acc = ring.add_elem(&acc, &ring.scale_elem(&power, &coeff));
    }
    Ok(acc)
}

/// `Exp(t) = Σ t^{⋆k}/k!` for t ≡ 0 mod λ; the series terminates at the
/// truncation order.
pub fn star_exp_nilpotent<R: StarRing>(ring: &R, t: &R::Elem) -> Result<R::Elem, StarError> {
    if !ring.is_zero_elem(t) && ring.valuation_elem(t) == Some(0) {
        return Err(StarError::NonNilpotentInput);
    }
    let mut acc = ring.unit_elem();
    let mut power = ring.unit_elem();
    let mut fact = rat(1, 1);
    for k in 1..=ring.order() {
        power = ring.mul_elem(&power, t)?;
        if ring.is_zero_elem(&power) {
            break;
        }
        fact *= rat(k as i64, 1);
        let coeff = Scalar::from_ratio(rat(1, 1) / fact.clone());
        acc = ring.add_elem(&acc, &ring.scale_elem(&power, &coeff));
    }
    Ok(acc)
}

/// `Log(u) = Σ (−1)^{k+1}(u−1)^{⋆k}/k` for u = 1 + O(λ).
pub fn star_log_unipotent<R: StarRing>(ring: &R, u: &R::Elem) -> Result<R::Elem, StarError> {
    let w = ring.sub_elem(u, &ring.unit_elem());
    if !ring.is_zero_elem(&w) && ring.valuation_elem(&w) == Some(0) {
        return Err(StarError::DomainRestriction(
            "star_log needs a unipotent argument 1 + O(λ)".into(),
        ));
    }
    let mut acc = ring.zero_elem();
    let mut power = ring.unit_elem();
    for k in 1..=ring.order() {
        power = ring.mul_elem(&power, &w)?;
        if ring.is_zero_elem(&power) {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let coeff = Scalar::from_ratio(rat(sign, k as i64));
        acc = ring.add_elem(&acc, &ring.scale_elem(&power, &coeff));
    }
    Ok(acc)
}

/// Hermitian square root: given Hermitian `a` with classical part `b0*·b0`
/// for an invertible classical `b0`, solves `b* ⋆ b = a` order by order with
/// classical part `b0`.
pub fn star_square_root<R: StarRing>(
    ring: &R,
    a: &R::Elem,
    b0: &R::Elem,
) -> Result<R::Elem, StarError> {
    if ring.involution_elem(a) != *a {
        return Err(StarError::SolveFailure("square-root input must be Hermitian".into()));
    }
    let b0 = ring.lambda_coeff_elem(b0, 0);
    let classical = ring.classical_mul_elem(&ring.involution_elem(&b0), &b0)?;
    if classical != ring.lambda_coeff_elem(a, 0) {
        return Err(StarError::SolveFailure(
            "classical part of the input does not equal b0*·b0".into(),
        ));
    }
    let b0_inv_star = ring.involution_elem(&ring.classical_inverse_elem(&b0)?);
    let half = Scalar::from_ratio(rat(1, 2));
    let mut b = b0.clone();
    for m in 1..=ring.order() {
        let resid = ring.sub_elem(a, &ring.mul_elem(&ring.involution_elem(&b), &b)?);
        if ring.is_zero_elem(&resid) {
            break;
        }
        match ring.valuation_elem(&resid) {
            Some(v) if v >= m => {
                if v > m {
                    continue;
                }
            }
            _ => return Err(StarError::SolveFailure("residual below current order".into())),
        }
        let r_m = ring.lambda_coeff_elem(&resid, m);
        // b_m = ½ (b0*)⁻¹ r_m solves b0*·b_m + b_m*·b0 = r_m classically.
        let corr = ring.scale_elem(&ring.classical_mul_elem(&b0_inv_star, &r_m)?, &half);
        b = ring.add_elem(&b, &ring.shift_up_elem(&corr, m));
    }
    let replay = ring.mul_elem(&ring.involution_elem(&b), &b)?;
    if replay == *a {
        Ok(b)
    } else {
        Err(StarError::SolveFailure("square-root replay failed".into()))
    }
}

// ---------------------------------------------------------------------------
// Star exponentials with 2πi-rational phases
// ---------------------------------------------------------------------------

/// The classical part of an admissible star logarithm: a rational multiple q
/// of the formal symbol 2πi, constant or varying over the points of a
/// discrete algebra. The symbol is never evaluated; exponentials materialize
/// only when 4q is an integer, where `e^{2πi·q} = i^{4q}` lies in Q(i).
#[derive(Debug, Clone, PartialEq)]
pub enum Phase {
    Constant(Rational),
    PerPoint(Vec<Rational>),
}

impl Phase {
    pub fn zero() -> Self {
        Phase::Constant(rat(0, 1))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Phase::Constant(q) => q == &rat(0, 1),
            Phase::PerPoint(v) => v.iter().all(|q| q == &rat(0, 1)),
        }
    }

    pub fn add(&self, rhs: &Phase) -> Phase {
        match (self, rhs) {
            (Phase::Constant(a), Phase::Constant(b)) => Phase::Constant(a.clone() + b.clone()),
            (Phase::PerPoint(a), Phase::PerPoint(b)) => {
                assert_eq!(a.len(), b.len());
                Phase::PerPoint(a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
            }
            (Phase::Constant(a), Phase::PerPoint(b)) | (Phase::PerPoint(b), Phase::Constant(a)) => {
                Phase::PerPoint(b.iter().map(|y| a.clone() + y.clone()).collect())
            }
        }
    }

    pub fn neg(&self) -> Phase {
        match self {
            Phase::Constant(a) => Phase::Constant(-a.clone()),
            Phase::PerPoint(v) => Phase::PerPoint(v.iter().map(|q| -q.clone()).collect()),
        }
    }

    fn values(&self) -> Vec<Rational> {
        match self {
            Phase::Constant(q) => vec![q.clone()],
            Phase::PerPoint(v) => v.clone(),
        }
    }

    /// All windings integral: the materialized phase factor is 1.
    pub fn is_integral(&self) -> bool {
        self.values().iter().all(|q| q.denom() == &crate::Int::from(1))
    }

    /// All windings quarter-integral: the factor lies in {1, i, −1, −i}.
    pub fn is_quarter_integral(&self) -> bool {
        let four = rat(4, 1);
        self.values().iter().all(|q| (q.clone() * four.clone()).denom() == &crate::Int::from(1))
    }

    /// Constant across points and equal to a single rational.
    pub fn constant_value(&self) -> Option<Rational> {
        match self {
            Phase::Constant(q) => Some(q.clone()),
            Phase::PerPoint(v) => {
                let first = v.first()?;
                v.iter().all(|q| q == first).then(|| first.clone())
            }
        }
    }
}

/// A star logarithm `2πi·q + t'` with q rational (the phase) and t' ≡ 0
/// mod λ (the body). This is the decidable domain of the star exponential.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralLog {
    pub phase: Phase,
    pub body: AlgebraElement,
}

impl CentralLog {
    pub fn nilpotent(body: AlgebraElement) -> Self {
        CentralLog { phase: Phase::zero(), body }
    }

    pub fn neg(&self, algebra: &Algebra) -> Self {
        CentralLog { phase: self.phase.neg(), body: algebra.neg(&self.body) }
    }
}

fn quarter_root_of_unity(q: &Rational) -> Result<Scalar, StarError> {
    let four = rat(4, 1);
    let fourq = q.clone() * four;
    if fourq.denom() != &crate::Int::from(1) {
        return Err(StarError::DomainRestriction(format!(
            "phase {q} is not quarter-integral; e^(2πi·q) leaves Q(i)"
        )));
    }
    let four_int = crate::Int::from(4);
    let rem = ((fourq.numer() % &four_int) + &four_int) % &four_int;
    Ok(if rem == crate::Int::from(0) {
        Scalar::one()
    } else if rem == crate::Int::from(1) {
        Scalar::i()
    } else if rem == crate::Int::from(2) {
        Scalar::from_int(-1)
    } else {
        Scalar::new(rat(0, 1), rat(-1, 1))
    })
}

/// Materializes the phase factor `e^{2πi·q}` as an algebra element; requires
/// 4q ∈ Z (pointwise).
pub fn materialize_phase(algebra: &Algebra, phase: &Phase) -> Result<AlgebraElement, StarError> {
    match phase {
        Phase::Constant(q) => {
            let z = quarter_root_of_unity(q)?;
            Ok(algebra.scale_gauss(&algebra.unit(), &z))
        }
        Phase::PerPoint(v) => {
            let AlgebraKind::Discrete { points } = algebra.kind() else {
                return Err(StarError::DomainRestriction(
                    "per-point phases require a discrete algebra".into(),
                ));
            };
            if points.len() != v.len() {
                return Err(StarError::KindMismatch);
            }
            let order = algebra.order();
            let mut vals = Vec::with_capacity(v.len());
            for q in v {
                vals.push(FormalScalar::constant(quarter_root_of_unity(q)?, order));
            }
            Ok(AlgebraElement::Func(vals))
        }
    }
}

/// Star exponential on the decidable domain. The phase must be
/// quarter-integral so the factor stays in Q(i); the body exponential is the
/// finite nilpotent series.
pub fn star_exp(algebra: &Algebra, t: &CentralLog) -> Result<AlgebraElement, StarError> {
    if !algebra.is_zero(&t.body) && algebra.valuation(&t.body) == Some(0) {
        return Err(StarError::DomainRestriction(
            "star_exp body must vanish at order zero".into(),
        ));
    }
    let factor = materialize_phase(algebra, &t.phase)?;
    let body = star_exp_nilpotent(algebra, &t.body)?;
    algebra.star_product(&factor, &body)
}

/// Star logarithm with the principal quarter-phase: the classical part must
/// be a fourth root of unity times the unit (pointwise for discrete
/// algebras), which fixes q ∈ {0, ¼, ½, ¾}.
pub fn star_log(algebra: &Algebra, u: &AlgebraElement) -> Result<CentralLog, StarError> {
    let classify = |c: &Scalar| -> Result<Rational, StarError> {
        if c == &Scalar::one() {
            Ok(rat(0, 1))
        } else if c == &Scalar::i() {
            Ok(rat(1, 4))
        } else if c == &Scalar::from_int(-1) {
            Ok(rat(1, 2))
        } else if c == &Scalar::new(rat(0, 1), rat(-1, 1)) {
            Ok(rat(3, 4))
        } else {
            Err(StarError::DomainRestriction(format!(
                "classical part {c} is not a fourth root of unity"
            )))
        }
    };
    let phase = match (algebra.kind(), u) {
        (AlgebraKind::Discrete { .. }, AlgebraElement::Func(v)) => {
            let mut qs = Vec::with_capacity(v.len());
            for s in v {
                qs.push(classify(s.classical())?);
            }
            Phase::PerPoint(qs)
        }
        _ => {
            // The classical part must be ζ·1 for a central constant ζ; note
            // the comparison is against the classical part of the ⋆-unit,
            // which is the plain identity.
            let cls = algebra.classical_part(u);
            let unit_cls = algebra.classical_part(&algebra.unit());
            let candidates = [
                Scalar::one(),
                Scalar::i(),
                Scalar::from_int(-1),
                Scalar::new(rat(0, 1), rat(-1, 1)),
            ];
            let mut found = None;
            for z in candidates {
                if cls == algebra.scale_gauss(&unit_cls, &z) {
                    found = Some(z);
                    break;
                }
            }
            let z = found.ok_or_else(|| {
                StarError::DomainRestriction(
                    "classical part is not a fourth root of unity times the unit".into(),
                )
            })?;
            Phase::Constant(classify(&z)?)
        }
    };
    let inv_factor = materialize_phase(algebra, &phase.neg())?;
    let unipotent = algebra.star_product(u, &inv_factor)?;
    let body = star_log_unipotent(algebra, &unipotent)?;
    Ok(CentralLog { phase, body })
}

/// BCH composition: `Exp(s) ⋆ Exp(t) = Exp(s ∘⋆ t)`. Phases are central and
/// add exactly; the bodies compose through the finite exp/log series.
pub fn bch_compose(algebra: &Algebra, s: &CentralLog, t: &CentralLog) -> Result<CentralLog, StarError> {
    let es = star_exp_nilpotent(algebra, &s.body)?;
    let et = star_exp_nilpotent(algebra, &t.body)?;
    let body = star_log_unipotent(algebra, &algebra.star_product(&es, &et)?)?;
    Ok(CentralLog { phase: s.phase.add(&t.phase), body })
}

/// Manufactures a deformed product by pushing the base product through an
/// equivalence transform: the returned algebra multiplies by
/// `T⁻¹(T(a)·T(b))` relative to the base. The boolean flags whether T is
/// *-compatible, i.e. whether the twisted product is again Hermitian.
pub fn twist_algebra(
    base: &Algebra,
    t: &super::EquivalenceTransform,
) -> Result<(Algebra, bool), StarError> {
    let AlgebraKind::TwistedMatrix { dim, twist } = base.kind() else {
        return Err(StarError::KindMismatch);
    };
    if t.dim() != *dim || t.order() != base.order() {
        return Err(StarError::KindMismatch);
    }
    let composed = twist.compose(t);
    let compatible = t.is_star_compatible();
    Ok((Algebra::twisted_matrix(*dim, composed, base.order()), compatible))
}
