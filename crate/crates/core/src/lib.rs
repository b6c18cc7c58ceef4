//! Exact-arithmetic representation theory for truncated star-product algebras.
//!
//! Everything in this crate is computed exactly over the Gaussian rationals,
//! with formal power series in the deformation parameter λ truncated at a
//! configurable order. The layers build on each other:
//!
//! * [`scalars`] — the ordered ring tower Q ⊂ Q(i) and truncated series
//!   Q\[\[λ\]\], Q(i)\[\[λ\]\], with ordering, inversion and square roots;
//! * [`linalg`] — graded linear algebra over the truncated series ring
//!   (order-by-order solves, kernels, Hermitian congruence diagonalization);
//! * [`staralg`] — Hermitian star-product algebras (Moyal, Wick, twisted
//!   matrix, discrete pointwise), matrices over them, and star calculus;
//! * [`positivity`] — positive functionals, Gram matrices, certificates;
//! * [`prehilbert`] — inner-product modules, adjointable operators,
//!   representations and the classical-limit functor;
//! * [`gns`] — Gel'fand ideals and GNS representations;
//! * [`morita`] — projection deformation, Rieffel induction, equivalence
//!   bimodules;
//! * [`cover`] — deformed vector bundles over finite covers, gluing,
//!   endomorphism transport, and Čech class arithmetic.
//!
//! The scalar layer is generic over the backing integer type; the rest of the
//! crate works with the [`Int`]-based aliases below.

pub mod cover;
pub mod fixtures;
pub mod gns;
pub mod json;
pub mod linalg;
pub mod morita;
pub mod positivity;
pub mod prehilbert;
pub mod report;
pub mod scalars;
pub mod staralg;

/// Backing integer type for all exact arithmetic.
pub type Int = num_bigint::BigInt;
/// Rational numbers in reduced form with positive denominator.
pub type Rational = num_rational::Ratio<Int>;
/// Gaussian rationals, the coefficient field Q(i).
pub type Scalar = scalars::Gauss<Int>;
/// Truncated formal power series in λ over Q(i).
pub type FormalScalar = scalars::FormalSeries<Int>;

/// Default truncation order N: arithmetic is exact modulo λ^(N+1).
pub const DEFAULT_ORDER: usize = 6;
/// Default total-degree cap for polynomial models.
pub const DEFAULT_DEGREE_CAP: usize = 10;

/// Convenience constructor for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

/// Convenience constructor for a Gaussian rational `re + im·i`.
pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Scalar {
    Scalar::new(rat(re_num, re_den), rat(im_num, im_den))
}
