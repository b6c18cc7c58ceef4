//! The ordered ring tower: rationals, Gaussian rationals, and truncated
//! formal power series in λ.
//!
//! All types are exact and immutable. A [`FormalSeries`] holds coefficients
//! for λ^0 .. λ^N and every operation is performed modulo λ^(N+1); the
//! truncation order N is carried by the value and binary operations demand
//! matching orders. Real series are ordered by the sign of the lowest
//! nonvanishing coefficient, which makes the ring non-Archimedean: nλ < 1
//! for every integer n.
//!
//! The module is generic over the backing integer type; the crate root fixes
//! the `BigInt`-based aliases used everywhere else.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Bounds required of the backing integer type.
pub trait ScalarInt:
    num_integer::Integer + Roots + Signed + Clone + fmt::Debug + fmt::Display + 'static
{
}
impl<T> ScalarInt for T where
    T: num_integer::Integer + Roots + Signed + Clone + fmt::Debug + fmt::Display + 'static
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("mismatched truncation orders: {0} vs {1}")]
    MismatchedOrders(usize, usize),
    #[error("series is not invertible: classical part vanishes")]
    NonInvertible,
    #[error("series has a non-real coefficient at order {0}")]
    NonRealSeries(usize),
    #[error("no exact rational square root for the classical part")]
    NoExactRoot,
    #[error("square root requires a positive classical part")]
    NotPositive,
}

/// Sign trichotomy of a real series in the canonical order of R[[λ]].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// A Gaussian rational `re + im·i`, the coefficient field Q(i).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gauss<T: ScalarInt> {
    re: Ratio<T>,
    im: Ratio<T>,
}

impl<T: ScalarInt> Gauss<T> {
    pub fn new(re: Ratio<T>, im: Ratio<T>) -> Self {
        Gauss { re, im }
    }

    pub fn from_ratio(re: Ratio<T>) -> Self {
        Gauss { re, im: Ratio::zero() }
    }

    pub fn from_int(n: i64) -> Self
    where
        T: From<i64>,
    {
        Gauss::from_ratio(Ratio::from_integer(T::from(n)))
    }

    pub fn zero() -> Self {
        Gauss { re: Ratio::zero(), im: Ratio::zero() }
    }

    pub fn one() -> Self {
        Gauss { re: Ratio::one(), im: Ratio::zero() }
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        Gauss { re: Ratio::zero(), im: Ratio::one() }
    }

    pub fn re(&self) -> &Ratio<T> {
        &self.re
    }

    pub fn im(&self) -> &Ratio<T> {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugation, the involutive ring automorphism of Q(i).
    pub fn conj(&self) -> Self {
        Gauss { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `z̄·z`, a nonnegative rational; positive iff z ≠ 0.
    pub fn norm_sq(&self) -> Ratio<T> {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(Gauss { re: self.re.clone() / n.clone(), im: -self.im.clone() / n })
    }
}

impl<T: ScalarInt> Add for &Gauss<T> {
    type Output = Gauss<T>;
    fn add(self, rhs: &Gauss<T>) -> Gauss<T> {
        Gauss { re: self.re.clone() + rhs.re.clone(), im: self.im.clone() + rhs.im.clone() }
    }
}

impl<T: ScalarInt> Sub for &Gauss<T> {
    type Output = Gauss<T>;
    fn sub(self, rhs: &Gauss<T>) -> Gauss<T> {
        Gauss { re: self.re.clone() - rhs.re.clone(), im: self.im.clone() - rhs.im.clone() }
    }
}

impl<T: ScalarInt> Mul for &Gauss<T> {
    type Output = Gauss<T>;
    fn mul(self, rhs: &Gauss<T>) -> Gauss<T> {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re.clone() * rhs.im.clone() + self.im.clone() * rhs.re.clone();
        Gauss { re, im }
    }
}

impl<T: ScalarInt> Neg for &Gauss<T> {
    type Output = Gauss<T>;
    fn neg(self) -> Gauss<T> {
        Gauss { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl<T: ScalarInt> fmt::Display for Gauss<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
        }
    }
}

// ---------------------------------------------------------------------------
// Truncated formal power series
// ---------------------------------------------------------------------------

/// Truncated formal power series `Σ a_r λ^r` over Q(i), exact modulo λ^(N+1).
///
/// The coefficient vector always has length `order + 1`. Conjugation fixes λ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalSeries<T: ScalarInt> {
    coeffs: Vec<Gauss<T>>,
}

impl<T: ScalarInt> FormalSeries<T> {
    /// The zero series at truncation order `order`.
    pub fn zero(order: usize) -> Self {
        FormalSeries { coeffs: vec![Gauss::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Gauss::one(), order)
    }

    /// The deformation parameter λ itself.
    pub fn lambda(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Gauss::one();
        }
        s
    }

    pub fn constant(c: Gauss<T>, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from the given coefficients, truncating or padding to
    /// the requested order.
    pub fn from_coeffs(coeffs: Vec<Gauss<T>>, order: usize) -> Self {
        let mut c = coeffs;
        c.resize(order + 1, Gauss::zero());
        c.truncate(order + 1);
        FormalSeries { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, r: usize) -> &Gauss<T> {
        &self.coeffs[r]
    }

    pub fn coeffs(&self) -> &[Gauss<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Gauss::is_zero)
    }

    /// Classical part a₀.
    pub fn classical(&self) -> &Gauss<T> {
        &self.coeffs[0]
    }

    /// Least index with a nonvanishing coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Gauss::is_real)
    }

    fn check_orders(&self, rhs: &Self) -> Result<(), ScalarError> {
        if self.order() != rhs.order() {
            Err(ScalarError::MismatchedOrders(self.order(), rhs.order()))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.check_orders(rhs)?;
        Ok(self + rhs)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.check_orders(rhs)?;
        Ok(self - rhs)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.check_orders(rhs)?;
        Ok(self * rhs)
    }

    /// Coefficientwise conjugation; λ is fixed.
    pub fn conj(&self) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(Gauss::conj).collect() }
    }

    pub fn scale(&self, c: &Gauss<T>) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by λ^k (coefficients shift up, top ones fall off).
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut s = Self::zero(n);
        for r in 0..=n {
            if r + k <= n {
                s.coeffs[r + k] = self.coeffs[r].clone();
            }
        }
        s
    }

    /// Exact division by λ^k. Requires valuation ≥ k; the top k coefficients
    /// of the result are taken as zero, the canonical lift.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if k == 0 {
            return Some(self.clone());
        }
        if self.coeffs[..k.min(self.coeffs.len())].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let n = self.order();
        let mut s = Self::zero(n);
        for r in k..=n {
            s.coeffs[r - k] = self.coeffs[r].clone();
        }
        Some(s)
    }

    /// Inverse modulo λ^(N+1) by order-by-order recursion.
    ///
    /// The series is a unit iff its classical part is nonzero.
    pub fn invert(&self) -> Result<Self, ScalarError> {
        let a0 = self.classical().inverse().ok_or(ScalarError::NonInvertible)?;
        let n = self.order();
        let mut inv = Self::zero(n);
        inv.coeffs[0] = a0.clone();
        for m in 1..=n {
            // a·inv ≡ 1: coefficient m gives Σ_{r=0}^{m} a_r inv_{m-r} = 0.
            let mut acc = Gauss::zero();
            for r in 1..=m {
                acc = &acc + &(&self.coeffs[r] * &inv.coeffs[m - r]);
            }
            inv.coeffs[m] = &(-&acc) * &a0;
        }
        Ok(inv)
    }

    /// Divides by another series; exact when the divisor's valuation does not
    /// exceed this one's. `None` when not divisible.
    pub fn divide(&self, d: &Self) -> Option<Self> {
        let k = d.valuation()?;
        let shifted = d.shift_down(k).expect("valuation shift");
        let unit = shifted.invert().expect("unit after valuation shift");
        Some(&self.shift_down(k)? * &unit)
    }

    /// Sign of the series in the canonical order of R[[λ]]: the sign of the
    /// lowest nonvanishing coefficient.
    pub fn sign(&self) -> Result<Sign, ScalarError> {
        if let Some(r) = self.coeffs.iter().position(|c| !c.is_real()) {
            return Err(ScalarError::NonRealSeries(r));
        }
        match self.valuation() {
            None => Ok(Sign::Zero),
            Some(r) => {
                if self.coeffs[r].re().is_positive() {
                    Ok(Sign::Positive)
                } else {
                    Ok(Sign::Negative)
                }
            }
        }
    }

    /// `a ≤ b` in the order of R[[λ]]; errors if either series is not real.
    pub fn le(&self, rhs: &Self) -> Result<bool, ScalarError> {
        let diff = rhs.try_sub(self)?;
        Ok(!matches!(diff.sign()?, Sign::Negative))
    }

    /// Square root with positive classical part, by Hensel-style lifting.
    ///
    /// Requires a real series whose classical part is a positive rational
    /// perfect square; the result squares back to the input exactly modulo
    /// λ^(N+1).
    pub fn sqrt(&self) -> Result<Self, ScalarError> {
        if let Some(r) = self.coeffs.iter().position(|c| !c.is_real()) {
            return Err(ScalarError::NonRealSeries(r));
        }
        let a0 = self.classical().re();
        if !a0.is_positive() {
            return Err(ScalarError::NotPositive);
        }
        let root0 = ratio_sqrt(a0).ok_or(ScalarError::NoExactRoot)?;
        let n = self.order();
        let mut b = Self::zero(n);
        b.coeffs[0] = Gauss::from_ratio(root0.clone());
        let two_b0 = Ratio::from_integer(T::one() + T::one()) * root0;
        for m in 1..=n {
            // b² ≡ a at order m: 2 b₀ b_m + Σ_{r=1}^{m-1} b_r b_{m-r} = a_m.
            let mut acc = Gauss::zero();
            for r in 1..m {
                acc = &acc + &(&b.coeffs[r] * &b.coeffs[m - r]);
            }
            let rhs = &self.coeffs[m] - &acc;
            b.coeffs[m] = Gauss::from_ratio(rhs.re().clone() / two_b0.clone());
        }
        Ok(b)
    }

    /// Resizes to a new truncation order, truncating or zero-padding.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }
}

/// Exact square root of a nonnegative rational, if one exists.
pub fn ratio_sqrt<T: ScalarInt>(q: &Ratio<T>) -> Option<Ratio<T>> {
    if q.is_negative() {
        return None;
    }
    let ns = q.numer().sqrt();
    let ds = q.denom().sqrt();
    if &(ns.clone() * ns.clone()) == q.numer() && &(ds.clone() * ds.clone()) == q.denom() {
        Some(Ratio::new(ns, ds))
    } else {
        None
    }
}

impl<T: ScalarInt> Add for &FormalSeries<T> {
    type Output = FormalSeries<T>;
    fn add(self, rhs: &FormalSeries<T>) -> FormalSeries<T> {
        assert_eq!(self.order(), rhs.order(), "truncation orders must match");
        FormalSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: ScalarInt> Sub for &FormalSeries<T> {
    type Output = FormalSeries<T>;
    fn sub(self, rhs: &FormalSeries<T>) -> FormalSeries<T> {
        assert_eq!(self.order(), rhs.order(), "truncation orders must match");
        FormalSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: ScalarInt> Mul for &FormalSeries<T> {
    type Output = FormalSeries<T>;
    fn mul(self, rhs: &FormalSeries<T>) -> FormalSeries<T> {
        assert_eq!(self.order(), rhs.order(), "truncation orders must match");
        let n = self.order();
        let mut coeffs = vec![Gauss::zero(); n + 1];
        for (r, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (s, b) in rhs.coeffs.iter().enumerate() {
                if r + s > n {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[r + s] = &coeffs[r + s] + &(a * b);
            }
        }
        FormalSeries { coeffs }
    }
}

impl<T: ScalarInt> Neg for &FormalSeries<T> {
    type Output = FormalSeries<T>;
    fn neg(self) -> FormalSeries<T> {
        FormalSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<T: ScalarInt> fmt::Display for FormalSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match r {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})λ")?,
                _ => write!(f, "({c})λ^{r}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Checked arithmetic entry point matching the serialized operation kinds.
pub fn series_arith<T: ScalarInt>(
    a: &FormalSeries<T>,
    b: &FormalSeries<T>,
    kind: ArithKind,
) -> Result<FormalSeries<T>, ScalarError> {
    match kind {
        ArithKind::Add => a.try_add(b),
        ArithKind::Sub => a.try_sub(b),
        ArithKind::Mul => a.try_mul(b),
        ArithKind::Conj => Ok(a.conj()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Conj,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{gauss, rat, FormalScalar, Scalar};

    fn fs(coeffs: &[(i64, i64)]) -> FormalScalar {
        FormalScalar::from_coeffs(
            coeffs.iter().map(|&(n, d)| Scalar::from_ratio(rat(n, d))).collect(),
            6,
        )
    }

    #[test]
    fn difference_of_squares() {
        let one = FormalScalar::one(6);
        let l = FormalScalar::lambda(6);
        let a = &one + &l;
        let b = &one - &l;
        let mut expect = FormalScalar::one(6);
        expect = &expect - &l.shift_up(1);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn conjugation_fixes_lambda() {
        let il = FormalScalar::lambda(6).scale(&Scalar::i());
        assert_eq!(il.conj(), il.scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn geometric_series_telescopes() {
        // (Σ λ^r)·(1 − λ) = 1 through order N; oracle is the direct
        // convolution of the two coefficient sequences.
        let n = 6;
        let geo = FormalScalar::from_coeffs(vec![Scalar::one(); n + 1], n);
        let fac = &FormalScalar::one(n) - &FormalScalar::lambda(n);
        let mut conv = vec![Scalar::zero(); n + 1];
        for r in 0..=n {
            // coefficients of the factor: 1, -1, 0, 0, ...
            conv[r] = Scalar::one();
            if r >= 1 {
                conv[r] = &conv[r] - &Scalar::one();
            }
        }
        assert_eq!(&geo * &fac, FormalScalar::from_coeffs(conv, n));
        assert_eq!(&geo * &fac, FormalScalar::one(n));
    }

    #[test]
    fn mismatched_orders_error() {
        let a = FormalScalar::one(6);
        let b = FormalScalar::one(5);
        assert!(matches!(a.try_add(&b), Err(ScalarError::MismatchedOrders(6, 5))));
    }

    #[test]
    fn invert_one_and_alternating() {
        let one = FormalScalar::one(6);
        assert_eq!(one.invert().unwrap(), one);
        let a = &one + &FormalScalar::lambda(6);
        let inv = a.invert().unwrap();
        let expect = fs(&[(1, 1), (-1, 1), (1, 1), (-1, 1), (1, 1), (-1, 1), (1, 1)]);
        assert_eq!(inv, expect);
        assert_eq!(&a * &inv, one);
    }

    #[test]
    fn lambda_not_invertible() {
        assert!(matches!(FormalScalar::lambda(6).invert(), Err(ScalarError::NonInvertible)));
    }

    #[test]
    fn sign_examples() {
        // 3λ² − 7λ³ is positive: lowest nonvanishing coefficient is 3.
        let a = fs(&[(0, 1), (0, 1), (3, 1), (-7, 1)]);
        assert_eq!(a.sign().unwrap(), Sign::Positive);
        assert_eq!(FormalScalar::zero(6).sign().unwrap(), Sign::Zero);
        // −λ + 100λ² is negative, the non-Archimedean order at work.
        let b = fs(&[(0, 1), (-1, 1), (100, 1)]);
        assert_eq!(b.sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn non_archimedean_witness() {
        // nλ < 1 for n up to 10^6.
        for n in [1i64, 17, 1_000, 999_983, 1_000_000] {
            let nl = FormalScalar::lambda(6).scale(&Scalar::from_ratio(rat(n, 1)));
            let one = FormalScalar::one(6);
            assert_eq!((&one - &nl).sign().unwrap(), Sign::Positive);
        }
    }

    #[test]
    fn non_real_series_rejected() {
        let a = FormalScalar::constant(gauss(0, 1, 1, 1), 6);
        assert!(matches!(a.sign(), Err(ScalarError::NonRealSeries(0))));
    }

    #[test]
    fn sqrt_perfect_square() {
        // 1 + 2λ + λ² = (1 + λ)².
        let a = fs(&[(1, 1), (2, 1), (1, 1)]);
        let r = a.sqrt().unwrap();
        assert_eq!(r, fs(&[(1, 1), (1, 1)]));
        let four = fs(&[(4, 1)]);
        assert_eq!(four.sqrt().unwrap(), fs(&[(2, 1)]));
    }

    #[test]
    fn sqrt_one_plus_lambda() {
        let a = fs(&[(1, 1), (1, 1)]);
        let r = a.sqrt().unwrap();
        assert_eq!(r.coeff(1), &Scalar::from_ratio(rat(1, 2)));
        assert_eq!(r.coeff(2), &Scalar::from_ratio(rat(-1, 8)));
        assert_eq!(&r * &r, a);
    }

    #[test]
    fn sqrt_errors() {
        assert!(matches!(fs(&[(2, 1)]).sqrt(), Err(ScalarError::NoExactRoot)));
        assert!(matches!(fs(&[(-1, 1)]).sqrt(), Err(ScalarError::NotPositive)));
        assert!(matches!(FormalScalar::lambda(6).sqrt(), Err(ScalarError::NotPositive)));
    }

    #[test]
    fn gauss_norm_positive() {
        let z = gauss(3, 7, -2, 5);
        assert!(z.norm_sq().is_positive());
        assert!(Scalar::zero().norm_sq().is_zero());
        let inv = z.inverse().unwrap();
        assert_eq!(&z * &inv, Scalar::one());
    }

    #[test]
    fn random_units_invert_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let one = FormalScalar::one(6);
        for _ in 0..1000 {
            let coeffs: Vec<Scalar> = (0..=6)
                .map(|_| {
                    gauss(
                        rng.gen_range(-9..=9),
                        rng.gen_range(1..=9),
                        rng.gen_range(-9..=9),
                        rng.gen_range(1..=9),
                    )
                })
                .collect();
            let mut a = FormalScalar::from_coeffs(coeffs, 6);
            if a.classical().is_zero() {
                a = &a + &one;
            }
            let inv = a.invert().unwrap();
            assert_eq!(&a * &inv, one);
            assert_eq!(&inv * &a, one);
        }
    }
}
