use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::{CycScalar, CyclotomicField, RootOrder, ScalarError};

/// Values that can appear as exponents of `eps` or as arguments of `[x]_eps`.
pub trait ExponentValue:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
{
    fn from_int(k: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn scale(&self, k: i64) -> Self;
}

impl ExponentValue for BigRational {
    fn from_int(k: i64) -> Self {
        BigRational::from_integer(k.into())
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn scale(&self, k: i64) -> Self {
        self * BigRational::from_integer(k.into())
    }
}

impl ExponentValue for Complex64 {
    fn from_int(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn scale(&self, k: i64) -> Self {
        self * k as f64
    }
}

/// A ring object supplying the scalar arithmetic used by modules.
///
/// Both implementations expose the same operations; the exact one works in
/// `Q(eps)`, the float one in `C` with `eps = exp(2 pi i / l)`.
pub trait Backend: Clone + fmt::Debug + Send + Sync {
    type Scalar: Clone + fmt::Debug + fmt::Display + Send + Sync;
    type Exponent: ExponentValue;

    fn order(&self) -> RootOrder;
    fn name(&self) -> &'static str;
    fn is_exact(&self) -> bool;

    /// Comparison tolerance; `None` when equality is exact.
    fn tolerance_hint(&self) -> Option<f64> {
        None
    }

    fn zero(&self) -> Self::Scalar;
    fn one(&self) -> Self::Scalar;
    fn from_int(&self, k: i64) -> Self::Scalar;
    fn from_bigint(&self, k: &BigInt) -> Self::Scalar;
    fn from_rational(&self, r: &BigRational) -> Self::Scalar;

    fn add(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn sub(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn mul(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn neg(&self, a: &Self::Scalar) -> Self::Scalar;
    fn inv(&self, a: &Self::Scalar) -> Result<Self::Scalar, ScalarError>;
    fn is_zero(&self, a: &Self::Scalar) -> bool;
    fn scalar_eq(&self, a: &Self::Scalar, b: &Self::Scalar) -> bool;

    fn eps_pow_int(&self, k: i64) -> Self::Scalar;
    fn eps_pow(&self, e: &Self::Exponent) -> Result<Self::Scalar, ScalarError>;
    fn q_int_int(&self, r: i64) -> Self::Scalar;
    fn q_int(&self, x: &Self::Exponent) -> Result<Self::Scalar, ScalarError>;

    /// Integer value of an exponent, when it has one.
    fn exponent_as_int(&self, e: &Self::Exponent) -> Option<i64>;

    fn to_complex(&self, a: &Self::Scalar) -> Complex64;

    fn pow(&self, a: &Self::Scalar, e: i64) -> Result<Self::Scalar, ScalarError> {
        let mut base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        Ok(acc)
    }

    fn sum<'a, I>(&self, items: I) -> Self::Scalar
    where
        I: IntoIterator<Item = &'a Self::Scalar>,
        Self::Scalar: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// Exact arithmetic in `Q(eps)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactBackend {
    field: CyclotomicField,
}

impl ExactBackend {
    pub fn new(order: RootOrder) -> Self {
        ExactBackend {
            field: CyclotomicField::new(order),
        }
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }
}

impl Backend for ExactBackend {
    type Scalar = CycScalar;
    type Exponent = BigRational;

    fn order(&self) -> RootOrder {
        self.field.order()
    }
    fn name(&self) -> &'static str {
        "exact"
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn zero(&self) -> CycScalar {
        self.field.zero()
    }
    fn one(&self) -> CycScalar {
        self.field.one()
    }
    fn from_int(&self, k: i64) -> CycScalar {
        self.field.from_int(k)
    }
    fn from_bigint(&self, k: &BigInt) -> CycScalar {
        self.field.from_bigint(k.clone())
    }
    fn from_rational(&self, r: &BigRational) -> CycScalar {
        self.field.from_rational(r)
    }
    fn add(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        a + b
    }
    fn sub(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        a - b
    }
    fn mul(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        a * b
    }
    fn neg(&self, a: &CycScalar) -> CycScalar {
        -a
    }
    fn inv(&self, a: &CycScalar) -> Result<CycScalar, ScalarError> {
        a.inv()
    }
    fn is_zero(&self, a: &CycScalar) -> bool {
        a.is_zero()
    }
    fn scalar_eq(&self, a: &CycScalar, b: &CycScalar) -> bool {
        a == b
    }
    fn eps_pow_int(&self, k: i64) -> CycScalar {
        self.field.eps_pow_int(k)
    }
    fn eps_pow(&self, e: &BigRational) -> Result<CycScalar, ScalarError> {
        self.field.eps_pow(e)
    }
    fn q_int_int(&self, r: i64) -> CycScalar {
        self.field.q_int(r)
    }
    fn q_int(&self, x: &BigRational) -> Result<CycScalar, ScalarError> {
        let r = self.field.exponent_residue(x)?;
        Ok(self.field.q_int(r))
    }
    fn exponent_as_int(&self, e: &BigRational) -> Option<i64> {
        e.is_integer().then(|| e.to_integer().to_i64()).flatten()
    }
    fn to_complex(&self, a: &CycScalar) -> Complex64 {
        a.to_complex()
    }
}

/// Complex floating point with `eps = exp(2 pi i / l)` and `eps^z` taken on
/// the principal branch, `exp(2 pi i z / l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatBackend {
    order: RootOrder,
    tol: f64,
}

impl FloatBackend {
    pub fn new(order: RootOrder, tol: f64) -> Self {
        FloatBackend { order, tol }
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn eps_z(&self, z: Complex64) -> Complex64 {
        let w = Complex64::new(0.0, std::f64::consts::TAU / self.order.get() as f64);
        (w * z).exp()
    }
}

impl Backend for FloatBackend {
    type Scalar = Complex64;
    type Exponent = Complex64;

    fn order(&self) -> RootOrder {
        self.order
    }
    fn name(&self) -> &'static str {
        "float"
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn tolerance_hint(&self) -> Option<f64> {
        Some(self.tol)
    }
    fn zero(&self) -> Complex64 {
        Complex64::zero()
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(&self, k: i64) -> Complex64 {
        Complex64::new(k as f64, 0.0)
    }
    fn from_bigint(&self, k: &BigInt) -> Complex64 {
        Complex64::new(k.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_rational(&self, r: &BigRational) -> Complex64 {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Result<Complex64, ScalarError> {
        if self.is_zero(a) {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(a.inv())
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.norm() <= self.tol
    }
    fn scalar_eq(&self, a: &Complex64, b: &Complex64) -> bool {
        (a - b).norm() <= self.tol * a.norm().max(b.norm()).max(1.0)
    }
    fn eps_pow_int(&self, k: i64) -> Complex64 {
        self.eps_z(Complex64::new(self.order.residue(k) as f64, 0.0))
    }
    fn eps_pow(&self, e: &Complex64) -> Result<Complex64, ScalarError> {
        Ok(self.eps_z(*e))
    }
    fn q_int_int(&self, r: i64) -> Complex64 {
        let r = self.order.residue(r) as i64;
        (self.eps_pow_int(r) - self.eps_pow_int(-r)) / (self.eps_pow_int(1) - self.eps_pow_int(-1))
    }
    fn q_int(&self, x: &Complex64) -> Result<Complex64, ScalarError> {
        Ok((self.eps_z(*x) - self.eps_z(-x)) / (self.eps_pow_int(1) - self.eps_pow_int(-1)))
    }
    fn exponent_as_int(&self, e: &Complex64) -> Option<i64> {
        let r = e.re.round();
        ((e.re - r).abs() <= self.tol && e.im.abs() <= self.tol).then_some(r as i64)
    }
    fn to_complex(&self, a: &Complex64) -> Complex64 {
        *a
    }
}
