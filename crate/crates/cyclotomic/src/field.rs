use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::{cyclotomic_poly, IntPoly};
use crate::{RootOrder, ScalarError};

struct Inner {
    order: RootOrder,
    degree: usize,
    phi: IntPoly,
    // x^k mod Phi_l for k < max(2d - 1, l)
    powers: Vec<Vec<BigInt>>,
    // [r]_eps for r in 0..l, periodic in r
    q_ints: Vec<Vec<BigInt>>,
    units: Vec<u32>,
}

/// The field `Q(eps) = Q[x] / Phi_l(x)`.
///
/// Cheap to clone. Fields of the same order share one table.
#[derive(Clone)]
pub struct CyclotomicField(Arc<Inner>);

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(eps_{})", self.0.order)
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.0.order == other.0.order
    }
}

impl Eq for CyclotomicField {}

fn cache() -> &'static Mutex<HashMap<u32, CyclotomicField>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, CyclotomicField>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl CyclotomicField {
    pub fn new(order: RootOrder) -> Self {
        let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(order.get())
            .or_insert_with(|| CyclotomicField::build(order))
            .clone()
    }

    pub fn with_order(l: i64) -> Result<Self, ScalarError> {
        Ok(CyclotomicField::new(RootOrder::new(l)?))
    }

    fn build(order: RootOrder) -> Self {
        let l = order.get() as usize;
        let phi = cyclotomic_poly(order.get());
        let degree = phi.degree().expect("nonzero cyclotomic polynomial");
        let n_pow = (2 * degree).saturating_sub(1).max(l);
        let mut powers = Vec::with_capacity(n_pow);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..n_pow {
            powers.push(cur.clone());
            // multiply by x and reduce the overflow with x^d = -sum phi_j x^j
            let top = cur.pop().unwrap_or_default();
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (j, c) in phi.coeffs()[..degree].iter().enumerate() {
                    cur[j] -= &top * c;
                }
            }
        }
        let mut q_ints = Vec::with_capacity(l);
        for r in 0..l {
            let mut acc = vec![BigInt::zero(); degree];
            for k in 0..r {
                let e = (r as i64 - 1 - 2 * k as i64).rem_euclid(l as i64) as usize;
                for (a, b) in acc.iter_mut().zip(&powers[e]) {
                    *a += b;
                }
            }
            q_ints.push(acc);
        }
        let units = (1..l as u32).filter(|k| k.gcd(&(l as u32)) == 1).collect();
        CyclotomicField(Arc::new(Inner {
            order,
            degree,
            phi,
            powers,
            q_ints,
            units,
        }))
    }

    pub fn order(&self) -> RootOrder {
        self.0.order
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.0.phi
    }

    fn from_parts(&self, num: Vec<BigInt>, den: BigInt) -> CycScalar {
        let mut s = CycScalar {
            field: self.clone(),
            num,
            den,
        };
        s.normalize();
        s
    }

    fn int_vec(&self, v: &[BigInt]) -> CycScalar {
        CycScalar {
            field: self.clone(),
            num: v.to_vec(),
            den: BigInt::one(),
        }
    }

    pub fn zero(&self) -> CycScalar {
        self.int_vec(&vec![BigInt::zero(); self.0.degree])
    }

    pub fn one(&self) -> CycScalar {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> CycScalar {
        self.from_bigint(BigInt::from(k))
    }

    pub fn from_bigint(&self, k: BigInt) -> CycScalar {
        let mut num = vec![BigInt::zero(); self.0.degree];
        num[0] = k;
        self.int_vec(&num)
    }

    pub fn from_rational(&self, r: &BigRational) -> CycScalar {
        let mut num = vec![BigInt::zero(); self.0.degree];
        num[0] = r.numer().clone();
        self.from_parts(num, r.denom().clone())
    }

    /// Builds `sum coeffs[k] eps^k`; any length is accepted and reduced.
    pub fn from_coeffs(&self, coeffs: &[BigRational]) -> CycScalar {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut raw = vec![BigInt::zero(); coeffs.len()];
        for (r, c) in raw.iter_mut().zip(coeffs) {
            *r = c.numer() * (&den / c.denom());
        }
        let num = self.reduce_wrapping(&raw);
        self.from_parts(num, den)
    }

    // reduces a coefficient vector of arbitrary length, using eps^l = 1
    fn reduce_wrapping(&self, raw: &[BigInt]) -> Vec<BigInt> {
        let l = self.0.order.get() as usize;
        let mut out = vec![BigInt::zero(); self.0.degree];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.0.powers[k % l]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        out
    }

    /// `eps^k` for an integer exponent.
    pub fn eps_pow_int(&self, k: i64) -> CycScalar {
        let e = self.0.order.residue(k) as usize;
        self.int_vec(&self.0.powers[e])
    }

    /// `eps^(p/q) := eps^(p * q^-1 mod l)`.
    pub fn eps_pow(&self, e: &BigRational) -> Result<CycScalar, ScalarError> {
        Ok(self.eps_pow_int(self.exponent_residue(e)?))
    }

    /// The residue `p * q^-1 mod l` of a rational exponent `p/q`.
    pub fn exponent_residue(&self, e: &BigRational) -> Result<i64, ScalarError> {
        let l = BigInt::from(self.0.order.get());
        let p = e.numer().mod_floor(&l).to_i64().expect("residue fits");
        let q = e.denom().mod_floor(&l).to_i64().expect("residue fits");
        match self.0.order.inverse_mod(q) {
            Some(qi) => Ok((p * qi).rem_euclid(self.0.order.get() as i64)),
            None => Err(ScalarError::NonInvertibleDenominator {
                exponent: e.to_string(),
                denominator: e.denom().to_string(),
                order: self.0.order.get(),
            }),
        }
    }

    /// `[r]_eps = (eps^r - eps^-r) / (eps - eps^-1)`.
    pub fn q_int(&self, r: i64) -> CycScalar {
        let e = self.0.order.residue(r) as usize;
        self.int_vec(&self.0.q_ints[e])
    }

    /// Parses expressions such as `2/3`, `eps^2`, `1 + eps`, `-eps^-1`,
    /// `(1+eps)^2/3` or `eps^(1/2)`.
    pub fn parse(&self, s: &str) -> Result<CycScalar, ScalarError> {
        parse::Parser::new(self, s).parse_all()
    }
}

/// An exact element of `Q(eps)`, stored as `num(eps) / den` with `num`
/// of length `deg Phi_l`, `den > 0` and content of `num` coprime to `den`.
#[derive(Clone)]
pub struct CycScalar {
    field: CyclotomicField,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycScalar {
    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn order(&self) -> RootOrder {
        self.field.order()
    }

    /// Coefficients of `1, eps, ..., eps^(d-1)`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check(&self, other: &CycScalar) {
        assert!(
            self.field == other.field,
            "mixed orders {} and {}",
            self.order(),
            other.order()
        );
    }

    fn add_signed(&self, other: &CycScalar, sign: i8) -> CycScalar {
        self.check(other);
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                if sign > 0 {
                    a * &fa + b * &fb
                } else {
                    a * &fa - b * &fb
                }
            })
            .collect();
        self.field.from_parts(num, den)
    }

    fn mul_ref(&self, other: &CycScalar) -> CycScalar {
        self.check(other);
        let d = self.field.degree();
        let mut raw = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut num = raw[..d].to_vec();
        for (k, c) in raw.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in num.iter_mut().zip(&self.field.0.powers[k]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        self.field.from_parts(num, &self.den * &other.den)
    }

    /// Image under the Galois automorphism `eps -> eps^k`.
    pub fn galois(&self, k: u32) -> CycScalar {
        let l = self.order().get() as usize;
        let mut raw = vec![BigInt::zero(); l];
        for (j, c) in self.num.iter().enumerate() {
            raw[(j * k as usize) % l] += c;
        }
        let num = self.field.reduce_wrapping(&raw);
        self.field.from_parts(num, self.den.clone())
    }

    /// Multiplicative inverse via the product of the nontrivial conjugates.
    pub fn inv(&self) -> Result<CycScalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let conj = self.field.0.units[1..]
            .iter()
            .fold(self.field.one(), |acc, &k| acc.mul_ref(&self.galois(k)));
        let norm = self
            .mul_ref(&conj)
            .as_rational()
            .expect("field norm is rational");
        Ok(conj.mul_ref(&self.field.from_rational(&norm.recip())))
    }

    pub fn checked_div(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<CycScalar, ScalarError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.field.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(acc)
    }

    /// Value under `eps = exp(2 pi i / l)`.
    pub fn to_complex(&self) -> Complex64 {
        let l = self.order().get() as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / l);
                w * (c.to_f64().unwrap_or(f64::NAN) / den)
            })
            .sum()
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycScalar {}

impl Hash for CycScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order().hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (l={})", self.order())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "eps")?,
                (1, false) => write!(f, "{mag}*eps")?,
                (_, true) => write!(f, "eps^{k}")?,
                (_, false) => write!(f, "{mag}*eps^{k}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                $body(self, rhs)
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                $body(&self, &rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                $body(&self, rhs)
            }
        }
        impl $tr<CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycScalar, b: &CycScalar| a.add_signed(b, 1));
forward_binop!(Sub, sub, |a: &CycScalar, b: &CycScalar| a.add_signed(b, -1));
forward_binop!(Mul, mul, |a: &CycScalar, b: &CycScalar| a.mul_ref(b));

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    l: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            l: self.order().get(),
            coeffs: self
                .coeffs()
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = Repr::deserialize(d)?;
        CycScalar::from_repr(repr).map_err(D::Error::custom)
    }
}

impl CycScalar {
    fn from_repr(repr: Repr) -> Result<CycScalar, ScalarError> {
        let field = CyclotomicField::with_order(repr.l as i64)?;
        if repr.coeffs.len() != field.degree() {
            return Err(ScalarError::CoefficientCount {
                order: repr.l,
                expected: field.degree(),
                got: repr.coeffs.len(),
            });
        }
        let mut coeffs = Vec::with_capacity(repr.coeffs.len());
        for [n, d] in &repr.coeffs {
            let n: BigInt = n
                .parse()
                .map_err(|_| ScalarError::Malformed(format!("bad numerator {n:?}")))?;
            let d: BigInt = d
                .parse()
                .map_err(|_| ScalarError::Malformed(format!("bad denominator {d:?}")))?;
            if d.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            coeffs.push(BigRational::new(n, d));
        }
        Ok(field.from_coeffs(&coeffs))
    }
}

mod parse {
    use super::*;

    pub(super) struct Parser<'a> {
        field: &'a CyclotomicField,
        src: &'a str,
        chars: Vec<char>,
        pos: usize,
    }

    impl<'a> Parser<'a> {
        pub(super) fn new(field: &'a CyclotomicField, src: &'a str) -> Self {
            Parser {
                field,
                src,
                chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
                pos: 0,
            }
        }

        fn err(&self, what: &str) -> ScalarError {
            ScalarError::Malformed(format!("{what} in {:?} at {}", self.src, self.pos))
        }

        fn peek(&self) -> Option<char> {
            self.chars.get(self.pos).copied()
        }

        fn eat(&mut self, c: char) -> bool {
            if self.peek() == Some(c) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        pub(super) fn parse_all(mut self) -> Result<CycScalar, ScalarError> {
            if self.chars.is_empty() {
                return Err(self.err("empty expression"));
            }
            let v = self.expr()?;
            if self.pos != self.chars.len() {
                return Err(self.err("trailing input"));
            }
            Ok(v)
        }

        fn expr(&mut self) -> Result<CycScalar, ScalarError> {
            let mut acc = if self.eat('-') {
                -self.term()?
            } else {
                self.eat('+');
                self.term()?
            };
            loop {
                if self.eat('+') {
                    acc = acc + self.term()?;
                } else if self.eat('-') {
                    acc = acc - self.term()?;
                } else {
                    return Ok(acc);
                }
            }
        }

        fn term(&mut self) -> Result<CycScalar, ScalarError> {
            let mut acc = self.power()?;
            loop {
                if self.eat('*') {
                    acc = acc * self.power()?;
                } else if self.eat('/') {
                    let d = self.power()?;
                    acc = acc.checked_div(&d)?;
                } else if matches!(self.peek(), Some('e') | Some('(')) {
                    acc = acc * self.power()?;
                } else {
                    return Ok(acc);
                }
            }
        }

        fn power(&mut self) -> Result<CycScalar, ScalarError> {
            let is_eps = self.peek() == Some('e');
            let base = self.atom()?;
            if !self.eat('^') {
                return Ok(base);
            }
            let e = self.exponent()?;
            if is_eps {
                return self.field.eps_pow(&e);
            }
            if !e.is_integer() {
                return Err(self.err("fractional power of a non-eps base"));
            }
            let k = e.to_integer().to_i64().ok_or_else(|| self.err("huge exponent"))?;
            base.pow(k)
        }

        fn exponent(&mut self) -> Result<BigRational, ScalarError> {
            if self.eat('(') {
                let neg = self.eat('-');
                let mut r = self.rational()?;
                if self.eat('/') {
                    r /= self.rational()?;
                }
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                return Ok(if neg { -r } else { r });
            }
            let neg = self.eat('-');
            let r = self.rational()?;
            Ok(if neg { -r } else { r })
        }

        fn rational(&mut self) -> Result<BigRational, ScalarError> {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a number"));
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            let n: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
            Ok(BigRational::from_integer(n))
        }

        fn atom(&mut self) -> Result<CycScalar, ScalarError> {
            match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let v = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.err("expected ')'"));
                    }
                    Ok(v)
                }
                Some('e') => {
                    for c in "eps".chars() {
                        if !self.eat(c) {
                            return Err(self.err("expected 'eps'"));
                        }
                    }
                    Ok(self.field.eps_pow_int(1))
                }
                Some(c) if c.is_ascii_digit() => {
                    let r = self.rational()?;
                    Ok(self.field.from_rational(&r))
                }
                _ => Err(self.err("unexpected token")),
            }
        }
    }
}
