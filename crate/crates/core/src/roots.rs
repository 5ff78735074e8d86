//! Type A Cartan and weight data.

use std::fmt;

use evalrep_cyclotomic::{Backend, BigRational, ExponentValue};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::{CoreError, Result};

/// Which evaluation map is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(CoreError::InvalidParams(format!("unknown sign {s:?}"))),
        }
    }
}

/// Cartan matrix of `sl_{n+1}` and its affine extension by the index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CartanData {
    n: usize,
}

impl CartanData {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::IndexOutOfRange {
                what: "rank 0".into(),
                n,
            });
        }
        Ok(CartanData { n })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Finite entry `a_ij`, `1 <= i, j <= n`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        debug_assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        match i.abs_diff(j) {
            0 => 2,
            1 => -1,
            _ => 0,
        }
    }

    /// Affine entry for `0 <= i, j <= n`; requires `n >= 2`.
    pub fn affine_entry(&self, i: usize, j: usize) -> i64 {
        debug_assert!(self.n >= 2 && i <= self.n && j <= self.n);
        let d = i.abs_diff(j);
        if d == 0 {
            2
        } else if d == 1 || d == self.n {
            -1
        } else {
            0
        }
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        (1..=self.n)
            .map(|i| (1..=self.n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn affine_matrix(&self) -> Result<Vec<Vec<i64>>> {
        if self.n < 2 {
            return Err(CoreError::RankTooSmall(self.n));
        }
        Ok((0..=self.n)
            .map(|i| (0..=self.n).map(|j| self.affine_entry(i, j)).collect())
            .collect())
    }
}

/// A weight `(lambda_1, ..., lambda_n)` with integer entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(entries: Vec<i64>) -> Self {
        WeightVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        WeightVector(vec![0; n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// `lambda_i`, 1-based.
    pub fn get(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Whether every entry lies in `0..l`.
    pub fn is_restricted(&self, l: u32) -> bool {
        self.0.iter().all(|&x| (0..l as i64).contains(&x))
    }

    /// Every weight in `Z_l^n`, in lexicographic order.
    pub fn all(n: usize, l: u32) -> Vec<WeightVector> {
        let total = (l as usize).pow(n as u32);
        (0..total)
            .map(|mut k| {
                let mut e = vec![0i64; n];
                for slot in e.iter_mut().rev() {
                    *slot = (k % l as usize) as i64;
                    k /= l as usize;
                }
                WeightVector(e)
            })
            .collect()
    }

    pub fn as_exponents<E: ExponentValue>(&self) -> Vec<E> {
        self.0.iter().map(|&x| E::from_int(x)).collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `mu = sum_i c_i alpha_i` over the finite simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootLatticeElement(Vec<i64>);

impl RootLatticeElement {
    pub fn new(coords: Vec<i64>) -> Self {
        RootLatticeElement(coords)
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i - 1] = 1;
        RootLatticeElement(c)
    }

    /// `theta = alpha_1 + ... + alpha_n`.
    pub fn theta(n: usize) -> Self {
        RootLatticeElement(vec![1; n])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// `(mu, alpha_j)` for `1 <= j <= n`.
    pub fn pair_simple(&self, j: usize) -> i64 {
        let c = CartanData { n: self.0.len() };
        self.0
            .iter()
            .enumerate()
            .map(|(i, &m)| m * c.entry(i + 1, j))
            .sum()
    }

    /// `(mu, alpha_0) = -(mu, theta)`.
    pub fn pair_affine_zero(&self) -> i64 {
        -(1..=self.0.len()).map(|j| self.pair_simple(j)).sum::<i64>()
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `Lambda_i` in the basis of simple roots.
pub fn fundamental_weight_coords(i: usize, n: usize) -> Vec<BigRational> {
    let d = (n + 1) as i64;
    (1..=n)
        .map(|k| {
            if k < i {
                rat((n - i + 1) as i64 * k as i64, d)
            } else {
                rat(i as i64 * (n - k + 1) as i64, d)
            }
        })
        .collect()
}

/// `(Lambda_i, Lambda_j)` by expanding both weights in simple roots.
pub fn weight_pairing(i: usize, j: usize, n: usize) -> Result<BigRational> {
    for (name, x) in [("i", i), ("j", j)] {
        if !(1..=n).contains(&x) {
            return Err(CoreError::IndexOutOfRange {
                what: format!("{name} = {x}"),
                n,
            });
        }
    }
    let c = CartanData { n };
    let (li, lj) = (fundamental_weight_coords(i, n), fundamental_weight_coords(j, n));
    let mut acc = BigRational::zero();
    for p in 1..=n {
        for q in 1..=n {
            let a = c.entry(p, q);
            if a != 0 {
                acc += &li[p - 1] * &lj[q - 1] * rat(a, 1);
            }
        }
    }
    Ok(acc)
}

/// `lambda_{Lambda_i} = sum_j lambda_j (Lambda_i, Lambda_j)`.
pub fn lambda_weight(lambda: &WeightVector, i: usize) -> Result<BigRational> {
    let n = lambda.rank();
    let mut acc = BigRational::zero();
    for j in 1..=n {
        acc += weight_pairing(i, j, n)? * rat(lambda.get(j), 1);
    }
    Ok(acc)
}

/// [`lambda_weight`] for weights with entries in an exponent domain.
pub fn lambda_weight_generic<E: ExponentValue>(lambda: &[E], i: usize) -> Result<E> {
    let n = lambda.len();
    let mut acc = E::zero();
    for j in 1..=n {
        acc = acc + lambda[j - 1].clone() * E::from_rational(&weight_pairing(i, j, n)?);
    }
    Ok(acc)
}

/// `lambda^(i) = sum_{k<i} lambda_k - sum_{k>i} lambda_k`.
pub fn lambda_super(lambda: &WeightVector, i: usize) -> i64 {
    let e = lambda.entries();
    e[..i - 1].iter().sum::<i64>() - e[i..].iter().sum::<i64>()
}

pub fn lambda_super_generic<E: ExponentValue>(lambda: &[E], i: usize) -> E {
    let head = lambda[..i - 1].iter().cloned().fold(E::zero(), |a, x| a + x);
    let tail = lambda[i..].iter().cloned().fold(E::zero(), |a, x| a + x);
    head - tail
}

/// `supp(lambda)`, 1-based and increasing.
pub fn support(lambda: &WeightVector) -> Vec<usize> {
    (1..=lambda.rank()).filter(|&i| lambda.get(i) != 0).collect()
}

/// Sign and exponent with `a^lambda_+- = a * sign * eps^exponent`.
pub fn eval_parameter_exponent<E: ExponentValue>(lambda: &[E], sign: Sign) -> Result<(i64, E)> {
    let n = lambda.len();
    let l1 = lambda_weight_generic(lambda, 1)?;
    let ln = lambda_weight_generic(lambda, n)?;
    Ok(match sign {
        Sign::Plus => (1, ln - l1 + E::from_int(n as i64)),
        Sign::Minus => {
            let s = if (n + 1).is_multiple_of(2) { 1 } else { -1 };
            (s, l1 - ln + E::from_int(2 * n as i64 + 1))
        }
    })
}

/// `a^lambda_+ = a eps^(-lambda_{Lambda_1} + lambda_{Lambda_n} + n)` or
/// `a^lambda_- = a (-1)^(n+1) eps^(lambda_{Lambda_1} - lambda_{Lambda_n} + 2n + 1)`.
pub fn eval_parameter<B: Backend>(
    backend: &B,
    a: &B::Scalar,
    lambda: &[B::Exponent],
    sign: Sign,
) -> Result<B::Scalar> {
    if backend.is_zero(a) {
        return Err(CoreError::InvalidParams("spectral parameter a must be nonzero".into()));
    }
    let (s, e) = eval_parameter_exponent(lambda, sign)?;
    let v = backend.mul(a, &backend.eps_pow(&e)?);
    Ok(if s < 0 { backend.neg(&v) } else { v })
}

/// The standing coprimality assumption `gcd(l, n + 1) = 1`.
pub fn gcd_condition(n: usize, l: u32) -> bool {
    (n as u64 + 1).gcd(&(l as u64)) == 1
}
