//! Integer linear forms in the slot entries `c_{i,j}`.
//!
//! Reads of `c_{i,j}` outside `1 <= i <= j <= n` contribute zero; that rule
//! lives in [`Shape::slot`] and nowhere else.

use evalrep_cyclotomic::{Backend, ExponentValue};
use serde::{Deserialize, Serialize};

use crate::affine::DescentSequence;
use crate::{MultiIndex, Result, Shape, SlotVector};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearForm(pub Vec<i64>);

impl LinearForm {
    pub fn zero(shape: &Shape) -> Self {
        LinearForm(vec![0; shape.num_slots()])
    }

    /// Adds `k * c_{i,j}`.
    pub fn add(&mut self, shape: &Shape, i: i64, j: i64, k: i64) -> &mut Self {
        if let Some(s) = shape.slot(i, j) {
            self.0[s] += k;
        }
        self
    }

    /// Adds `k * sum_{p=from}^{to} c_{i,p}`; empty when `to < from`.
    pub fn add_row_range(&mut self, shape: &Shape, i: i64, from: i64, to: i64, k: i64) -> &mut Self {
        for p in from..=to {
            self.add(shape, i, p, k);
        }
        self
    }

    pub fn add_form(&mut self, other: &LinearForm, k: i64) -> &mut Self {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += k * b;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn eval_int(&self, m: &MultiIndex) -> i64 {
        self.0.iter().zip(&m.0).map(|(&a, &x)| a * x as i64).sum()
    }

    pub fn eval_slots(&self, c: &SlotVector) -> i64 {
        self.0.iter().zip(&c.0).map(|(&a, &x)| a * x).sum()
    }

    pub fn eval<E: ExponentValue>(&self, c: &[E]) -> E {
        self.0
            .iter()
            .zip(c)
            .filter(|(&a, _)| a != 0)
            .fold(E::zero(), |acc, (&a, x)| acc + x.scale(a))
    }
}

/// `M_{i,j}(c)` for `i <= j`.
pub fn form_m(shape: &Shape, i: usize, j: usize) -> LinearForm {
    let (i, j) = (i as i64, j as i64);
    let mut f = LinearForm::zero(shape);
    for k in i - 1..=j - 1 {
        f.add(shape, i, k, 1).add(shape, i - 1, k, -1);
    }
    for k in i..=j {
        f.add(shape, i, k, 1).add(shape, i + 1, k, -1);
    }
    f
}

/// `N_{i,j}(c) = c_{j-1,n-i+j} - c_{j,n-i+j}` for `j <= i`.
pub fn form_n(shape: &Shape, i: usize, j: usize) -> LinearForm {
    let n = shape.rank() as i64;
    let (i, j) = (i as i64, j as i64);
    let mut f = LinearForm::zero(shape);
    f.add(shape, j - 1, n - i + j, 1).add(shape, j, n - i + j, -1);
    f
}

/// `mu_i(c)`.
pub fn form_mu(shape: &Shape, i: usize) -> LinearForm {
    let n = shape.rank() as i64;
    let i = i as i64;
    let mut f = LinearForm::zero(shape);
    f.add_row_range(shape, i - 1, i - 1, n, 1)
        .add_row_range(shape, i, i, n, -2)
        .add_row_range(shape, i + 1, i + 1, n, 1);
    f
}

/// `sum_{k=i}^n c_{i,k}`, the slot part of the `K_{Lambda_i}` exponent.
pub fn form_row(shape: &Shape, i: usize) -> LinearForm {
    let mut f = LinearForm::zero(shape);
    f.add_row_range(shape, i as i64, i as i64, shape.rank() as i64, 1);
    f
}

/// `a(c) = prod a_{i,j}^{c_{i,j}}`.
pub fn a_power<B: Backend>(backend: &B, a: &[B::Scalar], c: &SlotVector) -> Result<B::Scalar> {
    let mut acc = backend.one();
    for (x, &k) in a.iter().zip(&c.0) {
        if k != 0 {
            acc = backend.mul(&acc, &backend.pow(x, k)?);
        }
    }
    Ok(acc)
}

/// The linear forms attached to descent sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DescentForm {
    /// `C_i`, partial F-type.
    Ci,
    /// `D_i`, partial E-type.
    Di,
    /// `C`, full F-type.
    C,
    /// `D`, full E-type.
    D,
    /// `C_E`, full F-type.
    CE,
    /// `D_F`, full E-type.
    DF,
}

impl DescentForm {
    pub fn is_f_type(self) -> bool {
        matches!(self, DescentForm::Ci | DescentForm::C | DescentForm::CE)
    }

    pub fn is_full_length(self) -> bool {
        !matches!(self, DescentForm::Ci | DescentForm::Di)
    }
}

// the two double sums shared by C and C_E
fn c_double_sums(shape: &Shape, f: &mut LinearForm, d: &DescentSequence) {
    let n = shape.rank() as i64;
    let r = |k: usize| -> i64 {
        if k == 0 {
            n
        } else {
            d.r[k - 1] as i64
        }
    };
    let s = d.s;
    for k in 1..s {
        f.add_row_range(shape, k as i64, r(k + 1), r(k) - 1, 1);
    }
    for k in 1..=s {
        f.add_row_range(shape, k as i64, r(k) + 1, r(k - 1), -1);
    }
}

// sum_{k=s+1}^n (c_{r_k-1, n-k+r_k} - c_{r_k, n-k+r_k}) with the given sign
fn d_tail(shape: &Shape, f: &mut LinearForm, d: &DescentSequence, k_sign: i64) {
    let n = shape.rank() as i64;
    for k in d.s + 1..=d.r.len() {
        let rk = d.r[k - 1] as i64;
        let col = n - k as i64 + rk;
        f.add(shape, rk - 1, col, k_sign).add(shape, rk, col, -k_sign);
    }
}

pub fn descent_form(shape: &Shape, d: &DescentSequence, kind: DescentForm) -> LinearForm {
    let n = shape.rank() as i64;
    let s = d.s as i64;
    let mut f = LinearForm::zero(shape);
    match kind {
        DescentForm::Ci | DescentForm::Di => {
            let part = |k: usize| {
                if kind == DescentForm::Ci {
                    form_m(shape, k, d.r[k - 1])
                } else {
                    form_n(shape, k, d.r[k - 1])
                }
            };
            for k in 1..d.s {
                f.add_form(&part(k), 1);
            }
            for k in d.s + 1..=d.r.len() {
                f.add_form(&part(k), -1);
            }
        }
        DescentForm::C => {
            f.add(shape, s - 1, s - 1, 1)
                .add(shape, n, n, -1)
                .add_row_range(shape, 1, 1, n, 1);
            c_double_sums(shape, &mut f, d);
        }
        DescentForm::CE => {
            f.add(shape, s - 1, s - 1, 1);
            c_double_sums(shape, &mut f, d);
        }
        DescentForm::D => {
            f.add_row_range(shape, 1, n - s + 2, n, -1);
            d_tail(shape, &mut f, d, -1);
        }
        DescentForm::DF => {
            f.add(shape, n, n, -1).add_row_range(shape, 1, 1, n - s + 1, 1);
            d_tail(shape, &mut f, d, -1);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use evalrep_cyclotomic::{BigRational, ExactBackend, RootOrder};

    fn lf(shape: &Shape, terms: &[((i64, i64), i64)]) -> LinearForm {
        let mut f = LinearForm::zero(shape);
        for &((i, j), k) in terms {
            f.add(shape, i, j, k);
        }
        f
    }

    #[test]
    fn rank_one_forms() {
        let s = Shape::new(1, 3).unwrap();
        assert_eq!(form_m(&s, 1, 1), lf(&s, &[((1, 1), 1)]));
        assert_eq!(form_mu(&s, 1), lf(&s, &[((1, 1), -2)]));
    }

    #[test]
    fn rank_two_m12() {
        let s = Shape::new(2, 3).unwrap();
        assert_eq!(form_m(&s, 1, 2), lf(&s, &[((1, 1), 2), ((1, 2), 1), ((2, 2), -1)]));
    }

    #[test]
    fn n_form() {
        let s = Shape::new(2, 3).unwrap();
        assert_eq!(form_n(&s, 1, 1), lf(&s, &[((1, 2), -1)]));
        assert_eq!(form_n(&s, 2, 1), lf(&s, &[((1, 1), -1)]));
        assert_eq!(form_n(&s, 2, 2), lf(&s, &[((1, 2), 1), ((2, 2), -1)]));
    }

    #[test]
    fn zero_argument() {
        let s = Shape::new(3, 3).unwrap();
        let z: Vec<BigRational> = vec![BigRational::from_integer(0.into()); 6];
        assert_eq!(form_m(&s, 2, 3).eval(&z), BigRational::from_integer(0.into()));
        assert_eq!(form_n(&s, 3, 2).eval(&z), BigRational::from_integer(0.into()));
        assert_eq!(form_mu(&s, 2).eval(&z), BigRational::from_integer(0.into()));
    }

    #[test]
    fn a_power_examples() {
        let b = ExactBackend::new(RootOrder::new(3).unwrap());
        let s = Shape::new(1, 3).unwrap();
        let a = vec![b.eps_pow_int(1)];
        let c = SlotVector(vec![-1]);
        assert_eq!(a_power(&b, &a, &c).unwrap(), b.eps_pow_int(-1));
        assert!(a_power(&b, &a, &s.zero_vector()).unwrap().is_one());
        let ones = vec![b.one(); 3];
        assert!(a_power(&b, &ones, &SlotVector(vec![2, -1, 5])).unwrap().is_one());
        assert!(a_power(&b, &[b.zero()], &c).is_err());
    }
}
