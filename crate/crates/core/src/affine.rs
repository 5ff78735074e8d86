//! Evaluation modules over the quantum loop algebra: iterated
//! `eps^{-1}`-brackets, their descent-sequence closed forms, and the images
//! of `E_0`, `F_0`.

use std::fmt;
use std::sync::Arc;

use evalrep_cyclotomic::{Backend, ExponentValue};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::forms::{a_power, descent_form, form_m, form_n, form_row, DescentForm, LinearForm};
use crate::operator::missing;
use crate::roots::{eval_parameter, lambda_super_generic};
use crate::{
    CoreError, Generator, ModuleVector, Op, Representation, Result, SchnizerModule, Shape, Sign,
    SlotVector, SparseOperator,
};

/// A sequence `r_1 >= ... >= r_s < r_{s+1} < ... < r_i` with its pivot `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DescentSequence {
    pub s: usize,
    pub r: Vec<usize>,
}

impl DescentSequence {
    /// Recovers the pivot; `None` unless `r` is nonincreasing then strictly
    /// increasing.
    pub fn from_sequence(r: Vec<usize>) -> Option<Self> {
        if r.is_empty() {
            return None;
        }
        let s = (1..r.len()).find(|&k| r[k - 1] < r[k]).unwrap_or(r.len());
        if r[s - 1..].windows(2).all(|w| w[0] < w[1]) {
            Some(DescentSequence { s, r })
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn fits(&self, n: usize, kind: DescentKind) -> bool {
        self.r.iter().enumerate().all(|(k0, &rk)| {
            let k = k0 + 1;
            match kind {
                DescentKind::F => k <= rk && rk <= n,
                DescentKind::E => 1 <= rk && rk <= k,
            }
        })
    }

    /// `eps_r = sum_k eps_{k, r_k}`.
    pub fn eps_shift(&self, shape: &Shape) -> Result<SlotVector> {
        let mut v = shape.zero_vector();
        for (k0, &rk) in self.r.iter().enumerate() {
            v = v.plus(&shape.eps_index(k0 + 1, rk)?);
        }
        Ok(v)
    }

    /// `alpha_r = sum_k alpha_{k, r_k}`.
    pub fn alpha_shift(&self, shape: &Shape) -> Result<SlotVector> {
        let mut v = shape.zero_vector();
        for (k0, &rk) in self.r.iter().enumerate() {
            v = v.plus(&shape.alpha_index(k0 + 1, rk)?);
        }
        Ok(v)
    }
}

impl fmt::Display for DescentSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.r.iter().map(|x| x.to_string()).collect();
        write!(f, "(s={}, r=({}))", self.s, r.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DescentKind {
    F,
    E,
}

/// `R_i^F` or `R_i^E`, ordered by `(s, r)`.
pub fn enumerate_descents(n: usize, i: usize, kind: DescentKind) -> Vec<DescentSequence> {
    fn extend(
        n: usize,
        i: usize,
        kind: DescentKind,
        prefix: &mut Vec<usize>,
        rising: bool,
        out: &mut Vec<DescentSequence>,
    ) {
        let k = prefix.len() + 1;
        if k > i {
            out.extend(DescentSequence::from_sequence(prefix.clone()));
            return;
        }
        let (lo, hi) = match kind {
            DescentKind::F => (k, n),
            DescentKind::E => (1, k),
        };
        for rk in lo..=hi {
            let up = prefix.last().is_some_and(|&p| rk > p);
            if rising && !up {
                continue;
            }
            prefix.push(rk);
            extend(n, i, kind, prefix, rising || up, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if (1..=n).contains(&i) {
        extend(n, i, kind, &mut Vec::new(), false, &mut out);
    }
    out.sort_by(|a, b| (a.s, &a.r).cmp(&(b.s, &b.r)));
    out
}

/// `R^F` or `R^E`.
pub fn full_descents(n: usize, kind: DescentKind) -> Vec<DescentSequence> {
    enumerate_descents(n, n, kind)
}

/// [`descent_form`] after checking that `d` has the type and length the
/// kind expects.
pub fn checked_descent_form(
    shape: &Shape,
    d: &DescentSequence,
    kind: DescentForm,
) -> Result<LinearForm> {
    let n = shape.rank();
    let dk = if kind.is_f_type() {
        DescentKind::F
    } else {
        DescentKind::E
    };
    let ok = DescentSequence::from_sequence(d.r.clone()).as_ref() == Some(d)
        && d.fits(n, dk)
        && d.len() <= n
        && (!kind.is_full_length() || d.len() == n);
    if !ok {
        return Err(CoreError::KindMismatch {
            kind: format!("{kind:?}"),
            expected: format!("{}{:?}", if kind.is_full_length() { "full-length " } else { "" }, dk),
        });
    }
    Ok(descent_form(shape, d, kind))
}

/// `[u, v]_{eps^{+-1}}`.
pub fn q_bracket<B: Backend>(b: &B, u: Op<B::Scalar>, v: Op<B::Scalar>, sign: Sign) -> Op<B::Scalar> {
    Op::bracket(b, u, v, &b.eps_pow_int(sign.as_i64()))
}

// [X_{k_1}, [X_{k_2}, ..., [X_{k_{t-1}}, X_{k_t}]_{eps^-1} ...]]_{eps^-1}
fn chain<B: Backend>(b: &B, gens: &[Generator]) -> Op<B::Scalar> {
    let (last, rest) = gens.split_last().expect("nonempty chain");
    rest.iter()
        .rev()
        .fold(Op::gen(*last), |acc, g| q_bracket(b, Op::gen(*g), acc, Sign::Minus))
}

/// `(E_{theta_i}, F_{theta_i})` as bracket expressions.
pub fn theta_ops<B: Backend>(b: &B, i: usize) -> (Op<B::Scalar>, Op<B::Scalar>) {
    let es: Vec<_> = (1..=i).rev().map(Generator::E).collect();
    let fs: Vec<_> = (1..=i).rev().map(Generator::F).collect();
    (chain(b, &es), chain(b, &fs))
}

/// Whether the `E_{theta_i}` closed form subtracts `lambda_s` inside the
/// `eps`-integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ELambdaTerm {
    Without,
    With,
}

impl ELambdaTerm {
    /// The variant that agrees with the bracket chain.
    pub const RESOLVED: ELambdaTerm = ELambdaTerm::Without;
}

/// Subscript of the `b` entry in the `F_0` closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BSubscript {
    /// `b_{1, n-s}`, as printed in the closed `F_0` formula.
    #[serde(rename = "b_{1,n-s}")]
    NMinusS,
    /// `b_{1, n-s+1}`, matching the `E_{theta_n}` formula.
    #[serde(rename = "b_{1,n-s+1}")]
    NMinusSPlusOne,
}

impl BSubscript {
    /// The variant that agrees with the bracket route.
    pub const RESOLVED: BSubscript = BSubscript::NMinusSPlusOne;

    pub fn label(self) -> &'static str {
        match self {
            BSubscript::NMinusS => "b_{1,n-s}",
            BSubscript::NMinusSPlusOne => "b_{1,n-s+1}",
        }
    }
}

// sign as a backend scalar
fn signed<B: Backend>(b: &B, x: B::Scalar, negative: bool) -> B::Scalar {
    if negative {
        b.neg(&x)
    } else {
        x
    }
}

fn odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

fn lambda_partial<E: ExponentValue>(lambda: &[E], s: usize, i: usize) -> E {
    let head = lambda[..s - 1].iter().cloned().fold(E::zero(), |a, x| a + x);
    let tail = lambda[s..i].iter().cloned().fold(E::zero(), |a, x| a + x);
    head - tail
}

/// Closed forms of `F_{theta_i} v` and `E_{theta_i} v` as sums over
/// `R_i^F`, `R_i^E`.
pub fn theta_closed<B: Backend>(
    module: &SchnizerModule<B>,
    i: usize,
    kind: DescentKind,
    e_lambda: ELambdaTerm,
    v: &ModuleVector<B::Scalar>,
) -> Result<ModuleVector<B::Scalar>> {
    let p = module.params();
    let shape = p.shape();
    let b = p.backend();
    let n = shape.rank();
    if !(1..=n).contains(&i) {
        return Err(CoreError::IndexOutOfRange {
            what: format!("theta_{i}"),
            n,
        });
    }
    let lam = p.lambda();
    let mut terms = Vec::new();
    for d in enumerate_descents(n, i, kind) {
        let s = d.s;
        let sign = odd((i + s) as i64);
        let (shift, form, inner) = match kind {
            DescentKind::F => (
                d.eps_shift(shape)?,
                checked_descent_form(shape, &d, DescentForm::Ci)?,
                form_m(shape, s, d.r[s - 1]),
            ),
            DescentKind::E => (
                d.alpha_shift(shape)?,
                checked_descent_form(shape, &d, DescentForm::Di)?,
                form_n(shape, s, 1),
            ),
        };
        let coeff = signed(b, a_power(b, p.a(), &shift)?, sign);
        terms.push((d, shift, coeff, form, inner));
    }
    let mut out = ModuleVector::zero();
    for (r, x) in v.iter() {
        let c = p.shifted(r);
        for (d, shift, coeff, form, inner) in &terms {
            let s = d.s;
            let one_minus_s = B::Exponent::from_int(1 - s as i64);
            let (expo, arg) = match kind {
                DescentKind::F => (
                    form.eval(&c) - lambda_partial(lam, s, i) + one_minus_s,
                    inner.eval(&c) - lam[s - 1].clone(),
                ),
                DescentKind::E => {
                    let arg = match e_lambda {
                        ELambdaTerm::With => inner.eval(&c) - lam[s - 1].clone(),
                        ELambdaTerm::Without => inner.eval(&c),
                    };
                    (form.eval(&c) + one_minus_s, arg)
                }
            };
            let k = b.mul(&b.mul(coeff, &b.eps_pow(&expo)?), &b.q_int(&arg)?);
            out.add_term(b, shape.shift(r, shift), &b.mul(&k, x));
        }
    }
    Ok(out)
}

/// The `i = n` closed forms over `R^F`, `R^E` with the forms `C`, `D`.
pub fn theta_full_closed<B: Backend>(
    module: &SchnizerModule<B>,
    kind: DescentKind,
    v: &ModuleVector<B::Scalar>,
) -> Result<ModuleVector<B::Scalar>> {
    let p = module.params();
    let shape = p.shape();
    let b = p.backend();
    let n = shape.rank();
    let lam = p.lambda();
    let mut out = ModuleVector::zero();
    let seqs = full_descents(n, kind);
    for (r, x) in v.iter() {
        let c = p.shifted(r);
        for d in &seqs {
            let s = d.s;
            let sgn = odd((s + n) as i64);
            let one_minus_s = B::Exponent::from_int(1 - s as i64);
            let (shift, expo, arg) = match kind {
                DescentKind::F => {
                    let f = checked_descent_form(shape, d, DescentForm::C)?;
                    (
                        d.eps_shift(shape)?,
                        f.eval(&c) - lambda_super_generic(lam, s) + one_minus_s,
                        diag_step(shape, s).eval(&c) - lam[s - 1].clone(),
                    )
                }
                DescentKind::E => {
                    let f = checked_descent_form(shape, d, DescentForm::D)?;
                    let mut g = LinearForm::zero(shape);
                    g.add(shape, 1, (n - s + 1) as i64, -1);
                    (d.alpha_shift(shape)?, f.eval(&c) + one_minus_s, g.eval(&c))
                }
            };
            let k = signed(b, a_power(b, p.a(), &shift)?, sgn);
            let k = b.mul(&b.mul(&k, &b.eps_pow(&expo)?), &b.q_int(&arg)?);
            out.add_term(b, shape.shift(r, &shift), &b.mul(&k, x));
        }
    }
    Ok(out)
}

// -c_{s-1,s-1} + c_{s,s}
fn diag_step(shape: &Shape, s: usize) -> LinearForm {
    let s = s as i64;
    let mut f = LinearForm::zero(shape);
    f.add(shape, s - 1, s - 1, -1).add(shape, s, s, 1);
    f
}

/// `V_eps(a, b, lambda)^{+-}_a`: a Schnizer module with `E_0`, `F_0`,
/// `K_{alpha_0}^{+-1}` acting through the evaluation homomorphism at
/// `a^lambda_{+-}`.
#[derive(Debug, Clone)]
pub struct EvaluationModule<B: Backend> {
    base: Arc<SchnizerModule<B>>,
    sign: Sign,
    a: B::Scalar,
    e0: SparseOperator<B::Scalar>,
    f0: SparseOperator<B::Scalar>,
    k0: SparseOperator<B::Scalar>,
    k0inv: SparseOperator<B::Scalar>,
}

impl<B: Backend> EvaluationModule<B> {
    pub fn new(base: Arc<SchnizerModule<B>>, sign: Sign, a: B::Scalar) -> Result<Self> {
        let n = base.rank();
        if n < 2 {
            return Err(CoreError::RankTooSmall(n));
        }
        let b = base.backend().clone();
        if b.is_zero(&a) {
            return Err(CoreError::InvalidParams(
                "spectral parameter a must be nonzero".into(),
            ));
        }
        let e0 = Self::bracket_route(&base, sign, &a, true)?.to_sparse(&*base)?;
        let f0 = Self::bracket_route(&base, sign, &a, false)?.to_sparse(&*base)?;
        let theta: Vec<Op<B::Scalar>> = (1..=n).map(|i| Op::gen(Generator::K(i))).collect();
        let theta_inv: Vec<Op<B::Scalar>> = (1..=n).map(|i| Op::gen(Generator::KInv(i))).collect();
        let k0 = Op::product(theta_inv).to_sparse(&*base)?;
        let k0inv = Op::product(theta).to_sparse(&*base)?;
        Ok(EvaluationModule {
            base,
            sign,
            a,
            e0,
            f0,
            k0,
            k0inv,
        })
    }

    /// The expression `ev^{+-}_{a^lambda}(E_0)` (`raising = true`) or
    /// `ev^{+-}_{a^lambda}(F_0)` in terms of finite generators and a torus
    /// factor acting on the output.
    pub fn bracket_route(
        base: &SchnizerModule<B>,
        sign: Sign,
        a: &B::Scalar,
        raising: bool,
    ) -> Result<Op<B::Scalar>> {
        let n = base.rank();
        let b = base.backend();
        let p = base.params();
        let lam = p.lambda();
        let (s_ev, e_ev) = crate::roots::eval_parameter_exponent(lam, sign)?;
        let ln1 = crate::roots::lambda_weight_generic(lam, 1)?;
        let lnn = crate::roots::lambda_weight_generic(lam, n)?;
        let row1 = form_row(base.shape(), 1);
        let rown = form_row(base.shape(), n);
        // torus: K_{Lambda_1}^t K_{Lambda_n}^{-t}
        let t: i64 = match (sign, raising) {
            (Sign::Plus, true) | (Sign::Minus, false) => 1,
            _ => -1,
        };
        // eps power and sign of the prefactor besides a^{+-1}
        let (q, neg) = if raising {
            (-1, s_ev < 0)
        } else {
            (n as i64, odd(n as i64 - 1) != (s_ev < 0))
        };
        let ev_sign = if raising { 1 } else { -1 };
        let entries = (0..base.dim())
            .into_par_iter()
            .map(|r| {
                let c = p.shifted(r);
                let k1 = ln1.clone() - row1.eval(&c);
                let kn = lnn.clone() - rown.eval(&c);
                let x = e_ev.scale(ev_sign) + (k1 - kn).scale(t) + B::Exponent::from_int(q);
                Ok(b.eps_pow(&x)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let a_pow = if raising { a.clone() } else { b.inv(a)? };
        let gens: Vec<Generator> = match (raising, sign) {
            (true, Sign::Plus) => (1..=n).rev().map(Generator::F).collect(),
            (true, Sign::Minus) => (1..=n).map(Generator::F).collect(),
            (false, Sign::Plus) => (1..=n).rev().map(Generator::E).collect(),
            (false, Sign::Minus) => (1..=n).map(Generator::E).collect(),
        };
        Ok(Op::scaled(
            signed(b, a_pow, neg),
            Op::product(vec![Op::Diagonal(Arc::new(entries)), chain(b, &gens)]),
        ))
    }

    pub fn base(&self) -> &Arc<SchnizerModule<B>> {
        &self.base
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn spectral(&self) -> &B::Scalar {
        &self.a
    }

    /// `a^lambda_{+-}`; needs `eps` to the relevant fractional power.
    pub fn shifted_spectral(&self) -> Result<B::Scalar> {
        let b = self.backend();
        eval_parameter(b, &self.a, self.base.params().lambda(), self.sign)
    }

    /// Closed forms for `E_0 v` (`raising = true`) and `F_0 v`.
    pub fn ev_zero_closed(
        &self,
        raising: bool,
        bsub: BSubscript,
        v: &ModuleVector<B::Scalar>,
    ) -> Result<ModuleVector<B::Scalar>> {
        let p = self.base.params();
        let shape = p.shape();
        let b = p.backend();
        let n = shape.rank();
        let lam = p.lambda();
        let pm = self.sign.as_i64();
        let a_pre = if raising { self.a.clone() } else { b.inv(&self.a)? };
        let kind = if raising { DescentKind::F } else { DescentKind::E };
        let seqs = full_descents(n, kind);
        let mut out = ModuleVector::zero();
        for (r, x) in v.iter() {
            let c = p.shifted(r);
            for d in &seqs {
                let s = d.s;
                let si = s as i64;
                let ni = n as i64;
                let (shift, expo, arg, neg) = if raising {
                    let ce = checked_descent_form(shape, d, DescentForm::CE)?.eval(&c);
                    let inner = ce - lambda_super_generic(lam, s) - B::Exponent::from_int(si);
                    (
                        d.eps_shift(shape)?,
                        inner.scale(pm) + B::Exponent::from_int(ni),
                        diag_step(shape, s).eval(&c) - lam[s - 1].clone(),
                        odd(si + ni),
                    )
                } else {
                    let df = checked_descent_form(shape, d, DescentForm::DF)?.eval(&c);
                    let inner = df + B::Exponent::from_int(ni + 1 - si);
                    let col_b = match bsub {
                        BSubscript::NMinusS => ni - si,
                        BSubscript::NMinusSPlusOne => ni - si + 1,
                    };
                    let mut g = LinearForm::zero(shape);
                    g.add(shape, 1, ni - si + 1, -1);
                    let m_part = g.eval_int(&shape.digits(r));
                    let b_part = shape
                        .slot(1, col_b)
                        .map(|k| p.b()[k].clone())
                        .unwrap_or_else(B::Exponent::zero);
                    (
                        d.alpha_shift(shape)?,
                        inner.scale(pm) - B::Exponent::from_int(ni),
                        B::Exponent::from_int(m_part) - b_part,
                        odd(si - 1),
                    )
                };
                let k = signed(b, b.mul(&a_pre, &a_power(b, p.a(), &shift)?), neg);
                let k = b.mul(&b.mul(&k, &b.eps_pow(&expo)?), &b.q_int(&arg)?);
                out.add_term(b, shape.shift(r, &shift), &b.mul(&k, x));
            }
        }
        Ok(out)
    }
}

impl<B: Backend> Representation for EvaluationModule<B> {
    type B = B;

    fn backend(&self) -> &B {
        self.base.backend()
    }

    fn shape(&self) -> &Shape {
        self.base.shape()
    }

    fn is_affine(&self) -> bool {
        true
    }

    fn generator(&self, g: Generator) -> Result<&SparseOperator<B::Scalar>> {
        match g {
            Generator::E(0) => Ok(&self.e0),
            Generator::F(0) => Ok(&self.f0),
            Generator::K(0) => Ok(&self.k0),
            Generator::KInv(0) => Ok(&self.k0inv),
            _ if g.index() <= self.rank() => self.base.generator(g),
            _ => Err(missing(g)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ModuleParams, WeightVector};
    use evalrep_cyclotomic::{BigRational, ExactBackend, RootOrder};

    fn exact(l: i64) -> ExactBackend {
        ExactBackend::new(RootOrder::new(l).unwrap())
    }

    fn brute(n: usize, i: usize, kind: DescentKind) -> Vec<DescentSequence> {
        let mut out = Vec::new();
        let total = n.pow(i as u32);
        for code in 0..total {
            let r: Vec<usize> = (0..i).map(|k| code / n.pow((i - 1 - k) as u32) % n + 1).collect();
            if let Some(d) = DescentSequence::from_sequence(r) {
                if d.fits(n, kind) {
                    out.push(d);
                }
            }
        }
        out.sort_by(|a, b| (a.s, &a.r).cmp(&(b.s, &b.r)));
        out
    }

    #[test]
    fn descents_match_brute_force() {
        for n in 1..=5 {
            for i in 1..=n {
                for kind in [DescentKind::F, DescentKind::E] {
                    assert_eq!(enumerate_descents(n, i, kind), brute(n, i, kind), "n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn rank_two_full_sets() {
        let d = |s, r: &[usize]| DescentSequence { s, r: r.to_vec() };
        assert_eq!(full_descents(2, DescentKind::F), vec![d(1, &[1, 2]), d(2, &[2, 2])]);
        assert_eq!(full_descents(2, DescentKind::E), vec![d(1, &[1, 2]), d(2, &[1, 1])]);
        let f1: Vec<_> = (1..=4).map(|r| d(1, &[r])).collect();
        assert_eq!(enumerate_descents(4, 1, DescentKind::F), f1);
        assert_eq!(enumerate_descents(4, 1, DescentKind::E), vec![d(1, &[1])]);
    }

    #[test]
    fn full_length_shape() {
        for n in 2..=5 {
            for d in full_descents(n, DescentKind::F) {
                assert!((d.s..=n).all(|k| d.r[k - 1] == k));
            }
            for d in full_descents(n, DescentKind::E) {
                assert!((1..=d.s).all(|k| d.r[k - 1] == 1));
            }
        }
    }

    #[test]
    fn kind_mismatch() {
        let s = Shape::new(2, 3).unwrap();
        let e_seq = DescentSequence { s: 2, r: vec![1, 1] };
        assert!(checked_descent_form(&s, &e_seq, DescentForm::C).is_err());
        assert!(checked_descent_form(&s, &e_seq, DescentForm::D).is_ok());
        let short = DescentSequence { s: 1, r: vec![1] };
        assert!(checked_descent_form(&s, &short, DescentForm::CE).is_err());
    }

    #[test]
    fn q_bracket_of_self() {
        let m = SchnizerModule::distinguished(exact(5), &WeightVector::new(vec![2, 1])).unwrap();
        let b = m.backend().clone();
        let u = Op::gen(Generator::F(1));
        let br = q_bracket(&b, u.clone(), u.clone(), Sign::Plus);
        let want = Op::scaled(b.sub(&b.one(), &b.eps_pow_int(1)), Op::pow(u, 2));
        for r in 0..m.dim() {
            let v = ModuleVector::basis(&b, r);
            assert_eq!(br.apply(&m, &v).unwrap(), want.apply(&m, &v).unwrap());
        }
    }

    #[test]
    fn theta_one_is_generator() {
        let b = exact(3);
        let (e1, f1) = theta_ops(&b, 1);
        assert!(matches!(e1, Op::Gen(Generator::E(1))));
        assert!(matches!(f1, Op::Gen(Generator::F(1))));
    }

    #[test]
    fn closed_theta_matches_brackets_rank_two() {
        for lam in WeightVector::all(2, 3) {
            let m = SchnizerModule::distinguished(exact(3), &lam).unwrap();
            let b = m.backend().clone();
            for i in 1..=2 {
                let (e, f) = theta_ops(&b, i);
                for r in 0..m.dim() {
                    let v = ModuleVector::basis(&b, r);
                    let fc = theta_closed(&m, i, DescentKind::F, ELambdaTerm::RESOLVED, &v).unwrap();
                    assert_eq!(fc, f.apply(&m, &v).unwrap());
                    let ec = theta_closed(&m, i, DescentKind::E, ELambdaTerm::RESOLVED, &v).unwrap();
                    assert_eq!(ec, e.apply(&m, &v).unwrap());
                }
            }
        }
    }

    #[test]
    fn e0_on_v0_example() {
        let b = exact(3);
        let m = Arc::new(SchnizerModule::distinguished(b.clone(), &WeightVector::new(vec![1, 1])).unwrap());
        let ev = EvaluationModule::new(m.clone(), Sign::Plus, b.one()).unwrap();
        let v0 = ModuleVector::basis(&b, 0);
        let got = ev.apply_generator(Generator::E(0), &v0).unwrap();
        let closed = ev.ev_zero_closed(true, BSubscript::RESOLVED, &v0).unwrap();
        assert_eq!(got, closed);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn rank_one_rejected() {
        let b = exact(3);
        let m = Arc::new(SchnizerModule::distinguished(b.clone(), &WeightVector::new(vec![1])).unwrap());
        assert_eq!(
            EvaluationModule::new(m, Sign::Plus, b.one()).unwrap_err(),
            CoreError::RankTooSmall(1)
        );
    }

    #[test]
    fn k0_inverts_k_theta() {
        let b = exact(5);
        let m = Arc::new(SchnizerModule::distinguished(b.clone(), &WeightVector::new(vec![3, 1])).unwrap());
        let ev = EvaluationModule::new(m.clone(), Sign::Minus, b.eps_pow_int(1)).unwrap();
        for r in (0..ev.dim()).step_by(37) {
            let v = ModuleVector::basis(&b, r);
            let mut w = ev.apply_generator(Generator::K(0), &v).unwrap();
            for i in 1..=2 {
                w = ev.apply_generator(Generator::K(i), &w).unwrap();
            }
            assert_eq!(w, v);
        }
    }

    #[test]
    fn nonzero_b_needs_shifted_subscript() {
        let bk = exact(3);
        let zero = BigRational::from_integer(0.into());
        let one = BigRational::from_integer(1.into());
        let bvec = vec![one.clone(), zero.clone(), one.clone()];
        let a = vec![bk.one(), bk.eps_pow_int(1), bk.one()];
        let p = ModuleParams::new(bk.clone(), 2, a, bvec, vec![one.clone(), zero]).unwrap();
        let m = Arc::new(SchnizerModule::new(p).unwrap());
        let ev = EvaluationModule::new(m, Sign::Plus, bk.one()).unwrap();
        let mut differs = false;
        for r in 0..ev.dim() {
            let v = ModuleVector::basis(&bk, r);
            let f0 = ev.apply_generator(Generator::F(0), &v).unwrap();
            assert_eq!(ev.ev_zero_closed(false, BSubscript::NMinusSPlusOne, &v).unwrap(), f0);
            differs |= ev.ev_zero_closed(false, BSubscript::NMinusS, &v).unwrap() != f0;
        }
        assert!(differs);
    }
}
