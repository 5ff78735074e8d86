//! Drinfel'd polynomials of evaluation modules and the `+`/`-`
//! isomorphism criterion.

use std::sync::Arc;

use evalrep_cyclotomic::Backend;
use serde::{Deserialize, Serialize};

use crate::analysis::nilpotent_submodule;
use crate::linalg::materialize;
use crate::roots::{lambda_super, support};
use crate::{
    CoreError, EvaluationModule, Generator, ModuleVector, Op, Representation, Result,
    SchnizerModule, Sign, WeightVector,
};

/// `P_i(t) = prod_{p=1}^{lambda_i} (t - eps^{lambda_i - 2p + 1} root)`,
/// coefficients lowest degree first.
#[derive(Debug, Clone)]
pub struct DrinfeldPolynomial<S> {
    pub i: usize,
    /// `a_{(+-,i)}`; `None` for the constant polynomial.
    pub root: Option<S>,
    pub coeffs: Vec<S>,
}

impl<S: Clone> DrinfeldPolynomial<S> {
    pub fn constant<B: Backend<Scalar = S>>(b: &B, i: usize) -> Self {
        DrinfeldPolynomial {
            i,
            root: None,
            coeffs: vec![b.one()],
        }
    }

    /// The `eps`-string polynomial of length `len` centred on `root`.
    pub fn from_root<B: Backend<Scalar = S>>(b: &B, i: usize, len: i64, root: S) -> Self {
        let mut coeffs = vec![b.one()];
        for p in 1..=len {
            let z = b.mul(&b.eps_pow_int(len - 2 * p + 1), &root);
            let mut next = vec![b.zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] = b.add(&next[k + 1], c);
                next[k] = b.sub(&next[k], &b.mul(&z, c));
            }
            coeffs = next;
        }
        DrinfeldPolynomial {
            i,
            root: Some(root),
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic<B: Backend<Scalar = S>>(&self, b: &B) -> bool {
        self.coeffs.last().is_some_and(|c| b.scalar_eq(c, &b.one()))
    }

    pub fn equals<B: Backend<Scalar = S>>(&self, b: &B, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(x, y)| b.scalar_eq(x, y))
    }
}

/// `a_{(+-,i)} = a^{-1} eps^{+-(lambda^(i) + i)}`.
pub fn root_closed<B: Backend>(b: &B, lambda: &WeightVector, a: &B::Scalar, sign: Sign, i: usize) -> Result<B::Scalar> {
    let x = sign.as_i64() * (lambda_super(lambda, i) + i as i64);
    Ok(b.mul(&b.inv(a)?, &b.eps_pow_int(x)))
}

pub fn drinfeld_closed<B: Backend>(
    b: &B,
    lambda: &WeightVector,
    a: &B::Scalar,
    sign: Sign,
    i: usize,
) -> Result<DrinfeldPolynomial<B::Scalar>> {
    check_index(lambda.rank(), i)?;
    let li = lambda.get(i);
    if li == 0 {
        return Ok(DrinfeldPolynomial::constant(b, i));
    }
    let root = root_closed(b, lambda, a, sign, i)?;
    Ok(DrinfeldPolynomial::from_root(b, i, li, root))
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if (1..=n).contains(&i) {
        Ok(())
    } else {
        Err(CoreError::IndexOutOfRange {
            what: format!("i = {i}"),
            n,
        })
    }
}

/// The generator word `E_i ... E_1 E_{i+1} ... E_n E_0`, rightmost first.
pub fn extraction_word<S: Clone + Send + Sync>(n: usize, i: usize) -> Op<S> {
    let mut word: Vec<Op<S>> = (1..=i).rev().map(|k| Op::gen(Generator::E(k))).collect();
    word.extend((i + 1..=n).map(|k| Op::gen(Generator::E(k))));
    word.push(Op::gen(Generator::E(0)));
    Op::product(word)
}

/// The eigenvalue of `psi_{i,1}` on `v(0)`.
pub fn psi1_coefficient<B: Backend>(ev: &EvaluationModule<B>, i: usize) -> Result<B::Scalar> {
    let n = ev.rank();
    check_index(n, i)?;
    let b = ev.backend();
    let w = extraction_word(n, i).apply(ev, &ModuleVector::basis(b, 0))?;
    if w.iter().any(|(r, _)| r != 0) {
        return Err(CoreError::NotHighestWeight);
    }
    let c = w.get(0).cloned().unwrap_or_else(|| b.zero());
    let li = ev.base().params().lambda_i(i).clone();
    let x = li - <B::Exponent as evalrep_cyclotomic::ExponentValue>::from_int(n as i64 + 1);
    let mut k = b.mul(&b.sub(&b.eps_pow_int(1), &b.eps_pow_int(-1)), &b.eps_pow(&x)?);
    if i.is_multiple_of(2) {
        k = b.neg(&k);
    }
    Ok(b.mul(&k, &c))
}

/// Solves `psi_{i,1} = (eps^{lambda_i} - eps^{-lambda_i}) a_{(i)}^{-1} eps^{lambda_i - 1}`
/// for the root and assembles the polynomial.
pub fn drinfeld_from_module<B: Backend>(ev: &EvaluationModule<B>, i: usize) -> Result<DrinfeldPolynomial<B::Scalar>> {
    check_index(ev.rank(), i)?;
    let b = ev.backend();
    let li = ev
        .base()
        .params()
        .integral_weight()
        .ok_or_else(|| CoreError::InvalidParams("Drinfel'd extraction needs integral lambda".into()))?
        .get(i);
    if li == 0 {
        return Err(CoreError::ZeroWeight(i));
    }
    let psi = psi1_coefficient(ev, i)?;
    if b.is_zero(&psi) {
        return Err(CoreError::NotHighestWeight);
    }
    let num = b.mul(&b.sub(&b.eps_pow_int(li), &b.eps_pow_int(-li)), &b.eps_pow_int(li - 1));
    let root = b.mul(&num, &b.inv(&psi)?);
    Ok(DrinfeldPolynomial::from_root(b, i, li, root))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoMethod {
    Direct,
    Explicit,
    OperatorWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoDecision {
    pub verdict: bool,
    pub method: IsoMethod,
    pub details: Vec<String>,
}

/// When `L^+_{a_+}` and `L^-_{a_-}` are isomorphic, as a condition on
/// `a_+ / a_-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoCondition {
    Always,
    Never,
    /// `a_+ = a_- eps^k`, `0 <= k < l`.
    Ratio(i64),
}

/// The exponents `2(lambda^(i) + i) mod l`, `i in supp(lambda)`.
pub fn direct_exponents(lambda: &WeightVector, l: u32) -> Vec<(usize, i64)> {
    support(lambda)
        .into_iter()
        .map(|i| (i, (2 * (lambda_super(lambda, i) + i as i64)).rem_euclid(l as i64)))
        .collect()
}

pub fn direct_condition(lambda: &WeightVector, l: u32) -> IsoCondition {
    let ex = direct_exponents(lambda, l);
    match ex.first() {
        None => IsoCondition::Always,
        Some(&(_, k)) if ex.iter().all(|&(_, x)| x == k) => IsoCondition::Ratio(k),
        Some(_) => IsoCondition::Never,
    }
}

/// Condition (a) on the support: for `2 <= r <= m`,
/// `lambda_{i_r} = (-1)^{r-1} lambda_{i_1} + (-1)^r i_1 - i_r + 2 sum_{k=2}^{r-1} (-1)^{r-1+k} i_k`
/// mod `l`, and nonzero.
pub fn explicit_support_condition(lambda: &WeightVector, l: u32) -> Vec<(usize, bool)> {
    let l = l as i64;
    let idx = support(lambda);
    let sg = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
    let i = |k: usize| idx[k - 1] as i64;
    (2..=idx.len())
        .map(|r| {
            let mut rhs = sg(r - 1) * lambda.get(idx[0]) + sg(r) * i(1) - i(r);
            for k in 2..r {
                rhs += 2 * sg(r - 1 + k) * i(k);
            }
            let rhs = rhs.rem_euclid(l);
            (r, rhs != 0 && lambda.get(idx[r - 1]).rem_euclid(l) == rhs)
        })
        .collect()
}

pub fn explicit_condition(lambda: &WeightVector, l: u32) -> IsoCondition {
    let idx = support(lambda);
    if idx.is_empty() {
        return IsoCondition::Always;
    }
    if !explicit_support_condition(lambda, l).iter().all(|&(_, ok)| ok) {
        return IsoCondition::Never;
    }
    let m = idx.len();
    let alt: i64 = (1..=m)
        .map(|k| if k % 2 == 1 { idx[k - 1] as i64 } else { -(idx[k - 1] as i64) })
        .sum();
    let k = if m % 2 == 1 {
        2 * alt
    } else {
        // lambda_{i_1} + sum_{k=2}^m (-1)^k i_k = lambda_{i_1} + i_1 - alt
        2 * (lambda.get(idx[0]) + idx[0] as i64 - alt)
    };
    IsoCondition::Ratio(k.rem_euclid(l as i64))
}

pub fn iso_direct<B: Backend>(b: &B, lambda: &WeightVector, a_plus: &B::Scalar, a_minus: &B::Scalar) -> IsoDecision {
    let l = b.order().get();
    let mut details = Vec::new();
    let mut verdict = true;
    for (i, k) in direct_exponents(lambda, l) {
        let ok = b.scalar_eq(a_plus, &b.mul(a_minus, &b.eps_pow_int(k)));
        details.push(format!("i={i}: a_+ = a_- eps^{k}: {ok}"));
        verdict &= ok;
    }
    if details.is_empty() {
        details.push("lambda = 0".into());
    }
    if let Some(t) = b.tolerance_hint() {
        details.push(format!("tolerance {t:e}"));
    }
    IsoDecision {
        verdict,
        method: IsoMethod::Direct,
        details,
    }
}

pub fn iso_explicit<B: Backend>(b: &B, lambda: &WeightVector, a_plus: &B::Scalar, a_minus: &B::Scalar) -> IsoDecision {
    let l = b.order().get();
    let mut details: Vec<String> = explicit_support_condition(lambda, l)
        .into_iter()
        .map(|(r, ok)| format!("support r={r}: {ok}"))
        .collect();
    let verdict = match explicit_condition(lambda, l) {
        IsoCondition::Always => {
            details.push("lambda = 0".into());
            true
        }
        IsoCondition::Never => false,
        IsoCondition::Ratio(k) => {
            let ok = b.scalar_eq(a_plus, &b.mul(a_minus, &b.eps_pow_int(k)));
            details.push(format!("ratio a_+ = a_- eps^{k}: {ok}"));
            ok
        }
    };
    IsoDecision {
        verdict,
        method: IsoMethod::Explicit,
        details,
    }
}

/// Compares every affine generator of `V^+_{a_+}` and `V^-_{a_-}` on
/// `L^nil(lambda)`.
pub fn iso_witness<B: Backend>(
    b: &B,
    lambda: &WeightVector,
    a_plus: &B::Scalar,
    a_minus: &B::Scalar,
) -> Result<IsoDecision> {
    let n = lambda.rank();
    if n < 2 {
        return Err(CoreError::RankTooSmall(n));
    }
    let base = Arc::new(SchnizerModule::distinguished(b.clone(), lambda)?);
    let plus = EvaluationModule::new(base.clone(), Sign::Plus, a_plus.clone())?;
    let minus = EvaluationModule::new(base, Sign::Minus, a_minus.clone())?;
    let sub = nilpotent_submodule(&plus)?;
    let mut details = vec![format!("dim L = {}", sub.dim())];
    let mut verdict = true;
    for g in Generator::all(n, true) {
        let op = Op::gen(g);
        let p = materialize(&plus, &op, Some(&sub))?;
        let m = materialize(&minus, &op, Some(&sub))?;
        if !p.equals(b, &m) {
            verdict = false;
            details.push(format!("{g} differs"));
        }
    }
    Ok(IsoDecision {
        verdict,
        method: IsoMethod::OperatorWitness,
        details,
    })
}
