//! Formal operator expressions over module generators.

use std::fmt;
use std::sync::Arc;

use evalrep_cyclotomic::Backend;
use serde::{Deserialize, Serialize};

use crate::{CoreError, ModuleVector, Result, Shape, SparseOperator};

/// Generators `E_i`, `F_i`, `K_{alpha_i}^{+-1}`; index 0 is the affine node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    E(usize),
    F(usize),
    K(usize),
    KInv(usize),
}

impl Generator {
    pub fn index(self) -> usize {
        match self {
            Generator::E(i) | Generator::F(i) | Generator::K(i) | Generator::KInv(i) => i,
        }
    }

    /// Every generator of the finite (`affine = false`) or affine algebra.
    pub fn all(n: usize, affine: bool) -> Vec<Generator> {
        let lo = if affine { 0 } else { 1 };
        let mut out = Vec::new();
        for i in lo..=n {
            out.extend([Generator::E(i), Generator::F(i), Generator::K(i), Generator::KInv(i)]);
        }
        out
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(i) => write!(f, "E_{i}"),
            Generator::F(i) => write!(f, "F_{i}"),
            Generator::K(i) => write!(f, "K_{i}"),
            Generator::KInv(i) => write!(f, "K_{i}^-1"),
        }
    }
}

/// Accepts `E1`, `E_1`, `F0`, `K2`, `K2^-1` and `Kinv2`.
impl std::str::FromStr for Generator {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || CoreError::InvalidParams(format!("unknown generator {s:?}"));
        let t = s.trim();
        let (head, rest) = if let Some(r) = t.strip_prefix("Kinv") {
            ("Kinv", r)
        } else {
            t.split_at(t.chars().next().map_or(0, char::len_utf8))
        };
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let (digits, inverse) = match rest.strip_suffix("^-1") {
            Some(d) => (d, true),
            None => (rest, false),
        };
        let i: usize = digits.parse().map_err(|_| bad())?;
        match (head, inverse) {
            ("E", false) => Ok(Generator::E(i)),
            ("F", false) => Ok(Generator::F(i)),
            ("K", false) => Ok(Generator::K(i)),
            ("K", true) | ("Kinv", false) => Ok(Generator::KInv(i)),
            _ => Err(bad()),
        }
    }
}

/// Anything on which generators act through precomputed sparse columns.
pub trait Representation: Sync {
    type B: Backend;

    fn backend(&self) -> &Self::B;
    fn shape(&self) -> &Shape;
    fn generator(&self, g: Generator) -> Result<&SparseOperator<<Self::B as Backend>::Scalar>>;
    fn is_affine(&self) -> bool;

    fn dim(&self) -> usize {
        self.shape().dim()
    }

    fn rank(&self) -> usize {
        self.shape().rank()
    }

    fn apply_generator(
        &self,
        g: Generator,
        v: &ModuleVector<<Self::B as Backend>::Scalar>,
    ) -> Result<ModuleVector<<Self::B as Backend>::Scalar>> {
        Ok(self.generator(g)?.apply(self.backend(), v))
    }
}

/// An operator expression. In a `Product` the rightmost factor acts first.
#[derive(Debug, Clone)]
pub enum Op<S> {
    Identity,
    Gen(Generator),
    Diagonal(Arc<Vec<S>>),
    Scale(S, Box<Op<S>>),
    Product(Vec<Op<S>>),
    Sum(Vec<Op<S>>),
}

impl<S: Clone + Send + Sync> Op<S> {
    pub fn gen(g: Generator) -> Self {
        Op::Gen(g)
    }

    pub fn product(factors: Vec<Op<S>>) -> Self {
        Op::Product(factors)
    }

    pub fn scaled(c: S, op: Op<S>) -> Self {
        Op::Scale(c, Box::new(op))
    }

    pub fn difference<B: Backend<Scalar = S>>(b: &B, u: Op<S>, v: Op<S>) -> Self {
        Op::Sum(vec![u, Op::scaled(b.from_int(-1), v)])
    }

    /// `[u, v]_c = uv - c vu`.
    pub fn bracket<B: Backend<Scalar = S>>(b: &B, u: Op<S>, v: Op<S>, c: &S) -> Self {
        Op::Sum(vec![
            Op::Product(vec![u.clone(), v.clone()]),
            Op::scaled(b.neg(c), Op::Product(vec![v, u])),
        ])
    }

    pub fn commutator<B: Backend<Scalar = S>>(b: &B, u: Op<S>, v: Op<S>) -> Self {
        Op::bracket(b, u, v, &b.one())
    }

    pub fn pow(u: Op<S>, k: usize) -> Self {
        if k == 0 {
            Op::Identity
        } else {
            Op::Product(vec![u; k])
        }
    }

    pub fn apply<R>(&self, rep: &R, v: &ModuleVector<S>) -> Result<ModuleVector<S>>
    where
        R: Representation,
        R::B: Backend<Scalar = S>,
    {
        let b = rep.backend();
        Ok(match self {
            Op::Identity => v.clone(),
            Op::Gen(g) => rep.apply_generator(*g, v)?,
            Op::Diagonal(d) => {
                let mut out = ModuleVector::zero();
                for (r, c) in v.iter() {
                    out.add_term(b, r, &b.mul(&d[r], c));
                }
                out
            }
            Op::Scale(c, op) => op.apply(rep, v)?.scale(b, c),
            Op::Product(fs) => {
                let mut cur = v.clone();
                for f in fs.iter().rev() {
                    if cur.is_zero() {
                        break;
                    }
                    cur = f.apply(rep, &cur)?;
                }
                cur
            }
            Op::Sum(ts) => {
                let mut out = ModuleVector::zero();
                for t in ts {
                    out.axpy(b, &b.one(), &t.apply(rep, v)?);
                }
                out
            }
        })
    }

    /// Evaluates the expression on every basis vector.
    pub fn to_sparse<R>(&self, rep: &R) -> Result<SparseOperator<S>>
    where
        R: Representation,
        R::B: Backend<Scalar = S>,
    {
        use rayon::prelude::*;
        let b = rep.backend();
        let cols = (0..rep.dim())
            .into_par_iter()
            .map(|r| self.apply(rep, &ModuleVector::basis(b, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseOperator::from_columns(cols))
    }
}

pub(crate) fn missing(g: Generator) -> CoreError {
    CoreError::MissingGenerator(g.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_names_round_trip() {
        for g in Generator::all(3, true) {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
        assert_eq!("E1".parse::<Generator>().unwrap(), Generator::E(1));
        assert_eq!("Kinv2".parse::<Generator>().unwrap(), Generator::KInv(2));
        for bad in ["", "E", "X1", "E_x", "F1^-1"] {
            assert!(bad.parse::<Generator>().is_err(), "{bad}");
        }
    }
}
