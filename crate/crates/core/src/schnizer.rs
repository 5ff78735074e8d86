//! The `l^N`-dimensional Schnizer module `V_eps(a, b, lambda)`.

use evalrep_cyclotomic::{Backend, ExponentValue};
use num_traits::Zero;
use rayon::prelude::*;

use crate::forms::{a_power, form_m, form_mu, form_n, form_row, LinearForm};
use crate::operator::missing;
use crate::roots::lambda_weight_generic;
use crate::{
    CoreError, Generator, ModuleVector, MultiIndex, Representation, Result, RootLatticeElement,
    Shape, SlotVector, SparseOperator, WeightVector,
};

/// Parameters `(a, b, lambda)` of a Schnizer module, slot-indexed in
/// [`Shape`] order.
#[derive(Debug, Clone)]
pub struct ModuleParams<B: Backend> {
    backend: B,
    shape: Shape,
    a: Vec<B::Scalar>,
    b: Vec<B::Exponent>,
    lambda: Vec<B::Exponent>,
}

impl<B: Backend> ModuleParams<B> {
    pub fn new(
        backend: B,
        n: usize,
        a: Vec<B::Scalar>,
        b: Vec<B::Exponent>,
        lambda: Vec<B::Exponent>,
    ) -> Result<Self> {
        let shape = Shape::new(n, backend.order().get())?;
        let big_n = shape.num_slots();
        if a.len() != big_n || b.len() != big_n || lambda.len() != n {
            return Err(CoreError::InvalidParams(format!(
                "expected {big_n} entries of a and b and {n} of lambda, got {}, {}, {}",
                a.len(),
                b.len(),
                lambda.len()
            )));
        }
        if let Some(k) = a.iter().position(|x| backend.is_zero(x)) {
            let (i, j) = shape.slots()[k];
            return Err(CoreError::InvalidParams(format!("a_({i},{j}) is zero")));
        }
        if backend.is_exact() {
            let integral = |v: &[B::Exponent]| v.iter().all(|x| backend.exponent_as_int(x).is_some());
            if !integral(&b) || !integral(&lambda) {
                return Err(CoreError::InvalidParams(
                    "the exact backend needs integer b and lambda".into(),
                ));
            }
        }
        Ok(ModuleParams {
            backend,
            shape,
            a,
            b,
            lambda,
        })
    }

    /// The point `a = 1`, `b = 0`.
    pub fn distinguished(backend: B, lambda: &WeightVector) -> Result<Self> {
        let n = lambda.rank();
        let shape = Shape::new(n, backend.order().get())?;
        let big_n = shape.num_slots();
        let a = vec![backend.one(); big_n];
        let b = vec![B::Exponent::zero(); big_n];
        Self::new(backend, n, a, b, lambda.as_exponents())
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.rank()
    }

    pub fn a(&self) -> &[B::Scalar] {
        &self.a
    }

    pub fn b(&self) -> &[B::Exponent] {
        &self.b
    }

    pub fn lambda(&self) -> &[B::Exponent] {
        &self.lambda
    }

    /// `lambda_i`, 1-based.
    pub fn lambda_i(&self, i: usize) -> &B::Exponent {
        &self.lambda[i - 1]
    }

    /// `lambda` as integers, when every entry is one.
    pub fn integral_weight(&self) -> Option<WeightVector> {
        self.lambda
            .iter()
            .map(|x| self.backend.exponent_as_int(x))
            .collect::<Option<Vec<_>>>()
            .map(WeightVector::new)
    }

    /// `b` as integers, when every entry is one.
    pub fn integral_b(&self) -> Option<Vec<i64>> {
        self.b
            .iter()
            .map(|x| self.backend.exponent_as_int(x))
            .collect()
    }

    pub fn is_distinguished(&self) -> bool {
        self.a.iter().all(|x| self.backend.scalar_eq(x, &self.backend.one()))
            && self.integral_b().is_some_and(|b| b.iter().all(|&x| x == 0))
    }

    /// `c = m + b` for the basis vector of the given rank.
    pub fn shifted(&self, rank: usize) -> Vec<B::Exponent> {
        self.shape
            .digits(rank)
            .0
            .iter()
            .zip(&self.b)
            .map(|(&m, b)| B::Exponent::from_int(m as i64) + b.clone())
            .collect()
    }
}

struct ETerm<S> {
    shift: SlotVector,
    coeff: S,
    form: LinearForm,
}

/// A Schnizer module with the actions of `E_i`, `F_i`, `K_{alpha_i}^{+-1}`
/// tabulated on every basis vector.
#[derive(Debug, Clone)]
pub struct SchnizerModule<B: Backend> {
    params: ModuleParams<B>,
    e: Vec<SparseOperator<B::Scalar>>,
    f: Vec<SparseOperator<B::Scalar>>,
    k: Vec<SparseOperator<B::Scalar>>,
    kinv: Vec<SparseOperator<B::Scalar>>,
}

impl<B: Backend> SchnizerModule<B> {
    pub fn new(params: ModuleParams<B>) -> Result<Self> {
        let n = params.rank();
        let shape = params.shape().clone();
        let bk = params.backend().clone();
        let mut e = Vec::with_capacity(n);
        let mut f = Vec::with_capacity(n);
        let mut k = Vec::with_capacity(n);
        let mut kinv = Vec::with_capacity(n);
        for i in 1..=n {
            let mut eterms = Vec::new();
            for j in 1..=i {
                let shift = shape.alpha_index(i, j)?;
                let coeff = a_power(&bk, params.a(), &shift)?;
                eterms.push(ETerm {
                    shift,
                    coeff,
                    form: form_n(&shape, i, j),
                });
            }
            let mut fterms = Vec::new();
            for j in i..=n {
                let shift = shape.eps_index(i, j)?;
                let coeff = a_power(&bk, params.a(), &shift)?;
                fterms.push(ETerm {
                    shift,
                    coeff,
                    form: form_m(&shape, i, j),
                });
            }
            let mu = form_mu(&shape, i);
            let lam = params.lambda_i(i).clone();
            e.push(Self::tabulate(&params, &eterms, None)?);
            f.push(Self::tabulate(&params, &fterms, Some(&lam))?);
            let diag = |sgn: i64| -> Result<SparseOperator<B::Scalar>> {
                let entries = (0..shape.dim())
                    .into_par_iter()
                    .map(|r| {
                        let x = mu.eval(&params.shifted(r)) + lam.clone();
                        Ok(bk.eps_pow(&x.scale(sgn))?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SparseOperator::diagonal(&bk, entries))
            };
            k.push(diag(1)?);
            kinv.push(diag(-1)?);
        }
        Ok(SchnizerModule {
            params,
            e,
            f,
            k,
            kinv,
        })
    }

    // columns of sum_t coeff_t [form_t(m+b) - lam]_eps v(m + shift_t)
    fn tabulate(
        params: &ModuleParams<B>,
        terms: &[ETerm<B::Scalar>],
        lam: Option<&B::Exponent>,
    ) -> Result<SparseOperator<B::Scalar>> {
        let bk = params.backend();
        let shape = params.shape();
        let cols = (0..shape.dim())
            .into_par_iter()
            .map(|r| {
                let c = params.shifted(r);
                let mut col = ModuleVector::zero();
                for t in terms {
                    let mut x = t.form.eval(&c);
                    if let Some(l) = lam {
                        x = x - l.clone();
                    }
                    let coeff = bk.mul(&t.coeff, &bk.q_int(&x)?);
                    col.add_term(bk, shape.shift(r, &t.shift), &coeff);
                }
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseOperator::from_columns(cols))
    }

    /// `V^0_eps(lambda)`.
    pub fn distinguished(backend: B, lambda: &WeightVector) -> Result<Self> {
        Self::new(ModuleParams::distinguished(backend, lambda)?)
    }

    pub fn params(&self) -> &ModuleParams<B> {
        &self.params
    }

    pub fn basis(&self, m: &MultiIndex) -> ModuleVector<B::Scalar> {
        ModuleVector::basis(self.backend(), self.shape().rank_of(m))
    }

    pub fn act_e(&self, i: usize, v: &ModuleVector<B::Scalar>) -> Result<ModuleVector<B::Scalar>> {
        self.apply_generator(Generator::E(i), v)
    }

    pub fn act_f(&self, i: usize, v: &ModuleVector<B::Scalar>) -> Result<ModuleVector<B::Scalar>> {
        self.apply_generator(Generator::F(i), v)
    }

    /// `K_mu` for `mu` in the root lattice.
    pub fn act_k(
        &self,
        mu: &RootLatticeElement,
        v: &ModuleVector<B::Scalar>,
    ) -> Result<ModuleVector<B::Scalar>> {
        let mut cur = v.clone();
        for (i, &c) in mu.coords().iter().enumerate() {
            let g = if c >= 0 {
                Generator::K(i + 1)
            } else {
                Generator::KInv(i + 1)
            };
            for _ in 0..c.unsigned_abs() {
                cur = self.apply_generator(g, &cur)?;
            }
        }
        Ok(cur)
    }

    /// Exponent of `eps` in `K_{Lambda_i} v(m)`.
    pub fn k_lambda_exponent(&self, i: usize, rank: usize) -> Result<B::Exponent> {
        let row = form_row(self.shape(), i).eval(&self.params.shifted(rank));
        Ok(lambda_weight_generic(self.params.lambda(), i)? - row)
    }

    /// `K_{Lambda_i} v(m) = eps^(-sum_{k>=i} (m_{i,k} + b_{i,k}) + lambda_{Lambda_i}) v(m)`.
    pub fn act_k_lambda(&self, i: usize, v: &ModuleVector<B::Scalar>) -> Result<ModuleVector<B::Scalar>> {
        if !(1..=self.rank()).contains(&i) {
            return Err(CoreError::IndexOutOfRange {
                what: format!("K_Lambda_{i}"),
                n: self.rank(),
            });
        }
        let bk = self.backend();
        let mut out = ModuleVector::zero();
        for (r, c) in v.iter() {
            let x = bk.eps_pow(&self.k_lambda_exponent(i, r)?)?;
            out.add_term(bk, r, &bk.mul(&x, c));
        }
        Ok(out)
    }

    /// `v(m^lambda)`, defined for integral `lambda`.
    pub fn lowest_index(&self) -> Option<MultiIndex> {
        self.params
            .integral_weight()
            .map(|w| self.shape().lowest_index(&w))
    }

    /// Negates one coefficient of one generator column; a mutation used to
    /// check that relation checks can fail.
    pub fn corrupt(&mut self, g: Generator) -> Option<usize> {
        let table = match g {
            Generator::E(i) if (1..=self.rank()).contains(&i) => &mut self.e[i - 1],
            Generator::F(i) if (1..=self.rank()).contains(&i) => &mut self.f[i - 1],
            Generator::K(i) if (1..=self.rank()).contains(&i) => &mut self.k[i - 1],
            Generator::KInv(i) if (1..=self.rank()).contains(&i) => &mut self.kinv[i - 1],
            _ => return None,
        };
        let bk = self.params.backend.clone();
        let (r, col) = table
            .columns_mut()
            .iter_mut()
            .enumerate()
            .find(|(_, c)| !c.is_zero())?;
        let (row, c) = col.leading().map(|(k, c)| (k, c.clone()))?;
        col.add_term(&bk, row, &bk.mul(&c, &bk.from_int(-2)));
        Some(r)
    }
}

impl<B: Backend> Representation for SchnizerModule<B> {
    type B = B;

    fn backend(&self) -> &B {
        &self.params.backend
    }

    fn shape(&self) -> &Shape {
        &self.params.shape
    }

    fn is_affine(&self) -> bool {
        false
    }

    fn generator(&self, g: Generator) -> Result<&SparseOperator<B::Scalar>> {
        let i = g.index();
        if !(1..=self.rank()).contains(&i) {
            return Err(missing(g));
        }
        Ok(match g {
            Generator::E(_) => &self.e[i - 1],
            Generator::F(_) => &self.f[i - 1],
            Generator::K(_) => &self.k[i - 1],
            Generator::KInv(_) => &self.kinv[i - 1],
        })
    }
}
