//! Exact linear algebra on module vectors: reduced echelon bases, operator
//! matrices, kernels and span closures.

use std::collections::{BTreeMap, VecDeque};

use evalrep_cyclotomic::Backend;
use rayon::prelude::*;

use crate::{CoreError, ModuleVector, Op, Representation, Result};

/// A subspace held in fully reduced echelon form. Each vector is keyed by
/// its pivot, the lowest basis index where it is nonzero; the pivot entry
/// is 1 and no other vector is nonzero there.
#[derive(Debug, Clone)]
pub struct SubmoduleBasis<S> {
    ambient: usize,
    rows: BTreeMap<usize, ModuleVector<S>>,
}

impl<S: Clone> SubmoduleBasis<S> {
    pub fn new(ambient: usize) -> Self {
        SubmoduleBasis {
            ambient,
            rows: BTreeMap::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Basis vectors in pivot order.
    pub fn vectors(&self) -> impl Iterator<Item = &ModuleVector<S>> {
        self.rows.values()
    }

    /// `v` minus its projection along the pivots.
    pub fn reduce<B: Backend<Scalar = S>>(&self, b: &B, v: &ModuleVector<S>) -> ModuleVector<S> {
        let mut w = v.clone();
        let hits: Vec<(usize, S)> = w
            .iter()
            .filter(|(k, _)| self.rows.contains_key(k))
            .map(|(k, c)| (k, c.clone()))
            .collect();
        for (p, c) in hits {
            w.axpy(b, &b.neg(&c), &self.rows[&p]);
        }
        w
    }

    pub fn contains<B: Backend<Scalar = S>>(&self, b: &B, v: &ModuleVector<S>) -> bool {
        self.reduce(b, v).is_zero()
    }

    /// Adds `v`; returns the new normalized basis vector when the dimension
    /// grew.
    pub fn insert<B: Backend<Scalar = S>>(
        &mut self,
        b: &B,
        v: &ModuleVector<S>,
    ) -> Result<Option<ModuleVector<S>>> {
        let w = self.reduce(b, v);
        let Some((p, c)) = w.leading().map(|(p, c)| (p, c.clone())) else {
            return Ok(None);
        };
        let w = w.scale(b, &b.inv(&c)?);
        for row in self.rows.values_mut() {
            if let Some(x) = row.get(p).cloned() {
                row.axpy(b, &b.neg(&x), &w);
            }
        }
        self.rows.insert(p, w.clone());
        Ok(Some(w))
    }

    pub fn from_vectors<'a, B: Backend<Scalar = S>>(
        b: &B,
        ambient: usize,
        vs: impl IntoIterator<Item = &'a ModuleVector<S>>,
    ) -> Result<Self>
    where
        S: 'a,
    {
        let mut basis = Self::new(ambient);
        for v in vs {
            basis.insert(b, v)?;
        }
        Ok(basis)
    }

    /// Coordinates of `v` in this basis, pivot order; `None` outside the span.
    pub fn coordinates<B: Backend<Scalar = S>>(&self, b: &B, v: &ModuleVector<S>) -> Option<Vec<S>> {
        if !self.contains(b, v) {
            return None;
        }
        Some(
            self.rows
                .keys()
                .map(|p| v.get(*p).cloned().unwrap_or_else(|| b.zero()))
                .collect(),
        )
    }

    /// Equality of subspaces.
    pub fn same_span<B: Backend<Scalar = S>>(&self, b: &B, other: &SubmoduleBasis<S>) -> bool {
        self.dim() == other.dim() && other.vectors().all(|v| self.contains(b, v))
    }
}

/// An operator matrix in the documented basis order, or in the coordinates
/// of a restriction basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<S> {
    pub dim: usize,
    /// `cols[j]` maps row index to entry.
    pub cols: Vec<ModuleVector<S>>,
}

impl<S: Clone> OperatorMatrix<S> {
    pub fn entry<B: Backend<Scalar = S>>(&self, b: &B, i: usize, j: usize) -> S {
        self.cols[j].get(i).cloned().unwrap_or_else(|| b.zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(ModuleVector::len).sum()
    }

    pub fn equals<B: Backend<Scalar = S>>(&self, b: &B, other: &OperatorMatrix<S>) -> bool {
        self.dim == other.dim && self.cols.iter().zip(&other.cols).all(|(x, y)| x.approx_eq(b, y))
    }

    /// `(row, col, value)` triplets in column-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, &S)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, x)| (i, j, x)))
            .collect()
    }
}

/// Matrix of `op`, optionally restricted to an invariant subspace.
pub fn materialize<R>(
    rep: &R,
    op: &Op<<R::B as Backend>::Scalar>,
    restriction: Option<&SubmoduleBasis<<R::B as Backend>::Scalar>>,
) -> Result<OperatorMatrix<<R::B as Backend>::Scalar>>
where
    R: Representation,
{
    let b = rep.backend();
    match restriction {
        None => {
            let cols = op.to_sparse(rep)?;
            Ok(OperatorMatrix {
                dim: rep.dim(),
                cols: (0..rep.dim()).map(|r| cols.column(r).clone()).collect(),
            })
        }
        Some(sub) => {
            let vs: Vec<_> = sub.vectors().collect();
            let cols = vs
                .par_iter()
                .enumerate()
                .map(|(j, w)| {
                    let img = op.apply(rep, w)?;
                    let coords = sub.coordinates(b, &img).ok_or(CoreError::NotInvariant(j))?;
                    Ok(ModuleVector::from_terms(b, coords.into_iter().enumerate()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(OperatorMatrix { dim: sub.dim(), cols })
        }
    }
}

// rows of the stacked matrix [A_1; A_2; ...] as vectors over the column index
fn stacked_rows<B: Backend>(b: &B, mats: &[OperatorMatrix<B::Scalar>]) -> Vec<ModuleVector<B::Scalar>> {
    let mut rows = Vec::new();
    for m in mats {
        let mut t: BTreeMap<usize, ModuleVector<B::Scalar>> = BTreeMap::new();
        for (j, col) in m.cols.iter().enumerate() {
            for (i, x) in col.iter() {
                t.entry(i).or_default().add_term(b, j, x);
            }
        }
        rows.extend(t.into_values());
    }
    rows
}

/// Nullspace of the stacked matrices, all of size `dim`.
pub fn matrix_kernel<B: Backend>(
    b: &B,
    dim: usize,
    mats: &[OperatorMatrix<B::Scalar>],
) -> Result<SubmoduleBasis<B::Scalar>> {
    let rref = SubmoduleBasis::from_vectors(b, dim, stacked_rows(b, mats).iter())?;
    let mut kernel = SubmoduleBasis::new(dim);
    for f in (0..dim).filter(|f| !rref.rows.contains_key(f)) {
        let mut v = ModuleVector::basis(b, f);
        for (p, row) in &rref.rows {
            if let Some(x) = row.get(f) {
                v.add_term(b, *p, &b.neg(x));
            }
        }
        kernel.insert(b, &v)?;
    }
    Ok(kernel)
}

/// Rank of the stacked matrix, computed from its column space.
pub fn stacked_rank<B: Backend>(b: &B, mats: &[OperatorMatrix<B::Scalar>]) -> Result<usize> {
    let Some(first) = mats.first() else {
        return Ok(0);
    };
    let height: usize = mats.iter().map(|m| m.dim).sum();
    let mut span = SubmoduleBasis::new(height);
    for j in 0..first.dim {
        let mut col = ModuleVector::zero();
        let mut off = 0;
        for m in mats {
            for (i, x) in m.cols[j].iter() {
                col.add_term(b, off + i, x);
            }
            off += m.dim;
        }
        span.insert(b, &col)?;
    }
    Ok(span.dim())
}

/// `cap_k ker(op_k)` on the whole module.
pub fn joint_kernel<R: Representation>(
    rep: &R,
    ops: &[Op<<R::B as Backend>::Scalar>],
) -> Result<SubmoduleBasis<<R::B as Backend>::Scalar>> {
    let mats = ops
        .iter()
        .map(|op| materialize(rep, op, None))
        .collect::<Result<Vec<_>>>()?;
    matrix_kernel(rep.backend(), rep.dim(), &mats)
}

/// `cap_k ker(op_k)` inside an invariant subspace, returned in ambient
/// coordinates.
pub fn joint_kernel_within<R: Representation>(
    rep: &R,
    ops: &[Op<<R::B as Backend>::Scalar>],
    sub: &SubmoduleBasis<<R::B as Backend>::Scalar>,
) -> Result<SubmoduleBasis<<R::B as Backend>::Scalar>> {
    let b = rep.backend();
    let mats = ops
        .iter()
        .map(|op| materialize(rep, op, Some(sub)))
        .collect::<Result<Vec<_>>>()?;
    let local = matrix_kernel(b, sub.dim(), &mats)?;
    let basis: Vec<_> = sub.vectors().collect();
    let mut out = SubmoduleBasis::new(rep.dim());
    for k in local.vectors() {
        let mut v = ModuleVector::zero();
        for (j, x) in k.iter() {
            v.axpy(b, x, basis[j]);
        }
        out.insert(b, &v)?;
    }
    Ok(out)
}

/// Smallest subspace containing `start` and stable under `ops`.
pub fn span_closure<R: Representation>(
    rep: &R,
    start: &[ModuleVector<<R::B as Backend>::Scalar>],
    ops: &[Op<<R::B as Backend>::Scalar>],
) -> Result<SubmoduleBasis<<R::B as Backend>::Scalar>> {
    let b = rep.backend();
    let mut basis = SubmoduleBasis::new(rep.dim());
    let mut queue = VecDeque::new();
    for v in start {
        if let Some(w) = basis.insert(b, v)? {
            queue.push_back(w);
        }
    }
    while let Some(w) = queue.pop_front() {
        let images = ops
            .par_iter()
            .map(|op| op.apply(rep, &w))
            .collect::<Result<Vec<_>>>()?;
        for img in images {
            if let Some(x) = basis.insert(b, &img)? {
                queue.push_back(x);
            }
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Generator, SchnizerModule, WeightVector};
    use evalrep_cyclotomic::{ExactBackend, RootOrder};

    fn module(l: i64, lam: &[i64]) -> SchnizerModule<ExactBackend> {
        let b = ExactBackend::new(RootOrder::new(l).unwrap());
        SchnizerModule::distinguished(b, &WeightVector::new(lam.to_vec())).unwrap()
    }

    #[test]
    fn identity_matrix() {
        let m = module(3, &[1]);
        let b = m.backend().clone();
        let mat = materialize(&m, &Op::Identity, None).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { b.one() } else { b.zero() };
                assert_eq!(mat.entry(&b, i, j), want);
            }
        }
    }

    #[test]
    fn k_matrix_rank_one() {
        let m = module(3, &[1]);
        let b = m.backend().clone();
        let mat = materialize(&m, &Op::gen(Generator::K(1)), None).unwrap();
        for r in 0..3 {
            assert_eq!(mat.entry(&b, r, r), b.eps_pow_int(1 - 2 * r as i64));
        }
        assert_eq!(mat.nnz(), 3);
    }

    #[test]
    fn e_matrix_entries() {
        let m = module(3, &[1]);
        let b = m.backend().clone();
        let mat = materialize(&m, &Op::gen(Generator::E(1)), None).unwrap();
        assert_eq!(mat.nnz(), 2);
        assert_eq!(mat.entry(&b, 0, 1), b.q_int_int(-1));
        assert_eq!(mat.entry(&b, 1, 2), b.q_int_int(-2));
    }

    #[test]
    fn identity_kernel_is_zero() {
        let m = module(5, &[2, 1]);
        assert!(joint_kernel(&m, &[Op::Identity]).unwrap().is_empty());
    }

    #[test]
    fn echelon_is_reduced() {
        let b = ExactBackend::new(RootOrder::new(5).unwrap());
        let e = b.eps_pow_int(1);
        let vs = [
            ModuleVector::from_terms(&b, [(0, e.clone()), (2, b.one())]),
            ModuleVector::from_terms(&b, [(0, b.one()), (1, b.one())]),
            ModuleVector::from_terms(&b, [(1, b.one()), (2, b.from_int(3))]),
        ];
        let basis = SubmoduleBasis::from_vectors(&b, 4, vs.iter()).unwrap();
        for (p, row) in &basis.rows {
            assert!(row.get(*p).unwrap().is_one());
            for q in basis.pivots().filter(|q| q != p) {
                assert!(row.get(q).is_none());
            }
        }
        for v in &vs {
            assert!(basis.contains(&b, v));
        }
    }

    #[test]
    fn closure_of_invariant_space_is_stable() {
        let m = module(3, &[1, 1]);
        let b = m.backend().clone();
        let ops: Vec<_> = Generator::all(2, false).into_iter().map(Op::gen).collect();
        let c = span_closure(&m, &[ModuleVector::basis(&b, 0)], &ops).unwrap();
        let again = span_closure(&m, &c.vectors().cloned().collect::<Vec<_>>(), &ops).unwrap();
        assert!(c.same_span(&b, &again));
        assert!(c.dim() <= m.dim());
    }

    #[test]
    fn restriction_outside_span_fails() {
        let m = module(3, &[1]);
        let b = m.backend().clone();
        let sub = SubmoduleBasis::from_vectors(&b, 3, [ModuleVector::basis(&b, 0)].iter()).unwrap();
        let err = materialize(&m, &Op::gen(Generator::F(1)), Some(&sub)).unwrap_err();
        assert_eq!(err, CoreError::NotInvariant(0));
    }
}
