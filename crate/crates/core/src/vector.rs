use std::collections::BTreeMap;

use evalrep_cyclotomic::Backend;

/// Finite linear combination of basis vectors, keyed by basis rank.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector<S> {
    terms: BTreeMap<usize, S>,
}

impl<S> Default for ModuleVector<S> {
    fn default() -> Self {
        ModuleVector {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Clone> ModuleVector<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis<B: Backend<Scalar = S>>(b: &B, rank: usize) -> Self {
        let mut v = Self::zero();
        v.terms.insert(rank, b.one());
        v
    }

    pub fn from_terms<B: Backend<Scalar = S>>(b: &B, terms: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut v = Self::zero();
        for (k, c) in terms {
            v.add_term(b, k, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, rank: usize) -> Option<&S> {
        self.terms.get(&rank)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn leading(&self) -> Option<(usize, &S)> {
        self.terms.iter().next().map(|(&k, c)| (k, c))
    }

    pub fn add_term<B: Backend<Scalar = S>>(&mut self, b: &B, rank: usize, c: &S) {
        if b.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&rank) {
            Some(x) => {
                let s = b.add(x, c);
                if b.is_zero(&s) {
                    self.terms.remove(&rank);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(rank, c.clone());
            }
        }
    }

    /// `self += k * other`.
    pub fn axpy<B: Backend<Scalar = S>>(&mut self, b: &B, k: &S, other: &ModuleVector<S>) {
        if b.is_zero(k) {
            return;
        }
        for (&r, c) in &other.terms {
            self.add_term(b, r, &b.mul(k, c));
        }
    }

    pub fn add<B: Backend<Scalar = S>>(&self, b: &B, other: &ModuleVector<S>) -> Self {
        let mut v = self.clone();
        v.axpy(b, &b.one(), other);
        v
    }

    pub fn sub<B: Backend<Scalar = S>>(&self, b: &B, other: &ModuleVector<S>) -> Self {
        let mut v = self.clone();
        v.axpy(b, &b.from_int(-1), other);
        v
    }

    pub fn scale<B: Backend<Scalar = S>>(&self, b: &B, k: &S) -> Self {
        let mut v = Self::zero();
        v.axpy(b, k, self);
        v
    }

    pub fn approx_eq<B: Backend<Scalar = S>>(&self, b: &B, other: &ModuleVector<S>) -> bool {
        self.sub(b, other).is_zero()
    }
}

/// A linear operator stored column by column: `cols[r]` is the image of
/// basis vector `r`.
#[derive(Debug, Clone)]
pub struct SparseOperator<S> {
    cols: Vec<ModuleVector<S>>,
}

impl<S: Clone> SparseOperator<S> {
    pub fn from_columns(cols: Vec<ModuleVector<S>>) -> Self {
        SparseOperator { cols }
    }

    pub fn diagonal<B: Backend<Scalar = S>>(b: &B, entries: Vec<S>) -> Self {
        SparseOperator {
            cols: entries
                .into_iter()
                .enumerate()
                .map(|(r, c)| ModuleVector::from_terms(b, [(r, c)]))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, r: usize) -> &ModuleVector<S> {
        &self.cols[r]
    }

    pub fn columns_mut(&mut self) -> &mut [ModuleVector<S>] {
        &mut self.cols
    }

    pub fn apply<B: Backend<Scalar = S>>(&self, b: &B, v: &ModuleVector<S>) -> ModuleVector<S> {
        let mut out = ModuleVector::zero();
        for (r, c) in v.iter() {
            out.axpy(b, c, &self.cols[r]);
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(ModuleVector::len).sum()
    }
}
