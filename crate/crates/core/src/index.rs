//! Slot layout of the Schnizer basis `v(m)`, `m in Z_l^N`.

use serde::{Deserialize, Serialize};

use crate::{CoreError, Result, WeightVector};

const MAX_DIM: u128 = 1 << 26;

/// Slots `(i, j)`, `1 <= i <= j <= n`, in row-major order
/// `(1,1), (1,2), ..., (1,n), (2,2), ..., (n,n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    n: usize,
    l: u32,
    slots: Vec<(usize, usize)>,
    // place value of each slot; the first slot is most significant
    place: Vec<usize>,
    dim: usize,
}

impl Shape {
    pub fn new(n: usize, l: u32) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::IndexOutOfRange {
                what: "rank 0".into(),
                n,
            });
        }
        let slots: Vec<_> = (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
        let big_n = slots.len();
        if (l as u128).checked_pow(big_n as u32).is_none_or(|d| d > MAX_DIM) {
            return Err(CoreError::DimensionTooLarge { l, big_n });
        }
        let dim = (l as usize).pow(big_n as u32);
        let place = (0..big_n)
            .map(|s| (l as usize).pow((big_n - 1 - s) as u32))
            .collect();
        Ok(Shape {
            n,
            l,
            slots,
            place,
            dim,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.l
    }

    /// `N = n(n+1)/2`.
    pub fn num_slots(&self) -> usize {
        self.slots.len()
    }

    /// `l^N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> &[(usize, usize)] {
        &self.slots
    }

    /// Position of `(i, j)`, or `None` outside `1 <= i <= j <= n`.
    pub fn slot(&self, i: i64, j: i64) -> Option<usize> {
        let n = self.n as i64;
        if i < 1 || j < i || j > n {
            return None;
        }
        let (i, j) = (i as usize, j as usize);
        // rows 1..i-1 hold n, n-1, ..., n-i+2 slots
        Some((i - 1) * (2 * self.n + 2 - i) / 2 + (j - i))
    }

    pub fn digits(&self, rank: usize) -> MultiIndex {
        let l = self.l as usize;
        MultiIndex(
            self.place
                .iter()
                .map(|p| ((rank / p) % l) as u32)
                .collect(),
        )
    }

    pub fn rank_of(&self, m: &MultiIndex) -> usize {
        m.0.iter()
            .zip(&self.place)
            .map(|(&d, p)| d as usize * p)
            .sum()
    }

    /// Rank of `m + c`, reduced mod `l`.
    pub fn shift(&self, rank: usize, c: &SlotVector) -> usize {
        let l = self.l as i64;
        let mut out = 0usize;
        for (s, p) in self.place.iter().enumerate() {
            let d = ((rank / p) % self.l as usize) as i64;
            out += ((d + c.0[s]).rem_euclid(l)) as usize * p;
        }
        out
    }

    pub fn zero_vector(&self) -> SlotVector {
        SlotVector(vec![0; self.num_slots()])
    }

    /// Unit vector `epsilon_{i,j}`.
    pub fn eps_index(&self, i: usize, j: usize) -> Result<SlotVector> {
        let s = self.slot(i as i64, j as i64).ok_or_else(|| CoreError::IndexOutOfRange {
            what: format!("epsilon_({i},{j})"),
            n: self.n,
        })?;
        let mut v = self.zero_vector();
        v.0[s] = 1;
        Ok(v)
    }

    /// `alpha_{i,j} = sum_{k=j+1}^i eps_{k-1,n-i+k} - sum_{k=j}^i eps_{k,n-i+k}`
    /// for `1 <= j <= i <= n`.
    pub fn alpha_index(&self, i: usize, j: usize) -> Result<SlotVector> {
        if !(1 <= j && j <= i && i <= self.n) {
            return Err(CoreError::IndexOutOfRange {
                what: format!("alpha_({i},{j})"),
                n: self.n,
            });
        }
        let (n, i, j) = (self.n as i64, i as i64, j as i64);
        let mut v = self.zero_vector();
        for k in j + 1..=i {
            v.add_slot(self, k - 1, n - i + k, 1);
        }
        for k in j..=i {
            v.add_slot(self, k, n - i + k, -1);
        }
        Ok(v)
    }

    /// `m^lambda` with `m_{i,j} = sum_{k=1}^i lambda_{j-k+1} mod l`.
    pub fn lowest_index(&self, lambda: &WeightVector) -> MultiIndex {
        let l = self.l as i64;
        MultiIndex(
            self.slots
                .iter()
                .map(|&(i, j)| {
                    (1..=i)
                        .map(|k| lambda.get(j - k + 1))
                        .sum::<i64>()
                        .rem_euclid(l) as u32
                })
                .collect(),
        )
    }
}

/// Residues `m_{i,j}` in slot order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(shape: &Shape) -> Self {
        MultiIndex(vec![0; shape.num_slots()])
    }

    pub fn get(&self, shape: &Shape, i: i64, j: i64) -> u32 {
        shape.slot(i, j).map_or(0, |s| self.0[s])
    }

    pub fn add(&self, shape: &Shape, c: &SlotVector) -> MultiIndex {
        let l = shape.order() as i64;
        MultiIndex(
            self.0
                .iter()
                .zip(&c.0)
                .map(|(&m, &d)| (m as i64 + d).rem_euclid(l) as u32)
                .collect(),
        )
    }
}

/// Signed integer vector over slots, e.g. `epsilon_{i,j}` or `alpha_{i,j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlotVector(pub Vec<i64>);

impl SlotVector {
    /// Adds `k` at `(i, j)`; out-of-range slots are dropped.
    pub fn add_slot(&mut self, shape: &Shape, i: i64, j: i64, k: i64) {
        if let Some(s) = shape.slot(i, j) {
            self.0[s] += k;
        }
    }

    pub fn plus(&self, other: &SlotVector) -> SlotVector {
        SlotVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}
