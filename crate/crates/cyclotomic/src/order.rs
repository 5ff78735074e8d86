use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ScalarError;

/// The order `l` of the root of unity: odd and at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u32")]
pub struct RootOrder(u32);

impl RootOrder {
    pub fn new(l: i64) -> Result<Self, ScalarError> {
        if l < 3 || l % 2 == 0 || l > u32::MAX as i64 {
            return Err(ScalarError::InvalidOrder(l));
        }
        Ok(RootOrder(l as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces `k` into `0..l`.
    pub fn residue(self, k: i64) -> u32 {
        k.rem_euclid(self.0 as i64) as u32
    }

    /// Inverse of `q` modulo `l`, if it exists.
    pub fn inverse_mod(self, q: i64) -> Option<i64> {
        let l = self.0 as i64;
        let (mut r0, mut r1) = (l, q.rem_euclid(l));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        (r0 == 1).then(|| t0.rem_euclid(l))
    }
}

impl TryFrom<i64> for RootOrder {
    type Error = ScalarError;
    fn try_from(l: i64) -> Result<Self, ScalarError> {
        RootOrder::new(l)
    }
}

impl From<RootOrder> for u32 {
    fn from(o: RootOrder) -> u32 {
        o.0
    }
}

impl fmt::Display for RootOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
