use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Backend;

/// `[r]_eps`.
pub fn q_int<B: Backend>(b: &B, r: i64) -> B::Scalar {
    b.q_int_int(r)
}

/// `[m]_eps! = [m][m-1]...[1]`, with `[0]! = 1`.
pub fn q_factorial<B: Backend>(b: &B, m: u32) -> B::Scalar {
    (1..=m as i64).fold(b.one(), |acc, k| b.mul(&acc, &b.q_int_int(k)))
}

/// The symmetric q-binomial `[r choose m]` as a Laurent polynomial in `q`:
/// returns `(sign, c, offset)` meaning `sign * sum_k c[k] q^(k + offset)`.
///
/// Built from the Gaussian polynomial recurrence, so no denominator is ever
/// divided at a root of unity.
pub fn gaussian_binomial_laurent(r: i64, m: u32) -> (i64, Vec<BigInt>, i64) {
    let m64 = m as i64;
    let (sign, top) = if r < 0 {
        (if m.is_multiple_of(2) { 1 } else { -1 }, m64 - r - 1)
    } else {
        (1, r)
    };
    if m64 > top {
        return (1, Vec::new(), 0);
    }
    // g[j] holds G(t, j)(v) for the current row t, as coefficients in v
    let mut g: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for t in 1..=top {
        let mut next = Vec::with_capacity(g.len() + 1);
        for j in 0..=(t.min(m64) as usize) {
            let mut row: Vec<BigInt> = Vec::new();
            if j < g.len() && (j as i64) < t {
                // v^j G(t-1, j)
                row.resize(j, BigInt::zero());
                row.extend(g[j].iter().cloned());
            }
            if j >= 1 {
                let prev = &g[j - 1];
                if row.len() < prev.len() {
                    row.resize(prev.len(), BigInt::zero());
                }
                for (a, b) in row.iter_mut().zip(prev) {
                    *a += b;
                }
            }
            next.push(row);
        }
        g = next;
    }
    let poly = &g[m as usize];
    // [top choose m]_q = q^(-m(top-m)) G(q^2)
    let mut coeffs = vec![BigInt::zero(); 2 * poly.len().max(1) - 1];
    for (k, c) in poly.iter().enumerate() {
        coeffs[2 * k] = c.clone();
    }
    (sign, coeffs, -m64 * (top - m64))
}

/// `[r choose m]_eps` for any integer `r`.
pub fn q_binomial<B: Backend>(b: &B, r: i64, m: u32) -> B::Scalar {
    let (sign, coeffs, offset) = gaussian_binomial_laurent(r, m);
    let s = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(b.zero(), |acc, (k, c)| {
            let term = b.mul(&b.from_bigint(c), &b.eps_pow_int(k as i64 + offset));
            b.add(&acc, &term)
        });
    if sign < 0 {
        b.neg(&s)
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExactBackend, RootOrder};

    fn ex(l: i64) -> ExactBackend {
        ExactBackend::new(RootOrder::new(l).unwrap())
    }

    #[test]
    fn factorials() {
        let b = ex(3);
        assert!(q_factorial(&b, 0).is_one());
        assert!(q_factorial(&b, 3).is_zero());
        assert!(!q_factorial(&ex(5), 4).is_zero());
    }

    #[test]
    fn binomial_edges() {
        let b = ex(5);
        for r in -6..8 {
            assert!(q_binomial(&b, r, 0).is_one());
            assert_eq!(q_binomial(&b, r, 1), b.q_int_int(r));
        }
        assert!(q_binomial(&b, 2, 3).is_zero());
        assert_eq!(q_binomial(&b, 4, 2), q_binomial(&b, 4, 2));
    }

    #[test]
    fn binomial_matches_factorial_quotient_generic() {
        // at l = 13 the factorials below are nonzero, so the quotient is safe
        let b = ex(13);
        for r in 0..9i64 {
            for m in 0..=r as u32 {
                let num = q_factorial(&b, r as u32);
                let den = b.mul(&q_factorial(&b, m), &q_factorial(&b, r as u32 - m));
                let quo = b.mul(&num, &b.inv(&den).unwrap());
                assert_eq!(q_binomial(&b, r, m), quo, "r={r} m={m}");
            }
        }
    }

    #[test]
    fn binomial_negative_top() {
        // [-r choose m] = prod_{k<m} [-r-k] / [m]!
        let b = ex(13);
        for r in 1..6i64 {
            for m in 0..5u32 {
                let num = (0..m as i64).fold(b.one(), |acc, k| b.mul(&acc, &b.q_int_int(-r - k)));
                let quo = b.mul(&num, &b.inv(&q_factorial(&b, m)).unwrap());
                assert_eq!(q_binomial(&b, -r, m), quo, "r=-{r} m={m}");
            }
        }
    }

    #[test]
    fn binomial_at_root_of_unity() {
        // [3 choose 1] = [3] = 0 at l = 3, no division involved
        let b = ex(3);
        assert!(q_binomial(&b, 3, 1).is_zero());
        assert!(q_binomial(&b, 3, 3).is_one());
    }
}
