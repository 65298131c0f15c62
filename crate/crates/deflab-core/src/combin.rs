//! Combinatorics: checked binomials, log-factorials and multi-index helpers.
//!
//! Factorial ratios are evaluated in log space or by telescoping products;
//! `(N+n+d-1)!` overflows 64-bit integers long before the sector dimensions
//! become interesting, so nothing here multiplies raw factorials.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Checked binomial coefficient in `u128`; `None` on overflow.
pub fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) / (j + 1) stays integral when divided after the
        // multiply; check the multiply only.
        acc = acc.checked_mul(n - j)?;
        acc /= j + 1;
    }
    Some(acc)
}

/// Binomial coefficient as `usize`, with overflow detection.
pub fn binomial(n: usize, k: usize) -> Result<usize> {
    let v = binomial_u128(n as u128, k as u128).ok_or(Error::Capacity {
        what: "binomial coefficient",
        required: u128::MAX,
        cap: u128::MAX,
    })?;
    usize::try_from(v).map_err(|_| Error::Capacity {
        what: "binomial coefficient",
        required: v,
        cap: usize::MAX as u128,
    })
}

/// Binomial coefficient as `f64` via log-factorials (no overflow).
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    libm_exp(ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
}

fn libm_exp(x: f64) -> f64 {
    num_traits::Float::exp(x)
}

/// `ln(n!)` from a lazily initialized cumulative table.
pub fn ln_factorial(n: usize) -> f64 {
    const TABLE_LEN: usize = 257;
    static TABLE: once_cell::race::OnceBox<Vec<f64>> = once_cell::race::OnceBox::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        t.push(0.0);
        let mut acc = 0.0f64;
        for i in 1..TABLE_LEN {
            acc += num_traits::Float::ln(i as f64);
            t.push(acc);
        }
        alloc::boxed::Box::new(t)
    });
    if n < TABLE_LEN {
        table[n]
    } else {
        let mut acc = table[TABLE_LEN - 1];
        for i in TABLE_LEN..=n {
            acc += num_traits::Float::ln(i as f64);
        }
        acc
    }
}

/// `ln(Π m_i!)` for a multi-index.
pub fn ln_multi_factorial(m: &[u32]) -> f64 {
    m.iter().map(|&x| ln_factorial(x as usize)).sum()
}

/// Falling factorial `n (n-1) ... (n-k+1)` as `f64`.
pub fn falling_f64(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (n - j) as f64;
    }
    acc
}

/// Enumerate all multi-indices `(m_1,...,m_d)` with `Σ m_i = total`, in
/// lexicographically descending order.
///
/// For `d = 2, total = 2` this yields `(2,0), (1,1), (0,2)`.
pub fn multiset_indices(d: usize, total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; d];
    fill(&mut out, &mut cur, 0, total);
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut [u32], pos: usize, remaining: u32) {
    if pos == cur.len() - 1 {
        cur[pos] = remaining;
        out.push(cur.to_vec());
        return;
    }
    // Descending count in the current slot gives global lex-descending order.
    for v in (0..=remaining).rev() {
        cur[pos] = v;
        fill(out, cur, pos + 1, remaining - v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(5, 7).unwrap(), 0);
        assert_eq!(binomial_u128(64, 32).unwrap(), 1832624140942590534);
    }

    #[test]
    fn binomial_overflow_detected() {
        // C(200, 100) does not fit in u128? It does (~9e58). C(1000,500) does not.
        assert!(binomial_u128(1000, 500).is_none());
        assert!(binomial(1000, 500).is_err());
    }

    #[test]
    fn ln_factorial_matches_direct() {
        let mut acc = 0.0;
        for n in 1..200usize {
            acc += num_traits::Float::ln(n as f64);
            let got = ln_factorial(n);
            assert!((got - acc).abs() < 1e-9 * acc.max(1.0), "n={n}");
        }
    }

    #[test]
    fn multiset_order_is_lex_descending() {
        let ms = multiset_indices(2, 2);
        assert_eq!(ms, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let ms3 = multiset_indices(3, 2);
        assert_eq!(ms3.len(), 6);
        assert_eq!(ms3[0], vec![2, 0, 0]);
        assert_eq!(ms3[5], vec![0, 0, 2]);
        for w in ms3.windows(2) {
            assert!(w[0] > w[1], "not strictly descending: {:?}", w);
        }
    }

    #[test]
    fn multiset_count_matches_binomial() {
        for d in 1..5usize {
            for n in 0..6u32 {
                let count = multiset_indices(d, n).len();
                assert_eq!(count, binomial(n as usize + d - 1, d - 1).unwrap());
            }
        }
    }
}
