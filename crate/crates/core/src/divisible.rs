//! `S_q(r)`-adic expansions and lengths of `q^r`-divisible multisets of points.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::qcombi::{gauss_int, qpow};

/// The base numbers `sigma_i = (q^{r+1} - q^i)/(q-1)` for `i = 0..=r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrBases {
    pub q: u64,
    pub r: u32,
    pub sigma: Vec<BigInt>,
}

pub fn sqr_bases(q: u64, r: u32) -> SqrBases {
    let sigma = (0..=r).map(|i| qpow(q, i as u64) * gauss_int((r - i + 1) as u64, q)).collect();
    SqrBases { q, r, sigma }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrExpansion {
    pub q: u64,
    pub r: u32,
    /// `a_0..a_{r-1}` in `[0, q)`.
    pub digits: Vec<u64>,
    pub leading: BigInt,
    pub value: BigInt,
}

impl SqrExpansion {
    /// All coefficients `a_0..a_r` as integers.
    pub fn coefficients(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.digits.iter().map(|&d| BigInt::from(d)).collect();
        v.push(self.leading.clone());
        v
    }

    pub fn resum(&self) -> BigInt {
        let b = sqr_bases(self.q, self.r);
        self.coefficients().iter().zip(&b.sigma).map(|(a, s)| a * s).sum()
    }
}

pub fn sqr_expand(n: &BigInt, q: u64, r: u32) -> SqrExpansion {
    let bq = BigInt::from(q);
    let mut m = n.clone();
    let mut digits = Vec::with_capacity(r as usize);
    for i in 0..r {
        let a = m.mod_floor(&bq);
        m = (&m - &a * gauss_int((r - i + 1) as u64, q)) / &bq;
        digits.push(u64::try_from(&a).expect("digit below q"));
    }
    SqrExpansion { q, r, digits, leading: m, value: n.clone() }
}

/// Whether a `q^r`-divisible multiset of points of cardinality `n` exists.
pub fn divisible_exists(n: &BigInt, q: u64, r: u32) -> bool {
    !sqr_expand(n, q, r).leading.is_negative()
}

/// `max{ m : a - m b` is realizable `}`, or `None` for minus infinity.
///
/// For `b > 0` the scan terminates since every large enough integer is realizable.
pub fn sharp_floor(a: &BigInt, b: &BigInt, q: u64, r: u32) -> Option<BigInt> {
    assert!(!b.is_zero(), "sharp_floor with b = 0");
    let mut m = a.div_floor(b);
    loop {
        let rest = a - &m * b;
        if divisible_exists(&rest, q, r) {
            return Some(m);
        }
        if b.is_negative() && rest.is_negative() {
            return None;
        }
        m -= 1;
    }
}

/// `min{ m : m b - a` is realizable `}`, or `None` for plus infinity.
pub fn sharp_ceil(a: &BigInt, b: &BigInt, q: u64, r: u32) -> Option<BigInt> {
    assert!(!b.is_zero(), "sharp_ceil with b = 0");
    let mut m = a.div_ceil(b);
    loop {
        let rest = &m * b - a;
        if divisible_exists(&rest, q, r) {
            return Some(m);
        }
        if b.is_negative() && rest.is_negative() {
            return None;
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn bases() {
        let s: Vec<BigInt> = [15, 14, 12, 8].iter().map(|&v| big(v)).collect();
        assert_eq!(sqr_bases(2, 3).sigma, s);
        assert_eq!(sqr_bases(2, 2).sigma, vec![big(7), big(6), big(4)]);
        assert_eq!(sqr_bases(5, 0).sigma, vec![big(1)]);
    }

    #[test]
    fn expansions() {
        let e = sqr_expand(&big(11), 2, 2);
        assert_eq!(e.coefficients(), vec![big(1), big(0), big(1)]);
        assert_eq!(sqr_expand(&big(9), 2, 2).coefficients(), vec![big(1), big(1), big(-1)]);
        assert_eq!(sqr_expand(&big(34), 2, 3).coefficients(), vec![big(0), big(1), big(1), big(1)]);
        assert_eq!(sqr_expand(&big(19), 2, 3).coefficients(), vec![big(1), big(0), big(1), big(-1)]);
        assert_eq!(sqr_expand(&big(137), 3, 3).leading, big(-2));
        assert!(divisible_exists(&big(34), 2, 3));
        assert!(!divisible_exists(&big(19), 2, 3));
        assert!(divisible_exists(&big(0), 7, 4));
    }

    #[test]
    fn brackets() {
        assert_eq!(sharp_floor(&big(17374), &big(15), 2, 3), Some(big(1156)));
        assert_eq!(sharp_floor(&big(0), &big(9), 3, 2), Some(big(0)));
        assert_eq!(sharp_ceil(&big(0), &big(9), 3, 2), Some(big(0)));
        // 765 - 109*7 = 2 and 765 - 108*7 = 9 are not realizable for r = 2.
        assert_eq!(sharp_floor(&big(765), &big(7), 2, 2), Some(big(107)));
    }
}
