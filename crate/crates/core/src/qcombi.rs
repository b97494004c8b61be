//! q-analogues: q-integers, Gaussian binomials, q-Pochhammer estimates and
//! integer polynomials in q.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombiError {
    FieldSize(u64),
    Range,
    Parse(String),
}

impl fmt::Display for CombiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombiError::FieldSize(q) => write!(f, "q = {q} must be at least 2"),
            CombiError::Range => write!(f, "parameters out of range"),
            CombiError::Parse(s) => write!(f, "cannot parse polynomial: {s}"),
        }
    }
}

pub fn qpow(q: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(q), e)
}

/// `[n]_q = (q^n - 1)/(q - 1)`. Panics for `q < 2`.
pub fn gauss_int(n: u64, q: u64) -> BigInt {
    checked_gauss_int(n, q).expect("q must be at least 2")
}

pub fn checked_gauss_int(n: u64, q: u64) -> Result<BigInt, CombiError> {
    if q < 2 {
        return Err(CombiError::FieldSize(q));
    }
    Ok((qpow(q, n) - 1u32) / BigInt::from(q - 1))
}

/// Gaussian binomial `[n, k]_q`, zero outside `0 <= k <= n`. Panics for `q < 2`.
pub fn gauss_binomial(n: i64, k: i64, q: u64) -> BigInt {
    checked_gauss_binomial(n, k, q).expect("q must be at least 2")
}

pub fn checked_gauss_binomial(n: i64, k: i64, q: u64) -> Result<BigInt, CombiError> {
    if q < 2 {
        return Err(CombiError::FieldSize(q));
    }
    if k < 0 || n < 0 || k > n {
        return Ok(BigInt::zero());
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc stays equal to [n, i+1]_q after each step.
        acc *= qpow(q, n - i) - 1u32;
        acc /= qpow(q, i + 1) - 1u32;
    }
    Ok(acc)
}

/// Number of `k`-spaces in `F_q^n` meeting a fixed `m`-space in dimension at least `k - t`.
pub fn count_large_intersection(n: i64, m: i64, k: i64, t: i64, q: u64) -> Result<BigInt, CombiError> {
    if q < 2 {
        return Err(CombiError::FieldSize(q));
    }
    if !(0 <= t && t <= k && k <= n && k - t <= m && m <= n) {
        return Err(CombiError::Range);
    }
    let mut sum = BigInt::zero();
    for i in 0..=t {
        let e = (m + i - k) * i;
        if e < 0 {
            continue;
        }
        sum += qpow(q, e as u64) * gauss_binomial(m, k - i, q) * gauss_binomial(n - m, i, q);
    }
    Ok(sum)
}

/// Partial product of `1/(1/q;1/q)_inf` with an interval containing the limit.
#[derive(Debug, Clone)]
pub struct PochhammerLimit {
    pub partial: BigRational,
    pub lower: BigRational,
    pub upper: BigRational,
}

impl PochhammerLimit {
    /// Decimal rendering of the interval midpoint, `digits` places.
    pub fn approx(&self, digits: u32) -> String {
        let mid = (&self.lower + &self.upper) / BigInt::from(2);
        decimal(&mid, digits)
    }
}

pub fn decimal(x: &BigRational, digits: u32) -> String {
    let scale = qpow(10, digits as u64);
    let scaled = (x * BigRational::from_integer(scale.clone())).round().to_integer();
    let (int, frac) = scaled.abs().div_rem(&scale);
    let sign = if scaled.is_negative() { "-" } else { "" };
    let mut frac_s = frac.to_str_radix(10);
    while frac_s.len() < digits as usize {
        frac_s.insert(0, '0');
    }
    alloc::format!("{sign}{int}.{frac_s}")
}

pub fn qpochhammer_reciprocal_limit(q: u64, terms: u32) -> Result<PochhammerLimit, CombiError> {
    if q < 2 {
        return Err(CombiError::FieldSize(q));
    }
    let terms = terms.max(1);
    let mut prod = BigRational::one();
    for i in 1..=terms {
        let qi = qpow(q, i as u64);
        prod *= BigRational::new(qi.clone() - 1u32, qi);
    }
    let partial = prod.recip();
    // prod_{i>T} (1 - q^-i) >= 1 - q^-T/(q-1)
    let tail = BigRational::one() - BigRational::new(BigInt::one(), qpow(q, terms as u64) * BigInt::from(q - 1));
    let upper = &partial / tail;
    Ok(PochhammerLimit { lower: partial.clone(), upper, partial })
}

/// Polynomial in `q` with signed integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        QPolynomial::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64(&[c])
    }

    /// The monomial `q^e`.
    pub fn monomial(e: usize) -> Self {
        let mut c = vec![BigInt::zero(); e + 1];
        c[e] = BigInt::one();
        QPolynomial { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, q: u64) -> BigInt {
        let q = BigInt::from(q);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &q + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![BigInt::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in other.coeffs.iter().enumerate() {
            c[i] += x;
        }
        Self::new(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Self::new(c)
    }

    /// `[n]_q` as a polynomial.
    pub fn gauss_int(n: usize) -> Self {
        Self::new(vec![BigInt::one(); n])
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let unit = a.is_one();
            match e {
                0 => write!(f, "{a}")?,
                1 if unit => write!(f, "q")?,
                1 => write!(f, "{a}q")?,
                _ if unit => write!(f, "q^{e}")?,
                _ => write!(f, "{a}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for QPolynomial {
    type Err = CombiError;

    /// Accepts sums of terms such as `q^12 + 2q^8 - q + 1`; `*` between a
    /// coefficient and `q` is optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CombiError::Parse(String::from(s));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(err());
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        let mut neg = false;
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
                terms.push((neg, &cleaned[start..i]));
                neg = b == b'-';
                start = i + 1;
            } else if i == 0 && (b == b'+' || b == b'-') {
                neg = b == b'-';
                start = 1;
            }
        }
        terms.push((neg, &cleaned[start..]));
        let mut poly = QPolynomial::zero();
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(err());
            }
            let (coef, exp) = match t.find('q') {
                None => (BigInt::from_str(t).map_err(|_| err())?, 0usize),
                Some(pos) => {
                    let c = t[..pos].trim_end_matches('*');
                    let coef = if c.is_empty() { BigInt::one() } else { BigInt::from_str(c).map_err(|_| err())? };
                    let rest = &t[pos + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(err)?.parse::<usize>().map_err(|_| err())?
                    };
                    (coef, exp)
                }
            };
            let coef = if neg { -coef } else { coef };
            poly = poly.add(&QPolynomial::monomial(exp).scale(&coef));
        }
        Ok(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_from_the_sphere_packing_comparison() {
        assert_eq!(gauss_binomial(8, 4, 2), BigInt::from(200787));
        assert_eq!(gauss_binomial(6, 4, 2), BigInt::from(651));
        assert_eq!(gauss_binomial(7, 3, 2), BigInt::from(11811));
        assert_eq!(gauss_binomial(3, 5, 2), BigInt::zero());
        assert_eq!(gauss_binomial(3, -1, 2), BigInt::zero());
        assert!(checked_gauss_binomial(3, 1, 1).is_err());
    }

    #[test]
    fn q_integers() {
        assert_eq!(gauss_int(4, 2), BigInt::from(15));
        assert_eq!(gauss_int(9, 2), BigInt::from(511));
        assert_eq!(gauss_int(0, 7), BigInt::zero());
    }

    #[test]
    fn large_intersection_count() {
        assert_eq!(count_large_intersection(8, 4, 4, 1, 2).unwrap(), BigInt::from(451));
        assert_eq!(count_large_intersection(6, 6, 3, 0, 2).unwrap(), gauss_binomial(6, 3, 2));
        assert_eq!(count_large_intersection(6, 6, 3, 3, 2).unwrap(), gauss_binomial(6, 3, 2));
        assert!(count_large_intersection(6, 1, 3, 0, 2).is_err());
    }

    #[test]
    fn polynomial_parse_and_eval() {
        let p: QPolynomial = "q^6+2q^2+2q+1".parse().unwrap();
        assert_eq!(p.eval(2), BigInt::from(77));
        let p: QPolynomial = "q^8 + 1".parse().unwrap();
        assert_eq!(p.eval(2), BigInt::from(257));
        assert_eq!(QPolynomial::zero().eval(5), BigInt::zero());
        let p: QPolynomial = "-q^3 + 4*q - 7".parse().unwrap();
        assert_eq!(p.eval(3), BigInt::from(-27 + 12 - 7));
        assert_eq!(alloc::format!("{p}"), "-q^3 + 4q - 7");
        assert!("q^".parse::<QPolynomial>().is_err());
    }

    #[test]
    fn pochhammer_intervals() {
        let inside = |q: u64, target: &str, tol: &str| {
            let l = qpochhammer_reciprocal_limit(q, 60).unwrap();
            let t: BigRational = parse_dec(target);
            let tol: BigRational = parse_dec(tol);
            assert!(l.lower <= &t + &tol && l.upper >= &t - &tol, "q={q}");
            assert!(&l.upper - &l.lower < tol);
        };
        inside(2, "3.4627", "0.001");
        inside(3, "1.79", "0.01");
        inside(512, "1.002", "0.001");
    }

    fn parse_dec(s: &str) -> BigRational {
        let (i, f) = s.split_once('.').unwrap();
        let den = qpow(10, f.len() as u64);
        let num = BigInt::from_str(i).unwrap() * &den + BigInt::from_str(f).unwrap();
        BigRational::new(num, den)
    }
}
