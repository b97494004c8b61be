//! Rank-metric codes: MRD sizes, Gabidulin codes, rank distributions,
//! restricted-rank bounds, coset partitions, sum-rank codes and FDRM codes.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::gfq::Field;
use crate::provenance::BoundResult;
use crate::qcombi::{gauss_binomial, qpow};
use crate::spaces::{dual, FerrersDiagram, MatGF, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankError {
    Parameters(String),
    Shape,
    TooLarge,
    Implicit,
    Space(SpaceError),
}

impl fmt::Display for RankError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankError::Parameters(s) => write!(f, "invalid parameters: {s}"),
            RankError::Shape => write!(f, "matrix shapes do not fit"),
            RankError::TooLarge => write!(f, "code too large to materialize"),
            RankError::Implicit => write!(f, "code is only known by its size"),
            RankError::Space(e) => write!(f, "{e}"),
        }
    }
}

impl From<SpaceError> for RankError {
    fn from(e: SpaceError) -> Self {
        RankError::Space(e)
    }
}

fn param_err(s: &str) -> RankError {
    RankError::Parameters(String::from(s))
}

pub const DEFAULT_WORD_CAP: u64 = 1 << 22;

pub fn rank_distance(a: &MatGF, b: &MatGF) -> Result<usize, RankError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(RankError::Shape);
    }
    Ok(a.sub(b)?.rank())
}

/// `q^{max(m,n) (min(m,n) - d + 1)}`, or 1 when `d > min(m,n)`.
pub fn mrd_size(q: u64, m: usize, n: usize, d: usize) -> BigInt {
    qpow(q, mrd_dimension(m, n, d) as u64)
}

pub fn mrd_dimension(m: usize, n: usize, d: usize) -> usize {
    let (lo, hi) = (m.min(n), m.max(n));
    let d = d.max(1);
    if d > lo {
        0
    } else {
        hi * (lo - d + 1)
    }
}

/// Number of `m x n` matrices of rank `r`.
pub fn rank_count(q: u64, m: usize, n: usize, r: usize) -> BigInt {
    if r > m.min(n) {
        return BigInt::zero();
    }
    let mut v = gauss_binomial(m as i64, r as i64, q);
    for i in 0..r {
        v *= qpow(q, n as u64) - qpow(q, i as u64);
    }
    v
}

/// Rank distribution `a_q(m x n, d; r)` of an additive MRD code.
pub fn rank_distribution(q: u64, m: usize, n: usize, d: usize, r: usize) -> Result<BigInt, RankError> {
    let (lo, hi) = (m.min(n), m.max(n));
    if r > lo || d == 0 {
        return Err(param_err("rank outside 0..=min(m,n)"));
    }
    if r == 0 {
        return Ok(BigInt::one());
    }
    if r < d {
        return Ok(BigInt::zero());
    }
    let mut sum = BigInt::zero();
    for s in 0..=(r - d) {
        let term = qpow(q, (s * s.saturating_sub(1) / 2) as u64)
            * gauss_binomial(r as i64, s as i64, q)
            * (qpow(q, (hi * (r - d - s + 1)) as u64) - 1);
        if s % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(gauss_binomial(lo as i64, r as i64, q) * sum)
}

// ---------------------------------------------------------------------------
// Extension fields GF(q^n) over GF(q), elements as coordinate vectors.

/// `GF(q^n)` as `GF(q)[x]/(f)`, elements written in the basis `1, x, ..., x^{n-1}`.
#[derive(Clone)]
pub struct ExtField {
    base: Field,
    n: usize,
    modulus: Vec<u32>,
}

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(f: &Field, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
    while a.len() > dm {
        let shift = a.len() - 1 - dm;
        let c = f.mul(*a.last().unwrap(), lead_inv);
        for (i, &mi) in m.iter().enumerate() {
            a[shift + i] = f.sub(a[shift + i], f.mul(c, mi));
        }
        a = poly_trim(a);
    }
    a
}

fn poly_mul(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn poly_gcd(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut a, mut b) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial over `f`.
pub fn is_irreducible_over(f: &Field, m: &[u32]) -> bool {
    let n = m.len() - 1;
    if n == 0 || m[n] != 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    let q = f.q() as u64;
    let powmod = |a: &[u32], mut e: u64| -> Vec<u32> {
        let mut result = vec![1];
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = poly_rem(f, &poly_mul(f, &result, &base), m);
            }
            base = poly_rem(f, &poly_mul(f, &base, &base), m);
            e >>= 1;
        }
        result
    };
    // h[j] = x^{q^j} mod m
    let mut h = vec![vec![0, 1]];
    for j in 1..=n {
        let next = powmod(&h[j - 1], q);
        h.push(next);
    }
    let x_minus = |p: &[u32]| {
        let mut v = p.to_vec();
        v.resize(v.len().max(2), 0);
        v[1] = f.sub(v[1], 1);
        poly_trim(v)
    };
    if !x_minus(&h[n]).is_empty() {
        return false;
    }
    prime_factors(n).into_iter().all(|p| poly_gcd(f, &x_minus(&h[n / p]), m).len() == 1)
}

impl ExtField {
    /// Uses the smallest monic irreducible of degree `n`, coefficients compared low degree first.
    pub fn new(base: &Field, n: usize) -> Self {
        assert!(n >= 1);
        let q = base.q() as u64;
        // The constant term is the leading digit of `idx`; zero is never irreducible.
        let mut idx: u64 = if n >= 2 { q.pow(n as u32 - 1) } else { 0 };
        loop {
            let mut c = Vec::with_capacity(n + 1);
            let mut t = idx;
            for _ in 0..n {
                c.push((t % q) as u32);
                t /= q;
            }
            c.reverse();
            c.push(1);
            if is_irreducible_over(base, &c) {
                return ExtField { base: base.clone(), n, modulus: c };
            }
            idx += 1;
        }
    }

    pub fn with_modulus(base: &Field, modulus: &[u32]) -> Result<Self, RankError> {
        if !is_irreducible_over(base, modulus) {
            return Err(param_err("modulus not irreducible"));
        }
        Ok(ExtField { base: base.clone(), n: modulus.len() - 1, modulus: modulus.to_vec() })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn pad(&self, mut a: Vec<u32>) -> Vec<u32> {
        a.resize(self.n, 0);
        a
    }

    pub fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.n];
        v[0] = 1;
        v
    }

    /// `x^t` in coordinates.
    pub fn x_pow(&self, t: usize) -> Vec<u32> {
        let mut v = vec![0; t + 1];
        v[t] = 1;
        self.pad(poly_rem(&self.base, &v, &self.modulus))
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.pad(poly_rem(&self.base, &poly_mul(&self.base, a, b), &self.modulus))
    }

    pub fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        result
    }

    /// `a^{q^i}`.
    pub fn frobenius(&self, a: &[u32], i: usize) -> Vec<u32> {
        let mut v = a.to_vec();
        for _ in 0..i % self.n {
            v = self.pow(&v, self.base.q() as u64);
        }
        v
    }
}

// ---------------------------------------------------------------------------
// Rank-metric codes.

#[derive(Clone, Debug)]
enum Repr {
    Explicit(Vec<MatGF>),
    Linear { basis: Vec<MatGF>, shift: Option<MatGF> },
    Implicit(BigInt),
}

/// A set of `m x n` matrices with declared minimum rank distance `d`.
#[derive(Clone, Debug)]
pub struct RankCode {
    field: Field,
    m: usize,
    n: usize,
    d: usize,
    ranks: Option<BTreeSet<usize>>,
    repr: Repr,
}

impl RankCode {
    pub fn explicit(field: &Field, m: usize, n: usize, d: usize, words: Vec<MatGF>) -> Result<Self, RankError> {
        if words.iter().any(|w| w.rows() != m || w.cols() != n) {
            return Err(RankError::Shape);
        }
        Ok(RankCode { field: field.clone(), m, n, d, ranks: None, repr: Repr::Explicit(words) })
    }

    /// Linear span (or a coset of it when `shift` is given).
    pub fn linear(field: &Field, m: usize, n: usize, d: usize, basis: Vec<MatGF>, shift: Option<MatGF>) -> Result<Self, RankError> {
        if basis.iter().chain(shift.iter()).any(|w| w.rows() != m || w.cols() != n) {
            return Err(RankError::Shape);
        }
        Ok(RankCode { field: field.clone(), m, n, d, ranks: None, repr: Repr::Linear { basis, shift } })
    }

    /// A code known only through a lower bound on its size.
    pub fn implicit(field: &Field, m: usize, n: usize, d: usize, size: BigInt) -> Self {
        RankCode { field: field.clone(), m, n, d, ranks: None, repr: Repr::Implicit(size) }
    }

    pub fn singleton_zero(field: &Field, m: usize, n: usize, d: usize) -> Self {
        RankCode { field: field.clone(), m, n, d, ranks: None, repr: Repr::Linear { basis: Vec::new(), shift: None } }
    }

    pub fn with_ranks(mut self, ranks: BTreeSet<usize>) -> Self {
        self.ranks = Some(ranks);
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ranks(&self) -> Option<&BTreeSet<usize>> {
        self.ranks.as_ref()
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.repr, Repr::Linear { shift: None, .. })
    }

    pub fn basis(&self) -> Option<&[MatGF]> {
        match &self.repr {
            Repr::Linear { basis, .. } => Some(basis),
            _ => None,
        }
    }

    pub fn size(&self) -> BigInt {
        match &self.repr {
            Repr::Explicit(w) => BigInt::from(w.len()),
            Repr::Linear { basis, .. } => qpow(self.field.q() as u64, basis.len() as u64),
            Repr::Implicit(s) => s.clone(),
        }
    }

    pub fn transpose(&self) -> RankCode {
        let repr = match &self.repr {
            Repr::Explicit(w) => Repr::Explicit(w.iter().map(|x| x.transpose()).collect()),
            Repr::Linear { basis, shift } => {
                Repr::Linear { basis: basis.iter().map(|x| x.transpose()).collect(), shift: shift.as_ref().map(|s| s.transpose()) }
            }
            Repr::Implicit(s) => Repr::Implicit(s.clone()),
        };
        RankCode { field: self.field.clone(), m: self.n, n: self.m, d: self.d, ranks: self.ranks.clone(), repr }
    }

    pub fn is_implicit(&self) -> bool {
        matches!(self.repr, Repr::Implicit(_))
    }

    /// Lazy word iterator in the order of [`RankCode::words`].
    pub fn iter_words(&self) -> Result<WordIter<'_>, RankError> {
        match &self.repr {
            Repr::Implicit(_) => Err(RankError::Implicit),
            Repr::Explicit(w) => Ok(WordIter { code: self, counter: Vec::new(), index: 0, done: w.is_empty() }),
            Repr::Linear { basis, .. } => Ok(WordIter { code: self, counter: vec![0; basis.len()], index: 0, done: false }),
        }
    }

    /// The first `count` words as an explicit code.
    pub fn truncated(&self, count: usize) -> Result<RankCode, RankError> {
        let words = self.iter_words()?.take(count).collect();
        Ok(RankCode::explicit(&self.field, self.m, self.n, self.d, words)?.with_optional_ranks(self.ranks.clone()))
    }

    fn with_optional_ranks(mut self, ranks: Option<BTreeSet<usize>>) -> Self {
        self.ranks = ranks;
        self
    }

    /// Largest rank of a word: the declared rank set, else a scan, else `min(m,n)`.
    pub fn max_rank(&self, cap: u64) -> usize {
        if let Some(r) = self.ranks.as_ref().and_then(|r| r.iter().next_back()) {
            return *r;
        }
        match self.words(cap) {
            Ok(w) => w.iter().map(|x| x.rank()).max().unwrap_or(0),
            Err(_) => self.m.min(self.n),
        }
    }

    /// All words, failing if more than `cap`.
    pub fn words(&self, cap: u64) -> Result<Vec<MatGF>, RankError> {
        if self.is_implicit() {
            return Err(RankError::Implicit);
        }
        if self.size().to_u64().is_none_or(|s| s > cap) {
            return Err(RankError::TooLarge);
        }
        match &self.repr {
            Repr::Explicit(w) => Ok(w.clone()),
            Repr::Linear { basis, shift } => {
                let start = shift.clone().unwrap_or_else(|| MatGF::zeros(&self.field, self.m, self.n));
                Ok(span_words(&self.field, basis, &start))
            }
            Repr::Implicit(_) => Err(RankError::Implicit),
        }
    }

    /// Brute-force minimum rank distance, `None` for fewer than two words.
    pub fn min_distance(&self, cap: u64) -> Result<Option<usize>, RankError> {
        let words = self.words(cap)?;
        if words.len() < 2 {
            return Ok(None);
        }
        if let Repr::Linear { .. } = self.repr {
            // Translation invariance: distances are ranks of nonzero differences in the span.
            let zero = MatGF::zeros(&self.field, self.m, self.n);
            let basis = self.basis().unwrap();
            return Ok(span_words(&self.field, basis, &zero).iter().filter(|w| !w.is_zero()).map(|w| w.rank()).min());
        }
        let mut best = usize::MAX;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                best = best.min(words[i].sub(&words[j])?.rank());
            }
        }
        Ok(Some(best))
    }

    /// Histogram of word ranks, index = rank.
    pub fn rank_histogram(&self, cap: u64) -> Result<Vec<u64>, RankError> {
        let mut h = vec![0u64; self.m.min(self.n) + 1];
        for w in self.words(cap)? {
            h[w.rank()] += 1;
        }
        Ok(h)
    }
}

pub struct WordIter<'a> {
    code: &'a RankCode,
    counter: Vec<u32>,
    index: usize,
    done: bool,
}

impl Iterator for WordIter<'_> {
    type Item = MatGF;

    fn next(&mut self) -> Option<MatGF> {
        if self.done {
            return None;
        }
        match &self.code.repr {
            Repr::Explicit(w) => {
                let out = w[self.index].clone();
                self.index += 1;
                self.done = self.index >= w.len();
                Some(out)
            }
            Repr::Linear { basis, shift } => {
                let f = &self.code.field;
                let mut out = shift.clone().unwrap_or_else(|| MatGF::zeros(f, self.code.m, self.code.n));
                for (b, &c) in basis.iter().zip(&self.counter) {
                    if c != 0 {
                        out = out.add(&b.scale(c)).expect("same shape");
                    }
                }
                let q = f.q();
                let mut i = self.counter.len();
                let mut carry = true;
                while carry && i > 0 {
                    i -= 1;
                    self.counter[i] += 1;
                    if self.counter[i] == q {
                        self.counter[i] = 0;
                    } else {
                        carry = false;
                    }
                }
                self.done = carry;
                Some(out)
            }
            Repr::Implicit(_) => None,
        }
    }
}

/// Every `start + sum c_i B_i`, last basis element fastest.
fn span_words(field: &Field, basis: &[MatGF], start: &MatGF) -> Vec<MatGF> {
    let mut out = vec![start.clone()];
    for b in basis.iter().rev() {
        let mut next = Vec::with_capacity(out.len() * field.q() as usize);
        for c in field.elements() {
            let cb = b.scale(c);
            for w in &out {
                next.push(cb.add(w).expect("same shape"));
            }
        }
        out = next;
    }
    out
}

fn gabidulin_basis(field: &Field, m: usize, n: usize, d: usize) -> Vec<MatGF> {
    let ext = ExtField::new(field, n);
    let points: Vec<Vec<u32>> = (0..m).map(|j| ext.x_pow(j)).collect();
    let mut basis = Vec::with_capacity(n * (m - d + 1));
    for i in 0..=(m - d) {
        let frob: Vec<Vec<u32>> = points.iter().map(|g| ext.frobenius(g, i)).collect();
        for t in 0..n {
            let beta = ext.x_pow(t);
            let mut data = Vec::with_capacity(m * n);
            for g in &frob {
                data.extend(ext.mul(&beta, g));
            }
            basis.push(MatGF::new(field, m, n, data).expect("field entries"));
        }
    }
    basis
}

/// Gabidulin code of `m x n` matrices, `m <= n`, minimum rank distance `d`.
pub fn gabidulin(field: &Field, m: usize, n: usize, d: usize) -> Result<RankCode, RankError> {
    if !(1 <= d && d <= m && m <= n) {
        return Err(param_err("need 1 <= d <= m <= n"));
    }
    RankCode::linear(field, m, n, d, gabidulin_basis(field, m, n, d), None)
}

/// A linear MRD code of any shape; `{0}` when `d > min(m,n)`.
pub fn mrd_code(field: &Field, m: usize, n: usize, d: usize) -> Result<RankCode, RankError> {
    let d = d.max(1);
    if d > m.min(n) {
        return Ok(RankCode::singleton_zero(field, m, n, d));
    }
    if m <= n {
        gabidulin(field, m, n, d)
    } else {
        Ok(gabidulin(field, n, m, d)?.transpose())
    }
}

/// Partition of the distance-`d` MRD code into cosets of its distance-`d2` subcode.
pub fn mrd_coset_partition(field: &Field, m: usize, n: usize, d: usize, d2: usize) -> Result<Vec<RankCode>, RankError> {
    if d == 0 || d2 < d {
        return Err(param_err("need d2 >= d >= 1"));
    }
    let big = mrd_code(field, m, n, d)?;
    if d2 == d {
        return Ok(vec![big]);
    }
    let sub_dim = mrd_dimension(m, n, d2);
    let basis = big.basis().unwrap().to_vec();
    // The Gabidulin basis is ordered by q-degree, so the subcode is the prefix.
    let (sub, reps) = basis.split_at(sub_dim);
    let zero = MatGF::zeros(field, m, n);
    let cosets = span_words(field, reps, &zero)
        .into_iter()
        .map(|s| RankCode::linear(field, m, n, d2, sub.to_vec(), Some(s)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(cosets)
}

/// Horizontal concatenation of all tuples.
pub fn product_rmc(codes: &[RankCode], cap: u64) -> Result<RankCode, RankError> {
    let first = codes.first().ok_or_else(|| param_err("empty product"))?;
    let (k, d) = (first.m, first.d);
    if codes.iter().any(|c| c.m != k) {
        return Err(RankError::Shape);
    }
    let total: BigInt = codes.iter().map(|c| c.size()).product();
    if total.to_u64().is_none_or(|t| t > cap) {
        return Err(RankError::TooLarge);
    }
    let mut acc: Vec<MatGF> = vec![MatGF::zeros(&first.field, k, 0)];
    for c in codes {
        let words = c.words(cap)?;
        let mut next = Vec::with_capacity(acc.len() * words.len());
        for a in &acc {
            for w in &words {
                next.push(a.hstack(w)?);
            }
        }
        acc = next;
    }
    let n = codes.iter().map(|c| c.n).sum();
    let d = codes.iter().map(|c| c.d).min().unwrap_or(d);
    RankCode::explicit(&first.field, k, n, d, acc)
}

fn block_diag(a: &MatGF, b: &MatGF) -> Result<MatGF, RankError> {
    let f = a.field();
    let top = a.hstack(&MatGF::zeros(f, a.rows(), b.cols()))?;
    let bottom = MatGF::zeros(f, b.rows(), a.cols()).hstack(b)?;
    Ok(top.vstack(&bottom)?)
}

/// Block-diagonal pairing of the i-th words; distance `d1 + d2`.
pub fn diag_concat_rmc(m1: &RankCode, m2: &RankCode, cap: u64) -> Result<RankCode, RankError> {
    let (w1, w2) = (m1.words(cap)?, m2.words(cap)?);
    let words = w1.iter().zip(&w2).map(|(a, b)| block_diag(a, b)).collect::<Result<Vec<_>, _>>()?;
    RankCode::explicit(&m1.field, m1.m + m2.m, m1.n + m2.n, m1.d + m2.d, words)
}

// ---------------------------------------------------------------------------
// Restricted-rank bounds and codes.

fn rank_set_in_range(ranks: &[usize], lo: usize) -> Vec<usize> {
    let mut v: Vec<usize> = ranks.iter().copied().filter(|&r| r <= lo).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `sum_{r in R} a_q(m x n, d; r)`.
pub fn additive_rank_sum(q: u64, m: usize, n: usize, d: usize, ranks: &[usize]) -> BigInt {
    rank_set_in_range(ranks, m.min(n)).iter().map(|&r| rank_distribution(q, m, n, d.max(1), r).unwrap()).sum()
}

/// Lower bounds on `A_q(n,d;k)` used by the constant-rank lemma.
pub fn trivial_cdc_lower(q: u64, n: u64, d: u64, k: u64) -> BigInt {
    if k > n {
        BigInt::zero()
    } else if d <= 2 {
        gauss_binomial(n as i64, k as i64, q)
    } else {
        BigInt::one()
    }
}

/// Lower bound for `A_q^R(m x n, d; R)`; `cdc_lower(n, d, k)` supplies `A_q(n,d;k)` lower bounds.
pub fn restricted_rank_lower_bound_with(
    q: u64,
    m: usize,
    n: usize,
    d: usize,
    ranks: &[usize],
    cdc_lower: &mut dyn FnMut(u64, u64, u64) -> BigInt,
) -> BoundResult {
    let lo = m.min(n);
    let rs = rank_set_in_range(ranks, lo);
    if rs.is_empty() {
        return BoundResult::leaf(0, "empty rank set");
    }
    let d = d.max(1);
    if d == 1 {
        let v: BigInt = rs.iter().map(|&r| rank_count(q, m, n, r)).sum();
        return BoundResult::leaf(v, "rank count");
    }
    let mut cands = vec![BoundResult::leaf(1, "single word")];
    let sum_a = |dd: usize| additive_rank_sum(q, m, n, dd, &rs);
    cands.push(BoundResult::leaf(sum_a(d), "additive MRD rank sum"));
    let full = mrd_size(q, m, n, d);
    for d2 in 1..d {
        let alpha = mrd_size(q, m, n, d2) / &full;
        let s2 = sum_a(d2);
        let avg = s2.div_ceil(&alpha);
        cands.push(BoundResult::leaf(avg, "MRD coset average").assume(&alloc::format!("d'={d2}")));
        if alpha > BigInt::one() {
            let diff = &s2 - sum_a(d);
            let v = diff.div_ceil(&(&alpha - 1));
            cands.push(BoundResult::leaf(v, "MRD nonzero coset average").assume(&alloc::format!("d'={d2}")));
        }
    }
    if rs.len() == 1 || (rs.len() == 2 && rs[0] == 0) {
        let r = *rs.last().unwrap();
        let zero_bonus = if rs.len() == 2 && d <= r { 1 } else { 0 };
        if r >= 1 && d == r + 1 {
            let v = gauss_binomial(lo as i64, r as i64, q);
            cands.push(BoundResult::leaf(v + zero_bonus, "constant rank exact"));
        }
        if r >= 1 {
            for d1 in (2..=2 * d - 2).step_by(2) {
                let d2 = 2 * d - d1;
                let v = cdc_lower(m as u64, d1 as u64, r as u64).min(cdc_lower(n as u64, d2 as u64, r as u64));
                cands.push(BoundResult::leaf(v + zero_bonus, "constant rank from CDC pair").assume(&alloc::format!("d1={d1}, d2={d2}")));
            }
        }
    }
    let best = cands.iter().max_by(|a, b| a.value.cmp(&b.value)).unwrap().clone();
    BoundResult { children: vec![], ..best }
}

pub fn restricted_rank_lower_bound(q: u64, m: usize, n: usize, d: usize, ranks: &[usize]) -> BoundResult {
    restricted_rank_lower_bound_with(q, m, n, d, ranks, &mut |nn, dd, kk| trivial_cdc_lower(q, nn, dd, kk))
}

/// Explicit `(m x n, d; R)` code: the best coset of a distance-`d` MRD code inside a
/// distance-`d'` MRD code, filtered by rank. Needs at most `cap` words in the big code.
pub fn restricted_rank_code(field: &Field, m: usize, n: usize, d: usize, ranks: &[usize], cap: u64) -> Result<RankCode, RankError> {
    let q = field.q() as u64;
    let lo = m.min(n);
    let rs: BTreeSet<usize> = rank_set_in_range(ranks, lo).into_iter().collect();
    let mut best: Vec<MatGF> = Vec::new();
    for d2 in (1..=d.max(1)).rev() {
        if mrd_size(q, m, n, d2).to_u64().is_none_or(|s| s > cap) {
            continue;
        }
        for coset in mrd_coset_partition(field, m, n, d2, d.max(1))? {
            let words: Vec<MatGF> = coset.words(cap)?.into_iter().filter(|w| rs.contains(&w.rank())).collect();
            if words.len() > best.len() {
                best = words;
            }
        }
    }
    if best.is_empty() {
        if let Some(&r) = rs.iter().next() {
            let mut w = MatGF::zeros(field, m, n);
            for i in 0..r {
                w.set(i, i, 1);
            }
            best.push(w);
        }
    }
    Ok(RankCode::explicit(field, m, n, d, best)?.with_ranks(rs))
}

// ---------------------------------------------------------------------------
// Sum-rank codes.

#[derive(Clone, Debug)]
pub struct SumRankCode {
    pub field: Field,
    pub shapes: Vec<(usize, usize)>,
    pub d: usize,
    pub ranks: Option<BTreeSet<usize>>,
    pub words: Vec<Vec<MatGF>>,
}

pub fn sum_rank(x: &[MatGF]) -> usize {
    x.iter().map(|m| m.rank()).sum()
}

pub fn sumrank_distance(x: &[MatGF], y: &[MatGF]) -> Result<usize, RankError> {
    if x.len() != y.len() {
        return Err(RankError::Shape);
    }
    let mut s = 0;
    for (a, b) in x.iter().zip(y) {
        s += rank_distance(a, b)?;
    }
    Ok(s)
}

impl SumRankCode {
    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn min_distance(&self) -> Result<Option<usize>, RankError> {
        let mut best: Option<usize> = None;
        for i in 0..self.words.len() {
            for j in i + 1..self.words.len() {
                let v = sumrank_distance(&self.words[i], &self.words[j])?;
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        Ok(best)
    }

    pub fn sum_ranks(&self) -> BTreeSet<usize> {
        self.words.iter().map(|w| sum_rank(w)).collect()
    }

    /// Union of codes on the same block shapes.
    pub fn union(parts: &[SumRankCode], d: usize) -> Result<SumRankCode, RankError> {
        let first = parts.first().ok_or_else(|| param_err("empty union"))?;
        if parts.iter().any(|p| p.shapes != first.shapes) {
            return Err(RankError::Shape);
        }
        let words = parts.iter().flat_map(|p| p.words.iter().cloned()).collect();
        let ranks = parts.iter().try_fold(BTreeSet::new(), |mut acc, p| {
            acc.extend(p.ranks.as_ref()?.iter().copied());
            Some(acc)
        });
        Ok(SumRankCode { field: first.field.clone(), shapes: first.shapes.clone(), d, ranks, words })
    }
}

fn sum_sets(a: Option<&BTreeSet<usize>>, b: Option<&BTreeSet<usize>>) -> Option<BTreeSet<usize>> {
    let (a, b) = (a?, b?);
    Some(a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect())
}

/// All pairs; distance `d` when both codes have distance `d`.
pub fn sumrank_product(m1: &RankCode, m2: &RankCode, cap: u64) -> Result<SumRankCode, RankError> {
    let (w1, w2) = (m1.words(cap)?, m2.words(cap)?);
    let words = w1.iter().flat_map(|a| w2.iter().map(move |b| vec![a.clone(), b.clone()])).collect();
    Ok(SumRankCode {
        field: m1.field.clone(),
        shapes: vec![m1.shape(), m2.shape()],
        d: m1.d.min(m2.d),
        ranks: sum_sets(m1.ranks(), m2.ranks()),
        words,
    })
}

/// Index-wise pairs; distance `d1 + d2`.
pub fn sumrank_pair(m1: &RankCode, m2: &RankCode, cap: u64) -> Result<SumRankCode, RankError> {
    let (w1, w2) = (m1.words(cap)?, m2.words(cap)?);
    let words = w1.iter().zip(&w2).map(|(a, b)| vec![a.clone(), b.clone()]).collect();
    Ok(SumRankCode {
        field: m1.field.clone(),
        shapes: vec![m1.shape(), m2.shape()],
        d: m1.d + m2.d,
        ranks: sum_sets(m1.ranks(), m2.ranks()),
        words,
    })
}

fn rank_filtered(code: &RankCode, r: usize, cap: u64) -> Result<RankCode, RankError> {
    let words = code.words(cap)?.into_iter().filter(|w| w.rank() == r).collect();
    Ok(RankCode::explicit(code.field(), code.m, code.n, code.d, words)?.with_ranks([r].into_iter().collect()))
}

/// The three-piece `(3x3, 3x3, 3; <=3)` sum-rank code: `{(0,0)}`, rank-1 words paired
/// with rank-2 words of a distance-2 MRD code, and invertible words of a distance-3
/// MRD code next to zero.
pub fn three_piece_sumrank(field: &Field) -> Result<SumRankCode, RankError> {
    let cap = DEFAULT_WORD_CAP;
    let zero = RankCode::singleton_zero(field, 3, 3, 1).with_ranks([0].into_iter().collect());
    let zero_d2 = RankCode::singleton_zero(field, 3, 3, 2).with_ranks([0].into_iter().collect());
    let m1 = sumrank_pair(&zero, &zero_d2, cap)?;
    let rank1 = rank_filtered(&mrd_code(field, 3, 3, 1)?, 1, cap)?;
    let rank2 = rank_filtered(&mrd_code(field, 3, 3, 2)?, 2, cap)?;
    let m2 = sumrank_pair(&rank1, &rank2, cap)?;
    let rank3 = rank_filtered(&mrd_code(field, 3, 3, 3)?, 3, cap)?;
    let zero_d3 = RankCode::singleton_zero(field, 3, 3, 3).with_ranks([0].into_iter().collect());
    let m3 = sumrank_product(&rank3, &zero_d3, cap)?;
    SumRankCode::union(&[m1, m2, m3], 3)
}

// ---------------------------------------------------------------------------
// Ferrers diagram rank-metric codes.

/// Exponent of the upper bound: `min_i nu_i` over `0 <= i < delta`.
pub fn fdrm_upper_exponent(f: &FerrersDiagram, delta: usize) -> usize {
    let delta = delta.max(1);
    (0..delta)
        .map(|i| {
            let cut = delta - 1 - i;
            f.row_lengths().iter().skip(i).map(|&len| len.saturating_sub(cut)).sum::<usize>()
        })
        .min()
        .unwrap()
}

pub fn fdrm_upper_bound(f: &FerrersDiagram, delta: usize, q: u64) -> BigInt {
    qpow(q, fdrm_upper_exponent(f, delta) as u64)
}

#[derive(Clone, Debug)]
pub struct FdrmCode {
    pub diagram: FerrersDiagram,
    pub delta: usize,
    pub code: RankCode,
}

impl FdrmCode {
    pub fn size(&self) -> BigInt {
        self.code.size()
    }
}

/// Linear FDRM code: the subcode of a parity-check Gabidulin code on the diagram's
/// bounding box whose words vanish outside the diagram.
fn parity_check_fdrm(field: &Field, f: &FerrersDiagram, delta: usize) -> Vec<MatGF> {
    let k = f.rows();
    let w = f.width();
    let rows: Vec<usize> = (0..k).filter(|&r| f.row_lengths()[r] > 0).collect();
    let depth = f.row_lengths().first().copied().unwrap_or(0);
    let dots = f.dots();
    if dots.is_empty() {
        return Vec::new();
    }
    if delta <= 1 {
        return dots
            .iter()
            .map(|&(r, c)| {
                let mut m = MatGF::zeros(field, k, w);
                m.set(r, c, 1);
                m
            })
            .collect();
    }
    // Bounding box: `rows.len()` rows and `depth` columns at the right edge.
    let (mm, ll) = (rows.len(), depth);
    let transpose = mm > ll;
    let (short, long) = if transpose { (ll, mm) } else { (mm, ll) };
    if delta > short {
        return Vec::new();
    }
    let ext = ExtField::new(field, long);
    let h: Vec<Vec<u32>> = (0..short).map(|i| ext.x_pow(i)).collect();
    // Coordinates of a dot inside the box, as (short index, long index).
    let coord = |r: usize, c: usize| -> (usize, usize) {
        let (br, bc) = (rows.iter().position(|&x| x == r).unwrap(), c - (w - depth));
        if transpose {
            (bc, br)
        } else {
            (br, bc)
        }
    };
    let checks = delta - 1;
    let mut a = MatGF::zeros(field, checks * long, dots.len());
    for (col, &(r, c)) in dots.iter().enumerate() {
        let (i, t) = coord(r, c);
        let et = ext.x_pow(t);
        for j in 0..checks {
            let v = ext.mul(&ext.frobenius(&h[i], j), &et);
            for (s, &x) in v.iter().enumerate() {
                a.set(j * long + s, col, x);
            }
        }
    }
    let kernel = dual(&a.row_space());
    let km = kernel.matrix();
    (0..km.rows())
        .map(|b| {
            let mut m = MatGF::zeros(field, k, w);
            for (col, &(r, c)) in dots.iter().enumerate() {
                m.set(r, c, km.get(b, col));
            }
            m
        })
        .collect()
}

/// MRD code on the largest top-right rectangle of the diagram.
fn subrectangle_fdrm(field: &Field, f: &FerrersDiagram, delta: usize) -> Result<Vec<MatGF>, RankError> {
    let (k, w) = (f.rows(), f.width());
    let lens = f.row_lengths();
    let best = (1..=k)
        .map(|a| (mrd_dimension(a, lens[a - 1], delta), a))
        .filter(|&(_, a)| lens[a - 1] > 0)
        .max();
    let Some((dim, a)) = best else { return Ok(Vec::new()) };
    if dim == 0 {
        return Ok(Vec::new());
    }
    let b = lens[a - 1];
    let code = mrd_code(field, a, b, delta)?;
    let zero_cols: Vec<usize> = (0..w - b).collect();
    code.basis()
        .unwrap()
        .iter()
        .map(|m| {
            let wide = m.spread_columns(w, &zero_cols)?;
            Ok(wide.vstack(&MatGF::zeros(field, k - a, w))?)
        })
        .collect()
}

/// Dimension of the linear FDRM code built by [`fdrm_construct`] without its greedy fallback.
pub fn fdrm_linear_dimension(field: &Field, f: &FerrersDiagram, delta: usize) -> usize {
    let lens = f.row_lengths();
    let b = (1..=f.rows()).filter(|&a| lens[a - 1] > 0).map(|a| mrd_dimension(a, lens[a - 1], delta)).max().unwrap_or(0);
    if b == fdrm_upper_exponent(f, delta) {
        return b;
    }
    parity_check_fdrm(field, f, delta).len().max(b)
}

pub const FDRM_GREEDY_DOTS: usize = 18;
pub const FDRM_GREEDY_CAP: u64 = 1 << 14;

/// FDRM code on `f` with minimum rank distance `delta`.
pub fn fdrm_construct(field: &Field, f: &FerrersDiagram, delta: usize) -> Result<FdrmCode, RankError> {
    let (k, w) = (f.rows(), f.width());
    let a = parity_check_fdrm(field, f, delta);
    let b = subrectangle_fdrm(field, f, delta)?;
    let basis = if b.len() > a.len() { b } else { a };
    let linear = RankCode::linear(field, k, w, delta, basis, None)?;
    let bound = fdrm_upper_exponent(f, delta);
    let q = field.q() as u64;
    let dim = linear.basis().unwrap().len();
    if dim < bound && f.dot_count() <= FDRM_GREEDY_DOTS && qpow(q, f.dot_count() as u64).to_u64().is_some_and(|s| s <= FDRM_GREEDY_CAP) {
        let greedy = greedy_fdrm(field, f, delta);
        if BigInt::from(greedy.len()) > qpow(q, dim as u64) {
            let code = RankCode::explicit(field, k, w, delta, greedy)?;
            return Ok(FdrmCode { diagram: f.clone(), delta, code });
        }
    }
    Ok(FdrmCode { diagram: f.clone(), delta, code: linear })
}

/// Lexicographic greedy over all fillings.
fn greedy_fdrm(field: &Field, f: &FerrersDiagram, delta: usize) -> Vec<MatGF> {
    let (k, w) = (f.rows(), f.width());
    let dots = f.dots();
    let units: Vec<MatGF> = dots
        .iter()
        .map(|&(r, c)| {
            let mut m = MatGF::zeros(field, k, w);
            m.set(r, c, 1);
            m
        })
        .collect();
    let mut chosen: Vec<MatGF> = Vec::new();
    for cand in span_words(field, &units, &MatGF::zeros(field, k, w)) {
        if chosen.iter().all(|c| cand.sub(c).unwrap().rank() >= delta) {
            chosen.push(cand);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::FieldSpec;
    use crate::spaces::{ferrers_of, PivotVector};

    fn gf(q: u64) -> Field {
        FieldSpec::of_order(q).unwrap()
    }

    #[test]
    fn mrd_sizes() {
        assert_eq!(mrd_size(2, 4, 4, 2), BigInt::from(4096));
        assert_eq!(mrd_size(2, 4, 5, 3), BigInt::from(1024));
        assert_eq!(mrd_size(3, 2, 3, 4), BigInt::one());
    }

    #[test]
    fn distribution_4x4() {
        let a: Vec<BigInt> = (0..=4).map(|r| rank_distribution(2, 4, 4, 2, r).unwrap()).collect();
        assert_eq!(a[2], BigInt::from(525));
        assert_eq!(a.iter().sum::<BigInt>(), BigInt::from(4096));
        assert_eq!(rank_distribution(2, 5, 5, 2, 1).unwrap(), BigInt::zero());
    }

    #[test]
    fn extension_field_irreducibles() {
        let f2 = gf(2);
        assert_eq!(ExtField::new(&f2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(ExtField::new(&f2, 3).modulus(), &[1, 0, 1, 1]);
        let f4 = gf(4);
        let e = ExtField::new(&f4, 2);
        assert!(is_irreducible_over(&f4, e.modulus()));
        assert!(!is_irreducible_over(&f2, &[1, 0, 1]));
    }

    #[test]
    fn gabidulin_small() {
        let f = gf(2);
        let c = gabidulin(&f, 4, 4, 3).unwrap();
        assert_eq!(c.size(), BigInt::from(256));
        assert_eq!(c.min_distance(1 << 12).unwrap(), Some(3));
        let c = gabidulin(&f, 4, 4, 4).unwrap();
        assert_eq!(c.rank_histogram(100).unwrap(), vec![1, 0, 0, 0, 15]);
    }

    #[test]
    fn restricted_examples() {
        assert_eq!(additive_rank_sum(2, 4, 4, 2, &[0, 1, 2, 3]), BigInt::from(2776));
        assert_eq!(additive_rank_sum(2, 4, 4, 2, &[0, 1, 2]), BigInt::from(526));
        // The nonzero coset average beats the rank sum here.
        assert_eq!(restricted_rank_lower_bound(2, 4, 4, 2, &[0, 1, 2, 3]).value, BigInt::from(2840));
        assert_eq!(restricted_rank_lower_bound(2, 4, 4, 2, &[0, 1, 2]).value, BigInt::from(526));
        assert_eq!(restricted_rank_lower_bound(2, 4, 4, 2, &[1]).value, BigInt::from(15));
        assert_eq!(restricted_rank_lower_bound(2, 5, 5, 2, &[0, 1, 2, 3]).value, BigInt::from(130696));
    }

    #[test]
    fn three_piece_code() {
        let c = three_piece_sumrank(&gf(2)).unwrap();
        assert_eq!(c.min_distance().unwrap(), Some(3));
        assert_eq!(c.size(), 57);
    }

    #[test]
    fn fdrm_bounds() {
        let v: PivotVector = "101101000".parse().unwrap();
        assert_eq!(fdrm_upper_bound(&ferrers_of(&v), 3, 2), BigInt::from(128));
        assert_eq!(fdrm_upper_bound(&FerrersDiagram::rectangle(3, 4), 3, 2), BigInt::from(16));
        let v: PivotVector = "0001101".parse().unwrap();
        assert_eq!(fdrm_upper_bound(&ferrers_of(&v), 3, 2), BigInt::one());
    }
}
