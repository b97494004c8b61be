//! Arithmetic in GF(p^e).
//!
//! Elements are encoded as integers in `[0, q)` whose base-`p` digits are the
//! polynomial coefficients, lowest degree first. `0` is the zero element and
//! `1` the one element.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Fields up to this size get log/antilog tables.
pub const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GfError {
    NotPrime(u64),
    BadDegree,
    TooLarge,
    BadModulus,
    Reducible,
    InverseOfZero,
    MixedFields,
    NotSubfield(u64),
    OutOfRange(u32),
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfError::NotPrime(p) => write!(f, "{p} is not prime"),
            GfError::BadDegree => write!(f, "extension degree must be at least 1"),
            GfError::TooLarge => write!(f, "field size does not fit in 32 bits"),
            GfError::BadModulus => write!(f, "modulus must be monic of the extension degree"),
            GfError::Reducible => write!(f, "modulus is reducible"),
            GfError::InverseOfZero => write!(f, "zero has no inverse"),
            GfError::MixedFields => write!(f, "elements belong to different fields"),
            GfError::NotSubfield(b) => write!(f, "{b} is not the size of a subfield"),
            GfError::OutOfRange(r) => write!(f, "element encoding {r} out of range"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut e = 0;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// Shared handle to an immutable field description.
pub type Field = Arc<FieldSpec>;

pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) modulus {:?}", self.q, self.modulus)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let t = (c as u64 * mi as u64 % p as u64) as u32;
            let slot = &mut r[shift + i];
            *slot = (*slot + p - t) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a as u64, p as u64 - 2, p as u64) as u32
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = digits(idx, p, d);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = (v % p as u64) as u32;
        v /= p as u64;
    }
    out
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let count = (p as u64).pow(e as u32);
    for idx in 0..count {
        // c0 is the most significant digit of the lexicographic order.
        let mut c = digits(idx, p, e);
        c.reverse();
        c.push(1);
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// GF(q) for a prime power `q` with the default modulus.
    pub fn of_order(q: u64) -> Result<Field, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NotPrime(q))?;
        Self::new(p, e, None)
    }

    pub fn new(p: u64, e: u32, modulus: Option<&[u32]>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if e < 1 {
            return Err(GfError::BadDegree);
        }
        let q = p.checked_pow(e).filter(|&q| q <= u32::MAX as u64).ok_or(GfError::TooLarge)?;
        let p = p as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(GfError::BadModulus);
                }
                if !is_irreducible(m, p) {
                    return Err(GfError::Reducible);
                }
                m.to_vec()
            }
            None => smallest_irreducible(p, e),
        };
        let mut spec = FieldSpec { p, e, q: q as u32, modulus, exp: Vec::new(), log: Vec::new() };
        if q <= TABLE_LIMIT {
            spec.build_tables();
        }
        Ok(Arc::new(spec))
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let order = q as u64 - 1;
        let mut factors = Vec::new();
        let mut m = order;
        let mut f = 2;
        while f * f <= m {
            if m.is_multiple_of(f) {
                factors.push(f);
                while m.is_multiple_of(f) {
                    m /= f;
                }
            }
            f += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        let gen = (1..self.q)
            .find(|&g| factors.iter().all(|&l| self.pow_slow(g, order / l) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; 2 * q];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, gen);
        }
        for i in q - 1..2 * q {
            exp[i] = exp[i - (q - 1)];
        }
        self.exp = exp;
        self.log = log;
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let e = self.e as usize;
        let da = digits(a as u64, self.p, e);
        let db = digits(b as u64, self.p, e);
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        self.encode(&poly_rem(&prod, &self.modulus, self.p))
    }

    fn pow_slow(&self, mut b: u32, mut e: u64) -> u32 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64) as u32
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients `c0..=ce`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if self.e == 1 {
            (a + b) % self.p
        } else {
            let (mut a, mut b) = (a, b);
            let (mut out, mut place) = (0u32, 1u32);
            while a > 0 || b > 0 {
                out += ((a % self.p + b % self.p) % self.p) * place;
                a /= self.p;
                b /= self.p;
                place = place.wrapping_mul(self.p);
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            a
        } else if self.e == 1 {
            (self.p - a) % self.p
        } else {
            let mut a = a;
            let (mut out, mut place) = (0u32, 1u32);
            while a > 0 {
                out += ((self.p - a % self.p) % self.p) * place;
                a /= self.p;
                place = place.wrapping_mul(self.p);
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.q == 2 {
            return 1;
        }
        if self.log.is_empty() {
            return self.mul_slow(a, b);
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::InverseOfZero);
        }
        if self.log.is_empty() {
            return Ok(self.pow_slow(a, self.q as u64 - 2));
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.q as u64 - 1;
        if self.log.is_empty() {
            return self.pow_slow(a, n % order);
        }
        let l = self.log[a as usize] as u64 * (n % order) % order;
        self.exp[l as usize]
    }

    /// `a^(base^i)`, where `base` must be the size of a subfield.
    pub fn frobenius(&self, a: u32, i: u32, base: u64) -> Result<u32, GfError> {
        let (bp, bd) = prime_power(base).ok_or(GfError::NotSubfield(base))?;
        if bp != self.p as u64 || !self.e.is_multiple_of(bd) {
            return Err(GfError::NotSubfield(base));
        }
        if i == 0 || a == 0 {
            return Ok(a);
        }
        let order = self.q as u64 - 1;
        let ex = mod_pow(base, i as u64, order.max(1));
        Ok(self.pow(a, if ex == 0 { order } else { ex }))
    }

    /// Iterator over all elements in encoding order.
    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.q
    }
}

/// An element bundled with its field, for checked arithmetic.
#[derive(Clone, Debug)]
pub struct Felt {
    field: Field,
    rep: u32,
}

impl PartialEq for Felt {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && *self.field == *other.field
    }
}

impl Eq for Felt {}

impl Felt {
    pub fn new(field: &Field, rep: u32) -> Result<Self, GfError> {
        if !field.contains(rep) {
            return Err(GfError::OutOfRange(rep));
        }
        Ok(Felt { field: field.clone(), rep })
    }

    pub fn zero(field: &Field) -> Self {
        Felt { field: field.clone(), rep: 0 }
    }

    pub fn one(field: &Field) -> Self {
        Felt { field: field.clone(), rep: 1 }
    }

    pub fn rep(&self) -> u32 {
        self.rep
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same(&self, other: &Felt) -> Result<(), GfError> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(GfError::MixedFields)
        }
    }

    fn with(&self, rep: u32) -> Felt {
        Felt { field: self.field.clone(), rep }
    }

    pub fn add(&self, other: &Felt) -> Result<Felt, GfError> {
        self.same(other)?;
        Ok(self.with(self.field.add(self.rep, other.rep)))
    }

    pub fn sub(&self, other: &Felt) -> Result<Felt, GfError> {
        self.same(other)?;
        Ok(self.with(self.field.sub(self.rep, other.rep)))
    }

    pub fn mul(&self, other: &Felt) -> Result<Felt, GfError> {
        self.same(other)?;
        Ok(self.with(self.field.mul(self.rep, other.rep)))
    }

    pub fn inv(&self) -> Result<Felt, GfError> {
        Ok(self.with(self.field.inv(self.rep)?))
    }

    pub fn pow(&self, n: u64) -> Felt {
        self.with(self.field.pow(self.rep, n))
    }

    pub fn frobenius(&self, i: u32, base: u64) -> Result<Felt, GfError> {
        Ok(self.with(self.field.frobenius(self.rep, i, base)?))
    }
}
