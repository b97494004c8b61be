//! Matrices over GF(q), reduced row echelon forms and subspaces.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_traits::ToPrimitive;

use crate::gfq::Field;
use crate::qcombi::gauss_binomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    Shape,
    FieldMismatch,
    AmbientMismatch,
    BadEntry(u32),
    LengthMismatch,
    BadPermutation,
    CapExceeded,
    OutsideDiagram,
    Parse(String),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::Shape => write!(f, "matrix shapes do not fit"),
            SpaceError::FieldMismatch => write!(f, "matrices over different fields"),
            SpaceError::AmbientMismatch => write!(f, "subspaces live in different ambient spaces"),
            SpaceError::BadEntry(v) => write!(f, "entry {v} is not a field element"),
            SpaceError::LengthMismatch => write!(f, "vectors have different lengths"),
            SpaceError::BadPermutation => write!(f, "not a permutation"),
            SpaceError::CapExceeded => write!(f, "enumeration larger than the configured cap"),
            SpaceError::OutsideDiagram => write!(f, "filling has entries outside the Ferrers diagram"),
            SpaceError::Parse(s) => write!(f, "cannot parse {s}"),
        }
    }
}

/// Dense `rows x cols` matrix over GF(q), row-major.
#[derive(Clone)]
pub struct MatGF {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for MatGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            for v in self.row(r) {
                write!(f, "{v}")?;
            }
        }
        write!(f, "]")
    }
}

impl PartialEq for MatGF {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data && *self.field == *other.field
    }
}

impl Eq for MatGF {}

impl PartialOrd for MatGF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MatGF {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

impl MatGF {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, SpaceError> {
        if data.len() != rows * cols {
            return Err(SpaceError::Shape);
        }
        if let Some(&bad) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(SpaceError::BadEntry(bad));
        }
        Ok(MatGF { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Field, rows: &[&[u32]]) -> Result<Self, SpaceError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(SpaceError::Shape);
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    /// Parses rows of digits separated by `;`, e.g. `"0100;0010"`. Only for `q <= 10`.
    pub fn parse(field: &Field, s: &str) -> Result<Self, SpaceError> {
        let rows: Vec<Vec<u32>> = s
            .split(';')
            .map(|r| r.trim().chars().map(|c| c.to_digit(10).ok_or_else(|| SpaceError::Parse(String::from(s)))).collect())
            .collect::<Result<_, _>>()?;
        let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
        Self::from_rows(field, &refs)
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        MatGF { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_same(&self, other: &Self) -> Result<(), SpaceError> {
        if *self.field != *other.field {
            return Err(SpaceError::FieldMismatch);
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn hstack(&self, other: &Self) -> Result<Self, SpaceError> {
        self.check_same(other)?;
        if self.rows != other.rows {
            return Err(SpaceError::Shape);
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(MatGF { field: self.field.clone(), rows: self.rows, cols, data })
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, SpaceError> {
        self.check_same(other)?;
        if self.cols != other.cols {
            return Err(SpaceError::Shape);
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatGF { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SpaceError> {
        self.check_same(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SpaceError::Shape);
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(MatGF { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SpaceError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        MatGF { field: f.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn scale(&self, s: u32) -> Self {
        let f = &self.field;
        MatGF { field: f.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SpaceError> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(SpaceError::Shape);
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    /// Matrix made of the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, rows: core::ops::Range<usize>) -> Self {
        let data = self.data[rows.start * self.cols..rows.end * self.cols].to_vec();
        MatGF { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    /// Widens to `total` columns by inserting zero columns at `zero_cols`.
    pub fn spread_columns(&self, total: usize, zero_cols: &[usize]) -> Result<Self, SpaceError> {
        if total != self.cols + zero_cols.len() || zero_cols.iter().any(|&c| c >= total) {
            return Err(SpaceError::Shape);
        }
        let keep: Vec<usize> = (0..total).filter(|c| !zero_cols.contains(c)).collect();
        let mut out = Self::zeros(&self.field, self.rows, total);
        for r in 0..self.rows {
            for (j, &c) in keep.iter().enumerate() {
                out.data[r * total + c] = self.get(r, j);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and pivot columns. Zero rows are kept at the bottom.
    pub fn rref(&self) -> (MatGF, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    m.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.data[r * cols + c]).expect("nonzero pivot");
            if inv != 1 {
                for j in c..cols {
                    m.data[r * cols + j] = f.mul(m.data[r * cols + j], inv);
                }
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = m.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let t = f.mul(factor, m.data[r * cols + j]);
                    m.data[i * cols + j] = f.sub(m.data[i * cols + j], t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.field.q() == 2 && self.cols <= 128 {
            let mut packed: Vec<u128> = (0..self.rows).map(|r| pack_row_gf2(self.row(r))).collect();
            return rank_gf2(&mut packed);
        }
        self.rref().1.len()
    }

    pub fn row_space(&self) -> Subspace {
        let (e, pivots) = self.rref();
        let k = pivots.len();
        Subspace { rref: e.select_rows(0..k), pivots }
    }
}

pub fn pack_row_gf2(row: &[u32]) -> u128 {
    row.iter().enumerate().fold(0u128, |acc, (i, &v)| acc | ((v as u128 & 1) << i))
}

/// Rank of bit-packed GF(2) rows; the slice is used as scratch space.
pub fn rank_gf2(rows: &mut [u128]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let v = rows[i];
        if v == 0 {
            continue;
        }
        let low = v & v.wrapping_neg();
        rank += 1;
        for w in rows[i + 1..].iter_mut() {
            if *w & low != 0 {
                *w ^= v;
            }
        }
    }
    rank
}

/// Binary indicator of pivot columns.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PivotVector {
    bits: Vec<bool>,
}

impl fmt::Debug for PivotVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PivotVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for PivotVector {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(SpaceError::Parse(String::from(s))),
            })
            .collect::<Result<_, _>>()?;
        Ok(PivotVector { bits })
    }
}

impl PivotVector {
    pub fn new(bits: Vec<bool>) -> Self {
        PivotVector { bits }
    }

    pub fn from_positions(n: usize, positions: &[usize]) -> Self {
        let mut bits = vec![false; n];
        for &p in positions {
            bits[p] = true;
        }
        PivotVector { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn positions(&self) -> Vec<usize> {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }
}

pub fn hamming_distance(v: &PivotVector, w: &PivotVector) -> Result<usize, SpaceError> {
    if v.len() != w.len() {
        return Err(SpaceError::LengthMismatch);
    }
    Ok(v.bits.iter().zip(&w.bits).filter(|(a, b)| a != b).count())
}

/// A subspace of `F_q^n`, held as its unique RREF generator matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    rref: MatGF,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?}>", self.rref)
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n(), self.k())
            .cmp(&(other.n(), other.k()))
            .then_with(|| self.pivot_vector().cmp(&other.pivot_vector()))
            .then_with(|| self.tableau().data.cmp(&other.tableau().data))
    }
}

impl Subspace {
    pub fn from_generator(m: &MatGF) -> Self {
        m.row_space()
    }

    /// Builds `E(U)` from a pivot vector and a `k x (n-k)` filling indexed by the
    /// non-pivot columns. Entries left of a row's pivot must be zero.
    pub fn from_echelon(pivot: &PivotVector, filling: &MatGF) -> Result<Self, SpaceError> {
        let n = pivot.len();
        let pivots = pivot.positions();
        let k = pivots.len();
        if filling.rows() != k || filling.cols() != n - k {
            return Err(SpaceError::Shape);
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivot.bits[*c]).collect();
        let mut m = MatGF::zeros(filling.field(), k, n);
        for (i, &p) in pivots.iter().enumerate() {
            m.set(i, p, 1);
            for (j, &c) in free.iter().enumerate() {
                let v = filling.get(i, j);
                if v != 0 && c < p {
                    return Err(SpaceError::OutsideDiagram);
                }
                m.set(i, c, v);
            }
        }
        Ok(Subspace { rref: m, pivots })
    }

    pub fn zero(field: &Field, n: usize) -> Self {
        Subspace { rref: MatGF::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: &Field, n: usize) -> Self {
        Subspace { rref: MatGF::identity(field, n), pivots: (0..n).collect() }
    }

    /// Span of the given unit vectors.
    pub fn coordinate(field: &Field, n: usize, coords: &[usize]) -> Self {
        let mut m = MatGF::zeros(field, coords.len(), n);
        for (i, &c) in coords.iter().enumerate() {
            m.set(i, c, 1);
        }
        m.row_space()
    }

    pub fn n(&self) -> usize {
        self.rref.cols
    }

    pub fn k(&self) -> usize {
        self.rref.rows
    }

    pub fn field(&self) -> &Field {
        &self.rref.field
    }

    pub fn matrix(&self) -> &MatGF {
        &self.rref
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn pivot_vector(&self) -> PivotVector {
        PivotVector::from_positions(self.n(), &self.pivots)
    }

    /// The Ferrers tableau: the `k x (n-k)` non-pivot part of `E(U)`.
    pub fn tableau(&self) -> MatGF {
        let free: Vec<usize> = (0..self.n()).filter(|c| !self.pivots.contains(c)).collect();
        self.rref.select_columns(&free)
    }

    fn check_ambient(&self, other: &Self) -> Result<(), SpaceError> {
        if self.n() != other.n() {
            return Err(SpaceError::AmbientMismatch);
        }
        if *self.field() != *other.field() {
            return Err(SpaceError::FieldMismatch);
        }
        Ok(())
    }

    pub fn join(&self, other: &Self) -> Result<Subspace, SpaceError> {
        self.check_ambient(other)?;
        Ok(self.rref.vstack(&other.rref)?.row_space())
    }

    /// Intersection computed through duals: `(U^perp + W^perp)^perp`.
    pub fn meet(&self, other: &Self) -> Result<Subspace, SpaceError> {
        self.check_ambient(other)?;
        Ok(dual(&dual(self).join(&dual(other))?))
    }

    pub fn contains(&self, other: &Self) -> Result<bool, SpaceError> {
        Ok(self.join(other)?.k() == self.k())
    }
}

pub fn rank_of_stack(u: &Subspace, w: &Subspace) -> Result<usize, SpaceError> {
    u.check_ambient(w)?;
    Ok(u.rref.vstack(&w.rref)?.rank())
}

pub fn subspace_distance(u: &Subspace, w: &Subspace) -> Result<usize, SpaceError> {
    Ok(2 * rank_of_stack(u, w)? - u.k() - w.k())
}

pub fn injection_distance(u: &Subspace, w: &Subspace) -> Result<usize, SpaceError> {
    Ok(rank_of_stack(u, w)? - u.k().min(w.k()))
}

/// Orthogonal complement for the standard dot product.
pub fn dual(u: &Subspace) -> Subspace {
    let f = u.field().clone();
    let n = u.n();
    let free: Vec<usize> = (0..n).filter(|c| !u.pivots.contains(c)).collect();
    let mut m = MatGF::zeros(&f, free.len(), n);
    for (r, &fc) in free.iter().enumerate() {
        m.set(r, fc, 1);
        for (i, &p) in u.pivots.iter().enumerate() {
            m.set(r, p, f.neg(u.rref.get(i, fc)));
        }
    }
    m.row_space()
}

/// Column-permuted subspace: column `j` moves to position `perm[j]`.
pub fn permute_columns(u: &Subspace, perm: &[usize]) -> Result<Subspace, SpaceError> {
    let n = u.n();
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(SpaceError::BadPermutation);
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(SpaceError::BadPermutation);
        }
        seen[p] = true;
    }
    let mut m = MatGF::zeros(u.field(), u.k(), n);
    for r in 0..u.k() {
        for c in 0..n {
            m.set(r, perm[c], u.rref.get(r, c));
        }
    }
    Ok(m.row_space())
}

/// Ferrers diagram: dot counts per row, right-justified in `width` columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FerrersDiagram {
    row_lengths: Vec<usize>,
    width: usize,
}

impl FerrersDiagram {
    pub fn new(row_lengths: Vec<usize>, width: usize) -> Self {
        FerrersDiagram { row_lengths, width }
    }

    pub fn rectangle(rows: usize, cols: usize) -> Self {
        FerrersDiagram { row_lengths: vec![cols; rows], width: cols }
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.row_lengths
    }

    pub fn rows(&self) -> usize {
        self.row_lengths.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dot_count(&self) -> usize {
        self.row_lengths.iter().sum()
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        r < self.rows() && c < self.width && c >= self.width - self.row_lengths[r]
    }

    /// Dot positions in row-major order.
    pub fn dots(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.dot_count());
        for (r, &len) in self.row_lengths.iter().enumerate() {
            for c in self.width - len..self.width {
                out.push((r, c));
            }
        }
        out
    }

    pub fn is_rectangular(&self) -> bool {
        self.row_lengths.iter().all(|&l| l == self.width)
    }
}

pub fn ferrers_of(v: &PivotVector) -> FerrersDiagram {
    let n = v.len();
    let width = n - v.weight();
    let row_lengths = v
        .positions()
        .iter()
        .map(|&p| (p + 1..n).filter(|&j| !v.bits[j]).count())
        .collect();
    FerrersDiagram { row_lengths, width }
}

/// `sum_i u_i * #{j > i : u_j = 0}`.
pub fn dot_count_formula(v: &PivotVector) -> usize {
    let b = &v.bits;
    (0..b.len()).filter(|&i| b[i]).map(|i| b[i + 1..].iter().filter(|&&x| !x).count()).sum()
}

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// All `k`-subspaces of `F_q^n` in canonical order.
pub fn enumerate_grassmannian(field: &Field, n: usize, k: usize, cap: u64) -> Result<GrassmannianIter, SpaceError> {
    let total = gauss_binomial(n as i64, k as i64, field.q() as u64);
    if total.to_u64().is_none_or(|t| t > cap) {
        return Err(SpaceError::CapExceeded);
    }
    let mut combos = Vec::new();
    if k <= n {
        let mut c: Vec<usize> = (0..k).collect();
        loop {
            combos.push(PivotVector::from_positions(n, &c));
            if !next_combination(&mut c, n) {
                break;
            }
        }
    }
    combos.sort();
    combos.reverse();
    Ok(GrassmannianIter { field: field.clone(), n, k, combos, filling: None })
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub struct GrassmannianIter {
    field: Field,
    n: usize,
    k: usize,
    // Remaining pivot vectors, smallest last.
    combos: Vec<PivotVector>,
    filling: Option<(Vec<(usize, usize)>, Vec<u32>)>,
}

impl Iterator for GrassmannianIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let pivot = self.combos.last()?.clone();
        let (dots, counter) = self.filling.get_or_insert_with(|| {
            let dots = ferrers_of(&pivot).dots();
            let len = dots.len();
            (dots, vec![0; len])
        });
        let mut fill = MatGF::zeros(&self.field, self.k, self.n - self.k);
        for (&(r, c), &v) in dots.iter().zip(counter.iter()) {
            fill.set(r, c, v);
        }
        let out = Subspace::from_echelon(&pivot, &fill).expect("filling inside diagram");
        // Advance the base-q counter, last dot fastest.
        let q = self.field.q();
        let mut i = counter.len();
        let mut carry = true;
        while carry && i > 0 {
            i -= 1;
            counter[i] += 1;
            if counter[i] == q {
                counter[i] = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            self.filling = None;
            self.combos.pop();
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::gfq::FieldSpec;

    #[test]
    fn rref_of_the_nine_column_example() {
        let f = FieldSpec::of_order(2).unwrap();
        let m = MatGF::parse(&f, "101110101;100111111;000100010;000001101").unwrap();
        let u = m.row_space();
        let e = MatGF::parse(&f, "100010000;001000111;000100010;000001101").unwrap();
        assert_eq!(u.matrix(), &e);
        assert_eq!(u.pivot_vector().to_string(), "101101000");
        assert_eq!(m.rank(), 4);
        let fd = ferrers_of(&u.pivot_vector());
        assert_eq!(fd.row_lengths(), &[5, 4, 4, 3]);
        assert_eq!(fd.dot_count(), 16);
    }

    #[test]
    fn gf3_pair_and_permutation() {
        let f = FieldSpec::of_order(3).unwrap();
        let u = MatGF::parse(&f, "1000;0100").unwrap().row_space();
        let w = MatGF::parse(&f, "1021;0101").unwrap().row_space();
        assert_eq!(subspace_distance(&u, &w).unwrap(), 4);
        assert_eq!(hamming_distance(&u.pivot_vector(), &w.pivot_vector()).unwrap(), 0);
        let perm = [2, 3, 0, 1];
        let pu = permute_columns(&u, &perm).unwrap();
        let pw = permute_columns(&w, &perm).unwrap();
        assert_eq!(pu.pivot_vector().to_string(), "0011");
        assert_eq!(pw.pivot_vector().to_string(), "1100");
        assert_eq!(subspace_distance(&pu, &pw).unwrap(), 4);
    }

    #[test]
    fn degenerate_matrices() {
        let f = FieldSpec::of_order(5).unwrap();
        let i = MatGF::identity(&f, 3);
        assert_eq!(i.rref(), (i.clone(), vec![0, 1, 2]));
        let z = MatGF::zeros(&f, 2, 3);
        assert_eq!(z.rref(), (z.clone(), vec![]));
        assert_eq!(z.row_space().k(), 0);
    }

    #[test]
    fn dual_of_a_point() {
        let f = FieldSpec::of_order(2).unwrap();
        let p = Subspace::coordinate(&f, 3, &[0]);
        assert_eq!(dual(&p), Subspace::coordinate(&f, 3, &[1, 2]));
        assert_eq!(dual(&Subspace::full(&f, 3)).k(), 0);
    }

    #[test]
    fn grassmannian_counts() {
        let f = FieldSpec::of_order(2).unwrap();
        assert_eq!(enumerate_grassmannian(&f, 4, 2, 1000).unwrap().count(), 35);
        assert_eq!(enumerate_grassmannian(&f, 6, 3, 10000).unwrap().count(), 1395);
        assert_eq!(enumerate_grassmannian(&f, 5, 0, 10).unwrap().count(), 1);
        assert!(enumerate_grassmannian(&f, 10, 5, 1000).is_err());
        let all: Vec<Subspace> = enumerate_grassmannian(&f, 4, 2, 1000).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0].pivot_vector().to_string(), "0011");
    }
}
