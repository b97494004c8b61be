//! Brute-force checks for subspace codes: minimum distance, pivot structure,
//! point coverage and an exact maximum-clique oracle.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::Cdc;
use crate::gfq::Field;
use crate::spaces::{enumerate_grassmannian, rank_gf2, MatGF, PivotVector, SpaceError, Subspace};

pub const DEFAULT_EXACT_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    CapExceeded { size: usize, cap: usize },
    Implicit,
    Space(SpaceError),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::CapExceeded { size, cap } => write!(f, "{size} words exceed the exact-mode cap {cap}"),
            VerifyError::Implicit => write!(f, "code has no explicit word list"),
            VerifyError::Space(e) => write!(f, "{e}"),
        }
    }
}

impl From<SpaceError> for VerifyError {
    fn from(e: SpaceError) -> Self {
        VerifyError::Space(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// All pairs; refuses codes above `cap` words.
    Exact { cap: usize },
    /// `pairs` uniformly random distinct pairs from a ChaCha8 stream.
    Sampled { pairs: u64, seed: u64 },
}

impl Mode {
    pub fn exact() -> Self {
        Mode::Exact { cap: DEFAULT_EXACT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub label: String,
    pub size: usize,
    /// `None` is the infinite distance of a code with fewer than two words.
    pub min_distance: Option<usize>,
    /// True only for exhaustive scans.
    pub certified: bool,
    pub seed: Option<u64>,
    pub pairs_checked: u64,
    pub histogram: BTreeMap<usize, u64>,
    pub constant_dimension: bool,
    pub pivot_structure: BTreeSet<PivotVector>,
    pub witness: Option<(usize, usize)>,
}

impl VerificationReport {
    pub fn meets(&self, d: usize) -> bool {
        self.min_distance.is_none_or(|m| m >= d)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let min = self.min_distance.map_or(String::from("inf"), |m| alloc::format!("{m}"));
        let kind = if self.certified { "exact" } else { "sampled (not a certificate)" };
        write!(f, "{}: {} words, min distance {min}, {kind}, {} pairs", self.label, self.size, self.pairs_checked)?;
        if let Some(s) = self.seed {
            write!(f, ", seed {s}")?;
        }
        Ok(())
    }
}

/// Pair distance oracle with a packed GF(2) fast path.
pub struct DistanceOracle<'a> {
    words: &'a [Subspace],
    packed: Option<Vec<Vec<u128>>>,
}

impl<'a> DistanceOracle<'a> {
    pub fn new(words: &'a [Subspace]) -> Self {
        let packed = match words.first() {
            Some(w) if w.field().q() == 2 && w.n() <= 128 => Some(
                words
                    .iter()
                    .map(|u| (0..u.k()).map(|r| crate::spaces::pack_row_gf2(u.matrix().row(r))).collect())
                    .collect(),
            ),
            _ => None,
        };
        DistanceOracle { words, packed }
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<usize, SpaceError> {
        let (u, w) = (&self.words[i], &self.words[j]);
        match &self.packed {
            Some(p) => {
                if u.n() != w.n() {
                    return Err(SpaceError::AmbientMismatch);
                }
                let mut rows = [0u128; 256];
                let (a, b) = (&p[i], &p[j]);
                let total = a.len() + b.len();
                if total > rows.len() {
                    return crate::spaces::subspace_distance(u, w);
                }
                rows[..a.len()].copy_from_slice(a);
                rows[a.len()..total].copy_from_slice(b);
                let r = rank_gf2(&mut rows[..total]);
                Ok(2 * r - a.len() - b.len())
            }
            None => crate::spaces::subspace_distance(u, w),
        }
    }
}

/// Minimum distance of an explicit word list.
pub fn min_distance_of(label: &str, words: &[Subspace], mode: Mode) -> Result<VerificationReport, VerifyError> {
    let oracle = DistanceOracle::new(words);
    let mut hist = BTreeMap::new();
    let mut best: Option<(usize, (usize, usize))> = None;
    let mut pairs = 0u64;
    let mut record = |i: usize, j: usize, best: &mut Option<(usize, (usize, usize))>| -> Result<(), VerifyError> {
        let d = oracle.distance(i, j)?;
        *hist.entry(d).or_insert(0u64) += 1;
        if best.is_none_or(|(b, _)| d < b) {
            *best = Some((d, (i, j)));
        }
        Ok(())
    };
    let n = words.len();
    let (certified, seed) = match mode {
        Mode::Exact { cap } => {
            if n > cap {
                return Err(VerifyError::CapExceeded { size: n, cap });
            }
            for i in 0..n {
                for j in i + 1..n {
                    record(i, j, &mut best)?;
                    pairs += 1;
                }
            }
            (true, None)
        }
        Mode::Sampled { pairs: count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if n >= 2 {
                for _ in 0..count {
                    let i = (rng.next_u64() % n as u64) as usize;
                    let mut j = (rng.next_u64() % (n as u64 - 1)) as usize;
                    if j >= i {
                        j += 1;
                    }
                    record(i.min(j), i.max(j), &mut best)?;
                    pairs += 1;
                }
            }
            (false, Some(seed))
        }
    };
    let k = words.first().map(|w| w.k());
    Ok(VerificationReport {
        label: String::from(label),
        size: n,
        min_distance: best.map(|b| b.0),
        certified,
        seed,
        pairs_checked: pairs,
        histogram: hist,
        constant_dimension: words.iter().all(|w| Some(w.k()) == k),
        pivot_structure: words.iter().map(|w| w.pivot_vector()).collect(),
        witness: best.map(|b| b.1),
    })
}

pub fn min_distance(c: &Cdc, mode: Mode) -> Result<VerificationReport, VerifyError> {
    let words = c.words().ok_or(VerifyError::Implicit)?;
    min_distance_of(&c.label(), words, mode)
}

/// Whether some pair is closer than `d`; stops at the first such pair.
pub fn first_violation(words: &[Subspace], d: usize) -> Result<Option<(usize, usize, usize)>, SpaceError> {
    let oracle = DistanceOracle::new(words);
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let v = oracle.distance(i, j)?;
            if v < d {
                return Ok(Some((i, j, v)));
            }
        }
    }
    Ok(None)
}

/// Cross distances between two word lists: the first pair closer than `d`.
pub fn first_cross_violation(a: &[Subspace], b: &[Subspace], d: usize) -> Result<Option<(usize, usize, usize)>, SpaceError> {
    let all: Vec<Subspace> = a.iter().chain(b.iter()).cloned().collect();
    let oracle = DistanceOracle::new(&all);
    for i in 0..a.len() {
        for j in 0..b.len() {
            let v = oracle.distance(i, a.len() + j)?;
            if v < d {
                return Ok(Some((i, j, v)));
            }
        }
    }
    Ok(None)
}

pub fn pivot_structure(words: &[Subspace]) -> BTreeSet<PivotVector> {
    words.iter().map(|w| w.pivot_vector()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub is_partial_spread: bool,
    pub points: usize,
    pub covered: usize,
    pub holes: usize,
    /// Normalized point coordinates covered more than once, with multiplicity.
    pub conflicts: BTreeMap<Vec<u32>, usize>,
    pub multiplicity: BTreeMap<Vec<u32>, usize>,
}

/// Point coverage of PG(n-1, q) by the words.
pub fn is_partial_spread(words: &[Subspace]) -> Result<CoverageReport, SpaceError> {
    let Some(first) = words.first() else {
        return Ok(CoverageReport {
            is_partial_spread: true,
            points: 0,
            covered: 0,
            holes: 0,
            conflicts: BTreeMap::new(),
            multiplicity: BTreeMap::new(),
        });
    };
    let f = first.field().clone();
    let n = first.n();
    let q = f.q() as u64;
    let mut mult: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for w in words {
        if w.n() != n {
            return Err(SpaceError::AmbientMismatch);
        }
        for p in points_of(&f, w.matrix()) {
            *mult.entry(p).or_insert(0) += 1;
        }
    }
    let total = ((q.pow(n as u32) - 1) / (q - 1)) as usize;
    let conflicts: BTreeMap<Vec<u32>, usize> = mult.iter().filter(|(_, &m)| m > 1).map(|(p, &m)| (p.clone(), m)).collect();
    Ok(CoverageReport {
        is_partial_spread: conflicts.is_empty(),
        points: total,
        covered: mult.len(),
        holes: total - mult.len(),
        conflicts,
        multiplicity: mult,
    })
}

/// Normalized (leading entry 1) vectors of the row space.
fn points_of(f: &Field, m: &MatGF) -> Vec<Vec<u32>> {
    let k = m.rows();
    let n = m.cols();
    let q = f.q();
    let mut out = Vec::new();
    let mut coef = vec![0u32; k];
    loop {
        // Advance; skip the zero combination.
        let mut i = k;
        let mut carry = true;
        while carry && i > 0 {
            i -= 1;
            coef[i] += 1;
            if coef[i] == q {
                coef[i] = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
        let lead = coef.iter().position(|&c| c != 0).unwrap();
        if coef[lead] != 1 {
            continue;
        }
        let mut v = vec![0u32; n];
        for (r, &c) in coef.iter().enumerate() {
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(m.row(r)) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
        }
        out.push(v);
    }
    out
}

/// Maximum clique in a graph given by adjacency bitsets.
pub fn max_clique(adj: &[Vec<u64>]) -> Vec<usize> {
    let n = adj.len();
    let words = n.div_ceil(64);
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand(adj, &mut current, all, &mut best);
    best
}

fn bits_of(set: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &x) in set.iter().enumerate() {
        let mut x = x;
        while x != 0 {
            let b = x.trailing_zeros() as usize;
            out.push(w * 64 + b);
            x &= x - 1;
        }
    }
    out
}

// Greedy coloring bound, Tomita style.
fn color_order(adj: &[Vec<u64>], cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut uncolored = cand.to_vec();
    let mut order = Vec::new();
    let mut colors = Vec::new();
    let mut color = 0;
    while uncolored.iter().any(|&x| x != 0) {
        color += 1;
        let mut avail = uncolored.clone();
        while let Some(v) = bits_of(&avail).first().copied() {
            uncolored[v / 64] &= !(1 << (v % 64));
            avail[v / 64] &= !(1 << (v % 64));
            for (a, b) in avail.iter_mut().zip(&adj[v]) {
                *a &= !b;
            }
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

fn expand(adj: &[Vec<u64>], current: &mut Vec<usize>, mut cand: Vec<u64>, best: &mut Vec<usize>) {
    let (order, colors) = color_order(adj, &cand);
    for idx in (0..order.len()).rev() {
        if current.len() + colors[idx] <= best.len() {
            return;
        }
        let v = order[idx];
        current.push(v);
        let next: Vec<u64> = cand.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
        if next.iter().all(|&x| x == 0) {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(adj, current, next, best);
        }
        current.pop();
        cand[v / 64] &= !(1 << (v % 64));
    }
}

/// Exhaustive `A_q(n,d;k)` via maximum clique on the Grassmann distance graph.
/// The graph is vertex transitive, so the first subspace is fixed.
pub fn max_cdc_size_exhaustive(field: &Field, n: usize, d: usize, k: usize, cap: u64) -> Result<usize, SpaceError> {
    let all: Vec<Subspace> = enumerate_grassmannian(field, n, k, cap)?.collect();
    if all.is_empty() {
        return Ok(0);
    }
    let oracle = DistanceOracle::new(&all);
    let mut nbrs = Vec::new();
    for j in 1..all.len() {
        if oracle.distance(0, j)? >= d {
            nbrs.push(j);
        }
    }
    let m = nbrs.len();
    let words = m.div_ceil(64).max(1);
    let mut adj = vec![vec![0u64; words]; m];
    for a in 0..m {
        for b in a + 1..m {
            if oracle.distance(nbrs[a], nbrs[b])? >= d {
                adj[a][b / 64] |= 1 << (b % 64);
                adj[b][a / 64] |= 1 << (a % 64);
            }
        }
    }
    Ok(1 + max_clique(&adj).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::FieldSpec;

    #[test]
    fn clique_of_a_triangle_plus_edge() {
        let mut adj = vec![vec![0u64]; 4];
        for (a, b) in [(0, 1), (1, 2), (0, 2), (2, 3)] {
            adj[a][0] |= 1 << b;
            adj[b][0] |= 1 << a;
        }
        assert_eq!(max_clique(&adj).len(), 3);
    }

    #[test]
    fn full_grassmannian_distance_two() {
        let f = FieldSpec::of_order(2).unwrap();
        let all: Vec<Subspace> = enumerate_grassmannian(&f, 4, 2, 100).unwrap().collect();
        let r = min_distance_of("G(4,2)", &all, Mode::exact()).unwrap();
        assert_eq!(r.min_distance, Some(2));
        assert_eq!(r.histogram.values().sum::<u64>(), 35 * 34 / 2);
        let one = min_distance_of("single", &all[..1], Mode::exact()).unwrap();
        assert_eq!(one.min_distance, None);
    }

    #[test]
    fn intersecting_planes() {
        let f = FieldSpec::of_order(2).unwrap();
        let a = Subspace::coordinate(&f, 5, &[0, 1, 2]);
        let b = Subspace::coordinate(&f, 5, &[2, 3, 4]);
        let r = is_partial_spread(&[a, b]).unwrap();
        assert!(!r.is_partial_spread);
        assert_eq!(r.conflicts.keys().next().unwrap(), &vec![0, 0, 1, 0, 0]);
    }
}
