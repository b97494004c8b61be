//! Parameter-driven recipes behind `scodes construct`.

use scodes_core::constructions::*;
use scodes_core::gfq::Field;
use scodes_core::rankmetric::{mrd_code, restricted_rank_code, RankCode, SumRankCode};
use scodes_core::spaces::{MatGF, Subspace};

use crate::error::CliError;

/// Largest Grassmannian the Echelon-Ferrers fallback will scan for a skeleton.
const SKELETON_LIMIT: u64 = 5000;

fn param(msg: impl Into<String>) -> CliError {
    CliError::Param(msg.into())
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

/// A good explicit `(n, d; k)` code for use as a building block.
pub fn block(field: &Field, n: usize, d: usize, k: usize) -> Result<Cdc, CliError> {
    if k > n {
        return Err(param(format!("block ({n}, {d}; {k}) has k > n")));
    }
    if k == 0 || k == n || d > 2 * k.min(n - k) {
        let coords: Vec<usize> = (0..k).collect();
        return Ok(singleton(Subspace::coordinate(field, n, &coords), d));
    }
    if d == 2 * k {
        return Ok(partial_spread(field, n, k)?);
    }
    if binomial(n, k) <= SKELETON_LIMIT {
        let s = skeleton_greedy(field.q() as u64, n, k, d)?;
        return Ok(echelon_ferrers(field, &s, d)?);
    }
    let a = lifted_mrd(field, n, k, d)?;
    Ok(combine(&[a, terminal_word(field, n, k, d)], d, Certify::Lemmas)?)
}

fn split(n: usize, k: usize, n1: Option<usize>) -> Result<(usize, usize), CliError> {
    let n1 = n1.unwrap_or(k);
    if n1 < k || n < n1 + k {
        return Err(param(format!("need k <= n1 <= n - k, got n={n} n1={n1} k={k}")));
    }
    Ok((n1, n - n1))
}

pub fn linkage_code(field: &Field, n: usize, d: usize, k: usize, n1: Option<usize>) -> Result<Cdc, CliError> {
    let (n1, n2) = split(n, k, n1)?;
    let m = mrd_code(field, k, n2, d / 2).map_err(|e| param(e.to_string()))?;
    Ok(linkage(&block(field, n1, d, k)?, &block(field, n2, d, k)?, &m)?)
}

pub fn improved_linkage_code(field: &Field, n: usize, d: usize, k: usize, n1: Option<usize>) -> Result<Cdc, CliError> {
    let (n1, n2) = split(n, k, n1)?;
    let m = mrd_code(field, k, n2, d / 2).map_err(|e| param(e.to_string()))?;
    let c2 = block(field, n2 + k - d / 2, d, k)?;
    Ok(improved_linkage(&block(field, n1, d, k)?, &c2, &m)?)
}

pub fn generalized_linkage_code(field: &Field, n: usize, d: usize, k: usize, n1: Option<usize>) -> Result<Cdc, CliError> {
    let (n1, n2) = split(n, k, n1)?;
    let m1 = mrd_code(field, k, n2, d / 2).map_err(|e| param(e.to_string()))?;
    let ranks: Vec<usize> = (0..=k - d / 2).collect();
    let m2 = restricted_rank_code(field, k, n1, d / 2, &ranks, EXPLICIT_CAP).map_err(|e| param(e.to_string()))?;
    Ok(generalized_linkage(&block(field, n1, d, k)?, &block(field, n2, d, k)?, &m1, &m2)?)
}

fn zero_or_restricted(field: &Field, rows: usize, cols: usize, delta: usize, top: usize) -> Result<RankCode, CliError> {
    let ranks: Vec<usize> = (0..=top).collect();
    restricted_rank_code(field, rows, cols, delta, &ranks, EXPLICIT_CAP).map_err(|e| param(e.to_string()))
}

/// Block inserting I with MRD-coset packings for the inserted blocks.
pub fn insert1(field: &Field, widths: [usize; 4], k1: usize, k2: usize, d1: usize, d2: usize) -> Result<Cdc, CliError> {
    let d = d1 + d2;
    let [n1, n2, n3, n4] = widths;
    if k1 < d / 2 || k2 < d / 2 {
        return Err(param(format!("need k1, k2 >= d/2 = {}", d / 2)));
    }
    let c1 = block(field, n1, d, k1)?;
    let c2 = block(field, n3, d, k2)?;
    let m3 = zero_or_restricted(field, k1, n4, d / 2, k1 - d / 2)?;
    let m4 = zero_or_restricted(field, k2, n2, d / 2, k2 - d / 2)?;
    let pk1 = RankPacking::from_mrd(field, k1, n2, d1.div_ceil(2).max(1), d / 2)?;
    let pk2 = RankPacking::from_mrd(field, k2, n4, d2.div_ceil(2).max(1), d / 2)?;
    let s = pk1.len().min(pk2.len());
    let p = InsertParams { widths, k1, k2 };
    Ok(block_inserting_i(&p, d1, d2, &c1, &c2, &m3, &m4, &pk1.truncated(s), &pk2.truncated(s))?)
}

/// `{(A, 0)} ∪ {(0, B) : B != 0}` over two MRD codes, keeping sum-ranks at most `top`.
fn split_sumrank(field: &Field, a: (usize, usize), b: (usize, usize), delta: usize, top: usize) -> Result<SumRankCode, CliError> {
    let words = |r: usize, c: usize| -> Result<Vec<MatGF>, CliError> {
        let m = mrd_code(field, r, c, delta).map_err(|e| param(e.to_string()))?;
        m.words(EXPLICIT_CAP).map_err(|e| param(e.to_string()))
    };
    let (za, zb) = (MatGF::zeros(field, a.0, a.1), MatGF::zeros(field, b.0, b.1));
    let mut out: Vec<Vec<MatGF>> = words(a.0, a.1)?.into_iter().filter(|x| x.rank() <= top).map(|x| vec![x, zb.clone()]).collect();
    out.extend(words(b.0, b.1)?.into_iter().filter(|y| !y.is_zero() && y.rank() <= top).map(|y| vec![za.clone(), y]));
    Ok(SumRankCode { field: field.clone(), shapes: vec![a, b], d: delta, ranks: None, words: out })
}

/// Block inserting II over a two-block sum-rank code.
pub fn insert2(field: &Field, widths: [usize; 4], k1: usize, k2: usize, d: usize) -> Result<Cdc, CliError> {
    let [n1, n2, n3, n4] = widths;
    if k1 + k2 < d / 2 {
        return Err(param("need k1 + k2 >= d/2"));
    }
    let m = split_sumrank(field, (k1, n1), (k2, n3), d / 2, k1 + k2 - d / 2)?;
    let p = InsertParams { widths, k1, k2 };
    Ok(block_inserting_ii(&p, d, &m, &block(field, n2, d, k1)?, &block(field, n4, d, k2)?)?)
}

pub fn coset(field: &Field, p1: &DPacking, p2: &DPacking, d: usize) -> Result<Cdc, CliError> {
    let s = p1.len().min(p2.len());
    let (p1, p2) = (p1.truncated(s), p2.truncated(s));
    if p2.n < p2.k {
        return Err(param("second packing has k > n"));
    }
    let m = mrd_code(field, p1.k, p2.n - p2.k, d / 2).map_err(|e| param(e.to_string()))?;
    Ok(coset_construction(&p1, &p2, &m, d)?)
}
