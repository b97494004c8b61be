//! Explicit constant dimension codes: liftings, the linkage family,
//! Echelon-Ferrers codes, partial spreads, the coset construction, block
//! inserting and a combiner that certifies unions of subcodes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::gfq::Field;
use crate::provenance::BoundResult;
use crate::qcombi::{gauss_binomial, qpow, QPolynomial};
use crate::rankmetric::{fdrm_construct, fdrm_upper_bound, mrd_code, mrd_coset_partition, RankCode, RankError, SumRankCode};
use crate::spaces::{
    dual, enumerate_grassmannian, ferrers_of, hamming_distance, permute_columns, MatGF, PivotVector, SpaceError, Subspace,
};
use crate::verify;

/// Codes above this many words are kept implicit (size only).
pub const EXPLICIT_CAP: u64 = 1 << 17;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CdcError {
    Parameters(String),
    Incompatible(String),
    Unsupported(String),
    Data(String),
    Space(SpaceError),
    Rank(RankError),
}

impl fmt::Display for CdcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdcError::Parameters(s) => write!(f, "invalid parameters: {s}"),
            CdcError::Incompatible(s) => write!(f, "incompatible subcodes: {s}"),
            CdcError::Unsupported(s) => write!(f, "unsupported: {s}"),
            CdcError::Data(s) => write!(f, "bad data: {s}"),
            CdcError::Space(e) => write!(f, "{e}"),
            CdcError::Rank(e) => write!(f, "{e}"),
        }
    }
}

impl From<SpaceError> for CdcError {
    fn from(e: SpaceError) -> Self {
        CdcError::Space(e)
    }
}

impl From<RankError> for CdcError {
    fn from(e: RankError) -> Self {
        CdcError::Rank(e)
    }
}

fn param(s: impl Into<String>) -> CdcError {
    CdcError::Parameters(s.into())
}

// ---------------------------------------------------------------------------
// Structural metadata.

/// Possible pivot counts per column block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotProfile {
    pub widths: Vec<usize>,
    pub weights: BTreeSet<Vec<usize>>,
}

impl PivotProfile {
    pub fn new(widths: Vec<usize>, weights: impl IntoIterator<Item = Vec<usize>>) -> Self {
        PivotProfile { widths, weights: weights.into_iter().collect() }
    }

    /// Exact profile of a set of pivot vectors, one block per column.
    pub fn of_vectors<'a>(vectors: impl IntoIterator<Item = &'a PivotVector>) -> Self {
        let weights: BTreeSet<Vec<usize>> =
            vectors.into_iter().map(|v| v.bits().iter().map(|&b| usize::from(b)).collect()).collect();
        let n = weights.iter().next().map_or(0, |w| w.len());
        PivotProfile { widths: vec![1; n], weights }
    }

    pub fn n(&self) -> usize {
        self.widths.iter().sum()
    }

    fn cuts(&self) -> BTreeSet<usize> {
        let mut acc = 0;
        let mut out = BTreeSet::new();
        out.insert(0);
        for w in &self.widths {
            acc += w;
            out.insert(acc);
        }
        out
    }

    fn coarsen(&self, cuts: &BTreeSet<usize>) -> BTreeSet<Vec<usize>> {
        let mut ends = Vec::new();
        let mut acc = 0;
        for w in &self.widths {
            acc += w;
            ends.push(acc);
        }
        self.weights
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                let mut cur = 0;
                for (x, e) in w.iter().zip(&ends) {
                    cur += x;
                    if cuts.contains(e) {
                        out.push(cur);
                        cur = 0;
                    }
                }
                out
            })
            .collect()
    }

    /// Lower bound on the Hamming distance between pivot vectors of the two profiles.
    pub fn distance(&self, other: &PivotProfile) -> Option<usize> {
        if self.n() != other.n() || self.weights.is_empty() || other.weights.is_empty() {
            return None;
        }
        let cuts: BTreeSet<usize> = self.cuts().intersection(&other.cuts()).copied().collect();
        let (a, b) = (self.coarsen(&cuts), other.coarsen(&cuts));
        a.iter()
            .flat_map(|x| b.iter().map(move |y| x.iter().zip(y).map(|(p, q)| p.abs_diff(*q)).sum::<usize>()))
            .min()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartKind {
    Plain,
    ConstructionD,
    GeneralizedLinkage { n1: usize },
    Coset,
    MirroredCoset,
    InsertI,
    InsertII,
}

impl fmt::Display for PartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartKind::Plain => write!(f, "plain"),
            PartKind::ConstructionD => write!(f, "construction D"),
            PartKind::GeneralizedLinkage { n1 } => write!(f, "generalized linkage (n1={n1})"),
            PartKind::Coset => write!(f, "coset"),
            PartKind::MirroredCoset => write!(f, "mirrored coset"),
            PartKind::InsertI => write!(f, "block inserting I"),
            PartKind::InsertII => write!(f, "block inserting II"),
        }
    }
}

/// For every word `U`: `dim(U ∩ E_1) >= left` and `dim(U ∩ E_2) >= right`, where
/// `E_1` is spanned by the first `at` unit vectors and `E_2` by the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub at: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub kind: PartKind,
    pub profile: PivotProfile,
    pub splits: Vec<Split>,
}

impl Part {
    fn new(kind: PartKind, profile: PivotProfile) -> Self {
        Part { kind, profile, splits: Vec::new() }
    }

    fn split(mut self, at: usize, left: usize, right: usize) -> Self {
        self.splits.push(Split { at, left, right });
        self
    }
}

// ---------------------------------------------------------------------------
// Codes.

/// An `(n, d; k)_q` constant dimension code.
#[derive(Debug, Clone)]
pub struct Cdc {
    field: Field,
    n: usize,
    k: usize,
    d: usize,
    size: BigInt,
    words: Option<Vec<Subspace>>,
    pub provenance: BoundResult,
    pub parts: Vec<Part>,
}

fn sort_canonical(words: &mut [Subspace]) {
    words.sort_by_cached_key(|w| (w.n(), w.k(), w.pivot_vector(), w.tableau().data().to_vec()));
}

impl Cdc {
    /// Code from explicit words; dimensions are checked, distance is not.
    pub fn from_words(field: &Field, n: usize, k: usize, d: usize, mut words: Vec<Subspace>, rule: &str) -> Result<Self, CdcError> {
        for w in &words {
            if w.n() != n || w.k() != k {
                return Err(param(format!("word of shape ({}, {}) in an ({n}, {k}) code", w.n(), w.k())));
            }
            if w.field() != field {
                return Err(CdcError::Space(SpaceError::FieldMismatch));
            }
        }
        sort_canonical(&mut words);
        let profile = PivotProfile::of_vectors(&verify::pivot_structure(&words));
        let parts = if words.is_empty() { Vec::new() } else { vec![Part::new(PartKind::Plain, profile)] };
        Ok(Cdc {
            field: field.clone(),
            n,
            k,
            d,
            size: BigInt::from(words.len()),
            words: Some(words),
            provenance: BoundResult::leaf(BigInt::zero(), rule),
            parts,
        }
        .sized())
    }

    /// A code known only by its size.
    pub fn implicit(field: &Field, n: usize, k: usize, d: usize, size: BigInt, rule: &str) -> Self {
        Cdc {
            field: field.clone(),
            n,
            k,
            d,
            size: size.clone(),
            words: None,
            provenance: BoundResult::leaf(size, rule),
            parts: Vec::new(),
        }
    }

    fn sized(mut self) -> Self {
        self.provenance.value = self.size.clone();
        self
    }

    fn with_parts(mut self, parts: Vec<Part>) -> Self {
        self.parts = parts;
        self
    }

    fn with_params(mut self, params: String) -> Self {
        self.provenance.assumptions.push(params);
        self
    }

    fn with_children(mut self, children: Vec<BoundResult>) -> Self {
        self.provenance.children = children;
        self
    }

    fn build(field: &Field, n: usize, k: usize, d: usize, size: BigInt, words: Option<Vec<Subspace>>, rule: &str) -> Self {
        let mut c = Cdc::implicit(field, n, k, d, size, rule);
        if let Some(mut w) = words {
            sort_canonical(&mut w);
            c.size = BigInt::from(w.len());
            c.words = Some(w);
        }
        c.sized()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Declared minimum subspace distance.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn size(&self) -> &BigInt {
        &self.size
    }

    pub fn words(&self) -> Option<&[Subspace]> {
        self.words.as_deref()
    }

    pub fn is_explicit(&self) -> bool {
        self.words.is_some()
    }

    pub fn into_words(self) -> Option<Vec<Subspace>> {
        self.words
    }

    pub fn rule(&self) -> &str {
        &self.provenance.rule
    }

    pub fn label(&self) -> String {
        format!("({}, {}; {})_{} {}", self.n, self.d, self.k, self.q(), self.provenance.rule)
    }

    pub fn pivot_structure(&self) -> Option<BTreeSet<PivotVector>> {
        self.words().map(verify::pivot_structure)
    }

    /// Generator matrices of the words, `None` when implicit.
    fn generators(&self) -> Option<Vec<MatGF>> {
        self.words().map(|w| w.iter().map(|u| u.matrix().clone()).collect())
    }

    /// Orthogonal complements: an `(n, d; n-k)` code.
    pub fn dual(&self) -> Cdc {
        let words = self.words().map(|w| w.iter().map(dual).collect());
        let mut c = Cdc::build(&self.field, self.n, self.n - self.k, self.d, self.size.clone(), words, "dual")
            .with_children(vec![self.provenance.clone()]);
        if let Some(s) = c.pivot_structure() {
            c.parts = vec![Part::new(PartKind::Plain, PivotProfile::of_vectors(&s))];
        }
        c
    }
}

fn explicit_ok(size: &BigInt) -> bool {
    size.to_u64().is_some_and(|s| s <= EXPLICIT_CAP)
}

fn word_list(code: &RankCode) -> Option<Vec<MatGF>> {
    if explicit_ok(&code.size()) {
        code.words(EXPLICIT_CAP).ok()
    } else {
        None
    }
}

fn zero_block(field: &Field, rows: usize, cols: usize) -> MatGF {
    MatGF::zeros(field, rows, cols)
}

fn hcat(parts: &[&MatGF]) -> Result<MatGF, SpaceError> {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.hstack(p)?;
    }
    Ok(acc)
}

/// `<[I_k | M]>`.
pub fn lift(m: &MatGF) -> Subspace {
    let i = MatGF::identity(m.field(), m.rows());
    i.hstack(m).expect("same row count").row_space()
}

fn check_even(d: usize) -> Result<(), CdcError> {
    if d < 2 || d % 2 == 1 {
        return Err(param(format!("subspace distance {d} must be even and at least 2")));
    }
    Ok(())
}

/// Lifted MRD code in `G_q(n, k)` with subspace distance `d`.
pub fn lifted_mrd(field: &Field, n: usize, k: usize, d: usize) -> Result<Cdc, CdcError> {
    check_even(d)?;
    if k > n || d > 2 * k {
        return Err(param(format!("need 2 <= d <= 2k and k <= n, got n={n} k={k} d={d}")));
    }
    let m = mrd_code(field, k, n - k, d / 2)?;
    let words = word_list(&m).map(|ws| ws.iter().map(lift).collect());
    let profile = PivotProfile::new(vec![k, n - k], [vec![k, 0]]);
    Ok(Cdc::build(field, n, k, d, m.size(), words, "lifted MRD")
        .with_params(format!("n={n} k={k} d={d}"))
        .with_parts(vec![Part::new(PartKind::ConstructionD, profile)]))
}

fn check_rank_code(m: &RankCode, rows: usize, cols: usize, d: usize) -> Result<(), CdcError> {
    if m.shape() != (rows, cols) {
        return Err(param(format!("rank-metric code is {:?}, need ({rows}, {cols})", m.shape())));
    }
    if 2 * m.d() < d && m.size() > BigInt::one() {
        return Err(param(format!("rank distance {} is below d/2 = {}", m.d(), d / 2)));
    }
    Ok(())
}

fn product_words(
    gens: Option<Vec<MatGF>>,
    mats: Option<Vec<MatGF>>,
    f: impl Fn(&MatGF, &MatGF) -> Result<MatGF, SpaceError>,
) -> Result<Option<Vec<Subspace>>, CdcError> {
    let (Some(g), Some(m)) = (gens, mats) else { return Ok(None) };
    if !explicit_ok(&BigInt::from(g.len() * m.len())) {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(g.len() * m.len());
    for a in &g {
        for b in &m {
            out.push(f(a, b)?.row_space());
        }
    }
    Ok(Some(out))
}

/// Construction D: `{<[G | M]>}` for `G` in `C` and `M` in `M`.
pub fn construction_d(c: &Cdc, m: &RankCode) -> Result<Cdc, CdcError> {
    let (k, n1) = (c.k, c.n);
    let n2 = m.shape().1;
    check_rank_code(m, k, n2, c.d)?;
    let size = c.size() * m.size();
    let words = product_words(c.generators(), word_list(m), |g, x| g.hstack(x))?;
    let profile = PivotProfile::new(vec![n1, n2], [vec![k, 0]]);
    Ok(Cdc::build(&c.field, n1 + n2, k, c.d, size, words, "construction D")
        .with_params(format!("n1={n1} n2={n2}"))
        .with_children(vec![c.provenance.clone()])
        .with_parts(vec![Part::new(PartKind::ConstructionD, profile)]))
}

/// `[0_{k x left} | G | 0_{k x right}]` for every word.
fn padded(c: &Cdc, left: usize, right: usize) -> Option<Vec<Subspace>> {
    let f = &c.field;
    c.generators().map(|g| {
        g.iter()
            .map(|m| hcat(&[&zero_block(f, c.k, left), m, &zero_block(f, c.k, right)]).unwrap().row_space())
            .collect()
    })
}

fn union_words(a: Option<Vec<Subspace>>, b: Option<Vec<Subspace>>) -> Option<Vec<Subspace>> {
    let (mut a, b) = (a?, b?);
    a.extend(b);
    Some(a)
}

fn same_shape(c1: &Cdc, c2: &Cdc) -> Result<(), CdcError> {
    if c1.k != c2.k || c1.field != c2.field {
        return Err(param("subcodes differ in dimension or field"));
    }
    Ok(())
}

/// Linkage: construction D on `C1` plus `C2` behind `n1` zero columns.
pub fn linkage(c1: &Cdc, c2: &Cdc, m: &RankCode) -> Result<Cdc, CdcError> {
    same_shape(c1, c2)?;
    let d = c1.d.min(c2.d);
    let (n1, n2, k) = (c1.n, c2.n, c1.k);
    let w1 = construction_d(c1, m)?;
    let size = w1.size() + c2.size();
    let words = union_words(w1.words, padded(c2, n1, 0));
    let widths = vec![n1, n2];
    let parts = vec![
        Part::new(PartKind::ConstructionD, PivotProfile::new(widths.clone(), [vec![k, 0]])),
        Part::new(PartKind::Plain, PivotProfile::new(widths, [vec![0, k]])),
    ];
    Ok(Cdc::build(&c1.field, n1 + n2, k, d, size, words, "linkage")
        .with_params(format!("n1={n1} n2={n2}"))
        .with_children(vec![c1.provenance.clone(), c2.provenance.clone()])
        .with_parts(parts))
}

/// Improved linkage: `C2` lives in `n2 + k - d/2` columns behind `n1 - k + d/2` zeros.
pub fn improved_linkage(c1: &Cdc, c2: &Cdc, m: &RankCode) -> Result<Cdc, CdcError> {
    same_shape(c1, c2)?;
    let d = c1.d.min(c2.d);
    check_even(d)?;
    let (n1, k) = (c1.n, c1.k);
    let n2 = m.shape().1;
    if n1 + d / 2 < k {
        return Err(param(format!("zero prefix n1 - k + d/2 is negative for n1={n1} k={k} d={d}")));
    }
    let prefix = n1 + d / 2 - k;
    if c2.n != n2 + k - d / 2 {
        return Err(param(format!("second code must have ambient n2 + k - d/2 = {}", n2 + k - d / 2)));
    }
    let w1 = construction_d(c1, m)?;
    let size = w1.size() + c2.size();
    let words = union_words(w1.words, padded(c2, prefix, 0));
    let widths = vec![n1, n2];
    let tail = (0..=k - d / 2).map(|a| vec![a, k - a]);
    let parts = vec![
        Part::new(PartKind::ConstructionD, PivotProfile::new(widths.clone(), [vec![k, 0]])),
        Part::new(PartKind::Plain, PivotProfile::new(widths, tail)),
    ];
    Ok(Cdc::build(&c1.field, n1 + n2, k, d, size, words, "improved linkage")
        .with_params(format!("n1={n1} n2={n2}"))
        .with_children(vec![c1.provenance.clone(), c2.provenance.clone()])
        .with_parts(parts))
}

/// Generalized linkage: `{[G1 | M1]} ∪ {[M2 | G2]}` with `rk(M2) <= k - d/2`.
pub fn generalized_linkage(c1: &Cdc, c2: &Cdc, m1: &RankCode, m2: &RankCode) -> Result<Cdc, CdcError> {
    same_shape(c1, c2)?;
    let d = c1.d.min(c2.d);
    check_even(d)?;
    let (n1, n2, k) = (c1.n, c2.n, c1.k);
    check_rank_code(m1, k, n2, d)?;
    check_rank_code(m2, k, n1, d)?;
    let top = if m2.is_implicit() {
        *m2.ranks().and_then(|r| r.iter().next_back()).ok_or_else(|| param("implicit M2 needs a declared rank set"))?
    } else {
        m2.max_rank(EXPLICIT_CAP)
    };
    if top + d / 2 > k {
        return Err(param(format!("M2 has a word of rank {top} > k - d/2 = {}", k - d / 2)));
    }
    let w1 = construction_d(c1, m1)?;
    let size = w1.size() + c2.size() * m2.size();
    let w2 = product_words(word_list(m2), c2.generators(), |x, g| x.hstack(g))?;
    let words = union_words(w1.words, w2);
    let weights = core::iter::once(vec![k, 0]).chain((0..=top).map(|a| vec![a, k - a]));
    let part = Part::new(PartKind::GeneralizedLinkage { n1 }, PivotProfile::new(vec![n1, n2], weights));
    Ok(Cdc::build(&c1.field, n1 + n2, k, d, size, words, "generalized linkage")
        .with_params(format!("n1={n1} n2={n2} max rank of M2 {top}"))
        .with_children(vec![c1.provenance.clone(), c2.provenance.clone()])
        .with_parts(vec![part]))
}

/// The code `{U}` for one subspace.
pub fn singleton(u: Subspace, d: usize) -> Cdc {
    let (f, n, k) = (u.field().clone(), u.n(), u.k());
    Cdc::from_words(&f, n, k, d, vec![u], "single word").expect("one word")
}

/// `<e_{n-k+1}, ..., e_n>`, the usual extra codeword next to a lifted MRD code.
pub fn terminal_word(field: &Field, n: usize, k: usize, d: usize) -> Cdc {
    let coords: Vec<usize> = (n - k..n).collect();
    singleton(Subspace::coordinate(field, n, &coords), d)
}

/// The whole Grassmannian, distance 2.
pub fn grassmannian_code(field: &Field, n: usize, k: usize) -> Result<Cdc, CdcError> {
    let words: Vec<Subspace> = enumerate_grassmannian(field, n, k, EXPLICIT_CAP)?.collect();
    Cdc::from_words(field, n, k, 2, words, "Grassmannian")
}

// ---------------------------------------------------------------------------
// Echelon-Ferrers.

/// Binary constant-weight code steering the multilevel construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonCode {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub vectors: Vec<PivotVector>,
}

impl SkeletonCode {
    pub fn new(vectors: Vec<PivotVector>, d: usize) -> Result<Self, CdcError> {
        let first = vectors.first().ok_or_else(|| param("empty skeleton"))?;
        let (n, k) = (first.len(), first.weight());
        for v in &vectors {
            if v.len() != n || v.weight() != k {
                return Err(param(format!("pivot vector {v} has the wrong length or weight")));
            }
        }
        for (i, a) in vectors.iter().enumerate() {
            for b in &vectors[i + 1..] {
                let h = hamming_distance(a, b)?;
                if h < d {
                    return Err(param(format!("pivot vectors {a} and {b} are at Hamming distance {h} < {d}")));
                }
            }
        }
        Ok(SkeletonCode { n, k, d, vectors })
    }

    pub fn parse(list: &str, d: usize) -> Result<Self, CdcError> {
        let vectors = list
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<PivotVector>())
            .collect::<Result<Vec<_>, _>>()?;
        SkeletonCode::new(vectors, d)
    }
}

/// Multilevel construction: the union of lifted FDRM codes, one per skeleton vector.
pub fn echelon_ferrers(field: &Field, s: &SkeletonCode, d: usize) -> Result<Cdc, CdcError> {
    check_even(d)?;
    let s = SkeletonCode::new(s.vectors.clone(), d)?;
    let mut size = BigInt::zero();
    let mut words = Some(Vec::new());
    let mut children = Vec::new();
    for v in &s.vectors {
        let code = fdrm_construct(field, &ferrers_of(v), d / 2)?.code;
        size += code.size();
        children.push(BoundResult::leaf(code.size(), "FDRM").assume(&format!("v={v}")));
        words = match (words, word_list(&code)) {
            (Some(mut acc), Some(ws)) if explicit_ok(&size) => {
                for w in &ws {
                    acc.push(Subspace::from_echelon(v, w)?);
                }
                Some(acc)
            }
            _ => None,
        };
    }
    let part = Part::new(PartKind::Plain, PivotProfile::of_vectors(&s.vectors));
    Ok(Cdc::build(field, s.n, s.k, d, size, words, "Echelon-Ferrers").with_children(children).with_parts(vec![part]))
}

/// Greedy skeleton: vectors by descending FDRM upper bound, ties by descending bit string.
pub fn skeleton_greedy(q: u64, n: usize, k: usize, d: usize) -> Result<SkeletonCode, CdcError> {
    check_even(d)?;
    if k > n || k == 0 {
        return Err(param(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    let mut cands: Vec<(BigInt, PivotVector)> = Vec::new();
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        let v = PivotVector::from_positions(n, &c);
        cands.push((fdrm_upper_bound(&ferrers_of(&v), d / 2, q), v));
        let mut i = k;
        let mut moved = false;
        while i > 0 {
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }
    cands.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| b.1.cmp(&a.1)));
    let mut chosen: Vec<PivotVector> = Vec::new();
    for (_, v) in cands {
        if chosen.iter().all(|w| hamming_distance(&v, w).unwrap() >= d) {
            chosen.push(v);
        }
    }
    SkeletonCode::new(chosen, d)
}

/// Size of the multilevel code on this skeleton without building words.
pub fn echelon_ferrers_size(field: &Field, s: &SkeletonCode, d: usize) -> BigInt {
    let q = field.q() as u64;
    s.vectors
        .iter()
        .map(|v| qpow(q, crate::rankmetric::fdrm_linear_dimension(field, &ferrers_of(v), d / 2) as u64))
        .sum()
}

/// `(q^n - q^k (q^{n mod k} - 1) - 1) / (q^k - 1)`.
pub fn partial_spread_size(q: u64, n: usize, k: usize) -> BigInt {
    let qk = qpow(q, k as u64);
    (qpow(q, n as u64) - &qk * (qpow(q, (n % k) as u64) - 1) - 1) / (qk - 1)
}

/// Partial `k`-spread from the block-disjoint skeleton.
pub fn partial_spread(field: &Field, n: usize, k: usize) -> Result<Cdc, CdcError> {
    if k == 0 || 2 * k > n {
        return Err(param(format!("partial spreads need 2k <= n, got n={n} k={k}")));
    }
    let t = n / k;
    let vectors = (0..t).map(|i| PivotVector::from_positions(n, &(i * k..(i + 1) * k).collect::<Vec<_>>())).collect();
    let s = SkeletonCode::new(vectors, 2 * k)?;
    let mut c = echelon_ferrers(field, &s, 2 * k)?;
    c.provenance.rule = String::from("partial spread");
    Ok(c)
}

// ---------------------------------------------------------------------------
// Packings and parallelisms.

/// Pairwise disjoint subcodes of an `(n, d_outer; k)` code, each of distance `d_inner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DPacking {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub d_outer: usize,
    pub d_inner: usize,
    pub parts: Vec<Vec<Subspace>>,
}

impl DPacking {
    pub fn new(field: &Field, n: usize, k: usize, d_outer: usize, d_inner: usize, parts: Vec<Vec<Subspace>>) -> Result<Self, CdcError> {
        let mut seen = BTreeSet::new();
        for (i, p) in parts.iter().enumerate() {
            for w in p {
                if w.n() != n || w.k() != k || w.field() != field {
                    return Err(CdcError::Data(format!("part {i} has a word outside G({n},{k})")));
                }
                if !seen.insert(w.clone()) {
                    return Err(CdcError::Data(format!("part {i} repeats a word")));
                }
            }
        }
        Ok(DPacking { field: field.clone(), n, k, d_outer, d_inner, parts })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }

    pub fn truncated(&self, s: usize) -> DPacking {
        DPacking { parts: self.parts.iter().take(s).cloned().collect(), ..self.clone() }
    }

    pub fn dual(&self) -> DPacking {
        let parts = self.parts.iter().map(|p| p.iter().map(dual).collect()).collect();
        DPacking { n: self.n, k: self.n - self.k, parts, ..self.clone() }
    }

    /// Brute-force check of both distance claims.
    pub fn check_distances(&self) -> Result<(), CdcError> {
        for (i, p) in self.parts.iter().enumerate() {
            if let Some((a, b, v)) = verify::first_violation(p, self.d_inner)? {
                return Err(CdcError::Data(format!("part {i}: words {a}, {b} at distance {v} < {}", self.d_inner)));
            }
        }
        let all: Vec<Subspace> = self.parts.iter().flatten().cloned().collect();
        if let Some((a, b, v)) = verify::first_violation(&all, self.d_outer)? {
            return Err(CdcError::Data(format!("words {a}, {b} at distance {v} < {}", self.d_outer)));
        }
        Ok(())
    }
}

/// `sum_i a_i b_i`.
pub fn coset_sum(a: &[usize], b: &[usize]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| BigInt::from(*x) * BigInt::from(*y)).sum()
}

/// A partition of `G_q(n, k)` into spreads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parallelism {
    packing: DPacking,
}

impl Parallelism {
    pub fn from_parts(field: &Field, n: usize, k: usize, parts: Vec<Vec<Subspace>>) -> Result<Self, CdcError> {
        let q = field.q() as u64;
        if k == 0 || !n.is_multiple_of(k) {
            return Err(CdcError::Data(format!("no spreads of {k}-spaces in dimension {n}")));
        }
        let spread = (qpow(q, n as u64) - 1) / (qpow(q, k as u64) - 1);
        let total = gauss_binomial(n as i64, k as i64, q);
        let packing = DPacking::new(field, n, k, 2, 2 * k, parts)?;
        for (i, p) in packing.parts.iter().enumerate() {
            if BigInt::from(p.len()) != spread {
                return Err(CdcError::Data(format!("part {i} has {} words, a spread has {spread}", p.len())));
            }
            let cov = verify::is_partial_spread(p)?;
            if !cov.is_partial_spread {
                return Err(CdcError::Data(format!("part {i} is not a spread")));
            }
        }
        let count: usize = packing.part_sizes().iter().sum();
        if BigInt::from(count) != total {
            return Err(CdcError::Data(format!("parts cover {count} of {total} subspaces")));
        }
        Ok(Parallelism { packing })
    }

    pub fn packing(&self) -> &DPacking {
        &self.packing
    }

    pub fn into_packing(self) -> DPacking {
        self.packing
    }
}

/// Exact-cover helper: rows are bitsets over `cols` columns.
fn exact_covers(rows: &[Vec<usize>], cols: usize, want: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for &c in r {
            by_col[c].push(i);
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; cols];
    let mut chosen = Vec::new();
    cover(rows, &by_col, &mut used, &mut chosen, want, limit, &mut out);
    out
}

fn cover(
    rows: &[Vec<usize>],
    by_col: &[Vec<usize>],
    used: &mut [bool],
    chosen: &mut Vec<usize>,
    want: usize,
    limit: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if out.len() >= limit {
        return;
    }
    // Column with the fewest live rows.
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (c, cands) in by_col.iter().enumerate() {
        if used[c] {
            continue;
        }
        let live: Vec<usize> = cands.iter().copied().filter(|&r| rows[r].iter().all(|&x| !used[x])).collect();
        if best.as_ref().is_none_or(|(_, b)| live.len() < b.len()) {
            best = Some((c, live));
        }
    }
    let Some((_, live)) = best else {
        if chosen.len() == want {
            out.push(chosen.clone());
        }
        return;
    };
    for r in live {
        for &x in &rows[r] {
            used[x] = true;
        }
        chosen.push(r);
        cover(rows, by_col, used, chosen, want, limit, out);
        chosen.pop();
        for &x in &rows[r] {
            used[x] = false;
        }
        if out.len() >= limit {
            return;
        }
    }
}

fn point_index(points: &BTreeMap<Vec<u32>, usize>, w: &Subspace) -> Result<Vec<usize>, CdcError> {
    let cov = verify::is_partial_spread(core::slice::from_ref(w))?;
    Ok(cov.multiplicity.keys().map(|p| points[p]).collect())
}

/// Parallelism by exact-cover search. Only `G_2(4, 2)` is searched.
pub fn find_parallelism(field: &Field, n: usize, k: usize) -> Result<Parallelism, CdcError> {
    if (field.q(), n, k) != (2, 4, 2) {
        return Err(CdcError::Unsupported(format!(
            "parallelism search only runs for G_2(4,2); load G_{}({n},{k}) from a packing file",
            field.q()
        )));
    }
    let lines: Vec<Subspace> = enumerate_grassmannian(field, n, k, 1000)?.collect();
    let full = verify::is_partial_spread(&[Subspace::full(field, n)])?;
    let points: BTreeMap<Vec<u32>, usize> = full.multiplicity.keys().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let line_pts = lines.iter().map(|l| point_index(&points, l)).collect::<Result<Vec<_>, _>>()?;
    let per_spread = points.len() / ((1 << k) - 1);
    let spreads = exact_covers(&line_pts, points.len(), per_spread, usize::MAX);
    let classes = exact_covers(&spreads, lines.len(), lines.len() / per_spread, 1);
    let pick = classes.first().ok_or_else(|| CdcError::Data(String::from("no parallelism found")))?;
    let parts = pick.iter().map(|&s| spreads[s].iter().map(|&l| lines[l].clone()).collect()).collect();
    Parallelism::from_parts(field, n, k, parts)
}

/// One row of a coset packing table: a skeleton and how many parts use it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingRow {
    pub skeleton: Vec<PivotVector>,
    pub count: QPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingTable {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<PackingRow>,
}

const COSETS_5_2: &str = "\
11000,00110 | q^2
11000,00101 | q
11000,00011 | 1
11000 | q^3-q^2-q-1
10100,01010 | q^2
10100,01001 | q^2
10100 | q^3-2q^2
01100,10010 | q^2
10010 | q^3-q^2
10001 | q^3
";

const COSETS_6_2: &str = "\
110000,001100,000011 | 1
110000,001100 | q^2-1
110000,001010,000101 | q
110000,001010 | q^2-q
110000,000110,001001 | q
110000,001001 | q^2-q
110000 | q^4-3q^2
101000,010100 | q^3
101000,010010 | q^3
101000 | q^4-2q^3
011000,100100 | q^3
100100,010001 | q^3
100100 | q^4-2q^3
100010 | q^4
100001 | q^4
";

impl PackingTable {
    /// Rows `v1,v2,... | count polynomial`; `#` comments.
    pub fn parse(text: &str) -> Result<Self, CdcError> {
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (sk, count) = line.split_once('|').ok_or_else(|| CdcError::Data(format!("missing '|' in {line}")))?;
            let skeleton = sk
                .split(',')
                .map(|s| s.trim().parse::<PivotVector>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CdcError::Data(e.to_string()))?;
            let count = count.trim().parse::<QPolynomial>().map_err(|e| CdcError::Data(e.to_string()))?;
            rows.push(PackingRow { skeleton, count });
        }
        let first = rows.first().and_then(|r| r.skeleton.first()).ok_or_else(|| CdcError::Data(String::from("empty table")))?;
        let (n, k) = (first.len(), first.weight());
        if rows.iter().flat_map(|r| &r.skeleton).any(|v| v.len() != n || v.weight() != k) {
            return Err(CdcError::Data(String::from("mixed pivot vector shapes")));
        }
        Ok(PackingTable { n, k, rows })
    }

    /// Built-in packing of `G_q(5, 2)` with inner distance 4.
    pub fn cosets_5_2() -> Self {
        PackingTable::parse(COSETS_5_2).expect("built-in table")
    }

    /// Built-in packing of `G_q(6, 2)` with inner distance 4.
    pub fn cosets_6_2() -> Self {
        PackingTable::parse(COSETS_6_2).expect("built-in table")
    }
}

/// Cosets of the linear distance-2 FDRM code on `v`, as lifted word lists.
fn fdrm_cosets(field: &Field, v: &PivotVector, delta: usize) -> Result<Vec<Vec<Subspace>>, CdcError> {
    let fd = ferrers_of(v);
    let code = fdrm_construct(field, &fd, delta)?.code;
    let basis = code.basis().ok_or_else(|| CdcError::Unsupported(format!("FDRM code on {v} is not linear")))?.to_vec();
    let dots = fd.dots();
    let (k, w) = (fd.rows(), fd.width());
    let flat = |m: &MatGF| -> Vec<u32> { dots.iter().map(|&(r, c)| m.get(r, c)).collect() };
    let rows: Vec<Vec<u32>> = basis.iter().map(flat).collect();
    let pivots = if rows.is_empty() {
        Vec::new()
    } else {
        let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
        MatGF::from_rows(field, &refs)?.rref().1
    };
    let reps: Vec<MatGF> = (0..dots.len())
        .filter(|i| !pivots.contains(i))
        .map(|i| {
            let mut m = MatGF::zeros(field, k, w);
            m.set(dots[i].0, dots[i].1, 1);
            m
        })
        .collect();
    let zero = MatGF::zeros(field, k, w);
    let shifts = RankCode::linear(field, k, w, 1, reps, None)?.words(u64::MAX)?;
    let mut out = Vec::with_capacity(shifts.len());
    for s in shifts {
        let coset = RankCode::linear(field, k, w, delta, basis.clone(), Some(s))?;
        let words = coset.words(u64::MAX)?;
        out.push(words.iter().map(|m| Subspace::from_echelon(v, m)).collect::<Result<Vec<_>, _>>()?);
    }
    let _ = zero;
    Ok(out)
}

/// Builds a distance-4 packing of `G_q(n, k)` from a coset table.
pub fn packing_from_table(field: &Field, table: &PackingTable) -> Result<DPacking, CdcError> {
    let q = field.q() as u64;
    let mut pools: BTreeMap<PivotVector, (Vec<Vec<Subspace>>, usize)> = BTreeMap::new();
    for v in table.rows.iter().flat_map(|r| &r.skeleton) {
        if !pools.contains_key(v) {
            pools.insert(v.clone(), (fdrm_cosets(field, v, 2)?, 0));
        }
    }
    let mut parts = Vec::new();
    for row in &table.rows {
        let count = row.count.eval(q);
        if count.is_negative() {
            return Err(CdcError::Data(format!("negative part count {count} at q={q}")));
        }
        for _ in 0..count.to_usize().unwrap_or(usize::MAX) {
            let mut part = Vec::new();
            for v in &row.skeleton {
                let (cosets, next) = pools.get_mut(v).unwrap();
                let c = cosets.get(*next).ok_or_else(|| CdcError::Data(format!("out of cosets for {v}")))?;
                part.extend(c.iter().cloned());
                *next += 1;
            }
            parts.push(part);
        }
    }
    DPacking::new(field, table.n, table.k, 2, 4, parts)
}

// ---------------------------------------------------------------------------
// Coset construction.

fn check_packings(p1: &DPacking, p2: &DPacking, d: usize) -> Result<(), CdcError> {
    if p1.len() != p2.len() {
        return Err(param(format!("packings have {} and {} parts", p1.len(), p2.len())));
    }
    if p1.field != p2.field {
        return Err(CdcError::Space(SpaceError::FieldMismatch));
    }
    if p1.d_inner < d || p2.d_inner < d || p1.d_outer + p2.d_outer < d {
        return Err(param(format!(
            "packing distances ({}, {}) inner and ({}, {}) outer do not reach d={d}",
            p1.d_inner, p2.d_inner, p1.d_outer, p2.d_outer
        )));
    }
    Ok(())
}

fn coset_words(p1: &DPacking, p2: &DPacking, mats: &[MatGF]) -> Result<Vec<Subspace>, CdcError> {
    let f = &p1.field;
    let (n2, k1) = (p2.n, p1.k);
    let mut out = Vec::new();
    for (c1, c2) in p1.parts.iter().zip(&p2.parts) {
        for g2 in c2 {
            let lower = zero_block(f, p2.k, p1.n).hstack(g2.matrix())?;
            let phis = mats.iter().map(|m| m.spread_columns(n2, g2.pivots())).collect::<Result<Vec<_>, _>>()?;
            for g1 in c1 {
                for phi in &phis {
                    let upper = g1.matrix().hstack(phi)?;
                    out.push(upper.vstack(&lower)?.row_space());
                }
            }
        }
    }
    debug_assert!(out.iter().all(|u| u.k() == k1 + p2.k));
    Ok(out)
}

/// Coset construction: `<[[G1, phi_{G2}(M)], [0, G2]]>` over matched parts.
pub fn coset_construction(p1: &DPacking, p2: &DPacking, m: &RankCode, d: usize) -> Result<Cdc, CdcError> {
    check_even(d)?;
    check_packings(p1, p2, d)?;
    let (n1, n2, k1, k2) = (p1.n, p2.n, p1.k, p2.k);
    if n2 < k2 {
        return Err(param("second packing has k2 > n2"));
    }
    check_rank_code(m, k1, n2 - k2, d)?;
    let sum = coset_sum(&p1.part_sizes(), &p2.part_sizes());
    let size = m.size() * &sum;
    let words = match word_list(m) {
        Some(mats) if explicit_ok(&size) => Some(coset_words(p1, p2, &mats)?),
        _ => None,
    };
    let top = m.max_rank(EXPLICIT_CAP);
    let part = Part::new(PartKind::Coset, PivotProfile::new(vec![n1, n2], [vec![k1, k2]])).split(n1, k1.saturating_sub(top), k2);
    Ok(Cdc::build(&p1.field, n1 + n2, k1 + k2, d, size, words, "coset construction")
        .with_params(format!("n1={n1} n2={n2} k1={k1} k2={k2} parts={} sum={sum}", p1.len()))
        .with_parts(vec![part]))
}

/// The coset construction with the column blocks swapped:
/// `<[[G1, 0], [phi_{G1}(M), G2]]>` with `M` of shape `k2 x (n1 - k1)`.
pub fn mirrored_coset_construction(p1: &DPacking, p2: &DPacking, m: &RankCode, d: usize) -> Result<Cdc, CdcError> {
    let inner = coset_construction(p2, p1, m, d)?;
    let (n1, n2, k1, k2) = (p1.n, p2.n, p1.k, p2.k);
    // Column j of [n2 | n1] moves to the mirrored position in [n1 | n2].
    let perm: Vec<usize> = (0..n1 + n2).map(|j| if j < n2 { n1 + j } else { j - n2 }).collect();
    let words = match inner.words() {
        Some(ws) => Some(ws.iter().map(|u| permute_columns(u, &perm)).collect::<Result<Vec<_>, _>>()?),
        None => None,
    };
    let top = m.max_rank(EXPLICIT_CAP);
    let profile = PivotProfile::new(vec![n1, n2], (0..=top.min(k2)).map(|a| vec![k1 + a, k2 - a]));
    let part = Part::new(PartKind::MirroredCoset, profile).split(n1, k1, k2.saturating_sub(top));
    Ok(Cdc::build(&p1.field, n1 + n2, k1 + k2, d, inner.size().clone(), words, "mirrored coset construction")
        .with_params(format!("n1={n1} n2={n2} k1={k1} k2={k2}"))
        .with_parts(vec![part]))
}

// ---------------------------------------------------------------------------
// Block inserting.

/// Pairwise disjoint rank-metric subcodes of a code with distance `ambient_d`.
#[derive(Debug, Clone)]
pub struct RankPacking {
    pub ambient_d: usize,
    pub parts: Vec<RankCode>,
}

impl RankPacking {
    /// Cosets of the distance-`d_inner` MRD code in the distance-`d_outer` one.
    pub fn from_mrd(field: &Field, m: usize, n: usize, d_outer: usize, d_inner: usize) -> Result<Self, CdcError> {
        Ok(RankPacking { ambient_d: d_outer, parts: mrd_coset_partition(field, m, n, d_outer, d_inner)? })
    }

    pub fn truncated(&self, s: usize) -> Self {
        RankPacking { ambient_d: self.ambient_d, parts: self.parts.iter().take(s).cloned().collect() }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InsertParams {
    pub widths: [usize; 4],
    pub k1: usize,
    pub k2: usize,
}

fn bounded_rank(m: &RankCode, bound: usize, what: &str) -> Result<usize, CdcError> {
    let top = m.max_rank(EXPLICIT_CAP);
    if top > bound {
        return Err(param(format!("{what} has a word of rank {top} above {bound}")));
    }
    Ok(top)
}

/// Block inserting construction I:
/// `<[[G1, M1, 0, M3], [0, M4, G2, M2]]>` with `M1`, `M2` from matched parts.
#[allow(clippy::too_many_arguments)]
pub fn block_inserting_i(
    p: &InsertParams,
    d1: usize,
    d2: usize,
    c1: &Cdc,
    c2: &Cdc,
    m3: &RankCode,
    m4: &RankCode,
    pk1: &RankPacking,
    pk2: &RankPacking,
) -> Result<Cdc, CdcError> {
    let d = d1 + d2;
    check_even(d)?;
    let [n1, n2, n3, n4] = p.widths;
    let (k1, k2) = (p.k1, p.k2);
    if (c1.n, c1.k, c2.n, c2.k) != (n1, k1, n3, k2) || c1.d < d || c2.d < d {
        return Err(param("C1 must be (n1, d; k1) and C2 (n3, d; k2)"));
    }
    if k1 < d / 2 || k2 < d / 2 {
        return Err(param("need k1, k2 >= d/2"));
    }
    check_rank_code(m3, k1, n4, d)?;
    check_rank_code(m4, k2, n2, d)?;
    let r3 = bounded_rank(m3, k1 - d / 2, "M3")?;
    let r4 = bounded_rank(m4, k2 - d / 2, "M4")?;
    if pk1.len() != pk2.len() {
        return Err(param(format!("rank packings have {} and {} parts", pk1.len(), pk2.len())));
    }
    if 2 * pk1.ambient_d < d1 || 2 * pk2.ambient_d < d2 {
        return Err(param("packing ambient distances below d1/2, d2/2"));
    }
    for (x, rows, cols) in pk1.parts.iter().map(|x| (x, k1, n2)).chain(pk2.parts.iter().map(|x| (x, k2, n4))) {
        check_rank_code(x, rows, cols, d)?;
    }
    let f = &c1.field;
    let sum: BigInt = pk1.parts.iter().zip(&pk2.parts).map(|(a, b)| a.size() * b.size()).sum();
    let size = c1.size() * c2.size() * m3.size() * m4.size() * &sum;
    let words = if explicit_ok(&size) {
        let (g1s, g2s) = (c1.generators(), c2.generators());
        let (w3, w4) = (word_list(m3), word_list(m4));
        match (g1s, g2s, w3, w4) {
            (Some(g1s), Some(g2s), Some(w3), Some(w4)) => {
                let mut out = Vec::new();
                for (a, b) in pk1.parts.iter().zip(&pk2.parts) {
                    let (wa, wb) = (a.words(EXPLICIT_CAP)?, b.words(EXPLICIT_CAP)?);
                    for g1 in &g1s {
                        for x1 in &wa {
                            for x3 in &w3 {
                                let top = hcat(&[g1, x1, &zero_block(f, k1, n3), x3])?;
                                for g2 in &g2s {
                                    for x4 in &w4 {
                                        for x2 in &wb {
                                            let bottom = hcat(&[&zero_block(f, k2, n1), x4, g2, x2])?;
                                            out.push(top.vstack(&bottom)?.row_space());
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                Some(out)
            }
            _ => None,
        }
    } else {
        None
    };
    let profile = PivotProfile::new(p.widths.to_vec(), (0..=r4).map(|a| vec![k1, a, k2 - a, 0]));
    let part = Part::new(PartKind::InsertI, profile).split(n1 + n2, k1 - r3, k2 - r4);
    Ok(Cdc::build(f, n1 + n2 + n3 + n4, k1 + k2, d, size, words, "block inserting I")
        .with_params(format!("widths={:?} d1={d1} d2={d2} k1={k1} k2={k2} parts={}", p.widths, pk1.len()))
        .with_children(vec![c1.provenance.clone(), c2.provenance.clone()])
        .with_parts(vec![part]))
}

/// Block inserting construction II: `<[[M1, G1, 0, 0], [0, 0, M2, G2]]>` with
/// `(M1, M2)` from a sum-rank code.
pub fn block_inserting_ii(p: &InsertParams, d: usize, m: &SumRankCode, c1: &Cdc, c2: &Cdc) -> Result<Cdc, CdcError> {
    check_even(d)?;
    let [n1, n2, n3, n4] = p.widths;
    let (k1, k2) = (p.k1, p.k2);
    if (c1.n, c1.k, c2.n, c2.k) != (n2, k1, n4, k2) || c1.d < d || c2.d < d {
        return Err(param("C1 must be (n2, d; k1) and C2 (n4, d; k2)"));
    }
    if m.shapes != [(k1, n1), (k2, n3)] {
        return Err(param(format!("sum-rank blocks {:?} do not match", m.shapes)));
    }
    if 2 * m.d < d && m.size() > 1 {
        return Err(param("sum-rank distance below d/2"));
    }
    let pairs: BTreeSet<(usize, usize)> = m.words.iter().map(|w| (w[0].rank(), w[1].rank())).collect();
    if let Some((a, b)) = pairs.iter().find(|(a, b)| a + b + d / 2 > k1 + k2) {
        return Err(param(format!("sum-rank word of rank {} exceeds k1 + k2 - d/2", a + b)));
    }
    let f = &c1.field;
    let size = c1.size() * c2.size() * BigInt::from(m.size());
    let words = match (c1.generators(), c2.generators()) {
        (Some(g1s), Some(g2s)) if explicit_ok(&size) => {
            let mut out = Vec::new();
            for w in &m.words {
                for g1 in &g1s {
                    let top = hcat(&[&w[0], g1, &zero_block(f, k1, n3 + n4)])?;
                    for g2 in &g2s {
                        let bottom = hcat(&[&zero_block(f, k2, n1 + n2), &w[1], g2])?;
                        out.push(top.vstack(&bottom)?.row_space());
                    }
                }
            }
            Some(out)
        }
        _ => None,
    };
    let profile = PivotProfile::new(p.widths.to_vec(), pairs.iter().map(|&(a, b)| vec![a, k1 - a, b, k2 - b]));
    let part = Part::new(PartKind::InsertII, profile).split(n1 + n2, k1, k2);
    Ok(Cdc::build(f, n1 + n2 + n3 + n4, k1 + k2, d, size, words, "block inserting II")
        .with_params(format!("widths={:?} d={d} k1={k1} k2={k2}", p.widths))
        .with_children(vec![c1.provenance.clone(), c2.provenance.clone()])
        .with_parts(vec![part]))
}

// ---------------------------------------------------------------------------
// Combining subcodes.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certify {
    /// Structural lemmas only.
    Lemmas,
    /// Lemmas, then brute force on explicit subcodes.
    LemmasThenBruteForce,
    /// Brute force only.
    BruteForce,
}

fn is_mirror_clash(a: PartKind, b: PartKind) -> bool {
    matches!((a, b), (PartKind::MirroredCoset, PartKind::Coset) | (PartKind::Coset, PartKind::MirroredCoset))
}

fn linkage_split_ok(kind: PartKind, other: &Part, d: usize) -> bool {
    match kind {
        PartKind::GeneralizedLinkage { n1 } => {
            other.splits.iter().any(|s| s.at == n1 && s.left >= d / 2 && s.right >= d / 2)
        }
        _ => false,
    }
}

fn part_pair_certificate(a: &Part, b: &Part, d: usize) -> Option<&'static str> {
    if let Some(h) = a.profile.distance(&b.profile) {
        if h >= d {
            return Some("pivot structure");
        }
    }
    if linkage_split_ok(a.kind, b, d) || linkage_split_ok(b.kind, a, d) {
        return Some("generalized linkage subspaces");
    }
    None
}

/// `min dim(U ∩ E_1), min dim(U ∩ E_2)` over explicit words for the split at `at`.
fn measured_split(words: &[Subspace], at: usize) -> (usize, usize) {
    let mut left = usize::MAX;
    let mut right = usize::MAX;
    for u in words {
        let m = u.matrix();
        let k = u.k();
        let tail: Vec<usize> = (at..u.n()).collect();
        let head: Vec<usize> = (0..at).collect();
        left = left.min(k - m.select_columns(&tail).rank());
        right = right.min(k - m.select_columns(&head).rank());
    }
    (left, right)
}

fn certify_pair(a: &Cdc, b: &Cdc, d: usize, mode: Certify) -> Result<String, CdcError> {
    let clash = a.parts.iter().any(|x| b.parts.iter().any(|y| is_mirror_clash(x.kind, y.kind)));
    if mode != Certify::BruteForce && !clash {
        if !a.parts.is_empty()
            && !b.parts.is_empty()
            && a.parts.iter().all(|x| b.parts.iter().all(|y| part_pair_certificate(x, y, d).is_some()))
        {
            let mut names: Vec<&str> =
                a.parts.iter().flat_map(|x| b.parts.iter().filter_map(move |y| part_pair_certificate(x, y, d))).collect();
            names.sort_unstable();
            names.dedup();
            return Ok(names.join(", "));
        }
        if let (Some(sa), Some(sb)) = (a.pivot_structure(), b.pivot_structure()) {
            let h = sa.iter().flat_map(|x| sb.iter().map(move |y| hamming_distance(x, y).unwrap())).min();
            if h.is_none_or(|h| h >= d) {
                return Ok(String::from("measured pivot structure"));
            }
        }
        for (g, other) in [(a, b), (b, a)] {
            for p in &g.parts {
                if let (PartKind::GeneralizedLinkage { n1 }, Some(ws)) = (p.kind, other.words()) {
                    let (l, r) = measured_split(ws, n1);
                    if l >= d / 2 && r >= d / 2 && g.parts.len() == 1 {
                        return Ok(String::from("measured generalized linkage subspaces"));
                    }
                }
            }
        }
    }
    if mode == Certify::Lemmas {
        let why = if clash { "a mirrored coset subcode is never combined with a standard coset subcode by lemma" } else { "no lemma applies" };
        return Err(CdcError::Incompatible(format!("{} and {}: {why}", a.rule(), b.rule())));
    }
    match (a.words(), b.words()) {
        (Some(wa), Some(wb)) => match verify::first_cross_violation(wa, wb, d)? {
            None => Ok(String::from("brute force")),
            Some((i, j, v)) => Err(CdcError::Incompatible(format!(
                "{} word {i} and {} word {j} are at distance {v} < {d}",
                a.rule(),
                b.rule()
            ))),
        },
        _ => Err(CdcError::Incompatible(format!(
            "{} and {}: no lemma applies and the codes are not explicit",
            a.rule(),
            b.rule()
        ))),
    }
}

/// Union of subcodes with pairwise cross distance `>= d`, certified per pair.
pub fn combine(subcodes: &[Cdc], d: usize, mode: Certify) -> Result<Cdc, CdcError> {
    let first = subcodes.first().ok_or_else(|| param("nothing to combine"))?;
    if subcodes.len() == 1 {
        return Ok(first.clone());
    }
    for c in subcodes {
        if c.n != first.n || c.k != first.k || c.field != first.field {
            return Err(param("subcodes live in different Grassmannians"));
        }
        if c.d < d {
            return Err(param(format!("{} only has distance {}", c.rule(), c.d)));
        }
    }
    let mut certs = Vec::new();
    for i in 0..subcodes.len() {
        for j in i + 1..subcodes.len() {
            let why = certify_pair(&subcodes[i], &subcodes[j], d, mode)?;
            certs.push(format!("{}+{}: {why}", subcodes[i].rule(), subcodes[j].rule()));
        }
    }
    let size: BigInt = subcodes.iter().map(|c| c.size()).sum();
    let words = subcodes.iter().try_fold(Vec::new(), |mut acc, c| {
        acc.extend(c.words()?.iter().cloned());
        Some(acc)
    });
    let words = words.filter(|_| explicit_ok(&size));
    let mut out = Cdc::build(&first.field, first.n, first.k, d, size, words, "union")
        .with_children(subcodes.iter().map(|c| c.provenance.clone()).collect())
        .with_parts(subcodes.iter().flat_map(|c| c.parts.iter().cloned()).collect());
    out.provenance.assumptions = certs;
    Ok(out)
}

/// Lifted MRD `(8,4;4)` plus the coset code from a parallelism of `G_2(4,2)` plus
/// one extra codeword: 4797 words at `q = 2`.
pub fn assemble_coset_8_4_4(field: &Field) -> Result<Cdc, CdcError> {
    let lmrd = lifted_mrd(field, 8, 4, 4)?;
    let par = find_parallelism(field, 4, 2)?;
    let m = mrd_code(field, 2, 2, 2)?;
    let coset = coset_construction(par.packing(), par.packing(), &m, 4)?;
    let extra = terminal_word(field, 8, 4, 4);
    let mut c = combine(&[lmrd, coset, extra], 4, Certify::Lemmas)?;
    c.provenance.rule = String::from("coset assembly");
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::FieldSpec;

    fn gf2() -> Field {
        FieldSpec::of_order(2).unwrap()
    }

    #[test]
    fn profile_distance_coarsens() {
        let a = PivotProfile::new(vec![4, 4], [vec![4, 0]]);
        let b = PivotProfile::new(vec![4, 4], [vec![2, 2]]);
        assert_eq!(a.distance(&b), Some(4));
        let v: PivotVector = "00001111".parse().unwrap();
        let c = PivotProfile::of_vectors([&v]);
        assert_eq!(a.distance(&c), Some(8));
        let e = PivotProfile::new(vec![8], [vec![4]]);
        assert_eq!(a.distance(&e), Some(0));
    }

    #[test]
    fn small_lift() {
        let f = gf2();
        let u = lift(&MatGF::zeros(&f, 2, 3));
        assert_eq!(u, Subspace::coordinate(&f, 5, &[0, 1]));
        let c = lifted_mrd(&f, 4, 2, 4).unwrap();
        assert_eq!(c.size(), &BigInt::from(4));
    }

    #[test]
    fn spread_sizes() {
        assert_eq!(partial_spread_size(2, 7, 3), BigInt::from(17));
        assert_eq!(partial_spread_size(2, 6, 3), BigInt::from(9));
        assert_eq!(partial_spread_size(3, 8, 3), BigInt::from(244));
    }

    #[test]
    fn tables_parse() {
        let t = PackingTable::cosets_6_2();
        assert_eq!((t.n, t.k, t.rows.len()), (6, 2, 15));
        assert_eq!(PackingTable::cosets_5_2().rows.len(), 10);
    }
}
