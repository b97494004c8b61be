use scodes_core::constructions::*;
use scodes_core::gfq::{Field, FieldSpec};
use scodes_core::rankmetric::{mrd_code, RankCode, SumRankCode};
use scodes_core::spaces::{PivotVector, Subspace};
use scodes_core::verify::{self, Mode};
use scodes_core::BigInt;

fn gf(q: u64) -> Field {
    FieldSpec::of_order(q).unwrap()
}

fn exact_min(c: &Cdc) -> Option<usize> {
    verify::min_distance(c, Mode::Exact { cap: 1 << 20 }).unwrap().min_distance
}

fn full(f: &Field, n: usize, d: usize) -> Cdc {
    Cdc::from_words(f, n, n, d, vec![Subspace::full(f, n)], "full space").unwrap()
}

#[test]
fn linkage_8_6_4() {
    let f = gf(2);
    let m = mrd_code(&f, 4, 4, 3).unwrap();
    let c = linkage(&full(&f, 4, 6), &full(&f, 4, 6), &m).unwrap();
    assert_eq!(c.size(), &BigInt::from(257));
    assert_eq!(exact_min(&c), Some(6));
}

#[test]
fn lifted_mrd_plus_terminal_word() {
    let f = gf(2);
    let a = lifted_mrd(&f, 7, 3, 4).unwrap();
    assert_eq!(a.size(), &BigInt::from(256));
    let b = terminal_word(&f, 7, 3, 4);
    let c = combine(&[a, b], 4, Certify::Lemmas).unwrap();
    assert_eq!(c.size(), &BigInt::from(257));
    assert_eq!(exact_min(&c), Some(4));
}

#[test]
fn improved_linkage_counts() {
    let f = gf(2);
    // Second code lives on n2 + k - d/2 = 4 columns.
    let c2 = Cdc::from_words(&f, 4, 3, 4, vec![Subspace::coordinate(&f, 4, &[1, 2, 3])], "one").unwrap();
    let m = mrd_code(&f, 3, 3, 2).unwrap();
    let c = improved_linkage(&full(&f, 3, 4), &c2, &m).unwrap();
    assert_eq!(c.size(), &BigInt::from(65));
    assert_eq!(exact_min(&c), Some(4));
    assert!(improved_linkage(&full(&f, 3, 4), &full(&f, 3, 4), &m).is_err());
}

#[test]
fn echelon_ferrers_and_spreads() {
    let f = gf(2);
    let s = skeleton_greedy(2, 6, 3, 4).unwrap();
    assert_eq!(s.vectors[0], "111000".parse::<PivotVector>().unwrap());
    let c = echelon_ferrers(&f, &s, 4).unwrap();
    assert_eq!(c.size(), &echelon_ferrers_size(&f, &s, 4));
    assert_eq!(exact_min(&c), Some(4));
    assert_eq!(c.size(), &BigInt::from(71));

    let p = partial_spread(&f, 7, 3).unwrap();
    assert_eq!(p.size(), &BigInt::from(17));
    let cov = verify::is_partial_spread(p.words().unwrap()).unwrap();
    assert!(cov.is_partial_spread);
    assert_eq!(exact_min(&p), Some(6));

    let p3 = partial_spread(&gf(3), 6, 2).unwrap();
    assert_eq!(p3.size(), &BigInt::from(91));
    assert!(verify::is_partial_spread(p3.words().unwrap()).unwrap().is_partial_spread);
}

#[test]
fn parallelism_of_g_4_2() {
    let f = gf(2);
    let par = find_parallelism(&f, 4, 2).unwrap();
    assert_eq!(par.packing().part_sizes(), vec![5; 7]);
    assert!(find_parallelism(&gf(3), 4, 2).is_err());
}

#[test]
fn coset_construction_seven_hundred() {
    let f = gf(2);
    let par = find_parallelism(&f, 4, 2).unwrap();
    let m = mrd_code(&f, 2, 2, 2).unwrap();
    let c = coset_construction(par.packing(), par.packing(), &m, 4).unwrap();
    assert_eq!(c.size(), &BigInt::from(700));
    assert_eq!(exact_min(&c), Some(4));
    let mirrored = mirrored_coset_construction(par.packing(), par.packing(), &m, 4).unwrap();
    assert_eq!(exact_min(&mirrored), Some(4));
    assert!(combine(&[c.clone(), mirrored.clone()], 4, Certify::Lemmas).is_err());
}

#[test]
fn packing_tables() {
    let f = gf(2);
    let p = packing_from_table(&f, &PackingTable::cosets_5_2()).unwrap();
    p.check_distances().unwrap();
    let total: usize = p.part_sizes().iter().sum();
    assert_eq!(total, 155);
    let sum = coset_sum(&p.part_sizes(), &p.part_sizes());
    assert_eq!(sum, BigInt::from(1043));
    let p6 = packing_from_table(&f, &PackingTable::cosets_6_2()).unwrap();
    p6.check_distances().unwrap();
    assert_eq!(coset_sum(&p6.part_sizes(), &p6.part_sizes()), BigInt::from(8645));
}

#[test]
fn generalized_linkage_small() {
    let f = gf(2);
    let c1 = lifted_mrd(&f, 4, 2, 4).unwrap();
    let c1 = combine(&[c1, terminal_word(&f, 4, 2, 4)], 4, Certify::Lemmas).unwrap();
    let c2 = c1.clone();
    let m1 = mrd_code(&f, 2, 4, 2).unwrap();
    let m2 = RankCode::singleton_zero(&f, 2, 4, 2);
    let c = generalized_linkage(&c1, &c2, &m1, &m2).unwrap();
    assert_eq!(c.size(), &BigInt::from(5 * 16 + 5));
    assert_eq!(exact_min(&c), Some(4));
}

#[test]
fn block_inserting_small() {
    let f = gf(2);
    let plane = full(&f, 2, 4);
    let p = InsertParams { widths: [2, 2, 2, 2], k1: 2, k2: 2 };
    let zero = RankCode::singleton_zero(&f, 2, 2, 2);
    let pk = RankPacking::from_mrd(&f, 2, 2, 1, 2).unwrap();
    assert_eq!(pk.len(), 4);
    let c = block_inserting_i(&p, 2, 2, &plane, &plane, &zero, &zero, &pk, &pk).unwrap();
    assert_eq!(c.size(), &BigInt::from(64));
    assert_eq!(exact_min(&c), Some(4));
    let short = pk.truncated(3);
    assert!(block_inserting_i(&p, 2, 2, &plane, &plane, &zero, &zero, &pk, &short).is_err());

    // (A, 0) for A in a distance-2 MRD code, and (0, B) for its nonzero words.
    let mrd = mrd_code(&f, 2, 2, 2).unwrap().words(64).unwrap();
    let z = scodes_core::spaces::MatGF::zeros(&f, 2, 2);
    let mut words: Vec<Vec<_>> = mrd.iter().map(|a| vec![a.clone(), z.clone()]).collect();
    words.extend(mrd.iter().filter(|b| !b.is_zero()).map(|b| vec![z.clone(), b.clone()]));
    let m = SumRankCode { field: f.clone(), shapes: vec![(2, 2), (2, 2)], d: 2, ranks: None, words };
    assert_eq!(m.min_distance().unwrap(), Some(2));
    let c = block_inserting_ii(&p, 4, &m, &plane, &plane).unwrap();
    assert_eq!(c.size(), &BigInt::from(7));
    assert_eq!(exact_min(&c), Some(4));
}
