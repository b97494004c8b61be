//! End-to-end acceptance checks, one line of output per criterion.
//!
//! Built without the libtest harness so the report is always printed.

use scodes_core::bounds::*;
use scodes_core::constructions::{assemble_coset_8_4_4, echelon_ferrers, linkage, partial_spread, Cdc, SkeletonCode};
use scodes_core::divisible::{sharp_ceil, sharp_floor, sqr_bases, sqr_expand};
use scodes_core::gfq::{Field, FieldSpec};
use scodes_core::provenance::Direction;
use scodes_core::qcombi::gauss_binomial;
use scodes_core::rankmetric::{gabidulin, rank_distance, rank_distribution, three_piece_sumrank};
use scodes_core::spaces::{
    dual, enumerate_grassmannian, hamming_distance, rank_of_stack, subspace_distance, Subspace,
};
use scodes_core::verify::{self, max_cdc_size_exhaustive, Mode};
use scodes_core::BigInt;
use num_integer::Integer;

/// Every value below is compared exactly; the only numeric tolerance is on runtime.
const CAP: u64 = 1 << 24;

/// Criteria whose expected value is not reproduced. The check still runs and must
/// fail with exactly the value recorded here.
const KNOWN_DEVIATIONS: &[(u32, &str)] = &[(7, "three-piece sum-rank code has 57 words, expected 58")];

type Outcome = Result<String, String>;

fn gf(q: u64) -> Field {
    FieldSpec::of_order(q).unwrap()
}

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn c1() -> Outcome {
    expect("[8 4]_2", gauss_binomial(8, 4, 2), b(200787))?;
    expect("[6 4]_2", gauss_binomial(6, 4, 2), b(651))?;
    expect("[7 3]_2", gauss_binomial(7, 3, 2), b(11811))?;
    Ok("200787 651 11811".into())
}

fn c2() -> Outcome {
    let inner = scodes_core::provenance::BoundResult::leaf(34, "A_2(8,6;3)");
    expect("plain Johnson", johnson_ii_step(2, 9, 6, 4, inner.clone(), false).value, b(1158))?;
    expect("improved Johnson", johnson_ii_step(2, 9, 6, 4, inner, true).value, b(1156))?;
    let inner = scodes_core::provenance::BoundResult::leaf(259, "A_2(13,10;5)");
    expect("improved Johnson (2,14,10,6)", johnson_ii_step(2, 14, 10, 6, inner, true).value, b(67349))?;
    Ok("1158 1156 67349".into())
}

fn c3() -> Outcome {
    let s = sqr_bases(2, 3).sigma;
    expect("S_2(3)", s, vec![b(15), b(14), b(12), b(8)])?;
    expect("11 over S_2(2)", sqr_expand(&b(11), 2, 2).coefficients(), vec![b(1), b(0), b(1)])?;
    expect("9 over S_2(2)", sqr_expand(&b(9), 2, 2).coefficients(), vec![b(1), b(1), b(-1)])?;
    expect("19 over S_2(3) leading", sqr_expand(&b(19), 2, 3).leading, b(-1))?;
    expect("34 over S_2(3)", sqr_expand(&b(34), 2, 3).coefficients(), vec![b(0), b(1), b(1), b(1)])?;
    expect("137 over S_3(3) leading", sqr_expand(&b(137), 3, 3).leading, b(-2))?;
    expect("sharp floor 17374/15", sharp_floor(&b(17374), &b(15), 2, 3), Some(b(1156)))?;
    Ok("expansions and sharp floor 1156".into())
}

fn c4() -> Outcome {
    expect("sphere packing", sphere_packing(2, 8, 6, 4).value, b(445))?;
    expect("Singleton", singleton(2, 8, 6, 4).value, b(651))?;
    for n in [8usize, 10, 12] {
        let sp = sphere_packing(2, n, 6, n / 2).value;
        let sg = singleton(2, n, 6, n / 2).value;
        if sp >= sg {
            return Err(format!("n={n}: sphere packing {sp} not below Singleton {sg}"));
        }
    }
    Ok("445 < 651; family n=8,10,12".into())
}

fn c5() -> Outcome {
    expect("anticode", anticode(2, 7, 4, 3).value, b(381))?;
    expect("iterated Johnson", johnson_ii_chain(2, 7, 4, 3, false).value, b(381))?;
    let e = Engine::new();
    expect("best_upper", e.best_upper(2, 7, 4, 3).unwrap().value, b(381))?;
    let lo = e.best_lower(2, 7, 4, 3).unwrap();
    expect("best_lower", lo.value.clone(), b(333))?;
    expect("best_lower rule", lo.rule.as_str(), "fact_lower")?;
    Ok("381 / 333".into())
}

fn exact(c: &Cdc) -> Result<verify::VerificationReport, String> {
    verify::min_distance(c, Mode::Exact { cap: CAP as usize }).map_err(|e| format!("{e:?}"))
}

fn c6() -> Outcome {
    let f = gf(2);
    let full = Cdc::from_words(&f, 4, 4, 6, vec![Subspace::full(&f, 4)], "full").unwrap();
    let m = scodes_core::rankmetric::mrd_code(&f, 4, 4, 3).unwrap();
    let c = linkage(&full, &full, &m).map_err(|e| format!("{e:?}"))?;
    let r = exact(&c)?;
    expect("linkage", (r.size, r.min_distance), (257, Some(6)))?;

    let s = SkeletonCode::parse("1110000,0001101", 6).map_err(|e| format!("{e:?}"))?;
    let c = echelon_ferrers(&f, &s, 6).map_err(|e| format!("{e:?}"))?;
    let r = exact(&c)?;
    expect("echelon-Ferrers", (r.size, r.min_distance), (17, Some(6)))?;

    let p = partial_spread(&f, 7, 3).map_err(|e| format!("{e:?}"))?;
    let cov = verify::is_partial_spread(p.words().unwrap()).map_err(|e| format!("{e:?}"))?;
    expect("partial spread", (p.words().unwrap().len(), cov.is_partial_spread), (17, true))?;

    let c = assemble_coset_8_4_4(&f).map_err(|e| format!("{e:?}"))?;
    let r = exact(&c)?;
    expect("coset assembly", (r.size, r.min_distance, r.certified), (4797, Some(4), true))?;
    Ok(format!("257, 17, 17, 4797 ({} pairs)", r.pairs_checked))
}

fn c7() -> Outcome {
    let f = gf(2);
    let g = gabidulin(&f, 4, 4, 3).map_err(|e| format!("{e:?}"))?;
    let words = g.words(CAP).map_err(|e| format!("{e:?}"))?;
    let mut min = usize::MAX;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            min = min.min(rank_distance(&words[i], &words[j]).unwrap());
        }
    }
    expect("Gabidulin", (words.len(), min), (256, 3))?;

    for q in [2u64, 3] {
        let total: BigInt = (0..=4).map(|r| rank_distribution(q, 4, 4, 2, r).unwrap()).sum();
        expect("rank distribution total", total, BigInt::from(q).pow(12))?;
    }
    let mut partial = Vec::new();
    let mut acc = b(0);
    for r in 0..=4 {
        acc += rank_distribution(2, 4, 4, 2, r).unwrap();
        if r >= 2 {
            partial.push(acc.clone());
        }
    }
    expect("partial sums", partial, vec![b(526), b(2776), b(4096)])?;

    let m = three_piece_sumrank(&f).map_err(|e| format!("{e:?}"))?;
    let d = m.min_distance().map_err(|e| format!("{e:?}"))?;
    if d.is_none_or(|d| d < 3) {
        return Err(format!("sum-rank distance {d:?} below 3"));
    }
    expect("three-piece sum-rank size", m.size(), 58)?;
    Ok("256 at rank 3; q^12; 526/2776/4096; 58".into())
}

fn c8() -> Outcome {
    expect("Drake-Freeman", partial_spread_upper(5, 16, 6).unwrap().value, b(9765941))?;
    expect("parametric q=5", partial_spread_upper(5, 15, 6).unwrap().value, b(1953186))?;
    expect("parametric q=3", partial_spread_upper(3, 15, 6).unwrap().value, b(19695))?;
    expect("series upper", partial_spread_upper(2, 11, 4).unwrap().value, b(132))?;
    expect("series lower", partial_spread_lower(2, 11, 4).value, b(129))?;
    Ok("9765941 1953186 19695 132/129".into())
}

fn c9() -> Outcome {
    let rows = lp_audit(&[2, 3], 4..=10).map_err(|e| format!("{e:?}"))?;
    let rows: Vec<_> = rows.into_iter().filter(|r| r.k >= 2).collect();
    let bad: Vec<_> = rows.iter().filter(|r| !r.lp_matches_anticode()).map(|r| (r.q, r.n, r.d, r.k)).collect();
    if !bad.is_empty() {
        return Err(format!("LP differs from anticode at {bad:?}"));
    }
    let witness = rows.iter().filter(|r| r.witness_ok()).count();
    let alternate = rows.iter().filter(|r| r.alternate.iter().any(|(_, v)| v.as_ref() == Some(&r.anticode))).count();
    Ok(format!(
        "{} grid points agree; {} dual witnesses feasible; alternate coefficients match at {} (audit finding)",
        rows.len(),
        witness,
        alternate
    ))
}

fn c10() -> Outcome {
    let f = gf(2);
    let e = Engine::new();
    for (n, d, k, want) in [(4usize, 4usize, 2usize, 5i64), (5, 4, 2, 9), (6, 6, 3, 9)] {
        let clique = max_cdc_size_exhaustive(&f, n, d, k, CAP).map_err(|e| format!("{e:?}"))?;
        let (lo, hi) = e.bounds(2, n, d, k).map_err(|e| format!("{e}"))?;
        expect(&format!("(2,{n},{d},{k})"), (b(clique as i64), lo.value, hi.value), (b(want), b(want), b(want)))?;
    }
    Ok("5 9 9".into())
}

fn all_subspaces(f: &Field, n: usize) -> Vec<Subspace> {
    (0..=n).flat_map(|k| enumerate_grassmannian(f, n, k, CAP).unwrap()).collect()
}

fn c11() -> Outcome {
    let f = gf(2);
    let all = all_subspaces(&f, 4);
    expect("subspaces of F_2^4", all.len(), 67)?;
    let dist: Vec<Vec<usize>> =
        all.iter().map(|u| all.iter().map(|w| subspace_distance(u, w).unwrap()).collect()).collect();
    let m = all.len();
    for i in 0..m {
        for j in 0..m {
            if (dist[i][j] == 0) != (i == j) || dist[i][j] != dist[j][i] {
                return Err(format!("identity or symmetry fails at {i},{j}"));
            }
            for l in 0..m {
                if dist[i][l] > dist[i][j] + dist[j][l] {
                    return Err(format!("triangle fails at {i},{j},{l}"));
                }
            }
        }
    }

    let g52: Vec<Subspace> = enumerate_grassmannian(&f, 5, 2, CAP).unwrap().collect();
    for u in &g52 {
        for w in &g52 {
            let meet = u.k() + w.k() - 2 * u.meet(w).unwrap().k();
            let join = 2 * u.join(w).unwrap().k() - u.k() - w.k();
            let rank = 2 * rank_of_stack(u, w).unwrap() - u.k() - w.k();
            let ds = subspace_distance(u, w).unwrap();
            if meet != join || join != rank || rank != ds {
                return Err(format!("distance formulas disagree: {meet} {join} {rank} {ds}"));
            }
            if hamming_distance(&u.pivot_vector(), &w.pivot_vector()).unwrap() > ds {
                return Err("pivot Hamming distance exceeds d_S".into());
            }
        }
    }

    let g42: Vec<Subspace> = enumerate_grassmannian(&f, 4, 2, CAP).unwrap().collect();
    for u in &g42 {
        for w in &g42 {
            if subspace_distance(&dual(u), &dual(w)).unwrap() != subspace_distance(u, w).unwrap() {
                return Err("dual changes d_S".into());
            }
        }
    }

    for q in [2u64, 3, 4, 5] {
        for r in 0..=4u32 {
            for n in -500i64..=500 {
                if sqr_expand(&b(n), q, r).resum() != b(n) {
                    return Err(format!("round trip fails at n={n} q={q} r={r}"));
                }
            }
        }
    }
    for q in [2u64, 3] {
        for r in 1..=3u32 {
            for a in 0i64..=300 {
                for d in 1i64..=25 {
                    let (a, d) = (b(a), b(d));
                    let hi = sharp_floor(&a, &d, q, r + 1);
                    let mid = sharp_floor(&a, &d, q, r);
                    let up = sharp_ceil(&a, &d, q, r);
                    let ok = hi <= mid
                        && mid.as_ref().is_some_and(|m| *m <= a.div_floor(&d))
                        && up.as_ref().is_some_and(|u| *u >= Integer::div_ceil(&a, &d));
                    if !ok {
                        return Err(format!("monotone chain fails at a={a} b={d} q={q} r={r}"));
                    }
                }
            }
        }
    }
    Ok("67-subspace metric, G_2(5,2), G_2(4,2), S_q(r) grids: 0 violations".into())
}

fn c12() -> Outcome {
    let e = Engine::new();
    let cases = [
        (Direction::Lower, 7usize, 4usize, 3usize, 333i64),
        (Direction::Lower, 8, 4, 4, 4802),
        (Direction::Upper, 6, 4, 3, 77),
        (Direction::Upper, 8, 6, 4, 257),
    ];
    for (dir, n, d, k, want) in cases {
        let r = e.best(dir, 2, n, d, k).map_err(|e| format!("{e}"))?;
        expect(&label(2, n, d, k), r.value.clone(), b(want))?;
        if !r.rule.starts_with("fact") || r.citation.as_deref().is_none_or(str::is_empty) {
            return Err(format!("{} is not a cited fact: {}", label(2, n, d, k), r.rule));
        }
    }
    Ok("333, 4802, 77, 257 taken from cited facts".into())
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 12] =
        [(1, c1), (2, c2), (3, c3), (4, c4), (5, c5), (6, c6), (7, c7), (8, c8), (9, c9), (10, c10), (11, c11), (12, c12)];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (i, check) in criteria {
        let t = std::time::Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match &outcome {
            Ok(msg) => {
                passed += 1;
                println!("criterion {i}: PASS {msg} [{secs:.1}s]")
            }
            Err(msg) => println!("criterion {i}: FAIL {msg} [{secs:.1}s]"),
        }
        let known = KNOWN_DEVIATIONS.iter().find(|(c, _)| *c == i);
        match (outcome, known) {
            (Ok(_), None) => {}
            (Err(msg), Some((_, why))) => {
                if !msg.contains("got 57, expected 58") {
                    unexpected.push(format!("criterion {i} failed differently than recorded ({why}): {msg}"));
                }
            }
            (Ok(_), Some(_)) => unexpected.push(format!("criterion {i} now passes; update KNOWN_DEVIATIONS")),
            (Err(msg), None) => unexpected.push(format!("criterion {i}: {msg}")),
        }
    }
    println!("{passed}/{} criteria pass", criteria.len());
    for (i, why) in KNOWN_DEVIATIONS {
        println!("criterion {i}: recorded deviation: {why}");
    }
    if !unexpected.is_empty() {
        eprintln!("{unexpected:#?}");
        std::process::exit(1);
    }
}
