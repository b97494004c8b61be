use scodes_core::bounds::*;
use scodes_core::provenance::BoundResult;
use scodes_core::BigInt;

fn v(r: &BoundResult) -> BigInt {
    r.value.clone()
}

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

#[test]
fn johnson_worked_examples() {
    let inner = BoundResult::leaf(34, "given");
    assert_eq!(v(&johnson_ii_step(2, 9, 6, 4, inner.clone(), false)), b(1158));
    assert_eq!(v(&johnson_ii_step(2, 9, 6, 4, inner, true)), b(1156));
    let inner = BoundResult::leaf(259, "given");
    assert_eq!(v(&johnson_ii_step(2, 14, 10, 6, inner, true)), b(67349));
    assert_eq!(v(&johnson_ii_chain(2, 7, 4, 3, false)), b(381));
    assert_eq!(v(&johnson_ii_chain(2, 7, 4, 3, true)), b(381));
}

#[test]
fn engine_uses_facts_for_johnson() {
    let e = Engine::new();
    assert_eq!(v(&e.johnson_ii(2, 14, 10, 6, true).unwrap()), b(67349));
    assert_eq!(v(&e.best_upper(2, 9, 6, 4).unwrap()), b(1156));
}

#[test]
fn ahlswede_aydinian_reductions() {
    let e = Engine::new();
    for (q, n, d, k) in [(2u64, 8, 4, 3), (2, 9, 6, 4), (3, 7, 4, 3), (2, 10, 6, 4)] {
        let inner = e.best_upper(q, n - 1, d, k).unwrap().value;
        let aa = ahlswede_aydinian_at(q, n, d, k, 0, n - 1, &inner).unwrap();
        // (q^n - 1)/(q^{n-k} - 1) A(n-1,d;k)
        let qn = BigInt::from(q).pow(n as u32) - 1;
        let qnk = BigInt::from(q).pow((n - k) as u32) - 1;
        assert_eq!(aa, qn * &inner / qnk);

        let inner = e.best_upper(q, n - 1, d - 2, k - 1).unwrap().value;
        assert_eq!(ahlswede_aydinian_at(q, n, d, k, 1, n - 1, &inner).unwrap(), inner);
    }
    assert!(v(&e.ahlswede_aydinian(2, 8, 8, 4).unwrap()) <= b(17));
}

#[test]
fn partial_spreads() {
    let r = partial_spread_upper(5, 16, 6).unwrap();
    assert_eq!(v(&r), b(9765941));
    assert_eq!(r.rule, "drake_freeman");
    let r = partial_spread_upper(5, 15, 6).unwrap();
    assert_eq!(v(&r), b(1953186));
    assert_eq!(r.rule, "partial_spread_parametric");
    assert_eq!(v(&partial_spread_upper(3, 15, 6).unwrap()), b(19695));
    let r = partial_spread_upper(2, 11, 4).unwrap();
    assert_eq!(v(&r), b(132));
    assert_eq!(v(&partial_spread_lower(2, 11, 4)), b(129));
    assert_eq!(v(&partial_spread_upper(2, 7, 3).unwrap()), b(17));
    assert_eq!(v(&partial_spread_upper(2, 8, 3).unwrap()), b(34));
    assert_eq!(v(&partial_spread_lower(2, 8, 3)), b(34));
}

#[test]
fn best_bounds() {
    let e = Engine::new();
    assert_eq!(v(&e.best_upper(2, 7, 4, 3).unwrap()), b(381));
    assert_eq!(v(&e.best_lower(2, 7, 4, 3).unwrap()), b(333));
    assert_eq!(v(&e.best_upper(2, 8, 6, 4).unwrap()), b(257));
    assert_eq!(v(&e.best_lower(2, 8, 6, 4).unwrap()), b(257));
    assert_eq!(v(&e.best_upper(2, 6, 4, 3).unwrap()), b(77));
    assert_eq!(v(&e.best_lower(2, 6, 4, 3).unwrap()), b(77));
    assert_eq!(v(&e.best_upper(2, 4, 10, 2).unwrap()), b(1));
    assert_eq!(v(&e.best_upper(2, 4, 4, 5).unwrap()), b(0));
    assert_eq!(v(&e.best_upper(2, 9, 6, 5).unwrap()), v(&e.best_upper(2, 9, 6, 4).unwrap()));
}

#[test]
fn pure_engine_without_facts() {
    let e = Engine::pure();
    assert_eq!(v(&e.best_lower(2, 8, 6, 4).unwrap()), b(257));
    assert!(v(&e.best_upper(2, 8, 6, 4).unwrap()) > b(257));
    let r = e.best_upper(2, 9, 6, 4).unwrap();
    assert!(r.rules().iter().all(|s| !s.starts_with("fact")));
}

#[test]
fn mixed_dimension() {
    assert_eq!(mdc_exact_small(2, 5, 3), Some(b(18)));
    assert_eq!(mdc_exact_small(2, 4, 2), Some(b(37)));
    assert_eq!(mdc_exact_small(2, 3, 1), Some(b(16)));
    assert_eq!(mdc_exact_small(2, 6, 2), Some(b(1521)));
    assert_eq!(mdc_exact_small(2, 2, 2), Some(b(3)));
    assert_eq!(mdc_exact_small(3, 3, 2), Some(b(14)));
    let e = Engine::new();
    let (lo, hi) = e.mdc_layer_bounds(2, 5, 3).unwrap();
    assert!(lo.value <= b(18) && b(18) <= hi.value);
    let (lo, hi) = e.mdc_layer_bounds(2, 4, 1).unwrap();
    assert_eq!(lo.value, hi.value);
}

#[test]
fn lp_small() {
    assert_eq!(v(&lp_bound(2, 7, 4, 3).unwrap()), v(&anticode(2, 7, 4, 3)));
    let row = lp_audit_one(2, 8, 4, 4).unwrap();
    assert!(row.lp_matches_anticode());
    assert!(row.witness_ok());
}

#[test]
fn dominance_chain() {
    for q in [2u64, 3] {
        for n in 4..=12 {
            for k in 2..=n / 2 {
                for d in (4..=2 * k).step_by(2) {
                    let imp = v(&johnson_ii_chain(q, n, d, k, true));
                    let plain = v(&johnson_ii_chain(q, n, d, k, false));
                    let ac = v(&anticode(q, n, d, k));
                    let cap = v(&sphere_packing(q, n, d, k)).min(v(&singleton(q, n, d, k)));
                    assert!(imp <= plain && plain <= ac && ac <= cap, "q={q} n={n} d={d} k={k}");
                }
            }
        }
    }
}

#[test]
fn lp_equals_anticode_on_grid() {
    let rows = lp_audit(&[2, 3], 4..=10).unwrap();
    assert_eq!(rows.len(), 106);
    for r in &rows {
        assert!(r.lp_matches_anticode(), "{:?}", (r.q, r.n, r.d, r.k));
        assert!(r.witness_ok(), "{:?}", (r.q, r.n, r.d, r.k));
    }
    // The single-variable case sits at its cap [n]/[k].
    let t = LpTableau::new(2, 6, 6, 3, LpVariant::Standard).unwrap();
    match t.solve() {
        LpOutcome::Optimal { value, .. } => assert_eq!(value, anticode_rational(2, 6, 6, 3)),
        LpOutcome::Unbounded => panic!("bounded"),
    }
}

#[test]
fn partial_spread_deficiency_is_monotone() {
    for q in [2u64, 3, 4] {
        for k in 3..=6 {
            for r in 1..k {
                let mut last: Option<BigInt> = None;
                for t in 2..=6 {
                    let n = k * t + r;
                    let full: BigInt = (0..t).map(|s| BigInt::from(q).pow((s * k + r) as u32)).sum();
                    let sigma = full - v(&partial_spread_upper(q, n, k).unwrap());
                    if let Some(prev) = &last {
                        assert!(&sigma <= prev, "q={q} k={k} r={r} t={t}");
                    }
                    last = Some(sigma);
                }
            }
        }
    }
}

#[test]
fn engine_on_a_grid_is_consistent() {
    for q in [2u64, 3, 4, 5, 7] {
        let e = Engine::new();
        for n in 4..=16 {
            for k in 2..=n / 2 {
                for d in (4..=2 * k).step_by(2) {
                    let (lo, hi) = e.bounds(q, n, d, k).unwrap();
                    assert!(lo.value <= hi.value);
                }
            }
        }
    }
}

#[test]
fn clique_oracle_matches() {
    use scodes_core::gfq::FieldSpec;
    use scodes_core::verify::max_cdc_size_exhaustive;
    let f = FieldSpec::of_order(2).unwrap();
    let e = Engine::new();
    for (n, d, k, want) in [(4, 4, 2, 5), (5, 4, 2, 9), (6, 6, 3, 9)] {
        let got = max_cdc_size_exhaustive(&f, n, d, k, 1 << 16).unwrap();
        assert_eq!(got, want);
        assert_eq!(v(&e.best_upper(2, n, d, k).unwrap()), b(want as i64));
        assert_eq!(v(&e.best_lower(2, n, d, k).unwrap()), b(want as i64));
    }
}

#[test]
fn provenance_marks_facts() {
    let e = Engine::new();
    let r = e.best_upper(2, 14, 10, 6).unwrap();
    assert_eq!(v(&r), b(67349));
    let mut cited = false;
    r.walk(&mut |n| cited |= n.rule == "fact_upper" && n.citation.is_some());
    assert!(cited);
    assert!(r.explain().contains("A_2(13,10;5)<=259"));
    let pure = Engine::pure().best_upper(2, 14, 10, 6).unwrap();
    assert!(pure.value > r.value);
}

#[test]
fn inconsistent_facts_are_fatal() {
    let t = FactTable::parse("2\t7\t4\t3\tlower\t400\tmade up\n").unwrap();
    let e = Engine::with_facts(t);
    assert!(matches!(e.best_lower(2, 7, 4, 3), Err(BoundError::Inconsistent { .. })));
}

#[test]
fn twelve_six_six() {
    let e = Engine::new();
    let r = e.best_lower(2, 12, 6, 6).unwrap();
    assert_eq!(r.rule, "linkage_block_inserting");
    // 2^24 + 87886 + 2^9 + 57; the sum-rank part has 57 words, not 58.
    assert_eq!(v(&r), b(16865671));
}
