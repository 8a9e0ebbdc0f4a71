use cyclic_green::greenring::{orbit_counts, CacheFile};
use cyclic_green::{Error, GreenContext, GreenElement};
use proptest::prelude::*;

fn ctx(p: u32, e: u32) -> GreenContext {
    GreenContext::new(p, e).unwrap()
}

fn el(c: &GreenContext, coeffs: &[i64]) -> GreenElement {
    let mut v = coeffs.to_vec();
    v.resize(c.q(), 0);
    c.element(v).unwrap()
}

fn v(c: &GreenContext, r: usize) -> GreenElement {
    c.basis(r).unwrap()
}

#[test]
fn additive_structure() {
    let c = ctx(2, 2);
    assert_eq!(v(&c, 2).add(&v(&c, 2)).unwrap(), el(&c, &[0, 2]));
    let a = el(&c, &[3, -1, 0, 7]);
    assert!(a.scale(0).unwrap().is_zero());
    assert!(a.add(&a.neg().unwrap()).unwrap().is_zero());
    assert_eq!(v(&c, 3).add(&v(&c, 4).scale(2).unwrap()).unwrap().delta().unwrap(), el(&c, &[11]));
}

#[test]
fn small_products() {
    let c = ctx(2, 2);
    assert_eq!(c.mul(&v(&c, 2), &v(&c, 2)).unwrap(), el(&c, &[0, 2]));
    let c9 = ctx(3, 2);
    assert_eq!(c9.mul(&v(&c9, 3), &v(&c9, 3)).unwrap().dimension(), 9);
    let a = el(&c9, &[1, -2, 0, 4, 0, 0, 0, 0, 1]);
    assert_eq!(c9.mul(&c9.one(), &a).unwrap(), a);
}

#[test]
fn projective_multiplication_rule() {
    // V_r V_{p^j} = r V_{p^j} for r <= p^j
    for (p, e) in [(2, 3), (3, 2), (5, 1), (2, 4)] {
        let c = ctx(p, e);
        for j in 0..=e {
            let pj = (p as usize).pow(j);
            for r in 1..=pj {
                assert_eq!(c.mul(&v(&c, r), &v(&c, pj)).unwrap(), v(&c, pj).scale(r as i64).unwrap(), "p={p} r={r} p^j={pj}");
            }
        }
    }
}

#[test]
fn restriction_and_induction() {
    let c = ctx(2, 3);
    let child = c.child().unwrap();
    assert_eq!(c.restrict(&v(&c, 5)).unwrap(), el(&child, &[0, 1, 1]));
    assert_eq!(c.restrict(&v(&c, 8)).unwrap(), el(&child, &[0, 0, 0, 2]));
    assert_eq!(c.restrict(&v(&c, 1)).unwrap(), el(&child, &[1]));
    assert_eq!(c.induce(&el(&child, &[0, 0, 1])).unwrap(), v(&c, 6));
    assert!(c.induce(&child.zero()).unwrap().is_zero());
    let c9 = ctx(3, 2);
    assert_eq!(c9.induce(&c9.child().unwrap().one()).unwrap(), v(&c9, 3));
    assert!(matches!(ctx(3, 0).restrict(&ctx(3, 0).one()), Err(Error::NoChild)));
}

#[test]
fn heller_translate() {
    let c = ctx(2, 2);
    assert_eq!(c.heller(&v(&c, 3), 1).unwrap(), v(&c, 1));
    assert!(c.heller(&v(&c, 4), 1).unwrap().is_zero());
    for r in 1..4 {
        assert_eq!(c.heller(&v(&c, r), 2).unwrap(), v(&c, r));
        assert_eq!(c.heller(&v(&c, r), 0).unwrap(), v(&c, r));
        assert_eq!(c.heller(&v(&c, r), 7).unwrap(), v(&c, 4 - r));
    }
}

#[test]
fn inflation_is_a_ring_embedding() {
    let big = ctx(2, 3);
    let small = big.factor(2).unwrap();
    assert_eq!(big.inflate(&v(&small, 2)).unwrap(), v(&big, 2));
    assert_eq!(big.inflate(&v(&small, 4)).unwrap(), v(&big, 4));
    for a in 1..=4 {
        for b in 1..=4 {
            let lhs = big.inflate(&small.mul(&v(&small, a), &v(&small, b)).unwrap()).unwrap();
            assert_eq!(lhs, big.mul(&v(&big, a), &v(&big, b)).unwrap());
        }
    }
    assert!(small.inflate(&v(&big, 1)).is_err());
}

#[test]
fn power_tables() {
    let c = ctx(2, 2);
    assert_eq!(c.lambda_power(3, 0).unwrap(), c.one());
    assert_eq!(c.lambda_power(3, 2).unwrap(), v(&c, 3));
    assert!(c.lambda_power(3, 4).unwrap().is_zero());
    assert_eq!(c.s_power(4, 2).unwrap(), el(&c, &[0, 1, 0, 2]));
    assert_eq!(c.lambda_regular(2).unwrap(), el(&c, &[0, 1, 0, 1]));
    assert_eq!(c.s_regular(2).unwrap(), el(&c, &[0, 1, 0, 2]));
    for r in 1..=4 {
        assert_eq!(c.lambda_power(r, r).unwrap(), c.one());
        assert_eq!(c.lambda_power_oracle(r, r).unwrap(), c.one());
    }
}

#[test]
fn adams_examples() {
    let c2 = ctx(2, 1);
    assert_eq!(c2.adams_lambda_basis(2, 2).unwrap(), el(&c2, &[-2, 2]));
    let c9 = ctx(3, 2);
    assert_eq!(c9.adams_lambda_basis(6, 9).unwrap(), el(&c9, &[0, 0, 3]));
    for n in 1..10 {
        assert_eq!(c9.adams_lambda_basis(n, 1).unwrap(), c9.one());
        assert_eq!(c9.adams_s_via_lambda(n, 1).unwrap(), c9.one());
    }
    let c4 = ctx(2, 2);
    assert_eq!(c4.adams_s_via_lambda(2, 3).unwrap(), el(&c4, &[-1, 2]));
    assert_eq!(c4.adams_s_direct_basis(2, 3).unwrap(), el(&c4, &[-1, 2]));
    assert_eq!(c4.adams_s_direct_basis(3, 2).unwrap(), c4.adams_lambda_basis(3, 2).unwrap());
    let a = el(&c4, &[1, -2, 3, 1]);
    assert_eq!(c4.adams_s_direct(1, &a).unwrap(), a);
    assert_eq!(c4.adams_s(1, &a).unwrap(), a);
    assert!(c4.adams_lambda(0, &a).is_err());
}

#[test]
fn regular_closed_forms() {
    let c = ctx(2, 2);
    assert_eq!(c.closed_form_adams_regular_lambda(4).unwrap(), el(&c, &[-4, 4]));
    let c8 = ctx(2, 3);
    assert_eq!(c8.closed_form_adams_regular_lambda(3).unwrap(), v(&c8, 8));
    assert_eq!(c8.closed_form_adams_regular_s(4).unwrap(), el(&c8, &[0, 4]));
    for n in 1..=24 {
        assert_eq!(c8.adams_s_via_lambda(n, 8).unwrap(), c8.closed_form_adams_regular_s(n).unwrap());
        assert_eq!(c8.adams_s_direct_basis(n, 8).unwrap(), c8.closed_form_adams_regular_s(n).unwrap());
    }
}

#[test]
fn fast_paths_match_raw() {
    for (p, e) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
        let c = ctx(p, e);
        let q = c.q();
        for r in 1..=q {
            let a = v(&c, r);
            for n in 1..=6 * q {
                assert_eq!(c.adams_lambda_fast(n, &a).unwrap(), c.adams_lambda(n, &a).unwrap(), "Λ p={p} q={q} n={n} r={r}");
                assert_eq!(c.adams_s_fast(n, &a).unwrap(), c.adams_s(n, &a).unwrap(), "S p={p} q={q} n={n} r={r}");
            }
            assert_eq!(c.adams_lambda_fast(2 * q, &a).unwrap(), a.delta().unwrap());
            assert_eq!(c.adams_s_fast(c.s_period(), &a).unwrap(), a.delta().unwrap());
        }
    }
}

#[test]
fn trivial_group() {
    let c = ctx(3, 0);
    let a = el(&c, &[5]);
    for n in 1..5 {
        assert_eq!(c.adams_lambda(n, &a).unwrap(), a);
        assert_eq!(c.adams_s(n, &a).unwrap(), a);
        assert_eq!(c.adams_s_direct(n, &a).unwrap(), a);
        assert_eq!(c.adams_lambda_fast(n, &a).unwrap(), a);
    }
}

#[test]
fn symmetric_cap_is_typed() {
    let c = GreenContext::with_cap(3, 2, 1000).unwrap();
    match c.adams_s_direct_basis(8, 8) {
        Err(Error::CapExceeded { object, .. }) => assert!(object.starts_with("S^"), "{object}"),
        other => panic!("expected a cap error, got {other:?}"),
    }
    // the conversion path needs no symmetric powers at all
    assert!(c.adams_s_via_lambda(8, 8).is_ok());
}

#[test]
fn orbit_counts_cover_every_size() {
    let c = ctx(3, 2);
    let counts = orbit_counts(c.order(), 3, false).unwrap();
    assert_eq!(counts, vec![(1, 0), (3, 1), (9, 9)]);
}

#[test]
fn cache_round_trip_and_tamper_detection() {
    let c = ctx(2, 2);
    c.build_cache(4).unwrap();
    let file = c.export_cache();
    assert_eq!(file.tensor_table.values().map(|row| row.len()).sum::<usize>(), 10);
    let text = file.to_json();
    let back = CacheFile::from_json(&text).unwrap();
    assert_eq!(back, file);
    let fresh = ctx(2, 2);
    let report = fresh.validate_cache(&back, 1.0, 7).unwrap();
    assert!(report.ok(), "{report:?}");
    assert_eq!(report.checked + report.skipped_cap, report.entries);
    fresh.load_cache(&back, 0.05, 7).unwrap();
    assert_eq!(fresh.export_cache(), file);

    // swap two entries of equal dimension: structurally valid, semantically wrong
    let mut bad = file.clone();
    bad.tensor_table.get_mut("2").unwrap().insert("2".into(), vec![4, 0, 0, 0]);
    CacheFile::from_json(&bad.to_json()).unwrap();
    let report = ctx(2, 2).validate_cache(&bad, 1.0, 7).unwrap();
    assert_eq!(report.mismatches.len(), 1, "{report:?}");
    assert!(matches!(ctx(2, 2).load_cache(&bad, 1.0, 7), Err(Error::CacheMismatch(_))));

    let mut wrong_dim = file.clone();
    wrong_dim.tensor_table.get_mut("2").unwrap().insert("2".into(), vec![1, 0, 0, 0]);
    assert!(matches!(CacheFile::from_json(&wrong_dim.to_json()), Err(Error::CacheFormat(_))));
    assert!(ctx(2, 3).validate_cache(&file, 1.0, 1).is_err());
}

#[test]
fn cache_rejects_malformed_documents() {
    for text in [
        "",
        "{}",
        r#"{"version":2,"p":2,"q":4,"tensor_table":{},"lambda_table":{},"s_table":{},"adams_lambda":{},"adams_s":{}}"#,
        r#"{"version":1,"p":2,"q":6,"tensor_table":{},"lambda_table":{},"s_table":{},"adams_lambda":{},"adams_s":{}}"#,
        r#"{"version":1,"p":2,"q":4,"tensor_table":{"01":{"1":[1,0,0,0]}},"lambda_table":{},"s_table":{},"adams_lambda":{},"adams_s":{}}"#,
        r#"{"version":1,"p":2,"q":4,"tensor_table":{"1":{"1":[1,0,0]}},"lambda_table":{},"s_table":{},"adams_lambda":{},"adams_s":{}}"#,
        r#"{"version":1,"p":2,"q":4,"tensor_table":{},"lambda_table":{},"s_table":{"1":{"3":[-1,1,0,0]}},"adams_lambda":{},"adams_s":{}}"#,
        r#"{"version":1,"p":2,"q":4,"tensor_table":{},"lambda_table":{},"s_table":{},"adams_lambda":{"0":{"1":[1,0,0,0]}},"adams_s":{}}"#,
        r#"{"version":1,"p":2,"q":4,"extra":1,"tensor_table":{},"lambda_table":{},"s_table":{},"adams_lambda":{},"adams_s":{}}"#,
    ] {
        assert!(CacheFile::from_json(text).is_err(), "{text}");
    }
}

fn small_element(q: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..=3, q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(e in 1u32..=3, a in small_element(8), b in small_element(8), d in small_element(8)) {
        let c = ctx(2, e);
        let q = c.q();
        let (a, b, d) = (el(&c, &a[..q]), el(&c, &b[..q]), el(&c, &d[..q]));
        let ab = c.mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &c.mul(&b, &a).unwrap());
        prop_assert_eq!(c.mul(&ab, &d).unwrap(), c.mul(&a, &c.mul(&b, &d).unwrap()).unwrap());
        prop_assert_eq!(c.mul(&a, &b.add(&d).unwrap()).unwrap(), c.mul(&a, &b).unwrap().add(&c.mul(&a, &d).unwrap()).unwrap());
        prop_assert_eq!(ab.dimension(), a.dimension() * b.dimension());
        let child = c.child().unwrap();
        prop_assert_eq!(c.restrict(&ab).unwrap(), child.mul(&c.restrict(&a).unwrap(), &c.restrict(&b).unwrap()).unwrap());
    }

    #[test]
    fn adams_operations_preserve_dimension(p_idx in 0usize..3, r in 1usize..=9, n in 1usize..40) {
        let c = [ctx(2, 3), ctx(3, 2), ctx(5, 1)][p_idx].clone();
        let r = r.min(c.q());
        prop_assert_eq!(c.adams_lambda_basis(n, r).unwrap().dimension(), r as i128);
        prop_assert_eq!(c.adams_s_via_lambda(n, r).unwrap().dimension(), r as i128);
    }

    #[test]
    fn parse_display_round_trip(coeffs in proptest::collection::vec(-1000i64..1000, 9)) {
        let c = ctx(3, 2);
        let a = el(&c, &coeffs);
        prop_assert_eq!(GreenElement::parse(c.order(), &a.to_string()).unwrap(), a);
    }
}
