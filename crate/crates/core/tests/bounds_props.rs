mod common;

use common::*;
use irrlat::bounds::*;
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn bruteforce_matches_exhaustive_scan() {
    for n in 1..=300u64 {
        let (g, ks) = min_genus_exhaustive(n as i64);
        let r = min_genus_bruteforce(n).unwrap();
        assert_eq!(r.value, BigInt::from(g), "n = {n}");
        let found: Vec<i64> = r.constraint_witnesses().map(|w| w.k as i64).collect();
        assert_eq!(found, ks, "n = {n}");
        assert_eq!(min_genus_closed_form(n).unwrap() as i64, g);
    }
}

#[test]
fn closed_form_small_values() {
    let expect = [(1, 1), (2, 3), (3, 5), (4, 6), (5, 8), (7, 10)];
    for (n, g) in expect {
        assert_eq!(min_genus_closed_form(n).unwrap(), g, "n = {n}");
    }
    assert!(min_genus_closed_form(0).is_err());
    assert!(min_genus_bruteforce(0).is_err());
}

#[test]
fn voisin_comparison_at_b2tr_23() {
    assert_eq!(fibgen_lower_bound(3, 23).unwrap(), 5);
    assert_eq!(voisin_bound(3, 23).unwrap(), 5);
    assert_eq!(fibgen_lower_bound(4, 23).unwrap(), 6);
    assert_eq!(voisin_bound(4, 23).unwrap(), 6);
    assert!(voisin_bound(2, 23).is_err());
    assert!(fibgen_lower_bound(3, 4).is_err());
}

#[test]
fn p1n_recursion_matches_naive_and_square() {
    for n in 2..=5u32 {
        for d in 1..=40u64 {
            let c = CurveClassP1n::new(n, d).unwrap();
            let r = max_genus_p1n_recursive(c);
            assert_eq!(r.value, BigInt::from(p1n_naive(n, d)), "n = {n}, d = {d}");
            assert_eq!(r.value, BigInt::from(max_genus_p1n_bound(c)));
        }
    }
    assert!(CurveClassP1n::new(1, 3).is_err());
    assert!(CurveClassP1n::new(3, 0).is_err());
}

#[test]
fn p1n_divisor_chain_is_consistent() {
    let c = CurveClassP1n::new(5, 12).unwrap();
    let r = max_genus_p1n_recursive(c);
    let Witness::DivisorChain(chain) = &r.witnesses[0] else {
        panic!("expected a divisor chain");
    };
    assert_eq!(chain.len(), 4);
    assert_eq!(chain[0].n, 5);
    assert_eq!(chain.last().unwrap().n, 2);
    for w in chain.windows(2) {
        assert_eq!(w[1].d, w[0].e);
        assert_eq!(w[0].d % w[0].e, 0);
    }
}

#[test]
fn report_json_field_names() {
    let v = serde_json::to_value(min_genus_bruteforce(5).unwrap()).unwrap();
    assert_eq!(v["value"], "8");
    assert!(v.get("witnesses").is_some());
    assert!(v.get("paper_statement").is_some());
    // both k = 2 and k = 3 reach g = 8
    assert_eq!(v["witnesses"][0]["k"], "2");
    assert_eq!(v["witnesses"][1]["k"], "3");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn witnesses_are_feasible_and_minimal(n in 1u64..5000) {
        let r = min_genus_bruteforce(n).unwrap();
        let best: i64 = r.value.to_string().parse().unwrap();
        prop_assert!(r.constraint_witnesses().count() >= 1);
        for w in r.constraint_witnesses() {
            prop_assert!(constraints_hold(w.n, w.g as i64, w.k as i64));
            let (g, k) = (w.g as i64 - 1, w.k as i64);
            prop_assert!(kernel_dim_bound(n, g, k).unwrap() > 0 || g - k - n as i64 <= -1);
            prop_assert_eq!(w.g as i64, best);
        }
    }

    #[test]
    fn triangular_threshold_matches_scan(m in 0u64..200_000) {
        prop_assert_eq!(triangular_threshold(m), triangular_scan(m));
    }

    #[test]
    fn triangular_threshold_large(m in 0u64..(1u64 << 62)) {
        let k = triangular_threshold(m) as u128;
        let m = m as u128;
        prop_assert!(k * (k + 1) / 2 >= m);
        prop_assert!(k == 0 || (k - 1) * k / 2 < m);
    }

    #[test]
    fn fibgen_is_min_of_branches(n in 1u64..100_000, b2tr in 5u64..80) {
        let v = fibgen_lower_bound(n, b2tr).unwrap();
        prop_assert_eq!(v, min_genus_closed_form(n).unwrap().min(kuga_satake_bound(b2tr)));
        prop_assert!(v <= min_genus_closed_form(n).unwrap());
    }

    #[test]
    fn fibgen_never_below_voisin(n in 3u64..100_000, b2tr in 5u64..80) {
        prop_assert!(fibgen_lower_bound(n, b2tr).unwrap() >= voisin_bound(n, b2tr).unwrap());
    }

    #[test]
    fn kernel_dim_rejects_negative_corank(n in 1u64..100, g in 0i64..100, k in -50i64..0) {
        prop_assert!(kernel_dim_bound(n, g, k).is_err());
    }

    #[test]
    fn quotient_fiber_bound(q in 1u64..1000, m in 1u64..50) {
        let d = q * m;
        prop_assert_eq!(quotient_fiber_genus_bound(d, m).unwrap(), ((q - 1) * (q - 1)) as u128);
        if m > 1 {
            prop_assert!(quotient_fiber_genus_bound(d + 1, m).is_err() || (d + 1) % m == 0);
        }
    }

    #[test]
    fn divisors_are_complete(d in 1u64..5000) {
        let expect: Vec<u64> = (1..=d).filter(|e| d % e == 0).collect();
        prop_assert_eq!(divisors(d), expect);
    }
}
