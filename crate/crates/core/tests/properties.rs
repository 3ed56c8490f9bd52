use ncgap::instance::{gap_lower_bound, Distance, GapParams};
use ncgap::packing::{fractional_packing, generalized_sparsity, Demand, Mode, PackingInstance, Tau};
use ncgap::rational::{self, ratio, Rational};
use proptest::prelude::*;

fn params(a: i64, b: u64, f: u64, m: u64, r: u64) -> GapParams {
    GapParams { a: ratio(a, 1), b: Distance::Finite(b), f, m, r }
}

proptest! {
    #[test]
    fn bound_grows_with_r_and_b_and_shrinks_with_f_and_m(
        a in 1i64..5, b in 1u64..50, f in 1u64..100, m in 1u64..1000, r in 0u64..1000,
    ) {
        let base = gap_lower_bound(&params(a, b, f, m, r)).unwrap();
        prop_assert!(gap_lower_bound(&params(a, b, f, m, r + 1)).unwrap() >= base);
        prop_assert!(gap_lower_bound(&params(a, b + 1, f, m, r)).unwrap() >= base);
        prop_assert!(gap_lower_bound(&params(a + 1, b, f, m, r)).unwrap() >= base);
        prop_assert!(gap_lower_bound(&params(a, b, f + 1, m, r)).unwrap() <= base);
        prop_assert!(gap_lower_bound(&params(a, b, f, m + 1, r)).unwrap() <= base);
        let inf = GapParams { b: Distance::Infinite, ..params(a, b, f, m, r) };
        prop_assert!(gap_lower_bound(&inf).unwrap() >= base);
    }

    #[test]
    fn rationals_round_trip_through_json(n in -1000i64..1000, d in 1i64..1000) {
        let q = ratio(n, d);
        let text = serde_json::to_string(&rational::Exact(q.clone())).unwrap();
        let back: rational::Exact = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.0, q);
    }

    #[test]
    fn packing_sits_below_sparsity(
        n in 3usize..7,
        extra in proptest::collection::vec((0u32..7, 0u32..7, 1u64..3), 0..4),
        terms in proptest::collection::vec(proptest::collection::btree_set(0u32..7, 2..4), 1..3),
    ) {
        let mut edges: Vec<(u32, u32)> = (1..n as u32).map(|v| (v - 1, v)).collect();
        let mut cap = vec![1u64; edges.len()];
        for (a, b, c) in extra {
            if a != b && (a as usize) < n && (b as usize) < n {
                edges.push((a, b));
                cap.push(c);
            }
        }
        let sessions: Vec<Demand> = terms
            .into_iter()
            .map(|t| Demand { terminals: t.into_iter().map(|v| v % n as u32).collect(), demand: 1 })
            .collect();
        let inst = PackingInstance::new(n, edges, cap, sessions).unwrap();
        let exact = fractional_packing(&inst, Mode::exact()).unwrap();
        match (exact.tau, generalized_sparsity(&inst)) {
            (Tau::Exact { value }, Ok(s)) => {
                prop_assert!(value <= s.psi);
                let approx = fractional_packing(&inst, Mode::approx()).unwrap();
                let (lo, hi): (&Rational, &Rational) = (approx.tau.lower().unwrap(), approx.tau.upper().unwrap());
                prop_assert!(lo <= &value && &value <= hi);
            }
            (Tau::Unbounded, _) => {}
            (t, s) => prop_assert!(false, "{:?} {:?}", t, s),
        }
    }
}
