use std::collections::BTreeMap;

use num_traits::One;
use proptest::prelude::*;

use twistr::branching::{decompose_tensor_closed_form, TensorPair};
use twistr::character::tensor_decomposition;
use twistr::liealg::Family;
use twistr::scalars::{bracket, int, rat, BracketProduct, QSample, RatFun, Rational};
use twistr::tpg::{build_graph, eigenvalues_by_recursion};
use twistr::weight::Weight;

fn pair() -> impl Strategy<Value = TensorPair> {
    prop_oneof![
        (1usize..=5, 1usize..=3, 0usize..=3).prop_filter_map("k+r <= l", |(l, k, dr)| {
            TensorPair::new(Family::A2Even, l, k, k + dr).ok()
        }),
        (3usize..=5, 1usize..=3, 0usize..=2).prop_map(|(l, k, dr)| TensorPair::new(
            Family::A2Odd,
            l,
            k,
            k + dr
        )
        .unwrap()),
        (2usize..=4, 0usize..=2, 1usize..=3).prop_filter_map("a <= b", |(l, a, b)| {
            TensorPair::new(Family::D2, l, a, b).ok()
        }),
    ]
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=12)
        .prop_filter("nonzero", |(p, _)| *p != 0)
        .prop_map(|(p, q)| rat(p, q))
}

fn w_sample() -> impl Strategy<Value = QSample> {
    (1i64..=9, 1i64..=9)
        .prop_filter("w != 1", |(p, q)| p != q)
        .prop_map(|(p, q)| QSample::from_ratio(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalues_are_unitary_and_trivial_at_one(p in pair(), w in w_sample(), u in nonzero_rational()) {
        let t = eigenvalues_by_recursion(&build_graph(&p).unwrap()).unwrap();
        for v in t.eval(&w, &int(1)).unwrap().values() {
            prop_assert!(v.is_one());
        }
        if let (Ok(a), Ok(b)) = (t.eval(&w, &u), t.eval(&w, &u.recip())) {
            for (k, x) in &a {
                prop_assert_eq!(x * &b[k], int(1));
            }
        }
    }

    #[test]
    fn top_component_eigenvalue_is_one(p in pair()) {
        let t = eigenvalues_by_recursion(&build_graph(&p).unwrap()).unwrap();
        prop_assert!(t.get(&p.top()).unwrap().is_one());
    }

    #[test]
    fn branching_matches_character_oracle(p in pair()) {
        let table = decompose_tensor_closed_form(&p).unwrap();
        let oracle = tensor_decomposition(p.spec().l0, &p.lambda(), &p.mu()).unwrap();
        let mine: BTreeMap<Weight, u64> = table.weights().map(|w| (w.clone(), 1)).collect();
        prop_assert_eq!(oracle, mine);
    }

    #[test]
    fn parities_are_constant_on_parents(p in pair()) {
        let g = build_graph(&p).unwrap();
        let mut seen = BTreeMap::new();
        for n in &g.nodes {
            let prev = seen.insert(n.parent.clone(), n.parity);
            prop_assert!(prev.is_none() || prev == Some(n.parity));
        }
        prop_assert_eq!(g.nodes[0].parity, 1);
    }

    #[test]
    fn bracket_product_evaluates_symbolically(
        a in 1i64..=8, b in 1i64..=8, sa in prop::bool::ANY, sb in prop::bool::ANY,
        w in w_sample(), u in nonzero_rational(),
    ) {
        let s = |x: bool| if x { 1 } else { -1 };
        let mut p = BracketProduct::single(&int(a), s(sa));
        p.mul_bracket(&int(b), s(sb), -1);
        let sym = p.eval(&w, &RatFun::var()).unwrap();
        if let (Ok(x), Ok(y)) = (bracket(&int(a), s(sa), &u, &w), bracket(&int(b), s(sb), &u, &w)) {
            if let (Ok(direct), Some(via)) = (p.eval(&w, &u), sym.eval(&u)) {
                prop_assert_eq!(&direct, &via);
                if !num_traits::Zero::is_zero(&y) {
                    prop_assert_eq!(direct, x / y);
                }
            }
        }
        prop_assert!(p.mul(&p.inverse()).is_one());
    }
}
