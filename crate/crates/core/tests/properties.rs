//! Randomized properties over seeded posets and diagrams.

use proptest::prelude::*;

use verdier_core::corpus;
use verdier_core::diagram::Diagram;
use verdier_core::duality::{self, CheckConfig};
use verdier_core::homotopy;
use verdier_core::linalg::{ChainComplex, Ring};
use verdier_core::poset::FinitePoset;

const Z: Ring = Ring::Integers;

fn graded() -> impl Strategy<Value = FinitePoset> {
    (any::<u64>(), 0usize..=9).prop_map(|(seed, size)| corpus::random_graded_poset(seed, size))
}

fn arbitrary() -> impl Strategy<Value = FinitePoset> {
    (any::<u64>(), 0usize..=6).prop_map(|(seed, size)| corpus::random_poset(seed, size))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_verdier_criteria_agree_on_graded_posets(p in graded()) {
        let r = duality::main_theorem_check(&p, &CheckConfig::default()).unwrap();
        prop_assert!(!r.is_inconsistent(), "{}", r);
    }

    #[test]
    fn gorenstein_iff_cone_is_verdier(p in arbitrary()) {
        prop_assert!(duality::cone_check(&p, &CheckConfig::default()).unwrap().verdict);
    }

    #[test]
    fn gorenstein_self_duality(p in arbitrary()) {
        let a = duality::is_gorenstein_star_poset(&p, Z).unwrap().verdict;
        let b = duality::is_gorenstein_star_poset(&p.opposite(), Z).unwrap().verdict;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gorenstein_posets_are_graded(p in arbitrary()) {
        if duality::is_gorenstein_star_poset(&p, Z).unwrap().verdict {
            prop_assert!(p.add_bottom_and_top().rank_function().is_some());
        }
    }

    #[test]
    fn interval_diagrams_validate(p in graded(), seed in any::<u64>()) {
        let d = corpus::random_interval_diagram(seed, &p).unwrap();
        prop_assert!(d.validate().is_ok());
    }

    #[test]
    fn dualize_is_additive(p in graded(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let f = corpus::random_interval_diagram(s1, &p).unwrap();
        let g = corpus::random_interval_diagram(s2, &p).unwrap();
        let fg = Diagram::direct_sum(&[&f, &g]).unwrap();
        let (df, dg, dfg) = (duality::dualize(&f).unwrap(), duality::dualize(&g).unwrap(), duality::dualize(&fg).unwrap());
        prop_assert!(dfg.validate().is_ok());
        for r in 0..p.len() {
            let expected = df.at(r).homology().unwrap().direct_sum(&dg.at(r).homology().unwrap());
            prop_assert_eq!(dfg.at(r).homology().unwrap(), expected);
        }
    }

    #[test]
    fn gamma_of_shift_is_shifted(p in graded(), seed in any::<u64>(), k in -2i32..=2) {
        let f = corpus::random_interval_diagram(seed, &p).unwrap();
        let a = homotopy::gamma(&f).unwrap().homology().unwrap();
        let b = homotopy::gamma(&f.shift(k)).unwrap().homology().unwrap();
        prop_assert_eq!(a.shifted(k), b);
    }

    #[test]
    fn constant_diagram_limit_is_space_cohomology(p in arbitrary()) {
        let c = Diagram::constant(&p, &ChainComplex::concentrated(Z, 0, 1));
        let gamma = homotopy::gamma(&c).unwrap().homology().unwrap();
        let space = verdier_core::simplicial::SimplicialComplex::order_complex(&p).cohomology(Z).unwrap();
        prop_assert_eq!(gamma, space);
    }
}
