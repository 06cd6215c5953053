//! Every corpus entry's expected verdicts are re-derived by the deciders.

use verdier_core::corpus::{self, GoldenEntry, Provenance};
use verdier_core::duality::{self, CheckConfig, SphereTest, Witness};
use verdier_core::linalg::Ring;
use verdier_core::poset::FinitePoset;

const Z: Ring = Ring::Integers;

#[test]
fn corpus_verdicts_match_expectations() {
    let config = CheckConfig { sample_pairs: Some(50), seed: 1, ..CheckConfig::default() };
    let checks = corpus::verify_corpus(&config).unwrap();
    assert_eq!(checks.len(), corpus::corpus().len());
    for c in &checks {
        assert!(c.matches(), "{c:?}");
    }
}

#[test]
fn corpus_names_are_unique_and_provenance_recorded() {
    let entries = corpus::corpus();
    let mut names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), entries.len());
    let recorded = entries.iter().filter(|e| e.verdier.provenance == Provenance::Recorded).count();
    assert_eq!(recorded, 1);
}

#[test]
fn golden_random_graded_poset() {
    let golden: GoldenEntry = serde_json::from_str(corpus::RANDOM_GRADED_6_0).unwrap();
    let p = corpus::random_graded_poset(0, 6);
    assert_eq!(FinitePoset::from_json(&golden.poset).unwrap(), p);
    let report = duality::main_theorem_check(&p, &CheckConfig::default()).unwrap();
    assert!(!report.is_inconsistent());
    assert_eq!(report.verdict, golden.verdier);
    assert_eq!(duality::is_gorenstein_star_poset(&p, Z).unwrap().verdict, golden.gorenstein);
}

#[test]
fn boundary_simplices_are_gorenstein_up_to_five() {
    for n in 1..=5 {
        assert!(duality::is_gorenstein_star_poset(&corpus::boundary_simplex_poset(n), Z).unwrap().verdict, "n = {n}");
    }
}

#[test]
fn polygon_verdicts_do_not_depend_on_n() {
    for n in 3..=12 {
        let p = corpus::polygon_poset(n);
        assert!(duality::is_verdier(&p, &CheckConfig::default()).unwrap().verdict, "n = {n}");
        assert!(duality::is_gorenstein_star_poset(&p, Z).unwrap().verdict, "n = {n}");
    }
}

#[test]
fn iterated_suspensions_stay_gorenstein() {
    let mut p = corpus::polygon_poset(4);
    for _ in 0..3 {
        p = corpus::suspension_poset(&p);
        assert!(duality::is_gorenstein_star_poset(&p, Z).unwrap().verdict);
    }
}

#[test]
fn homology_and_cohomology_sphere_tests_agree_on_corpus() {
    for e in corpus::corpus() {
        let p = e.as_poset();
        let h = duality::is_gorenstein_star_poset_with(&p, Z, SphereTest::Homology).unwrap().verdict;
        let c = duality::is_gorenstein_star_poset_with(&p, Z, SphereTest::Cohomology).unwrap().verdict;
        assert_eq!(h, c, "{}", e.name);
    }
}

#[test]
fn gorenstein_is_self_dual_on_corpus() {
    for e in corpus::corpus() {
        let p = e.as_poset();
        let a = duality::is_gorenstein_star_poset(&p, Z).unwrap().verdict;
        let b = duality::is_gorenstein_star_poset(&p.opposite(), Z).unwrap().verdict;
        assert_eq!(a, b, "{}", e.name);
    }
}

#[test]
fn verdier_is_not_self_dual() {
    // the full 2-simplex face poset is Verdier, its opposite is not
    let s = corpus::simplex_poset(2);
    assert!(duality::is_verdier(&s, &CheckConfig::default()).unwrap().verdict);
    assert!(!duality::is_verdier(&s.opposite(), &CheckConfig::default()).unwrap().verdict);
}

#[test]
fn projective_plane_fails_only_globally() {
    // every proper interval is a sphere (a homology manifold); the whole
    // poset is not, over any coefficients
    let p = corpus::rp2_complex().face_poset();
    for ring in [Z, Ring::Prime(2), Ring::Prime(3)] {
        let r = duality::is_gorenstein_star_poset(&p, ring).unwrap();
        assert!(!r.verdict);
        let Some(Witness::Interval { p: low, q: high, reduced_homology: homology }) = r.witnesses.last() else { panic!("{r}") };
        assert_eq!((low.as_str(), high.as_str()), ("⊥", "⊤"));
        if ring == Z {
            assert_eq!(homology.at(1).torsion, vec![2]);
        }
    }
}

#[test]
fn data_manifest_matches() {
    corpus::verify_data_files().unwrap();
}
