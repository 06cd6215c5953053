//! Builders for standard test posets and complexes, seeded random
//! generators, and the corpus of objects with recorded expected verdicts.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::duality::{self, CheckConfig, DualityError};
use crate::linalg::{ChainComplex, Ring};
use crate::poset::FinitePoset;
use crate::simplicial::{SimplicialComplex, SimplicialError};

#[derive(Debug, Error)]
pub enum DataIntegrityError {
    #[error("checksum mismatch for {file}: expected {expected}, found {found}")]
    Checksum { file: String, expected: String, found: String },
    #[error("{file}: {detail}")]
    Combinatorics { file: String, detail: String },
    #[error("{file}: {source}")]
    Parse { file: String, source: SimplicialError },
}

/// Bundled data files: name, contents, SHA-256.
pub const DATA_FILES: &[(&str, &str, &str)] = &[(
    "poincare_sphere_16.json",
    include_str!("../data/poincare_sphere_16.json"),
    "2ee1c18b9b18fbe1ff3897e2f8e177835b5cf6b6368c5a05008c10f26d58a02e",
)];

/// The manifest of checksums shipped next to the data files.
pub const DATA_MANIFEST: &str = include_str!("../data/MANIFEST.sha256");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Verifies every bundled data file against its recorded checksum and
/// against the manifest.
pub fn verify_data_files() -> Result<(), DataIntegrityError> {
    let manifest: BTreeMap<&str, &str> = DATA_MANIFEST
        .lines()
        .filter_map(|l| l.split_once("  "))
        .map(|(sum, name)| (name.trim(), sum.trim()))
        .collect();
    for &(name, contents, expected) in DATA_FILES {
        let found = sha256_hex(contents.as_bytes());
        let listed = manifest.get(name).copied().unwrap_or("<missing>");
        for want in [expected, listed] {
            if found != want {
                return Err(DataIntegrityError::Checksum { file: name.into(), expected: want.into(), found });
            }
        }
    }
    Ok(())
}

/// Face poset of the boundary of the `n`-simplex: the proper nonempty
/// subsets of `{0..n}` ordered by inclusion.
pub fn boundary_simplex_poset(n: usize) -> FinitePoset {
    assert!(n >= 1, "boundary of the n-simplex needs n >= 1");
    let vertices: Vec<usize> = (0..=n).collect();
    let facets: Vec<Vec<usize>> = (0..=n).map(|skip| vertices.iter().copied().filter(|&v| v != skip).collect()).collect();
    SimplicialComplex::from_facets(vertices.iter().map(|v| v.to_string()).collect(), &facets)
        .expect("facets are valid")
        .face_poset()
}

/// Face poset of the full `n`-simplex.
pub fn simplex_poset(n: usize) -> FinitePoset {
    let vertices: Vec<String> = (0..=n).map(|v| v.to_string()).collect();
    SimplicialComplex::from_facets(vertices, &[(0..=n).collect()]).expect("one facet").face_poset()
}

/// Face poset of the `n`-gon: vertices `v0..`, edges `e0..` with
/// `e_i` above `v_i` and `v_{i+1 mod n}`.
pub fn polygon_poset(n: usize) -> FinitePoset {
    assert!(n >= 3, "a polygon needs at least 3 sides");
    let mut elements: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    elements.extend((0..n).map(|i| format!("e{i}")));
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n {
        edges.push((i, n + i));
        edges.push(((i + 1) % n, n + i));
    }
    FinitePoset::from_index_edges(elements, &edges).expect("polygon covers are acyclic")
}

/// The four-element poset with `0 < 1 < 2` and `0 < 1' < 2`.
pub fn example_nonregular() -> FinitePoset {
    FinitePoset::from_covers(&["0", "1", "1'", "2"], &[("0", "1"), ("0", "1'"), ("1", "2"), ("1'", "2")]).expect("fixed example")
}

/// `k` minimal elements `m0..` below a single element `p`.
pub fn fan_poset(k: usize) -> FinitePoset {
    let mut elements: Vec<String> = (0..k).map(|i| format!("m{i}")).collect();
    elements.push("p".into());
    let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, k)).collect();
    FinitePoset::from_index_edges(elements, &edges).expect("fan covers are acyclic")
}

/// The 16-vertex triangulation of the Poincaré homology 3-sphere, loaded
/// from the bundled data file and re-verified: checksum, 16 vertices,
/// 90 tetrahedra, and every triangle in exactly two tetrahedra.
pub fn poincare_sphere_complex() -> Result<SimplicialComplex, DataIntegrityError> {
    let (file, contents, expected) = DATA_FILES[0];
    let found = sha256_hex(contents.as_bytes());
    if found != expected {
        return Err(DataIntegrityError::Checksum { file: file.into(), expected: expected.into(), found });
    }
    let k = SimplicialComplex::from_json_str(contents).map_err(|source| DataIntegrityError::Parse { file: file.into(), source })?;
    let fail = |detail: String| DataIntegrityError::Combinatorics { file: file.into(), detail };
    if k.vertices().len() != 16 {
        return Err(fail(format!("expected 16 vertices, found {}", k.vertices().len())));
    }
    let facets = k.facets();
    if facets.len() != 90 || facets.iter().any(|f| f.len() != 4) {
        return Err(fail("expected 90 tetrahedra as the only facets".into()));
    }
    let mut triangle_use: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for f in &facets {
        for skip in 0..4 {
            let t: Vec<usize> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            *triangle_use.entry(t).or_default() += 1;
        }
    }
    if let Some((t, n)) = triangle_use.iter().find(|(_, &n)| n != 2) {
        return Err(fail(format!("triangle {:?} lies in {n} tetrahedra", k.face_names(t))));
    }
    Ok(k)
}

fn fresh(taken: &BTreeSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    let mut i = 1;
    while taken.contains(&name) {
        name = format!("{base}_{i}");
        i += 1;
    }
    name
}

/// `P` plus two new incomparable elements above everything in `P`.
pub fn suspension_poset(poset: &FinitePoset) -> FinitePoset {
    let n = poset.len();
    let mut taken: BTreeSet<String> = poset.elements().iter().cloned().collect();
    let north = fresh(&taken, "N");
    taken.insert(north.clone());
    let south = fresh(&taken, "S");
    let mut elements = poset.elements().to_vec();
    elements.push(north);
    elements.push(south);
    FinitePoset::from_relation(elements, |a, b| a == b || (a < n && b >= n) || (a < n && b < n && poset.leq(a, b)))
        .expect("suspension is a partial order")
}

/// Ordinal sum `P ⊕ Q`: disjoint union with every element of `P` below
/// every element of `Q`. Names of `Q` are suffixed with `'` on clashes.
pub fn ordinal_sum(p: &FinitePoset, q: &FinitePoset) -> FinitePoset {
    let n = p.len();
    let mut taken: BTreeSet<String> = p.elements().iter().cloned().collect();
    let mut elements = p.elements().to_vec();
    for name in q.elements() {
        let mut fresh_name = name.clone();
        while taken.contains(&fresh_name) {
            fresh_name.push('\'');
        }
        taken.insert(fresh_name.clone());
        elements.push(fresh_name);
    }
    FinitePoset::from_relation(elements, |a, b| match (a < n, b < n) {
        (true, true) => p.leq(a, b),
        (false, false) => q.leq(a - n, b - n),
        (true, false) => true,
        (false, true) => false,
    })
    .expect("ordinal sum is a partial order")
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// A random poset on `size` elements: each pair `i < j` of a random
/// linear order is related with probability 1/2, then closed under
/// transitivity.
pub fn random_poset(seed: u64, size: usize) -> FinitePoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            if rng.gen_bool(0.5) {
                edges.push((order[i], order[j]));
            }
        }
    }
    FinitePoset::from_index_edges(numbered(size), &edges).expect("edges follow a linear order")
}

/// A random graded poset on `size` elements: elements are spread over
/// two to four levels (one for a single element), each element above level 0 covers at least one element of the
/// previous level, and all covers join consecutive levels.
pub fn random_graded_poset(seed: u64, size: usize) -> FinitePoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if size == 0 {
        return FinitePoset::empty();
    }
    let levels = if size == 1 { 1 } else { rng.gen_range(2..=size.min(4)) };
    // every level nonempty, the rest spread at random
    let mut level_of: Vec<usize> = (0..levels).collect();
    level_of.extend((levels..size).map(|_| rng.gen_range(0..levels)));
    level_of.sort_unstable();
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); levels];
    for (e, &l) in level_of.iter().enumerate() {
        by_level[l].push(e);
    }
    let mut edges = Vec::new();
    for l in 1..levels {
        for &e in &by_level[l] {
            let below = &by_level[l - 1];
            let forced = *below.choose(&mut rng).expect("levels are nonempty");
            for &b in below {
                if b == forced || rng.gen_bool(0.4) {
                    edges.push((b, e));
                }
            }
        }
    }
    FinitePoset::from_index_edges(numbered(size), &edges).expect("edges go up one level")
}

/// A random finite sum of shifted interval units `Z_{[p,q]}[s]` on `poset`
/// (between one and three summands, shifts in `-1..=1`). Strictly
/// functorial by construction.
pub fn random_interval_diagram(seed: u64, poset: &FinitePoset) -> Result<Diagram, DiagramError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..poset.len()).flat_map(|p| poset.at_least(p).into_iter().map(move |q| (p, q))).collect();
    if pairs.is_empty() {
        return Ok(Diagram::zero(poset, Ring::Integers));
    }
    let summands = rng.gen_range(1..=3);
    let parts = (0..summands)
        .map(|_| {
            let &(p, q) = pairs.choose(&mut rng).expect("nonempty");
            let shift = rng.gen_range(-1..=1);
            Diagram::interval_unit(poset, p, q, &ChainComplex::concentrated(Ring::Integers, shift, 1))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Diagram::direct_sum(&parts.iter().collect::<Vec<_>>())
}

/// Every partial order on the labeled set `{0..n}` (no isomorphism
/// reduction): each pair is unrelated or related in one direction, and
/// only transitive choices are kept. Counts: 1, 1, 3, 19, 219, 4231, ….
pub fn all_posets(n: usize) -> Vec<FinitePoset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut rel = vec![vec![false; n]; n];
    enumerate_relations(&pairs, 0, &mut rel, &mut out);
    out
}

fn enumerate_relations(pairs: &[(usize, usize)], at: usize, rel: &mut Vec<Vec<bool>>, out: &mut Vec<FinitePoset>) {
    let n = rel.len();
    if at == pairs.len() {
        let transitive = (0..n).all(|a| (0..n).all(|b| !rel[a][b] || (0..n).all(|c| !rel[b][c] || rel[a][c])));
        if transitive {
            let r = rel.clone();
            out.push(FinitePoset::from_relation(numbered(n), |a, b| a == b || r[a][b]).expect("transitive and antisymmetric"));
        }
        return;
    }
    let (i, j) = pairs[at];
    for choice in 0..3 {
        rel[i][j] = choice == 1;
        rel[j][i] = choice == 2;
        enumerate_relations(pairs, at + 1, rel, out);
    }
    rel[i][j] = false;
    rel[j][i] = false;
}

/// Where an expected verdict comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Stated in the published literature.
    Published,
    /// Immediate from the definitions.
    ByInspection,
    /// Worked out by hand from the definitions.
    HandDerived,
    /// Recorded from a run of both deciders (golden file).
    Recorded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub value: bool,
    pub provenance: Provenance,
}

const fn exp(value: bool, provenance: Provenance) -> Expected {
    Expected { value, provenance }
}

#[derive(Clone, Debug)]
pub enum CorpusObject {
    Poset(FinitePoset),
    Complex(SimplicialComplex),
}

/// A corpus object with expected verdicts for its poset (for complexes:
/// the face poset).
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub object: CorpusObject,
    pub verdier: Expected,
    pub gorenstein: Expected,
    pub note: String,
}

impl CorpusEntry {
    fn poset(name: &str, p: FinitePoset, verdier: Expected, gorenstein: Expected, note: &str) -> Self {
        CorpusEntry { name: name.into(), object: CorpusObject::Poset(p), verdier, gorenstein, note: note.into() }
    }

    /// The poset the verdicts refer to.
    pub fn as_poset(&self) -> FinitePoset {
        match &self.object {
            CorpusObject::Poset(p) => p.clone(),
            CorpusObject::Complex(k) => k.face_poset(),
        }
    }

    /// Small entries whose checks run in full within test budgets.
    pub fn is_large(&self) -> bool {
        matches!(self.object, CorpusObject::Complex(_))
    }
}

/// The golden file for the generated graded poset of size 6, seed 0.
pub const RANDOM_GRADED_6_0: &str = include_str!("../corpus/expected/random_graded_6_seed_0.json");

/// Recorded content of a golden file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub name: String,
    pub poset: crate::poset::PosetJson,
    pub verdier: bool,
    pub gorenstein: bool,
}

/// The full corpus. Complex entries (the Poincaré sphere) are marked by
/// [`CorpusEntry::is_large`].
pub fn corpus() -> Vec<CorpusEntry> {
    use Provenance::*;
    let mut out = vec![
        CorpusEntry::poset("empty", FinitePoset::empty(), exp(true, ByInspection), exp(true, ByInspection), "the empty poset; its cone interval is S^-1"),
        CorpusEntry::poset("point", FinitePoset::chain(1), exp(true, ByInspection), exp(false, ByInspection), "a single point is contractible"),
        CorpusEntry::poset("antichain-2", FinitePoset::antichain(2), exp(true, ByInspection), exp(true, ByInspection), "S^0"),
        CorpusEntry::poset("antichain-3", FinitePoset::antichain(3), exp(true, ByInspection), exp(false, ByInspection), "three points are not a sphere"),
        CorpusEntry::poset("chain-2", FinitePoset::chain(2), exp(false, HandDerived), exp(false, ByInspection), "P_<1 is a point"),
        CorpusEntry::poset("chain-3", FinitePoset::chain(3), exp(false, HandDerived), exp(false, ByInspection), "P_<1 is a point"),
        CorpusEntry::poset("example-nonregular", example_nonregular(), exp(false, HandDerived), exp(false, HandDerived), "0<1<2, 0<1'<2; witness pair (0,1)"),
        CorpusEntry::poset("simplex-2", simplex_poset(2), exp(true, Published), exp(false, HandDerived), "face poset of the full 2-simplex"),
        CorpusEntry::poset("simplex-2-opposite", simplex_poset(2).opposite(), exp(false, HandDerived), exp(false, HandDerived), "below a vertex sit the whole face and two edges, a cone"),
    ];
    for n in 1..=4 {
        out.push(CorpusEntry::poset(
            &format!("boundary-simplex-{n}"),
            boundary_simplex_poset(n),
            exp(true, Published),
            exp(true, Published),
            "face poset of a simplicial sphere",
        ));
    }
    for n in 3..=8 {
        out.push(CorpusEntry::poset(
            &format!("polygon-{n}"),
            polygon_poset(n),
            exp(true, Published),
            exp(true, HandDerived),
            "face poset of a regular CW circle",
        ));
    }
    for k in 2..=6 {
        out.push(CorpusEntry::poset(
            &format!("fan-{k}"),
            fan_poset(k),
            exp(k == 2, HandDerived),
            exp(false, HandDerived),
            "k minimal elements below one element",
        ));
    }
    let mut s = FinitePoset::empty();
    for i in 1..=3 {
        s = suspension_poset(&s);
        out.push(CorpusEntry::poset(
            &format!("suspension-{i}"),
            s.clone(),
            exp(true, HandDerived),
            exp(true, HandDerived),
            "iterated suspension of the empty poset, a CW sphere",
        ));
    }
    out.push(CorpusEntry::poset(
        "rp2",
        rp2_complex().face_poset(),
        exp(true, Published),
        exp(false, HandDerived),
        "face poset of the 6-vertex projective plane; H_1 has torsion",
    ));
    out.push(CorpusEntry::poset(
        "ordinal-sum-antichains",
        ordinal_sum(&FinitePoset::antichain(2), &FinitePoset::antichain(2)),
        exp(true, HandDerived),
        exp(true, HandDerived),
        "join of two copies of S^0, a circle",
    ));
    let golden: GoldenEntry = serde_json::from_str(RANDOM_GRADED_6_0).expect("golden file parses");
    out.push(CorpusEntry::poset(
        &golden.name,
        random_graded_poset(0, 6),
        exp(golden.verdier, Recorded),
        exp(golden.gorenstein, Recorded),
        "seeded random graded poset",
    ));
    out.push(CorpusEntry {
        name: "poincare-sphere".into(),
        object: CorpusObject::Complex(poincare_sphere_complex().expect("bundled data is intact")),
        verdier: exp(true, Published),
        gorenstein: exp(true, Published),
        note: "16-vertex triangulation of the Poincaré homology sphere; verdicts refer to its face poset".into(),
    });
    out
}

/// The outcome of re-deriving a corpus entry's verdicts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryCheck {
    pub name: String,
    pub elements: usize,
    pub verdier: bool,
    pub gorenstein: bool,
    pub expected_verdier: Expected,
    pub expected_gorenstein: Expected,
    /// The two Verdier deciders disagreed.
    pub inconsistent: bool,
}

impl EntryCheck {
    pub fn matches(&self) -> bool {
        !self.inconsistent && self.verdier == self.expected_verdier.value && self.gorenstein == self.expected_gorenstein.value
    }
}

/// Re-derives an entry's verdicts with both Verdier deciders and the
/// Gorenstein* decider.
pub fn verify_entry(entry: &CorpusEntry, config: &CheckConfig) -> Result<EntryCheck, DualityError> {
    let p = entry.as_poset();
    let v = duality::main_theorem_check(&p, config)?;
    let g = duality::is_gorenstein_star_poset(&p, config.ring)?;
    Ok(EntryCheck {
        name: entry.name.clone(),
        elements: p.len(),
        verdier: v.verdict,
        gorenstein: g.verdict,
        expected_verdier: entry.verdier,
        expected_gorenstein: entry.gorenstein,
        inconsistent: v.is_inconsistent(),
    })
}

/// Re-derives every corpus entry in parallel, in corpus order.
pub fn verify_corpus(config: &CheckConfig) -> Result<Vec<EntryCheck>, DualityError> {
    corpus().par_iter().map(|e| verify_entry(e, config)).collect()
}

/// The 6-vertex triangulation of the real projective plane.
pub fn rp2_complex() -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![1, 3, 5],
        vec![2, 4, 5],
    ];
    SimplicialComplex::from_facets(numbered(6), &facets).expect("valid facets")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_sizes() {
        assert_eq!(boundary_simplex_poset(1), FinitePoset::antichain(2));
        assert_eq!(boundary_simplex_poset(2).len(), 6);
        assert_eq!(boundary_simplex_poset(3).len(), 14);
        assert_eq!(polygon_poset(4).len(), 8);
        let r = polygon_poset(4).rank_function().unwrap();
        assert!(r.is_valid_for(&polygon_poset(4)));
        assert_eq!(suspension_poset(&FinitePoset::empty()).len(), 2);
        assert_eq!(example_nonregular().rank_function().unwrap().assignment.len(), 4);
        let s = suspension_poset(&FinitePoset::antichain(2));
        let h = SimplicialComplex::order_complex(&s).reduced_homology(Ring::Integers).unwrap();
        assert_eq!(h.sphere_degree(), Some(1));
    }

    #[test]
    fn polygon_three_is_triangle_boundary() {
        let p = polygon_poset(3);
        let q = boundary_simplex_poset(2);
        // same shape: 3 minimal, 3 maximal, each maximal above two minimal
        for poset in [&p, &q] {
            assert_eq!(poset.minimal_elements().len(), 3);
            assert_eq!(poset.maximal_elements().len(), 3);
            assert!(poset.maximal_elements().iter().all(|&m| poset.lower_covers(m).len() == 2));
        }
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_poset(3, 6), random_poset(3, 6));
        assert_eq!(random_graded_poset(5, 7), random_graded_poset(5, 7));
        let p = random_graded_poset(1, 6);
        assert!(p.rank_function().is_some());
        for seed in 0..20 {
            let d = random_interval_diagram(seed, &p).unwrap();
            assert!(d.validate().is_ok());
            assert_eq!(d.to_json(), random_interval_diagram(seed, &p).unwrap().to_json());
        }
    }

    #[test]
    fn poincare_data_is_intact() {
        verify_data_files().unwrap();
        let k = poincare_sphere_complex().unwrap();
        assert_eq!(k.face_counts(), vec![16, 106, 180, 90]);
        assert_eq!(k.face_poset().len(), 392);
    }

    #[test]
    fn poincare_checks_are_not_vacuous() {
        let k = poincare_sphere_complex().unwrap();
        let sd = SimplicialComplex::order_complex(&k.face_poset());
        assert_eq!(sd.face_counts()[0], 392);
        assert_eq!(sd.face_counts()[3], 90 * 24);
        assert_eq!(sd.reduced_homology(Ring::Integers).unwrap().sphere_degree(), Some(3));
        assert!(k.is_gorenstein_star(Ring::Integers).unwrap());
        let mut facets = k.facets();
        facets.pop();
        let punctured = SimplicialComplex::from_facets(k.vertices().to_vec(), &facets).unwrap();
        assert!(!punctured.is_gorenstein_star(Ring::Integers).unwrap());
    }

    #[test]
    fn golden_graded_poset_matches_generator() {
        let golden: GoldenEntry = serde_json::from_str(RANDOM_GRADED_6_0).unwrap();
        assert_eq!(FinitePoset::from_json(&golden.poset).unwrap(), random_graded_poset(0, 6));
    }
}
