//! Finite abstract simplicial complexes, order complexes and links, with
//! sphere-homology and Gorenstein* tests.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{ChainComplex, HomologySummary, LinalgError, Matrix, Ring};
use crate::poset::FinitePoset;

#[derive(Debug, Error)]
pub enum SimplicialError {
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<String>),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("malformed complex JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite abstract simplicial complex. Faces are sorted vectors of
/// vertex indices, grouped by dimension and sorted lexicographically
/// within each dimension. The empty face is implicit.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    faces: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

/// The JSON exchange format: `{"facets": [[v, ...], ...]}` with an
/// optional `"vertices"` list fixing the vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    pub facets: Vec<Vec<String>>,
}

impl SimplicialComplex {
    /// The complex with no faces (dimension −1, the sphere `S^{−1}`).
    pub fn empty() -> Self {
        Self::from_face_set(Vec::new(), HashSet::new())
    }

    /// Downward closure of `facets`, which index into `vertices`. Vertices
    /// not used by any facet become isolated vertices.
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<usize>]) -> Result<Self, SimplicialError> {
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(SimplicialError::DuplicateVertex(v.clone()));
            }
        }
        let mut set: HashSet<Vec<usize>> = HashSet::new();
        for v in 0..vertices.len() {
            set.insert(vec![v]);
        }
        for facet in facets {
            let mut f = facet.clone();
            f.sort_unstable();
            f.dedup();
            if let Some(&bad) = f.iter().find(|&&v| v >= vertices.len()) {
                return Err(SimplicialError::UnknownVertex(format!("#{bad}")));
            }
            if f.is_empty() || set.contains(&f) {
                continue;
            }
            // all nonempty subsets
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                set.insert(sub);
            }
        }
        Ok(Self::from_face_set(vertices, set))
    }

    /// Like [`SimplicialComplex::from_facets`] with facets given by name.
    pub fn from_named_facets<S: AsRef<str>>(vertices: Option<Vec<String>>, facets: &[Vec<S>]) -> Result<Self, SimplicialError> {
        let vertices = match vertices {
            Some(v) => v,
            None => {
                let mut order = Vec::new();
                let mut seen = HashSet::new();
                for f in facets {
                    for v in f {
                        if seen.insert(v.as_ref().to_string()) {
                            order.push(v.as_ref().to_string());
                        }
                    }
                }
                order
            }
        };
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut idx_facets = Vec::with_capacity(facets.len());
        for f in facets {
            let mut row = Vec::with_capacity(f.len());
            for v in f {
                let i = index.get(v.as_ref()).ok_or_else(|| SimplicialError::UnknownVertex(v.as_ref().to_string()))?;
                row.push(*i);
            }
            idx_facets.push(row);
        }
        Self::from_facets(vertices.clone(), &idx_facets)
    }

    /// Builds from a set of faces already closed under nonempty subsets.
    fn from_face_set(vertices: Vec<String>, set: HashSet<Vec<usize>>) -> Self {
        let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
        for f in set {
            let d = f.len() - 1;
            if faces.len() <= d {
                faces.resize(d + 1, Vec::new());
            }
            faces[d].push(f);
        }
        for layer in &mut faces {
            layer.sort_unstable();
        }
        let lookup = faces
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
            .collect();
        SimplicialComplex { vertices, faces, lookup }
    }

    /// Δ(P): vertices are the elements of `P`, faces its nonempty chains.
    pub fn order_complex(poset: &FinitePoset) -> Self {
        let set: HashSet<Vec<usize>> = poset
            .strict_chains(None)
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Self::from_face_set(poset.elements().to_vec(), set)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Maximum face dimension; −1 when there are no faces.
    pub fn dim(&self) -> i32 {
        self.faces.len() as i32 - 1
    }

    /// Faces of dimension `d`, sorted.
    pub fn faces_of_dim(&self, d: i32) -> &[Vec<usize>] {
        if d < 0 {
            return &[];
        }
        self.faces.get(d as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of faces in each dimension `0..=dim`.
    pub fn face_counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// All nonempty faces, by dimension then lexicographically.
    pub fn faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter().flatten()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        match face.len() {
            0 => true,
            k => self.lookup.get(k - 1).is_some_and(|m| m.contains_key(face)),
        }
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, SimplicialError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SimplicialError::UnknownVertex(name.to_string()))
    }

    pub fn face_names(&self, face: &[usize]) -> Vec<String> {
        face.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// Faces not contained in a larger face.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut covered: HashSet<&[usize]> = HashSet::new();
        let mut sub_buf = Vec::new();
        let mut maximal = Vec::new();
        for d in (0..self.faces.len()).rev() {
            for f in &self.faces[d] {
                if !covered.contains(f.as_slice()) {
                    maximal.push(f.clone());
                }
            }
            if d > 0 {
                for f in &self.faces[d] {
                    for skip in 0..f.len() {
                        sub_buf.clear();
                        sub_buf.extend(f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                        if let Some((key, _)) = self.lookup[d - 1].get_key_value(&sub_buf) {
                            covered.insert(key.as_slice());
                        }
                    }
                }
            }
        }
        maximal.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        maximal
    }

    /// The link of `sigma`: faces `τ` disjoint from `σ` with `τ ∪ σ` a face.
    /// The link of the empty face is the complex itself. Vertices of the
    /// result are those occurring in the link, in the original order.
    pub fn link(&self, sigma: &[usize]) -> Result<SimplicialComplex, SimplicialError> {
        let mut s = sigma.to_vec();
        s.sort_unstable();
        s.dedup();
        if !self.contains_face(&s) {
            return Err(SimplicialError::NotAFace(s.iter().map(|&v| self.vertices.get(v).cloned().unwrap_or_else(|| format!("#{v}"))).collect()));
        }
        if s.is_empty() {
            return Ok(self.clone());
        }
        let mut set: HashSet<Vec<usize>> = HashSet::new();
        for layer in self.faces.iter().skip(s.len()) {
            for f in layer {
                if is_sorted_subset(&s, f) {
                    set.insert(f.iter().copied().filter(|v| s.binary_search(v).is_err()).collect());
                }
            }
        }
        // reindex onto the vertices that occur
        let mut used: Vec<usize> = set.iter().filter(|f| f.len() == 1).map(|f| f[0]).collect();
        used.sort_unstable();
        let renumber: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let vertices = used.iter().map(|&v| self.vertices[v].clone()).collect();
        let set = set.into_iter().map(|f| f.iter().map(|v| renumber[v]).collect()).collect();
        Ok(Self::from_face_set(vertices, set))
    }

    /// Simplicial chains with the alternating-sign boundary. When
    /// `augmented`, the empty face spans degree −1 (reduced homology).
    pub fn chain_complex(&self, ring: Ring, augmented: bool) -> Result<ChainComplex, SimplicialError> {
        let mut ranks = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        if augmented {
            ranks.insert(-1, 1);
            let n0 = self.faces_of_dim(0).len();
            diffs.insert(0, Matrix::from_triplets(1, n0, (0..n0).map(|j| (0, j, 1))));
        }
        for (d, layer) in self.faces.iter().enumerate() {
            ranks.insert(d as i32, layer.len());
            if d == 0 {
                continue;
            }
            let lower = &self.lookup[d - 1];
            let mut entries = Vec::with_capacity(layer.len() * (d + 1));
            let mut buf = Vec::with_capacity(d);
            for (j, f) in layer.iter().enumerate() {
                for skip in 0..f.len() {
                    buf.clear();
                    buf.extend(f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    let i = lower[&buf];
                    entries.push((i, j, if skip % 2 == 0 { 1 } else { -1 }));
                }
            }
            diffs.insert(d as i32, Matrix::from_triplets(self.faces[d - 1].len(), layer.len(), entries));
        }
        Ok(ChainComplex::new(ring, ranks, diffs)?)
    }

    /// Reduced homology, including degree −1.
    pub fn reduced_homology(&self, ring: Ring) -> Result<HomologySummary, SimplicialError> {
        Ok(self.chain_complex(ring, true)?.homology()?)
    }

    /// Reduced cohomology, `H̃^n` in homological degree −n.
    pub fn reduced_cohomology(&self, ring: Ring) -> Result<HomologySummary, SimplicialError> {
        Ok(self.chain_complex(ring, true)?.cohomology()?)
    }

    /// Unreduced cohomology, `H^n` in homological degree −n.
    pub fn cohomology(&self, ring: Ring) -> Result<HomologySummary, SimplicialError> {
        Ok(self.chain_complex(ring, false)?.cohomology()?)
    }

    /// `Some(d)` when the reduced homology is the ring concentrated in the
    /// single degree `d ≥ −1`.
    pub fn is_sphere_homology(&self, ring: Ring) -> Result<Option<i32>, SimplicialError> {
        Ok(self.reduced_homology(ring)?.sphere_degree())
    }

    /// True when `K` has the reduced homology of `S^n` for `n = dim K` and
    /// every nonempty face `σ` has a link with the reduced homology of
    /// `S^{n−|σ|}`.
    pub fn is_gorenstein_star(&self, ring: Ring) -> Result<bool, SimplicialError> {
        Ok(self.gorenstein_star_failure(ring)?.is_none())
    }

    /// The first face (in face order; the empty face first) whose link
    /// fails the sphere condition, or `None` when `K` is Gorenstein*.
    pub fn gorenstein_star_failure(&self, ring: Ring) -> Result<Option<Vec<usize>>, SimplicialError> {
        let n = self.dim();
        if self.is_sphere_homology(ring)? != Some(n) {
            return Ok(Some(Vec::new()));
        }
        let faces: Vec<&Vec<usize>> = self.faces().collect();
        let verdicts = faces
            .par_iter()
            .map(|f| -> Result<bool, SimplicialError> {
                let want = n - f.len() as i32;
                Ok(self.link(f)?.is_sphere_homology(ring)? == Some(want))
            })
            .collect::<Result<Vec<bool>, _>>()?;
        Ok(verdicts.iter().position(|ok| !ok).map(|i| faces[i].clone()))
    }

    /// Unreduced Euler characteristic from face counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Poset of nonempty faces ordered by inclusion. Faces are named by
    /// their vertex names joined with commas and appear by dimension, then
    /// lexicographically.
    pub fn face_poset(&self) -> FinitePoset {
        let mut names = Vec::with_capacity(self.face_count());
        let mut offset = Vec::with_capacity(self.faces.len());
        for layer in &self.faces {
            offset.push(names.len());
            for f in layer {
                names.push(self.face_names(f).join(","));
            }
        }
        let mut edges = Vec::new();
        let mut buf = Vec::new();
        for d in 1..self.faces.len() {
            for (j, f) in self.faces[d].iter().enumerate() {
                for skip in 0..f.len() {
                    buf.clear();
                    buf.extend(f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    edges.push((offset[d - 1] + self.lookup[d - 1][&buf], offset[d] + j));
                }
            }
        }
        FinitePoset::from_index_edges(names, &edges).expect("face names are distinct and inclusion is acyclic")
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: Some(self.vertices.clone()),
            facets: self.facets().iter().map(|f| self.face_names(f)).collect(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self, SimplicialError> {
        Self::from_named_facets(json.vertices.clone(), &json.facets)
    }

    pub fn from_json_str(s: &str) -> Result<Self, SimplicialError> {
        let json: ComplexJson = serde_json::from_str(s).map_err(|e| SimplicialError::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}

fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: Ring = Ring::Integers;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::from_facets(names(3), &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    pub(crate) fn rp2() -> SimplicialComplex {
        let facets = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
            [1, 2, 4], [2, 3, 5], [1, 3, 4], [1, 3, 5], [2, 4, 5],
        ];
        SimplicialComplex::from_facets(names(6), &facets.map(|f| f.to_vec())).unwrap()
    }

    #[test]
    fn order_complexes() {
        let full = SimplicialComplex::order_complex(&FinitePoset::chain(3));
        assert_eq!(full.face_counts(), vec![3, 3, 1]);
        let two = SimplicialComplex::order_complex(&FinitePoset::antichain(2));
        assert_eq!(two.face_counts(), vec![2]);
        let e = FinitePoset::from_covers(&["0", "1", "1'", "2"], &[("0", "1"), ("0", "1'"), ("1", "2"), ("1'", "2")]).unwrap();
        let path = SimplicialComplex::order_complex(&e.induced(&[0, 1, 2]));
        assert_eq!(path.facets(), vec![vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn links() {
        let full = SimplicialComplex::from_facets(names(3), &[vec![0, 1, 2]]).unwrap();
        assert_eq!(full.link(&[0]).unwrap().facets(), vec![vec![0, 1]]);
        let l = hollow_triangle().link(&[0]).unwrap();
        assert_eq!(l.vertices(), &["1", "2"]);
        assert_eq!(l.face_counts(), vec![2]);
        assert_eq!(hollow_triangle().link(&[]).unwrap().face_counts(), vec![3, 3]);
        assert!(matches!(full.link(&[0, 5]), Err(SimplicialError::NotAFace(_))));
    }

    #[test]
    fn reduced_homology_examples() {
        let empty = SimplicialComplex::empty();
        assert_eq!(empty.reduced_homology(Z).unwrap(), HomologySummary::concentrated(-1, 1));
        assert_eq!(empty.is_sphere_homology(Z).unwrap(), Some(-1));
        assert_eq!(hollow_triangle().reduced_homology(Z).unwrap(), HomologySummary::concentrated(1, 1));
        let h = rp2().reduced_homology(Z).unwrap();
        assert_eq!(h.to_string(), "H_1 = Z/2");
        let point = SimplicialComplex::from_facets(names(1), &[]).unwrap();
        assert!(point.reduced_homology(Z).unwrap().is_zero());
        assert_eq!(point.is_sphere_homology(Z).unwrap(), None);
    }

    #[test]
    fn rp2_over_f2_matches_universal_coefficients() {
        let h = rp2().chain_complex(Ring::Prime(2), false).unwrap().homology().unwrap();
        let dims: Vec<(i32, usize)> = h.degrees().map(|(d, g)| (d, g.rank)).collect();
        assert_eq!(dims, vec![(0, 1), (1, 1), (2, 1)]);
    }

    #[test]
    fn boundary_matrix_shapes() {
        let edge = SimplicialComplex::from_facets(names(2), &[vec![0, 1]]).unwrap();
        let c = edge.chain_complex(Z, true).unwrap();
        assert_eq!((c.rank(1), c.rank(0), c.rank(-1)), (1, 2, 1));
        assert!(c.homology().unwrap().is_zero());
        let d1 = hollow_triangle().chain_complex(Z, true).unwrap().differential(1);
        assert_eq!(d1.shape(), (3, 3));
        assert!(d1.to_dense_rows().iter().all(|r| r.iter().filter(|x| **x != 0).count() == 2));
    }

    #[test]
    fn gorenstein_examples() {
        let tetra_boundary: Vec<Vec<usize>> = (0..4).map(|skip| (0..4).filter(|&v| v != skip).collect()).collect();
        let s2 = SimplicialComplex::from_facets(names(4), &tetra_boundary).unwrap();
        assert!(s2.is_gorenstein_star(Z).unwrap());
        let full = SimplicialComplex::from_facets(names(3), &[vec![0, 1, 2]]).unwrap();
        assert!(!full.is_gorenstein_star(Z).unwrap());
        assert!(hollow_triangle().is_gorenstein_star(Z).unwrap());
        assert!(SimplicialComplex::empty().is_gorenstein_star(Z).unwrap());
        // RP² is a homology sphere over F2 only in its links, not globally
        assert!(!rp2().is_gorenstein_star(Ring::Prime(2)).unwrap());
    }

    #[test]
    fn euler_characteristic_matches_homology() {
        for k in [hollow_triangle(), rp2()] {
            let h = k.chain_complex(Z, false).unwrap().homology().unwrap();
            assert_eq!(h.euler_characteristic(), k.euler_characteristic());
        }
    }

    #[test]
    fn face_poset_and_json() {
        let p = hollow_triangle().face_poset();
        assert_eq!(p.len(), 6);
        assert_eq!(p.covers().len(), 6);
        let json = serde_json::to_string(&rp2().to_json()).unwrap();
        let back = SimplicialComplex::from_json_str(&json).unwrap();
        assert_eq!(back.face_counts(), rp2().face_counts());
        let no_vertices = SimplicialComplex::from_json_str(r#"{"facets":[["a","b"],["b","c"]]}"#).unwrap();
        assert_eq!(no_vertices.vertices(), &["a", "b", "c"]);
    }
}
