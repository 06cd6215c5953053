use std::collections::BTreeMap;

use super::snf::{invariants_many, Invariants};
use super::{GroupSummary, HomologySummary, LinalgError, Matrix, Ring};

/// A bounded complex of finitely generated free modules with homological
/// grading: `d_n : C_n -> C_{n-1}` is a `rank(n-1) x rank(n)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    ranks: BTreeMap<i32, usize>,
    diffs: BTreeMap<i32, Matrix>,
}

impl ChainComplex {
    /// Validates shapes and `d ∘ d = 0` (in `ring`). Zero ranks and zero
    /// differentials may be omitted.
    pub fn new(ring: Ring, ranks: BTreeMap<i32, usize>, diffs: BTreeMap<i32, Matrix>) -> Result<Self, LinalgError> {
        let c = Self::new_unchecked(ring, ranks, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    fn new_unchecked(ring: Ring, mut ranks: BTreeMap<i32, usize>, diffs: BTreeMap<i32, Matrix>) -> Result<Self, LinalgError> {
        ranks.retain(|_, r| *r > 0);
        let mut kept = BTreeMap::new();
        for (n, d) in diffs {
            let want = (ranks.get(&(n - 1)).copied().unwrap_or(0), ranks.get(&n).copied().unwrap_or(0));
            if d.shape() != want {
                return Err(LinalgError::Shape(format!(
                    "differential in degree {n} is {:?}, expected {:?}",
                    d.shape(),
                    want
                )));
            }
            let d = d.reduced(ring);
            if !d.is_zero() {
                kept.insert(n, d);
            }
        }
        Ok(ChainComplex { ring, ranks, diffs: kept })
    }

    fn check_square_zero(&self) -> Result<(), LinalgError> {
        for (n, d) in &self.diffs {
            if let Some(below) = self.diffs.get(&(n - 1)) {
                let dd = below.mul(d)?;
                if !dd.is_zero_in(self.ring) {
                    return Err(LinalgError::NotAComplex(*n));
                }
            }
        }
        Ok(())
    }

    pub fn zero(ring: Ring) -> Self {
        ChainComplex { ring, ranks: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// `ring^rank` in a single degree.
    pub fn concentrated(ring: Ring, degree: i32, rank: usize) -> Self {
        let mut ranks = BTreeMap::new();
        ranks.insert(degree, rank);
        Self::new_unchecked(ring, ranks, BTreeMap::new()).expect("no differentials")
    }

    /// Two-term complex `ring^cols --m--> ring^rows` in degrees `degree`, `degree - 1`.
    pub fn two_term(ring: Ring, degree: i32, m: Matrix) -> Self {
        let mut ranks = BTreeMap::new();
        ranks.insert(degree, m.cols());
        ranks.insert(degree - 1, m.rows());
        let mut diffs = BTreeMap::new();
        diffs.insert(degree, m);
        Self::new(ring, ranks, diffs).expect("two-term complexes square to zero")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self, n: i32) -> usize {
        self.ranks.get(&n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i32, usize> {
        &self.ranks
    }

    /// Total rank over all degrees.
    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    /// `d_n`, as an explicit (possibly zero) matrix.
    pub fn differential(&self, n: i32) -> Matrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rank(n - 1), self.rank(n)))
    }

    pub(crate) fn differential_ref(&self, n: i32) -> Option<&Matrix> {
        self.diffs.get(&n)
    }

    /// Smallest and largest degrees with nonzero rank.
    pub fn support(&self) -> Option<(i32, i32)> {
        Some((*self.ranks.keys().next()?, *self.ranks.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Degree `n` of the result is degree `n - k` of `self`; differentials
    /// pick up the sign `(-1)^k`.
    pub fn shift(&self, k: i32) -> ChainComplex {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        ChainComplex {
            ring: self.ring,
            ranks: self.ranks.iter().map(|(n, r)| (n + k, *r)).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(n, d)| (n + k, if sign == 1 { d.clone() } else { d.neg().reduced(self.ring) }))
                .collect(),
        }
    }

    /// The dual complex `Hom(C, ring)`, regraded homologically:
    /// degree `-n` holds `C_n^*` and the differential is the transpose.
    /// Its homology is the cohomology of `self` with `H^n` in degree `-n`.
    pub fn dual(&self) -> ChainComplex {
        ChainComplex {
            ring: self.ring,
            ranks: self.ranks.iter().map(|(n, r)| (-n, *r)).collect(),
            // d_n : C_n -> C_{n-1} dualizes to C_{n-1}^* -> C_n^*, i.e. degree 1-n -> -n
            diffs: self.diffs.iter().map(|(n, d)| (1 - n, d.transpose())).collect(),
        }
    }

    pub fn direct_sum(parts: &[&ChainComplex]) -> Result<ChainComplex, LinalgError> {
        let Some(first) = parts.first() else {
            return Ok(ChainComplex::zero(Ring::Integers));
        };
        let ring = first.ring;
        if parts.iter().any(|c| c.ring != ring) {
            return Err(LinalgError::RingMismatch);
        }
        let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
        for c in parts {
            for (n, r) in &c.ranks {
                *ranks.entry(*n).or_insert(0) += r;
            }
        }
        let mut diffs = BTreeMap::new();
        for n in ranks.keys().copied().collect::<Vec<_>>() {
            if !ranks.contains_key(&(n - 1)) {
                continue;
            }
            let heights: Vec<usize> = parts.iter().map(|c| c.rank(n - 1)).collect();
            let widths: Vec<usize> = parts.iter().map(|c| c.rank(n)).collect();
            let owned: Vec<Option<&Matrix>> = parts.iter().map(|c| c.diffs.get(&n)).collect();
            let blocks: Vec<Vec<Option<&Matrix>>> = (0..parts.len())
                .map(|i| (0..parts.len()).map(|j| if i == j { owned[i] } else { None }).collect())
                .collect();
            diffs.insert(n, Matrix::block(&heights, &widths, &blocks)?);
        }
        Self::new_unchecked(ring, ranks, diffs)
    }

    /// Homology via Smith normal form over Z, or ranks over a prime field.
    pub fn homology(&self) -> Result<HomologySummary, LinalgError> {
        let degrees: Vec<i32> = self.diffs.keys().copied().collect();
        let mats: Vec<&Matrix> = degrees.iter().map(|n| &self.diffs[n]).collect();
        let inv: BTreeMap<i32, Invariants> = degrees.into_iter().zip(invariants_many(&mats, self.ring)?).collect();
        let none = Invariants::default();
        let mut h = HomologySummary::new();
        for (&n, &r) in &self.ranks {
            let out = inv.get(&n).unwrap_or(&none);
            let incoming = inv.get(&(n + 1)).unwrap_or(&none);
            let free = r - out.rank - incoming.rank;
            h.set(n, GroupSummary { rank: free, torsion: incoming.torsion.clone() });
        }
        Ok(h)
    }

    /// Homology of the dual complex, i.e. cohomology with `H^n` in degree `-n`.
    pub fn cohomology(&self) -> Result<HomologySummary, LinalgError> {
        self.dual().homology()
    }
}

/// A degreewise family of matrices `f_n : C_n -> D_n` commuting with the
/// differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, components: BTreeMap<i32, Matrix>) -> Result<Self, LinalgError> {
        if source.ring != target.ring {
            return Err(LinalgError::RingMismatch);
        }
        let ring = source.ring;
        let mut kept = BTreeMap::new();
        for (n, f) in components {
            let want = (target.rank(n), source.rank(n));
            if f.shape() != want {
                return Err(LinalgError::Shape(format!(
                    "chain map component in degree {n} is {:?}, expected {:?}",
                    f.shape(),
                    want
                )));
            }
            let f = f.reduced(ring);
            if !f.is_zero() {
                kept.insert(n, f);
            }
        }
        let map = ChainMap { source, target, components: kept };
        if let Some(n) = map.first_noncommuting_degree()? {
            return Err(LinalgError::NotAChainMap(n));
        }
        Ok(map)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let components = c.ranks.iter().map(|(n, r)| (*n, Matrix::identity(*r))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    /// Multiplication by `k` on `c`.
    pub fn scalar(c: &ChainComplex, k: i64) -> Self {
        let components = c
            .ranks
            .iter()
            .map(|(n, r)| (*n, Matrix::scalar_identity(*r, k).reduced(c.ring)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, n: i32) -> Matrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.rank(n), self.source.rank(n)))
    }

    pub fn components(&self) -> &BTreeMap<i32, Matrix> {
        &self.components
    }

    fn first_noncommuting_degree(&self) -> Result<Option<i32>, LinalgError> {
        let ring = self.source.ring;
        let mut degrees: Vec<i32> = self.source.ranks.keys().copied().collect();
        degrees.extend(self.target.ranks.keys());
        degrees.sort_unstable();
        degrees.dedup();
        for n in degrees {
            // d_target ∘ f_n = f_{n-1} ∘ d_source, both C_n -> D_{n-1}
            let left = self.target.differential(n).mul(&self.component(n))?;
            let right = self.component(n - 1).mul(&self.source.differential(n))?;
            if !left.eq_in(&right, ring) {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// `cone(f)_n = target_n ⊕ source_{n-1}` with differential
    /// `[[d_target, f], [0, -d_source]]`.
    pub fn mapping_cone(&self) -> Result<ChainComplex, LinalgError> {
        let ring = self.source.ring;
        let mut ranks = BTreeMap::new();
        let mut degrees: Vec<i32> = self.target.ranks.keys().copied().collect();
        degrees.extend(self.source.ranks.keys().map(|n| n + 1));
        degrees.sort_unstable();
        degrees.dedup();
        for &n in &degrees {
            ranks.insert(n, self.target.rank(n) + self.source.rank(n - 1));
        }
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            let dt = self.target.differential(n);
            let f = self.component(n - 1);
            let ds = self.source.differential(n - 1).neg();
            let m = Matrix::block(
                &[self.target.rank(n - 1), self.source.rank(n - 2)],
                &[self.target.rank(n), self.source.rank(n - 1)],
                &[vec![Some(&dt), Some(&f)], vec![None, Some(&ds)]],
            )?;
            diffs.insert(n, m);
        }
        ChainComplex::new(ring, ranks, diffs)
    }

    /// True iff the mapping cone is acyclic.
    pub fn is_quasi_iso(&self) -> Result<bool, LinalgError> {
        Ok(self.mapping_cone()?.homology()?.is_zero())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap, LinalgError> {
        if self.target.ranks != other.source.ranks {
            return Err(LinalgError::Shape("composable maps need matching middle complex".into()));
        }
        let mut components = BTreeMap::new();
        for n in self.source.ranks.keys() {
            components.insert(*n, other.component(*n).mul(&self.component(*n))?);
        }
        ChainMap::new(self.source.clone(), other.target.clone(), components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Ring {
        Ring::Integers
    }

    #[test]
    fn rejects_non_complex() {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        ranks.insert(2, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(1, Matrix::from_rows(&[vec![1]]));
        diffs.insert(2, Matrix::from_rows(&[vec![1]]));
        assert!(matches!(ChainComplex::new(z(), ranks.clone(), diffs.clone()), Err(LinalgError::NotAComplex(2))));
        diffs.insert(2, Matrix::from_rows(&[vec![2]]));
        // 1 * 2 = 0 mod 2
        assert!(ChainComplex::new(Ring::Prime(2), ranks, diffs).is_ok());
    }

    #[test]
    fn point_and_multiplication_by_two() {
        let pt = ChainComplex::concentrated(z(), 0, 1);
        assert_eq!(pt.homology().unwrap(), HomologySummary::concentrated(0, 1));
        let two = ChainComplex::two_term(z(), 1, Matrix::from_rows(&[vec![2]]));
        let h = two.homology().unwrap();
        assert_eq!(h.at(0), GroupSummary { rank: 0, torsion: vec![2] });
        assert!(h.at(1).is_zero());
    }

    #[test]
    fn cones() {
        let pt = ChainComplex::concentrated(z(), 0, 1);
        assert!(ChainMap::identity(&pt).is_quasi_iso().unwrap());
        let twice = ChainMap::scalar(&pt, 2);
        assert!(!twice.is_quasi_iso().unwrap());
        let h = twice.mapping_cone().unwrap().homology().unwrap();
        assert_eq!(h.at(0), GroupSummary { rank: 0, torsion: vec![2] });
        assert!(h.at(1).is_zero());
        // zero map: cone homology is H(D) ⊕ H(C)[1]
        let zero = ChainMap::zero(&pt, &pt);
        let h = zero.mapping_cone().unwrap().homology().unwrap();
        assert_eq!(h, HomologySummary::concentrated(0, 1).direct_sum(&HomologySummary::concentrated(1, 1)));
    }

    #[test]
    fn zero_map_between_acyclic_complexes_is_quasi_iso() {
        let acyclic = ChainComplex::two_term(z(), 1, Matrix::identity(1));
        assert!(ChainMap::zero(&acyclic, &acyclic).is_quasi_iso().unwrap());
    }

    #[test]
    fn shift_moves_homology() {
        let pt = ChainComplex::concentrated(z(), 0, 1);
        assert_eq!(pt.shift(0), pt);
        assert_eq!(pt.shift(-2).homology().unwrap(), HomologySummary::concentrated(-2, 1));
    }

    #[test]
    fn empty_direct_sum_is_zero() {
        assert!(ChainComplex::direct_sum(&[]).unwrap().is_zero());
        let pt = ChainComplex::concentrated(z(), 0, 1);
        let zero = ChainComplex::zero(z());
        assert_eq!(ChainComplex::direct_sum(&[&pt, &zero]).unwrap(), pt);
        let f2 = ChainComplex::concentrated(Ring::Prime(2), 0, 1);
        assert!(matches!(ChainComplex::direct_sum(&[&pt, &f2]), Err(LinalgError::RingMismatch)));
    }

    #[test]
    fn chain_map_must_commute() {
        let src = ChainComplex::concentrated(z(), 1, 1);
        let tgt = ChainComplex::two_term(z(), 1, Matrix::identity(1));
        let mut comps = BTreeMap::new();
        comps.insert(1, Matrix::identity(1));
        assert!(matches!(ChainMap::new(src, tgt, comps), Err(LinalgError::NotAChainMap(1))));
    }
}
