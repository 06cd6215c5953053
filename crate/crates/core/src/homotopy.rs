//! Homotopy limits and colimits of poset diagrams via normalized
//! totalization over strictly increasing chains.
//!
//! Slot conventions (one basis element of a value in internal degree `j`,
//! attached to a chain `r_0 < … < r_k`):
//!
//! * limit: value `F(r_k)`, total degree `j − k`, differential
//!   `d_int + (−1)^j Σ_i (−1)^i δ^i` where `δ^i` is the coface that inserts
//!   a new element at position `i` (identity on values) or, for `i = k+1`,
//!   appends one and transports along `F(r_k → r_{k+1})`;
//! * colimit: value `F(r_0)`, total degree `j + k`, differential
//!   `d_int + (−1)^j Σ_i (−1)^i d_i` where `d_0` drops `r_0` and transports
//!   along `F(r_0 → r_1)`, the other faces are identities.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::diagram::{compose, identity_components, Components, Diagram, DiagramError};
use crate::linalg::{ChainComplex, ChainMap, HomologySummary, LinalgError, Matrix};
use crate::poset::FinitePoset;

#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One basis element of a totalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    /// Index into [`TotalizationComplex::chains`].
    pub chain: usize,
    pub internal_degree: i32,
    pub basis: usize,
}

/// A totalization together with the audit index of its basis.
#[derive(Clone, Debug)]
pub struct TotalizationComplex {
    complex: ChainComplex,
    chains: Vec<Vec<usize>>,
    chain_ids: HashMap<Vec<usize>, usize>,
    slots: BTreeMap<i32, Vec<Slot>>,
    /// (chain id, internal degree) → (total degree, offset of basis 0)
    offsets: HashMap<(usize, i32), (i32, usize)>,
}

impl TotalizationComplex {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn into_complex(self) -> ChainComplex {
        self.complex
    }

    /// Chains carrying at least one slot, by length then lexicographically.
    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    /// The slots of total degree `n`, in basis order.
    pub fn slots(&self, n: i32) -> &[Slot] {
        self.slots.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Total degree and basis position of a slot, if it exists.
    pub fn position(&self, chain: &[usize], internal_degree: i32, basis: usize) -> Option<(i32, usize)> {
        let id = *self.chain_ids.get(chain)?;
        let (n, off) = *self.offsets.get(&(id, internal_degree))?;
        Some((n, off + basis))
    }

    pub fn homology(&self) -> Result<HomologySummary, LinalgError> {
        self.complex.homology()
    }
}

enum Direction {
    Limit,
    Colimit,
}

/// Composite maps `F(r → s)` for `r ≤ s`, computed on demand per source.
struct Composites<'a> {
    diagram: &'a Diagram,
    order: Vec<usize>,
    from: HashMap<usize, HashMap<usize, Components>>,
}

impl<'a> Composites<'a> {
    fn new(diagram: &'a Diagram) -> Self {
        Composites { diagram, order: diagram.base().linear_extension(), from: HashMap::new() }
    }

    fn get(&mut self, r: usize, s: usize) -> Result<Option<&Components>, LinalgError> {
        if !self.from.contains_key(&r) {
            let base = self.diagram.base();
            let mut maps: HashMap<usize, Components> = HashMap::new();
            maps.insert(r, identity_components(self.diagram.at(r)));
            for &q in self.order.iter().filter(|&&q| q != r && base.leq(r, q)) {
                let t = *base.lower_covers(q).iter().find(|&&t| base.leq(r, t)).expect("cover path");
                let m = compose(&maps[&t], self.diagram.edge(t, q))?;
                maps.insert(q, m);
            }
            maps.retain(|_, m| !m.is_empty());
            self.from.insert(r, maps);
        }
        Ok(self.from[&r].get(&s))
    }
}

fn sort_chains(chains: &mut [Vec<usize>]) {
    chains.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

/// Chains inside `allowed` whose last (limit) or first (colimit) element
/// lies in `anchor`.
fn anchored_chains(base: &FinitePoset, allowed: &FixedBitSet, anchor: &FixedBitSet, dir: &Direction) -> Vec<Vec<usize>> {
    fn grow(base: &FinitePoset, allowed: &FixedBitSet, chain: &mut Vec<usize>, down: bool, out: &mut Vec<Vec<usize>>) {
        out.push(chain.clone());
        let end = *chain.last().expect("nonempty");
        let next = if down { base.down_set(end) } else { base.up_set(end) };
        for s in next.ones() {
            if s != end && allowed.contains(s) {
                chain.push(s);
                grow(base, allowed, chain, down, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    for r in anchor.ones() {
        if allowed.contains(r) {
            let mut chain = vec![r];
            match dir {
                Direction::Limit => {
                    let start = out.len();
                    grow(base, allowed, &mut chain, true, &mut out);
                    for c in &mut out[start..] {
                        c.reverse();
                    }
                }
                Direction::Colimit => grow(base, allowed, &mut chain, false, &mut out),
            }
        }
    }
    sort_chains(&mut out);
    out
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

struct Layout {
    chains: Vec<Vec<usize>>,
    chain_ids: HashMap<Vec<usize>, usize>,
    slots: BTreeMap<i32, Vec<Slot>>,
    offsets: HashMap<(usize, i32), (i32, usize)>,
}

fn layout(diagram: &Diagram, chains: Vec<Vec<usize>>, dir: &Direction) -> Layout {
    let mut slots: BTreeMap<i32, Vec<Slot>> = BTreeMap::new();
    let mut offsets = HashMap::new();
    let mut chain_ids = HashMap::with_capacity(chains.len());
    for (id, c) in chains.iter().enumerate() {
        chain_ids.insert(c.clone(), id);
        let k = c.len() as i32 - 1;
        let (value, total) = match dir {
            Direction::Limit => (*c.last().expect("nonempty"), -k),
            Direction::Colimit => (c[0], k),
        };
        for (&j, &rank) in diagram.at(value).ranks() {
            let n = j + total;
            let list = slots.entry(n).or_default();
            offsets.insert((id, j), (n, list.len()));
            list.extend((0..rank).map(|b| Slot { chain: id, internal_degree: j, basis: b }));
        }
    }
    Layout { chains, chain_ids, slots, offsets }
}

fn assemble(diagram: &Diagram, lay: Layout, triplets: HashMap<i32, Vec<(usize, usize, i64)>>) -> Result<TotalizationComplex, LinalgError> {
    let ranks: BTreeMap<i32, usize> = lay.slots.iter().map(|(n, s)| (*n, s.len())).collect();
    let rank = |n: i32| ranks.get(&n).copied().unwrap_or(0);
    let mut diffs = BTreeMap::new();
    for (n, entries) in triplets {
        diffs.insert(n, Matrix::from_triplets(rank(n - 1), rank(n), entries));
    }
    let complex = ChainComplex::new(diagram.ring(), ranks, diffs)?;
    Ok(TotalizationComplex {
        complex,
        chains: lay.chains,
        chain_ids: lay.chain_ids,
        slots: lay.slots,
        offsets: lay.offsets,
    })
}

/// Homotopy limit of `diagram` restricted to the full subposet `allowed`,
/// keeping only slots whose last element lies in `ends` (a cosieve of
/// `allowed` on which the diagram is unchanged, zero elsewhere).
pub(crate) fn holim_masked(diagram: &Diagram, allowed: &FixedBitSet, ends: &FixedBitSet) -> Result<TotalizationComplex, LinalgError> {
    let base = diagram.base();
    let mut anchor = ends.clone();
    anchor.intersect_with(allowed);
    let support = base.subset_mask(&diagram.support());
    anchor.intersect_with(&support);
    let dir = Direction::Limit;
    let lay = layout(diagram, anchored_chains(base, allowed, &anchor, &dir), &dir);
    let mut comps = Composites::new(diagram);
    let mut triplets: HashMap<i32, Vec<(usize, usize, i64)>> = HashMap::new();
    let mut target = Vec::new();
    for (id, c) in lay.chains.iter().enumerate() {
        let k = c.len() - 1;
        let last = c[k];
        let value = diagram.at(last);
        for &j in value.ranks().keys() {
            let (n, src) = lay.offsets[&(id, j)];
            let entries = triplets.entry(n).or_default();
            if let Some(d) = value.differential_ref(j) {
                let (_, dst) = lay.offsets[&(id, j - 1)];
                for (b2, b, v) in d.triplets() {
                    entries.push((dst + b2, src + b, v));
                }
            }
            let eps = sign(j as i64);
            // insertions before the last element: identity on F(last)
            for i in 0..=k {
                let lower = if i == 0 { None } else { Some(c[i - 1]) };
                for s in base.down_set(c[i]).ones() {
                    if s == c[i] || !allowed.contains(s) || lower.is_some_and(|l| !base.lt(l, s)) {
                        continue;
                    }
                    target.clear();
                    target.extend_from_slice(&c[..i]);
                    target.push(s);
                    target.extend_from_slice(&c[i..]);
                    let tid = lay.chain_ids[&target];
                    let (_, dst) = lay.offsets[&(tid, j)];
                    let coeff = eps * sign(i as i64);
                    for b in 0..value.rank(j) {
                        entries.push((dst + b, src + b, coeff));
                    }
                }
            }
            // appending s > last: transport along F(last → s)
            for s in base.up_set(last).ones() {
                if s == last || !allowed.contains(s) || !anchor.contains(s) {
                    continue;
                }
                let Some(m) = comps.get(last, s)?.and_then(|m| m.get(&j)) else { continue };
                target.clear();
                target.extend_from_slice(c);
                target.push(s);
                let tid = lay.chain_ids[&target];
                let (_, dst) = lay.offsets[&(tid, j)];
                let coeff = eps * sign(k as i64 + 1);
                for (b2, b, v) in m.triplets() {
                    entries.push((dst + b2, src + b, coeff * v));
                }
            }
        }
    }
    assemble(diagram, lay, triplets)
}

/// Homotopy colimit of `diagram` restricted to the full subposet `allowed`.
pub(crate) fn hocolim_masked(diagram: &Diagram, allowed: &FixedBitSet) -> Result<TotalizationComplex, LinalgError> {
    let base = diagram.base();
    let mut anchor = base.subset_mask(&diagram.support());
    anchor.intersect_with(allowed);
    let dir = Direction::Colimit;
    let lay = layout(diagram, anchored_chains(base, allowed, &anchor, &dir), &dir);
    let mut comps = Composites::new(diagram);
    let mut triplets: HashMap<i32, Vec<(usize, usize, i64)>> = HashMap::new();
    let mut target = Vec::new();
    for (id, c) in lay.chains.iter().enumerate() {
        let k = c.len() - 1;
        let first = c[0];
        let value = diagram.at(first);
        for &j in value.ranks().keys() {
            let (n, src) = lay.offsets[&(id, j)];
            let entries = triplets.entry(n).or_default();
            if let Some(d) = value.differential_ref(j) {
                let (_, dst) = lay.offsets[&(id, j - 1)];
                for (b2, b, v) in d.triplets() {
                    entries.push((dst + b2, src + b, v));
                }
            }
            if k == 0 {
                continue;
            }
            let eps = sign(j as i64);
            // d_0: drop the first element, transport along F(r_0 → r_1)
            if let Some(m) = comps.get(first, c[1])?.and_then(|m| m.get(&j)) {
                let tid = lay.chain_ids[&c[1..]];
                let (_, dst) = lay.offsets[&(tid, j)];
                for (b2, b, v) in m.triplets() {
                    entries.push((dst + b2, src + b, eps * v));
                }
            }
            for i in 1..=k {
                target.clear();
                target.extend(c.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &x)| x));
                let tid = lay.chain_ids[&target];
                let (_, dst) = lay.offsets[&(tid, j)];
                let coeff = eps * sign(i as i64);
                for b in 0..value.rank(j) {
                    entries.push((dst + b, src + b, coeff));
                }
            }
        }
    }
    assemble(diagram, lay, triplets)
}

fn full_mask(base: &FinitePoset) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(base.len());
    m.insert_range(..);
    m
}

/// The homotopy limit of `diagram`.
pub fn holim(diagram: &Diagram) -> Result<TotalizationComplex, LinalgError> {
    let all = full_mask(diagram.base());
    holim_masked(diagram, &all, &all)
}

/// The homotopy colimit of `diagram`.
pub fn hocolim(diagram: &Diagram) -> Result<TotalizationComplex, LinalgError> {
    hocolim_masked(diagram, &full_mask(diagram.base()))
}

/// Global sections `Γ(P; F)`: the homotopy limit, whose homology in
/// degree `−n` is the cohomology `H^n`.
pub fn gamma(diagram: &Diagram) -> Result<TotalizationComplex, LinalgError> {
    holim(diagram)
}

/// The cone-induced map `F(⊥) → holim(F|Q)` where `Q` is the base minus
/// its least element.
pub fn cone_comparison_limit(diagram: &Diagram) -> Result<ChainMap, HomotopyError> {
    let base = diagram.base();
    let bottom = base.least_element().ok_or(DiagramError::NoLeastElement)?;
    let mut rest = full_mask(base);
    rest.set(bottom, false);
    let total = holim_masked(diagram, &rest, &rest)?;
    let source = diagram.at(bottom);
    let mut comps = Composites::new(diagram);
    let mut components = BTreeMap::new();
    for (&n, &rank) in source.ranks() {
        let mut entries = Vec::new();
        for r in rest.ones() {
            let Some(m) = comps.get(bottom, r)?.and_then(|m| m.get(&n)) else { continue };
            let (_, off) = total.offsets[&(total.chain_ids[&vec![r]], n)];
            entries.extend(m.triplets().into_iter().map(|(b2, b, v)| (off + b2, b, v)));
        }
        components.insert(n, Matrix::from_triplets(total.complex.rank(n), rank, entries));
    }
    Ok(ChainMap::new(source.clone(), total.complex, components)?)
}

/// The cocone-induced map `hocolim(F|Q) → F(⊤)` where `Q` is the base
/// minus its greatest element.
pub fn cone_comparison_colimit(diagram: &Diagram) -> Result<ChainMap, HomotopyError> {
    let base = diagram.base();
    let top = base.greatest_element().ok_or(DiagramError::NoGreatestElement)?;
    let mut rest = full_mask(base);
    rest.set(top, false);
    let total = hocolim_masked(diagram, &rest)?;
    let target = diagram.at(top);
    let mut comps = Composites::new(diagram);
    let mut components = BTreeMap::new();
    for (&n, &rank) in total.complex.ranks() {
        let mut entries = Vec::new();
        for (pos, slot) in total.slots(n).iter().enumerate() {
            let chain = &total.chains[slot.chain];
            if chain.len() != 1 {
                continue;
            }
            if let Some(m) = comps.get(chain[0], top)?.and_then(|m| m.get(&n)) {
                entries.extend(m.triplets().into_iter().filter(|&(_, b, _)| b == slot.basis).map(|(b2, _, v)| (b2, pos, v)));
            }
        }
        components.insert(n, Matrix::from_triplets(target.rank(n), rank, entries));
    }
    Ok(ChainMap::new(total.complex, target.clone(), components)?)
}

/// Whether `F(⊥) → holim(F|Q)` is a quasi-isomorphism.
pub fn is_limit_diagram(diagram: &Diagram) -> Result<bool, HomotopyError> {
    Ok(cone_comparison_limit(diagram)?.is_quasi_iso()?)
}

/// Whether `hocolim(F|Q) → F(⊤)` is a quasi-isomorphism.
pub fn is_colimit_diagram(diagram: &Diagram) -> Result<bool, HomotopyError> {
    Ok(cone_comparison_colimit(diagram)?.is_quasi_iso()?)
}

/// Slot inclusion/projection between two totalizations sharing a diagram:
/// each slot of `from` goes to the same slot of `to` when present.
pub(crate) fn slot_map(from: &TotalizationComplex, to: &TotalizationComplex) -> Components {
    let mut out = BTreeMap::new();
    for (&n, slots) in &from.slots {
        let entries: Vec<(usize, usize, i64)> = slots
            .iter()
            .enumerate()
            .filter_map(|(pos, s)| {
                to.position(&from.chains[s.chain], s.internal_degree, s.basis).map(|(_, t)| (t, pos, 1))
            })
            .collect();
        if !entries.is_empty() {
            out.insert(n, Matrix::from_triplets(to.complex.rank(n), slots.len(), entries));
        }
    }
    out
}

impl Diagram {
    /// Left Kan extension along `Q ↪ P` (elements matched by name): the
    /// value at `r` is the homotopy colimit over `Q_{≤r}`, and edges are
    /// induced by inclusion of index posets.
    pub fn left_kan(&self, into: &FinitePoset) -> Result<Diagram, HomotopyError> {
        self.kan_extension(into, true)
    }

    /// Right Kan extension along `Q ↪ P`: the value at `r` is the homotopy
    /// limit over `Q_{≥r}`, with edges given by restriction of index posets.
    pub fn right_kan(&self, into: &FinitePoset) -> Result<Diagram, HomotopyError> {
        self.kan_extension(into, false)
    }

    fn kan_extension(&self, into: &FinitePoset, left: bool) -> Result<Diagram, HomotopyError> {
        let q = self.base();
        let embed = q
            .elements()
            .iter()
            .map(|n| into.index_of(n))
            .collect::<Result<Vec<_>, _>>()
            .map_err(DiagramError::from)?;
        let totals = (0..into.len())
            .map(|r| {
                // Q_{≤r} or Q_{≥r}, as a mask on Q
                let mut sub = FixedBitSet::with_capacity(q.len());
                for (i, &p) in embed.iter().enumerate() {
                    if (left && into.leq(p, r)) || (!left && into.leq(r, p)) {
                        sub.insert(i);
                    }
                }
                if left {
                    hocolim_masked(self, &sub)
                } else {
                    holim_masked(self, &sub, &sub)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut edges = HashMap::new();
        for &(p, r) in into.covers() {
            // inclusion of chains for left, restriction to chains for right
            let m = slot_map(&totals[p], &totals[r]);
            if !m.is_empty() {
                edges.insert((p, r), m);
            }
        }
        let at = totals.into_iter().map(TotalizationComplex::into_complex).collect();
        Ok(Diagram::new(into.clone(), self.ring(), at, edges)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;

    const Z: Ring = Ring::Integers;

    fn point() -> ChainComplex {
        ChainComplex::concentrated(Z, 0, 1)
    }

    fn example() -> FinitePoset {
        FinitePoset::from_covers(&["0", "1", "1'", "2"], &[("0", "1"), ("0", "1'"), ("1", "2"), ("1'", "2")]).unwrap()
    }

    fn h(d: &Diagram) -> HomologySummary {
        holim(d).unwrap().homology().unwrap()
    }

    #[test]
    fn limit_over_least_element_is_the_value() {
        let e = example();
        assert_eq!(h(&Diagram::constant(&e, &point())), HomologySummary::concentrated(0, 1));
    }

    #[test]
    fn skyscraper_over_two_minimal_elements() {
        let p = FinitePoset::from_covers(&["a", "b", "p"], &[("a", "p"), ("b", "p")]).unwrap();
        let d = Diagram::interval_unit_ring(&p, 2, 2, Z).unwrap();
        assert_eq!(h(&d), HomologySummary::concentrated(-1, 1));
    }

    #[test]
    fn interval_examples() {
        let e = example();
        assert_eq!(h(&Diagram::interval_unit_ring(&e, 0, 1, Z).unwrap()), HomologySummary::concentrated(0, 1));
        let c = FinitePoset::chain(2);
        assert!(h(&Diagram::interval_unit_ring(&c, 1, 1, Z).unwrap()).is_zero());
    }

    #[test]
    fn circle_cohomology() {
        let triangle = FinitePoset::from_covers(
            &["0", "1", "2", "01", "02", "12"],
            &[("0", "01"), ("1", "01"), ("0", "02"), ("2", "02"), ("1", "12"), ("2", "12")],
        )
        .unwrap();
        let mut want = HomologySummary::concentrated(0, 1);
        want.set(-1, crate::linalg::GroupSummary { rank: 1, torsion: vec![] });
        assert_eq!(h(&Diagram::constant(&triangle, &point())), want);
    }

    #[test]
    fn colimits() {
        let c = FinitePoset::chain(3);
        let co = |d: &Diagram| hocolim(d).unwrap().homology().unwrap();
        assert_eq!(co(&Diagram::constant(&c, &point())), HomologySummary::concentrated(0, 1));
        let e = example();
        // a skyscraper survives the colimit only at a maximal element: at a
        // non-maximal p the cocone leg at p factors through a zero value
        assert_eq!(co(&Diagram::skyscraper(&e, 3, &point())), HomologySummary::concentrated(0, 1));
        assert!(co(&Diagram::skyscraper(&e, 1, &point())).is_zero());
        assert!(co(&Diagram::zero(&FinitePoset::empty(), Z)).is_zero());
        let v = FinitePoset::antichain(2).add_top();
        let d = Diagram::constant(&v, &point()).restrict(&[0, 1]).unwrap();
        assert_eq!(co(&d), HomologySummary::concentrated(0, 2));
    }

    #[test]
    fn comparison_maps() {
        let diamond = FinitePoset::antichain(2).add_bottom_and_top();
        let constant = Diagram::constant(&diamond, &point());
        assert!(is_limit_diagram(&constant).unwrap());
        assert!(is_colimit_diagram(&constant).unwrap());
        // F(⊥) = 0 and Z with identities elsewhere
        let top_part = Diagram::constant(&diamond, &point()).restrict(&[1, 2, 3]).unwrap();
        let no_bottom = top_part.extension_by_zero(&diamond).unwrap();
        assert!(!is_limit_diagram(&no_bottom).unwrap());
        assert!(!is_colimit_diagram(&no_bottom).unwrap());
        let single = FinitePoset::chain(2);
        let iso = Diagram::constant(&single, &point());
        assert!(is_limit_diagram(&iso).unwrap());
        assert!(is_colimit_diagram(&iso).unwrap());
        assert!(matches!(cone_comparison_limit(&Diagram::constant(&FinitePoset::antichain(2), &point())), Err(HomotopyError::Diagram(DiagramError::NoLeastElement))));
    }

    #[test]
    fn totalization_index_covers_every_slot() {
        let e = example();
        let t = holim(&Diagram::constant(&e, &point())).unwrap();
        let total: usize = t.complex().ranks().values().sum();
        assert_eq!(total, e.chain_count());
        assert_eq!(t.position(&[0, 1], 0, 0).map(|(n, _)| n), Some(-1));
    }

    #[test]
    fn kan_extensions() {
        let e = example();
        let q = e.at_least(1);
        let f = Diagram::constant(&e, &point()).restrict(&q).unwrap();
        let lk = f.left_kan(&e).unwrap();
        assert!(lk.validate().is_ok());
        assert!(lk.at(0).is_zero());
        assert_eq!(lk.at(3).homology().unwrap(), HomologySummary::concentrated(0, 1));
        let sieve = Diagram::constant(&e, &point()).restrict(&e.at_most(1)).unwrap();
        let rk = sieve.right_kan(&e).unwrap();
        assert!(rk.validate().is_ok());
        assert!(rk.at(2).is_zero());
        assert!(rk.at(3).is_zero());
        let same = Diagram::constant(&e, &point()).left_kan(&e).unwrap();
        for p in 0..4 {
            assert_eq!(same.at(p).homology().unwrap(), HomologySummary::concentrated(0, 1));
        }
    }
}
