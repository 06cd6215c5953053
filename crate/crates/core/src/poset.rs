//! Finite posets with explicit Hasse diagrams.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("the cover relation has a directed cycle through {0:?}")]
    Cycle(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("maximal chains ending at {element:?} have lengths {shortest} and {longest}")]
    NotGraded { element: String, shortest: usize, longest: usize },
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("malformed poset JSON: {0}")]
    Json(String),
}

/// A finite poset. Element identifiers are opaque strings; every
/// deterministic order used by this crate derives from the element list.
///
/// The order relation is stored as dense bit rows (`up[p]` is `P_{≥p}`,
/// `down[p]` is `P_{≤p}`); covers are the transitive reduction.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
}

/// Integer labeling that increases by exactly one along every cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankFunction {
    pub assignment: Vec<i64>,
}

impl RankFunction {
    pub fn rank(&self, p: usize) -> i64 {
        self.assignment[p]
    }

    pub fn is_valid_for(&self, poset: &FinitePoset) -> bool {
        self.assignment.len() == poset.len()
            && poset.covers().iter().all(|&(p, q)| self.assignment[q] == self.assignment[p] + 1)
    }
}

/// The JSON exchange format: `{"elements": [...], "covers": [[p, q], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

fn index_map(elements: &[String]) -> Result<HashMap<String, usize>, PosetError> {
    let mut index = HashMap::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.clone(), i).is_some() {
            return Err(PosetError::DuplicateElement(e.clone()));
        }
    }
    Ok(index)
}

impl FinitePoset {
    /// The poset generated by `covers`; redundant input edges are dropped.
    pub fn from_covers<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self, PosetError> {
        let elements: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let index = index_map(&elements)?;
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| PosetError::UnknownElement(s.to_string()));
        let mut edges = Vec::with_capacity(covers.len());
        for (p, q) in covers {
            edges.push((lookup(p.as_ref())?, lookup(q.as_ref())?));
        }
        Self::from_edges(elements, index, &edges)
    }

    /// Like [`FinitePoset::from_covers`], with edges given by index.
    pub fn from_index_edges(elements: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, PosetError> {
        let index = index_map(&elements)?;
        if let Some(&(p, q)) = edges.iter().find(|&&(p, q)| p >= elements.len() || q >= elements.len()) {
            return Err(PosetError::UnknownElement(format!("#{}", p.max(q))));
        }
        Self::from_edges(elements, index, edges)
    }

    fn from_edges(elements: Vec<String>, index: HashMap<String, usize>, edges: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = elements.len();
        let mut succ = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(p, q) in edges {
            if p == q {
                return Err(PosetError::Cycle(elements[p].clone()));
            }
            succ[p].push(q);
            indegree[q] += 1;
        }
        // Kahn's algorithm; leftovers lie on a cycle
        let mut order = Vec::with_capacity(n);
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for &q in &succ[p] {
                indegree[q] -= 1;
                if indegree[q] == 0 {
                    queue.push_back(q);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).expect("cycle member");
            return Err(PosetError::Cycle(elements[stuck].clone()));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &p in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(p);
            for &q in &succ[p] {
                set.union_with(&up[q]);
            }
            up[p] = set;
        }
        Ok(Self::from_up_sets(elements, index, up))
    }

    /// Builds from a relation `leq(i, j)` that must be a partial order.
    pub fn from_relation(elements: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self, PosetError> {
        let index = index_map(&elements)?;
        let n = elements.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    row.insert(j);
                }
            }
        }
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(PosetError::NotAPartialOrder(format!("{} is not ≤ itself", elements[i])));
            }
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(PosetError::NotAPartialOrder(format!(
                        "{} and {} violate antisymmetry",
                        elements[i], elements[j]
                    )));
                }
                if !up[j].is_subset(&up[i]) {
                    return Err(PosetError::NotAPartialOrder(format!("not transitive through {}", elements[j])));
                }
            }
        }
        Ok(Self::from_up_sets(elements, index, up))
    }

    fn from_up_sets(elements: Vec<String>, index: HashMap<String, usize>, up: Vec<FixedBitSet>) -> Self {
        let n = elements.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (p, row) in up.iter().enumerate() {
            for q in row.ones() {
                down[q].insert(p);
            }
        }
        let mut covers = Vec::new();
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for p in 0..n {
            let mut strict = up[p].clone();
            strict.set(p, false);
            let mut reach2 = FixedBitSet::with_capacity(n);
            for r in strict.ones() {
                let mut above_r = up[r].clone();
                above_r.set(r, false);
                reach2.union_with(&above_r);
            }
            strict.difference_with(&reach2);
            for q in strict.ones() {
                covers.push((p, q));
                upper_covers[p].push(q);
                lower_covers[q].push(p);
            }
        }
        FinitePoset { elements, index, up, down, covers, upper_covers, lower_covers }
    }

    pub fn empty() -> Self {
        Self::from_index_edges(Vec::new(), &[]).expect("empty poset")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_index_edges((0..n).map(|i| i.to_string()).collect(), &[]).expect("antichain")
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_index_edges((0..n).map(|i| i.to_string()).collect(), &edges).expect("chain")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, p: usize) -> &str {
        &self.elements[p]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PosetError> {
        self.index.get(name).copied().ok_or_else(|| PosetError::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.up[p].contains(q)
    }

    pub fn lt(&self, p: usize, q: usize) -> bool {
        p != q && self.leq(p, q)
    }

    pub fn comparable(&self, p: usize, q: usize) -> bool {
        self.leq(p, q) || self.leq(q, p)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_cover(&self, p: usize, q: usize) -> bool {
        self.upper_covers[p].contains(&q)
    }

    pub fn upper_covers(&self, p: usize) -> &[usize] {
        &self.upper_covers[p]
    }

    pub fn lower_covers(&self, p: usize) -> &[usize] {
        &self.lower_covers[p]
    }

    /// `P_{≥p}` as a bit set.
    pub fn up_set(&self, p: usize) -> &FixedBitSet {
        &self.up[p]
    }

    /// `P_{≤p}` as a bit set.
    pub fn down_set(&self, p: usize) -> &FixedBitSet {
        &self.down[p]
    }

    /// `P_{<p}`, sorted.
    pub fn below(&self, p: usize) -> Vec<usize> {
        self.down[p].ones().filter(|&x| x != p).collect()
    }

    /// `P_{≤p}`, sorted.
    pub fn at_most(&self, p: usize) -> Vec<usize> {
        self.down[p].ones().collect()
    }

    /// `P_{>p}`, sorted.
    pub fn above(&self, p: usize) -> Vec<usize> {
        self.up[p].ones().filter(|&x| x != p).collect()
    }

    /// `P_{≥p}`, sorted.
    pub fn at_least(&self, p: usize) -> Vec<usize> {
        self.up[p].ones().collect()
    }

    /// Closed interval `[p, q]` (empty unless `p ≤ q`).
    pub fn closed_interval(&self, p: usize, q: usize) -> Vec<usize> {
        let mut s = self.up[p].clone();
        s.intersect_with(&self.down[q]);
        s.ones().collect()
    }

    /// Open interval `(p, q)`.
    pub fn open_interval(&self, p: usize, q: usize) -> Vec<usize> {
        self.closed_interval(p, q).into_iter().filter(|&x| x != p && x != q).collect()
    }

    /// All pairs `p < q`, in lexicographic index order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|p| self.up[p].ones().filter(move |&q| q != p).map(move |q| (p, q)))
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.lower_covers[p].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.upper_covers[p].is_empty()).collect()
    }

    pub fn least_element(&self) -> Option<usize> {
        (0..self.len()).find(|&p| self.up[p].count_ones(..) == self.len())
    }

    pub fn greatest_element(&self) -> Option<usize> {
        (0..self.len()).find(|&p| self.down[p].count_ones(..) == self.len())
    }

    /// Same elements, reversed order.
    pub fn opposite(&self) -> FinitePoset {
        FinitePoset {
            elements: self.elements.clone(),
            index: self.index.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
            covers: {
                let mut c: Vec<(usize, usize)> = self.covers.iter().map(|&(p, q)| (q, p)).collect();
                c.sort_unstable();
                c
            },
            upper_covers: self.lower_covers.clone(),
            lower_covers: self.upper_covers.clone(),
        }
    }

    /// Full subposet on `subset` (any order, duplicates ignored); elements
    /// keep their relative order from `self` and covers are recomputed.
    pub fn induced(&self, subset: &[usize]) -> FinitePoset {
        let mut keep: Vec<usize> = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let elements: Vec<String> = keep.iter().map(|&i| self.elements[i].clone()).collect();
        let index = index_map(&elements).expect("subset of distinct elements");
        let m = keep.len();
        let mut up = vec![FixedBitSet::with_capacity(m); m];
        for (a, &p) in keep.iter().enumerate() {
            for (b, &q) in keep.iter().enumerate() {
                if self.leq(p, q) {
                    up[a].insert(b);
                }
            }
        }
        Self::from_up_sets(elements, index, up)
    }

    pub fn induced_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<FinitePoset, PosetError> {
        let idx = names.iter().map(|n| self.index_of(n.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(self.induced(&idx))
    }

    fn fresh_name(&self, base: &str) -> String {
        if !self.index.contains_key(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|c| !self.index.contains_key(c))
            .expect("unbounded suffixes")
    }

    /// Adds a least element `⊥` (renamed on collision) at index 0.
    pub fn add_bottom(&self) -> FinitePoset {
        let n = self.len();
        let mut elements = vec![self.fresh_name("⊥")];
        elements.extend(self.elements.iter().cloned());
        let index = index_map(&elements).expect("fresh name");
        let mut up = Vec::with_capacity(n + 1);
        let mut all = FixedBitSet::with_capacity(n + 1);
        all.insert_range(..);
        up.push(all);
        for row in &self.up {
            let mut r = FixedBitSet::with_capacity(n + 1);
            for q in row.ones() {
                r.insert(q + 1);
            }
            up.push(r);
        }
        Self::from_up_sets(elements, index, up)
    }

    /// Adds a greatest element `⊤` (renamed on collision) at the last index.
    pub fn add_top(&self) -> FinitePoset {
        let n = self.len();
        let mut elements = self.elements.clone();
        elements.push(self.fresh_name("⊤"));
        let index = index_map(&elements).expect("fresh name");
        let mut up = Vec::with_capacity(n + 1);
        for row in &self.up {
            let mut r = row.clone();
            r.grow(n + 1);
            r.insert(n);
            up.push(r);
        }
        let mut top = FixedBitSet::with_capacity(n + 1);
        top.insert(n);
        up.push(top);
        Self::from_up_sets(elements, index, up)
    }

    /// `P_{⊥,⊤}`: `⊥` at index 0, `⊤` last, original `p` at `p + 1`.
    pub fn add_bottom_and_top(&self) -> FinitePoset {
        self.add_bottom().add_top()
    }

    /// Every nonempty strictly increasing chain whose last element lies in
    /// `last_in` (all chains when `None`), sorted by length and then
    /// lexicographically by element index.
    pub fn strict_chains(&self, last_in: Option<&FixedBitSet>) -> Vec<Vec<usize>> {
        let ends: Vec<usize> = match last_in {
            Some(set) => set.ones().filter(|&r| r < self.len()).collect(),
            None => (0..self.len()).collect(),
        };
        let mut chains = Vec::new();
        for r in ends {
            self.chains_ending_at(r, &mut chains);
        }
        chains.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        chains
    }

    /// Appends every chain with last element `r` (unordered).
    pub(crate) fn chains_ending_at(&self, r: usize, out: &mut Vec<Vec<usize>>) {
        let mut stack = vec![r];
        self.extend_down(&mut stack, out);
    }

    fn extend_down(&self, reversed: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(reversed.iter().rev().copied().collect());
        let low = *reversed.last().expect("nonempty");
        for s in self.down[low].ones() {
            if s != low {
                reversed.push(s);
                self.extend_down(reversed, out);
                reversed.pop();
            }
        }
    }

    /// Total number of nonempty chains.
    pub fn chain_count(&self) -> usize {
        // chains ending at p = 1 + sum over q < p of chains ending at q
        let order = self.linear_extension();
        let mut ending = vec![0usize; self.len()];
        for &p in &order {
            ending[p] = 1 + self.down[p].ones().filter(|&q| q != p).map(|q| ending[q]).sum::<usize>();
        }
        ending.iter().sum()
    }

    /// Elements sorted so that `p < q` implies `p` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&p| self.down[p].count_ones(..));
        order
    }

    /// Connected components of the comparability graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut k = 0;
            while k < members.len() {
                let p = members[k];
                k += 1;
                for &q in self.upper_covers[p].iter().chain(&self.lower_covers[p]) {
                    if comp[q] == usize::MAX {
                        comp[q] = id;
                        members.push(q);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// A rank function, normalized so that the minimum over each connected
    /// component is 0; `None` if none exists.
    pub fn rank_function(&self) -> Option<RankFunction> {
        let n = self.len();
        let mut rank: Vec<Option<i64>> = vec![None; n];
        for comp in self.components() {
            let s = comp[0];
            rank[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(p) = queue.pop_front() {
                let rp = rank[p].expect("assigned");
                let nbrs = self.upper_covers[p]
                    .iter()
                    .map(|&q| (q, rp + 1))
                    .chain(self.lower_covers[p].iter().map(|&q| (q, rp - 1)));
                for (q, want) in nbrs {
                    match rank[q] {
                        None => {
                            rank[q] = Some(want);
                            queue.push_back(q);
                        }
                        Some(have) if have != want => return None,
                        Some(_) => {}
                    }
                }
            }
            let lowest = comp.iter().map(|&p| rank[p].expect("assigned")).min().expect("nonempty");
            for &p in &comp {
                rank[p] = rank[p].map(|r| r - lowest);
            }
        }
        Some(RankFunction { assignment: rank.into_iter().map(|r| r.expect("assigned")).collect() })
    }

    /// Common length of all maximal chains of `P_{≤p}` (they all end at `p`).
    pub fn chain_length_to(&self, p: usize) -> Result<usize, PosetError> {
        let mut shortest = vec![usize::MAX; self.len()];
        let mut longest = vec![0usize; self.len()];
        let members = self.at_most(p);
        let mut order = members.clone();
        order.sort_by_key(|&x| self.down[x].count_ones(..));
        for &x in &order {
            if self.lower_covers[x].is_empty() {
                shortest[x] = 0;
                longest[x] = 0;
            } else {
                shortest[x] = self.lower_covers[x].iter().map(|&y| shortest[y] + 1).min().expect("nonempty");
                longest[x] = self.lower_covers[x].iter().map(|&y| longest[y] + 1).max().expect("nonempty");
            }
        }
        if shortest[p] == longest[p] {
            Ok(longest[p])
        } else {
            Err(PosetError::NotGraded { element: self.elements[p].clone(), shortest: shortest[p], longest: longest[p] })
        }
    }

    /// True when `a, b ∈ subset` and `a ≤ r ≤ b` force `r ∈ subset`.
    pub fn is_interval_closed(&self, subset: &FixedBitSet) -> bool {
        subset.ones().all(|a| {
            subset.ones().all(|b| {
                let mut between = self.up[a].clone();
                between.intersect_with(&self.down[b]);
                between.is_subset(subset)
            })
        })
    }

    pub fn subset_mask(&self, subset: &[usize]) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(self.len());
        for &i in subset {
            m.insert(i);
        }
        m
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.elements.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(p, q)| (self.elements[p].clone(), self.elements[q].clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self, PosetError> {
        let covers: Vec<(&str, &str)> = json.covers.iter().map(|(p, q)| (p.as_str(), q.as_str())).collect();
        let elements: Vec<&str> = json.elements.iter().map(String::as_str).collect();
        Self::from_covers(&elements, &covers)
    }

    pub fn from_json_str(s: &str) -> Result<Self, PosetError> {
        let json: PosetJson = serde_json::from_str(s).map_err(|e| PosetError::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.up == other.up
    }
}

impl Eq for FinitePoset {}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> FinitePoset {
        FinitePoset::from_covers(&["0", "1", "1'", "2"], &[("0", "1"), ("0", "1'"), ("1", "2"), ("1'", "2")]).unwrap()
    }

    #[test]
    fn singleton_and_closure() {
        let p = FinitePoset::from_covers::<&str>(&["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.leq(0, 0));
        let e = example();
        assert!(e.leq(0, 3));
        assert_eq!(e.covers().len(), 4);
    }

    #[test]
    fn cycle_and_unknown() {
        let err = FinitePoset::from_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, PosetError::Cycle(_)));
        let err = FinitePoset::from_covers(&["a"], &[("a", "z")]).unwrap_err();
        assert_eq!(err, PosetError::UnknownElement("z".into()));
        let err = FinitePoset::from_covers::<&str>(&["a", "a"], &[]).unwrap_err();
        assert_eq!(err, PosetError::DuplicateElement("a".into()));
    }

    #[test]
    fn redundant_edges_dropped() {
        let p = FinitePoset::from_covers(&["0", "1", "2"], &[("0", "1"), ("1", "2"), ("0", "2")]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn opposite_chain() {
        let c = FinitePoset::chain(3);
        let o = c.opposite();
        assert!(o.leq(2, 0));
        assert_eq!(o.least_element(), Some(2));
        assert_eq!(o.opposite(), c);
        assert_eq!(example().opposite().opposite(), example());
    }

    #[test]
    fn induced_recomputes_covers() {
        let e = example();
        let open = e.induced(&e.open_interval(0, 3));
        assert_eq!(open.elements(), &["1", "1'"]);
        assert!(open.covers().is_empty());
        let c = FinitePoset::chain(3);
        let sub = c.induced(&[0, 2]);
        assert_eq!(sub.covers(), &[(0, 1)]);
        assert!(c.induced(&[]).is_empty());
        assert_eq!(e.induced(&[0, 1, 2, 3]), e);
    }

    #[test]
    fn cones() {
        let top = FinitePoset::empty().add_top();
        assert_eq!(top.len(), 1);
        let v = FinitePoset::antichain(2).add_bottom();
        assert_eq!(v.covers(), &[(0, 1), (0, 2)]);
        let diamond = v.add_top();
        assert_eq!(diamond.len(), 4);
        assert_eq!(diamond.covers().len(), 4);
        let clash = FinitePoset::from_covers::<&str>(&["⊤"], &[]).unwrap().add_top();
        assert_eq!(clash.elements(), &["⊤", "⊤_1"]);
    }

    #[test]
    fn chains() {
        let c = FinitePoset::chain(2);
        assert_eq!(c.strict_chains(None), vec![vec![0], vec![1], vec![0, 1]]);
        let e = example();
        let mask = e.subset_mask(&[0, 1]);
        assert_eq!(e.strict_chains(Some(&mask)), vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(FinitePoset::antichain(2).strict_chains(None), vec![vec![0], vec![1]]);
        assert_eq!(e.chain_count(), e.strict_chains(None).len());
    }

    #[test]
    fn ranks() {
        assert_eq!(FinitePoset::chain(3).rank_function().unwrap().assignment, vec![0, 1, 2]);
        assert_eq!(example().rank_function().unwrap().assignment, vec![0, 1, 1, 2]);
        let skew = FinitePoset::from_covers(
            &["p", "q", "r", "s", "t"],
            &[("p", "q"), ("q", "s"), ("p", "r"), ("r", "t"), ("t", "s")],
        )
        .unwrap();
        assert!(skew.rank_function().is_none());
        assert!(matches!(skew.chain_length_to(3), Err(PosetError::NotGraded { .. })));
    }

    #[test]
    fn chain_lengths() {
        let e = example();
        assert_eq!(e.chain_length_to(0).unwrap(), 0);
        assert_eq!(e.chain_length_to(3).unwrap(), 2);
    }

    #[test]
    fn json_round_trip() {
        let e = example();
        let text = serde_json::to_string(&e.to_json()).unwrap();
        assert_eq!(FinitePoset::from_json_str(&text).unwrap(), e);
        assert!(FinitePoset::from_json_str(r#"{"elements":["a","a"],"covers":[]}"#).is_err());
    }
}
