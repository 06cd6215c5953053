//! Strict functors from a finite poset to chain complexes.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::linalg::{ChainComplex, ChainMap, LinalgError, Matrix, Ring};
use crate::poset::{FinitePoset, PosetError};

/// Degreewise components of a chain map; missing degrees are zero.
pub type Components = BTreeMap<i32, Matrix>;

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("{p:?} is not below {q:?}")]
    NotComparable { p: String, q: String },
    #[error("the subposet is not interval-closed: {between:?} lies between {low:?} and {high:?}")]
    NotIntervalClosed { low: String, between: String, high: String },
    #[error("{p:?} ⋖ {q:?} is not a cover relation")]
    NotACover { p: String, q: String },
    #[error("edge {p:?}→{q:?}: {source}")]
    BadEdge { p: String, q: String, source: LinalgError },
    #[error("value at {element:?}: {source}")]
    BadValue { element: String, source: LinalgError },
    #[error("diagrams have different base posets")]
    BaseMismatch,
    #[error("complexes over different coefficient rings")]
    RingMismatch,
    #[error("the base poset has no least element")]
    NoLeastElement,
    #[error("the base poset has no greatest element")]
    NoGreatestElement,
    #[error("a direct sum needs at least one summand to fix the base poset")]
    EmptySum,
    #[error("malformed diagram JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The first square whose two composites disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationFailure {
    pub p: String,
    pub q: String,
    pub degree: i32,
}

/// A strict functor `P → Ch`: complexes at elements and chain maps along
/// cover relations, with path-independent composites (see
/// [`Diagram::validate`]).
#[derive(Clone, Debug)]
pub struct Diagram {
    base: FinitePoset,
    ring: Ring,
    at: Vec<ChainComplex>,
    edges: HashMap<(usize, usize), Components>,
}

pub(crate) fn identity_components(c: &ChainComplex) -> Components {
    c.ranks().iter().map(|(n, r)| (*n, Matrix::identity(*r))).collect()
}

/// `second ∘ first`, degreewise.
pub(crate) fn compose(first: &Components, second: &Components) -> Result<Components, LinalgError> {
    let mut out = BTreeMap::new();
    for (n, f) in first {
        if let Some(g) = second.get(n) {
            let m = g.mul(f)?;
            if !m.is_zero() {
                out.insert(*n, m);
            }
        }
    }
    Ok(out)
}

fn components_equal(a: &Components, b: &Components, ring: Ring) -> Option<i32> {
    let mut degrees: Vec<i32> = a.keys().chain(b.keys()).copied().collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees.into_iter().find(|n| match (a.get(n), b.get(n)) {
        (Some(x), Some(y)) => !x.eq_in(y, ring),
        (Some(x), None) | (None, Some(x)) => !x.is_zero_in(ring),
        (None, None) => false,
    })
}

impl Diagram {
    /// Assembles a diagram, checking that every edge is a cover and a chain
    /// map of the right shape. Path independence is checked separately by
    /// [`Diagram::validate`].
    pub fn new(
        base: FinitePoset,
        ring: Ring,
        at: Vec<ChainComplex>,
        edges: HashMap<(usize, usize), Components>,
    ) -> Result<Self, DiagramError> {
        assert_eq!(at.len(), base.len(), "one complex per element");
        if at.iter().any(|c| c.ring() != ring) {
            return Err(DiagramError::RingMismatch);
        }
        let mut kept = HashMap::new();
        for ((p, q), comps) in edges {
            if !base.is_cover(p, q) {
                return Err(DiagramError::NotACover { p: base.name(p).into(), q: base.name(q).into() });
            }
            let map = ChainMap::new(at[p].clone(), at[q].clone(), comps).map_err(|source| DiagramError::BadEdge {
                p: base.name(p).into(),
                q: base.name(q).into(),
                source,
            })?;
            if !map.components().is_empty() {
                kept.insert((p, q), map.components().clone());
            }
        }
        Ok(Diagram { base, ring, at, edges: kept })
    }

    pub fn zero(base: &FinitePoset, ring: Ring) -> Self {
        Diagram { base: base.clone(), ring, at: vec![ChainComplex::zero(ring); base.len()], edges: HashMap::new() }
    }

    /// The constant diagram with value `c` and identity edges.
    pub fn constant(base: &FinitePoset, c: &ChainComplex) -> Self {
        let id = identity_components(c);
        let edges = if id.is_empty() { HashMap::new() } else { base.covers().iter().map(|&e| (e, id.clone())).collect() };
        Diagram { base: base.clone(), ring: c.ring(), at: vec![c.clone(); base.len()], edges }
    }

    /// `E` on the subset `members` (which must be interval-closed), zero
    /// elsewhere, identities between members.
    fn constant_on(base: &FinitePoset, members: &[usize], e: &ChainComplex) -> Self {
        let mask = base.subset_mask(members);
        let mut at = vec![ChainComplex::zero(e.ring()); base.len()];
        for &r in members {
            at[r] = e.clone();
        }
        let id = identity_components(e);
        let mut edges = HashMap::new();
        if !id.is_empty() {
            for &(a, b) in base.covers() {
                if mask.contains(a) && mask.contains(b) {
                    edges.insert((a, b), id.clone());
                }
            }
        }
        Diagram { base: base.clone(), ring: e.ring(), at, edges }
    }

    /// `E_{[p,q]}`: `E` on the closed interval, zero elsewhere.
    pub fn interval_unit(base: &FinitePoset, p: usize, q: usize, e: &ChainComplex) -> Result<Self, DiagramError> {
        if !base.leq(p, q) {
            return Err(DiagramError::NotComparable { p: base.name(p).into(), q: base.name(q).into() });
        }
        Ok(Self::constant_on(base, &base.closed_interval(p, q), e))
    }

    /// `Z_{[p,q]}` with `Z` the ring in degree 0.
    pub fn interval_unit_ring(base: &FinitePoset, p: usize, q: usize, ring: Ring) -> Result<Self, DiagramError> {
        Self::interval_unit(base, p, q, &ChainComplex::concentrated(ring, 0, 1))
    }

    pub fn skyscraper(base: &FinitePoset, p: usize, e: &ChainComplex) -> Self {
        Self::constant_on(base, &[p], e)
    }

    /// `E_{≤p}`: `E` on `P_{≤p}`, zero elsewhere.
    pub fn corep_sheaf(base: &FinitePoset, p: usize, e: &ChainComplex) -> Self {
        Self::constant_on(base, &base.at_most(p), e)
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn at(&self, p: usize) -> &ChainComplex {
        &self.at[p]
    }

    pub fn values(&self) -> &[ChainComplex] {
        &self.at
    }

    /// Edge components for a cover `p ⋖ q` (empty for zero maps).
    pub fn edge(&self, p: usize, q: usize) -> &Components {
        static EMPTY: Components = BTreeMap::new();
        self.edges.get(&(p, q)).unwrap_or(&EMPTY)
    }

    pub fn edge_map(&self, p: usize, q: usize) -> Result<ChainMap, DiagramError> {
        Ok(ChainMap::new(self.at[p].clone(), self.at[q].clone(), self.edge(p, q).clone())?)
    }

    /// Elements with a nonzero value.
    pub fn support(&self) -> Vec<usize> {
        (0..self.base.len()).filter(|&p| !self.at[p].is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.at.iter().all(ChainComplex::is_zero)
    }

    /// The composite of edge maps along a cover path from `p` to `q`
    /// (identity when `p = q`); `None` unless `p ≤ q`.
    pub fn composite(&self, p: usize, q: usize) -> Result<Option<Components>, LinalgError> {
        if !self.base.leq(p, q) {
            return Ok(None);
        }
        let mut path = vec![q];
        let mut cur = q;
        while cur != p {
            cur = *self.base.lower_covers(cur).iter().find(|&&r| self.base.leq(p, r)).expect("cover path exists");
            path.push(cur);
        }
        let mut acc = identity_components(&self.at[p]);
        for w in path.windows(2).rev() {
            acc = compose(&acc, self.edge(w[1], w[0]))?;
        }
        Ok(Some(acc))
    }

    /// Checks path independence: for every `p ≤ q`, composites along all
    /// cover paths agree. Reports the first failing pair `(p, q)`, with `p`
    /// in element order and `q` in a linear-extension order.
    pub fn validate(&self) -> Result<(), ValidationFailure> {
        let order = self.base.linear_extension();
        for p in 0..self.base.len() {
            let mut maps: HashMap<usize, Components> = HashMap::new();
            maps.insert(p, identity_components(&self.at[p]));
            for &q in order.iter().filter(|&&q| q != p && self.base.leq(p, q)) {
                let mut candidate: Option<Components> = None;
                for &r in self.base.lower_covers(q).iter().filter(|&&r| self.base.leq(p, r)) {
                    let via = compose(&maps[&r], self.edge(r, q)).map_err(|_| ValidationFailure {
                        p: self.base.name(p).into(),
                        q: self.base.name(q).into(),
                        degree: 0,
                    })?;
                    match &candidate {
                        None => candidate = Some(via),
                        Some(c) => {
                            if let Some(degree) = components_equal(c, &via, self.ring) {
                                return Err(ValidationFailure {
                                    p: self.base.name(p).into(),
                                    q: self.base.name(q).into(),
                                    degree,
                                });
                            }
                        }
                    }
                }
                maps.insert(q, candidate.expect("q > p has a lower cover above p"));
            }
        }
        Ok(())
    }

    /// Restriction to the full subposet on `subset`; edges become
    /// composites along paths in the original poset.
    pub fn restrict(&self, subset: &[usize]) -> Result<Diagram, DiagramError> {
        let mut keep = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.base.len()) {
            return Err(PosetError::UnknownElement(format!("#{bad}")).into());
        }
        let sub = self.base.induced(&keep);
        let at = keep.iter().map(|&i| self.at[i].clone()).collect();
        let mut edges = HashMap::new();
        for &(a, b) in sub.covers() {
            let comps = self.composite(keep[a], keep[b])?.expect("comparable");
            if !comps.is_empty() {
                edges.insert((a, b), comps);
            }
        }
        Ok(Diagram { base: sub, ring: self.ring, at, edges })
    }

    pub fn restrict_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Diagram, DiagramError> {
        let idx = names.iter().map(|n| self.base.index_of(n.as_ref())).collect::<Result<Vec<_>, _>>()?;
        self.restrict(&idx)
    }

    /// Extends a diagram on `Q ⊆ P` (elements matched by name) by zero. `Q`
    /// must be interval-closed in `P`.
    pub fn extension_by_zero(&self, into: &FinitePoset) -> Result<Diagram, DiagramError> {
        let embed = self
            .base
            .elements()
            .iter()
            .map(|n| into.index_of(n))
            .collect::<Result<Vec<usize>, _>>()?;
        let mask = into.subset_mask(&embed);
        for &a in &embed {
            for &b in &embed {
                if let Some(r) = into.closed_interval(a, b).into_iter().find(|r| !mask.contains(*r)) {
                    return Err(DiagramError::NotIntervalClosed {
                        low: into.name(a).into(),
                        between: into.name(r).into(),
                        high: into.name(b).into(),
                    });
                }
            }
        }
        let mut back = vec![usize::MAX; into.len()];
        for (i, &p) in embed.iter().enumerate() {
            back[p] = i;
        }
        let mut at = vec![ChainComplex::zero(self.ring); into.len()];
        for (i, &p) in embed.iter().enumerate() {
            at[p] = self.at[i].clone();
        }
        let mut edges = HashMap::new();
        for &(a, b) in into.covers() {
            if mask.contains(a) && mask.contains(b) {
                let comps = self.composite(back[a], back[b])?.expect("comparable in Q");
                if !comps.is_empty() {
                    edges.insert((a, b), comps);
                }
            }
        }
        Ok(Diagram { base: into.clone(), ring: self.ring, at, edges })
    }

    /// Pointwise direct sum of diagrams on the same poset.
    pub fn direct_sum(parts: &[&Diagram]) -> Result<Diagram, DiagramError> {
        let first = parts.first().ok_or(DiagramError::EmptySum)?;
        if parts.iter().any(|d| d.base != first.base) {
            return Err(DiagramError::BaseMismatch);
        }
        if parts.iter().any(|d| d.ring != first.ring) {
            return Err(DiagramError::RingMismatch);
        }
        let n = first.base.len();
        let mut at = Vec::with_capacity(n);
        for p in 0..n {
            let cs: Vec<&ChainComplex> = parts.iter().map(|d| &d.at[p]).collect();
            at.push(ChainComplex::direct_sum(&cs)?);
        }
        let mut edges = HashMap::new();
        for &(p, q) in first.base.covers() {
            let mut comps = BTreeMap::new();
            let mut degrees: Vec<i32> = at[p].ranks().keys().copied().collect();
            degrees.retain(|n| at[q].rank(*n) > 0);
            for deg in degrees {
                let rows: Vec<usize> = parts.iter().map(|d| d.at[q].rank(deg)).collect();
                let cols: Vec<usize> = parts.iter().map(|d| d.at[p].rank(deg)).collect();
                let blocks: Vec<Vec<Option<&Matrix>>> = (0..parts.len())
                    .map(|i| (0..parts.len()).map(|j| if i == j { parts[i].edge(p, q).get(&deg) } else { None }).collect())
                    .collect();
                let m = Matrix::block(&rows, &cols, &blocks)?;
                if !m.is_zero() {
                    comps.insert(deg, m);
                }
            }
            if !comps.is_empty() {
                edges.insert((p, q), comps);
            }
        }
        Ok(Diagram { base: first.base.clone(), ring: first.ring, at, edges })
    }

    /// Shifts every value by `k`; edge matrices are unchanged.
    pub fn shift(&self, k: i32) -> Diagram {
        Diagram {
            base: self.base.clone(),
            ring: self.ring,
            at: self.at.iter().map(|c| c.shift(k)).collect(),
            edges: self
                .edges
                .iter()
                .map(|(e, comps)| (*e, comps.iter().map(|(n, m)| (n + k, m.clone())).collect()))
                .collect(),
        }
    }

    /// Canonical JSON (sorted keys, integers only).
    pub fn to_json(&self) -> Value {
        diagram_json(&self.base, self.ring, &self.at, self.base.covers().iter().map(|&(p, q)| ((p, q), self.edge(p, q))))
    }

    pub fn from_json(value: &Value) -> Result<Diagram, DiagramError> {
        let (base, ring, at, edges) = parse_diagram_json(value)?;
        let mut indexed = HashMap::new();
        for ((p, q), comps) in edges {
            indexed.insert((base.index_of(&p)?, base.index_of(&q)?), comps);
        }
        Diagram::new(base, ring, at, indexed)
    }

    pub fn from_json_str(s: &str) -> Result<Diagram, DiagramError> {
        let v: Value = serde_json::from_str(s).map_err(|e| DiagramError::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}

fn matrix_json(m: &Matrix) -> Value {
    Value::from(m.to_dense_rows())
}

pub(crate) fn complex_json(c: &ChainComplex) -> Value {
    let degrees = match c.support() {
        Some((lo, hi)) => json!([lo, hi]),
        None => Value::Null,
    };
    let ranks: Map<String, Value> = c.ranks().iter().map(|(n, r)| (n.to_string(), json!(r))).collect();
    let mut diffs = Map::new();
    for &n in c.ranks().keys() {
        let d = c.differential(n);
        if !d.is_zero() {
            diffs.insert(n.to_string(), matrix_json(&d));
        }
    }
    json!({ "degrees": degrees, "ranks": ranks, "differentials": diffs })
}

fn components_json(comps: &Components) -> Value {
    Value::Object(comps.iter().map(|(n, m)| (n.to_string(), matrix_json(m))).collect())
}

fn diagram_json<'a>(
    base: &FinitePoset,
    ring: Ring,
    at: &[ChainComplex],
    edges: impl Iterator<Item = ((usize, usize), &'a Components)>,
) -> Value {
    let at_json: Map<String, Value> = (0..base.len()).map(|p| (base.name(p).to_string(), complex_json(&at[p]))).collect();
    let mut edges_json = Map::new();
    for ((p, q), comps) in edges {
        if !comps.is_empty() {
            edges_json.insert(format!("{}→{}", base.name(p), base.name(q)), components_json(comps));
        }
    }
    json!({
        "poset": serde_json::to_value(base.to_json()).expect("poset JSON"),
        "ring": ring.to_string(),
        "at": at_json,
        "edges": edges_json,
    })
}

fn bad(msg: impl Into<String>) -> DiagramError {
    DiagramError::Json(msg.into())
}

fn parse_degree(s: &str) -> Result<i32, DiagramError> {
    s.parse().map_err(|_| bad(format!("degree {s:?} is not an integer")))
}

fn parse_matrix(v: &Value, rows: usize, cols: usize) -> Result<Matrix, DiagramError> {
    let data: Vec<Vec<i64>> = serde_json::from_value(v.clone()).map_err(|e| bad(e.to_string()))?;
    Ok(Matrix::from_rows_with_shape(rows, cols, &data)?)
}

pub(crate) fn parse_complex(v: &Value, ring: Ring) -> Result<ChainComplex, DiagramError> {
    let obj = v.as_object().ok_or_else(|| bad("complex must be an object"))?;
    let mut ranks = BTreeMap::new();
    if let Some(r) = obj.get("ranks") {
        for (k, n) in r.as_object().ok_or_else(|| bad("ranks must be an object"))? {
            let n = n.as_u64().ok_or_else(|| bad("ranks must be nonnegative integers"))?;
            ranks.insert(parse_degree(k)?, n as usize);
        }
    }
    let rank = |n: i32| ranks.get(&n).copied().unwrap_or(0);
    let mut diffs = BTreeMap::new();
    if let Some(d) = obj.get("differentials") {
        for (k, m) in d.as_object().ok_or_else(|| bad("differentials must be an object"))? {
            let n = parse_degree(k)?;
            diffs.insert(n, parse_matrix(m, rank(n - 1), rank(n))?);
        }
    }
    Ok(ChainComplex::new(ring, ranks, diffs)?)
}

type ParsedDiagram = (FinitePoset, Ring, Vec<ChainComplex>, Vec<((String, String), Components)>);

fn parse_diagram_json(value: &Value) -> Result<ParsedDiagram, DiagramError> {
    let obj = value.as_object().ok_or_else(|| bad("diagram must be an object"))?;
    let poset_json = obj.get("poset").ok_or_else(|| bad("missing \"poset\""))?;
    let base = FinitePoset::from_json(&serde_json::from_value(poset_json.clone()).map_err(|e| bad(e.to_string()))?)?;
    let ring: Ring = match obj.get("ring") {
        Some(Value::String(s)) => s.parse()?,
        None => Ring::Integers,
        Some(_) => return Err(bad("ring must be a string")),
    };
    let mut at = vec![ChainComplex::zero(ring); base.len()];
    if let Some(a) = obj.get("at") {
        for (name, c) in a.as_object().ok_or_else(|| bad("\"at\" must be an object"))? {
            let p = base.index_of(name)?;
            at[p] = parse_complex(c, ring).map_err(|e| match e {
                DiagramError::Linalg(source) => DiagramError::BadValue { element: name.clone(), source },
                other => other,
            })?;
        }
    }
    let mut edges = Vec::new();
    if let Some(e) = obj.get("edges") {
        for (key, comps) in e.as_object().ok_or_else(|| bad("\"edges\" must be an object"))? {
            let (p, q) = key.split_once('→').ok_or_else(|| bad(format!("edge key {key:?} must look like \"p→q\"")))?;
            let (ip, iq) = (base.index_of(p)?, base.index_of(q)?);
            let mut parsed = BTreeMap::new();
            for (k, m) in comps.as_object().ok_or_else(|| bad("edge must be an object"))? {
                let n = parse_degree(k)?;
                parsed.insert(n, parse_matrix(m, at[iq].rank(n), at[ip].rank(n))?);
            }
            edges.push(((p.to_string(), q.to_string()), parsed));
        }
    }
    Ok((base, ring, at, edges))
}

/// A strict functor `P^op → Ch`: for each cover `p ⋖ q` of `P`, a chain
/// map `at(q) → at(p)`. Stored as a [`Diagram`] on the opposite poset.
#[derive(Clone, Debug)]
pub struct OpDiagram {
    base: FinitePoset,
    inner: Diagram,
}

impl OpDiagram {
    /// Views a diagram on `P^op` as a contravariant diagram on `base = P`.
    pub fn from_opposite(base: &FinitePoset, inner: Diagram) -> Self {
        debug_assert!(inner.base == base.opposite());
        OpDiagram { base: base.clone(), inner }
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn ring(&self) -> Ring {
        self.inner.ring
    }

    pub fn at(&self, p: usize) -> &ChainComplex {
        self.inner.at(p)
    }

    /// Components of the map `at(q) → at(p)` for a cover `p ⋖ q` of `P`.
    pub fn edge(&self, p: usize, q: usize) -> &Components {
        self.inner.edge(q, p)
    }

    /// The same data as a covariant diagram on `P^op`.
    pub fn as_opposite_diagram(&self) -> &Diagram {
        &self.inner
    }

    pub fn validate(&self) -> Result<(), ValidationFailure> {
        self.inner.validate()
    }

    /// Same layout as diagram JSON over `P`, with `"variance": "contravariant"`
    /// and edges keyed `"q→p"` in the direction of the maps.
    pub fn to_json(&self) -> Value {
        let mut v = diagram_json(
            &self.base,
            self.inner.ring,
            &self.inner.at,
            self.base.covers().iter().map(|&(p, q)| ((q, p), self.inner.edge(q, p))),
        );
        v.as_object_mut().expect("object").insert("variance".into(), json!("contravariant"));
        v
    }

    pub fn from_json(value: &Value) -> Result<OpDiagram, DiagramError> {
        let (base, ring, at, edges) = parse_diagram_json(value)?;
        let op = base.opposite();
        let mut indexed = HashMap::new();
        for ((q, p), comps) in edges {
            indexed.insert((op.index_of(&q)?, op.index_of(&p)?), comps);
        }
        let inner = Diagram::new(op, ring, at, indexed)?;
        Ok(OpDiagram { base, inner })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: Ring = Ring::Integers;

    fn point() -> ChainComplex {
        ChainComplex::concentrated(Z, 0, 1)
    }

    fn example() -> FinitePoset {
        FinitePoset::from_covers(&["0", "1", "1'", "2"], &[("0", "1"), ("0", "1'"), ("1", "2"), ("1'", "2")]).unwrap()
    }

    fn scalar(k: i64) -> Components {
        BTreeMap::from([(0, Matrix::from_rows(&[vec![k]]))])
    }

    #[test]
    fn constant_diagrams_validate() {
        let e = example();
        assert!(Diagram::constant(&e, &point()).validate().is_ok());
        assert!(Diagram::constant(&e, &ChainComplex::zero(Z)).is_zero());
        let single = FinitePoset::chain(1);
        assert_eq!(Diagram::constant(&single, &point()).support(), vec![0]);
    }

    #[test]
    fn mismatched_diamond_fails_at_bottom_top() {
        let diamond = FinitePoset::antichain(2).add_bottom_and_top();
        let edges = HashMap::from([((0, 1), scalar(1)), ((0, 2), scalar(1)), ((1, 3), scalar(1)), ((2, 3), scalar(2))]);
        let d = Diagram::new(diamond, Z, vec![point(); 4], edges).unwrap();
        let fail = d.validate().unwrap_err();
        assert_eq!((fail.p.as_str(), fail.q.as_str(), fail.degree), ("⊥", "⊤", 0));
    }

    #[test]
    fn non_chain_map_edges_are_rejected() {
        let c = FinitePoset::chain(2);
        let two = ChainComplex::two_term(Z, 1, Matrix::identity(1));
        let edges = HashMap::from([((0, 1), BTreeMap::from([(1, Matrix::identity(1))]))]);
        assert!(matches!(Diagram::new(c, Z, vec![two, ChainComplex::two_term(Z, 1, Matrix::identity(1))], edges), Err(DiagramError::BadEdge { .. })));
    }

    #[test]
    fn interval_units() {
        let c = FinitePoset::chain(3);
        let d = Diagram::interval_unit(&c, 1, 2, &point()).unwrap();
        assert_eq!(d.support(), vec![1, 2]);
        let e = example();
        let d = Diagram::interval_unit_ring(&e, 0, 1, Z).unwrap();
        assert_eq!(d.support(), vec![0, 1]);
        assert!(Diagram::interval_unit_ring(&e, 0, 3, Z).unwrap().validate().is_ok());
        assert!(matches!(Diagram::interval_unit_ring(&e, 1, 2, Z), Err(DiagramError::NotComparable { .. })));
        assert_eq!(Diagram::interval_unit_ring(&e, 2, 2, Z).unwrap().support(), vec![2]);
    }

    #[test]
    fn corep_sheaves() {
        let c = FinitePoset::chain(2);
        let d = Diagram::corep_sheaf(&c, 1, &point());
        assert_eq!(d.support(), vec![0, 1]);
        assert_eq!(d.edge(0, 1), &scalar(1));
        assert_eq!(Diagram::corep_sheaf(&c, 0, &point()).support(), vec![0]);
    }

    #[test]
    fn restriction_composes_edges() {
        let e = example();
        let d = Diagram::interval_unit_ring(&e, 0, 3, Z).unwrap();
        let r = d.restrict(&[0, 3]).unwrap();
        assert_eq!(r.base().covers(), &[(0, 1)]);
        assert_eq!(r.edge(0, 1), &scalar(1));
        let whole = d.restrict(&[0, 1, 2, 3]).unwrap();
        assert_eq!(whole.to_json(), d.to_json());
    }

    #[test]
    fn extension_by_zero_round_trip() {
        let e = example();
        let d = Diagram::constant(&e, &point()).restrict(&e.at_least(1)).unwrap();
        let ext = d.extension_by_zero(&e).unwrap();
        assert_eq!(ext.support(), vec![1, 3]);
        assert!(ext.validate().is_ok());
        let back = ext.restrict(&[1, 3]).unwrap();
        assert_eq!(back.to_json(), d.to_json());
        let gap = Diagram::constant(&e, &point()).restrict(&[0, 3]).unwrap();
        assert!(matches!(gap.extension_by_zero(&e), Err(DiagramError::NotIntervalClosed { .. })));
    }

    #[test]
    fn sums_and_shifts() {
        let e = example();
        let a = Diagram::interval_unit_ring(&e, 0, 1, Z).unwrap();
        let b = Diagram::constant(&e, &point()).shift(2);
        let s = Diagram::direct_sum(&[&a, &b]).unwrap();
        assert!(s.validate().is_ok());
        assert_eq!(s.at(0).ranks(), &BTreeMap::from([(0, 1), (2, 1)]));
    }

    #[test]
    fn json_round_trip() {
        let e = example();
        let d = Diagram::direct_sum(&[&Diagram::interval_unit_ring(&e, 0, 3, Z).unwrap(), &Diagram::constant(&e, &ChainComplex::two_term(Z, 1, Matrix::from_rows(&[vec![2]])))]).unwrap();
        let text = serde_json::to_string(&d.to_json()).unwrap();
        let back = Diagram::from_json_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
        let op = OpDiagram::from_opposite(&e, Diagram::constant(&e.opposite(), &point()));
        let back = OpDiagram::from_json(&op.to_json()).unwrap();
        assert_eq!(back.to_json(), op.to_json());
        assert_eq!(back.edge(0, 1), &scalar(1));
    }
}
