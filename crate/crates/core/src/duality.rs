//! The duality functor and the Verdier / Gorenstein* deciders.
//!
//! Cohomology is reported in homological degrees: `H^n` lives in degree
//! `−n` of every [`HomologySummary`] produced here.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::homotopy::{self, HomotopyError, TotalizationComplex};
use crate::linalg::{ChainComplex, HomologySummary, LinalgError, Ring};
use crate::poset::{FinitePoset, PosetError};
use crate::simplicial::{SimplicialComplex, SimplicialError};
use crate::diagram::OpDiagram;

#[derive(Debug, Error)]
pub enum DualityError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Evidence attached to a [`VerdictReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A pair `p ≤ q` with the (cohomologically indexed) homology of
    /// `Γ(P; Z_{[p,q]})`.
    Pair { p: String, q: String, homology: HomologySummary },
    /// An open interval `(p, q)` whose order complex is not a homology
    /// sphere, with its reduced homology (ordinary homological degrees).
    Interval { p: String, q: String, reduced_homology: HomologySummary },
    /// An element, with the failing sub-check described in `detail`.
    Element { p: String, detail: String, reduced_homology: Option<HomologySummary> },
    /// Two elements at which a value was not the expected one.
    Image { p: String, at: String, homology: HomologySummary, expected: HomologySummary },
    /// A check that was not run, and why.
    Skipped { check: String, reason: String },
    /// A check run on a random subset of its cases.
    Sampled { check: String, cases: usize, of: usize, seed: u64 },
    /// A check run in full on `cases` cases.
    Checked { check: String, cases: usize },
    /// The outcome of a named sub-check.
    Verdict { check: String, verdict: bool },
    /// Two deciders that must agree did not: a bug, not a mathematical outcome.
    Inconsistency { detail: String },
}

/// The outcome of a decider, with reproducible evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub property: String,
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
    pub timing_ms: u64,
    pub seed: Option<u64>,
    pub ring: Ring,
    /// Indexing convention for every homology summary in the report.
    pub indexing: String,
}

pub const INDEXING: &str = "homological degrees; limit cohomology H^n is reported in degree -n, reduced homology of intervals in its own degree";

impl VerdictReport {
    fn new(property: &str, ring: Ring, started: Instant) -> Self {
        VerdictReport {
            property: property.to_string(),
            verdict: true,
            witnesses: Vec::new(),
            timing_ms: started.elapsed().as_millis() as u64,
            seed: None,
            ring,
            indexing: INDEXING.to_string(),
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.timing_ms = started.elapsed().as_millis() as u64;
        self
    }

    /// True when the report records a disagreement between deciders.
    pub fn is_inconsistent(&self) -> bool {
        self.witnesses.iter().any(|w| matches!(w, Witness::Inconsistency { .. }))
    }

    /// Canonical JSON: sorted keys, integers only.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        serde_json::to_string_pretty(&value).expect("values serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

fn homology_text(h: &HomologySummary) -> String {
    if h.is_zero() {
        "0".into()
    } else {
        h.to_string()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair { p, q, homology } => write!(f, "pair ({p}, {q}): {}", homology.cohomological_display()),
            Witness::Interval { p, q, reduced_homology } => write!(f, "interval ({p}, {q}): reduced homology {}", homology_text(reduced_homology)),
            Witness::Element { p, detail, reduced_homology } => {
                write!(f, "element {p}: {detail}")?;
                if let Some(h) = reduced_homology {
                    write!(f, " (reduced homology {})", homology_text(h))?;
                }
                Ok(())
            }
            Witness::Image { p, at, homology, expected } => write!(
                f,
                "image of generator {p} at {at}: {} (expected {})",
                homology.cohomological_display(),
                expected.cohomological_display()
            ),
            Witness::Skipped { check, reason } => write!(f, "skipped {check}: {reason}"),
            Witness::Sampled { check, cases, of, seed } => write!(f, "{check}: sampled {cases} of {of} cases (seed {seed})"),
            Witness::Checked { check, cases } => write!(f, "{check}: checked {cases} cases"),
            Witness::Verdict { check, verdict } => write!(f, "{check}: {}", if *verdict { "holds" } else { "fails" }),
            Witness::Inconsistency { detail } => write!(f, "INCONSISTENCY: {detail}"),
        }
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "property: {}", self.property)?;
        writeln!(f, "verdict: {}", if self.verdict { "holds" } else { "fails" })?;
        writeln!(f, "ring: {}", self.ring)?;
        writeln!(f, "indexing: {}", self.indexing)?;
        if let Some(seed) = self.seed {
            writeln!(f, "seed: {seed}")?;
        }
        for w in &self.witnesses {
            writeln!(f, "  - {w}")?;
        }
        write!(f, "time: {} ms", self.timing_ms)
    }
}

/// Options shared by the deciders.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub ring: Ring,
    /// Posets with more elements than this get the vanishing criterion
    /// only on a sample (if `sample_pairs` is set) or not at all.
    pub full_check_bound: usize,
    pub sample_pairs: Option<usize>,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { ring: Ring::Integers, full_check_bound: 40, sample_pairs: None, seed: 0 }
    }
}

impl CheckConfig {
    pub fn with_ring(ring: Ring) -> Self {
        CheckConfig { ring, ..Self::default() }
    }

    /// Runs every check in full regardless of size.
    pub fn unbounded(ring: Ring) -> Self {
        CheckConfig { ring, full_check_bound: usize::MAX, ..Self::default() }
    }
}

/// `Γ(P; Z_{[p,q]})` as a homology summary.
pub fn gamma_interval(poset: &FinitePoset, p: usize, q: usize, ring: Ring) -> Result<HomologySummary, DualityError> {
    let d = Diagram::interval_unit_ring(poset, p, q, ring)?;
    Ok(homotopy::gamma(&d)?.homology()?)
}

/// The duality functor: `𝔻F(p)` is the homotopy limit over `P` of `F`
/// restricted to `P_{≥p}` and extended by zero; for `p' ⋖ p` the map
/// `𝔻F(p) → 𝔻F(p')` includes slots (chains ending in `P_{≥p}` sit among
/// those ending in `P_{≥p'}`).
pub fn dualize(diagram: &Diagram) -> Result<OpDiagram, DualityError> {
    let base = diagram.base();
    let mut all = FixedBitSet::with_capacity(base.len());
    all.insert_range(..);
    let totals: Vec<TotalizationComplex> = (0..base.len())
        .into_par_iter()
        .map(|p| homotopy::holim_masked(diagram, &all, base.up_set(p)))
        .collect::<Result<_, _>>()?;
    let op = base.opposite();
    let mut edges = HashMap::new();
    for &(lower, upper) in base.covers() {
        let m = homotopy::slot_map(&totals[upper], &totals[lower]);
        if !m.is_empty() {
            // in P^op the cover runs upper → lower
            edges.insert((upper, lower), m);
        }
    }
    let at: Vec<ChainComplex> = totals.into_iter().map(TotalizationComplex::into_complex).collect();
    let inner = Diagram::new(op, diagram.ring(), at, edges)?;
    Ok(OpDiagram::from_opposite(base, inner))
}

fn choose_pairs(pairs: &[(usize, usize)], n: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<(usize, usize)> = pairs.choose_multiple(&mut rng, n.min(pairs.len())).copied().collect();
    chosen.sort_unstable();
    chosen
}

/// Checks `Γ(P; Z_{[p,q]}) = 0` on `pairs`; returns the first nonvanishing
/// pair in the given order.
fn first_nonvanishing(poset: &FinitePoset, pairs: &[(usize, usize)], ring: Ring) -> Result<Option<(usize, usize, HomologySummary)>, DualityError> {
    let results: Vec<HomologySummary> = pairs
        .par_iter()
        .map(|&(p, q)| gamma_interval(poset, p, q, ring))
        .collect::<Result<_, _>>()?;
    Ok(pairs.iter().zip(results).find(|(_, h)| !h.is_zero()).map(|(&(p, q), h)| (p, q, h)))
}

const VANISHING: &str = "vanishing of interval units";
const LOWER_SETS: &str = "Gorenstein* lower sets";

/// Decides the Verdier property by the vanishing of `Γ(P; Z_{[p,q]})` for
/// all `p < q`. Posets larger than `full_check_bound` are checked on a
/// seeded sample when `sample_pairs` is set; otherwise the Gorenstein*
/// lower-set criterion decides and the vanishing check is marked skipped.
pub fn is_verdier(poset: &FinitePoset, config: &CheckConfig) -> Result<VerdictReport, DualityError> {
    let started = Instant::now();
    let mut report = VerdictReport::new("verdier", config.ring, started);
    let pairs = poset.strict_pairs();
    let oversized = poset.len() > config.full_check_bound;
    let checked: Vec<(usize, usize)> = match (oversized, config.sample_pairs) {
        (false, _) => {
            report.witnesses.push(Witness::Checked { check: VANISHING.into(), cases: pairs.len() });
            pairs
        }
        (true, Some(n)) => {
            report.seed = Some(config.seed);
            let chosen = choose_pairs(&pairs, n, config.seed);
            report.witnesses.push(Witness::Sampled { check: VANISHING.into(), cases: chosen.len(), of: pairs.len(), seed: config.seed });
            chosen
        }
        (true, None) => {
            report.witnesses.push(Witness::Skipped {
                check: VANISHING.into(),
                reason: format!("{} elements exceed the full-check bound {}; decided by {LOWER_SETS}", poset.len(), config.full_check_bound),
            });
            let via = is_verdier_via_gorenstein(poset, config.ring)?;
            report.verdict = via.verdict;
            report.witnesses.extend(via.witnesses);
            return Ok(report.finish(started));
        }
    };
    if let Some((p, q, homology)) = first_nonvanishing(poset, &checked, config.ring)? {
        report.verdict = false;
        report.witnesses.push(Witness::Pair { p: poset.name(p).into(), q: poset.name(q).into(), homology });
    }
    if oversized {
        // a sample can refute but not establish the property
        let via = is_verdier_via_gorenstein(poset, config.ring)?;
        report.witnesses.push(Witness::Verdict { check: LOWER_SETS.into(), verdict: via.verdict });
        if via.verdict != report.verdict && report.verdict {
            report.verdict = false;
            report.witnesses.extend(via.witnesses);
        } else if !report.verdict && via.verdict {
            report.witnesses.push(Witness::Inconsistency {
                detail: format!("sampled {VANISHING} fails but {LOWER_SETS} holds"),
            });
        }
    }
    Ok(report.finish(started))
}

/// How sphere-ness of an order complex is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereTest {
    Homology,
    Cohomology,
}

fn sphere_summary(poset: &FinitePoset, members: &[usize], ring: Ring, test: SphereTest) -> Result<(bool, HomologySummary), DualityError> {
    let k = SimplicialComplex::order_complex(&poset.induced(members));
    let h = match test {
        SphereTest::Homology => k.reduced_homology(ring)?,
        SphereTest::Cohomology => k.reduced_cohomology(ring)?,
    };
    Ok((h.sphere_degree().is_some(), h))
}

/// Decides the Gorenstein* property: every open interval of `P_{⊥,⊤}` has
/// the reduced homology of a sphere (the empty interval counting as
/// `S^{−1}`).
pub fn is_gorenstein_star_poset(poset: &FinitePoset, ring: Ring) -> Result<VerdictReport, DualityError> {
    is_gorenstein_star_poset_with(poset, ring, SphereTest::Homology)
}

pub fn is_gorenstein_star_poset_with(poset: &FinitePoset, ring: Ring, test: SphereTest) -> Result<VerdictReport, DualityError> {
    let started = Instant::now();
    let mut report = VerdictReport::new("gorenstein*", ring, started);
    let cone = poset.add_bottom_and_top();
    let pairs = cone.strict_pairs();
    let results: Vec<(bool, HomologySummary)> = pairs
        .par_iter()
        .map(|&(p, q)| sphere_summary(&cone, &cone.open_interval(p, q), ring, test))
        .collect::<Result<_, _>>()?;
    report.witnesses.push(Witness::Checked { check: "sphere homology of open intervals".into(), cases: pairs.len() });
    if let Some(((p, q), (_, homology))) = pairs.iter().zip(results).find(|(_, (ok, _))| !ok) {
        report.verdict = false;
        report.witnesses.push(Witness::Interval { p: cone.name(*p).into(), q: cone.name(*q).into(), reduced_homology: homology });
    }
    Ok(report.finish(started))
}

/// An interval of `P_⊥`: `(lower, upper)` with `lower = None` for `⊥`.
type IntervalKey = (Option<usize>, usize);

/// Decides the Verdier property by checking that every `P_{<p}` is
/// Gorenstein*. The intervals involved are the open intervals `(x, y)` of
/// `P` and the lower sets `P_{<y}`; each is computed once.
pub fn is_verdier_via_gorenstein(poset: &FinitePoset, ring: Ring) -> Result<VerdictReport, DualityError> {
    let started = Instant::now();
    let mut report = VerdictReport::new("verdier via gorenstein* lower sets", ring, started);
    let mut keys: Vec<IntervalKey> = (0..poset.len()).map(|y| (None, y)).collect();
    keys.extend(poset.strict_pairs().into_iter().map(|(x, y)| (Some(x), y)));
    let results: Vec<(bool, HomologySummary)> = keys
        .par_iter()
        .map(|&(x, y)| {
            let members = match x {
                None => poset.below(y),
                Some(x) => poset.open_interval(x, y),
            };
            sphere_summary(poset, &members, ring, SphereTest::Homology)
        })
        .collect::<Result<_, _>>()?;
    let table: HashMap<IntervalKey, (bool, HomologySummary)> = keys.into_iter().zip(results).collect();
    let failing = |key: IntervalKey| -> Option<&HomologySummary> {
        let (ok, h) = &table[&key];
        (!ok).then_some(h)
    };
    for p in 0..poset.len() {
        // intervals of (P_{<p})_{⊥,⊤}: (x,y) with x < y ≤ p, and P_{<y} for y ≤ p
        let lower = poset.at_most(p);
        let mut bad: Option<(String, HomologySummary)> = None;
        'search: for &y in &lower {
            if let Some(h) = failing((None, y)) {
                bad = Some((format!("P_<{} is not a homology sphere", poset.name(y)), h.clone()));
                break 'search;
            }
            for x in poset.below(y) {
                if let Some(h) = failing((Some(x), y)) {
                    bad = Some((format!("open interval ({}, {}) is not a homology sphere", poset.name(x), poset.name(y)), h.clone()));
                    break 'search;
                }
            }
        }
        if let Some((detail, h)) = bad {
            report.verdict = false;
            report.witnesses.push(Witness::Element {
                p: poset.name(p).into(),
                detail: format!("P_<{} is not Gorenstein*: {detail}", poset.name(p)),
                reduced_homology: Some(h),
            });
            break;
        }
    }
    report.witnesses.push(Witness::Checked { check: LOWER_SETS.into(), cases: poset.len() });
    Ok(report.finish(started))
}

/// Runs both Verdier deciders and reports any disagreement as an
/// inconsistency. The verdict is that of the vanishing criterion when it
/// ran in full, otherwise that of the Gorenstein* criterion.
pub fn main_theorem_check(poset: &FinitePoset, config: &CheckConfig) -> Result<VerdictReport, DualityError> {
    let started = Instant::now();
    let mut report = VerdictReport::new("verdier (both criteria)", config.ring, started);
    let vanishing = is_verdier(poset, config)?;
    let lower = is_verdier_via_gorenstein(poset, config.ring)?;
    report.seed = vanishing.seed;
    report.verdict = vanishing.verdict;
    report.witnesses.push(Witness::Verdict { check: VANISHING.into(), verdict: vanishing.verdict });
    report.witnesses.push(Witness::Verdict { check: LOWER_SETS.into(), verdict: lower.verdict });
    if vanishing.verdict != lower.verdict {
        report.witnesses.push(Witness::Inconsistency {
            detail: format!("{VANISHING}: {}, {LOWER_SETS}: {}", vanishing.verdict, lower.verdict),
        });
    }
    let mut seen = HashSet::new();
    for w in vanishing.witnesses.into_iter().chain(lower.witnesses) {
        if seen.insert(serde_json::to_string(&w).expect("witness")) {
            report.witnesses.push(w);
        }
    }
    Ok(report.finish(started))
}

/// `P` is Gorenstein* exactly when `P` with a greatest element adjoined is
/// Verdier; the verdict records whether the two deciders agree.
pub fn cone_check(poset: &FinitePoset, config: &CheckConfig) -> Result<VerdictReport, DualityError> {
    let started = Instant::now();
    let mut report = VerdictReport::new("gorenstein* iff cone is verdier", config.ring, started);
    let g = is_gorenstein_star_poset(poset, config.ring)?;
    let v = is_verdier(&poset.add_top(), config)?;
    report.seed = v.seed;
    report.witnesses.push(Witness::Verdict { check: "gorenstein*".into(), verdict: g.verdict });
    report.witnesses.push(Witness::Verdict { check: "cone is verdier".into(), verdict: v.verdict });
    report.verdict = g.verdict == v.verdict;
    if !report.verdict {
        report.witnesses.push(Witness::Inconsistency { detail: "gorenstein* and cone verdicts differ".into() });
    }
    Ok(report.finish(started))
}

fn require_verdier(poset: &FinitePoset, config: &CheckConfig) -> Result<(), DualityError> {
    if is_verdier(poset, config)?.verdict {
        Ok(())
    } else {
        Err(DualityError::Precondition("the poset is not Verdier".into()))
    }
}

/// For Verdier `P`: the dual of each `Z_{≤p}` is `Z` at `p` in degree
/// `−(length of maximal chains ending at p)` and zero elsewhere.
pub fn generator_image_check(poset: &FinitePoset, config: &CheckConfig) -> Result<VerdictReport, DualityError> {
    require_verdier(poset, config)?;
    let started = Instant::now();
    let mut report = VerdictReport::new("generator images", config.ring, started);
    let unit = ChainComplex::concentrated(config.ring, 0, 1);
    'outer: for p in 0..poset.len() {
        let r = poset.chain_length_to(p)?;
        let dual = dualize(&Diagram::corep_sheaf(poset, p, &unit))?;
        for at in 0..poset.len() {
            let homology = dual.at(at).homology()?;
            let expected = if at == p { HomologySummary::concentrated(-(r as i32), 1) } else { HomologySummary::new() };
            if homology != expected {
                report.verdict = false;
                report.witnesses.push(Witness::Image { p: poset.name(p).into(), at: poset.name(at).into(), homology, expected });
                break 'outer;
            }
        }
    }
    report.witnesses.push(Witness::Checked { check: "generators".into(), cases: poset.len() });
    Ok(report.finish(started))
}

/// For Verdier `P`: every `P_{>p}` and `P_{≤p}` is Verdier.
pub fn hereditary_check(poset: &FinitePoset, config: &CheckConfig) -> Result<VerdictReport, DualityError> {
    require_verdier(poset, config)?;
    let started = Instant::now();
    let mut report = VerdictReport::new("hereditary verdier", config.ring, started);
    for p in 0..poset.len() {
        for (label, members) in [(">", poset.above(p)), ("≤", poset.at_most(p))] {
            let sub = is_verdier(&poset.induced(&members), config)?;
            if !sub.verdict {
                report.verdict = false;
                report.witnesses.push(Witness::Element {
                    p: poset.name(p).into(),
                    detail: format!("P_{label}{} is not Verdier", poset.name(p)),
                    reduced_homology: None,
                });
            }
        }
    }
    report.witnesses.push(Witness::Checked { check: "subposets".into(), cases: 2 * poset.len() });
    Ok(report.finish(started))
}

/// For Gorenstein* `P` and `F` on `P_{⊥,⊤}`: `F` is a limit diagram iff it
/// is a colimit diagram. The verdict records agreement.
pub fn limit_colimit_check(poset: &FinitePoset, diagram: &Diagram) -> Result<VerdictReport, DualityError> {
    let ring = diagram.ring();
    if !is_gorenstein_star_poset(poset, ring)?.verdict {
        return Err(DualityError::Precondition("the poset is not Gorenstein*".into()));
    }
    if diagram.base().len() != poset.len() + 2 {
        return Err(DualityError::Precondition("the diagram must live on the poset with ⊥ and ⊤ adjoined".into()));
    }
    let started = Instant::now();
    let mut report = VerdictReport::new("limit iff colimit", ring, started);
    let lim = homotopy::is_limit_diagram(diagram)?;
    let colim = homotopy::is_colimit_diagram(diagram)?;
    report.witnesses.push(Witness::Verdict { check: "limit diagram".into(), verdict: lim });
    report.witnesses.push(Witness::Verdict { check: "colimit diagram".into(), verdict: colim });
    report.verdict = lim == colim;
    if !report.verdict {
        report.witnesses.push(Witness::Inconsistency { detail: "limit and colimit verdicts differ".into() });
    }
    Ok(report.finish(started))
}

/// `Γ(P; Z_{[p,q]})` for every `p ≤ q`, in pair order.
pub fn vanishing_table(poset: &FinitePoset, ring: Ring) -> Result<Vec<(usize, usize, HomologySummary)>, DualityError> {
    let pairs: Vec<(usize, usize)> = (0..poset.len()).flat_map(|p| poset.at_least(p).into_iter().map(move |q| (p, q))).collect();
    let results: Vec<HomologySummary> = pairs.par_iter().map(|&(p, q)| gamma_interval(poset, p, q, ring)).collect::<Result<_, _>>()?;
    Ok(pairs.into_iter().zip(results).map(|((p, q), h)| (p, q, h)).collect())
}
