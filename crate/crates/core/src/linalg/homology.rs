use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// One homology group: `Z^rank ⊕ ⨁ Z/t` (or `F_p^rank`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl GroupSummary {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// True for a single free summand with no torsion.
    pub fn is_free_cyclic(&self) -> bool {
        self.rank == 1 && self.torsion.is_empty()
    }

    fn normalize(&mut self) {
        self.torsion.retain(|t| *t > 1);
        self.torsion.sort_unstable();
    }
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology of a complex: nonzero groups keyed by homological degree.
///
/// Over a prime field the torsion lists are empty and `rank` is the
/// dimension; display then uses `Z` as a generic symbol for the ring.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologySummary {
    #[serde(with = "degree_keys")]
    groups: BTreeMap<i32, GroupSummary>,
}

/// Degrees as string keys, so summaries survive buffered (tagged-enum)
/// deserialization where integer keys are not recovered from strings.
mod degree_keys {
    use std::collections::BTreeMap;

    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::GroupSummary;

    pub fn serialize<S: Serializer>(m: &BTreeMap<i32, GroupSummary>, s: S) -> Result<S::Ok, S::Error> {
        let keyed: BTreeMap<String, &GroupSummary> = m.iter().map(|(k, v)| (k.to_string(), v)).collect();
        keyed.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i32, GroupSummary>, D::Error> {
        let keyed = BTreeMap::<String, GroupSummary>::deserialize(d)?;
        keyed
            .into_iter()
            .map(|(k, v)| k.parse::<i32>().map(|k| (k, v)).map_err(D::Error::custom))
            .collect()
    }
}

impl HomologySummary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn concentrated(degree: i32, rank: usize) -> Self {
        let mut h = Self::new();
        h.set(degree, GroupSummary { rank, torsion: Vec::new() });
        h
    }

    /// Stores `g` at `degree`; zero groups are dropped.
    pub fn set(&mut self, degree: i32, mut g: GroupSummary) {
        g.normalize();
        if g.is_zero() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, g);
        }
    }

    pub fn at(&self, degree: i32) -> GroupSummary {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i32, &GroupSummary)> {
        self.groups.iter().map(|(d, g)| (*d, g))
    }

    /// The degree `d` when the homology is a single free cyclic group in
    /// degree `d` and zero elsewhere.
    pub fn sphere_degree(&self) -> Option<i32> {
        match self.groups.iter().collect::<Vec<_>>().as_slice() {
            [(d, g)] if g.is_free_cyclic() => Some(**d),
            _ => None,
        }
    }

    /// Homology of the complex shifted up by `k`.
    pub fn shifted(&self, k: i32) -> Self {
        HomologySummary { groups: self.groups.iter().map(|(d, g)| (d + k, g.clone())).collect() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, g) in &other.groups {
            let mut cur = out.at(*d);
            cur.rank += g.rank;
            cur.torsion.extend(&g.torsion);
            out.set(*d, cur);
        }
        out.canonicalize_torsion();
        out
    }

    /// Rewrites every torsion list into invariant-factor form (each
    /// coefficient divides the next).
    pub fn canonicalize_torsion(&mut self) {
        for g in self.groups.values_mut() {
            g.torsion = invariant_factor_form(&g.torsion);
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(d, g)| if d.rem_euclid(2) == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }

    /// Dimensions of homology with coefficients in `F_p`, by the universal
    /// coefficient theorem (valid when `self` is integral homology of a
    /// complex of free modules).
    pub fn mod_p_dimensions(&self, p: u64) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (d, g) in &self.groups {
            let hits = g.torsion.iter().filter(|t| *t % p == 0).count();
            *out.entry(*d).or_insert(0) += g.rank + hits;
            *out.entry(*d + 1).or_insert(0) += hits;
        }
        out.retain(|_, v| *v > 0);
        out
    }

    /// Text rendering in cohomological indexing (`H^n` = degree `-n`).
    pub fn cohomological_display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .groups
            .iter()
            .rev()
            .map(|(d, g)| format!("H^{} = {}", -d, g))
            .collect();
        parts.join(", ")
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.groups.iter().map(|(d, g)| format!("H_{d} = {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Converts a list of cyclic orders into invariant-factor form.
pub(crate) fn invariant_factor_form(orders: &[u64]) -> Vec<u64> {
    let mut xs: Vec<u64> = orders.iter().copied().filter(|t| *t > 1).collect();
    // repeatedly replace (a, b) by (gcd, lcm) until the chain divides
    let n = xs.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (xs[i], xs[j]);
            let g = gcd(a, b);
            xs[i] = g;
            xs[j] = a / g * b;
        }
    }
    xs.retain(|t| *t > 1);
    xs
}
