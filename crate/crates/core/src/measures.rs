//! Finitely supported probability measures on `F_r` with exact weights.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_cap, Error, Result};
use crate::free_group::{FreeGroup, ReducedWord};
use crate::rational::{self, Q};

/// A probability measure on `F_r` with finite support.
///
/// Stored weights are strictly positive and sum to exactly one; zero entries
/// are pruned, so two measures are equal iff their maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMeasure {
    support: BTreeMap<ReducedWord, Q>,
}

impl GroupMeasure {
    /// Validates and wraps a weight map. Zero weights are dropped.
    pub fn new(weights: BTreeMap<ReducedWord, Q>) -> Result<Self> {
        let mut support = BTreeMap::new();
        let mut total = Q::zero();
        for (w, p) in weights {
            if p.is_negative() {
                return Err(Error::InvalidInput(format!(
                    "negative weight {} at {w}",
                    rational::fmt(&p)
                )));
            }
            if p.is_zero() {
                continue;
            }
            total += &p;
            support.insert(w, p);
        }
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "total mass is {}, expected exactly 1",
                rational::fmt(&total)
            )));
        }
        Ok(GroupMeasure { support })
    }

    pub fn dirac(w: ReducedWord) -> Self {
        GroupMeasure {
            support: BTreeMap::from([(w, Q::one())]),
        }
    }

    pub fn identity() -> Self {
        Self::dirac(ReducedWord::identity())
    }

    /// Uniform measure on a nonempty set of distinct words.
    pub fn uniform<I: IntoIterator<Item = ReducedWord>>(words: I) -> Result<Self> {
        let words: Vec<_> = words.into_iter().collect();
        if words.is_empty() {
            return Err(Error::InvalidInput("uniform measure on an empty set".into()));
        }
        let p = Q::new(1.into(), words.len().into());
        let mut support = BTreeMap::new();
        for w in words {
            if support.insert(w.clone(), p.clone()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate word {w} in uniform support")));
            }
        }
        Self::new(support)
    }

    /// Uniform on the `2r` generators.
    pub fn uniform_generators(group: &FreeGroup) -> Self {
        Self::uniform(group.generators().into_iter().map(ReducedWord::generator)).expect("generator set is nonempty")
    }

    pub fn get(&self, w: &ReducedWord) -> Q {
        self.support.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &ReducedWord> {
        self.support.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReducedWord, &Q)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn weights(&self) -> &BTreeMap<ReducedWord, Q> {
        &self.support
    }

    pub fn mass(&self) -> Q {
        self.support.values().sum()
    }

    pub fn max_word_len(&self) -> usize {
        self.support.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// `κ(g) = κ(g⁻¹)` for every `g`.
    pub fn is_symmetric(&self) -> bool {
        self.support.iter().all(|(w, p)| &self.get(&w.inverse()) == p)
    }

    /// `(κ₁ ∗ κ₂)(g) = Σ_h κ₁(g h⁻¹) κ₂(h)`, by a double loop over supports.
    pub fn convolve(&self, other: &GroupMeasure, cap: u64) -> Result<GroupMeasure> {
        check_cap("convolution", self.len() as u128 * other.len() as u128, cap)?;
        let mut out: BTreeMap<ReducedWord, Q> = BTreeMap::new();
        for (u, p) in &self.support {
            for (h, q) in &other.support {
                *out.entry(u.mul(h)).or_insert_with(Q::zero) += p * q;
            }
        }
        GroupMeasure::new(out)
    }

    /// `κ^{∗n}` for `n ≥ 1`.
    pub fn convolution_power(&self, n: usize, cap: u64) -> Result<GroupMeasure> {
        Ok(self.convolution_powers(n, cap)?.pop().expect("n ≥ 1"))
    }

    /// `[κ, κ^{∗2}, …, κ^{∗n}]`.
    pub fn convolution_powers(&self, n: usize, cap: u64) -> Result<Vec<GroupMeasure>> {
        if n == 0 {
            return Err(Error::InvalidInput("convolution power needs n ≥ 1".into()));
        }
        let mut powers = vec![self.clone()];
        for _ in 1..n {
            let next = powers.last().unwrap().convolve(self, cap)?;
            powers.push(next);
        }
        Ok(powers)
    }

    /// Exact convex combination `Σ c_i μ_i` with `Σ c_i = 1`.
    pub fn mixture(parts: &[(Q, &GroupMeasure)]) -> Result<GroupMeasure> {
        let mut out: BTreeMap<ReducedWord, Q> = BTreeMap::new();
        for (c, m) in parts {
            for (w, p) in &m.support {
                *out.entry(w.clone()).or_insert_with(Q::zero) += c * p;
            }
        }
        GroupMeasure::new(out)
    }

    /// Uniform average of a nonempty list of measures.
    pub fn average(parts: &[GroupMeasure]) -> Result<GroupMeasure> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("average of no measures".into()));
        }
        let c = Q::new(1.into(), parts.len().into());
        let weighted: Vec<_> = parts.iter().map(|m| (c.clone(), m)).collect();
        Self::mixture(&weighted)
    }
}

/// `ρ_n = (1/n) Σ_{k=1}^n κ^{∗k}`.
pub fn cesaro_convolutions(kappa: &GroupMeasure, n: usize, cap: u64) -> Result<GroupMeasure> {
    GroupMeasure::average(&kappa.convolution_powers(n, cap)?)
}

/// `σ_n`, uniform on the sphere of radius `n`; `σ_0 = δ_e`.
pub fn sphere_uniform(group: &FreeGroup, n: usize) -> Result<GroupMeasure> {
    GroupMeasure::uniform(group.sphere(n)?.elements)
}

/// `(1/(n+1)) Σ_{i=0}^n σ_i`.
pub fn cesaro_spheres(group: &FreeGroup, n: usize) -> Result<GroupMeasure> {
    let spheres = (0..=n).map(|i| sphere_uniform(group, i)).collect::<Result<Vec<_>>>()?;
    GroupMeasure::average(&spheres)
}

impl Serialize for GroupMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.support.len()))?;
        for (w, p) in &self.support {
            m.serialize_entry(&w.to_string(), &rational::fmt(p))?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for GroupMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut weights = BTreeMap::new();
        for (w, p) in raw {
            let w: ReducedWord = w.parse().map_err(serde::de::Error::custom)?;
            let p = rational::parse(&p).map_err(serde::de::Error::custom)?;
            *weights.entry(w).or_insert_with(Q::zero) += p;
        }
        GroupMeasure::new(weights).map_err(serde::de::Error::custom)
    }
}
