use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_group::{Generator, ReducedWord};
use crate::rational::{self, Q};

/// A measure-preserving action of `F_r` on a finite probability space,
/// given by one permutation per free generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAction {
    weights: Vec<Q>,
    forward: Vec<Vec<usize>>,
    backward: Vec<Vec<usize>>,
}

impl FiniteAction {
    pub fn new(weights: Vec<Q>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidInput("action on an empty space".into()));
        }
        if maps.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need r ≥ 2 generator maps, got {}",
                maps.len()
            )));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidInput("point weights must be positive".into()));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!("weights sum to {}", rational::fmt(&total))));
        }
        let mut backward = Vec::with_capacity(maps.len());
        for (i, m) in maps.iter().enumerate() {
            let name = Generator::new(i as u8 + 1, false)?;
            if m.len() != n {
                return Err(Error::InvalidInput(format!(
                    "map {name} has {} entries for {n} points",
                    m.len()
                )));
            }
            let mut inv = vec![usize::MAX; n];
            for (x, &y) in m.iter().enumerate() {
                if y >= n || inv[y] != usize::MAX {
                    return Err(Error::InvalidInput(format!("map {name} is not a permutation")));
                }
                inv[y] = x;
            }
            if (0..n).any(|x| weights[m[x]] != weights[x]) {
                return Err(Error::InvalidInput(format!("map {name} does not preserve the weights")));
            }
            backward.push(inv);
        }
        Ok(FiniteAction {
            weights,
            forward: maps,
            backward,
        })
    }

    pub fn uniform(maps: Vec<Vec<usize>>) -> Result<Self> {
        let n = maps.first().map_or(0, |m| m.len());
        let w = Q::new(1.into(), n.max(1).into());
        Self::new(vec![w; n], maps)
    }

    /// `ℤ/n` with generator `a_i` acting by `x ↦ x + shifts[i]`.
    pub fn cyclic(n: usize, shifts: &[i64]) -> Result<Self> {
        let maps = shifts
            .iter()
            .map(|&s| (0..n).map(|x| (x as i64 + s).rem_euclid(n as i64) as usize).collect())
            .collect();
        Self::uniform(maps)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn rank(&self) -> u8 {
        self.forward.len() as u8
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn generator_map(&self, i: usize) -> &[usize] {
        &self.forward[i]
    }

    pub fn apply_letter(&self, s: Generator, x: usize) -> usize {
        let i = s.index() as usize - 1;
        if s.is_inverse() {
            self.backward[i][x]
        } else {
            self.forward[i][x]
        }
    }

    /// `g·x` for `g = s_1⋯s_n`: the rightmost letter acts first.
    pub fn apply(&self, g: &ReducedWord, x: usize) -> usize {
        g.letters().iter().rev().fold(x, |y, &s| self.apply_letter(s, y))
    }

    /// `g⁻¹·x`.
    pub fn apply_inverse(&self, g: &ReducedWord, x: usize) -> usize {
        g.letters().iter().fold(x, |y, &s| self.apply_letter(s.inverse(), y))
    }

    pub fn check_rank(&self, rank: u8) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::InvalidInput(format!(
                "action has {} generator maps but the group has rank {rank}",
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: ActionFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        let file = ActionFile::from(self);
        serde_json::to_string_pretty(&file).expect("plain data serialises")
    }
}

/// On-disk form: `{"points": n, "weights": ["p/q", …], "a": [perm], "b": [perm], …}`.
#[derive(Debug, Serialize, Deserialize)]
struct ActionFile {
    points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<String>>,
    #[serde(flatten)]
    maps: BTreeMap<String, Vec<usize>>,
}

impl TryFrom<ActionFile> for FiniteAction {
    type Error = Error;

    fn try_from(raw: ActionFile) -> Result<Self> {
        let weights = match raw.weights {
            Some(ws) => ws.iter().map(|w| rational::parse(w)).collect::<Result<Vec<_>>>()?,
            None => vec![Q::new(1.into(), raw.points.max(1).into()); raw.points],
        };
        if weights.len() != raw.points {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} points",
                weights.len(),
                raw.points
            )));
        }
        let mut maps = Vec::new();
        for i in 0..raw.maps.len() {
            let key = Generator::new(i as u8 + 1, false)?.to_char().to_string();
            let m = raw.maps.get(&key).ok_or_else(|| {
                Error::InvalidInput(format!("generator maps must be a, b, … in order; missing {key}"))
            })?;
            maps.push(m.clone());
        }
        FiniteAction::new(weights, maps)
    }
}

impl From<&FiniteAction> for ActionFile {
    fn from(a: &FiniteAction) -> Self {
        let uniform = a.weights.iter().all(|w| w == &a.weights[0]);
        ActionFile {
            points: a.len(),
            weights: (!uniform).then(|| a.weights.iter().map(rational::fmt).collect()),
            maps: a
                .forward
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    (
                        Generator::new(i as u8 + 1, false).unwrap().to_char().to_string(),
                        m.clone(),
                    )
                })
                .collect(),
        }
    }
}

/// A function on the points of a finite action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observable {
    pub values: Vec<Q>,
}

impl Observable {
    pub fn new(values: Vec<Q>) -> Self {
        Observable { values }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        Observable { values: vec![c; n] }
    }

    pub fn indicator(n: usize, point: usize) -> Self {
        let mut values = vec![Q::zero(); n];
        values[point] = Q::one();
        Observable { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn abs(&self) -> Observable {
        Observable {
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Observable {
        Observable {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn shift(&self, c: &Q) -> Observable {
        Observable {
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// `∫ f dμ`.
    pub fn mean(&self, act: &FiniteAction) -> Q {
        self.values.iter().zip(act.weights()).map(|(v, w)| v * w).sum()
    }

    /// `Σ μ(x)|f(x)|^p` for integer `p ≥ 1`.
    pub fn norm_pow(&self, act: &FiniteAction, p: u32) -> Q {
        self.values
            .iter()
            .zip(act.weights())
            .map(|(v, w)| num_traits::pow(v.abs(), p as usize) * w)
            .sum()
    }

    pub fn sup_distance(&self, other: &Observable) -> Q {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn l1_distance(&self, other: &Observable, act: &FiniteAction) -> Q {
        self.values
            .iter()
            .zip(&other.values)
            .zip(act.weights())
            .map(|((a, b), w)| (a - b).abs() * w)
            .sum()
    }
}
