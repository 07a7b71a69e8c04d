//! Reduced words in the free group `F_r`, spheres, and the tree horofunction.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::boundary::BoundaryPoint;
use crate::error::{check_cap, Error, Result};
use crate::DEFAULT_CAP;

/// One of the free generators `a_i` or its inverse, stored as `+i` / `-i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator(i8);

impl Generator {
    pub fn new(index: u8, inverse: bool) -> Result<Self> {
        if index == 0 || index > 26 {
            return Err(Error::InvalidInput(format!("generator index {index} out of range")));
        }
        let v = index as i8;
        Ok(Generator(if inverse { -v } else { v }))
    }

    pub fn index(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Generator(-self.0)
    }

    /// Position in the fixed ordering `a_1 < a_1⁻¹ < a_2 < a_2⁻¹ < …`.
    pub fn rank_key(self) -> u8 {
        2 * (self.index() - 1) + self.is_inverse() as u8
    }

    /// All `2r` generators in canonical order.
    pub fn all(rank: u8) -> Vec<Generator> {
        (1..=rank as i8).flat_map(|i| [Generator(i), Generator(-i)]).collect()
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.index() - 1) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        if !c.is_ascii_alphabetic() {
            return Err(Error::Parse(format!("not a generator letter: {c:?}")));
        }
        let index = c.to_ascii_lowercase() as u8 - b'a' + 1;
        Generator::new(index, c.is_ascii_uppercase())
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank_key().cmp(&other.rank_key())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

pub(crate) fn is_admissible(letters: &[Generator]) -> bool {
    letters.windows(2).all(|w| w[1] != w[0].inverse())
}

/// An element of `F_r` in reduced form. The empty word is the identity.
///
/// Ordered shortlex: by length, then letterwise in the canonical generator
/// order. Measures keyed by words therefore iterate deterministically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    letters: Vec<Generator>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(s: Generator) -> Self {
        ReducedWord { letters: vec![s] }
    }

    /// Free reduction by adjacent-inverse cancellation, ignoring rank.
    pub fn reduce(letters: impl IntoIterator<Item = Generator>) -> Self {
        let mut out: Vec<Generator> = Vec::new();
        for s in letters {
            if out.last() == Some(&s.inverse()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        ReducedWord { letters: out }
    }

    /// Wraps letters that are already reduced.
    pub fn from_reduced(letters: Vec<Generator>) -> Result<Self> {
        if !is_admissible(&letters) {
            return Err(Error::InvalidInput(format!(
                "word {} is not reduced",
                letters.iter().map(|g| g.to_char()).collect::<String>()
            )));
        }
        Ok(ReducedWord { letters })
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Generator> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Generator> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Self {
        ReducedWord {
            letters: self.letters.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    /// Product `self · other` together with the number of cancelled pairs.
    pub fn multiply(&self, other: &ReducedWord) -> (ReducedWord, usize) {
        let mut k = 0;
        let (u, v) = (&self.letters, &other.letters);
        while k < u.len() && k < v.len() && u[u.len() - 1 - k] == v[k].inverse() {
            k += 1;
        }
        let mut letters = Vec::with_capacity(u.len() + v.len() - 2 * k);
        letters.extend_from_slice(&u[..u.len() - k]);
        letters.extend_from_slice(&v[k..]);
        (ReducedWord { letters }, k)
    }

    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        self.multiply(other).0
    }

    /// Length of the longest common prefix with a letter sequence.
    pub fn common_prefix_len(&self, other: &[Generator]) -> usize {
        self.letters.iter().zip(other).take_while(|(a, b)| a == b).count()
    }

    pub fn max_index(&self) -> u8 {
        self.letters.iter().map(|s| s.index()).max().unwrap_or(0)
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for s in &self.letters {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

/// Parses `a`/`A`-style words, reducing on the way. `"e"` is the identity.
impl FromStr for ReducedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(ReducedWord::identity());
        }
        let letters = s.chars().map(Generator::from_char).collect::<Result<Vec<_>>>()?;
        Ok(ReducedWord::reduce(letters))
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReducedWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All reduced words of one length, in canonical enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sphere {
    pub radius: usize,
    pub elements: Vec<ReducedWord>,
}

impl Sphere {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The free group of a fixed rank together with the enumeration cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    rank: u8,
    cap: u64,
}

impl FreeGroup {
    pub fn new(rank: u8) -> Result<Self> {
        Self::with_cap(rank, DEFAULT_CAP)
    }

    pub fn with_cap(rank: u8, cap: u64) -> Result<Self> {
        if !(2..=26).contains(&rank) {
            return Err(Error::InvalidInput(format!("rank must be in 2..=26, got {rank}")));
        }
        Ok(FreeGroup { rank, cap })
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// `2r - 1`, the branching number of the Cayley tree.
    pub fn branching(&self) -> i64 {
        2 * self.rank as i64 - 1
    }

    pub fn generators(&self) -> Vec<Generator> {
        Generator::all(self.rank)
    }

    fn check_letter(&self, s: Generator) -> Result<()> {
        if s.index() > self.rank {
            return Err(Error::InvalidInput(format!(
                "generator {s} has index {} > rank {}",
                s.index(),
                self.rank
            )));
        }
        Ok(())
    }

    pub fn check_word(&self, w: &ReducedWord) -> Result<()> {
        w.letters().iter().try_for_each(|&s| self.check_letter(s))
    }

    pub fn reduce(&self, letters: &[Generator]) -> Result<ReducedWord> {
        letters.iter().try_for_each(|&s| self.check_letter(s))?;
        Ok(ReducedWord::reduce(letters.iter().copied()))
    }

    pub fn word(&self, s: &str) -> Result<ReducedWord> {
        let w: ReducedWord = s.parse()?;
        self.check_word(&w)?;
        Ok(w)
    }

    /// `|S_n|` from the closed form `2r(2r-1)^{n-1}`.
    pub fn sphere_size(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let b = self.branching() as u128;
        let mut size = 2 * self.rank as u128;
        for _ in 1..n {
            size = size.saturating_mul(b);
        }
        size
    }

    /// Depth-first enumeration of the sphere of radius `n`.
    pub fn sphere(&self, n: usize) -> Result<Sphere> {
        check_cap("sphere", self.sphere_size(n), self.cap)?;
        let gens = self.generators();
        let mut elements = Vec::new();
        let mut stack: Vec<Generator> = Vec::with_capacity(n);
        fn walk(gens: &[Generator], n: usize, stack: &mut Vec<Generator>, out: &mut Vec<ReducedWord>) {
            if stack.len() == n {
                out.push(ReducedWord { letters: stack.clone() });
                return;
            }
            for &s in gens {
                if stack.last() == Some(&s.inverse()) {
                    continue;
                }
                stack.push(s);
                walk(gens, n, stack, out);
                stack.pop();
            }
        }
        walk(&gens, n, &mut stack, &mut elements);
        Ok(Sphere { radius: n, elements })
    }

    /// Every reduced word of length at most `n`, radius by radius.
    pub fn ball(&self, n: usize) -> Result<Vec<ReducedWord>> {
        let total: u128 = (0..=n).map(|i| self.sphere_size(i)).sum();
        check_cap("ball", total, self.cap)?;
        let mut out = Vec::new();
        for i in 0..=n {
            out.extend(self.sphere(i)?.elements);
        }
        Ok(out)
    }
}

/// Tree horofunction `h_ξ(g) = |g| - 2·|common prefix of g and ξ|`.
///
/// The value is cross-checked against the Busemann limit
/// `d(ξ_n, g) - d(ξ_n, e)` evaluated along prefixes up to depth `|g| + 2`.
pub fn horofunction(xi: &BoundaryPoint, g: &ReducedWord) -> i64 {
    let prefix = xi.prefix(g.len());
    let value = g.len() as i64 - 2 * g.common_prefix_len(&prefix) as i64;
    let limit = horofunction_limit(xi, g, g.len() + 2);
    assert_eq!(
        value, limit,
        "horofunction prefix formula disagrees with the limit form at g = {g}"
    );
    value
}

/// `d(ξ_n, g) - n` at `n = depth`, where `ξ_n` is the length-`n` prefix word.
/// The sequence is constant once `n ≥ |g|`.
pub fn horofunction_limit(xi: &BoundaryPoint, g: &ReducedWord, depth: usize) -> i64 {
    let xi_n = ReducedWord {
        letters: xi.prefix(depth),
    };
    let dist = xi_n.inverse().mul(g).len() as i64;
    dist - depth as i64
}
