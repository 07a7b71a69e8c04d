//! The shift on `Γ^ℤ` with Bernoulli measure `κ^ℤ`. The cocycle of the orbit
//! relation is the running product of the path, and `ω_n(·, x)` is uniform
//! on `T x, …, T^n x`.

use std::fmt;

use num_traits::One;

use crate::error::{check_cap, Error, Result};
use crate::free_group::{FreeGroup, ReducedWord};
use crate::measures::GroupMeasure;
use crate::rational::Q;

use super::{Cell, LeafNeighborhood, LeafSystem, Neighbor};

/// Coordinates `x(start), …, x(start + len - 1)` of a path `x ∈ Γ^ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWindow {
    start: i64,
    steps: Vec<ReducedWord>,
}

impl PathWindow {
    pub fn new(start: i64, steps: Vec<ReducedWord>) -> Self {
        PathWindow { start, steps }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.steps.len() as i64 - 1
    }

    pub fn steps(&self) -> &[ReducedWord] {
        &self.steps
    }

    pub fn get(&self, i: i64) -> Option<&ReducedWord> {
        if i < self.start {
            return None;
        }
        self.steps.get((i - self.start) as usize)
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo > hi || (self.start <= lo && hi <= self.end())
    }

    /// `T^n x` with `(Tx)(j) = x(j + 1)`.
    pub fn shift(&self, n: i64) -> PathWindow {
        PathWindow {
            start: self.start - n,
            steps: self.steps.clone(),
        }
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> PathWindow {
        let a = lo.max(self.start);
        let b = hi.min(self.end());
        if a > b {
            return PathWindow {
                start: lo,
                steps: Vec::new(),
            };
        }
        PathWindow {
            start: a,
            steps: self.steps[(a - self.start) as usize..=(b - self.start) as usize].to_vec(),
        }
    }
}

impl fmt::Display for PathWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.steps.iter().map(|w| w.to_string()).collect();
        write!(f, "{}:[{}]", self.start, body.join(","))
    }
}

/// `α(x, T^n x)`: `x(1)⋯x(n)` for `n > 0`, `e` for `n = 0`, and
/// `x(0)⁻¹x(-1)⁻¹⋯x(n+1)⁻¹` for `n < 0`.
pub fn rw_cocycle(x: &PathWindow, n: i64) -> Result<ReducedWord> {
    let (lo, hi) = if n >= 0 { (1, n) } else { (n + 1, 0) };
    if !x.covers(lo, hi) {
        return Err(Error::Precondition(format!(
            "path window {x} does not cover [{lo}, {hi}] needed for the cocycle at {n}"
        )));
    }
    let mut acc = ReducedWord::identity();
    if n >= 0 {
        for i in 1..=n {
            acc = acc.mul(x.get(i).unwrap());
        }
    } else {
        for i in ((n + 1)..=0).rev() {
            acc = acc.mul(&x.get(i).unwrap().inverse());
        }
    }
    Ok(acc)
}

/// Neighbours `T^i x`, `1 ≤ i ≤ n`, each of weight `1/n`.
pub fn rw_neighborhood(n: usize, x: &PathWindow) -> Result<LeafNeighborhood> {
    if n == 0 {
        return Err(Error::InvalidInput("random-walk weights start at n = 1".into()));
    }
    if !x.covers(1, n as i64) {
        return Err(Error::Precondition(format!("path window {x} does not cover [1, {n}]")));
    }
    let weight = Q::new(1.into(), n.into());
    let neighbors = (1..=n as i64)
        .map(|i| {
            Ok(Neighbor {
                cell: Cell::Path(x.shift(i)),
                cocycle: rw_cocycle(x, i)?,
                weight: weight.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    LeafNeighborhood::new(Cell::Path(x.clone()), neighbors)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomWalkRelation {
    group: FreeGroup,
    kappa: GroupMeasure,
}

impl RandomWalkRelation {
    pub fn new(group: FreeGroup, kappa: GroupMeasure) -> Result<Self> {
        for w in kappa.support() {
            group.check_word(w)?;
        }
        Ok(RandomWalkRelation { group, kappa })
    }

    pub fn kappa(&self) -> &GroupMeasure {
        &self.kappa
    }
}

impl LeafSystem for RandomWalkRelation {
    fn name(&self) -> &'static str {
        "RANDOM_WALK"
    }

    fn group(&self) -> &FreeGroup {
        &self.group
    }

    fn first_index(&self) -> usize {
        1
    }

    fn resolution(&self, i: usize) -> usize {
        i
    }

    fn base_resolution(&self, i: usize, forward_depth: usize) -> usize {
        self.resolution(i).max(forward_depth + i)
    }

    /// Windows `x(1..=res)` over `supp(κ)^res`, weighted by `Π κ(x(j))`.
    fn cells(&self, resolution: usize) -> Result<Vec<(Cell, Q)>> {
        let needed = (self.kappa.len() as u128).saturating_pow(resolution as u32);
        check_cap("random-walk windows", needed, self.group.cap())?;
        let mut level: Vec<(Vec<ReducedWord>, Q)> = vec![(Vec::new(), Q::one())];
        for _ in 0..resolution {
            let mut next = Vec::with_capacity(level.len() * self.kappa.len());
            for (steps, m) in &level {
                for (w, p) in self.kappa.iter() {
                    let mut s = steps.clone();
                    s.push(w.clone());
                    next.push((s, m * p));
                }
            }
            level = next;
        }
        Ok(level
            .into_iter()
            .map(|(steps, m)| (Cell::Path(PathWindow::new(1, steps)), m))
            .collect())
    }

    fn neighborhood(&self, i: usize, base: &Cell) -> Result<LeafNeighborhood> {
        match base {
            Cell::Path(x) => rw_neighborhood(i, x),
            other => Err(Error::InvalidInput(format!("RANDOM_WALK cannot evaluate cell {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    fn path(start: i64, steps: &[&str]) -> PathWindow {
        PathWindow::new(start, steps.iter().map(|s| w(s)).collect())
    }

    #[test]
    fn cocycle_examples() {
        let x = path(0, &["a", "a", "b"]);
        assert_eq!(rw_cocycle(&x, 0).unwrap(), ReducedWord::identity());
        assert_eq!(rw_cocycle(&x, 2).unwrap(), w("ab"));
        assert_eq!(rw_cocycle(&x, -1).unwrap(), w("A"));
        assert!(rw_cocycle(&x, 3).is_err());
        assert!(rw_cocycle(&x, -2).is_err());
    }

    #[test]
    fn cocycle_composes_along_the_orbit() {
        // α(x, T^{m+n}x) = α(x, T^m x) · α(T^m x, T^{m+n} x)
        let x = path(-4, &["a", "bA", "B", "e", "ab", "A", "b", "b", "a"]);
        for m in -3..=3i64 {
            for n in -3..=3i64 {
                let lhs = rw_cocycle(&x, m + n);
                let rhs = rw_cocycle(&x, m).and_then(|u| Ok(u.mul(&rw_cocycle(&x.shift(m), n)?)));
                if let (Ok(l), Ok(r)) = (lhs, rhs) {
                    assert_eq!(l, r, "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn neighbourhood_examples() {
        let x = path(1, &["a", "B", "a"]);
        let one = rw_neighborhood(1, &x).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.neighbors[0].weight, q(1, 1));
        let three = rw_neighborhood(3, &x).unwrap();
        assert_eq!(three.len(), 3);
        assert!(three.neighbors.iter().all(|n| n.weight == q(1, 3)));
        assert!(rw_neighborhood(4, &x).is_err());
    }

    #[test]
    fn cocycle_lengths_bounded_by_step_count() {
        let supp = ["a", "A", "b", "B", "ab"];
        for a in supp {
            for b in supp {
                for c in supp {
                    let x = path(1, &[a, b, c]);
                    let nb = rw_neighborhood(3, &x).unwrap();
                    for (i, n) in nb.neighbors.iter().enumerate() {
                        let bound: usize = x.steps()[..=i].iter().map(|s| s.len()).sum();
                        assert!(n.cocycle.len() <= bound);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_rank_kappa() {
        let g = FreeGroup::new(2).unwrap();
        assert!(RandomWalkRelation::new(g, GroupMeasure::dirac(w("c"))).is_err());
    }
}
