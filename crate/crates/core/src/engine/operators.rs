use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::action::{FiniteAction, Observable};
use crate::error::{Error, Result};
use crate::free_group::{Generator, ReducedWord};
use crate::measures::GroupMeasure;
use crate::rational::Q;

/// `(π_X(ζ)f)(x) = Σ_γ ζ(γ) f(γ⁻¹x)`.
pub fn apply_measure_operator(zeta: &GroupMeasure, f: &Observable, act: &FiniteAction) -> Observable {
    let n = act.len();
    let mut out = vec![Q::zero(); n];
    for (g, p) in zeta.iter() {
        for (x, slot) in out.iter_mut().enumerate() {
            let y = act.apply_inverse(g, x);
            if !f.values[y].is_zero() {
                *slot += p * &f.values[y];
            }
        }
    }
    Observable::new(out)
}

/// Which invariant σ-algebra a conditional expectation projects onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subgroup {
    /// The whole free group.
    #[serde(rename = "F")]
    Full,
    /// The index-two subgroup of even-length words.
    #[serde(rename = "F2")]
    Even,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut y = x;
        while self.0[y] != root {
            let next = self.0[y];
            self.0[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Orbit label of every point: the smallest point of its orbit.
pub fn orbit_labels(act: &FiniteAction, subgroup: Subgroup) -> Vec<usize> {
    let n = act.len();
    let mut sets = DisjointSets((0..n).collect());
    let gens = Generator::all(act.rank());
    match subgroup {
        Subgroup::Full => {
            for &s in gens.iter().filter(|s| !s.is_inverse()) {
                for x in 0..n {
                    sets.union(x, act.apply_letter(s, x));
                }
            }
        }
        Subgroup::Even => {
            for &s in &gens {
                for &t in &gens {
                    for x in 0..n {
                        sets.union(x, act.apply_letter(s, act.apply_letter(t, x)));
                    }
                }
            }
        }
    }
    (0..n).map(|x| sets.find(x)).collect()
}

/// `E[f | invariant sets of the subgroup]`: the μ-weighted mean over each orbit.
pub fn conditional_expectation(f: &Observable, act: &FiniteAction, subgroup: Subgroup) -> Observable {
    let labels = orbit_labels(act, subgroup);
    let n = act.len();
    let mut mass = vec![Q::zero(); n];
    let mut integral = vec![Q::zero(); n];
    for x in 0..n {
        mass[labels[x]] += &act.weights()[x];
        integral[labels[x]] += &act.weights()[x] * &f.values[x];
    }
    Observable::new((0..n).map(|x| &integral[labels[x]] / &mass[labels[x]]).collect())
}

fn sum_over_generators(f: &[Q], act: &FiniteAction, gens: &[Generator]) -> Vec<Q> {
    (0..f.len())
        .map(|x| gens.iter().map(|&s| &f[act.apply_letter(s.inverse(), x)]).sum())
        .collect()
}

/// `π_X(σ_n)f` for `n = 0..=n_max` without enumerating spheres, from the
/// sphere-sum recursion `P₁Pₙ = Pₙ₊₁ + (2r−1)Pₙ₋₁` (with `2r` in place of
/// `2r−1` when `n = 1`).
pub fn sphere_sum_sequence(act: &FiniteAction, f: &Observable, n_max: usize) -> Result<Vec<Observable>> {
    if f.len() != act.len() {
        return Err(Error::InvalidInput(format!(
            "observable has {} values for {} points",
            f.len(),
            act.len()
        )));
    }
    let r = act.rank() as i64;
    let gens = Generator::all(act.rank());
    let mut sums: Vec<Vec<Q>> = vec![f.values.clone()];
    if n_max >= 1 {
        sums.push(sum_over_generators(&f.values, act, &gens));
    }
    for n in 1..n_max {
        let p1pn = sum_over_generators(&sums[n], act, &gens);
        let c = Q::from_integer(if n == 1 { 2 * r } else { 2 * r - 1 }.into());
        let next = p1pn.iter().zip(&sums[n - 1]).map(|(a, b)| a - &c * b).collect();
        sums.push(next);
    }
    let mut size = Q::from_integer(1.into());
    let mut out = Vec::with_capacity(sums.len());
    for (n, s) in sums.into_iter().enumerate() {
        if n == 1 {
            size = Q::from_integer((2 * r).into());
        } else if n > 1 {
            size *= Q::from_integer((2 * r - 1).into());
        }
        out.push(Observable::new(s.iter().map(|v| v / &size).collect()));
    }
    Ok(out)
}

/// `γ⁻¹x` for every `x`, as a lookup table.
pub(crate) fn inverse_table(act: &FiniteAction, g: &ReducedWord) -> Vec<usize> {
    (0..act.len()).map(|x| act.apply_inverse(g, x)).collect()
}
