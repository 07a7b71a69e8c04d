//! The boundary `∂F` of the free group: admissible one-sided sequences with
//! the cylinder measure `ν`, the boundary action with its cancellation count,
//! the Radon–Nikodym cocycle and its integer logarithm `R_λ`, and ratio-set
//! witnesses. The double boundary lives in [`double`].

pub mod double;

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::free_group::{is_admissible, FreeGroup, Generator, ReducedWord};
use crate::rational::{self, Q};

pub use double::{alpha_prime, dbl_measure, markov_cylinder_measure, phi_embed, ProductCylinder, TwoSidedCylinder};

/// The set of boundary points with a fixed admissible prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    prefix: Vec<Generator>,
}

impl Cylinder {
    pub fn new(prefix: Vec<Generator>) -> Result<Self> {
        if !is_admissible(&prefix) {
            return Err(Error::InvalidInput(format!(
                "cylinder prefix {} is not admissible",
                letters_to_string(&prefix)
            )));
        }
        Ok(Cylinder { prefix })
    }

    /// The whole boundary.
    pub fn root() -> Self {
        Cylinder::default()
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &[Generator] {
        &self.prefix
    }

    pub fn as_word(&self) -> ReducedWord {
        ReducedWord::from_reduced(self.prefix.clone()).expect("admissible prefix is reduced")
    }

    pub fn truncate(&self, depth: usize) -> Cylinder {
        Cylinder {
            prefix: self.prefix[..depth.min(self.prefix.len())].to_vec(),
        }
    }

    /// True if every point of `self` lies in `other`.
    pub fn is_within(&self, other: &Cylinder) -> bool {
        self.prefix.starts_with(&other.prefix)
    }

    /// The `2r - 1` admissible one-letter refinements (`2r` at the root).
    pub fn children(&self, group: &FreeGroup) -> Vec<Cylinder> {
        group
            .generators()
            .into_iter()
            .filter(|s| self.prefix.last() != Some(&s.inverse()))
            .map(|s| {
                let mut prefix = self.prefix.clone();
                prefix.push(s);
                Cylinder { prefix }
            })
            .collect()
    }

    /// All refinements of `self` at a given depth, in canonical order.
    pub fn refinements(&self, group: &FreeGroup, depth: usize) -> Result<Vec<Cylinder>> {
        if depth < self.depth() {
            return Err(Error::Precondition(format!(
                "cannot refine depth {} cylinder to depth {depth}",
                self.depth()
            )));
        }
        let branching = group.branching() as u128;
        let extra = (depth - self.depth()) as u32;
        let count = if self.depth() == 0 && depth > 0 {
            group.sphere_size(depth)
        } else {
            branching.saturating_pow(extra)
        };
        check_cap("cylinder refinement", count, group.cap())?;
        let mut level = vec![self.clone()];
        for _ in self.depth()..depth {
            level = level.iter().flat_map(|c| c.children(group)).collect();
        }
        Ok(level)
    }

    /// The depth-`n` cylinder partition of `∂F`.
    pub fn all(group: &FreeGroup, depth: usize) -> Result<Vec<Cylinder>> {
        Cylinder::root().refinements(group, depth)
    }

    /// A boundary point in `self`: the prefix followed by its last letter
    /// repeated (`a_1` repeated at the root).
    pub fn representative(&self) -> BoundaryPoint {
        let last = self
            .prefix
            .last()
            .copied()
            .unwrap_or_else(|| Generator::new(1, false).unwrap());
        BoundaryPoint::new(self.prefix.clone(), vec![last]).expect("s s is admissible")
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "e")
        } else {
            write!(f, "{}", letters_to_string(&self.prefix))
        }
    }
}

impl FromStr for Cylinder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Cylinder::new(parse_letters(s)?)
    }
}

pub(crate) fn letters_to_string(letters: &[Generator]) -> String {
    letters.iter().map(|s| s.to_char()).collect()
}

pub(crate) fn parse_letters(s: &str) -> Result<Vec<Generator>> {
    let s = s.trim();
    if s == "e" {
        return Ok(Vec::new());
    }
    s.chars().map(Generator::from_char).collect()
}

/// An eventually periodic point of `∂F`: `preperiod` followed by `period`
/// repeated forever. Kept in a canonical form (primitive period, shortest
/// preperiod) so that equality is equality of the infinite sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryPoint {
    preperiod: Vec<Generator>,
    period: Vec<Generator>,
}

impl BoundaryPoint {
    pub fn new(preperiod: Vec<Generator>, period: Vec<Generator>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidInput("boundary point needs a nonempty period".into()));
        }
        let wrap = [*period.last().unwrap(), period[0]];
        let junction_ok = preperiod.last().is_none_or(|&s| s != period[0].inverse());
        if !is_admissible(&preperiod) || !is_admissible(&period) || !is_admissible(&wrap) || !junction_ok {
            return Err(Error::InvalidInput(format!(
                "sequence {}({})^∞ is not admissible",
                letters_to_string(&preperiod),
                letters_to_string(&period)
            )));
        }
        let mut p = BoundaryPoint { preperiod, period };
        p.normalize();
        Ok(p)
    }

    fn normalize(&mut self) {
        let n = self.period.len();
        if let Some(d) = (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.period[i] == self.period[i - d]))
        {
            self.period.truncate(d);
        }
        while let (Some(&a), Some(&b)) = (self.preperiod.last(), self.period.last()) {
            if a != b {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[Generator] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Generator] {
        &self.period
    }

    /// `ξ_i`, 1-based.
    pub fn letter(&self, i: usize) -> Generator {
        assert!(i >= 1, "boundary sequences are 1-based");
        let idx = i - 1;
        if idx < self.preperiod.len() {
            self.preperiod[idx]
        } else {
            self.period[(idx - self.preperiod.len()) % self.period.len()]
        }
    }

    /// `(ξ_1, …, ξ_n)`.
    pub fn prefix(&self, n: usize) -> Vec<Generator> {
        (1..=n).map(|i| self.letter(i)).collect()
    }

    pub fn cylinder(&self, depth: usize) -> Cylinder {
        Cylinder {
            prefix: self.prefix(depth),
        }
    }

    /// `(ξ_{k+1}, ξ_{k+2}, …)`.
    fn drop_front(&self, k: usize) -> BoundaryPoint {
        if k <= self.preperiod.len() {
            BoundaryPoint {
                preperiod: self.preperiod[k..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let mut period = self.period.clone();
            let shift = (k - self.preperiod.len()) % period.len();
            period.rotate_left(shift);
            BoundaryPoint {
                preperiod: Vec::new(),
                period,
            }
        }
    }

    pub fn max_index(&self) -> u8 {
        self.preperiod
            .iter()
            .chain(&self.period)
            .map(|s| s.index())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({})",
            letters_to_string(&self.preperiod),
            letters_to_string(&self.period)
        )
    }
}

/// Parses `pre(period)`, e.g. `"B(a)"` or `"(ab)"`.
impl FromStr for BoundaryPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (pre, rest) = s
            .split_once('(')
            .ok_or_else(|| Error::Parse(format!("boundary point {s:?} needs a (period)")))?;
        let period = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("boundary point {s:?} missing ')'")))?;
        let pre = if pre.is_empty() {
            Vec::new()
        } else {
            parse_letters(pre)?
        };
        BoundaryPoint::new(pre, parse_letters(period)?)
    }
}

/// Largest `k ≤ |g|` with `ξ_i⁻¹ = t_{n+1-i}` for all `i ≤ k`, where
/// `g = t_1⋯t_n`. `letter(i)` must be available for `i ≤ min(k + 1, n)`.
fn cancellation(g: &ReducedWord, letter: impl Fn(usize) -> Option<Generator>) -> Option<usize> {
    let t = g.letters();
    let n = t.len();
    let mut k = 0;
    while k < n {
        let xi = letter(k + 1)?;
        if xi.inverse() != t[n - 1 - k] {
            break;
        }
        k += 1;
    }
    Some(k)
}

/// `ν(C(t_1,…,t_n)) = (2r-1)^{-n+1}(2r)^{-1}`; the root has mass one.
pub fn cylinder_measure(group: &FreeGroup, c: &Cylinder) -> Q {
    let n = c.depth() as i64;
    if n == 0 {
        return Q::one();
    }
    rational::pow(group.branching(), 1 - n) / rational::int(2 * group.rank() as i64)
}

/// `gξ` and the cancellation count `k`.
pub fn boundary_action(g: &ReducedWord, xi: &BoundaryPoint) -> (BoundaryPoint, usize) {
    let k = cancellation(g, |i| Some(xi.letter(i))).expect("points are infinite");
    let n = g.len();
    let tail = xi.drop_front(k);
    let mut preperiod = g.letters()[..n - k].to_vec();
    preperiod.extend_from_slice(&tail.preperiod);
    let mut p = BoundaryPoint {
        preperiod,
        period: tail.period,
    };
    p.normalize();
    (p, k)
}

/// `dν∘g/dν(ξ) = (2r-1)^{2k-n}`.
pub fn rn_derivative(group: &FreeGroup, g: &ReducedWord, xi: &BoundaryPoint) -> Q {
    let (_, k) = boundary_action(g, xi);
    rational::pow(group.branching(), 2 * k as i64 - g.len() as i64)
}

/// `R_λ(g, ξ) = log_λ(dν∘g/dν(ξ))` with `λ = (2r-1)⁻¹`, which is `n - 2k`.
pub fn r_lambda(group: &FreeGroup, g: &ReducedWord, xi: &BoundaryPoint) -> i64 {
    let rn = rn_derivative(group, g, xi);
    let log_base = rational::exact_log(group.branching(), &rn).expect("RN derivative is a power of 2r-1");
    let value = -log_base;
    let (_, k) = boundary_action(g, xi);
    debug_assert_eq!(value, g.len() as i64 - 2 * k as i64);
    value
}

/// Image of a cylinder under `g` together with the cancellation count.
///
/// Requires the cylinder to be deep enough that `k` is determined; the image
/// of a depth-`d` cylinder has depth `d + |g| - 2k`.
pub fn act_on_cylinder(g: &ReducedWord, c: &Cylinder) -> Result<(Cylinder, usize)> {
    let k = cancellation(g, |i| c.prefix.get(i - 1).copied()).ok_or_else(|| {
        Error::Precondition(format!(
            "cylinder {c} (depth {}) too shallow to resolve the action of {g}",
            c.depth()
        ))
    })?;
    if k == c.depth() && !g.is_identity() {
        // g cancels the whole prefix: the image is the complement of a cylinder
        return Err(Error::Precondition(format!(
            "{g} maps cylinder {c} onto the complement of a cylinder"
        )));
    }
    let n = g.len();
    let mut prefix = g.letters()[..n - k].to_vec();
    prefix.extend_from_slice(&c.prefix[k..]);
    Ok((Cylinder { prefix }, k))
}

/// Checks `ν(g·c)/ν(c) = dν∘g/dν(ξ)` for representatives `ξ` of every
/// one-letter refinement of `c`, and returns the common ratio.
pub fn rn_derivative_vs_cylinder_ratio(group: &FreeGroup, g: &ReducedWord, c: &Cylinder) -> Result<Q> {
    let (image, _) = act_on_cylinder(g, c)?;
    let ratio = cylinder_measure(group, &image) / cylinder_measure(group, c);
    for child in c.children(group) {
        let xi = child.representative();
        let rn = rn_derivative(group, g, &xi);
        if rn != ratio {
            return Err(Error::Precondition(format!(
                "RN derivative {} at {xi} differs from cylinder ratio {}",
                rational::fmt(&rn),
                rational::fmt(&ratio)
            )));
        }
    }
    Ok(ratio)
}

/// Search limits for [`ratio_set_witness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBounds {
    pub max_word_len: usize,
    pub max_depth: usize,
}

/// `A' ⊆ A`, `g ≠ e` with `g·A' ⊆ A` and the RN derivative equal to the
/// target everywhere on `A'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub subset: String,
    pub element: ReducedWord,
    pub image: String,
    #[serde(with = "rational::serde_q")]
    pub ratio: Q,
}

/// Bounded search for an exact ratio-set witness.
///
/// Words are tried by increasing length in canonical order, and for each word
/// the refinements of `A` by increasing depth. `Ok(None)` only means the
/// bounded search came up empty.
pub fn ratio_set_witness(
    group: &FreeGroup,
    a: &Cylinder,
    target: &Q,
    bounds: WitnessBounds,
) -> Result<Option<Witness>> {
    let exponent = rational::exact_log(group.branching(), target).ok_or_else(|| {
        Error::InvalidInput(format!(
            "target {} is not a power of {}",
            rational::fmt(target),
            group.branching()
        ))
    })?;
    for len in 1..=bounds.max_word_len {
        // |2k - n| ≤ n, so shorter words cannot reach this exponent
        if (exponent.unsigned_abs() as usize) > len || (exponent + len as i64) % 2 != 0 {
            continue;
        }
        for g in group.sphere(len)?.elements {
            let lo = a.depth().max(len);
            for depth in lo..=bounds.max_depth {
                for sub in a.refinements(group, depth)? {
                    let Ok((image, k)) = act_on_cylinder(&g, &sub) else {
                        continue;
                    };
                    if 2 * k as i64 - len as i64 != exponent || !image.is_within(a) {
                        continue;
                    }
                    return Ok(Some(Witness {
                        subset: sub.to_string(),
                        element: g,
                        image: image.to_string(),
                        ratio: target.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn f2() -> FreeGroup {
        FreeGroup::new(2).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> BoundaryPoint {
        s.parse().unwrap()
    }

    fn cyl(s: &str) -> Cylinder {
        s.parse().unwrap()
    }

    #[test]
    fn point_validation_and_normal_form() {
        assert!(BoundaryPoint::new(vec![], vec![]).is_err());
        assert!("(aA)".parse::<BoundaryPoint>().is_err());
        assert!("(ab)".parse::<BoundaryPoint>().is_ok());
        // wraparound a → A is not admissible
        assert!("(bA ba)".replace(' ', "").parse::<BoundaryPoint>().is_ok());
        assert!("(ab A)".replace(' ', "").parse::<BoundaryPoint>().is_err());
        assert!("A(a)".parse::<BoundaryPoint>().is_err());
        assert_eq!(pt("ab(ab)"), pt("(ab)"));
        assert_eq!(pt("(abab)"), pt("(ab)"));
        assert_eq!(pt("b(ab)"), pt("(ba)"));
        assert_eq!(pt("(ab)").prefix(5), parse_letters("ababa").unwrap());
    }

    #[test]
    fn cylinder_measure_examples() {
        let g = f2();
        assert_eq!(cylinder_measure(&g, &cyl("a")), q(1, 4));
        assert_eq!(cylinder_measure(&g, &cyl("ab")), q(1, 12));
        for n in 1..=8 {
            let total: Q = Cylinder::all(&g, n)
                .unwrap()
                .iter()
                .map(|c| cylinder_measure(&g, c))
                .sum();
            assert_eq!(total, int(1));
        }
    }

    #[test]
    fn boundary_action_examples() {
        let xi = pt("(ab)");
        assert_eq!(boundary_action(&ReducedWord::identity(), &xi), (xi.clone(), 0));
        assert_eq!(boundary_action(&w("ab"), &pt("B(a)")), (pt("(a)"), 1));
        assert_eq!(boundary_action(&w("A"), &pt("(ab)")), (pt("(ba)"), 1));
    }

    #[test]
    fn boundary_action_matches_word_multiplication() {
        let g = f2();
        let points = [pt("B(a)"), pt("(ab)"), pt("aB(a)"), pt("AAb(aB)")];
        for h in g.ball(3).unwrap() {
            for xi in &points {
                let (image, k) = boundary_action(&h, xi);
                let prefix = ReducedWord::from_reduced(xi.prefix(6)).unwrap();
                let (prod, cancelled) = h.multiply(&prefix);
                assert_eq!(k, cancelled);
                assert_eq!(&image.prefix(prod.len())[..], prod.letters());
            }
        }
    }

    #[test]
    fn rn_examples() {
        let g = f2();
        assert_eq!(rn_derivative(&g, &w("a"), &pt("(b)")), q(1, 3));
        assert_eq!(rn_derivative(&g, &w("ab"), &pt("B(a)")), int(1));
        assert_eq!(rn_derivative(&g, &w("A"), &pt("(ab)")), int(3));
    }

    #[test]
    fn r_lambda_examples() {
        let g = f2();
        assert_eq!(r_lambda(&g, &ReducedWord::identity(), &pt("(ab)")), 0);
        assert_eq!(r_lambda(&g, &w("a"), &pt("(b)")), 1);
        assert_eq!(r_lambda(&g, &w("A"), &pt("(ab)")), -1);
    }

    #[test]
    fn cylinder_ratio_examples() {
        let g = f2();
        for c in Cylinder::all(&g, 2).unwrap() {
            assert_eq!(
                rn_derivative_vs_cylinder_ratio(&g, &ReducedWord::identity(), &c).unwrap(),
                int(1)
            );
        }
        assert_eq!(
            rn_derivative_vs_cylinder_ratio(&g, &w("a"), &cyl("bab")).unwrap(),
            q(1, 3)
        );
        assert_eq!(
            rn_derivative_vs_cylinder_ratio(&g, &w("A"), &cyl("aba")).unwrap(),
            int(3)
        );
        assert_eq!(
            rn_derivative_vs_cylinder_ratio(&g, &w("ab"), &cyl("ab")).unwrap(),
            q(1, 9)
        );
        assert!(matches!(
            rn_derivative_vs_cylinder_ratio(&g, &w("ab"), &cyl("BA")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn act_on_shallow_cylinder_is_refused() {
        assert!(act_on_cylinder(&w("ab"), &cyl("B")).is_err());
        // full cancellation leaves the complement of C(a), not a cylinder
        assert!(act_on_cylinder(&w("ab"), &cyl("BA")).is_err());
        assert_eq!(act_on_cylinder(&w("ab"), &cyl("BAb")).unwrap(), (cyl("b"), 2));
        assert_eq!(act_on_cylinder(&w("ab"), &cyl("a")).unwrap(), (cyl("aba"), 0));
    }

    #[test]
    fn witness_examples() {
        let g = f2();
        let a = cyl("a");
        let one = ratio_set_witness(
            &g,
            &a,
            &int(1),
            WitnessBounds {
                max_word_len: 4,
                max_depth: 4,
            },
        )
        .unwrap()
        .expect("witness for 1");
        assert!([2, 4].contains(&one.element.len()));
        let three = ratio_set_witness(
            &g,
            &a,
            &int(3),
            WitnessBounds {
                max_word_len: 3,
                max_depth: 3,
            },
        )
        .unwrap()
        .expect("witness for 3");
        assert!(three.element.len() <= 3);
        assert!(matches!(
            ratio_set_witness(
                &g,
                &a,
                &int(2),
                WitnessBounds {
                    max_word_len: 3,
                    max_depth: 3
                }
            ),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn witness_is_verified_independently() {
        let g = f2();
        let a = cyl("a");
        for m in -2..=2 {
            let target = rational::pow(3, m);
            let wit = ratio_set_witness(
                &g,
                &a,
                &target,
                WitnessBounds {
                    max_word_len: 6,
                    max_depth: 6,
                },
            )
            .unwrap()
            .unwrap();
            let sub = cyl(&wit.subset);
            assert!(sub.is_within(&a) && !wit.element.is_identity());
            for child in sub.children(&g) {
                let xi = child.representative();
                assert_eq!(rn_derivative(&g, &wit.element, &xi), target);
                let (image, _) = boundary_action(&wit.element, &xi);
                assert_eq!(image.letter(1), a.prefix()[0]);
            }
        }
    }
}
