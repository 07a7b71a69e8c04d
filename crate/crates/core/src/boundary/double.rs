//! The double boundary `∂²F = ∂F × ∂F`, its invariant measure `ν̄`, the
//! embedding `Φ` of the fundamental domain `D = {b_1 ≠ c_1}` into two-sided
//! admissible sequences, the Markov measure `ν'` there, and the shift cocycle.

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use super::{act_on_cylinder, cylinder_measure, letters_to_string, parse_letters, Cylinder};
use crate::error::{Error, Result};
use crate::free_group::{is_admissible, FreeGroup, Generator, ReducedWord};
use crate::rational::{self, Q};

/// A rectangle `C(b) × C(c)` in `∂²F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductCylinder {
    pub b: Cylinder,
    pub c: Cylinder,
}

impl ProductCylinder {
    pub fn new(b: Cylinder, c: Cylinder) -> Self {
        ProductCylinder { b, c }
    }

    /// Common-prefix length `d` of all pairs in the rectangle, when one
    /// exists: the prefixes must differ somewhere inside both windows.
    pub fn common_prefix(&self) -> Option<usize> {
        let (b, c) = (self.b.prefix(), self.c.prefix());
        let d = b.iter().zip(c).take_while(|(x, y)| x == y).count();
        (d < b.len().min(c.len())).then_some(d)
    }

    /// True when every pair in the rectangle lies in `D`.
    pub fn in_domain(&self) -> bool {
        self.common_prefix() == Some(0)
    }

    /// Diagonal action `g(b, c) = (gb, gc)` on a rectangle.
    pub fn act(&self, g: &ReducedWord) -> Result<ProductCylinder> {
        Ok(ProductCylinder {
            b: act_on_cylinder(g, &self.b)?.0,
            c: act_on_cylinder(g, &self.c)?.0,
        })
    }
}

impl fmt::Display for ProductCylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}×{}", self.b, self.c)
    }
}

/// `ν̄(C(b) × C(c)) = (2r)(2r-1)^{2d-1} ν(C(b)) ν(C(c))`.
///
/// When one prefix extends the other the rectangle meets the diagonal, where
/// the strata `d = m, m+1, …` each carry mass `(2r-2)(2r-1)^{d-m}`-proportional
/// terms: the series diverges, so such rectangles have infinite `ν̄`-mass and
/// must be refined.
pub fn dbl_measure(group: &FreeGroup, pc: &ProductCylinder) -> Result<Q> {
    let d = pc
        .common_prefix()
        .ok_or_else(|| Error::RefineRequired(pc.to_string()))? as i64;
    let density = rational::int(2 * group.rank() as i64) * rational::pow(group.branching(), 2 * d - 1);
    Ok(density * cylinder_measure(group, &pc.b) * cylinder_measure(group, &pc.c))
}

/// A cylinder in `S^ℤ`: letters fixed on the window `[start, start + len - 1]`.
///
/// An empty window is the whole space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoSidedCylinder {
    start: i64,
    letters: Vec<Generator>,
}

impl TwoSidedCylinder {
    pub fn new(start: i64, letters: Vec<Generator>) -> Result<Self> {
        if !is_admissible(&letters) {
            return Err(Error::InvalidInput(format!(
                "window {start}:{} is not admissible",
                letters_to_string(&letters)
            )));
        }
        Ok(TwoSidedCylinder { start, letters })
    }

    pub fn whole() -> Self {
        TwoSidedCylinder {
            start: 0,
            letters: Vec::new(),
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last covered index; `start - 1` for an empty window.
    pub fn end(&self) -> i64 {
        self.start + self.letters.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn get(&self, i: i64) -> Option<Generator> {
        if i < self.start {
            return None;
        }
        self.letters.get((i - self.start) as usize).copied()
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo > hi || (self.start <= lo && hi <= self.end())
    }

    /// `T^n` with `(Tξ)_i = ξ_{i+1}`: the window moves `n` places left.
    pub fn shift(&self, n: i64) -> TwoSidedCylinder {
        TwoSidedCylinder {
            start: self.start - n,
            letters: self.letters.clone(),
        }
    }

    /// Restriction to `[lo, hi] ∩ window`.
    pub fn restrict(&self, lo: i64, hi: i64) -> TwoSidedCylinder {
        let a = lo.max(self.start);
        let b = hi.min(self.end());
        if a > b {
            return TwoSidedCylinder {
                start: lo.max(self.start).min(hi + 1),
                letters: Vec::new(),
            };
        }
        TwoSidedCylinder {
            start: a,
            letters: self.letters[(a - self.start) as usize..=(b - self.start) as usize].to_vec(),
        }
    }

    /// Admissible one-letter extensions on the right.
    pub fn extend_right(&self, group: &FreeGroup) -> Vec<TwoSidedCylinder> {
        group
            .generators()
            .into_iter()
            .filter(|s| self.letters.last() != Some(&s.inverse()))
            .map(|s| {
                let mut letters = self.letters.clone();
                letters.push(s);
                TwoSidedCylinder {
                    start: self.start,
                    letters,
                }
            })
            .collect()
    }

    /// Admissible one-letter extensions on the left.
    pub fn extend_left(&self, group: &FreeGroup) -> Vec<TwoSidedCylinder> {
        group
            .generators()
            .into_iter()
            .filter(|s| self.letters.first() != Some(&s.inverse()))
            .map(|s| {
                let mut letters = Vec::with_capacity(self.letters.len() + 1);
                letters.push(s);
                letters.extend_from_slice(&self.letters);
                TwoSidedCylinder {
                    start: self.start - 1,
                    letters,
                }
            })
            .collect()
    }

    /// Every admissible window on `[start, start + len - 1]`.
    pub fn all(group: &FreeGroup, start: i64, len: usize) -> Result<Vec<TwoSidedCylinder>> {
        Ok(group
            .sphere(len)?
            .elements
            .into_iter()
            .map(|w| TwoSidedCylinder {
                start,
                letters: w.letters().to_vec(),
            })
            .collect())
    }

    pub fn max_index(&self) -> u8 {
        self.letters.iter().map(|s| s.index()).max().unwrap_or(0)
    }
}

impl fmt::Display for TwoSidedCylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.letters.is_empty() {
            "e".to_string()
        } else {
            letters_to_string(&self.letters)
        };
        write!(f, "{}:{}", self.start, body)
    }
}

/// Parses `"m:word"`.
impl FromStr for TwoSidedCylinder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (m, word) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("window {s:?} must look like m:word")))?;
        let start: i64 = m
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad window start in {s:?}")))?;
        TwoSidedCylinder::new(start, parse_letters(word)?)
    }
}

/// `Φ(b, c)_i = b_{-i}⁻¹` for `i < 0` and `c_{i+1}` for `i ≥ 0`, on the window
/// `[-depth(b), depth(c) - 1]`.
pub fn phi_embed(b: &Cylinder, c: &Cylinder) -> Result<TwoSidedCylinder> {
    if let (Some(x), Some(y)) = (b.prefix().first(), c.prefix().first()) {
        if x == y {
            return Err(Error::NotInDomain(format!("{b}, {c}")));
        }
    } else {
        return Err(Error::Precondition("Φ needs nonempty prefixes on both sides".into()));
    }
    let mut letters: Vec<Generator> = b.prefix().iter().rev().map(|s| s.inverse()).collect();
    letters.extend_from_slice(c.prefix());
    let window = TwoSidedCylinder::new(-(b.depth() as i64), letters).expect("b_1 ≠ c_1 makes the junction admissible");
    Ok(window)
}

/// `ν'(C(s_m, …, s_n)) = (2r)⁻¹(2r-1)^{m-n}`; the empty window has mass one.
pub fn markov_cylinder_measure(group: &FreeGroup, tc: &TwoSidedCylinder) -> Q {
    if tc.is_empty() {
        return Q::one();
    }
    let span = tc.end() - tc.start();
    rational::pow(group.branching(), -span) / rational::int(2 * group.rank() as i64)
}

/// Shift cocycle `α'(T^n ξ, ξ)`: `(ξ_0⋯ξ_{n-1})⁻¹` for `n ≥ 1`, `e` for `n = 0`
/// and `ξ_n ξ_{n+1}⋯ξ_{-1}` for `n ≤ -1`.
pub fn alpha_prime(n: i64, xi: &TwoSidedCylinder) -> Result<ReducedWord> {
    let (lo, hi) = if n >= 0 { (0, n - 1) } else { (n, -1) };
    if !xi.covers(lo, hi) {
        return Err(Error::Precondition(format!(
            "window {xi} does not cover [{lo}, {hi}] needed for α'({n}, ·)"
        )));
    }
    let letters: Vec<Generator> = (lo..=hi).map(|i| xi.get(i).unwrap()).collect();
    let w = ReducedWord::from_reduced(letters).expect("admissible windows are reduced");
    Ok(if n >= 0 { w.inverse() } else { w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn f2() -> FreeGroup {
        FreeGroup::new(2).unwrap()
    }

    fn cyl(s: &str) -> Cylinder {
        s.parse().unwrap()
    }

    fn win(s: &str) -> TwoSidedCylinder {
        s.parse().unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn dbl_measure_examples() {
        let g = f2();
        let pc = ProductCylinder::new(cyl("a"), cyl("b"));
        assert_eq!(dbl_measure(&g, &pc).unwrap(), q(1, 12));
        let diag = ProductCylinder::new(cyl("a"), cyl("ab"));
        assert!(matches!(dbl_measure(&g, &diag), Err(Error::RefineRequired(_))));
    }

    #[test]
    fn domain_has_unit_mass() {
        let g = f2();
        for depth in 1..=3 {
            let cyls = Cylinder::all(&g, depth).unwrap();
            let mut total = Q::from_integer(0.into());
            for b in &cyls {
                for c in &cyls {
                    let pc = ProductCylinder::new(b.clone(), c.clone());
                    if pc.in_domain() {
                        total += dbl_measure(&g, &pc).unwrap();
                    }
                }
            }
            assert_eq!(total, int(1));
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_embed(&cyl("a"), &cyl("b")).unwrap(), win("-1:Ab"));
        assert!(matches!(phi_embed(&cyl("ab"), &cyl("aB")), Err(Error::NotInDomain(_))));
        let x = phi_embed(&cyl("abb"), &cyl("Ba")).unwrap();
        assert_eq!(x, win("-3:BBABa"));
        assert_eq!((x.start(), x.end()), (-3, 1));
    }

    #[test]
    fn markov_examples() {
        let g = f2();
        assert_eq!(markov_cylinder_measure(&g, &win("5:a")), q(1, 4));
        assert_eq!(markov_cylinder_measure(&g, &win("0:ab")), q(1, 12));
        assert_eq!(
            markov_cylinder_measure(&g, &win("-7:abA")),
            markov_cylinder_measure(&g, &win("3:BAA"))
        );
    }

    #[test]
    fn alpha_prime_examples() {
        let xi = win("-2:bbaab");
        assert_eq!(alpha_prime(0, &xi).unwrap(), ReducedWord::identity());
        assert_eq!(alpha_prime(1, &win("0:a")).unwrap(), w("A"));
        assert_eq!(alpha_prime(-1, &win("-1:b")).unwrap(), w("b"));
        assert_eq!(alpha_prime(3, &xi).unwrap(), w("BAA"));
        assert!(matches!(alpha_prime(4, &xi), Err(Error::Precondition(_))));
    }

    #[test]
    fn window_helpers() {
        let x = win("-2:abab");
        assert_eq!(x.shift(1), win("-3:abab"));
        assert_eq!(x.restrict(0, 5), win("0:ab"));
        assert_eq!(x.get(-2), Some(cyl("a").prefix()[0]));
        assert_eq!(x.get(2), None);
        assert_eq!(x.to_string(), "-2:abab");
        assert!("0:aA".parse::<TwoSidedCylinder>().is_err());
    }
}
