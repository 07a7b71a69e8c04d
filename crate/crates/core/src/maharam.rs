//! Discrete Maharam extension of the boundary action on `∂F × ℤ`.
//!
//! With `λ = (2r-1)⁻¹` the fiber `t` carries weight `λ^{-t}` and `g` acts by
//! `(ξ, t) ↦ (gξ, t + R_λ(g, ξ))`, where `R_λ = log_λ(dν∘g/dν)`.

use serde::Serialize;

use crate::boundary::{act_on_cylinder, boundary_action, cylinder_measure, r_lambda, BoundaryPoint, Cylinder};
use crate::error::{Error, Result};
use crate::free_group::{FreeGroup, ReducedWord};
use crate::rational::{self, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaharamPoint {
    pub xi: BoundaryPoint,
    pub t: i64,
}

/// `θ_λ({t}) = λ^{-t} = (2r-1)^t`.
pub fn fiber_weight(group: &FreeGroup, t: i64) -> Q {
    rational::pow(group.branching(), t)
}

pub fn maharam_act(group: &FreeGroup, g: &ReducedWord, p: &MaharamPoint) -> MaharamPoint {
    let (xi, _) = boundary_action(g, &p.xi);
    MaharamPoint {
        xi,
        t: p.t + r_lambda(group, g, &p.xi),
    }
}

/// Both sides of `ν(g·c)·λ^{-(t + R_λ(g, c))} = ν(c)·λ^{-t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub element: ReducedWord,
    pub cylinder: String,
    pub t: i64,
    pub r_lambda: i64,
    #[serde(with = "rational::serde_q")]
    pub lhs: Q,
    #[serde(with = "rational::serde_q")]
    pub rhs: Q,
    pub holds: bool,
}

/// Compares the `ν × θ_λ` masses of `c × {t}` and its image under `g`.
pub fn check_maharam_invariance(group: &FreeGroup, g: &ReducedWord, c: &Cylinder, t: i64) -> Result<InvarianceReport> {
    if c.depth() < g.len() + 1 {
        return Err(Error::Precondition(format!(
            "cylinder depth {} < |g| + 1 = {}",
            c.depth(),
            g.len() + 1
        )));
    }
    let (image, _) = act_on_cylinder(g, c)?;
    // R_λ is constant on c at this depth; confirm on every child
    let mut values = c
        .children(group)
        .into_iter()
        .map(|ch| r_lambda(group, g, &ch.representative()));
    let r = values.next().expect("cylinders have children");
    if values.any(|v| v != r) {
        return Err(Error::Precondition(format!("R_λ({g}, ·) is not constant on {c}")));
    }
    let lhs = cylinder_measure(group, &image) * fiber_weight(group, t + r);
    let rhs = cylinder_measure(group, c) * fiber_weight(group, t);
    Ok(InvarianceReport {
        element: g.clone(),
        cylinder: c.to_string(),
        t,
        r_lambda: r,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub checked: usize,
    pub failures: Vec<InvarianceReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the invariance check for every `g` with `|g| ≤ max_len`, every
/// cylinder of the given depth and every fiber in `fibers`.
pub fn maharam_sweep(
    group: &FreeGroup,
    max_len: usize,
    depth: usize,
    fibers: std::ops::RangeInclusive<i64>,
) -> Result<SweepReport> {
    let cylinders = Cylinder::all(group, depth)?;
    let mut report = SweepReport::default();
    for g in group.ball(max_len)? {
        for c in &cylinders {
            for t in fibers.clone() {
                let r = check_maharam_invariance(group, &g, c, t)?;
                report.checked += 1;
                if !r.holds {
                    report.failures.push(r);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn f2() -> FreeGroup {
        FreeGroup::new(2).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn act_examples() {
        let g = f2();
        let p = MaharamPoint {
            xi: "(b)".parse().unwrap(),
            t: 0,
        };
        assert_eq!(maharam_act(&g, &ReducedWord::identity(), &p), p);
        let moved = maharam_act(&g, &w("a"), &p);
        assert_eq!(
            moved,
            MaharamPoint {
                xi: "a(b)".parse().unwrap(),
                t: 1
            }
        );
    }

    #[test]
    fn act_is_a_group_action() {
        let g = f2();
        let points = ["(b)", "Ab(a)", "(aB)", "bb(A)"];
        for s in g.sphere(1).unwrap().elements {
            for h in g.sphere(1).unwrap().elements {
                for xi in points {
                    let p = MaharamPoint {
                        xi: xi.parse().unwrap(),
                        t: 3,
                    };
                    assert_eq!(
                        maharam_act(&g, &s.mul(&h), &p),
                        maharam_act(&g, &s, &maharam_act(&g, &h, &p))
                    );
                }
            }
        }
    }

    #[test]
    fn invariance_examples() {
        let g = f2();
        let c: Cylinder = "b".parse().unwrap();
        let r = check_maharam_invariance(&g, &ReducedWord::identity(), &c, 2).unwrap();
        assert!(r.holds);
        let c: Cylinder = "bab".parse().unwrap();
        let r = check_maharam_invariance(&g, &w("a"), &c, 0).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (q(1, 36), q(1, 36)));
        assert!(check_maharam_invariance(&g, &w("ab"), &"ba".parse().unwrap(), 0).is_err());
    }

    #[test]
    fn small_sweep_passes() {
        let report = maharam_sweep(&f2(), 2, 3, -1..=1).unwrap();
        assert_eq!(report.checked, 17 * 36 * 3);
        assert!(report.passed());
    }
}
