use crate::boundary::Cylinder;
use crate::error::{Error, Result};
use crate::free_group::FreeGroup;
use crate::relations::{tail_neighborhood, Cell};

use super::action::FiniteAction;

/// Finite-resolution probe for ergodicity of the skew-product of the tail
/// relation with a finite action.
///
/// Vertices are pairs `(c, x)` with `c` a cylinder of depth `1..=depth`.
/// Edges join a cylinder to its children (same `x`) and `(c, x)` to
/// `(gc, g·x)` for every tail move `g` visible at the depth of `c`. Returns
/// whether this graph is connected. A `false` exhibits a nontrivial invariant
/// set at this resolution; a `true` is only evidence.
pub fn skew_ergodicity_check(act: &FiniteAction, depth: usize) -> Result<bool> {
    if depth < 3 {
        return Err(Error::Precondition(format!("depth must be ≥ 3, got {depth}")));
    }
    let group = FreeGroup::new(act.rank())?;
    let n = act.len();
    let mut levels: Vec<Vec<Cylinder>> = Vec::with_capacity(depth);
    let mut offsets = Vec::with_capacity(depth);
    let mut total = 0usize;
    for d in 1..=depth {
        let mut cyls = Cylinder::all(&group, d)?;
        cyls.sort();
        offsets.push(total);
        total += cyls.len() * n;
        levels.push(cyls);
    }
    crate::error::check_cap("skew graph vertices", total as u128, group.cap())?;
    let index = |d: usize, c: &Cylinder| -> usize {
        levels[d - 1]
            .binary_search(c)
            .expect("cylinder enumerated at its depth")
    };
    let vertex = |d: usize, ci: usize, x: usize| offsets[d - 1] + ci * n + x;
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };
    for d in 1..=depth {
        for (ci, c) in levels[d - 1].iter().enumerate() {
            if d < depth {
                for child in c.children(&group) {
                    let k = index(d + 1, &child);
                    for x in 0..n {
                        union(&mut parent, vertex(d, ci, x), vertex(d + 1, k, x));
                    }
                }
            }
            for moves in 1..d {
                for nb in tail_neighborhood(&group, moves, c)?.neighbors {
                    let Cell::Boundary(target) = &nb.cell else {
                        unreachable!()
                    };
                    let k = index(d, target);
                    for x in 0..n {
                        union(&mut parent, vertex(d, ci, x), vertex(d, k, act.apply(&nb.cocycle, x)));
                    }
                }
            }
        }
    }
    let root = find(&mut parent, 0);
    Ok((0..total).all(|v| find(&mut parent, v) == root))
}
