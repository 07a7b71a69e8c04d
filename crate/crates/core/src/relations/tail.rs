//! The tail relation on `∂F`: the orbit relation of the Maharam extension
//! restricted to the zero fiber. `ω_n(·, b)` is uniform over the points `gb`
//! with `|g| = 2n` and `dν∘g/dν(b) = 1`, and the cocycle is `α(gb, b) = g`.

use crate::boundary::{act_on_cylinder, cylinder_measure, Cylinder};
use crate::error::{Error, Result};
use crate::free_group::{FreeGroup, ReducedWord};
use crate::rational::Q;

use super::{Cell, LeafNeighborhood, LeafSystem, Neighbor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailRelation {
    group: FreeGroup,
}

impl TailRelation {
    pub fn new(group: FreeGroup) -> Self {
        TailRelation { group }
    }
}

/// Leaf neighbourhood of index `n` on a cylinder of depth at least `n + 1`.
///
/// RN-trivial words of length `2n` cancel exactly `n` letters of `b`, so they
/// are `u·(b_1⋯b_n)⁻¹` with `|u| = n` and last letter `u_n ∉ {b_n, b_{n+1}⁻¹}`;
/// there are `(2r-2)(2r-1)^{n-1}` of them, each of weight
/// `(2r-2)⁻¹(2r-1)^{-n+1}`.
pub fn tail_neighborhood(group: &FreeGroup, n: usize, c: &Cylinder) -> Result<LeafNeighborhood> {
    if n == 0 {
        return Err(Error::InvalidInput("tail weights start at n = 1".into()));
    }
    if c.depth() < n + 1 {
        return Err(Error::Precondition(format!(
            "tail neighbourhood of index {n} needs depth {}, cylinder {c} has depth {}",
            n + 1,
            c.depth()
        )));
    }
    let b = c.prefix();
    let head_inv = ReducedWord::from_reduced(b[..n].to_vec())?.inverse();
    let (forbid_a, forbid_b) = (b[n - 1], b[n].inverse());
    let two_r = 2 * group.rank() as i64;
    let weight = Q::new(
        1.into(),
        ((two_r - 2) * num_traits::pow(group.branching(), n - 1)).into(),
    );
    let mut neighbors = Vec::new();
    for u in group.sphere(n)?.elements {
        let last = u.last().expect("n ≥ 1");
        if last == forbid_a || last == forbid_b {
            continue;
        }
        let (g, cancelled) = u.multiply(&head_inv);
        debug_assert_eq!(cancelled, 0);
        let (image, k) = act_on_cylinder(&g, c)?;
        debug_assert_eq!(k, n, "RN derivative must be one");
        neighbors.push(Neighbor {
            cell: Cell::Boundary(image),
            cocycle: g,
            weight: weight.clone(),
        });
    }
    let expected = (two_r as usize - 2) * (group.branching() as usize).pow(n as u32 - 1);
    assert_eq!(neighbors.len(), expected, "tail neighbour count");
    LeafNeighborhood::new(Cell::Boundary(c.clone()), neighbors)
}

impl LeafSystem for TailRelation {
    fn name(&self) -> &'static str {
        "TAIL"
    }

    fn group(&self) -> &FreeGroup {
        &self.group
    }

    fn first_index(&self) -> usize {
        1
    }

    fn resolution(&self, i: usize) -> usize {
        i + 1
    }

    fn base_resolution(&self, i: usize, forward_depth: usize) -> usize {
        self.resolution(i).max(forward_depth)
    }

    fn cells(&self, resolution: usize) -> Result<Vec<(Cell, Q)>> {
        Ok(Cylinder::all(&self.group, resolution)?
            .into_iter()
            .map(|c| {
                let m = cylinder_measure(&self.group, &c);
                (Cell::Boundary(c), m)
            })
            .collect())
    }

    fn neighborhood(&self, i: usize, base: &Cell) -> Result<LeafNeighborhood> {
        match base {
            Cell::Boundary(c) => tail_neighborhood(&self.group, i, c),
            other => Err(Error::InvalidInput(format!("TAIL cannot evaluate cell {other}"))),
        }
    }
}
