//! The shift on two-sided admissible sequences `D' = Φ(D)` with the Markov
//! measure `ν'`. The cocycle is `α'` and `ω_n(T^i ξ, ξ) = 1/(n+1)` for
//! `0 ≤ i ≤ n`.

use num_traits::One;

use crate::boundary::{alpha_prime, markov_cylinder_measure, TwoSidedCylinder};
use crate::error::{Error, Result};
use crate::free_group::FreeGroup;
use crate::rational::Q;

use super::{Cell, LeafNeighborhood, LeafSystem, Neighbor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleShiftRelation {
    group: FreeGroup,
}

impl DoubleShiftRelation {
    pub fn new(group: FreeGroup) -> Self {
        DoubleShiftRelation { group }
    }
}

/// Neighbours `T^i ξ`, `0 ≤ i ≤ n`, with cocycle `α'(i, ξ)`.
pub fn dbl_shift_neighborhood(n: usize, xi: &TwoSidedCylinder) -> Result<LeafNeighborhood> {
    if !xi.covers(0, n as i64 - 1) {
        return Err(Error::Precondition(format!(
            "window {xi} does not cover [0, {}]",
            n as i64 - 1
        )));
    }
    let weight = Q::new(1.into(), (n + 1).into());
    let neighbors = (0..=n as i64)
        .map(|i| {
            Ok(Neighbor {
                cell: Cell::TwoSided(xi.shift(i)),
                cocycle: alpha_prime(i, xi)?,
                weight: weight.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    LeafNeighborhood::new(Cell::TwoSided(xi.clone()), neighbors)
}

impl LeafSystem for DoubleShiftRelation {
    fn name(&self) -> &'static str {
        "DOUBLE_BOUNDARY_SHIFT"
    }

    fn group(&self) -> &FreeGroup {
        &self.group
    }

    fn first_index(&self) -> usize {
        0
    }

    fn resolution(&self, i: usize) -> usize {
        i
    }

    fn base_resolution(&self, i: usize, forward_depth: usize) -> usize {
        self.resolution(i).max(forward_depth + i)
    }

    /// Windows on `[0, res - 1]` weighted by `ν'`.
    fn cells(&self, resolution: usize) -> Result<Vec<(Cell, Q)>> {
        if resolution == 0 {
            return Ok(vec![(Cell::TwoSided(TwoSidedCylinder::whole()), Q::one())]);
        }
        Ok(TwoSidedCylinder::all(&self.group, 0, resolution)?
            .into_iter()
            .map(|t| {
                let m = markov_cylinder_measure(&self.group, &t);
                (Cell::TwoSided(t), m)
            })
            .collect())
    }

    fn neighborhood(&self, i: usize, base: &Cell) -> Result<LeafNeighborhood> {
        match base {
            Cell::TwoSided(t) => dbl_shift_neighborhood(i, t),
            other => Err(Error::InvalidInput(format!(
                "DOUBLE_BOUNDARY_SHIFT cannot evaluate cell {other}"
            ))),
        }
    }
}
