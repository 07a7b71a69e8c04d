//! Amenable relations carrying a cocycle into `F_r` and a family of leafwise
//! probability measures, evaluated exactly at cylinder resolution.
//!
//! A relation never materialises orbits. For an index `i` it declares a
//! resolution at which both the leafwise weights `ω_i(·, b)` and the cocycle
//! are constant on cells, partitions its ground space into such cells, and
//! lists each cell's leaf neighbourhood.

mod double_shift;
mod random_walk;
mod tail;

use std::fmt;

use num_traits::One;
use serde::Serialize;

pub use double_shift::{dbl_shift_neighborhood, DoubleShiftRelation};
pub use random_walk::{rw_cocycle, rw_neighborhood, PathWindow, RandomWalkRelation};
pub use tail::{tail_neighborhood, TailRelation};

use crate::boundary::{Cylinder, TwoSidedCylinder};
use crate::error::{Error, Result};
use crate::free_group::{FreeGroup, ReducedWord};
use crate::measures::GroupMeasure;
use crate::rational::{self, Q};

/// A cell of a relation's ground space at finite resolution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    /// A cylinder of `∂F`.
    Boundary(Cylinder),
    /// A coordinate window of a path in `Γ^ℤ`.
    Path(PathWindow),
    /// A window of a two-sided admissible sequence in `S^ℤ`.
    TwoSided(TwoSidedCylinder),
}

impl Cell {
    /// Restriction of `self` to the coordinates fixed by `pattern`.
    fn restrict_like(&self, pattern: &Cell) -> Result<Cell> {
        match (self, pattern) {
            (Cell::Boundary(c), Cell::Boundary(p)) => Ok(Cell::Boundary(c.truncate(p.depth()))),
            (Cell::Path(c), Cell::Path(p)) => Ok(Cell::Path(c.restrict(p.start(), p.end()))),
            (Cell::TwoSided(c), Cell::TwoSided(p)) => {
                if p.is_empty() {
                    Ok(Cell::TwoSided(p.clone()))
                } else {
                    Ok(Cell::TwoSided(c.restrict(p.start(), p.end())))
                }
            }
            _ => Err(Error::InvalidInput("cells of different relations".into())),
        }
    }

    /// Coordinates `1..=d` (boundary, path) or `0..d` (two-sided) as words,
    /// when the cell fixes them all.
    pub fn forward_key(&self, depth: usize) -> Option<Vec<ReducedWord>> {
        match self {
            Cell::Boundary(c) => {
                (c.depth() >= depth).then(|| c.prefix()[..depth].iter().map(|&s| ReducedWord::generator(s)).collect())
            }
            Cell::Path(p) => (1..=depth as i64).map(|i| p.get(i).cloned()).collect(),
            Cell::TwoSided(t) => (0..depth as i64)
                .map(|i| t.get(i).map(ReducedWord::generator))
                .collect(),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Boundary(c) => write!(f, "{c}"),
            Cell::Path(p) => write!(f, "{p}"),
            Cell::TwoSided(t) => write!(f, "{t}"),
        }
    }
}

/// One point of a leaf neighbourhood: the neighbouring cell, the cocycle
/// value `α(c, b)` and the weight `ω_i(c, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub cell: Cell,
    pub cocycle: ReducedWord,
    pub weight: Q,
}

/// `ω_i(·, b)` for all `b` in a base cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafNeighborhood {
    pub base: Cell,
    pub neighbors: Vec<Neighbor>,
}

impl LeafNeighborhood {
    /// Merges repeated `(cell, cocycle)` pairs and checks the weights sum to one.
    pub fn new(base: Cell, raw: Vec<Neighbor>) -> Result<Self> {
        let mut neighbors: Vec<Neighbor> = Vec::with_capacity(raw.len());
        for nb in raw {
            match neighbors
                .iter_mut()
                .find(|m| m.cell == nb.cell && m.cocycle == nb.cocycle)
            {
                Some(m) => m.weight += nb.weight,
                None => neighbors.push(nb),
            }
        }
        let total: Q = neighbors.iter().map(|n| &n.weight).sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "leaf weights at {base} sum to {}",
                rational::fmt(&total)
            )));
        }
        Ok(LeafNeighborhood { base, neighbors })
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Every neighbour restricted to the coordinates fixed in `coarse`'s
    /// corresponding neighbour. Used to compare two resolutions.
    fn agrees_with(&self, coarse: &LeafNeighborhood) -> Result<bool> {
        if self.neighbors.len() != coarse.neighbors.len() {
            return Ok(false);
        }
        for (fine, c) in self.neighbors.iter().zip(&coarse.neighbors) {
            if fine.cocycle != c.cocycle || fine.weight != c.weight || fine.cell.restrict_like(&c.cell)? != c.cell {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A measured relation with cocycle and leafwise weight family, exposed at
/// cylinder resolution.
pub trait LeafSystem {
    fn name(&self) -> &'static str;

    fn group(&self) -> &FreeGroup;

    /// Smallest valid index `i`.
    fn first_index(&self) -> usize;

    /// Resolution at which `ω_i` and the cocycle are constant on cells.
    fn resolution(&self, i: usize) -> usize;

    /// Base resolution needed so that every neighbour of index `i` also fixes
    /// its first `forward_depth` forward coordinates.
    fn base_resolution(&self, i: usize, forward_depth: usize) -> usize;

    /// The cell partition of the ground space with exact masses.
    fn cells(&self, resolution: usize) -> Result<Vec<(Cell, Q)>>;

    fn neighborhood(&self, i: usize, base: &Cell) -> Result<LeafNeighborhood>;
}

/// Refining the declared resolution of index `i` by `extra` must leave every
/// leaf neighbourhood unchanged once restricted back.
pub fn check_resolution_stability(system: &dyn LeafSystem, i: usize, extra: usize) -> Result<bool> {
    let coarse_res = system.resolution(i);
    for (fine, _) in system.cells(coarse_res + extra)? {
        let coarse_base = match &fine {
            Cell::Boundary(c) => Cell::Boundary(c.truncate(coarse_res)),
            Cell::Path(p) => Cell::Path(p.restrict(1, coarse_res as i64)),
            Cell::TwoSided(t) => {
                if coarse_res == 0 {
                    Cell::TwoSided(TwoSidedCylinder::whole())
                } else {
                    Cell::TwoSided(t.restrict(0, coarse_res as i64 - 1))
                }
            }
        };
        let fine_nb = system.neighborhood(i, &fine)?;
        let coarse_nb = system.neighborhood(i, &coarse_base)?;
        if !fine_nb.agrees_with(&coarse_nb)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The three concrete relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationInstance {
    Tail(TailRelation),
    RandomWalk(RandomWalkRelation),
    DoubleBoundaryShift(DoubleShiftRelation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InstanceKind {
    Tail,
    RandomWalk,
    DoubleBoundaryShift,
}

impl RelationInstance {
    pub fn tail(group: FreeGroup) -> Self {
        RelationInstance::Tail(TailRelation::new(group))
    }

    pub fn random_walk(group: FreeGroup, kappa: GroupMeasure) -> Result<Self> {
        Ok(RelationInstance::RandomWalk(RandomWalkRelation::new(group, kappa)?))
    }

    pub fn double_boundary_shift(group: FreeGroup) -> Self {
        RelationInstance::DoubleBoundaryShift(DoubleShiftRelation::new(group))
    }

    /// Builds an instance; `kappa` defaults to uniform on the generators.
    pub fn from_kind(kind: InstanceKind, group: FreeGroup, kappa: Option<GroupMeasure>) -> Result<Self> {
        match kind {
            InstanceKind::Tail => Ok(Self::tail(group)),
            InstanceKind::DoubleBoundaryShift => Ok(Self::double_boundary_shift(group)),
            InstanceKind::RandomWalk => {
                let kappa = kappa.unwrap_or_else(|| GroupMeasure::uniform_generators(&group));
                Self::random_walk(group, kappa)
            }
        }
    }

    pub fn kind(&self) -> InstanceKind {
        match self {
            RelationInstance::Tail(_) => InstanceKind::Tail,
            RelationInstance::RandomWalk(_) => InstanceKind::RandomWalk,
            RelationInstance::DoubleBoundaryShift(_) => InstanceKind::DoubleBoundaryShift,
        }
    }

    fn inner(&self) -> &dyn LeafSystem {
        match self {
            RelationInstance::Tail(t) => t,
            RelationInstance::RandomWalk(r) => r,
            RelationInstance::DoubleBoundaryShift(d) => d,
        }
    }
}

impl LeafSystem for RelationInstance {
    fn name(&self) -> &'static str {
        self.inner().name()
    }

    fn group(&self) -> &FreeGroup {
        self.inner().group()
    }

    fn first_index(&self) -> usize {
        self.inner().first_index()
    }

    fn resolution(&self, i: usize) -> usize {
        self.inner().resolution(i)
    }

    fn base_resolution(&self, i: usize, forward_depth: usize) -> usize {
        self.inner().base_resolution(i, forward_depth)
    }

    fn cells(&self, resolution: usize) -> Result<Vec<(Cell, Q)>> {
        self.inner().cells(resolution)
    }

    fn neighborhood(&self, i: usize, base: &Cell) -> Result<LeafNeighborhood> {
        self.inner().neighborhood(i, base)
    }
}
