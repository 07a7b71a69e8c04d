use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{check_cap, Error, Result};
use crate::free_group::ReducedWord;
use crate::measures::GroupMeasure;
use crate::rational::{self, Q};
use crate::relations::{Cell, LeafSystem, RelationInstance};

/// A probability density on a relation's ground space, constant on cells.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Density {
    #[default]
    Uniform,
    /// Values indexed by the first `depth` forward coordinates of a cell.
    /// Missing keys mean zero.
    Table {
        depth: usize,
        values: BTreeMap<Vec<ReducedWord>, Q>,
    },
}

impl Density {
    pub fn depth(&self) -> usize {
        match self {
            Density::Uniform => 0,
            Density::Table { depth, .. } => *depth,
        }
    }

    pub fn at(&self, cell: &Cell) -> Result<Q> {
        match self {
            Density::Uniform => Ok(Q::one()),
            Density::Table { depth, values } => {
                let key = cell
                    .forward_key(*depth)
                    .ok_or_else(|| Error::RefineRequired(format!("cell {cell} is coarser than the density")))?;
                Ok(values.get(&key).cloned().unwrap_or_else(Q::zero))
            }
        }
    }

    /// Checks `ψ ≥ 0` and `∫ψ = 1` against the system's ground measure.
    pub fn validate(&self, system: &dyn LeafSystem) -> Result<()> {
        let Density::Table { depth, values } = self else {
            return Ok(());
        };
        if let Some((k, v)) = values.iter().find(|(_, v)| v.is_negative()) {
            return Err(Error::InvalidInput(format!(
                "density is negative ({}) at {k:?}",
                rational::fmt(v)
            )));
        }
        let res = system.base_resolution(system.first_index(), *depth);
        let mut total = Q::zero();
        for (cell, mass) in system.cells(res)? {
            total += mass * self.at(&cell)?;
        }
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "density integrates to {}",
                rational::fmt(&total)
            )));
        }
        Ok(())
    }
}

/// The compact group averaged over in the push-forward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KGroup {
    #[default]
    Trivial,
    /// `ℤ/Nℤ` rotating a fiber coordinate `t ∈ {0,…,N−1}` carried next to
    /// the ground space with weights proportional to `(2r−1)^t`.
    Cyclic { order: usize },
}

impl KGroup {
    fn order(self) -> usize {
        match self {
            KGroup::Trivial => 1,
            KGroup::Cyclic { order } => order,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PushforwardSpec<S = RelationInstance> {
    pub system: S,
    /// Produce `ζ_1, …, ζ_N`.
    pub truncation: usize,
    pub density: Density,
    pub k: KGroup,
}

impl<S: LeafSystem> PushforwardSpec<S> {
    pub fn new(system: S, truncation: usize) -> Self {
        PushforwardSpec {
            system,
            truncation,
            density: Density::Uniform,
            k: KGroup::Trivial,
        }
    }
}

/// Normalised fiber weights `(2r−1)^t / Σ_s (2r−1)^s`.
pub(crate) fn fiber_weights(system: &dyn LeafSystem, k: KGroup) -> Result<Vec<Q>> {
    let n = k.order();
    if n == 0 {
        return Err(Error::InvalidInput("K = ℤ/0ℤ".into()));
    }
    let base = system.group().branching();
    let raw: Vec<Q> = (0..n as i64).map(|t| rational::pow(base, t)).collect();
    let total: Q = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / &total).collect())
}

/// `∫_K Σ_t θ_t dk`: the weight a cell picks up from the fiber. The
/// leafwise measures never move the fiber coordinate, so `k·(b,t)` sees the
/// same neighbourhood of `b` in every fiber.
pub(crate) fn k_average_weight(theta: &[Q]) -> Q {
    let dk = Q::new(1.into(), theta.len().into());
    let per_k: Q = theta.iter().sum();
    (0..theta.len()).map(|_| &dk * &per_k).sum()
}

/// `ζ_i(γ) = ∫_B ∫_K Σ_{c: α(c,b)=γ} ω_i(c, kb) ψ(b) dk dν(b)`.
pub fn pushforward_measure(system: &dyn LeafSystem, i: usize, density: &Density, k: KGroup) -> Result<GroupMeasure> {
    if i < system.first_index() {
        return Err(Error::InvalidInput(format!(
            "{} is indexed from {}",
            system.name(),
            system.first_index()
        )));
    }
    let theta = fiber_weights(system, k)?;
    let fiber_factor = k_average_weight(&theta);
    let res = system.base_resolution(i, density.depth());
    let cells = system.cells(res)?;
    check_cap(
        "pushforward cells × K",
        cells.len() as u128 * (theta.len() * theta.len()) as u128,
        system.group().cap(),
    )?;
    let mut acc: BTreeMap<ReducedWord, Q> = BTreeMap::new();
    for (cell, mass) in &cells {
        let psi = density.at(cell)?;
        if psi.is_zero() {
            continue;
        }
        let factor = mass * psi * &fiber_factor;
        for nb in system.neighborhood(i, cell)?.neighbors {
            *acc.entry(nb.cocycle).or_insert_with(Q::zero) += &factor * nb.weight;
        }
    }
    GroupMeasure::new(acc)
        .map_err(|e| Error::Precondition(format!("{} ζ_{i} is not a probability measure: {e}", system.name())))
}

/// `(ζ_1, …, ζ_N)`.
pub fn pushforward_family<S: LeafSystem>(spec: &PushforwardSpec<S>) -> Result<Vec<GroupMeasure>> {
    if spec.truncation == 0 {
        return Err(Error::InvalidInput("truncation N must be ≥ 1".into()));
    }
    spec.density.validate(&spec.system)?;
    (1..=spec.truncation)
        .map(|i| pushforward_measure(&spec.system, i, &spec.density, spec.k))
        .collect()
}
