use std::collections::BTreeMap;

use num_traits::Zero;

use super::action::{FiniteAction, Observable};
use super::operators::inverse_table;
use super::pushforward::{fiber_weights, k_average_weight, Density, KGroup};
use crate::error::{Error, Result};
use crate::free_group::ReducedWord;
use crate::rational::Q;
use crate::relations::{Cell, LeafSystem};

/// A function on `B × X` that is constant in the ground coordinate on
/// cells of a fixed forward depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkewObservable {
    /// `F(b, x) = f(x)`.
    Lifted(Observable),
    /// `F(b, ·)` looked up by the first `depth` forward coordinates of `b`.
    Table {
        depth: usize,
        values: BTreeMap<Vec<ReducedWord>, Observable>,
    },
}

impl SkewObservable {
    pub fn depth(&self) -> usize {
        match self {
            SkewObservable::Lifted(_) => 0,
            SkewObservable::Table { depth, .. } => *depth,
        }
    }

    fn slice(&self, cell: &Cell) -> Result<&Observable> {
        match self {
            SkewObservable::Lifted(f) => Ok(f),
            SkewObservable::Table { depth, values } => {
                let key = cell
                    .forward_key(*depth)
                    .ok_or_else(|| Error::RefineRequired(format!("cell {cell} is coarser than the observable")))?;
                values
                    .get(&key)
                    .ok_or_else(|| Error::InvalidInput(format!("observable has no values for cell {cell}")))
            }
        }
    }
}

/// A function on `cells × X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellTable {
    pub resolution: usize,
    /// `(cell, ground mass, values on X)`.
    pub rows: Vec<(Cell, Q, Observable)>,
}

/// `A[F | ω_i](b, x) = Σ_c ω_i(c, b) F(c, α(c, b)⁻¹x)` on every cell of the
/// resolution where both `ω_i` and `F` are cell-constant.
pub fn leafwise_average(
    system: &dyn LeafSystem,
    i: usize,
    f: &SkewObservable,
    act: &FiniteAction,
) -> Result<CellTable> {
    leafwise_at(system, i, f, act, system.base_resolution(i, f.depth()))
}

fn leafwise_at(
    system: &dyn LeafSystem,
    i: usize,
    f: &SkewObservable,
    act: &FiniteAction,
    res: usize,
) -> Result<CellTable> {
    act.check_rank(system.group().rank())?;
    let mut tables: BTreeMap<ReducedWord, Vec<usize>> = BTreeMap::new();
    let mut rows = Vec::new();
    for (cell, mass) in system.cells(res)? {
        let mut out = vec![Q::zero(); act.len()];
        for nb in system.neighborhood(i, &cell)?.neighbors {
            let slice = f.slice(&nb.cell)?;
            if slice.len() != act.len() {
                return Err(Error::InvalidInput("observable length differs from the action".into()));
            }
            let table = tables
                .entry(nb.cocycle.clone())
                .or_insert_with(|| inverse_table(act, &nb.cocycle));
            for (x, slot) in out.iter_mut().enumerate() {
                *slot += &nb.weight * &slice.values[table[x]];
            }
        }
        rows.push((cell, mass, Observable::new(out)));
    }
    Ok(CellTable { resolution: res, rows })
}

/// `∫_B ∫_K A[F | ω_i](kb, ·) ψ(b) dk dν(b)`.
pub fn leafwise_integral(
    system: &dyn LeafSystem,
    i: usize,
    f: &SkewObservable,
    act: &FiniteAction,
    density: &Density,
    k: KGroup,
) -> Result<Observable> {
    let fiber = k_average_weight(&fiber_weights(system, k)?);
    let res = system.base_resolution(i, f.depth().max(density.depth()));
    let table = leafwise_at(system, i, f, act, res)?;
    let mut out = vec![Q::zero(); act.len()];
    for (cell, mass, values) in &table.rows {
        let w = mass * density.at(cell)? * &fiber;
        if w.is_zero() {
            continue;
        }
        for (slot, v) in out.iter_mut().zip(&values.values) {
            *slot += &w * v;
        }
    }
    Ok(Observable::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::operators::apply_measure_operator;
    use crate::engine::pushforward::pushforward_measure;
    use crate::free_group::FreeGroup;
    use crate::measures::GroupMeasure;
    use crate::rational::q;
    use crate::relations::RelationInstance;

    #[test]
    fn tail_on_z4() {
        let g = FreeGroup::new(2).unwrap();
        let tail = RelationInstance::tail(g);
        let act = FiniteAction::cyclic(4, &[1, 1]).unwrap();
        let f = SkewObservable::Lifted(Observable::indicator(4, 0));
        let table = leafwise_average(&tail, 1, &f, &act).unwrap();
        assert_eq!(table.resolution, 2);
        assert_eq!(table.rows.len(), 12);
        for (cell, _, values) in &table.rows {
            // the two length-2 cocycles shift by −2, 0 or +2
            let nbhd = tail.neighborhood(1, cell).unwrap();
            let expected: Q = nbhd
                .neighbors
                .iter()
                .map(|nb| {
                    if act.apply_inverse(&nb.cocycle, 0) == 0 {
                        nb.weight.clone()
                    } else {
                        Q::zero()
                    }
                })
                .sum();
            assert_eq!(values.values[0], expected);
            assert_eq!(nbhd.len(), 2);
        }
    }

    #[test]
    fn constants_average_to_constants() {
        let g = FreeGroup::new(2).unwrap();
        let act = FiniteAction::cyclic(5, &[1, 2]).unwrap();
        let one = SkewObservable::Lifted(Observable::constant(5, q(1, 1)));
        for inst in [
            RelationInstance::tail(g),
            RelationInstance::random_walk(g, GroupMeasure::uniform_generators(&g)).unwrap(),
            RelationInstance::double_boundary_shift(g),
        ] {
            for (_, _, v) in leafwise_average(&inst, 2, &one, &act).unwrap().rows {
                assert_eq!(v.values, vec![q(1, 1); 5]);
            }
        }
    }

    #[test]
    fn table_observable_depends_on_cell() {
        let g = FreeGroup::new(2).unwrap();
        let tail = RelationInstance::tail(g);
        let act = FiniteAction::cyclic(3, &[1, 1]).unwrap();
        let mut values = BTreeMap::new();
        for s in crate::free_group::Generator::all(2) {
            let v = if s.is_inverse() { q(0, 1) } else { q(1, 1) };
            values.insert(vec![ReducedWord::generator(s)], Observable::constant(3, v));
        }
        let f = SkewObservable::Table { depth: 1, values };
        let table = leafwise_average(&tail, 1, &f, &act).unwrap();
        // neighbours of a depth-2 cylinder bc share its second letter only, so
        // the average is the fraction of neighbours starting with a positive letter
        for (cell, _, v) in &table.rows {
            let nbhd = tail.neighborhood(1, cell).unwrap();
            let positive = nbhd
                .neighbors
                .iter()
                .filter(|nb| matches!(&nb.cell, Cell::Boundary(c) if !c.prefix()[0].is_inverse()))
                .count();
            assert_eq!(v.values[0], q(positive as i64, 2));
        }
    }

    #[test]
    fn interchange_identity() {
        let g = FreeGroup::new(2).unwrap();
        let act = FiniteAction::uniform(vec![vec![1, 2, 0, 4, 3, 6, 5], vec![0, 3, 4, 1, 2, 6, 5]]).unwrap();
        let f = Observable::new((0..7).map(|i| q(i * i - 2, 3)).collect());
        let kappa = GroupMeasure::new(BTreeMap::from([
            ("a".parse().unwrap(), q(1, 2)),
            ("B".parse().unwrap(), q(1, 3)),
            ("ab".parse().unwrap(), q(1, 6)),
        ]))
        .unwrap();
        for inst in [
            RelationInstance::tail(g),
            RelationInstance::random_walk(g, kappa).unwrap(),
            RelationInstance::double_boundary_shift(g),
        ] {
            for i in 1..=2 {
                let zeta = pushforward_measure(&inst, i, &Density::Uniform, KGroup::Trivial).unwrap();
                let lhs = apply_measure_operator(&zeta, &f, &act);
                let rhs = leafwise_integral(
                    &inst,
                    i,
                    &SkewObservable::Lifted(f.clone()),
                    &act,
                    &Density::Uniform,
                    KGroup::Trivial,
                )
                .unwrap();
                assert_eq!(lhs, rhs, "{} i={i}", inst.name());
            }
        }
    }
}
