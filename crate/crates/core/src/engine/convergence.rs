use std::fmt::Write;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::action::{FiniteAction, Observable};
use super::operators::{apply_measure_operator, conditional_expectation, sphere_sum_sequence, Subgroup};
use super::pushforward::{pushforward_family, PushforwardSpec};
use crate::error::{Error, Result};
use crate::measures::GroupMeasure;
use crate::rational::{self, Q};
use crate::relations::LeafSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceRow {
    pub index: usize,
    /// `sup_x |π_X(ζ_i)f(x) − E[f|target](x)|`.
    #[serde(with = "rational::serde_q")]
    pub sup_error: Q,
    /// `∫ |π_X(ζ_i)f − E[f|target]| dμ`.
    #[serde(with = "rational::serde_q")]
    pub l1_error: Q,
}

fn row(index: usize, avg: &Observable, limit: &Observable, act: &FiniteAction) -> ConvergenceRow {
    ConvergenceRow {
        index,
        sup_error: avg.sup_distance(limit),
        l1_error: avg.l1_distance(limit, act),
    }
}

fn check_lengths(act: &FiniteAction, f: &Observable) -> Result<()> {
    if f.len() != act.len() {
        return Err(Error::InvalidInput(format!(
            "observable has {} values for {} points",
            f.len(),
            act.len()
        )));
    }
    Ok(())
}

/// Error table for `ζ_1, ζ_2, …` (row `i` uses `family[i−1]`).
pub fn convergence_experiment(
    family: &[GroupMeasure],
    act: &FiniteAction,
    f: &Observable,
    target: Subgroup,
) -> Result<Vec<ConvergenceRow>> {
    check_lengths(act, f)?;
    let limit = conditional_expectation(f, act, target);
    Ok(family
        .iter()
        .enumerate()
        .map(|(i, zeta)| row(i + 1, &apply_measure_operator(zeta, f, act), &limit, act))
        .collect())
}

pub fn convergence_from_spec<S: LeafSystem>(
    spec: &PushforwardSpec<S>,
    act: &FiniteAction,
    f: &Observable,
    target: Subgroup,
) -> Result<Vec<ConvergenceRow>> {
    act.check_rank(spec.system.group().rank())?;
    convergence_experiment(&pushforward_family(spec)?, act, f, target)
}

/// Sphere-built families whose averages come from the sphere recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereFamily {
    /// `σ_n`.
    Spheres,
    /// `σ_{2n}`, the tail family.
    EvenSpheres,
    /// `(n+1)⁻¹ Σ_{i ≤ n} σ_i`, the double-boundary-shift family.
    CesaroSpheres,
}

/// Rows `n = 1..=n_max` for a sphere family, without enumerating spheres.
pub fn sphere_convergence(
    family: SphereFamily,
    n_max: usize,
    act: &FiniteAction,
    f: &Observable,
    target: Subgroup,
) -> Result<Vec<ConvergenceRow>> {
    check_lengths(act, f)?;
    let limit = conditional_expectation(f, act, target);
    let radius = match family {
        SphereFamily::EvenSpheres => 2 * n_max,
        _ => n_max,
    };
    let spheres = sphere_sum_sequence(act, f, radius)?;
    let mut rows = Vec::with_capacity(n_max);
    let mut running = vec![Q::zero(); act.len()];
    for (i, s) in spheres.iter().enumerate() {
        for (acc, v) in running.iter_mut().zip(&s.values) {
            *acc += v;
        }
        if i == 0 {
            continue;
        }
        let avg = match family {
            SphereFamily::Spheres => s.clone(),
            SphereFamily::EvenSpheres if i % 2 == 0 => s.clone(),
            SphereFamily::EvenSpheres => continue,
            SphereFamily::CesaroSpheres => Observable::new(
                running
                    .iter()
                    .map(|v| v / Q::from_integer((i as i64 + 1).into()))
                    .collect(),
            ),
        };
        let index = if family == SphereFamily::EvenSpheres { i / 2 } else { i };
        rows.push(row(index, &avg, &limit, act));
    }
    Ok(rows)
}

/// `index,sup_error,l1_error`, floats at 17 significant digits or raw
/// rationals when `exact`.
pub fn rows_to_csv(rows: &[ConvergenceRow], exact: bool) -> String {
    let render = |q: &Q| {
        if exact {
            rational::fmt(q)
        } else {
            rational::fmt_f64(rational::to_f64(q))
        }
    };
    let mut out = String::from("index,sup_error,l1_error\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.index, render(&r.sup_error), render(&r.l1_error)).expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_group::FreeGroup;
    use crate::measures::{cesaro_spheres, sphere_uniform};
    use crate::rational::q;
    use crate::relations::RelationInstance;

    #[test]
    fn invariant_observable_has_zero_error() {
        let g = FreeGroup::new(2).unwrap();
        let act = FiniteAction::cyclic(4, &[1, 1]).unwrap();
        let f = conditional_expectation(&Observable::indicator(4, 0), &act, Subgroup::Even);
        let rows = convergence_from_spec(
            &PushforwardSpec::new(RelationInstance::tail(g), 3),
            &act,
            &f,
            Subgroup::Even,
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.sup_error.is_zero() && r.l1_error.is_zero()));
    }

    #[test]
    fn parity_obstruction() {
        let act = FiniteAction::cyclic(4, &[1, 1]).unwrap();
        let f = Observable::indicator(4, 0);
        let rows = sphere_convergence(SphereFamily::EvenSpheres, 6, &act, &f, Subgroup::Full).unwrap();
        assert!(rows.iter().all(|r| r.sup_error >= q(1, 4)));
    }

    #[test]
    fn recursion_rows_match_enumeration() {
        let g = FreeGroup::new(2).unwrap();
        let act = FiniteAction::cyclic(7, &[1, 3]).unwrap();
        let f = Observable::indicator(7, 0).shift(&q(-1, 7));
        for (kind, measures) in [
            (
                SphereFamily::Spheres,
                (1..=4).map(|n| sphere_uniform(&g, n).unwrap()).collect::<Vec<_>>(),
            ),
            (
                SphereFamily::EvenSpheres,
                (1..=2).map(|n| sphere_uniform(&g, 2 * n).unwrap()).collect(),
            ),
            (
                SphereFamily::CesaroSpheres,
                (1..=4).map(|n| cesaro_spheres(&g, n).unwrap()).collect(),
            ),
        ] {
            let fast = sphere_convergence(kind, measures.len(), &act, &f, Subgroup::Even).unwrap();
            let slow = convergence_experiment(&measures, &act, &f, Subgroup::Even).unwrap();
            assert_eq!(fast, slow, "{kind:?}");
        }
    }

    #[test]
    fn csv_shape() {
        let rows = vec![ConvergenceRow {
            index: 1,
            sup_error: q(1, 3),
            l1_error: q(0, 1),
        }];
        assert_eq!(rows_to_csv(&rows, true), "index,sup_error,l1_error\n1,1/3,0/1\n");
        let float = rows_to_csv(&rows, false);
        assert!(float.starts_with("index,sup_error,l1_error\n1,3.3333333333333331e-1,"));
    }
}
