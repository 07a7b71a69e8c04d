use std::collections::BTreeSet;

use serde::Serialize;

use super::pushforward::{pushforward_measure, Density, KGroup};
use crate::error::Result;
use crate::free_group::ReducedWord;
use crate::measures::{cesaro_convolutions, cesaro_spheres, sphere_uniform, GroupMeasure};
use crate::rational::{self, Q};
use crate::relations::{LeafSystem, RelationInstance};

/// The closed form each instance's `ζ_n` should equal: `σ_{2n}` for the tail
/// relation, `n⁻¹Σ_{k≤n} κ^{∗k}` for the random walk and
/// `(n+1)⁻¹Σ_{i≤n} σ_i` for the double-boundary shift.
pub fn closed_form(instance: &RelationInstance, n: usize) -> Result<GroupMeasure> {
    let group = instance.group();
    match instance {
        RelationInstance::Tail(_) => sphere_uniform(group, 2 * n),
        RelationInstance::RandomWalk(rw) => cesaro_convolutions(rw.kappa(), n, group.cap()),
        RelationInstance::DoubleBoundaryShift(_) => cesaro_spheres(group, n),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub instance: String,
    pub n: usize,
    pub element: ReducedWord,
    #[serde(with = "rational::serde_q")]
    pub lhs: Q,
    #[serde(with = "rational::serde_q")]
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub instance: String,
    pub n: usize,
    pub equal: bool,
    pub pushforward: GroupMeasure,
    pub closed_form: GroupMeasure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub passed: bool,
    pub first_failure: Option<Discrepancy>,
    pub comparisons: Vec<Comparison>,
}

/// First element, in shortlex order, where the two measures differ.
pub fn first_difference(lhs: &GroupMeasure, rhs: &GroupMeasure) -> Option<(ReducedWord, Q, Q)> {
    let support: BTreeSet<&ReducedWord> = lhs.support().chain(rhs.support()).collect();
    support.into_iter().find_map(|g| {
        let (a, b) = (lhs.get(g), rhs.get(g));
        (a != b).then(|| (g.clone(), a, b))
    })
}

/// Compares `ζ_1, …, ζ_N` of `system` (ψ ≡ 1, `K` trivial) with `expected(n)`.
pub fn check_identity(
    system: &dyn LeafSystem,
    truncation: usize,
    expected: impl Fn(usize) -> Result<GroupMeasure>,
) -> Result<IdentityReport> {
    let mut comparisons = Vec::with_capacity(truncation);
    let mut first_failure = None;
    for n in 1..=truncation {
        let zeta = pushforward_measure(system, n, &Density::Uniform, KGroup::Trivial)?;
        let target = expected(n)?;
        let diff = first_difference(&zeta, &target);
        if let (None, Some((element, lhs, rhs))) = (&first_failure, &diff) {
            first_failure = Some(Discrepancy {
                instance: system.name().to_string(),
                n,
                element: element.clone(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
            });
        }
        comparisons.push(Comparison {
            instance: system.name().to_string(),
            n,
            equal: diff.is_none(),
            pushforward: zeta,
            closed_form: target,
        });
    }
    Ok(IdentityReport {
        passed: first_failure.is_none(),
        first_failure,
        comparisons,
    })
}

/// Runs [`check_identity`] for each instance against its [`closed_form`].
pub fn check_identities(instances: &[RelationInstance], truncation: usize) -> Result<IdentityReport> {
    let mut all = IdentityReport {
        passed: true,
        first_failure: None,
        comparisons: Vec::new(),
    };
    for inst in instances {
        let report = check_identity(inst, truncation, |n| closed_form(inst, n))?;
        if all.first_failure.is_none() {
            all.first_failure = report.first_failure;
        }
        all.passed &= report.passed;
        all.comparisons.extend(report.comparisons);
    }
    Ok(all)
}
