use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use ergfam::boundary::{
    alpha_prime, boundary_action, dbl_measure, markov_cylinder_measure, phi_embed, r_lambda, rn_derivative,
    BoundaryPoint, Cylinder, ProductCylinder, TwoSidedCylinder,
};
use ergfam::engine::{
    apply_measure_operator, conditional_expectation, pushforward_family, Density, PushforwardSpec, Subgroup,
};
use ergfam::measures::sphere_uniform;
use ergfam::rational::{q, Q};
use ergfam::relations::{tail_neighborhood, Cell};
use ergfam::{FiniteAction, FreeGroup, Generator, GroupMeasure, Observable, ReducedWord, RelationInstance};

fn letters(rank: u8, max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec((1..=rank, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(i, inv)| Generator::new(i, inv).unwrap()).collect())
}

fn word(rank: u8, max_len: usize) -> impl Strategy<Value = ReducedWord> {
    letters(rank, max_len).prop_map(ReducedWord::reduce)
}

fn point(rank: u8) -> impl Strategy<Value = BoundaryPoint> {
    (
        letters(rank, 5),
        letters(rank, 3).prop_filter("nonempty period", |p| !p.is_empty()),
    )
        .prop_filter_map("admissible point", |(pre, per)| BoundaryPoint::new(pre, per).ok())
}

/// An admissible letter sequence of the given length, built by a choice
/// among the `2r − 1` allowed successors at each step.
fn admissible(rank: u8, len: usize) -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec(0..(2 * rank as usize), len).prop_map(move |choices| {
        let all = Generator::all(rank);
        let mut out: Vec<Generator> = Vec::with_capacity(choices.len());
        for c in choices {
            let allowed: Vec<Generator> = all
                .iter()
                .copied()
                .filter(|s| out.last().is_none_or(|&p| p.inverse() != *s))
                .collect();
            out.push(allowed[c % allowed.len()]);
        }
        out
    })
}

fn cylinder(rank: u8, depth: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Cylinder> {
    depth
        .prop_flat_map(move |d| admissible(rank, d))
        .prop_map(|p| Cylinder::new(p).unwrap())
}

fn window(rank: u8, start: i64, len: usize) -> impl Strategy<Value = TwoSidedCylinder> {
    admissible(rank, len).prop_map(move |l| TwoSidedCylinder::new(start, l).unwrap())
}

fn action() -> impl Strategy<Value = FiniteAction> {
    (1usize..8).prop_flat_map(|n| {
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (perm.clone(), perm).prop_map(|(a, b)| FiniteAction::uniform(vec![a, b]).unwrap())
    })
}

fn measure(rank: u8) -> impl Strategy<Value = GroupMeasure> {
    prop::collection::vec((word(rank, 3), 1i64..6), 1..5).prop_map(|entries| {
        let mut raw: BTreeMap<ReducedWord, i64> = BTreeMap::new();
        for (w, m) in entries {
            *raw.entry(w).or_default() += m;
        }
        let total: i64 = raw.values().sum();
        GroupMeasure::new(raw.into_iter().map(|(w, m)| (w, q(m, total))).collect()).unwrap()
    })
}

fn observable(n: usize) -> impl Strategy<Value = Observable> {
    prop::collection::vec((-20i64..20, 1i64..5), n)
        .prop_map(|v| Observable::new(v.into_iter().map(|(a, b)| q(a, b)).collect()))
}

fn action_and_observable() -> impl Strategy<Value = (FiniteAction, Observable)> {
    action().prop_flat_map(|a| {
        let n = a.len();
        (Just(a), observable(n))
    })
}

proptest! {
    #[test]
    fn rn_chain_rule_and_additivity(xi in point(2), g in word(2, 4), h in word(2, 4)) {
        let group = FreeGroup::new(2).unwrap();
        let (h_xi, _) = boundary_action(&h, &xi);
        let gh = g.mul(&h);
        prop_assert_eq!(
            rn_derivative(&group, &gh, &xi),
            rn_derivative(&group, &g, &h_xi) * rn_derivative(&group, &h, &xi)
        );
        prop_assert_eq!(r_lambda(&group, &gh, &xi), r_lambda(&group, &g, &h_xi) + r_lambda(&group, &h, &xi));
        let (back, _) = boundary_action(&gh.inverse(), &boundary_action(&gh, &xi).0);
        prop_assert_eq!(back, xi);
    }

    #[test]
    fn markov_refinement_both_sides(tc in (0usize..6).prop_flat_map(|len| window(3, -2, len))) {
        let group = FreeGroup::new(3).unwrap();
        let m = markov_cylinder_measure(&group, &tc);
        let right: Q = tc.extend_right(&group).iter().map(|e| markov_cylinder_measure(&group, e)).sum();
        let left: Q = tc.extend_left(&group).iter().map(|e| markov_cylinder_measure(&group, e)).sum();
        prop_assert_eq!(&right, &m);
        prop_assert_eq!(&left, &m);
        prop_assert_eq!(markov_cylinder_measure(&group, &tc.shift(5)), m);
    }

    #[test]
    fn double_boundary_measure_is_invariant(
        b in cylinder(2, 3..=5),
        c in cylinder(2, 3..=5),
        g in word(2, 2),
    ) {
        let group = FreeGroup::new(2).unwrap();
        let pc = ProductCylinder::new(b, c);
        if let Ok(before) = dbl_measure(&group, &pc) {
            prop_assert_eq!(dbl_measure(&group, &pc.act(&g).unwrap()).unwrap(), before);
        }
    }

    #[test]
    fn shift_cocycle_law(xi in window(2, -6, 12), m in -3i64..=3, n in -3i64..=3) {
        let lhs = alpha_prime(m + n, &xi).unwrap();
        let rhs = alpha_prime(m, &xi.shift(n)).unwrap().mul(&alpha_prime(n, &xi).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_is_positive_unital_and_contracting(
        (act, f) in action_and_observable(),
        zeta in measure(2),
    ) {
        let n = act.len();
        let one = Observable::constant(n, Q::one());
        prop_assert_eq!(apply_measure_operator(&zeta, &one, &act), one);
        let out = apply_measure_operator(&zeta, &f.abs(), &act);
        prop_assert!(out.values.iter().all(|v| *v >= Q::zero()));
        let image = apply_measure_operator(&zeta, &f, &act);
        prop_assert!(image.norm_pow(&act, 1) <= f.norm_pow(&act, 1));
        // measure preservation: the mean is unchanged
        prop_assert_eq!(image.mean(&act), f.mean(&act));
    }

    #[test]
    fn convolution_covariance((act, f) in action_and_observable(), z1 in measure(2), z2 in measure(2)) {
        let conv = z1.convolve(&z2, 1_000_000).unwrap();
        let lhs = apply_measure_operator(&conv, &f, &act);
        let rhs = apply_measure_operator(&z1, &apply_measure_operator(&z2, &f, &act), &act);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn even_conditional_expectation((act, f) in action_and_observable(), n in 1usize..3) {
        let e = conditional_expectation(&f, &act, Subgroup::Even);
        prop_assert_eq!(&conditional_expectation(&e, &act, Subgroup::Even), &e);
        let sigma = sphere_uniform(&FreeGroup::new(2).unwrap(), 2 * n).unwrap();
        prop_assert_eq!(&apply_measure_operator(&sigma, &e, &act), &e);
        let full = conditional_expectation(&f, &act, Subgroup::Full);
        prop_assert_eq!(conditional_expectation(&e, &act, Subgroup::Full), full);
        prop_assert_eq!(e.mean(&act), f.mean(&act));
    }

    #[test]
    fn pushforward_with_density_is_a_probability(raw in prop::collection::vec(0i64..5, 4)) {
        prop_assume!(raw.iter().any(|&v| v > 0));
        let group = FreeGroup::new(2).unwrap();
        // each depth-1 cylinder has mass 1/4, so ψ = 4·v/Σv integrates to 1
        let total: i64 = raw.iter().sum();
        let values = Generator::all(2)
            .into_iter()
            .zip(&raw)
            .map(|(s, &v)| (vec![ReducedWord::generator(s)], q(4 * v, total)))
            .collect();
        let mut spec = PushforwardSpec::new(RelationInstance::tail(group), 2);
        spec.density = Density::Table { depth: 1, values };
        for zeta in pushforward_family(&spec).unwrap() {
            prop_assert!(zeta.mass().is_one());
            prop_assert!(zeta.support().all(|w| w.len() % 2 == 0));
        }
    }
}

#[test]
fn domain_dichotomy() {
    let group = FreeGroup::new(2).unwrap();
    let cyls = Cylinder::all(&group, 5).unwrap();
    let elements = group.ball(3).unwrap();
    let mut returns = 0;
    for b in &cyls {
        for c in &cyls {
            let pc = ProductCylinder::new(b.clone(), c.clone());
            if !pc.in_domain() {
                continue;
            }
            let phi = phi_embed(b, c).unwrap();
            for g in &elements {
                let image = pc.act(g).unwrap();
                if !image.in_domain() {
                    continue;
                }
                returns += 1;
                let n = g.len();
                let b_prefix = ReducedWord::from_reduced(b.prefix()[..n].to_vec()).unwrap().inverse();
                let c_prefix = ReducedWord::from_reduced(c.prefix()[..n].to_vec()).unwrap().inverse();
                let s = if *g == c_prefix {
                    n as i64
                } else if *g == b_prefix {
                    -(n as i64)
                } else {
                    panic!("{g} returns {pc} to D without being a prefix inverse");
                };
                assert_eq!(alpha_prime(s, &phi).unwrap(), *g);
                assert_eq!(phi_embed(&image.b, &image.c).unwrap(), phi.shift(s), "{g} on {pc}");
            }
        }
    }
    // every rectangle returns under e and the six words (b_1⋯b_n)⁻¹, (c_1⋯c_n)⁻¹
    let rectangles = 12 * 81 * 81;
    assert_eq!(returns, rectangles * 7);
}

#[test]
fn tail_neighbors_preserve_measure_class() {
    for r in [2u8, 3] {
        let group = FreeGroup::new(r).unwrap();
        for n in 1..=3 {
            for c in Cylinder::all(&group, n + 1).unwrap() {
                let nbhd = tail_neighborhood(&group, n, &c).unwrap();
                let expected = (2 * r as usize - 2) * (2 * r as usize - 1).pow(n as u32 - 1);
                assert_eq!(nbhd.len(), expected);
                for nb in &nbhd.neighbors {
                    assert_eq!(nb.cocycle.len() % 2, 0);
                    let Cell::Boundary(target) = &nb.cell else {
                        unreachable!()
                    };
                    let xi = c.representative();
                    assert_eq!(rn_derivative(&group, &nb.cocycle, &xi), Q::one());
                    assert!(boundary_action(&nb.cocycle, &xi).0.cylinder(target.depth()) == *target);
                }
            }
        }
    }
}
