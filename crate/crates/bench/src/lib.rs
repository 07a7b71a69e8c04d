//! Shared fixtures for the benchmarks.

use ergfam::rational::q;
use ergfam::{FiniteAction, FreeGroup, GroupMeasure, Observable};

pub fn f2() -> FreeGroup {
    FreeGroup::new(2).expect("rank 2 is valid")
}

/// ℤ/101 with `a: +1, b: +2` and the centred indicator of 0.
pub fn z101() -> (FiniteAction, Observable) {
    let act = FiniteAction::cyclic(101, &[1, 2]).expect("rotations are permutations");
    let f = Observable::indicator(101, 0).shift(&q(-1, 101));
    (act, f)
}

/// A lazy non-symmetric step distribution.
pub fn skewed_kappa() -> GroupMeasure {
    let w = |s: &str| s.parse().expect("fixture word");
    GroupMeasure::new(
        [
            (w("e"), q(1, 4)),
            (w("a"), q(1, 4)),
            (w("b"), q(1, 3)),
            (w("AB"), q(1, 6)),
        ]
        .into(),
    )
    .expect("fixture masses sum to one")
}
