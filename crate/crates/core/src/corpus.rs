//! Finite actions shipped with the library.

use crate::engine::FiniteAction;

const ACTIONS: [(&str, &str); 3] = [
    ("z101", include_str!("../data/actions/z101.json")),
    ("z5", include_str!("../data/actions/z5.json")),
    ("perm7", include_str!("../data/actions/perm7.json")),
];

/// `(name, action)` for each bundled action of `F_2`: rotations of ℤ/101
/// and ℤ/5 by `a: +1, b: +2`, and a non-abelian action on seven points.
pub fn bundled_actions() -> Vec<(&'static str, FiniteAction)> {
    ACTIONS
        .iter()
        .map(|(name, text)| (*name, FiniteAction::from_json(text).expect("bundled action is valid")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{orbit_labels, Subgroup};

    #[test]
    fn bundled_actions_load() {
        let acts = bundled_actions();
        assert_eq!(acts.len(), 3);
        for (_, a) in &acts {
            assert_eq!(a.rank(), 2);
            // all three are transitive, even for the even-length subgroup
            assert!(orbit_labels(a, Subgroup::Even).iter().all(|&l| l == 0));
        }
        let perm7 = &acts[2].1;
        let ab: crate::ReducedWord = "ab".parse().unwrap();
        let ba: crate::ReducedWord = "ba".parse().unwrap();
        assert!((0..7).any(|x| perm7.apply(&ab, x) != perm7.apply(&ba, x)));
    }
}
