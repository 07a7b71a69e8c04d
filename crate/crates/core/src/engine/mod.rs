//! Finite measure-preserving actions of `F_r` and everything evaluated on
//! them: the operators `π_X(ζ)`, conditional expectations onto `F`- and
//! `F²`-invariant sets, leafwise averages, the push-forward family, maximal
//! functions, the skew-product ergodicity probe, convergence tables and the
//! closed-form identities of the three relation instances.

mod action;
mod convergence;
mod identities;
mod leafwise;
mod maximal;
mod operators;
mod pushforward;
mod skew;

pub use action::{FiniteAction, Observable};
pub use convergence::{
    convergence_experiment, convergence_from_spec, rows_to_csv, sphere_convergence, ConvergenceRow, SphereFamily,
};
pub use identities::{
    check_identities, check_identity, closed_form, first_difference, Comparison, Discrepancy, IdentityReport,
};
pub use leafwise::{leafwise_average, leafwise_integral, CellTable, SkewObservable};
pub use maximal::{maximal_function, MaximalReport, StrongRatio};
pub use operators::{apply_measure_operator, conditional_expectation, orbit_labels, sphere_sum_sequence, Subgroup};
pub use pushforward::{pushforward_family, pushforward_measure, Density, KGroup, PushforwardSpec};
pub use skew::skew_ergodicity_check;
