//! Exact, finite-resolution construction of pointwise ergodic families on the
//! free group `F_r`.
//!
//! The crate builds probability measures on `F_r` by pushing leafwise averages
//! on amenable equivalence relations forward through a cocycle, and checks the
//! resulting ergodic theorems on finite measure-preserving actions. Everything
//! is exact rational arithmetic: boundary integrals are finite sums over
//! cylinder partitions at the depth where the integrand becomes constant.
//!
//! Module map:
//!
//! * [`free_group`] reduced words, spheres, the tree horofunction.
//! * [`measures`] finitely supported probability measures and convolution.
//! * [`boundary`] the boundary `∂F` with its cylinder measure, the boundary
//!   action and its Radon–Nikodym cocycle, and the double boundary.
//! * [`maharam`] the discrete Maharam extension of the boundary action.
//! * [`relations`] the three relation instances with cocycles and leafwise
//!   weights (`TAIL`, `RANDOM_WALK`, `DOUBLE_BOUNDARY_SHIFT`).
//! * [`engine`] finite actions, averaging operators, conditional
//!   expectations, the push-forward family, maximal functions and
//!   convergence tables.

pub mod boundary;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod free_group;
pub mod maharam;
pub mod measures;
pub mod rational;
pub mod relations;

pub use engine::{FiniteAction, Observable};
pub use error::{Error, Result};
pub use free_group::{FreeGroup, Generator, ReducedWord};
pub use measures::GroupMeasure;
pub use rational::Q;
pub use relations::{InstanceKind, RelationInstance};

/// Default ceiling on the number of items any single enumeration may produce.
pub const DEFAULT_CAP: u64 = 10_000_000;
