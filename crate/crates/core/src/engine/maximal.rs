use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::action::{FiniteAction, Observable};
use super::operators::apply_measure_operator;
use crate::error::{Error, Result};
use crate::measures::GroupMeasure;
use crate::rational::{self, Q};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongRatio {
    pub p: u32,
    /// `‖M‖_p^p / ‖f‖_p^p`, exact.
    #[serde(with = "rational::serde_q")]
    pub ratio_pow: Q,
    /// `‖M‖_p / ‖f‖_p`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalReport {
    /// `sup_{t>0} t·μ{M ≥ t} / ‖f‖₁`, exact.
    #[serde(with = "rational::serde_q")]
    pub weak_ratio: Q,
    pub weak_ratio_f64: f64,
    pub strong: Vec<StrongRatio>,
    #[serde(with = "rational::serde_q")]
    pub l1_norm: Q,
    /// `Σ μ(x)|f(x)| log⁺|f(x)|`.
    pub llogl_norm: f64,
}

/// `M(x) = max_i π_X(ζ_i)|f|(x)` with its empirical maximal-inequality ratios.
pub fn maximal_function(
    family: &[GroupMeasure],
    f: &Observable,
    act: &FiniteAction,
) -> Result<(Observable, MaximalReport)> {
    if family.is_empty() {
        return Err(Error::InvalidInput("maximal function of an empty family".into()));
    }
    if f.len() != act.len() {
        return Err(Error::InvalidInput("observable length differs from the action".into()));
    }
    let abs = f.abs();
    let mut m = vec![Q::zero(); act.len()];
    for zeta in family {
        let avg = apply_measure_operator(zeta, &abs, act);
        for (slot, v) in m.iter_mut().zip(avg.values) {
            if v > *slot {
                *slot = v;
            }
        }
    }
    let m = Observable::new(m);
    let l1 = abs.mean(act);

    // t·μ{M ≥ t} is maximised at a value of M
    let mut levels: Vec<Q> = m.values.iter().filter(|v| v.is_positive()).cloned().collect();
    levels.sort();
    levels.dedup();
    let mut weak = Q::zero();
    for t in &levels {
        let tail: Q = m
            .values
            .iter()
            .zip(act.weights())
            .filter(|(v, _)| *v >= t)
            .map(|(_, w)| w.clone())
            .sum();
        weak = weak.max(t * tail);
    }
    let ratio = |num: Q, den: &Q| if den.is_zero() { Q::zero() } else { num / den };
    let weak_ratio = ratio(weak, &l1);
    let strong = [2u32, 4]
        .into_iter()
        .map(|p| {
            let ratio_pow = ratio(m.norm_pow(act, p), &f.norm_pow(act, p));
            StrongRatio {
                p,
                ratio: rational::to_f64(&ratio_pow).powf(1.0 / p as f64),
                ratio_pow,
            }
        })
        .collect();
    let llogl_norm = abs
        .values
        .iter()
        .zip(act.weights())
        .map(|(v, w)| {
            let x = rational::to_f64(v);
            if *v > Q::one() {
                rational::to_f64(w) * x * x.ln()
            } else {
                0.0
            }
        })
        .sum();
    let report = MaximalReport {
        weak_ratio_f64: rational::to_f64(&weak_ratio),
        weak_ratio,
        strong,
        l1_norm: l1,
        llogl_norm,
    };
    Ok((m, report))
}
