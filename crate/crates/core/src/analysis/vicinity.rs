//! Power laws of the saturated observables near θ_c.

use serde::{Deserialize, Serialize};

use crate::analysis::fit::{fit_power_law, PowerLawFit};
use crate::coin::{theta_c, CoinParameter};
use crate::error::{Error, Result};
use crate::observables::is_saturated;
use crate::scalar::Scalar;
use crate::walk::StationarySample;

/// Offsets `|θ − θ_c|` admitted by [`vicinity_exponents`]. Closer to θ_c the
/// finite-time crossover dominates; further away the vicinity laws no longer
/// apply.
pub const VICINITY_RANGE: (f64, f64) = (0.02, 0.3);

/// Saturated SP and PR at one angle, with the convergence history that
/// demonstrates saturation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturatedPoint<T> {
    pub theta: T,
    pub sp_history: Vec<(usize, T)>,
    pub pr_history: Vec<(usize, T)>,
}

impl<T: Scalar> SaturatedPoint<T> {
    pub fn from_stationary(theta: T, samples: &[StationarySample<T>]) -> Self {
        SaturatedPoint {
            theta,
            sp_history: samples.iter().map(|s| (s.t, s.sp)).collect(),
            pr_history: samples.iter().map(|s| (s.t, s.pr)).collect(),
        }
    }

    pub fn sp(&self) -> Option<T> {
        self.sp_history.last().map(|&(_, v)| v)
    }

    pub fn pr(&self) -> Option<T> {
        self.pr_history.last().map(|&(_, v)| v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VicinityExponents<T> {
    /// Fit of `SP_∞` against `|θ − θ_c|`.
    pub sp: PowerLawFit<T>,
    /// Fit of `PR_∞` against `|θ − θ_c|`.
    pub pr: PowerLawFit<T>,
    /// `+1` above θ_c, `-1` below.
    pub side: i8,
}

/// Log-log fits of `SP_∞` and `PR_∞` against `|θ − θ_c|`.
///
/// All points must lie on one side of θ_c with `|θ − θ_c|` inside
/// [`VICINITY_RANGE`], and both histories of every point must pass the
/// saturation detector.
pub fn vicinity_exponents<T: Scalar>(
    points: &[SaturatedPoint<T>],
    rho: CoinParameter<T>,
) -> Result<VicinityExponents<T>> {
    let tc = theta_c(rho).value();
    let (lo, hi) = (T::of(VICINITY_RANGE.0), T::of(VICINITY_RANGE.1));
    let tol = T::of(1e-12);
    let mut side = 0i8;
    let mut sp = Vec::with_capacity(points.len());
    let mut pr = Vec::with_capacity(points.len());
    for p in points {
        let offset = p.theta - tc;
        let d = offset.abs();
        if d < lo - tol || d > hi + tol {
            return Err(Error::Precondition(format!(
                "|theta - theta_c| = {d} outside [{lo}, {hi}]"
            )));
        }
        let s = if offset > T::zero() { 1 } else { -1 };
        if side != 0 && s != side {
            return Err(Error::Precondition(
                "vicinity samples must all lie on one side of theta_c".into(),
            ));
        }
        side = s;
        if !is_saturated(&p.sp_history) || !is_saturated(&p.pr_history) {
            return Err(Error::Precondition(format!(
                "observables at theta = {} have not saturated",
                p.theta
            )));
        }
        sp.push((d, p.sp().expect("saturated history is non-empty")));
        pr.push((d, p.pr().expect("saturated history is non-empty")));
    }
    let window = (T::zero(), T::infinity());
    Ok(VicinityExponents {
        sp: fit_power_law(&sp, window)?,
        pr: fit_power_law(&pr, window)?,
        side,
    })
}
