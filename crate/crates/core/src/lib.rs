//! Simulation and analysis of the one-parameter three-state quantum walk on
//! a line.
//!
//! The walk evolves a walker with internal states `L`, `S`, `R` by a coin
//! C(ρ) followed by a conditional shift. Inputs are symmetric mixtures
//! `cos θ |S⟩ + sin θ (|L⟩ + |R⟩)/√2` at the origin; at the detrapping angle
//! θ_c(ρ) no part of the wavepacket stays trapped. The crate measures the
//! survival probability and participation ratio, fits their growth laws,
//! scores scaling collapses near θ_c, and provides analytic asymptotics to
//! compare against.
//!
//! The numerical core is generic over the real type (`f32`/`f64`) and over
//! the amplitude type (real or complex). The aliases below fix the usual
//! double-precision choices.

// NaN must fail range checks, and small fixed-size matrix code reads best indexed.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod coin;
pub mod error;
pub mod format;
mod fpmode;
pub mod observables;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod sweep;
pub mod walk;

pub use coin::{theta_c, CoinOperator, CoinParameter, InputDecomposition, MixingAngle};
pub use error::{Error, Result};
pub use observables::{SpatialDistribution, WavefrontSample};
pub use scalar::{Amplitude, Scalar};
pub use series::{Record, RunMetadata, TimeSeries};
pub use walk::{
    evolve, evolve_with, initial_state, stationary_limits, Cadence, EvolveOptions, Evolution, StationarySample, WalkState,
};

pub use num_complex::Complex64;

pub type Rho = CoinParameter<f64>;
pub type Theta = MixingAngle<f64>;
pub type Coin = CoinOperator<f64>;
/// Real-amplitude walk; exact for every θ-parameterized input.
pub type RealWalk = WalkState<f64>;
pub type ComplexWalk = WalkState<Complex64>;
pub type Distribution = SpatialDistribution<f64>;
pub type Series = TimeSeries<f64>;
