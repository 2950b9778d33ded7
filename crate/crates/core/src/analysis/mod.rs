//! Growth-law fits, scaling collapses and vicinity exponents.

pub mod collapse;
pub mod fit;
pub mod vicinity;

pub use collapse::{
    collapse, collapse_pr, collapse_quality, collapse_sp, CollapseResult, Observable, ScalingForm, Surface,
};
pub use fit::{fit_line, fit_log_correction, fit_power_law, Line, PowerLawFit, ScalingFit};
pub use vicinity::{vicinity_exponents, SaturatedPoint, VicinityExponents, VICINITY_RANGE};
