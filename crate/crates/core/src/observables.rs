//! Occupation distribution, survival probability, participation ratio,
//! effective growth exponent and wavefront diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{self, CsvDocument, Header};
use crate::scalar::{Amplitude, Scalar};
use crate::series::TimeSeries;
use crate::walk::WalkState;

/// Relative change over a factor-2 window below which an observable counts
/// as saturated.
pub const SATURATION_TOLERANCE: f64 = 1e-3;

/// Wavefront samples before this step are early-time transients.
pub const FRONT_TRANSIENT_CUTOFF: usize = 50;

/// Occupation probabilities `P_x` on the sites `-radius..=radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialDistribution<T> {
    time: usize,
    radius: usize,
    probabilities: Vec<T>,
}

impl<T: Scalar> SpatialDistribution<T> {
    /// `probabilities` has odd length and is centred on the origin.
    pub fn new(time: usize, probabilities: Vec<T>) -> Result<Self> {
        if probabilities.len().is_multiple_of(2) {
            return Err(Error::Config(format!(
                "distribution must have odd length, got {}",
                probabilities.len()
            )));
        }
        if probabilities.iter().any(|p| !(*p >= T::zero())) {
            return Err(Error::Precondition("negative or NaN probability".into()));
        }
        Ok(SpatialDistribution {
            time,
            radius: probabilities.len() / 2,
            probabilities,
        })
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn at(&self, x: isize) -> T {
        if x.unsigned_abs() > self.radius {
            return T::zero();
        }
        self.probabilities[(x + self.radius as isize) as usize]
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// `(x, P_x)` pairs from left to right.
    pub fn iter(&self) -> impl Iterator<Item = (isize, T)> + '_ {
        let r = self.radius as isize;
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as isize - r, p))
    }

    pub fn total(&self) -> T {
        self.probabilities
            .iter()
            .fold(T::zero(), |acc, &p| acc + p)
    }

    /// Number of sites with nonzero probability.
    pub fn support_size(&self) -> usize {
        self.probabilities.iter().filter(|p| **p > T::zero()).count()
    }
}

const DISTRIBUTION_KIND: &str = "distribution";

impl<T: Scalar> SpatialDistribution<T> {
    /// CSV with columns `x, p`. `extra` entries are added to the header after
    /// the step and are ignored when reading back.
    pub fn to_csv_string(&self, extra: &[(&str, String)]) -> String {
        let mut h = Header::new(DISTRIBUTION_KIND);
        h.push("t", self.time);
        for (k, v) in extra {
            h.push(k, v);
        }
        let mut out = h.render();
        out.push_str("x,p\n");
        for (x, p) in self.iter() {
            out.push_str(&format!("{x},{}\n", format::real(p.as_f64())));
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let doc = CsvDocument::parse(DISTRIBUTION_KIND, text)?;
        doc.expect_columns(DISTRIBUTION_KIND, &["x", "p"])?;
        let time = doc.header_value(DISTRIBUTION_KIND, "t")?;
        let radius = doc.rows.len() / 2;
        let mut probabilities = Vec::with_capacity(doc.rows.len());
        for (i, (line, f)) in doc.rows.iter().enumerate() {
            let x: isize = format::field(DISTRIBUTION_KIND, *line, &f[0])?;
            if x != i as isize - radius as isize {
                return Err(Error::Parse {
                    kind: DISTRIBUTION_KIND,
                    line: *line,
                    message: format!("site {x} out of sequence"),
                });
            }
            let p: f64 = format::field(DISTRIBUTION_KIND, *line, &f[1])?;
            probabilities.push(T::of(p));
        }
        SpatialDistribution::new(time, probabilities)
    }
}

pub fn distribution<A: Amplitude>(state: &WalkState<A>) -> SpatialDistribution<A::Real> {
    SpatialDistribution {
        time: state.time(),
        radius: state.radius(),
        probabilities: state.site_probabilities(),
    }
}

/// SP(t) = P₀(t).
pub fn survival_probability<T: Scalar>(dist: &SpatialDistribution<T>) -> T {
    dist.at(0)
}

/// PR = 1 / Σ_x P_x².
pub fn participation_ratio<T: Scalar>(dist: &SpatialDistribution<T>) -> T {
    let ipr = dist
        .probabilities
        .iter()
        .fold(T::zero(), |acc, &p| acc + p * p);
    T::one() / ipr
}

/// Local log-log slope λ = Δ ln PR / Δ ln t of a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSample<T> {
    /// Geometric midpoint √(t₁ t₂) of the pair.
    pub t: T,
    pub lambda: T,
}

/// Finite-difference effective exponent, pairing each usable record with the
/// one `pair_spacing` records later. Records with `t = 0` or a non-positive
/// PR are skipped.
pub fn effective_exponent<T: Scalar>(
    series: &TimeSeries<T>,
    pair_spacing: usize,
) -> Result<Vec<ExponentSample<T>>> {
    let points: Vec<(T, T)> = series
        .records()
        .iter()
        .filter(|r| r.t > 0 && r.pr > T::zero())
        .map(|r| (T::of_usize(r.t), r.pr))
        .collect();
    let spacing = pair_spacing.max(1);
    if points.len() < spacing + 1 {
        return Err(Error::InsufficientData(format!(
            "{} usable records, need at least {} for pair spacing {spacing}",
            points.len(),
            spacing + 1
        )));
    }
    Ok(points
        .iter()
        .zip(&points[spacing..])
        .map(|(&(t1, p1), &(t2, p2))| ExponentSample {
            t: (t1 * t2).sqrt(),
            lambda: (p2.ln() - p1.ln()) / (t2.ln() - t1.ln()),
        })
        .collect())
}

/// Position and height of the right wavefront maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavefrontSample<T> {
    pub t: usize,
    pub x_m: usize,
    /// ρt − x_m; positive once the front has left the transient regime.
    pub delta: T,
    pub p_front: T,
}

/// Right wavefront: the argmax of `P_x` over `x ∈ [1, t]`. Ties go to the
/// largest `x`, the outermost front.
pub fn wavefront<T: Scalar>(dist: &SpatialDistribution<T>, rho: T) -> Result<WavefrontSample<T>> {
    let t = dist.time;
    let mut best: Option<(usize, T)> = None;
    for x in 1..=t.min(dist.radius) {
        let p = dist.at(x as isize);
        if best.is_none_or(|(_, q)| p >= q) {
            best = Some((x, p));
        }
    }
    match best {
        Some((x_m, p_front)) if p_front > T::zero() => Ok(WavefrontSample {
            t,
            x_m,
            delta: rho * T::of_usize(t) - T::of_usize(x_m),
            p_front,
        }),
        _ => Err(Error::UndefinedFront { t }),
    }
}

/// Saturation test on `(t, value)` samples with last time `T`: the mean
/// over samples in `(T/2, T]` and the mean over `(T/4, T/2]` must agree to
/// [`SATURATION_TOLERANCE`] relative. Averaging over each window removes the
/// persistent oscillation left by interference between trapped and spreading
/// amplitude. Both windows need at least one sample.
pub fn is_saturated<T: Scalar>(samples: &[(usize, T)]) -> bool {
    let Some(&(t_end, _)) = samples.last() else {
        return false;
    };
    // Window bounds in units of t/4 so that any `T` splits exactly.
    let mean = |lo: usize, hi: usize| {
        let (sum, n) = samples
            .iter()
            .filter(|(t, _)| 4 * t > lo && 4 * t <= hi)
            .fold((T::zero(), 0usize), |(s, n), &(_, v)| (s + v, n + 1));
        (n > 0).then(|| sum / T::of_usize(n))
    };
    let (Some(late), Some(early)) = (mean(2 * t_end, 4 * t_end), mean(t_end, 2 * t_end)) else {
        return false;
    };
    (late - early).abs() < T::of(SATURATION_TOLERANCE) * late.abs()
}

/// Saturation of the survival probability of a series.
pub fn sp_saturated<T: Scalar>(series: &TimeSeries<T>) -> bool {
    let samples: Vec<(usize, T)> = series.records().iter().map(|r| (r.t, r.sp)).collect();
    is_saturated(&samples)
}

/// Saturation of the participation ratio of a series.
pub fn pr_saturated<T: Scalar>(series: &TimeSeries<T>) -> bool {
    let samples: Vec<(usize, T)> = series.records().iter().map(|r| (r.t, r.pr)).collect();
    is_saturated(&samples)
}
