//! Least-squares fits of the growth laws.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{self, CsvDocument, Header};
use crate::scalar::Scalar;
use crate::series::TimeSeries;

/// Minimum number of points for [`fit_log_correction`].
pub const LOG_FIT_MIN_POINTS: usize = 10;
/// Minimum number of points for [`fit_power_law`].
pub const POWER_FIT_MIN_POINTS: usize = 5;

const FIT_KIND: &str = "scaling_fit";
const FIT_COLUMNS: [&str; 7] = [
    "a",
    "b",
    "t_min",
    "t_max",
    "residual_rms",
    "relative_residual",
    "points",
];

/// Ordinary least squares `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line<T> {
    pub slope: T,
    pub intercept: T,
    pub residual_rms: T,
    pub mean_y: T,
}

pub fn fit_line<T: Scalar>(xs: &[T], ys: &[T]) -> Result<Line<T>> {
    assert_eq!(xs.len(), ys.len());
    let n = T::of_usize(xs.len());
    if xs.len() < 2 {
        return Err(Error::InsufficientData(format!("{} points for a line", xs.len())));
    }
    let mean_x = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let mean_y = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mean_x) * (x - mean_x);
        sxy = sxy + (x - mean_x) * (y - mean_y);
    }
    if !(sxx > T::zero()) {
        return Err(Error::Fit("all abscissae are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss = xs.iter().zip(ys).fold(T::zero(), |a, (&x, &y)| {
        let r = y - (slope * x + intercept);
        a + r * r
    });
    Ok(Line {
        slope,
        intercept,
        residual_rms: (ss / n).sqrt(),
        mean_y,
    })
}

/// Constants of `PR = a·t/(b + ln t)` over a time window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit<T> {
    pub a: T,
    pub b: T,
    pub fit_window: (usize, usize),
    /// RMS residual of `t/PR` about the fitted line.
    pub residual_rms: T,
    /// `residual_rms` divided by the mean of `t/PR`.
    pub relative_residual: T,
    pub points: usize,
}

/// Fits `PR = a·t/(b + ln t)` to the records with `t_min ≤ t ≤ t_max`.
///
/// The law is linear in `y = t/PR` against `x = ln t` with slope `1/a` and
/// intercept `b/a`. A series without logarithmic growth (`PR ∝ t`) has a
/// vanishing slope and is rejected rather than reported with a huge `a`.
pub fn fit_log_correction<T: Scalar>(
    series: &TimeSeries<T>,
    window: (usize, usize),
) -> Result<ScalingFit<T>> {
    let (t_min, t_max) = window;
    let records: Vec<_> = series.window(t_min, t_max).filter(|r| r.t > 0).collect();
    if records.len() < LOG_FIT_MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} records in [{t_min}, {t_max}], need {LOG_FIT_MIN_POINTS}",
            records.len()
        )));
    }
    if let Some(r) = records.iter().find(|r| !(r.pr > T::zero())) {
        return Err(Error::Fit(format!("pr = {} at t = {}", r.pr, r.t)));
    }
    let xs: Vec<T> = records.iter().map(|r| T::of_usize(r.t).ln()).collect();
    let ys: Vec<T> = records.iter().map(|r| T::of_usize(r.t) / r.pr).collect();
    let line = fit_line(&xs, &ys)?;
    let span = xs[xs.len() - 1] - xs[0];
    // Change of the fitted line across the window, relative to its level.
    let growth = line.slope * span / line.mean_y.abs();
    if !(growth > T::of(1e-9)) {
        return Err(Error::Fit(format!(
            "t/PR does not grow with ln t (slope {:e}); no logarithmic correction in the window",
            line.slope.as_f64()
        )));
    }
    let a = T::one() / line.slope;
    let b = line.intercept * a;
    let first = records[0].t;
    if !(b + T::of_usize(first).ln() > T::zero()) {
        return Err(Error::Fit(format!(
            "fitted b = {} makes b + ln t non-positive at t = {first}",
            b
        )));
    }
    Ok(ScalingFit {
        a,
        b,
        fit_window: window,
        residual_rms: line.residual_rms,
        relative_residual: line.residual_rms / line.mean_y.abs(),
        points: records.len(),
    })
}

impl<T: Scalar> ScalingFit<T> {
    pub fn predict(&self, t: T) -> T {
        self.a * t / (self.b + t.ln())
    }

    /// `λ(t) = d ln PR / d ln t = 1 − 1/(b + ln t)`.
    pub fn effective_exponent(&self, t: T) -> T {
        T::one() - T::one() / (self.b + t.ln())
    }

    pub fn to_csv_string(&self) -> String {
        let mut header = Header::new(FIT_KIND);
        header.push("law", "pr = a*t/(b + ln t)");
        let mut out = header.render();
        out.push_str(&FIT_COLUMNS.join(","));
        out.push('\n');
        let row = [
            format::real(self.a.as_f64()),
            format::real(self.b.as_f64()),
            self.fit_window.0.to_string(),
            self.fit_window.1.to_string(),
            format::real(self.residual_rms.as_f64()),
            format::real(self.relative_residual.as_f64()),
            self.points.to_string(),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let doc = CsvDocument::parse(FIT_KIND, text)?;
        doc.expect_columns(FIT_KIND, &FIT_COLUMNS)?;
        let [(line, row)] = doc.rows.as_slice() else {
            return Err(Error::Parse {
                kind: FIT_KIND,
                line: 0,
                message: format!("expected one row, found {}", doc.rows.len()),
            });
        };
        let real = |i: usize| -> Result<T> { Ok(T::of(format::field::<f64>(FIT_KIND, *line, &row[i])?)) };
        Ok(ScalingFit {
            a: real(0)?,
            b: real(1)?,
            fit_window: (
                format::field(FIT_KIND, *line, &row[2])?,
                format::field(FIT_KIND, *line, &row[3])?,
            ),
            residual_rms: real(4)?,
            relative_residual: real(5)?,
            points: format::field(FIT_KIND, *line, &row[6])?,
        })
    }
}

/// `value = prefactor · t^exponent` fitted in log-log coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit<T> {
    pub exponent: T,
    pub prefactor: T,
    /// RMS residual of `ln value`.
    pub residual_rms: T,
    pub window: (T, T),
    pub points: usize,
}

/// Least-squares slope of `ln value` against `ln t` for samples with
/// `window.0 ≤ t ≤ window.1`.
pub fn fit_power_law<T: Scalar>(samples: &[(T, T)], window: (T, T)) -> Result<PowerLawFit<T>> {
    let inside: Vec<(T, T)> = samples
        .iter()
        .copied()
        .filter(|&(t, _)| t >= window.0 && t <= window.1)
        .collect();
    if inside.len() < POWER_FIT_MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} samples in [{}, {}], need {POWER_FIT_MIN_POINTS}",
            inside.len(),
            window.0,
            window.1
        )));
    }
    if let Some((t, v)) = inside.iter().find(|(t, v)| !(*v > T::zero()) || !(*t > T::zero())) {
        return Err(Error::Fit(format!("non-positive sample ({t}, {v}) in power-law window")));
    }
    let xs: Vec<T> = inside.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<T> = inside.iter().map(|(_, v)| v.ln()).collect();
    let line = fit_line(&xs, &ys)?;
    Ok(PowerLawFit {
        exponent: line.slope,
        prefactor: line.intercept.exp(),
        residual_rms: line.residual_rms,
        window,
        points: inside.len(),
    })
}
