//! Single-parameter scaling collapses near θ_c.
//!
//! For each time slice the surface values are mapped to
//! `η = (θ − θ_c)·τ^p` and `y = v·τ^q`, where `τ` is either `t` or the
//! log-corrected `t̃ = t/(b + ln t)`. All curves are linearly interpolated
//! onto a uniform grid spanning the η range common to every slice, and the
//! collapse quality is
//!
//! ```text
//! quality = mean_η Var_t[y_t(η)] / mean_η (mean_t y_t(η))²
//! ```
//!
//! It vanishes for a perfect collapse and is unchanged by rescaling all
//! curves by a common factor.

use serde::{Deserialize, Serialize};

use crate::analysis::fit::fit_line;
use crate::coin::{theta_c, CoinParameter};
use crate::error::{Error, Result};
use crate::format::{self, CsvDocument, Header};
use crate::scalar::Scalar;
use crate::series::TimeSeries;

pub const DEFAULT_GRID_POINTS: usize = 201;

const COLLAPSE_KIND: &str = "collapse";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Sp,
    Pr,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Sp => "sp",
            Observable::Pr => "pr",
        }
    }
}

/// Values of one observable on a θ × t grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Surface<T> {
    thetas: Vec<T>,
    times: Vec<usize>,
    /// `values[i][j]` at `thetas[i]`, `times[j]`.
    values: Vec<Vec<T>>,
}

impl<T: Scalar> Surface<T> {
    /// Rows are sorted by θ; θ values must be distinct and every row must
    /// have one value per time.
    pub fn new(thetas: Vec<T>, times: Vec<usize>, values: Vec<Vec<T>>) -> Result<Self> {
        if thetas.len() != values.len() {
            return Err(Error::Precondition(format!(
                "{} thetas but {} rows of values",
                thetas.len(),
                values.len()
            )));
        }
        if let Some(row) = values.iter().find(|row| row.len() != times.len()) {
            return Err(Error::Precondition(format!(
                "row with {} values for {} times",
                row.len(),
                times.len()
            )));
        }
        if times.is_empty() || thetas.len() < 2 {
            return Err(Error::InsufficientData(
                "a surface needs at least one time and two angles".into(),
            ));
        }
        let mut rows: Vec<(T, Vec<T>)> = thetas.into_iter().zip(values).collect();
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        if rows.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Precondition("theta values must be distinct and finite".into()));
        }
        let (thetas, values) = rows.into_iter().unzip();
        Ok(Surface {
            thetas,
            times,
            values,
        })
    }

    /// Builds the surface from one series per θ, taking the records at
    /// `times`. Every series must contain every requested time.
    pub fn from_series(series: &[TimeSeries<T>], times: &[usize], observable: Observable) -> Result<Self> {
        let mut thetas = Vec::with_capacity(series.len());
        let mut values = Vec::with_capacity(series.len());
        for s in series {
            let theta = s.metadata().theta;
            let row = times
                .iter()
                .map(|&t| {
                    let r = s.record_at(t).ok_or_else(|| {
                        Error::Precondition(format!("series at theta = {theta} has no record at t = {t}"))
                    })?;
                    Ok(match observable {
                        Observable::Sp => r.sp,
                        Observable::Pr => r.pr,
                    })
                })
                .collect::<Result<Vec<T>>>()?;
            thetas.push(T::of(theta));
            values.push(row);
        }
        Surface::new(thetas, times.to_vec(), values)
    }

    pub fn thetas(&self) -> &[T] {
        &self.thetas
    }

    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn value(&self, theta_index: usize, time_index: usize) -> T {
        self.values[theta_index][time_index]
    }

    /// Values at one time, in θ order.
    pub fn slice(&self, time_index: usize) -> Vec<T> {
        self.values.iter().map(|row| row[time_index]).collect()
    }

    pub fn restrict_times(&self, times: &[usize]) -> Result<Self> {
        let idx: Vec<usize> = times
            .iter()
            .map(|t| {
                self.times
                    .iter()
                    .position(|s| s == t)
                    .ok_or_else(|| Error::Precondition(format!("surface has no time slice t = {t}")))
            })
            .collect::<Result<_>>()?;
        Ok(Surface {
            thetas: self.thetas.clone(),
            times: times.to_vec(),
            values: self
                .values
                .iter()
                .map(|row| idx.iter().map(|&j| row[j]).collect())
                .collect(),
        })
    }
}

/// `η = (θ − θ_c)·τ^eta_exponent`, `y = v·τ^amplitude_exponent`, with
/// `τ = t/(b + ln t)` when `log_offset = Some(b)` and `τ = t` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingForm<T> {
    pub eta_exponent: T,
    pub amplitude_exponent: T,
    pub log_offset: Option<T>,
}

impl<T: Scalar> ScalingForm<T> {
    /// `SP = t⁻¹ f[(θ − θ_c) t^{1/2}]`.
    pub fn survival() -> Self {
        ScalingForm {
            eta_exponent: T::of(0.5),
            amplitude_exponent: T::one(),
            log_offset: None,
        }
    }

    /// `PR = t̃ g[(θ − θ_c) t̃^{1/4}]`, `t̃ = t/(b + ln t)`.
    pub fn participation(b: T) -> Self {
        ScalingForm {
            eta_exponent: T::of(0.25),
            amplitude_exponent: -T::one(),
            log_offset: Some(b),
        }
    }

    pub fn tau(&self, t: usize) -> Result<T> {
        let t = T::of_usize(t);
        match self.log_offset {
            None => Ok(t),
            Some(b) => {
                let d = b + t.ln();
                if !(d > T::zero()) {
                    return Err(Error::Precondition(format!("b + ln t = {d} is not positive")));
                }
                Ok(t / d)
            }
        }
    }

    pub fn label(&self) -> String {
        let tau = match self.log_offset {
            None => "t".to_string(),
            Some(b) => format!("t/({} + ln t)", format::real(b.as_f64())),
        };
        format!(
            "eta = (theta - theta_c)*tau^{}, y = v*tau^{}, tau = {tau}",
            self.eta_exponent, self.amplitude_exponent
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseResult<T> {
    pub grid: Vec<T>,
    /// One curve per entry of `times_used`, sampled on `grid`.
    pub curves: Vec<Vec<T>>,
    pub quality: T,
    pub times_used: Vec<usize>,
    pub rho: T,
    pub form: ScalingForm<T>,
}

fn interpolate<T: Scalar>(xs: &[T], ys: &[T], x: T) -> T {
    let k = xs.partition_point(|&v| v <= x);
    if k == 0 {
        return ys[0];
    }
    if k == xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[k - 1], xs[k]);
    let w = (x - x0) / (x1 - x0);
    ys[k - 1] + w * (ys[k] - ys[k - 1])
}

/// Collapses every time slice of `surface` under `form` and scores it.
pub fn collapse<T: Scalar>(
    surface: &Surface<T>,
    rho: CoinParameter<T>,
    form: ScalingForm<T>,
    grid_points: usize,
) -> Result<CollapseResult<T>> {
    if grid_points < 2 {
        return Err(Error::Config(format!("collapse grid needs at least 2 points, got {grid_points}")));
    }
    let tc = theta_c(rho).value();
    let mut raw = Vec::with_capacity(surface.times().len());
    for (j, &t) in surface.times().iter().enumerate() {
        let tau = form.tau(t)?;
        let stretch = tau.powf(form.eta_exponent);
        let lift = tau.powf(form.amplitude_exponent);
        let eta: Vec<T> = surface.thetas().iter().map(|&th| (th - tc) * stretch).collect();
        let y: Vec<T> = surface.slice(j).into_iter().map(|v| v * lift).collect();
        raw.push((eta, y));
    }
    let lo = raw.iter().map(|(e, _)| e[0]).fold(T::neg_infinity(), T::max);
    let hi = raw.iter().map(|(e, _)| e[e.len() - 1]).fold(T::infinity(), T::min);
    if !(hi > lo) {
        return Err(Error::Collapse(format!(
            "scaled curves share no eta range (overlap [{lo}, {hi}])"
        )));
    }
    let step = (hi - lo) / T::of_usize(grid_points - 1);
    let grid: Vec<T> = (0..grid_points)
        .map(|i| if i + 1 == grid_points { hi } else { lo + step * T::of_usize(i) })
        .collect();
    let curves: Vec<Vec<T>> = raw
        .iter()
        .map(|(eta, y)| grid.iter().map(|&g| interpolate(eta, y, g)).collect())
        .collect();
    let quality = collapse_quality(&curves);
    Ok(CollapseResult {
        grid,
        curves,
        quality,
        times_used: surface.times().to_vec(),
        rho: rho.value(),
        form,
    })
}

/// Normalized cross-curve variance of curves sampled on a shared grid.
pub fn collapse_quality<T: Scalar>(curves: &[Vec<T>]) -> T {
    let n = curves.len();
    if n < 2 {
        return T::zero();
    }
    let points = curves[0].len();
    let nn = T::of_usize(n);
    let (mut var_sum, mut sq_sum) = (T::zero(), T::zero());
    for i in 0..points {
        let mean = curves.iter().fold(T::zero(), |a, c| a + c[i]) / nn;
        let var = curves
            .iter()
            .fold(T::zero(), |a, c| a + (c[i] - mean) * (c[i] - mean))
            / nn;
        var_sum = var_sum + var;
        sq_sum = sq_sum + mean * mean;
    }
    if !(sq_sum > T::zero()) {
        return T::zero();
    }
    var_sum / sq_sum
}

/// SP collapse under `(θ − θ_c)·t^{1/2}`, `SP·t`.
pub fn collapse_sp<T: Scalar>(surface: &Surface<T>, rho: CoinParameter<T>, times: &[usize]) -> Result<CollapseResult<T>> {
    collapse(&surface.restrict_times(times)?, rho, ScalingForm::survival(), DEFAULT_GRID_POINTS)
}

/// PR collapse under `(θ − θ_c)·t̃^{1/4}`, `PR/t̃`, with `b` from the fit at θ_c.
pub fn collapse_pr<T: Scalar>(
    surface: &Surface<T>,
    rho: CoinParameter<T>,
    times: &[usize],
    b: T,
) -> Result<CollapseResult<T>> {
    collapse(
        &surface.restrict_times(times)?,
        rho,
        ScalingForm::participation(b),
        DEFAULT_GRID_POINTS,
    )
}

impl<T: Scalar> CollapseResult<T> {
    /// Pointwise mean of the curves.
    pub fn master_curve(&self) -> Vec<T> {
        let n = T::of_usize(self.curves.len().max(1));
        (0..self.grid.len())
            .map(|i| self.curves.iter().fold(T::zero(), |a, c| a + c[i]) / n)
            .collect()
    }

    /// Log-log slope of the master curve against `|η|`, fitted jointly over
    /// both tails `|η| ≥ fraction·max|η|`.
    pub fn tail_slope(&self, fraction: T) -> Result<T> {
        let master = self.master_curve();
        let reach = self.grid.iter().fold(T::zero(), |a, &g| a.max(g.abs()));
        let cut = fraction * reach;
        let (xs, ys): (Vec<T>, Vec<T>) = self
            .grid
            .iter()
            .zip(&master)
            .filter(|(g, m)| g.abs() >= cut && g.abs() > T::zero() && **m > T::zero())
            .map(|(g, m)| (g.abs().ln(), m.ln()))
            .unzip();
        if xs.len() < 5 {
            return Err(Error::InsufficientData(format!(
                "{} grid points in the tail |eta| >= {cut}",
                xs.len()
            )));
        }
        Ok(fit_line(&xs, &ys)?.slope)
    }

    pub fn to_csv_string(&self) -> String {
        let mut header = Header::new(COLLAPSE_KIND);
        header
            .push("rho", format::real(self.rho.as_f64()))
            .push("eta_exponent", format::real(self.form.eta_exponent.as_f64()))
            .push("amplitude_exponent", format::real(self.form.amplitude_exponent.as_f64()))
            .push("log_offset", format::opt_real(self.form.log_offset.map(|b| b.as_f64())))
            .push("quality", format::real(self.quality.as_f64()));
        let mut out = header.render();
        let mut cols = vec!["eta".to_string()];
        cols.extend(self.times_used.iter().map(|t| format!("curve_t{t}")));
        out.push_str(&cols.join(","));
        out.push('\n');
        for (i, g) in self.grid.iter().enumerate() {
            let mut row = vec![format::real(g.as_f64())];
            row.extend(self.curves.iter().map(|c| format::real(c[i].as_f64())));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let doc = CsvDocument::parse(COLLAPSE_KIND, text)?;
        if doc.columns.first().map(String::as_str) != Some("eta") {
            return Err(Error::Parse {
                kind: COLLAPSE_KIND,
                line: 0,
                message: "first column must be eta".into(),
            });
        }
        let times_used = doc.columns[1..]
            .iter()
            .map(|c| {
                c.strip_prefix("curve_t")
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse {
                        kind: COLLAPSE_KIND,
                        line: 0,
                        message: format!("bad curve column '{c}'"),
                    })
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut grid = Vec::with_capacity(doc.rows.len());
        let mut curves = vec![Vec::with_capacity(doc.rows.len()); times_used.len()];
        for (line, row) in &doc.rows {
            grid.push(T::of(format::field::<f64>(COLLAPSE_KIND, *line, &row[0])?));
            for (c, raw) in curves.iter_mut().zip(&row[1..]) {
                c.push(T::of(format::field::<f64>(COLLAPSE_KIND, *line, raw)?));
            }
        }
        let real = |key: &str| -> Result<T> { Ok(T::of(doc.header_value::<f64>(COLLAPSE_KIND, key)?)) };
        let log_offset = match doc.header.get("log_offset") {
            None | Some("") => None,
            Some(_) => Some(real("log_offset")?),
        };
        Ok(CollapseResult {
            grid,
            curves,
            quality: real("quality")?,
            times_used,
            rho: real("rho")?,
            form: ScalingForm {
                eta_exponent: real("eta_exponent")?,
                amplitude_exponent: real("amplitude_exponent")?,
                log_offset,
            },
        })
    }
}
