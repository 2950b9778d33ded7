//! Per-step records of one (ρ, θ) run and their CSV / JSON forms.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{self, CsvDocument, Header};
use crate::observables::WavefrontSample;
use crate::scalar::Scalar;
use crate::walk::Cadence;

pub const SERIES_COLUMNS: [&str; 6] = ["t", "sp", "pr", "x_m", "delta", "p_front"];
const KIND: &str = "time_series";

/// Slack for rounding in the `sp ≤ 1` and `pr ≥ 1` bounds.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    /// `simulation` or `oracle`.
    pub source: String,
    pub rho: f64,
    pub theta: f64,
    pub steps: usize,
    pub cadence: String,
    pub degenerate: bool,
    /// Front law δ(t) = c·t^p used by oracle curves.
    pub front_c: Option<f64>,
    pub front_exponent: Option<f64>,
}

impl RunMetadata {
    pub fn simulation(rho: f64, theta: f64, steps: usize, cadence: &Cadence, degenerate: bool) -> Self {
        RunMetadata {
            source: "simulation".into(),
            rho,
            theta,
            steps,
            cadence: cadence.label(),
            degenerate,
            front_c: None,
            front_exponent: None,
        }
    }

    fn header(&self) -> Header {
        let mut h = Header::new(KIND);
        h.push("source", &self.source)
            .push("rho", format::real(self.rho))
            .push("theta", format::real(self.theta))
            .push("steps", self.steps)
            .push("cadence", &self.cadence)
            .push("degenerate", self.degenerate);
        if let Some(c) = self.front_c {
            h.push("front_c", format::real(c));
        }
        if let Some(p) = self.front_exponent {
            h.push("front_exponent", format::real(p));
        }
        h
    }

    fn from_doc(doc: &CsvDocument) -> Result<Self> {
        let opt = |key: &str| -> Result<Option<f64>> {
            match doc.header.get(key) {
                Some(_) => doc.header_value(KIND, key).map(Some),
                None => Ok(None),
            }
        };
        Ok(RunMetadata {
            source: doc.header_value(KIND, "source")?,
            rho: doc.header_value(KIND, "rho")?,
            theta: doc.header_value(KIND, "theta")?,
            steps: doc.header_value(KIND, "steps")?,
            cadence: doc.header_value(KIND, "cadence")?,
            degenerate: doc.header_value(KIND, "degenerate")?,
            front_c: opt("front_c")?,
            front_exponent: opt("front_exponent")?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
pub struct Record<T> {
    pub t: usize,
    pub sp: T,
    pub pr: T,
    pub front: Option<WavefrontSample<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
pub struct TimeSeries<T> {
    metadata: RunMetadata,
    records: Vec<Record<T>>,
}

impl<T: Scalar> TimeSeries<T> {
    /// Checks that `t` is strictly increasing, `sp ∈ [0, 1]` and `pr ≥ 1`.
    pub fn new(metadata: RunMetadata, records: Vec<Record<T>>) -> Result<Self> {
        let slack = T::of(BOUND_SLACK);
        for pair in records.windows(2) {
            if pair[1].t <= pair[0].t {
                return Err(Error::Precondition(format!(
                    "record times not strictly increasing at t = {}",
                    pair[1].t
                )));
            }
        }
        for r in &records {
            if !(r.sp >= -slack && r.sp <= T::one() + slack) {
                return Err(Error::Precondition(format!("sp = {} at t = {}", r.sp, r.t)));
            }
            if !(r.pr >= T::one() - slack) {
                return Err(Error::Precondition(format!("pr = {} at t = {}", r.pr, r.t)));
            }
        }
        Ok(TimeSeries { metadata, records })
    }

    pub fn metadata(&self) -> &RunMetadata {
        &self.metadata
    }

    pub fn records(&self) -> &[Record<T>] {
        &self.records
    }

    /// Records with `t_min ≤ t ≤ t_max`.
    pub fn window(&self, t_min: usize, t_max: usize) -> impl Iterator<Item = &Record<T>> {
        self.records
            .iter()
            .filter(move |r| r.t >= t_min && r.t <= t_max)
    }

    /// Keeps only the records whose step appears in `times`.
    pub fn restrict_to(&self, times: &[usize]) -> Self {
        let mut sorted = times.to_vec();
        sorted.sort_unstable();
        TimeSeries {
            metadata: self.metadata.clone(),
            records: self
                .records
                .iter()
                .filter(|r| sorted.binary_search(&r.t).is_ok())
                .cloned()
                .collect(),
        }
    }

    pub fn record_at(&self, t: usize) -> Option<&Record<T>> {
        self.records
            .binary_search_by_key(&t, |r| r.t)
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn sp_samples(&self) -> Vec<(T, T)> {
        self.records
            .iter()
            .map(|r| (T::of_usize(r.t), r.sp))
            .collect()
    }

    pub fn pr_samples(&self) -> Vec<(T, T)> {
        self.records
            .iter()
            .map(|r| (T::of_usize(r.t), r.pr))
            .collect()
    }

    pub fn fronts(&self) -> Vec<WavefrontSample<T>> {
        self.records.iter().filter_map(|r| r.front).collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = self.metadata.header().render();
        out.push_str(&SERIES_COLUMNS.join(","));
        out.push('\n');
        for r in &self.records {
            let (x_m, delta, p_front) = match r.front {
                Some(f) => (
                    f.x_m.to_string(),
                    format::real(f.delta.as_f64()),
                    format::real(f.p_front.as_f64()),
                ),
                None => Default::default(),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.t,
                format::real(r.sp.as_f64()),
                format::real(r.pr.as_f64()),
                x_m,
                delta,
                p_front
            ));
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let doc = CsvDocument::parse(KIND, text)?;
        doc.expect_columns(KIND, &SERIES_COLUMNS)?;
        let metadata = RunMetadata::from_doc(&doc)?;
        let mut records = Vec::with_capacity(doc.rows.len());
        for (line, f) in &doc.rows {
            let line = *line;
            let t: usize = format::field(KIND, line, &f[0])?;
            let sp: f64 = format::field(KIND, line, &f[1])?;
            let pr: f64 = format::field(KIND, line, &f[2])?;
            let x_m: Option<usize> = format::opt_field(KIND, line, &f[3])?;
            let delta: Option<f64> = format::opt_field(KIND, line, &f[4])?;
            let p_front: Option<f64> = format::opt_field(KIND, line, &f[5])?;
            let front = match (x_m, delta, p_front) {
                (Some(x_m), Some(delta), Some(p_front)) => Some(WavefrontSample {
                    t,
                    x_m,
                    delta: T::of(delta),
                    p_front: T::of(p_front),
                }),
                (None, None, None) => None,
                _ => {
                    return Err(Error::Parse {
                        kind: KIND,
                        line,
                        message: "wavefront columns must be all present or all empty".into(),
                    })
                }
            };
            records.push(Record {
                t,
                sp: T::of(sp),
                pr: T::of(pr),
                front,
            });
        }
        TimeSeries::new(metadata, records)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let parsed: TimeSeries<T> = serde_json::from_str(text)?;
        TimeSeries::new(parsed.metadata, parsed.records)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        format::write_text(path, &self.to_csv_string())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv_str(&format::read_text(path)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        format::write_text(path, &self.to_json_string()?)
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json_str(&format::read_text(path)?)
    }
}
