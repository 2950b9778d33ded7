//! Parallel (ρ, θ) grids of independent walks, persisted row by row.
//!
//! Rows are written in plan order (ρ-major, θ-minor) after each chunk of
//! points completes, so a sweep that is interrupted leaves a valid prefix on
//! disk. Resuming checks that prefix against the plan and continues after it.
//! Every point is an independent deterministic computation, so the output
//! does not depend on the number of threads.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coin::{theta_c, CoinOperator, CoinParameter, MixingAngle};
use crate::error::{Error, Result};
use crate::format::{self, CsvDocument, Header};
use crate::observables::{self, is_saturated};
use crate::walk::initial_state;

const SWEEP_KIND: &str = "sweep";
pub const SWEEP_COLUMNS: [&str; 5] = ["rho", "theta", "sp_final", "pr_final", "saturated"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "values")]
pub enum ThetaGrid {
    /// The same absolute angles at every ρ.
    Absolute(Vec<f64>),
    /// Offsets added to θ_c(ρ).
    Offsets(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub rho_grid: Vec<f64>,
    pub theta_grid: ThetaGrid,
    /// Also evaluate θ_c(ρ) at every ρ, inserted in θ order.
    pub include_locus: bool,
    pub steps: usize,
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

impl SweepPlan {
    /// 61 × 61 over ρ ∈ [0.05, 0.95], θ ∈ [π/2, π] at T = 10⁴, with the θ_c
    /// locus added at every ρ.
    pub fn density_map() -> Self {
        SweepPlan {
            rho_grid: linspace(0.05, 0.95, 61),
            theta_grid: ThetaGrid::Absolute(linspace(
                std::f64::consts::FRAC_PI_2,
                std::f64::consts::PI,
                61,
            )),
            include_locus: true,
            steps: 10_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rho_grid.is_empty() {
            return Err(Error::Config("rho grid is empty".into()));
        }
        let thetas = match &self.theta_grid {
            ThetaGrid::Absolute(v) | ThetaGrid::Offsets(v) => v,
        };
        if thetas.is_empty() && !self.include_locus {
            return Err(Error::Config("theta grid is empty".into()));
        }
        if self.steps < 1 {
            return Err(Error::Config("sweep needs at least one step".into()));
        }
        self.points().map(|_| ())
    }

    /// Grid points in output order.
    pub fn points(&self) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::new();
        for &rho in &self.rho_grid {
            let r = CoinParameter::new(rho)?;
            let tc = theta_c(r).value();
            let mut thetas: Vec<f64> = match &self.theta_grid {
                ThetaGrid::Absolute(v) => v.clone(),
                ThetaGrid::Offsets(v) => v.iter().map(|o| tc + o).collect(),
            };
            if self.include_locus && !thetas.contains(&tc) {
                thetas.push(tc);
            }
            thetas.sort_by(f64::total_cmp);
            for theta in thetas {
                MixingAngle::new(theta)?;
                out.push((rho, theta));
            }
        }
        Ok(out)
    }

    /// SHA-256 of the canonical JSON form of the plan and the crate version.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(&(format::VERSION, self)).expect("plan serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// `(ρ, θ_c(ρ))` for every ρ of the grid.
pub fn locus_theta_c(rho_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    rho_grid
        .iter()
        .map(|&rho| Ok((rho, theta_c(CoinParameter::new(rho)?).value())))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rho: f64,
    pub theta: f64,
    pub sp_final: f64,
    pub pr_final: f64,
    /// SP passed the saturation detector over the run.
    pub saturated: bool,
}

impl SweepRow {
    fn to_line(self) -> String {
        format!(
            "{},{},{},{},{}\n",
            format::real(self.rho),
            format::real(self.theta),
            format::real(self.sp_final),
            format::real(self.pr_final),
            self.saturated
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub plan_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub provenance: Provenance,
}

/// Evolves one grid point for `steps` steps. SP is recorded at every step
/// for the saturation detector; PR only at the end.
pub fn run_point(rho: f64, theta: f64, steps: usize) -> Result<SweepRow> {
    let r = CoinParameter::new(rho)?;
    let th = MixingAngle::new(theta)?;
    let coin = CoinOperator::new(r);
    let (mut state, _) = initial_state::<f64>(th, r, steps)?;
    let mut sp = Vec::with_capacity(steps + 1);
    for t in 0..=steps {
        if t > 0 {
            state.step(&coin)?;
        }
        let a = state.amplitudes(0);
        sp.push((t, a.iter().map(|v| v * v).sum::<f64>()));
    }
    let dist = observables::distribution(&state);
    Ok(SweepRow {
        rho,
        theta,
        sp_final: observables::survival_probability(&dist),
        pr_final: observables::participation_ratio(&dist),
        saturated: is_saturated(&sp),
    })
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Worker threads; 0 uses all available cores.
    pub threads: usize,
    /// Continue from rows already present in the output file.
    pub resume: bool,
    /// Points computed per persisted chunk; 0 picks a multiple of `threads`.
    pub chunk: usize,
    /// Stop after this many rows are on disk (for interruption tests).
    pub stop_after: Option<usize>,
}


/// Path of the JSON sidecar next to a sweep CSV.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().unwrap_or_default().to_os_string();
    name.push(".json");
    csv.with_file_name(name)
}

fn header_text(plan: &SweepPlan, hash: &str) -> String {
    let mut h = Header::new(SWEEP_KIND);
    h.push("plan_hash", hash)
        .push("steps", plan.steps)
        .push("points", plan.points().map(|p| p.len()).unwrap_or(0));
    let mut out = h.render();
    out.push_str(&SWEEP_COLUMNS.join(","));
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    version: String,
    plan_hash: String,
    plan: SweepPlan,
}

/// Parses the complete rows of a sweep CSV, ignoring a final line that was
/// cut off before its newline.
pub fn parse_rows(text: &str) -> Result<(CsvDocument, Vec<SweepRow>)> {
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    let doc = CsvDocument::parse(SWEEP_KIND, complete)?;
    doc.expect_columns(SWEEP_KIND, &SWEEP_COLUMNS)?;
    let rows = doc
        .rows
        .iter()
        .map(|(line, f)| {
            Ok(SweepRow {
                rho: format::field(SWEEP_KIND, *line, &f[0])?,
                theta: format::field(SWEEP_KIND, *line, &f[1])?,
                sp_final: format::field(SWEEP_KIND, *line, &f[2])?,
                pr_final: format::field(SWEEP_KIND, *line, &f[3])?,
                saturated: format::field(SWEEP_KIND, *line, &f[4])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((doc, rows))
}

/// Reads a finished or partial sweep CSV.
pub fn read_sweep(path: &Path) -> Result<SweepResult> {
    let (doc, rows) = parse_rows(&format::read_text(path)?)?;
    Ok(SweepResult {
        rows,
        provenance: Provenance {
            version: doc
                .header
                .get("generator")
                .and_then(|g| g.strip_prefix("qwalk3 "))
                .unwrap_or_default()
                .to_string(),
            plan_hash: doc.header_value(SWEEP_KIND, "plan_hash")?,
        },
    })
}

/// Checks an existing output file against the plan and returns the rows it
/// already holds, rewriting the file without any truncated trailing line.
fn recover(path: &Path, plan: &SweepPlan, hash: &str, points: &[(f64, f64)]) -> Result<Vec<SweepRow>> {
    let mismatch = |reason: String| Error::ResumeMismatch {
        path: path.to_path_buf(),
        reason,
    };
    let text = format::read_text(path)?;
    let (doc, rows) = parse_rows(&text)?;
    match doc.header.get("plan_hash") {
        Some(h) if h == hash => {}
        Some(h) => return Err(mismatch(format!("plan hash {h} differs from {hash}"))),
        None => return Err(mismatch("no plan hash in header".into())),
    }
    if rows.len() > points.len() {
        return Err(mismatch(format!("{} rows for {} grid points", rows.len(), points.len())));
    }
    for (i, (row, &(rho, theta))) in rows.iter().zip(points).enumerate() {
        if row.rho.to_bits() != rho.to_bits() || row.theta.to_bits() != theta.to_bits() {
            return Err(mismatch(format!("row {} is not grid point ({rho}, {theta})", i + 1)));
        }
    }
    let mut clean = header_text(plan, hash);
    for row in &rows {
        clean.push_str(&row.to_line());
    }
    if clean != text {
        format::write_text(path, &clean)?;
    }
    Ok(rows)
}

/// Runs the plan, writing `output` (CSV) and its JSON sidecar.
pub fn run_sweep(plan: &SweepPlan, output: &Path, options: &SweepOptions) -> Result<SweepResult> {
    plan.validate()?;
    let points = plan.points()?;
    let hash = plan.hash();

    let mut rows = if options.resume && output.exists() {
        recover(output, plan, &hash, &points)?
    } else {
        format::write_text(output, &header_text(plan, &hash))?;
        Vec::new()
    };
    let sidecar = Sidecar {
        version: format::VERSION.to_string(),
        plan_hash: hash.clone(),
        plan: plan.clone(),
    };
    format::write_text(&sidecar_path(output), &(serde_json::to_string_pretty(&sidecar)? + "\n"))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let chunk = if options.chunk > 0 {
        options.chunk
    } else {
        4 * pool.current_num_threads()
    };
    let limit = options.stop_after.unwrap_or(points.len()).min(points.len());

    let mut file = OpenOptions::new()
        .append(true)
        .open(output)
        .map_err(|e| Error::io(output, e))?;
    while rows.len() < limit {
        let start = rows.len();
        let end = (start + chunk).min(limit);
        let batch: Vec<SweepRow> = pool.install(|| {
            points[start..end]
                .par_iter()
                .map(|&(rho, theta)| run_point(rho, theta, plan.steps))
                .collect::<Result<Vec<_>>>()
        })?;
        let text: String = batch.iter().map(|r| r.to_line()).collect();
        file.write_all(text.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| Error::io(output, e))?;
        rows.extend(batch);
    }
    Ok(SweepResult {
        rows,
        provenance: Provenance {
            version: format::VERSION.to_string(),
            plan_hash: hash,
        },
    })
}

/// Reads the plan back from a sweep sidecar.
pub fn read_plan(sidecar: &Path) -> Result<SweepPlan> {
    let s: Sidecar = serde_json::from_str(&format::read_text(sidecar)?)?;
    Ok(s.plan)
}

impl SweepResult {
    /// Rows lying on the θ_c locus, one per ρ.
    pub fn locus_rows(&self) -> Vec<SweepRow> {
        self.rows
            .iter()
            .copied()
            .filter(|r| {
                CoinParameter::new(r.rho)
                    .map(|p| theta_c(p).value().to_bits() == r.theta.to_bits())
                    .unwrap_or(false)
            })
            .collect()
    }
}
