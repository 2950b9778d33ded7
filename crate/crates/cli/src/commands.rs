use std::path::{Path, PathBuf};

use qwalk3::analysis::{
    collapse, fit_log_correction, fit_power_law, Observable, ScalingFit, ScalingForm, Surface,
};
use qwalk3::format::{self, Header};
use qwalk3::oracle::{self, FrontLaw, GroupVelocityDensity};
use qwalk3::sweep::{self, SweepOptions, SweepPlan, ThetaGrid};
use qwalk3::walk::{evolve_with, Cadence, EvolveOptions};
use qwalk3::{theta_c, CoinParameter, Complex64, Error, MixingAngle, Result, Series};

use crate::{
    AmplitudeKind, CollapseArgs, Command, FitArgs, ObservableArg, OracleArgs, OutputFormat,
    SimulateArgs, SweepArgs, ThetaArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate(a) => simulate(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Fit(a) => fit(&a),
        Command::Collapse(a) => collapse_cmd(&a),
        Command::Oracle(a) => oracle_cmd(&a),
    }
}

fn resolve_theta(rho: CoinParameter<f64>, args: &ThetaArgs) -> Result<MixingAngle<f64>> {
    match args.theta {
        Some(theta) => MixingAngle::new(theta),
        None => MixingAngle::from_offset(rho, args.theta_offset),
    }
}

fn snapshot_path(output: &Path, t: usize) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());
    output.with_file_name(format!("{stem}_t{t}.csv"))
}

fn simulate(a: &SimulateArgs) -> Result<()> {
    let rho = CoinParameter::new(a.rho)?;
    let theta = resolve_theta(rho, &a.theta)?;
    let cadence = Cadence::parse(&a.cadence)?;
    if let Some(t) = a.snapshots.iter().find(|&&t| t > a.steps) {
        return Err(Error::Config(format!("snapshot step {t} is beyond --steps {}", a.steps)));
    }
    let options = EvolveOptions {
        cadence,
        wavefront: a.wavefront,
        snapshots: a.snapshots.clone(),
    };
    let evolution = match a.amplitude {
        AmplitudeKind::Real => evolve_with::<f64>(theta, rho, a.steps, &options)?,
        AmplitudeKind::Complex => evolve_with::<Complex64>(theta, rho, a.steps, &options)?,
    };
    match a.format {
        OutputFormat::Csv => evolution.series.write_csv(&a.output)?,
        OutputFormat::Json => evolution.series.write_json(&a.output)?,
    }
    println!("{}", a.output.display());
    for dist in &evolution.snapshots {
        let path = snapshot_path(&a.output, dist.time());
        let extra = [
            ("source", "simulation".to_string()),
            ("rho", format::real(a.rho)),
            ("theta", format::real(theta.value())),
        ];
        format::write_text(&path, &dist.to_csv_string(&extra))?;
        println!("{}", path.display());
    }
    Ok(())
}

/// A comma list of reals or `linspace:LO:HI:N`.
fn parse_grid(name: &str, text: &str) -> Result<Vec<f64>> {
    let bad = |detail: String| Error::Config(format!("--{name} '{text}': {detail}"));
    let text = text.trim();
    if let Some(body) = text.strip_prefix("linspace:") {
        let parts: Vec<&str> = body.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad("expected linspace:LO:HI:N".into()));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| bad(format!("{e}")))?;
        let hi: f64 = hi.trim().parse().map_err(|e| bad(format!("{e}")))?;
        let n: usize = n.trim().parse().map_err(|e| bad(format!("{e}")))?;
        return Ok(sweep::linspace(lo, hi, n));
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|e| bad(format!("{e}"))))
        .collect()
}

fn sweep(a: &SweepArgs) -> Result<()> {
    let theta_grid = match &a.theta_offsets {
        Some(list) => ThetaGrid::Offsets(parse_grid("theta-offsets", list)?),
        None => ThetaGrid::Absolute(parse_grid("theta-grid", &a.theta_grid)?),
    };
    let plan = SweepPlan {
        rho_grid: parse_grid("rho-grid", &a.rho_grid)?,
        theta_grid,
        include_locus: !a.no_locus,
        steps: a.steps,
    };
    plan.validate()?;
    let options = SweepOptions {
        threads: a.threads,
        resume: a.resume,
        chunk: a.chunk,
        stop_after: None,
    };
    let result = sweep::run_sweep(&plan, &a.output, &options)?;
    println!("{} ({} rows)", a.output.display(), result.rows.len());
    Ok(())
}

fn read_series(path: &Path) -> Result<Series> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Series::read_json(path),
        _ => Series::read_csv(path),
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    format::write_text(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn fit(a: &FitArgs) -> Result<()> {
    if a.t_min > a.t_max {
        return Err(Error::Config(format!("--t-min {} exceeds --t-max {}", a.t_min, a.t_max)));
    }
    let series = read_series(&a.input)?;
    let window = (a.t_min as f64, a.t_max as f64);
    let json = a.output.as_ref().map(|p| p.extension().is_some_and(|e| e == "json"));
    match (a.observable, a.power) {
        (ObservableArg::Pr, false) => {
            let f: ScalingFit<f64> = fit_log_correction(&series, (a.t_min, a.t_max))?;
            println!(
                "a = {} b = {} relative_residual = {:e} points = {}",
                f.a, f.b, f.relative_residual, f.points
            );
            match (&a.output, json) {
                (Some(p), Some(true)) => write_json(p, &f)?,
                (Some(p), _) => format::write_text(p, &f.to_csv_string())?,
                _ => {}
            }
        }
        (observable, _) => {
            let samples = match observable {
                ObservableArg::Sp => series.sp_samples(),
                ObservableArg::Pr => series.pr_samples(),
            };
            let f = fit_power_law(&samples, window)?;
            println!(
                "exponent = {} prefactor = {} residual_rms = {:e} points = {}",
                f.exponent, f.prefactor, f.residual_rms, f.points
            );
            if let Some(p) = &a.output {
                write_json(p, &f)?;
            }
        }
    }
    Ok(())
}

fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|e| e == "csv" || e == "json"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    if files.is_empty() {
        return Err(Error::Config("no time-series inputs found".into()));
    }
    Ok(files)
}

fn collapse_cmd(a: &CollapseArgs) -> Result<()> {
    let times: Vec<usize> = if a.times.is_empty() {
        [1, 2, 4, 8].iter().map(|k| k * a.tau0).collect()
    } else {
        a.times.clone()
    };
    let series = collect_inputs(&a.inputs)?
        .iter()
        .map(|p| read_series(p))
        .collect::<Result<Vec<_>>>()?;
    let rho = series[0].metadata().rho;
    if let Some(s) = series.iter().find(|s| s.metadata().rho != rho) {
        return Err(Error::Precondition(format!(
            "inputs mix rho = {rho} and rho = {}",
            s.metadata().rho
        )));
    }
    let rho_p = CoinParameter::new(rho)?;
    let form = match a.observable {
        ObservableArg::Sp => ScalingForm::survival(),
        ObservableArg::Pr => ScalingForm::participation(match a.b {
            Some(b) => b,
            None => fitted_b(&series, rho_p)?,
        }),
    };
    let observable = match a.observable {
        ObservableArg::Sp => Observable::Sp,
        ObservableArg::Pr => Observable::Pr,
    };
    let surface = Surface::from_series(&series, &times, observable)?;
    let result = collapse(&surface, rho_p, form, a.grid_points)?;
    format::write_text(&a.output, &result.to_csv_string())?;
    println!("quality = {:e}", result.quality);
    println!("{}", a.output.display());
    Ok(())
}

/// `b` of the logarithmic PR law fitted on the input nearest θ_c.
fn fitted_b(series: &[Series], rho: CoinParameter<f64>) -> Result<f64> {
    let tc = theta_c(rho).value();
    let nearest = series
        .iter()
        .min_by(|x, y| {
            (x.metadata().theta - tc)
                .abs()
                .total_cmp(&(y.metadata().theta - tc).abs())
        })
        .expect("inputs are non-empty");
    if (nearest.metadata().theta - tc).abs() > 1e-9 {
        return Err(Error::Precondition(
            "no input at theta_c to fit b from; pass --b".into(),
        ));
    }
    let last = nearest.records().last().map(|r| r.t).unwrap_or(0);
    Ok(fit_log_correction(nearest, (100, last))?.b)
}

fn oracle_cmd(a: &OracleArgs) -> Result<()> {
    let density = GroupVelocityDensity::new(a.rho)?;
    let cadence = Cadence::parse(&a.cadence)?;
    let nus: Vec<f64> = if a.nu.is_empty() {
        if a.points == 0 {
            return Err(Error::Config("--points must be positive".into()));
        }
        (0..a.points)
            .map(|i| a.rho * (2.0 * (i as f64 + 0.5) / a.points as f64 - 1.0))
            .collect()
    } else {
        a.nu.clone()
    };
    let omegas = nus
        .iter()
        .map(|&nu| density.density(nu))
        .collect::<Result<Vec<_>>>()?;
    let front = match a.front_c {
        Some(c) => FrontLaw::new(c, a.front_exponent)?,
        None => {
            let rho = CoinParameter::new(a.rho)?;
            let options = EvolveOptions {
                cadence: Cadence::Geometric(1.1),
                wavefront: true,
                snapshots: vec![],
            };
            let run = evolve_with::<f64>(theta_c(rho), rho, a.calibration_steps, &options)?;
            oracle::calibrate_front_law(&run.series.fronts(), a.front_exponent, 100)?
        }
    };
    let distributions = a
        .distribution_times
        .iter()
        .map(|&t| oracle::asymptotic_distribution(t, a.rho, front))
        .collect::<Result<Vec<_>>>()?;
    let curve = oracle::oracle_series(a.rho, &cadence.times(a.steps), front)?;

    let mut h = Header::new("omega");
    h.push("rho", format::real(a.rho));
    let mut text = h.render();
    text.push_str("nu,omega\n");
    for (nu, w) in nus.iter().zip(&omegas) {
        text.push_str(&format!("{},{}\n", format::real(*nu), format::real(*w)));
    }
    let omega_path = a.output_dir.join("omega.csv");
    format::write_text(&omega_path, &text)?;
    println!("{}", omega_path.display());

    let extra = [
        ("source", "oracle".to_string()),
        ("rho", format::real(a.rho)),
        ("front_c", format::real(front.c)),
        ("front_exponent", format::real(front.exponent)),
    ];
    for d in &distributions {
        let path = a.output_dir.join(format!("distribution_t{}.csv", d.time()));
        format::write_text(&path, &d.to_csv_string(&extra))?;
        println!("{}", path.display());
    }
    let pr_path = a.output_dir.join("pr.csv");
    curve.write_csv(&pr_path)?;
    println!("{}", pr_path.display());
    Ok(())
}
