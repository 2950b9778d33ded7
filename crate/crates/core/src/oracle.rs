//! Long-time asymptotics of the walk started at θ = θ_c.
//!
//! The walker then spreads with the group-velocity density
//!
//! ```text
//! ω(ν) = √(1 − ρ²) / (π (1 − ν²) √(ρ² − ν²)),   ν = x/t ∈ (−ρ, ρ),
//! ```
//!
//! so `P_x(t) ≈ ω(x/t)/t`. The inverse participation ratio follows from
//! integrating `ω²/t` up to the wavefront, which sits a sublinear distance
//! `δ(t) = c·t^p` inside the ballistic edge. The integrand is split into
//! partial fractions whose antiderivatives are elementary; the two simple
//! poles at ν = ±ρ produce the `ln t` growth of `1/PR`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{SpatialDistribution, WavefrontSample, FRONT_TRANSIENT_CUTOFF};
use crate::scalar::Scalar;
use crate::series::{Record, RunMetadata, TimeSeries};

fn check_open_rho<T: Scalar>(rho: T) -> Result<()> {
    if rho > T::zero() && rho < T::one() {
        Ok(())
    } else {
        Err(Error::domain("rho", rho.as_f64(), "(0, 1)"))
    }
}

/// Group-velocity density ω(ν). Supported on the open interval (−ρ, ρ).
pub fn omega<T: Scalar>(nu: T, rho: T) -> Result<T> {
    check_open_rho(rho)?;
    if !(nu.abs() < rho) {
        return Err(Error::domain("nu", nu.as_f64(), "(-rho, rho)"));
    }
    let q = (T::one() - rho * rho).sqrt();
    Ok(q / (T::PI() * (T::one() - nu * nu) * (rho * rho - nu * nu).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupVelocityDensity<T> {
    rho: T,
}

impl<T: Scalar> GroupVelocityDensity<T> {
    pub fn new(rho: T) -> Result<Self> {
        check_open_rho(rho)?;
        Ok(GroupVelocityDensity { rho })
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn density(&self, nu: T) -> Result<T> {
        omega(nu, self.rho)
    }

    /// Closed-form mass on `[-v, v]` for `0 ≤ v ≤ ρ`:
    /// `(2/π) · arctan(√(1−ρ²) · s / √(1 − s²))` with `s = v/ρ`.
    pub fn mass_within(&self, v: T) -> Result<T> {
        if !(v >= T::zero() && v <= self.rho) {
            return Err(Error::domain("v", v.as_f64(), "[0, rho]"));
        }
        let s = v / self.rho;
        let q = (T::one() - self.rho * self.rho).sqrt();
        let c = (T::one() - s * s).max(T::zero()).sqrt();
        Ok(T::of(2.0) / T::PI() * (q * s).atan2(c))
    }
}

/// Sublinear wavefront offset δ(t) = c·t^exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontLaw<T> {
    pub c: T,
    pub exponent: T,
}

impl<T: Scalar> FrontLaw<T> {
    pub const DEFAULT_EXPONENT: f64 = 1.0 / 3.0;

    pub fn new(c: T, exponent: T) -> Result<Self> {
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::domain("front c", c.as_f64(), "(0, inf)"));
        }
        if !(exponent >= T::zero() && exponent < T::one()) {
            return Err(Error::domain("front exponent", exponent.as_f64(), "[0, 1)"));
        }
        Ok(FrontLaw { c, exponent })
    }

    pub fn delta(&self, t: T) -> T {
        self.c * t.powf(self.exponent)
    }
}

/// Least-squares fit of `c` in `δ = c·t^exponent` with the exponent held
/// fixed, over fronts with `t ≥ t_min` and positive δ.
pub fn calibrate_front_law<T: Scalar>(
    fronts: &[WavefrontSample<T>],
    exponent: T,
    t_min: usize,
) -> Result<FrontLaw<T>> {
    let logs: Vec<T> = fronts
        .iter()
        .filter(|f| f.t >= t_min.max(FRONT_TRANSIENT_CUTOFF) && f.delta > T::zero())
        .map(|f| f.delta.ln() - exponent * T::of_usize(f.t).ln())
        .collect();
    if logs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} usable wavefront samples for front calibration",
            logs.len()
        )));
    }
    let mean = logs.iter().fold(T::zero(), |a, &v| a + v) / T::of_usize(logs.len());
    FrontLaw::new(mean.exp(), exponent)
}

/// `P_x = ω(x/t)/t` inside `|x| < ρt − δ(t)`, zero outside, renormalized to
/// unit mass. Sites run over `-t..=t`.
pub fn asymptotic_distribution<T: Scalar>(
    t: usize,
    rho: T,
    front: FrontLaw<T>,
) -> Result<SpatialDistribution<T>> {
    check_open_rho(rho)?;
    if t < 1 {
        return Err(Error::domain("t", 0.0, ">= 1"));
    }
    let tt = T::of_usize(t);
    let edge = rho * tt - front.delta(tt);
    if !(edge > T::zero()) {
        return Err(Error::domain("t", t as f64, "rho*t - delta(t) > 0"));
    }
    let mut probs = vec![T::zero(); 2 * t + 1];
    for (i, p) in probs.iter_mut().enumerate() {
        let x = T::of(i as f64 - t as f64);
        if x.abs() < edge {
            *p = omega(x / tt, rho)? / tt;
        }
    }
    let total = probs.iter().fold(T::zero(), |a, &p| a + p);
    for p in &mut probs {
        *p = *p / total;
    }
    SpatialDistribution::new(t, probs)
}

/// Decomposition
///
/// ```text
/// 1/((1−ν²)²(ρ²−ν²)) = A/(1−ν²)² + B/(1−ν²) + C/(ρ−ν) + D/(ρ+ν)
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialFractions<T> {
    pub rho: T,
    /// A, coefficient of 1/(1−ν²)².
    pub double: T,
    /// B, coefficient of 1/(1−ν²).
    pub single: T,
    /// C, coefficient of 1/(ρ−ν).
    pub upper: T,
    /// D, coefficient of 1/(ρ+ν).
    pub lower: T,
}

/// Solves the 4×4 system obtained by clearing denominators and matching the
/// numerator identity
///
/// ```text
/// 1 = A(ρ²−ν²) + B(1−ν²)(ρ²−ν²) + C(1−ν²)²(ρ+ν) + D(1−ν²)²(ρ−ν)
/// ```
///
/// at ν ∈ {1, ρ, −ρ, 0}.
pub fn partial_fractions<T: Scalar>(rho: T) -> Result<PartialFractions<T>> {
    check_open_rho(rho)?;
    let one = T::one();
    let row = |nu: T| -> [T; 4] {
        let a = rho * rho - nu * nu;
        let b = one - nu * nu;
        [a, b * a, b * b * (rho + nu), b * b * (rho - nu)]
    };
    let mut system = [row(one), row(rho), row(-rho), row(T::zero())];
    let mut rhs = [one; 4];
    let x = solve4(&mut system, &mut rhs)?;
    Ok(PartialFractions {
        rho,
        double: x[0],
        single: x[1],
        upper: x[2],
        lower: x[3],
    })
}

/// Gaussian elimination with partial pivoting.
fn solve4<T: Scalar>(m: &mut [[T; 4]; 4], rhs: &mut [T; 4]) -> Result<[T; 4]> {
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if !(m[pivot][col].abs() > T::epsilon()) {
            return Err(Error::Precondition(
                "partial-fraction system is singular".into(),
            ));
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..4 {
            let factor = m[r][col] / m[col][col];
            for c in col..4 {
                m[r][c] = m[r][c] - factor * m[col][c];
            }
            rhs[r] = rhs[r] - factor * rhs[col];
        }
    }
    let mut x = [T::zero(); 4];
    for r in (0..4).rev() {
        let mut acc = rhs[r];
        for c in r + 1..4 {
            acc = acc - m[r][c] * x[c];
        }
        x[r] = acc / m[r][r];
    }
    Ok(x)
}

impl<T: Scalar> PartialFractions<T> {
    /// The decomposed function `1/((1−ν²)²(ρ²−ν²))`.
    pub fn target(&self, nu: T) -> T {
        let b = T::one() - nu * nu;
        T::one() / (b * b * (self.rho * self.rho - nu * nu))
    }

    /// Sum of the four partial-fraction terms.
    pub fn recombine(&self, nu: T) -> T {
        let b = T::one() - nu * nu;
        self.double / (b * b)
            + self.single / b
            + self.upper / (self.rho - nu)
            + self.lower / (self.rho + nu)
    }

    /// `∫_{−(ρ−ε)}^{ρ−ε} target(ν) dν` from the antiderivatives of each term.
    pub fn symmetric_integral(&self, epsilon: T) -> Result<T> {
        if !(epsilon > T::zero() && epsilon < self.rho) {
            return Err(Error::domain("epsilon", epsilon.as_f64(), "(0, rho)"));
        }
        let u = self.rho - epsilon;
        let atanh = u.atanh();
        let double = self.double * (u / (T::one() - u * u) + atanh);
        let single = self.single * T::of(2.0) * atanh;
        let poles = (self.upper + self.lower) * ((self.rho + u).ln() - epsilon.ln());
        Ok(double + single + poles)
    }

    /// Coefficient of `ln t` in `t · [PR]⁻¹` when `δ ∝ t^exponent`:
    /// `(1−ρ²)(C+D)(1 − exponent)/π²`.
    pub fn log_coefficient(&self, exponent: T) -> T {
        (T::one() - self.rho * self.rho) * (self.upper + self.lower) * (T::one() - exponent)
            / (T::PI() * T::PI())
    }
}

/// Inverse participation ratio from the integrated asymptotic density,
/// `(1−ρ²)/(π² t) · ∫ dν / ((1−ν²)²(ρ²−ν²))` over `|ν| < ρ − δ(t)/t`.
pub fn analytic_ipr<T: Scalar>(t: T, rho: T, front: FrontLaw<T>) -> Result<T> {
    let fractions = partial_fractions(rho)?;
    let epsilon = front.delta(t) / t;
    if !(epsilon > T::zero() && epsilon < rho) {
        return Err(Error::domain(
            "t",
            t.as_f64(),
            "values with 0 < delta(t)/t < rho",
        ));
    }
    let integral = fractions.symmetric_integral(epsilon)?;
    Ok((T::one() - rho * rho) / (T::PI() * T::PI() * t) * integral)
}

/// Oracle curve in the time-series schema: `sp = ω(0)/t`,
/// `pr = 1/analytic_ipr`, and the front position and height implied by the
/// front law.
pub fn oracle_series(rho: f64, times: &[usize], front: FrontLaw<f64>) -> Result<TimeSeries<f64>> {
    let density = GroupVelocityDensity::new(rho)?;
    let mut records = Vec::with_capacity(times.len());
    for &t in times {
        let tt = t as f64;
        let delta = front.delta(tt);
        let x_edge = rho * tt - delta;
        if t == 0 || x_edge < 1.0 {
            continue;
        }
        let x_m = x_edge.floor() as usize;
        records.push(Record {
            t,
            sp: density.density(0.0)? / tt,
            pr: 1.0 / analytic_ipr(tt, rho, front)?,
            front: Some(WavefrontSample {
                t,
                x_m,
                delta: rho * tt - x_m as f64,
                p_front: density.density(x_m as f64 / tt)? / tt,
            }),
        });
    }
    let metadata = RunMetadata {
        source: "oracle".into(),
        rho,
        theta: crate::coin::theta_c(crate::coin::CoinParameter::new(rho)?).value(),
        steps: times.iter().copied().max().unwrap_or(0),
        cadence: crate::walk::Cadence::Times(times.to_vec()).label(),
        degenerate: false,
        front_c: Some(front.c),
        front_exponent: Some(front.exponent),
    };
    TimeSeries::new(metadata, records)
}
