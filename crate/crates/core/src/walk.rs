//! Walk state storage and exact unitary evolution.
//!
//! Each coin component lives in its own array of `2·capacity + 1` slots with
//! its own origin offset. The shift never moves data: after the coin mixes
//! the three components in place, the `L` origin moves up by one slot and the
//! `R` origin moves down by one, which relabels every `L` amplitude one site
//! to the left and every `R` amplitude one site to the right.

use serde::{Deserialize, Serialize};

use crate::coin::{CoinOperator, CoinParameter, InputDecomposition, MixingAngle};
use crate::error::{Error, Result};
use crate::fpmode::FlushDenormals;
use crate::observables::{self, SpatialDistribution};
use crate::scalar::{Amplitude, Scalar};
use crate::series::{Record, RunMetadata, TimeSeries};

/// Amplitudes of a walker on the sites `[-capacity, capacity]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState<A> {
    left: Vec<A>,
    stay: Vec<A>,
    right: Vec<A>,
    capacity: usize,
    /// Light-cone bound: every site with |x| > reach holds exactly zero.
    reach: usize,
    /// Sites outside `lo..=hi` hold exactly zero. Only this window is updated.
    lo: isize,
    hi: isize,
    left_origin: usize,
    right_origin: usize,
    time: usize,
}

impl<A: Amplitude> WalkState<A> {
    /// Walker at the origin with the given `[L, S, R]` coin state.
    pub fn localized(coin_state: [A; 3], capacity: usize) -> Result<Self> {
        Self::from_profile(&[coin_state], capacity)
    }

    /// Walker with an arbitrary initial profile centred on the origin.
    /// `profile` must have odd length `2r + 1` and covers sites `-r..=r`.
    pub fn from_profile(profile: &[[A; 3]], capacity: usize) -> Result<Self> {
        if capacity < 1 {
            return Err(Error::domain("capacity", capacity as f64, ">= 1"));
        }
        if profile.len().is_multiple_of(2) {
            return Err(Error::Config(format!(
                "initial profile must have odd length, got {}",
                profile.len()
            )));
        }
        let reach = profile.len() / 2;
        if reach > capacity {
            return Err(Error::Capacity { steps: 0, capacity });
        }
        let len = 2 * capacity + 1;
        let mut state = WalkState {
            left: vec![A::zero(); len],
            stay: vec![A::zero(); len],
            right: vec![A::zero(); len],
            capacity,
            reach,
            lo: -(reach as isize),
            hi: reach as isize,
            left_origin: reach,
            right_origin: 2 * capacity - reach,
            time: 0,
        };
        for (i, site) in profile.iter().enumerate() {
            let x = i as isize - reach as isize;
            let (l, s, r) = state.indices(x);
            state.left[l] = site[0];
            state.stay[s] = site[1];
            state.right[r] = site[2];
        }
        state.trim();
        Ok(state)
    }

    fn indices(&self, x: isize) -> (usize, usize, usize) {
        (
            (self.left_origin as isize + x) as usize,
            (self.capacity as isize + x) as usize,
            (self.right_origin as isize + x) as usize,
        )
    }

    fn is_vacant(&self, x: isize) -> bool {
        let (l, s, r) = self.indices(x);
        self.left[l].is_zero() && self.stay[s].is_zero() && self.right[r].is_zero()
    }

    /// Shrinks `lo..=hi` past sites whose amplitudes are all exactly zero.
    fn trim(&mut self) {
        while self.lo < self.hi && self.is_vacant(self.lo) {
            self.lo += 1;
        }
        while self.hi > self.lo && self.is_vacant(self.hi) {
            self.hi -= 1;
        }
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Light-cone bound on the support: amplitudes with |x| > radius are zero.
    pub fn radius(&self) -> usize {
        self.reach
    }

    /// Smallest and largest site that may hold a nonzero amplitude.
    pub fn support(&self) -> (isize, isize) {
        (self.lo, self.hi)
    }

    /// `[L, S, R]` amplitudes at site `x`.
    pub fn amplitudes(&self, x: isize) -> [A; 3] {
        if x < self.lo || x > self.hi {
            return [A::zero(); 3];
        }
        let (l, s, r) = self.indices(x);
        [self.left[l], self.stay[s], self.right[r]]
    }

    /// Coin-summed probabilities for `x = -radius..=radius`.
    pub fn site_probabilities(&self) -> Vec<A::Real> {
        let zero = <A::Real as num_traits::Zero>::zero();
        let mut out = vec![zero; 2 * self.reach + 1];
        let offset = self.reach as isize;
        for x in self.lo..=self.hi {
            let (l, s, r) = self.indices(x);
            out[(x + offset) as usize] = self.left[l].modulus_sqr()
                + self.stay[s].modulus_sqr()
                + self.right[r].modulus_sqr();
        }
        out
    }

    pub fn norm_sqr(&self) -> A::Real {
        self.site_probabilities()
            .into_iter()
            .fold(<A::Real as num_traits::Zero>::zero(), |acc, p| acc + p)
    }

    /// One application of `S · (C ⊗ I)`.
    pub fn step(&mut self, coin: &CoinOperator<A::Real>) -> Result<()> {
        if self.reach + 1 > self.capacity {
            return Err(Error::Capacity {
                steps: self.time + 1,
                capacity: self.capacity,
            });
        }
        let _mode = FlushDenormals::enable();
        let n = (self.hi - self.lo + 1) as usize;
        let (l0, s0, r0) = self.indices(self.lo);
        let left = &mut self.left[l0..l0 + n];
        let stay = &mut self.stay[s0..s0 + n];
        let right = &mut self.right[r0..r0 + n];
        for ((l, s), r) in left.iter_mut().zip(stay.iter_mut()).zip(right.iter_mut()) {
            let [a, b, c] = coin.apply([*l, *s, *r]);
            *l = a;
            *s = b;
            *r = c;
        }
        self.left_origin += 1;
        self.right_origin -= 1;
        self.reach += 1;
        self.time += 1;
        self.lo -= 1;
        self.hi += 1;
        self.trim();
        Ok(())
    }

    /// Adds the amplitudes of every site into `acc`, indexed by
    /// `x + capacity`.
    pub fn accumulate_into(&self, acc: &mut [[A; 3]]) {
        assert_eq!(acc.len(), 2 * self.capacity + 1, "accumulator size");
        let n = (self.hi - self.lo + 1) as usize;
        let (l0, s0, r0) = self.indices(self.lo);
        let a0 = (self.lo + self.capacity as isize) as usize;
        for (i, slot) in acc[a0..a0 + n].iter_mut().enumerate() {
            slot[0] = slot[0] + self.left[l0 + i];
            slot[1] = slot[1] + self.stay[s0 + i];
            slot[2] = slot[2] + self.right[r0 + i];
        }
    }

    /// Runs `count` steps, stopping at the first capacity error.
    pub fn advance(&mut self, coin: &CoinOperator<A::Real>, count: usize) -> Result<()> {
        for _ in 0..count {
            self.step(coin)?;
        }
        Ok(())
    }
}

/// Symmetric θ-input at the origin, sized for `capacity` steps, with its
/// closed-form eigenbasis decomposition.
pub fn initial_state<A: Amplitude>(
    theta: MixingAngle<A::Real>,
    rho: CoinParameter<A::Real>,
    capacity: usize,
) -> Result<(WalkState<A>, InputDecomposition<A::Real>)> {
    let state = WalkState::localized(theta.coin_state().map(A::from_real), capacity)?;
    Ok((state, InputDecomposition::symmetric(theta, rho)))
}

/// Which steps of an evolution get recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cadence {
    /// Every `n`-th step.
    Every(usize),
    /// `t = round(factor^k)` for k = 0, 1, …
    Geometric(f64),
    /// An explicit list of steps.
    Times(Vec<usize>),
}

impl Default for Cadence {
    fn default() -> Self {
        Cadence::Geometric(1.25)
    }
}

impl Cadence {
    pub fn validate(&self) -> Result<()> {
        match self {
            Cadence::Every(0) => Err(Error::Config("cadence every:0 records nothing".into())),
            Cadence::Geometric(f) if !(*f > 1.0) || !f.is_finite() => Err(Error::Config(
                format!("geometric cadence factor must exceed 1, got {f}"),
            )),
            _ => Ok(()),
        }
    }

    /// Recorded steps for a run of `steps` steps: sorted, deduplicated, and
    /// always containing `0` and `steps`.
    pub fn times(&self, steps: usize) -> Vec<usize> {
        let mut out = vec![0];
        match self {
            Cadence::Every(n) => out.extend((1..=steps).filter(|t| t % n.max(&1) == 0)),
            Cadence::Geometric(f) => {
                let mut k = 0i32;
                loop {
                    let t = f.powi(k).round() as usize;
                    if t > steps {
                        break;
                    }
                    out.push(t);
                    k += 1;
                }
            }
            Cadence::Times(ts) => out.extend(ts.iter().copied().filter(|&t| t <= steps)),
        }
        out.push(steps);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Text form used in file headers and on the command line.
    pub fn label(&self) -> String {
        match self {
            Cadence::Every(n) => format!("every:{n}"),
            Cadence::Geometric(f) => format!("geometric:{f}"),
            Cadence::Times(ts) => {
                let list: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                format!("times:{}", list.join(","))
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (kind, arg) = text
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("cadence '{text}' is not kind:value")))?;
        let bad = |e: &dyn std::fmt::Display| Error::Config(format!("cadence '{text}': {e}"));
        let cadence = match kind.trim() {
            "every" => Cadence::Every(arg.trim().parse().map_err(|e| bad(&e))?),
            "geometric" => Cadence::Geometric(arg.trim().parse().map_err(|e| bad(&e))?),
            "times" => Cadence::Times(
                arg.split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse().map_err(|e| bad(&e)))
                    .collect::<Result<_>>()?,
            ),
            other => return Err(Error::Config(format!("unknown cadence kind '{other}'"))),
        };
        cadence.validate()?;
        Ok(cadence)
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvolveOptions {
    pub cadence: Cadence,
    /// Track the right wavefront at every recorded step.
    pub wavefront: bool,
    /// Steps at which the full distribution is kept.
    pub snapshots: Vec<usize>,
}

/// Output of [`evolve_with`].
#[derive(Debug, Clone)]
pub struct Evolution<T> {
    pub series: TimeSeries<T>,
    pub snapshots: Vec<SpatialDistribution<T>>,
}

/// Evolves the symmetric θ-input for `steps` steps and records SP and PR at
/// the requested cadence.
pub fn evolve<A: Amplitude>(
    theta: MixingAngle<A::Real>,
    rho: CoinParameter<A::Real>,
    steps: usize,
    cadence: Cadence,
) -> Result<TimeSeries<A::Real>> {
    let options = EvolveOptions {
        cadence,
        ..EvolveOptions::default()
    };
    Ok(evolve_with::<A>(theta, rho, steps, &options)?.series)
}

pub fn evolve_with<A: Amplitude>(
    theta: MixingAngle<A::Real>,
    rho: CoinParameter<A::Real>,
    steps: usize,
    options: &EvolveOptions,
) -> Result<Evolution<A::Real>> {
    options.cadence.validate()?;
    let coin = CoinOperator::new(rho);
    let (mut state, _) = initial_state::<A>(theta, rho, steps.max(1))?;

    let mut record_at = options.cadence.times(steps);
    record_at.extend(options.snapshots.iter().copied().filter(|&t| t <= steps));
    record_at.sort_unstable();
    record_at.dedup();
    let cadence_times = options.cadence.times(steps);

    let mut records = Vec::with_capacity(cadence_times.len());
    let mut snapshots = Vec::new();
    for &t in &record_at {
        state.advance(&coin, t - state.time())?;
        let dist = observables::distribution(&state);
        if cadence_times.binary_search(&t).is_ok() {
            let front = if options.wavefront && t >= 1 {
                observables::wavefront(&dist, rho.value()).ok()
            } else {
                None
            };
            records.push(Record {
                t,
                sp: observables::survival_probability(&dist),
                pr: observables::participation_ratio(&dist),
                front,
            });
        }
        if options.snapshots.contains(&t) {
            snapshots.push(dist);
        }
    }

    let metadata = RunMetadata::simulation(
        rho.value().as_f64(),
        theta.value().as_f64(),
        steps,
        &options.cadence,
        rho.is_degenerate(),
    );
    Ok(Evolution {
        series: TimeSeries::new(metadata, records)?,
        snapshots,
    })
}

/// Long-time limits of SP and PR estimated from the time-averaged state.
///
/// Amplitude that stays near the origin does so in eigenstates of the walk
/// with eigenvalue 1, so averaging the state over a window keeps it intact
/// while the spreading part averages away. With the averaged state `ψ̄`,
/// `sp = Σ_c |ψ̄_{0,c}|²`, `pr = 1/Σ_x P̄_x²` and `trapped = Σ_x P̄_x`; these
/// are the `t → ∞` values of SP (time-averaged) and PR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarySample<T> {
    /// Last step of the averaging window `(t/2, t]`.
    pub t: usize,
    pub sp: T,
    pub pr: T,
    pub trapped: T,
}

/// Averages the state over consecutive windows `(t/2, t]` for
/// `t = first·2^k`, `k = 0..=doublings`, and reports the limits for each.
pub fn stationary_limits<A: Amplitude>(
    theta: MixingAngle<A::Real>,
    rho: CoinParameter<A::Real>,
    first: usize,
    doublings: u32,
) -> Result<Vec<StationarySample<A::Real>>> {
    if first < 2 {
        return Err(Error::domain("first", first as f64, ">= 2"));
    }
    let last = 1usize
        .checked_shl(doublings)
        .and_then(|m| first.checked_mul(m))
        .ok_or_else(|| Error::Config(format!("{first}·2^{doublings} steps overflow")))?;
    let coin = CoinOperator::new(rho);
    let (mut state, _) = initial_state::<A>(theta, rho, last)?;
    let mut acc = vec![[A::zero(); 3]; 2 * last + 1];
    let mut out = Vec::with_capacity(doublings as usize + 1);
    let mut start = first / 2;
    state.advance(&coin, start)?;
    for k in 0..=doublings {
        let end = first << k;
        for slot in acc.iter_mut() {
            *slot = [A::zero(); 3];
        }
        while state.time() < end {
            state.step(&coin)?;
            state.accumulate_into(&mut acc);
        }
        let scale = <A::Real as num_traits::One>::one() / A::Real::of_usize(end - start);
        let zero = <A::Real as num_traits::Zero>::zero();
        let (mut trapped, mut ipr) = (zero, zero);
        let mut sp = zero;
        for (i, site) in acc.iter().enumerate() {
            let p = site
                .iter()
                .fold(zero, |a, &amp| a + (amp * scale).modulus_sqr());
            trapped = trapped + p;
            ipr = ipr + p * p;
            if i == last {
                sp = p;
            }
        }
        out.push(StationarySample {
            t: end,
            sp,
            pr: if ipr > zero { <A::Real as num_traits::One>::one() / ipr } else { <A::Real as num_traits::Float>::infinity() },
            trapped,
        });
        start = end;
    }
    Ok(out)
}
