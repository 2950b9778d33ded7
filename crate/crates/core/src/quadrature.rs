//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! Used as an independent check on the closed-form oracle integrals, so it
//! makes no assumptions about the integrand beyond integrability. Endpoint
//! singularities are handled by repeated bisection of the worst interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-13,
            rel: 1e-11,
            max_intervals: 20_000,
        }
    }
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T: Scalar> Eq for Piece<T> {}

impl<T: Scalar> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn gauss_kronrod<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Piece<T> {
    let half = (b - a) / T::of(2.0);
    let mid = (a + b) / T::of(2.0);
    let centre = f(mid);
    let mut kronrod = centre * T::of(KRONROD_WEIGHTS[7]);
    let mut gauss = centre * T::of(GAUSS_WEIGHTS[3]);
    for i in 0..7 {
        let dx = half * T::of(KRONROD_NODES[i]);
        let pair = f(mid - dx) + f(mid + dx);
        kronrod = kronrod + pair * T::of(KRONROD_WEIGHTS[i]);
        if i % 2 == 1 {
            gauss = gauss + pair * T::of(GAUSS_WEIGHTS[i / 2]);
        }
    }
    Piece {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`. Fails if the tolerance is not met within
/// `tol.max_intervals` subintervals or the integrand produces a non-finite
/// value.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(f: F, a: T, b: T, tol: Tolerance) -> Result<Quadrature<T>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Precondition("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    loop {
        if !value.is_finite() {
            return Err(Error::Precondition("integrand is not finite on the interval".into()));
        }
        let target = T::of(tol.abs).max(T::of(tol.rel) * value.abs());
        if error <= target {
            break;
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::InsufficientData(format!(
                "quadrature did not converge: error {error:e} after {} intervals",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap holds at least one piece");
        let mid = (worst.a + worst.b) / T::of(2.0);
        if mid <= worst.a || mid >= worst.b {
            // Interval no longer splittable in this precision.
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    let (value, error) = heap
        .iter()
        .fold((T::zero(), T::zero()), |(v, e), p| (v + p.value, e + p.error));
    Ok(Quadrature {
        value,
        error,
        intervals: heap.len(),
    })
}
