//! The one-parameter three-state coin, its eigenbasis, and the mixing angle
//! that parameterizes symmetric input states.
//!
//! Coin components are ordered `[L, S, R]` (move left, stay, move right).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Amplitude, Scalar};

/// Coin parameter ρ ∈ [0, 1]. Sets the ballistic front speed.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoinParameter<T>(T);

impl<T: Scalar> CoinParameter<T> {
    pub fn new(rho: T) -> Result<Self> {
        if !(rho >= T::zero() && rho <= T::one()) {
            return Err(Error::domain("rho", rho.as_f64(), "[0, 1]"));
        }
        Ok(CoinParameter(rho))
    }

    /// The standard Grover coin, ρ = 1/√3.
    pub fn grover() -> Self {
        CoinParameter(T::one() / T::of(3.0).sqrt())
    }

    pub fn value(self) -> T {
        self.0
    }

    /// ρ = 0 freezes the walker next to the origin and ρ = 1 never mixes the
    /// left and right components. Both are accepted, but flagged.
    pub fn is_degenerate(self) -> bool {
        self.0 == T::zero() || self.0 == T::one()
    }

    /// √(1 − ρ²)
    pub fn complement(self) -> T {
        (T::one() - self.0 * self.0).max(T::zero()).sqrt()
    }
}

/// Mixing angle θ ∈ [0, π] of the input `cos θ |S⟩ + sin θ (|L⟩ + |R⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixingAngle<T>(T);

impl<T: Scalar> MixingAngle<T> {
    pub fn new(theta: T) -> Result<Self> {
        if !(theta >= T::zero() && theta <= T::PI()) {
            return Err(Error::domain("theta", theta.as_f64(), "[0, pi]"));
        }
        Ok(MixingAngle(theta))
    }

    /// θ = θ_c(ρ) + offset.
    pub fn from_offset(rho: CoinParameter<T>, offset: T) -> Result<Self> {
        Self::new(theta_c(rho).value() + offset)
    }

    pub fn value(self) -> T {
        self.0
    }

    /// Coin part `(sin θ/√2, cos θ, sin θ/√2)` of the symmetric input.
    pub fn coin_state(self) -> [T; 3] {
        let side = self.0.sin() * T::FRAC_1_SQRT_2();
        [side, self.0.cos(), side]
    }
}

/// Detrapping angle θ_c(ρ) = arccos(−√(1 − ρ²)), always in [π/2, π].
///
/// At this angle the symmetric input has no overlap with the +1 eigenvector,
/// so nothing stays trapped at the origin.
pub fn theta_c<T: Scalar>(rho: CoinParameter<T>) -> MixingAngle<T> {
    let angle = (-rho.complement()).acos();
    MixingAngle(angle.max(T::FRAC_PI_2()).min(T::PI()))
}

/// Coefficients of a coin state in the eigenbasis `(σ⁺, σ₁⁻, σ₂⁻)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputDecomposition<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Scalar> InputDecomposition<T> {
    /// Closed-form coefficients of the symmetric input. `gamma` is exactly 0.
    pub fn symmetric(theta: MixingAngle<T>, rho: CoinParameter<T>) -> Self {
        let (sin, cos) = theta.value().sin_cos();
        let r = rho.value();
        let q = rho.complement();
        InputDecomposition {
            alpha: r * cos + q * sin,
            beta: r * sin - q * cos,
            gamma: T::zero(),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.alpha * self.alpha + self.beta * self.beta + self.gamma * self.gamma
    }

    /// Rebuilds the coin 3-vector `α σ⁺ + β σ₁⁻ + γ σ₂⁻`.
    pub fn reconstruct(&self, coin: &CoinOperator<T>) -> [T; 3] {
        let mut out = [T::zero(); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.alpha * coin.sigma_plus[k]
                + self.beta * coin.sigma1_minus[k]
                + self.gamma * coin.sigma2_minus[k];
        }
        out
    }
}

/// The 3×3 coin C(ρ) together with its closed-form eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOperator<T> {
    rho: CoinParameter<T>,
    pub matrix: [[T; 3]; 3],
    /// Eigenvalue +1.
    pub sigma_plus: [T; 3],
    /// Eigenvalue −1, symmetric in L/R.
    pub sigma1_minus: [T; 3],
    /// Eigenvalue −1, antisymmetric in L/R.
    pub sigma2_minus: [T; 3],
    pub eigenvalues: [T; 3],
}

impl<T: Scalar> CoinOperator<T> {
    pub fn new(rho: CoinParameter<T>) -> Self {
        let r = rho.value();
        let r2 = r * r;
        let one = T::one();
        let two = T::of(2.0);
        let off = r * (two - two * r2).max(T::zero()).sqrt();
        let cross = one - r2;
        let matrix = [
            [-r2, off, cross],
            [off, two * r2 - one, off],
            [cross, off, -r2],
        ];

        let half = T::FRAC_1_SQRT_2();
        let q = rho.complement();
        let side = (cross / two).max(T::zero()).sqrt();
        CoinOperator {
            rho,
            matrix,
            sigma_plus: [side, r, side],
            sigma1_minus: [r * half, -q, r * half],
            sigma2_minus: [half, T::zero(), -half],
            eigenvalues: [one, -one, -one],
        }
    }

    pub fn rho(&self) -> CoinParameter<T> {
        self.rho
    }

    /// Applies the coin to one site's `[L, S, R]` amplitudes.
    #[inline(always)]
    pub fn apply<A: Amplitude<Real = T>>(&self, v: [A; 3]) -> [A; 3] {
        let m = &self.matrix;
        [
            v[0] * m[0][0] + v[1] * m[0][1] + v[2] * m[0][2],
            v[0] * m[1][0] + v[1] * m[1][1] + v[2] * m[1][2],
            v[0] * m[2][0] + v[1] * m[2][1] + v[2] * m[2][2],
        ]
    }

    /// Projects a real coin state onto the eigenbasis.
    pub fn decompose(&self, v: [T; 3]) -> InputDecomposition<T> {
        let dot = |e: &[T; 3]| e[0] * v[0] + e[1] * v[1] + e[2] * v[2];
        InputDecomposition {
            alpha: dot(&self.sigma_plus),
            beta: dot(&self.sigma1_minus),
            gamma: dot(&self.sigma2_minus),
        }
    }

    pub fn eigenvectors(&self) -> [[T; 3]; 3] {
        [self.sigma_plus, self.sigma1_minus, self.sigma2_minus]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mat_vec(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = (0..3).map(|j| m[i][j] * v[j]).sum();
        }
        out
    }

    #[test]
    fn grover_limit() {
        let coin = CoinOperator::new(CoinParameter::<f64>::grover());
        let expect = [[-1.0, 2.0, 2.0], [2.0, -1.0, 2.0], [2.0, 2.0, -1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(coin.matrix[i][j], expect[i][j] / 3.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn endpoint_coins() {
        let zero = CoinOperator::new(CoinParameter::new(0.0).unwrap());
        assert_eq!(
            zero.matrix,
            [[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]]
        );
        let one = CoinOperator::new(CoinParameter::new(1.0).unwrap());
        assert_eq!(
            one.matrix,
            [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]
        );
        assert!(CoinParameter::new(0.0).unwrap().is_degenerate());
        assert!(CoinParameter::new(1.0).unwrap().is_degenerate());
        assert!(!CoinParameter::<f64>::grover().is_degenerate());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(CoinParameter::new(1.2).is_err());
        assert!(CoinParameter::new(-0.1).is_err());
        assert!(CoinParameter::new(f64::NAN).is_err());
        assert!(MixingAngle::new(3.2).is_err());
        assert!(MixingAngle::new(-1e-9).is_err());
    }

    #[test]
    fn theta_c_values() {
        let at = |r: f64| theta_c(CoinParameter::new(r).unwrap()).value();
        assert_abs_diff_eq!(at(1.0), std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(at(0.0), std::f64::consts::PI, epsilon = 1e-15);
        let grover = at(1.0 / 3f64.sqrt());
        assert_abs_diff_eq!(grover, 2.526_112_944_919_405, epsilon = 1e-12);
        let d = InputDecomposition::symmetric(
            MixingAngle::new(grover).unwrap(),
            CoinParameter::grover(),
        );
        assert_abs_diff_eq!(d.alpha, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn eigen_relations_across_rho() {
        for k in 0..=20 {
            let rho = k as f64 / 20.0;
            let coin = CoinOperator::new(CoinParameter::new(rho).unwrap());
            let m = coin.matrix;
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(m[i][j], m[j][i]);
                    let ctc: f64 = (0..3).map(|l| m[l][i] * m[l][j]).sum();
                    let id = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(ctc, id, epsilon = 1e-12);
                }
            }
            let vecs = coin.eigenvectors();
            for (v, lambda) in vecs.iter().zip(coin.eigenvalues) {
                let cv = mat_vec(&m, v);
                for c in 0..3 {
                    assert_abs_diff_eq!(cv[c], lambda * v[c], epsilon = 1e-12);
                }
            }
            for a in 0..3 {
                for b in 0..3 {
                    let dot: f64 = (0..3).map(|c| vecs[a][c] * vecs[b][c]).sum();
                    let id = if a == b { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(dot, id, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn symmetric_decomposition_examples() {
        let rho = CoinParameter::<f64>::grover();
        let d = InputDecomposition::symmetric(MixingAngle::new(0.0).unwrap(), rho);
        assert_abs_diff_eq!(d.alpha, rho.value(), epsilon = 1e-15);
        assert_abs_diff_eq!(d.beta, -(2.0f64 / 3.0).sqrt(), epsilon = 1e-15);

        let d = InputDecomposition::symmetric(
            MixingAngle::new(std::f64::consts::FRAC_PI_2).unwrap(),
            rho,
        );
        assert_abs_diff_eq!(d.alpha, (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(d.beta, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(d.gamma, 0.0);
    }

    #[test]
    fn at_theta_c_input_is_sigma1_minus() {
        for k in 1..20 {
            let rho = CoinParameter::new(k as f64 / 20.0).unwrap();
            let coin = CoinOperator::new(rho);
            let v = theta_c(rho).coin_state();
            for c in 0..3 {
                assert_abs_diff_eq!(v[c], coin.sigma1_minus[c], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn projection_matches_closed_form() {
        for k in 0..=10 {
            for j in 0..=12 {
                let rho = CoinParameter::new(k as f64 / 10.0).unwrap();
                let theta = MixingAngle::new(std::f64::consts::PI * j as f64 / 12.0).unwrap();
                let coin = CoinOperator::new(rho);
                let projected = coin.decompose(theta.coin_state());
                let closed = InputDecomposition::symmetric(theta, rho);
                assert_abs_diff_eq!(projected.alpha, closed.alpha, epsilon = 1e-12);
                assert_abs_diff_eq!(projected.beta, closed.beta, epsilon = 1e-12);
                assert_abs_diff_eq!(projected.gamma, 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(closed.norm_sqr(), 1.0, epsilon = 1e-12);
                let back = closed.reconstruct(&coin);
                let v = theta.coin_state();
                for c in 0..3 {
                    assert_abs_diff_eq!(back[c], v[c], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn single_precision_coin() {
        let coin = CoinOperator::new(CoinParameter::<f32>::grover());
        assert!((coin.matrix[0][1] - 2.0 / 3.0).abs() < 1e-6);
        assert!((theta_c(CoinParameter::<f32>::grover()).value() - 2.526_113).abs() < 1e-5);
    }
}
