//! Closed-form reference results: the approximate-eigenstate angle, the
//! initial norm slope, the semiclassical norm decay laws, the exact polar-pair
//! decay, and the classical trajectory.
//!
//! These are independent of the numerical propagator and serve as oracles for
//! it. The decay laws are stated for real γ (both azimuths zero); complex
//! amplitudes are outside their domain and are not extrapolated.

use std::f64::consts::PI;

/// Initial decay rate of the Hilbert–Schmidt norm of a coherent-state dyad,
/// split into its classical-scale and fast (∝ j) parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopePrediction {
    /// Classical-time-scale term, −½((1+cosθ₁)² + (1+cosθ₂)²).
    pub slow: f64,
    /// Term proportional to j; vanishes exactly when φ₁ = φ₂ and sinθ₁ = sinθ₂.
    pub fast: f64,
    pub total: f64,
}

/// cos²α for the angle α between J₋|γ⟩ and |γ⟩:
/// sin²θ / (sin²θ + (2/j)·cos⁴(θ/2)).
///
/// Evaluated in the algebraically reduced form
/// 4·sin²(θ/2) / (4·sin²(θ/2) + (2/j)·cos²(θ/2)), which is exact for θ ≠ π
/// and returns the limiting value 1 at the south pole, where the raw ratio
/// is 0/0.
pub fn cos2_alpha(theta: f64, j: f64) -> f64 {
    let s2 = (theta / 2.0).sin().powi(2);
    let c2 = (theta / 2.0).cos().powi(2);
    4.0 * s2 / (4.0 * s2 + (2.0 / j) * c2)
}

/// d/dτ of the Hilbert–Schmidt norm of |γ₁⟩⟨γ₂| at τ = 0.
pub fn n1_initial_slope(theta1: f64, phi1: f64, theta2: f64, phi2: f64, j: f64) -> SlopePrediction {
    let slow = -0.5 * ((1.0 + theta1.cos()).powi(2) + (1.0 + theta2.cos()).powi(2));
    let (s1, s2) = (theta1.sin(), theta2.sin());
    let fast = -j * (s1 * s1 + s2 * s2 - 2.0 * (phi2 - phi1).cos() * s1 * s2);
    SlopePrediction {
        slow,
        fast,
        total: slow + fast,
    }
}

/// Decay-rate coefficient of the absolute-sum norm of |γ₁⟩⟨γ₂| for real γ,
/// valid to leading order for jτ ≪ 1:
/// 2j·(γ₁−γ₂)²(1−γ₁γ₂)² / ((1+γ₁²)(1+γ₂²))².
pub fn n2_rate_general(gamma1: f64, gamma2: f64, j: f64) -> f64 {
    let num = (gamma1 - gamma2).powi(2) * (1.0 - gamma1 * gamma2).powi(2);
    let den = ((1.0 + gamma1 * gamma1) * (1.0 + gamma2 * gamma2)).powi(2);
    2.0 * j * num / den
}

/// N₂(τ)/N₂(0) for a general real-γ dyad, exp(−rate·τ) with the rate above.
pub fn n2_ratio_general(gamma1: f64, gamma2: f64, j: f64, tau: f64) -> f64 {
    (-n2_rate_general(gamma1, gamma2, j) * tau).exp()
}

/// Linear and quadratic exponent coefficients of N₂ decay for the mirror
/// pair (γ, 1/γ): N₂(τ)/N₂(0) = exp(−a·τ − b·τ²). Both are j-independent.
pub fn n2_coeffs_symmetric(gamma1: f64) -> crate::Result<(f64, f64)> {
    if gamma1 == 0.0 {
        return Err(crate::Error::ZeroGamma);
    }
    let g2 = gamma1 * gamma1;
    let linear = ((g2 - 1.0) / (g2 + 1.0)).powi(2);
    let g4 = g2 * g2;
    let g6 = g4 * g2;
    let g8 = g4 * g4;
    let quadratic = (3.0 * g8 - 3.0 * g6 + 4.0 * g4 - 3.0 * g2 + 3.0) / (2.0 * (g2 + 1.0).powi(4));
    Ok((linear, quadratic))
}

/// N₂(τ)/N₂(0) for the mirror pair (γ₁, 1/γ₁), correct through order (jτ)².
pub fn n2_ratio_symmetric(gamma1: f64, tau: f64) -> crate::Result<f64> {
    let (a, b) = n2_coeffs_symmetric(gamma1)?;
    Ok((-a * tau - b * tau * tau).exp())
}

/// Decay rate of N₂ for a single coherent state (γ = γ₁ = γ₂):
/// γ⁴·((γ²−1)/(γ²+1))².
pub fn n2_rate_diagonal(gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    g2 * g2 * ((g2 - 1.0) / (g2 + 1.0)).powi(2)
}

/// N₂(τ)/N₂(0) for a single coherent state, to linear order in jτ.
pub fn n2_ratio_diagonal(gamma: f64, tau: f64) -> f64 {
    (-n2_rate_diagonal(gamma) * tau).exp()
}

/// Exact norms (N₁, N₂) = (e^{−2τ}, e^{−τ}) of the propagated polar dyad
/// |j,j⟩⟨j,−j|.
pub fn polar_cat_norms(tau: f64) -> (f64, f64) {
    ((-2.0 * tau).exp(), (-tau).exp())
}

/// Solution θ(τ) = 2·arctan(tan(θ₀/2)·e^τ) of the overdamped-pendulum limit
/// dθ/dτ = sinθ, φ = const. The poles are fixed points and are returned
/// unchanged.
pub fn classical_theta(theta0: f64, tau: f64) -> f64 {
    if theta0 == 0.0 || theta0 == PI {
        return theta0;
    }
    2.0 * ((theta0 / 2.0).tan() * tau.exp()).atan()
}
