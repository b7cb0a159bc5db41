//! Measured quantities: coherence norms, Bloch-vector expectations, the
//! numerical approximate-eigenstate angle, and decay-rate extraction.
//!
//! The absolute-sum norm N₂ is basis dependent; everything here is pinned to
//! the Dicke basis the rest of the crate uses.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::dynamics::{propagate_signed, PropagatorConfig};
use crate::error::{Error, Result};
use crate::spinalg::{coherent_vector, CoherentSpec, SpinOperator, SpinSystem};

/// Which coherence norm to track.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Hilbert–Schmidt: tr ρρ† = Σ |ρ_{m₁,m₂}|².
    N1,
    /// Entrywise absolute sum Σ |ρ_{m₁,m₂}|.
    N2,
}

/// N₁ = tr ρρ†.
pub fn norm_hs(rho: &SpinOperator) -> f64 {
    rho.mat().iter().map(|z| z.norm_sqr()).sum()
}

/// N₂ = Σ_{m₁,m₂} |⟨j,m₁|ρ|j,m₂⟩|.
pub fn norm_abs(rho: &SpinOperator) -> f64 {
    rho.mat().iter().map(|z| z.norm()).sum()
}

pub fn norm_of(rho: &SpinOperator, kind: NormKind) -> f64 {
    match kind {
        NormKind::N1 => norm_hs(rho),
        NormKind::N2 => norm_abs(rho),
    }
}

/// A derivative estimate together with the spread of its extrapolation
/// ladder, which bounds the truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub error_estimate: f64,
}

/// dN/dτ at τ = 0 by centered differences of the propagated norm with two
/// Richardson extrapolation levels. The base step is 1e−3/(j+1), matching
/// the fastest decay rate in the generator.
pub fn initial_slope(
    rho0: &SpinOperator,
    kind: NormKind,
    cfg: &PropagatorConfig,
) -> Result<SlopeEstimate> {
    let h = 1e-3 / (rho0.sys().j() + 1.0);
    let norm_at =
        |tau: f64| -> Result<f64> { Ok(norm_of(&propagate_signed(rho0, tau, cfg)?, kind)) };
    let centered = |h: f64| -> Result<f64> { Ok((norm_at(h)? - norm_at(-h)?) / (2.0 * h)) };
    let d1 = centered(h)?;
    let d2 = centered(h / 2.0)?;
    let d3 = centered(h / 4.0)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    let r3 = (16.0 * r2 - r1) / 15.0;
    let error = (r3 - r2).abs().max(f64::EPSILON * r3.abs());
    Ok(SlopeEstimate {
        slope: r3,
        error_estimate: error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// ln N = b₀ − rate·τ
    Linear,
    /// ln N = b₀ − rate·τ − quadratic·τ²
    Quadratic,
}

/// Least-squares decay fit of ln N over a sample window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub rate: f64,
    /// Zero for the linear model.
    pub quadratic: f64,
    pub window: (f64, f64),
    /// Max absolute deviation of the fit from ln N over the window.
    pub residual: f64,
}

/// Fit ln N against −rate·τ (− quadratic·τ²) by SVD least squares.
pub fn fit_decay(samples: &[(f64, f64)], model: FitModel) -> Result<DecayFit> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    for &(tau, n) in samples {
        if !(n > 0.0) {
            return Err(Error::NonPositiveSample { tau, value: n });
        }
    }
    let cols = match model {
        FitModel::Linear => 2,
        FitModel::Quadratic => 3,
    };
    let rows = samples.len();
    let design = DMatrix::from_fn(rows, cols, |r, c| {
        let tau = samples[r].0;
        match c {
            0 => 1.0,
            1 => -tau,
            _ => -tau * tau,
        }
    });
    let target = DVector::from_iterator(rows, samples.iter().map(|&(_, n)| n.ln()));

    let svd = design.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * sigma_max {
        return Err(Error::RankDeficientFit);
    }
    let beta = svd
        .solve(&target, 0.0)
        .map_err(|_| Error::RankDeficientFit)?;

    let fitted = design * &beta;
    let residual = (&fitted - &target).amax();
    let window = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(t, _)| {
            (lo.min(t), hi.max(t))
        });
    Ok(DecayFit {
        rate: beta[1],
        quadratic: if cols == 3 { beta[2] } else { 0.0 },
        window,
        residual,
    })
}

/// Normalized Bloch vector (⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)/tr ρ (real parts).
pub fn bloch_vector(rho: &SpinOperator) -> Result<[f64; 3]> {
    let sys = rho.sys();
    let dim = sys.dim();
    let mat = rho.mat();
    let trace = rho.trace();
    if trace.norm() <= 1e-14 * (1.0 + norm_hs(rho).sqrt()) {
        return Err(Error::ZeroTrace);
    }
    let mut tr_jp = C64::ZERO; // tr(ρJ₊) = Σ_k ρ_{k,k−1}·c_{k−1}
    let mut tr_jm = C64::ZERO; // tr(ρJ₋) = Σ_k ρ_{k,k+1}·c_k
    let mut tr_jz = C64::ZERO;
    for k in 0..dim {
        if k > 0 {
            tr_jp += mat[(k, k - 1)] * sys.ladder_coeff_at(k - 1);
        }
        if k + 1 < dim {
            tr_jm += mat[(k, k + 1)] * sys.ladder_coeff_at(k);
        }
        tr_jz += mat[(k, k)] * sys.m_at(k);
    }
    let jx = (tr_jp + tr_jm) * C64::new(0.5, 0.0) / trace;
    let jy = (tr_jp - tr_jm) * C64::new(0.0, -0.5) / trace;
    let jz = tr_jz / trace;
    Ok([jx.re, jy.re, jz.re])
}

/// cos²α from exact matrix elements: |⟨γ|J₋|γ⟩|² / (⟨γ|γ⟩·⟨γ|J₊J₋|γ⟩).
///
/// Returns 0 at the north pole (numerator vanishes) and 1 at the south pole,
/// where the ratio is 0/0 and the limiting value is adopted; the closed form
/// in [`crate::analytics::cos2_alpha`] uses the same convention.
pub fn eigen_angle(spec: &CoherentSpec, sys: SpinSystem) -> f64 {
    let v = coherent_vector(spec, sys);
    let amp = v.amp();
    // (J₋v)[k] = c_{k−1}·v[k−1]
    let lowered = DVector::from_iterator(
        sys.dim(),
        (0..sys.dim()).map(|k| {
            if k == 0 {
                C64::ZERO
            } else {
                amp[k - 1] * sys.ladder_coeff_at(k - 1)
            }
        }),
    );
    let denominator = lowered.norm_squared();
    if denominator == 0.0 {
        return 1.0;
    }
    amp.dotc(&lowered).norm_sqr() / denominator
}
