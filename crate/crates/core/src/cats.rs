//! Construction of two-component cat states and the three-step preparation
//! of the long-lived symmetric ones.
//!
//! A symmetric cat superposes the coherent pair (θ, φ) and (π−θ, φ): both
//! components share the approximate lowering eigenvalue j·sinθ, so the
//! collective damping cannot tell them apart and their coherence survives on
//! the classical time scale.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64 as C64;

use crate::dynamics::{propagate_dispersive, PhysicalParams};
use crate::error::{Error, Result};
use crate::spinalg::{
    coherent_vector, overlap, rotation_matrix, CoherentSpec, DickeVector, SpinSystem,
};

/// Two coherent components with complex coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatSpec {
    pub a: CoherentSpec,
    pub b: CoherentSpec,
    pub c1: C64,
    pub c2: C64,
}

impl CatSpec {
    pub fn new(a: CoherentSpec, b: CoherentSpec, c1: C64, c2: C64) -> Self {
        Self { a, b, c1, c2 }
    }

    /// The equal-weight polar pair (|j,j⟩ + |j,−j⟩)/√2.
    pub fn polar() -> Self {
        let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            a: CoherentSpec::north(),
            b: CoherentSpec::south(),
            c1: w,
            c2: w,
        }
    }

    /// Components mirror-symmetric about the equator at a common azimuth
    /// (θ_b = π−θ_a, φ_a = φ_b): the long-lived family.
    pub fn is_symmetric(&self) -> bool {
        let mirrored = (self.b.theta() - (PI - self.a.theta())).abs() < 1e-12;
        let poles = self.a.theta() == 0.0 || self.a.theta() == PI;
        // φ is canonicalized away at the poles; elsewhere it must match.
        mirrored && (poles || (self.a.phi() - self.b.phi()).abs() < 1e-12)
    }
}

/// The normalized superposition c₁|γ₁⟩ + c₂|γ₂⟩. Normalization divides by
/// √(|c₁|² + |c₂|² + 2·Re(c₁*·c₂·⟨γ₁|γ₂⟩)), which includes the cross term.
pub fn build_cat(spec: &CatSpec, sys: SpinSystem) -> Result<DickeVector> {
    if spec.c1 == C64::ZERO && spec.c2 == C64::ZERO {
        return Err(Error::ZeroCatCoefficients);
    }
    let va = coherent_vector(&spec.a, sys);
    let vb = coherent_vector(&spec.b, sys);
    // √(|c₁|² + |c₂|² + 2·Re(c₁*·c₂·⟨γ₁|γ₂⟩)) evaluated as the norm of the
    // constructed vector, which is the same quantity but does not amplify
    // rounding when the components nearly cancel.
    let amp = va.amp() * spec.c1 + vb.amp() * spec.c2;
    let denominator = amp.norm();
    if denominator < 1e-14 {
        return Err(Error::DegenerateCat { denominator });
    }
    let amp = amp / C64::new(denominator, 0.0);
    DickeVector::new(sys, amp)
}

/// Times t = π/(m·η) at which the dispersive evolution of a coherent state
/// splits into m components; m must be even and positive.
pub fn multi_component_times(params: &PhysicalParams, m: i64) -> Result<f64> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidComponentCount { m });
    }
    let eta = params.eta();
    if eta == 0.0 {
        return Err(Error::ZeroDispersiveShift);
    }
    Ok(PI / (m as f64 * eta))
}

/// Closed-form two-component superposition reached by dispersive evolution of
/// |θ,φ⟩ at t = π/(2η), for N = 2j atoms:
///
///   i^{−N}·( e^{iπ/4}|θ, φ−(N−1)π/2⟩ + e^{−iπ/4}|θ, φ−(N−3)π/2⟩ )/√2.
///
/// Built directly from coherent vectors, independent of the phase propagator,
/// so it doubles as a cross-check of it.
pub fn dispersive_cat_reference(theta: f64, phi: f64, sys: SpinSystem) -> Result<DickeVector> {
    let n = f64::from(sys.two_j());
    let global = C64::from_polar(1.0, -n * FRAC_PI_2);
    let first = CoherentSpec::new(theta, (phi - (n - 1.0) * FRAC_PI_2).rem_euclid(TAU))?;
    let second = CoherentSpec::new(theta, (phi - (n - 3.0) * FRAC_PI_2).rem_euclid(TAU))?;
    let w = 0.5_f64.sqrt();
    let c1 = global * C64::from_polar(w, PI / 4.0);
    let c2 = global * C64::from_polar(w, -PI / 4.0);
    let va = coherent_vector(&first, sys);
    let vb = coherent_vector(&second, sys);
    DickeVector::new(sys, va.amp() * c1 + vb.amp() * c2)
}

/// Intermediate states of the three-step preparation.
#[derive(Debug, Clone)]
pub struct PreparationRecord {
    /// After the resonant pulse: the coherent state (θ, φ).
    pub after_pulse: DickeVector,
    /// After dispersive evolution for t = π/(2η): two components at a common
    /// polar angle, azimuths φ′ and φ′+π.
    pub after_dispersive: DickeVector,
    /// After the final π/2 pulse: the symmetric cat.
    pub final_state: DickeVector,
    /// Azimuth φ′ of the first dispersive component.
    pub component_azimuth: f64,
    /// Axis parameter of the final rotation.
    pub rotation_axis_phi: f64,
    /// Duration of the dispersive step in seconds.
    pub dispersive_time: f64,
}

/// Three-step preparation of a long-lived symmetric cat, with dissipation off
/// throughout (the detuned cavity suppresses it):
///
/// 1. a resonant pulse rotates |j,j⟩ into the coherent state (θ, φ);
/// 2. free dispersive evolution for t = π/(2η) splits it into two components
///    with azimuths φ′ and φ′+π;
/// 3. a π/2 pulse about the equatorial axis perpendicular to the plane of the
///    two components rotates the pair onto {(π/2−θ, φ′+π), (π/2+θ, φ′+π)},
///    mirror-symmetric about the equator. The axis sign is chosen so the
///    first component moves toward the north pole.
pub fn prepare_long_lived_cat_steps(
    theta: f64,
    phi: f64,
    params: &PhysicalParams,
    sys: SpinSystem,
) -> Result<PreparationRecord> {
    if params.n_atoms != sys.two_j() {
        log::warn!(
            "preparation uses N = 2j = {} from the spin system; params.n_atoms = {} ignored for the component azimuths",
            sys.two_j(),
            params.n_atoms
        );
    }
    let target = CoherentSpec::new(theta, phi)?;

    // Step 1: |j,j⟩ → |θ,φ⟩. The rotation convention maps the pole to
    // azimuth axis_phi + π.
    let pulse = rotation_matrix(sys, target.phi() - PI, target.theta());
    let after_pulse = pulse.apply(&DickeVector::basis_state(sys, 0))?;

    // Step 2: dispersive splitting.
    let t = multi_component_times(params, 2)?;
    let after_dispersive = propagate_dispersive(&after_pulse, params, t);
    let n = f64::from(sys.two_j());
    let component_azimuth = (target.phi() - (n - 1.0) * FRAC_PI_2).rem_euclid(TAU);

    // Step 3: π/2 pulse. rotation_matrix(φ′, π/2) rotates about the
    // equatorial axis at azimuth φ′−π/2, which is perpendicular to the
    // meridian plane of the two components and carries the φ′ component
    // toward the north pole.
    let rotation_axis_phi = component_azimuth;
    let half_pulse = rotation_matrix(sys, rotation_axis_phi, FRAC_PI_2);
    let final_state = half_pulse.apply(&after_dispersive)?;

    Ok(PreparationRecord {
        after_pulse,
        after_dispersive,
        final_state,
        component_azimuth,
        rotation_axis_phi,
        dispersive_time: t,
    })
}

/// The final state of [`prepare_long_lived_cat_steps`].
pub fn prepare_long_lived_cat(
    theta: f64,
    phi: f64,
    params: &PhysicalParams,
    sys: SpinSystem,
) -> Result<DickeVector> {
    Ok(prepare_long_lived_cat_steps(theta, phi, params, sys)?.final_state)
}

/// Best decomposition of a ket onto a symmetric coherent pair
/// {(θ, φ), (π−θ, φ)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricFit {
    /// Polar angle of the component in the upper hemisphere, in [0, π/2].
    pub theta: f64,
    pub phi: f64,
    /// Squared norm of the projection onto the two-component span.
    pub captured: f64,
}

/// Squared norm of the projection of `psi` onto span{|θ,φ⟩, |π−θ,φ⟩}.
pub fn symmetric_pair_capture(psi: &DickeVector, theta: f64, phi: f64) -> Result<f64> {
    let sys = psi.sys();
    let spec_a = CoherentSpec::new(theta, phi)?;
    let va = coherent_vector(&spec_a, sys);
    let vb = coherent_vector(&spec_a.equator_mirror(), sys);
    let g12 = overlap(&va, &vb)?;
    let b1 = overlap(&va, psi)?;
    let b2 = overlap(&vb, psi)?;
    let det = 1.0 - g12.norm_sqr();
    let captured = if det < 1e-10 {
        // Components (nearly) coincide; the span is one-dimensional.
        b1.norm_sqr().max(b2.norm_sqr())
    } else {
        // Solve the 2×2 Gram system; captured = b†G⁻¹b.
        let x1 = (b1 - g12 * b2) / det;
        let x2 = (b2 - g12.conj() * b1) / det;
        (b1.conj() * x1 + b2.conj() * x2).re
    };
    Ok(captured.clamp(0.0, 1.0 + 1e-12))
}

/// Exhaustive scan for the symmetric pair that best captures `psi`: a coarse
/// (θ, φ) grid followed by local grid refinement down to 1e−6 resolution.
pub fn symmetric_decomposition(psi: &DickeVector) -> SymmetricFit {
    let capture = |theta: f64, phi: f64| {
        symmetric_pair_capture(psi, theta, phi).expect("angles kept in range")
    };

    // Coarse pass over the upper hemisphere; pairs are unordered so
    // θ ∈ [0, π/2] covers every symmetric pair.
    let mut best = SymmetricFit {
        theta: 0.0,
        phi: 0.0,
        captured: f64::NEG_INFINITY,
    };
    let coarse_theta = 48;
    let coarse_phi = 96;
    for it in 0..=coarse_theta {
        let theta = FRAC_PI_2 * it as f64 / coarse_theta as f64;
        for ip in 0..coarse_phi {
            let phi = TAU * ip as f64 / coarse_phi as f64;
            let c = capture(theta, phi);
            if c > best.captured {
                best = SymmetricFit {
                    theta,
                    phi,
                    captured: c,
                };
            }
        }
    }

    // Local refinement: shrink the search window around the incumbent until
    // the grid pitch is below 1e−6 in both angles.
    let mut span_theta = FRAC_PI_2 / coarse_theta as f64;
    let mut span_phi = TAU / coarse_phi as f64;
    while span_theta > 1e-6 || span_phi > 1e-6 {
        let mut local = best;
        for it in -4..=4_i32 {
            let theta = (best.theta + f64::from(it) * span_theta / 4.0).clamp(0.0, FRAC_PI_2);
            for ip in -4..=4_i32 {
                let phi = (best.phi + f64::from(ip) * span_phi / 4.0).rem_euclid(TAU);
                let c = capture(theta, phi);
                if c > local.captured {
                    local = SymmetricFit {
                        theta,
                        phi,
                        captured: c,
                    };
                }
            }
        }
        best = local;
        span_theta /= 4.0;
        span_phi /= 4.0;
    }
    best
}
