//! The verification harness: every acceptance criterion as an executable
//! check with pinned tolerances, shared by `spincat verify` and the
//! acceptance test suite.
//!
//! Each criterion reports one pass/fail line plus the measured numbers it
//! was judged on. Criteria 4 and 5 compare the propagated dynamics against
//! closed-form decay laws exactly as printed; where direct numerics of the
//! master equation disagree with those printed laws the criterion fails
//! honestly and the details carry diagnostic lines showing what the dynamics
//! actually does (see the verification notes in the README).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

use crate::analytics;
use crate::cats::{
    dispersive_cat_reference, multi_component_times, prepare_long_lived_cat,
    symmetric_decomposition,
};
use crate::cli::commands::n2_decay_samples;
use crate::dynamics::{
    lindblad_apply, propagate, propagate_dispersive, Method, PhysicalParams, PropagatorConfig,
};
use crate::observables::{
    bloch_vector, fit_decay, initial_slope, norm_abs, norm_hs, FitModel, NormKind,
};
use crate::spinalg::{
    coherent_vector, dyad, jz_matrix, lowering_matrix, max_entry_norm, overlap, raising_matrix,
    rotation_matrix, CoherentSpec, DickeVector, SpinOperator, SpinSystem,
};

/// Result of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn summary_line(&self) -> String {
        format!(
            "{} criterion {} {} ({:.2}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "pass": self.pass,
            "details": self.details,
            "seconds": self.seconds,
        })
    }
}

/// Physical parameters used wherever a criterion needs dispersive evolution:
/// strongly detuned (|δ| = 17.5·κ) and overdamped for the system sizes used.
fn verify_params(sys: SpinSystem) -> PhysicalParams {
    PhysicalParams {
        g: 0.05,
        kappa: 4.0,
        delta: 70.0,
        n_atoms: sys.two_j(),
    }
}

fn polar_dyad(sys: SpinSystem) -> SpinOperator {
    let north = DickeVector::basis_state(sys, 0);
    let south = DickeVector::basis_state(sys, sys.dim() - 1);
    dyad(&north, &south).expect("same system")
}

/// Small deterministic generator for test operators (split-mix style); keeps
/// the harness free of RNG dependencies and identical across platforms.
struct DetRng(u64);

impl DetRng {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn operator(&mut self, sys: SpinSystem) -> SpinOperator {
        let dim = sys.dim();
        let mat = DMatrix::from_fn(dim, dim, |_, _| {
            C64::new(self.uniform() - 0.5, self.uniform() - 0.5)
        });
        SpinOperator::new(sys, mat).expect("square")
    }

    fn density(&mut self, sys: SpinSystem) -> SpinOperator {
        let a = self.operator(sys);
        let m = a.mat() * a.mat().adjoint();
        let tr = m.trace();
        SpinOperator::new(sys, m / tr).expect("square")
    }
}

/// Polar-pair exactness: propagated norms of |j,j⟩⟨j,−j| match
/// (e^{−2τ}, e^{−τ}) to 1e−8 absolute for j ∈ {5, 10, 25}, τ ∈ [0, 3].
pub fn criterion_1_polar_pair_exact_decay() -> CriterionOutcome {
    criterion_1_polar_pair_exact_decay_with(&PropagatorConfig::default())
}

/// Same check with an injectable propagator configuration, so degraded
/// numerics are demonstrably caught rather than silently absorbed.
pub fn criterion_1_polar_pair_exact_decay_with(cfg: &PropagatorConfig) -> CriterionOutcome {
    let start = Instant::now();
    let cfg = *cfg;
    let mut details = Vec::new();
    let mut worst: f64 = 0.0;
    for two_j in [10u32, 20, 50] {
        let sys = SpinSystem::new(two_j);
        let mut rho = polar_dyad(sys);
        let mut max_dev: f64 = 0.0;
        for i in 1..=30 {
            rho = propagate(&rho, 0.1, &cfg).expect("propagation");
            let tau = 0.1 * i as f64;
            let (n1_ref, n2_ref) = analytics::polar_cat_norms(tau);
            max_dev = max_dev
                .max((norm_hs(&rho) - n1_ref).abs())
                .max((norm_abs(&rho) - n2_ref).abs());
        }
        details.push(format!(
            "j={}: max |N - exact| = {max_dev:.3e} (tol 1e-8)",
            sys.j()
        ));
        worst = worst.max(max_dev);
    }
    CriterionOutcome {
        id: 1,
        name: "polar_pair_exact_decay",
        pass: worst <= 1e-8,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Initial-slope law: finite-difference dN₁/dτ at τ=0 matches the closed
/// form within 1e-4 relative over 25 orientation triples at j ∈ {10, 40}.
pub fn criterion_2_initial_slope_law() -> CriterionOutcome {
    criterion_2_initial_slope_law_with(&PropagatorConfig::default())
}

/// Same check with an injectable propagator configuration, so degraded
/// numerics are demonstrably caught rather than silently absorbed.
pub fn criterion_2_initial_slope_law_with(cfg: &PropagatorConfig) -> CriterionOutcome {
    let start = Instant::now();
    let cfg = *cfg;
    let thetas = [0.4, 0.9, FRAC_PI_2, 2.2, 2.8];
    let dphis = [0.0, FRAC_PI_4, FRAC_PI_2, 2.0 * FRAC_PI_3, PI];
    let mut details = Vec::new();
    let mut worst: f64 = 0.0;
    for two_j in [20u32, 80] {
        let sys = SpinSystem::new(two_j);
        let j = sys.j();
        let mut max_rel: f64 = 0.0;
        for a in 0..5 {
            for b in 0..5 {
                let (theta1, theta2) = (thetas[a], thetas[b]);
                let dphi = dphis[(a + b) % 5];
                let va = coherent_vector(&CoherentSpec::new(theta1, 0.0).unwrap(), sys);
                let vb = coherent_vector(&CoherentSpec::new(theta2, dphi).unwrap(), sys);
                let rho = dyad(&va, &vb).expect("same system");
                let measured = initial_slope(&rho, NormKind::N1, &cfg)
                    .expect("slope")
                    .slope;
                let predicted = analytics::n1_initial_slope(theta1, 0.0, theta2, dphi, j).total;
                max_rel = max_rel.max((measured - predicted).abs() / predicted.abs());
            }
        }
        details.push(format!(
            "j={j}: max relative slope error = {max_rel:.3e} (tol 1e-4)"
        ));
        worst = worst.max(max_rel);
    }
    CriterionOutcome {
        id: 2,
        name: "initial_slope_law",
        pass: worst <= 1e-4,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Pinned γ-pairs for the fast-decoherence law: real, γ₁γ₂ ≠ 1, and both
/// components well away from the poles, where the semiclassical law applies.
pub const FAST_PAIRS: [(f64, f64); 5] = [
    (0.8, 0.35),
    (1.0, 0.4),
    (1.0, 0.45),
    (1.2, 0.4),
    (1.5, 0.35),
];

/// Fast decoherence: fitted N₂ rate of |γ₁⟩⟨γ₂| over jτ ∈ [0, 0.1] matches
/// 2j(γ₁−γ₂)²(1−γ₁γ₂)²/((1+γ₁²)(1+γ₂²))² within 5/j for j ∈ {50, 100}.
pub fn criterion_3_fast_decoherence_rate() -> CriterionOutcome {
    let start = Instant::now();
    let cfg = PropagatorConfig::default();
    let mut details = Vec::new();
    let mut pass = true;
    for two_j in [100u32, 200] {
        let sys = SpinSystem::new(two_j);
        let j = sys.j();
        let tol = 5.0 / j;
        let mut max_rel: f64 = 0.0;
        for (g1, g2) in FAST_PAIRS {
            let samples = n2_decay_samples(sys, g1, g2, 0.1 / j, 20, &cfg).expect("samples");
            let fit = fit_decay(&samples, FitModel::Linear).expect("fit");
            let predicted = analytics::n2_rate_general(g1, g2, j);
            max_rel = max_rel.max((fit.rate - predicted).abs() / predicted.abs());
        }
        details.push(format!(
            "j={j}: max relative rate deviation = {max_rel:.4} (tol {tol:.3})"
        ));
        pass &= max_rel <= tol;
    }
    CriterionOutcome {
        id: 3,
        name: "fast_decoherence_rate",
        pass,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Mirror-pair longevity, as stated: a quadratic fit of ln N₂ over
/// τ ∈ [0, 0.5] must reproduce both closed-form coefficients within 10/j
/// for γ₁ ∈ {1, 1.5, 2, 3}, j ∈ {50, 100}, and the fitted rate must vary by
/// less than 25% between the two j.
///
/// Diagnostic (non-gating) lines report the same fit over the short window
/// jτ ∈ [0, 0.5], where the quadratic law's own expansion order applies.
pub fn criterion_4_mirror_pair_longevity() -> CriterionOutcome {
    let start = Instant::now();
    let cfg = PropagatorConfig::default();
    let mut details = Vec::new();
    let mut pass = true;
    for g1 in [1.0, 1.5, 2.0, 3.0] {
        let (rate_ref, quad_ref) = analytics::n2_coeffs_symmetric(g1).expect("gamma != 0");
        let mut rates = Vec::new();
        let mut scaled_rates = Vec::new();
        for two_j in [100u32, 200] {
            let sys = SpinSystem::new(two_j);
            let j = sys.j();
            let tol = 10.0 / j;
            let samples = n2_decay_samples(sys, g1, 1.0 / g1, 0.5, 20, &cfg).expect("samples");
            let fit = fit_decay(&samples, FitModel::Quadratic).expect("fit");
            // Zero reference (γ₁ = 1): judge the rate absolutely.
            let rate_dev = if rate_ref == 0.0 {
                fit.rate.abs()
            } else {
                (fit.rate - rate_ref).abs() / rate_ref
            };
            let quad_dev = (fit.quadratic - quad_ref).abs() / quad_ref;
            let ok = rate_dev <= tol && quad_dev <= tol;
            pass &= ok;
            details.push(format!(
                "gamma={g1} j={j}: rate {:.4} (ref {rate_ref:.4}, dev {rate_dev:.3}) quad {:.4} (ref {quad_ref:.4}, dev {quad_dev:.3}) tol {tol:.2} -> {}",
                fit.rate,
                fit.quadratic,
                if ok { "ok" } else { "FAIL" }
            ));
            rates.push(fit.rate);

            let scaled = n2_decay_samples(sys, g1, 1.0 / g1, 0.5 / j, 20, &cfg).expect("samples");
            scaled_rates.push(fit_decay(&scaled, FitModel::Quadratic).expect("fit").rate);
        }
        let variation = (rates[0] - rates[1]).abs() / rates[0].abs().max(rates[1].abs());
        // Rates near zero (γ₁ = 1) have no meaningful relative variation.
        let variation_ok = variation < 0.25 || rates.iter().all(|r| r.abs() < 0.05);
        pass &= variation_ok;
        details.push(format!(
            "gamma={g1}: rate j-variation {:.1}% (tol 25%) -> {}",
            variation * 100.0,
            if variation_ok { "ok" } else { "FAIL" }
        ));
        let scaled_var = (scaled_rates[0] - scaled_rates[1]).abs()
            / scaled_rates[0].abs().max(scaled_rates[1].abs()).max(0.05);
        details.push(format!(
            "gamma={g1}: diagnostic short-window rates j=50: {:.4}, j=100: {:.4} (ref {rate_ref:.4}; j-variation {:.1}%)",
            scaled_rates[0],
            scaled_rates[1],
            scaled_var * 100.0
        ));
    }
    CriterionOutcome {
        id: 4,
        name: "mirror_pair_longevity",
        pass,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Diagonal-state decay, as stated: fitted N₂ rate of a single coherent
/// state at j = 100 over jτ ≤ 0.1 must match γ⁴((γ²−1)/(γ²+1))² within
/// 10/j for γ ∈ {0.5, 1, 2} (absolute for the zero reference at γ = 1).
///
/// Diagnostic lines compare the same fit against ((γ²−1)/(γ²+1))² = cos²θ,
/// the classical-scale rate the master equation itself produces.
pub fn criterion_5_diagonal_state_decay() -> CriterionOutcome {
    let start = Instant::now();
    let cfg = PropagatorConfig::default();
    let sys = SpinSystem::new(200);
    let j = sys.j();
    let tol = 10.0 / j;
    let mut details = Vec::new();
    let mut pass = true;
    for gamma in [0.5, 1.0, 2.0] {
        let samples = n2_decay_samples(sys, gamma, gamma, 0.1 / j, 20, &cfg).expect("samples");
        let fit = fit_decay(&samples, FitModel::Linear).expect("fit");
        let reference = analytics::n2_rate_diagonal(gamma);
        let dev = if reference == 0.0 {
            fit.rate.abs()
        } else {
            (fit.rate - reference).abs() / reference
        };
        let ok = dev <= tol;
        pass &= ok;
        details.push(format!(
            "gamma={gamma}: rate {:.4} vs reference {reference:.4} (dev {dev:.3}, tol {tol:.2}) -> {}",
            fit.rate,
            if ok { "ok" } else { "FAIL" }
        ));
        let theta = 2.0 * f64::atan(gamma);
        let cos2 = theta.cos().powi(2);
        let alt_dev = if cos2 < 1e-12 {
            fit.rate.abs()
        } else {
            (fit.rate - cos2).abs() / cos2
        };
        details.push(format!(
            "gamma={gamma}: diagnostic vs classical-scale rate cos^2(theta) = {cos2:.4}: dev {alt_dev:.3}"
        ));
    }
    CriterionOutcome {
        id: 5,
        name: "diagonal_state_decay",
        pass,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Squared projection norm of `psi` onto the span of possibly non-orthogonal
/// kets, via the Gram system.
fn frame_capture(frame: &[DickeVector], psi: &DickeVector) -> f64 {
    let n = frame.len();
    let mut gram = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for (i, a) in frame.iter().enumerate() {
        for (l, b) in frame.iter().enumerate() {
            gram[(i, l)] = overlap(a, b).expect("same system");
        }
        rhs[i] = overlap(a, psi).expect("same system");
    }
    let x = gram
        .lu()
        .solve(&rhs)
        .expect("frame is linearly independent");
    rhs.dotc(&x).re
}

/// Dispersive cat generation: at t = π/(2η) the evolved coherent state has
/// fidelity ≥ 1−1e−10 with the closed-form two-component superposition (up
/// to global phase); at t = π/(4η) the four-component frame captures
/// ≥ 1−1e−10 of the norm. Run at j ∈ {5, 10} plus the odd atom numbers
/// between them, covering both N parities.
pub fn criterion_6_dispersive_cat_generation() -> CriterionOutcome {
    let start = Instant::now();
    let (theta, phi) = (FRAC_PI_2, 0.4);
    let mut details = Vec::new();
    let mut pass = true;
    for two_j in [10u32, 11, 20, 21] {
        let sys = SpinSystem::new(two_j);
        let params = verify_params(sys);
        let psi0 = coherent_vector(&CoherentSpec::new(theta, phi).unwrap(), sys);

        let t2 = multi_component_times(&params, 2).expect("eta > 0");
        let evolved = propagate_dispersive(&psi0, &params, t2);
        let reference = dispersive_cat_reference(theta, phi, sys).expect("valid angles");
        let fidelity = overlap(&reference, &evolved)
            .expect("same system")
            .norm_sqr();

        let t4 = multi_component_times(&params, 4).expect("eta > 0");
        let evolved4 = propagate_dispersive(&psi0, &params, t4);
        let n = f64::from(two_j);
        let frame: Vec<DickeVector> = (0..4)
            .map(|q| {
                let azimuth = (phi + PI * (2.0 * q as f64 - n + 1.0) / 4.0).rem_euclid(2.0 * PI);
                coherent_vector(&CoherentSpec::new(theta, azimuth).unwrap(), sys)
            })
            .collect();
        let captured = frame_capture(&frame, &evolved4);

        let ok = fidelity >= 1.0 - 1e-10 && captured >= 1.0 - 1e-10;
        pass &= ok;
        details.push(format!(
            "N={two_j}: two-component fidelity deficit {:.2e}, four-component capture deficit {:.2e} (tol 1e-10)",
            (1.0 - fidelity).max(0.0),
            (1.0 - captured).max(0.0)
        ));
    }
    CriterionOutcome {
        id: 6,
        name: "dispersive_cat_generation",
        pass,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Preparation pipeline: the three-step protocol at j = 10 yields a state
/// whose symmetric-pair decomposition captures ≥ 1−1e−8 of the norm for
/// θ ∈ {π/6, π/3, π/2}.
pub fn criterion_7_preparation_pipeline() -> CriterionOutcome {
    let start = Instant::now();
    let sys = SpinSystem::new(20);
    let params = verify_params(sys);
    let mut details = Vec::new();
    let mut pass = true;
    for theta in [PI / 6.0, FRAC_PI_3, FRAC_PI_2] {
        let cat = prepare_long_lived_cat(theta, 0.0, &params, sys).expect("preparation");
        let fit = symmetric_decomposition(&cat);
        let ok = fit.captured >= 1.0 - 1e-8;
        pass &= ok;
        details.push(format!(
            "theta={theta:.4}: capture deficit {:.2e} at (theta'={:.6}, phi'={:.6}) (tol 1e-8)",
            (1.0 - fit.captured).max(0.0),
            fit.theta,
            fit.phi
        ));
    }
    CriterionOutcome {
        id: 7,
        name: "preparation_pipeline",
        pass,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Oracle equivalence: banded adaptive propagation agrees entrywise to 1e−9
/// with the dense superoperator exponential for j ≤ 5, random (including
/// non-Hermitian) operators, τ ∈ {0.1, 1}.
pub fn criterion_8_propagator_oracle_equivalence() -> CriterionOutcome {
    let start = Instant::now();
    let mut rng = DetRng(0x5eed);
    let cfg = PropagatorConfig::default();
    let oracle = PropagatorConfig {
        method: Method::DenseExpmOracle,
        ..Default::default()
    };
    let mut details = Vec::new();
    let mut worst: f64 = 0.0;
    for (two_j, count) in [(4u32, 3usize), (7, 3), (10, 4)] {
        let sys = SpinSystem::new(two_j);
        let mut max_gap: f64 = 0.0;
        for _ in 0..count {
            let rho = rng.operator(sys);
            for tau in [0.1, 1.0] {
                let banded = propagate(&rho, tau, &cfg).expect("banded");
                let dense = propagate(&rho, tau, &oracle).expect("dense");
                max_gap = max_gap.max(max_entry_norm(&(banded.mat() - dense.mat())));
            }
        }
        details.push(format!(
            "j={}: max entrywise gap = {max_gap:.3e} (tol 1e-9)",
            sys.j()
        ));
        worst = worst.max(max_gap);
    }
    CriterionOutcome {
        id: 8,
        name: "propagator_oracle_equivalence",
        pass: worst <= 1e-9,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Property suite: algebra identities, propagator structure preservation,
/// and the classical-limit trajectory at j = 100.
pub fn criterion_9_property_suite() -> CriterionOutcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    let mut check = |name: &str, ok: bool, measured: String| {
        pass &= ok;
        details.push(format!(
            "{name}: {measured} -> {}",
            if ok { "ok" } else { "FAIL" }
        ));
    };

    // su(2) identities and the Casimir, every j up to 10.
    let mut worst_alg: f64 = 0.0;
    for two_j in 1..=20u32 {
        let sys = SpinSystem::new(two_j);
        let jp = raising_matrix(sys).into_matrix();
        let jm = lowering_matrix(sys).into_matrix();
        let jz = jz_matrix(sys).into_matrix();
        worst_alg = worst_alg
            .max(max_entry_norm(
                &(&jp * &jm - &jm * &jp - &jz * C64::new(2.0, 0.0)),
            ))
            .max(max_entry_norm(&(&jz * &jp - &jp * &jz - &jp)))
            .max(max_entry_norm(&(&jz * &jm - &jm * &jz + &jm)));
        let jx = (&jp + &jm) * C64::new(0.5, 0.0);
        let jy = (&jp - &jm) * C64::new(0.0, -0.5);
        let j = sys.j();
        let casimir = &jx * &jx + &jy * &jy + &jz * &jz
            - DMatrix::identity(sys.dim(), sys.dim()) * C64::new(j * (j + 1.0), 0.0);
        worst_alg = worst_alg.max(max_entry_norm(&casimir));
    }
    check(
        "su2_identities(j<=10)",
        worst_alg < 1e-12,
        format!("max defect {worst_alg:.3e} (tol 1e-12)"),
    );

    // Rotation unitarity and composition.
    let sys = SpinSystem::new(15);
    let ua = rotation_matrix(sys, 0.8, 0.6);
    let ub = rotation_matrix(sys, 0.8, 1.7);
    let uab = rotation_matrix(sys, 0.8, 2.3);
    let unit_defect =
        max_entry_norm(&(ua.mat() * ua.mat().adjoint() - DMatrix::identity(sys.dim(), sys.dim())));
    check(
        "rotation_unitarity",
        unit_defect < 1e-12,
        format!("defect {unit_defect:.3e} (tol 1e-12)"),
    );
    let comp_defect = max_entry_norm(&(ua.mat() * ub.mat() - uab.mat()));
    check(
        "rotation_composition",
        comp_defect < 1e-10,
        format!("defect {comp_defect:.3e} (tol 1e-10)"),
    );

    // Trace, Hermiticity, positivity over random densities.
    let cfg = PropagatorConfig::default();
    let mut rng = DetRng(0xfeed);
    let mut worst_trace: f64 = 0.0;
    let mut worst_herm: f64 = 0.0;
    let mut worst_eig: f64 = 0.0;
    for two_j in [4u32, 10, 20] {
        let sys = SpinSystem::new(two_j);
        for _ in 0..3 {
            let rho = rng.density(sys);
            for tau in [0.5, 2.0, 5.0] {
                let out = propagate(&rho, tau, &cfg).expect("propagation");
                worst_trace = worst_trace.max((out.trace() - rho.trace()).norm());
                worst_herm = worst_herm.max(max_entry_norm(&(out.mat() - out.mat().adjoint())));
                let herm = (out.mat() + out.mat().adjoint()) * C64::new(0.5, 0.0);
                let min_eig = herm.symmetric_eigen().eigenvalues.min();
                worst_eig = worst_eig.max((-min_eig).max(0.0));
            }
        }
    }
    check(
        "trace_preservation",
        worst_trace < 1e-10,
        format!("max drift {worst_trace:.3e} (tol 1e-10)"),
    );
    check(
        "hermiticity_preservation",
        worst_herm < 1e-10,
        format!("max defect {worst_herm:.3e} (tol 1e-10)"),
    );
    check(
        "positivity",
        worst_eig < 1e-9,
        format!("max negative eigenvalue {worst_eig:.3e} (tol 1e-9)"),
    );

    // Band invariance (exact) and ground-state stationarity (exact).
    let sys = SpinSystem::new(12);
    let mut band_ok = true;
    for d in [-5i32, 0, 4] {
        let dim = sys.dim();
        let mut mat = DMatrix::zeros(dim, dim);
        let (row0, col0) = ((-d).max(0) as usize, d.max(0) as usize);
        for s in 0..dim - d.unsigned_abs() as usize {
            mat[(row0 + s, col0 + s)] = C64::new(1.0 - 0.05 * s as f64, 0.2);
        }
        let out = propagate(&SpinOperator::new(sys, mat).unwrap(), 0.7, &cfg).unwrap();
        for k1 in 0..dim {
            for k2 in 0..dim {
                if k2 as i32 - k1 as i32 != d && out.element(k1, k2) != C64::ZERO {
                    band_ok = false;
                }
            }
        }
    }
    check(
        "band_invariance",
        band_ok,
        "off-band entries identically zero".to_string(),
    );
    let south = DickeVector::basis_state(sys, sys.dim() - 1);
    let ground = dyad(&south, &south).unwrap();
    let drift = max_entry_norm(&(propagate(&ground, 4.0, &cfg).unwrap().mat() - ground.mat()));
    check(
        "ground_state_stationarity",
        drift == 0.0,
        format!("drift {drift:.3e} (exact)"),
    );

    // Dispersive unitarity.
    let sys = SpinSystem::new(31);
    let params = verify_params(sys);
    let psi = coherent_vector(&CoherentSpec::new(1.1, 0.3).unwrap(), sys);
    let t = multi_component_times(&params, 2).unwrap();
    let drift = (propagate_dispersive(&psi, &params, t).norm() - 1.0).abs();
    check(
        "dispersive_unitarity",
        drift < 1e-13,
        format!("norm drift {drift:.3e} (tol 1e-13)"),
    );

    // Classical-limit trajectory at j = 100 for τ ≤ 2.
    let sys = SpinSystem::new(200);
    let j = sys.j();
    let theta0 = 0.9;
    let v = coherent_vector(&CoherentSpec::new(theta0, 0.0).unwrap(), sys);
    let mut rho = dyad(&v, &v).unwrap();
    let mut worst_theta: f64 = 0.0;
    for step in 1..=4 {
        rho = propagate(&rho, 0.5, &cfg).expect("propagation");
        let tau = 0.5 * step as f64;
        let bloch = bloch_vector(&rho).expect("unit trace");
        let theta_num = (bloch[2] / j).clamp(-1.0, 1.0).acos();
        let theta_cl = analytics::classical_theta(theta0, tau);
        worst_theta = worst_theta.max((theta_num - theta_cl).abs());
    }
    check(
        "classical_limit(j=100)",
        worst_theta < 5.0 / j.sqrt(),
        format!(
            "max |theta - classical| = {worst_theta:.4} (tol {:.2})",
            5.0 / j.sqrt()
        ),
    );

    // Generator consistency spot check: Λ annihilates the ground state.
    let null = lindblad_apply(&ground);
    check(
        "ground_state_annihilated",
        max_entry_norm(null.mat()) == 0.0,
        "generator output identically zero".to_string(),
    );

    CriterionOutcome {
        id: 9,
        name: "property_suite",
        pass,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Run every criterion in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1_polar_pair_exact_decay(),
        criterion_2_initial_slope_law(),
        criterion_3_fast_decoherence_rate(),
        criterion_4_mirror_pair_longevity(),
        criterion_5_diagonal_state_decay(),
        criterion_6_dispersive_cat_generation(),
        criterion_7_preparation_pipeline(),
        criterion_8_propagator_oracle_equivalence(),
        criterion_9_property_suite(),
    ]
}

/// Render the whole report as JSON.
pub fn report_json(outcomes: &[CriterionOutcome]) -> Value {
    json!({
        "passed": outcomes.iter().filter(|o| o.pass).count(),
        "total": outcomes.len(),
        "all_pass": outcomes.iter().all(|o| o.pass),
        "criteria": outcomes.iter().map(CriterionOutcome::to_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Harness sanity: an injected degraded propagator must be caught and
    /// reported as a criterion failure. Loose tolerances alone cannot push
    /// the embedded pair above threshold here, because the criterion samples
    /// in steps of 0.1 and that already bounds the step size; coarse
    /// fixed-step integration is the honest way to degrade it.
    #[test]
    fn degraded_propagator_is_caught() {
        let degraded = PropagatorConfig {
            method: Method::FixedRk4,
            rel_tol: 1e-2,
            abs_tol: 1e-2,
            max_step: Some(0.1),
        };
        let outcome = criterion_1_polar_pair_exact_decay_with(&degraded);
        assert!(
            !outcome.pass,
            "degraded propagation passed: {:?}",
            outcome.details
        );

        // The slope criterion is insensitive to tolerance injection by
        // construction: its difference stencil only ever propagates spans
        // of order 1e-3/(j+1), a single machine-accurate step.
        let loose = PropagatorConfig {
            rel_tol: 1e-2,
            abs_tol: 1e-2,
            max_step: Some(0.3),
            ..Default::default()
        };
        let outcome = criterion_2_initial_slope_law_with(&loose);
        assert!(outcome.pass, "slope criterion: {:?}", outcome.details);
    }
}
