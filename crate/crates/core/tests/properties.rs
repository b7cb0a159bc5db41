//! Property tests for the pure algebra and analytics layers, plus a few
//! low-dimensional propagator invariants.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use spincat::analytics::{classical_theta, cos2_alpha, n1_initial_slope, n2_rate_general};
use spincat::cats::{build_cat, CatSpec};
use spincat::dynamics::{propagate, PropagatorConfig};
use spincat::observables::{eigen_angle, norm_abs, norm_hs};
use spincat::spinalg::{
    coherent_vector, dyad, overlap, rotation_matrix, CoherentSpec, DickeVector, SpinSystem,
};

fn interior_theta() -> impl Strategy<Value = f64> {
    1e-3..(PI - 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn coherent_states_are_normalized(
        two_j in 1u32..240,
        theta in 0.0..PI,
        phi in 0.0..(2.0 * PI),
    ) {
        let sys = SpinSystem::new(two_j);
        let v = coherent_vector(&CoherentSpec::new(theta, phi).unwrap(), sys);
        prop_assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_is_conjugate_symmetric(
        two_j in 1u32..40,
        t1 in interior_theta(),
        p1 in 0.0..(2.0 * PI),
        t2 in interior_theta(),
        p2 in 0.0..(2.0 * PI),
    ) {
        let sys = SpinSystem::new(two_j);
        let a = coherent_vector(&CoherentSpec::new(t1, p1).unwrap(), sys);
        let b = coherent_vector(&CoherentSpec::new(t2, p2).unwrap(), sys);
        let ab = overlap(&a, &b).unwrap();
        let ba = overlap(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
        // trace(|a⟩⟨b|) = ⟨b|a⟩
        let tr = dyad(&a, &b).unwrap().trace();
        prop_assert!((tr - ba).norm() < 1e-12);
    }

    #[test]
    fn cat_states_are_normalized_including_cross_term(
        two_j in 1u32..60,
        t1 in interior_theta(),
        p1 in 0.0..(2.0 * PI),
        dt in -1e-3..1e-3,
        c1re in -1.0..1.0,
        c1im in -1.0..1.0,
        c2re in -1.0..1.0,
        c2im in -1.0..1.0,
    ) {
        // Includes nearly parallel components (t2 = t1 + dt).
        let t2 = f64::clamp(t1 + dt, 1e-4, PI - 1e-4);
        let a = CoherentSpec::new(t1, p1).unwrap();
        let b = CoherentSpec::new(t2, p1).unwrap();
        let c1 = C64::new(c1re, c1im);
        let c2 = C64::new(c2re, c2im);
        let sys = SpinSystem::new(two_j);
        match build_cat(&CatSpec::new(a, b, c1, c2), sys) {
            Ok(v) => prop_assert!((v.norm() - 1.0).abs() < 1e-12),
            // Destructive interference of nearly identical components is a
            // legitimate rejection, not a badly normalized state.
            Err(spincat::Error::DegenerateCat { .. }) => {}
            Err(spincat::Error::ZeroCatCoefficients) => {
                prop_assert!(c1 == C64::ZERO && c2 == C64::ZERO);
            }
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
        }
    }

    #[test]
    fn eigen_angle_matches_closed_form_and_stays_in_range(
        two_j in 1u32..80,
        theta in 0.0..PI,
    ) {
        let sys = SpinSystem::new(two_j);
        let numeric = eigen_angle(&CoherentSpec::new(theta, 0.0).unwrap(), sys);
        let closed = cos2_alpha(theta, sys.j());
        prop_assert!((0.0..=1.0).contains(&numeric));
        prop_assert!((numeric - closed).abs() < 1e-9);
    }

    #[test]
    fn fast_slope_term_vanishes_exactly_on_the_mirror_family(
        theta in interior_theta(),
        phi in 0.0..(2.0 * PI),
        j in 1.0..200.0,
    ) {
        let mirror = n1_initial_slope(theta, phi, PI - theta, phi, j);
        prop_assert!(mirror.fast.abs() < 1e-10 * j);
        prop_assert!((mirror.total - mirror.slow - mirror.fast).abs() < 1e-12);
    }

    #[test]
    fn general_rate_vanishes_only_on_inverse_or_equal_pairs(
        g1 in 0.05..4.0,
        g2 in 0.05..4.0,
        j in 1.0..100.0,
    ) {
        let rate = n2_rate_general(g1, g2, j);
        prop_assert!(rate >= 0.0);
        let degenerate = (g1 - g2).abs() < 1e-9 || (g1 * g2 - 1.0).abs() < 1e-9;
        if !degenerate {
            prop_assert!(rate > 0.0);
        }
    }

    #[test]
    fn classical_flow_composes_in_time(
        theta0 in interior_theta(),
        tau1 in 0.0..2.0,
        tau2 in 0.0..2.0,
    ) {
        let two_step = classical_theta(classical_theta(theta0, tau1), tau2);
        let one_step = classical_theta(theta0, tau1 + tau2);
        prop_assert!((two_step - one_step).abs() < 1e-9);
    }

    #[test]
    fn rotations_preserve_overlaps(
        two_j in 1u32..30,
        axis in 0.0..(2.0 * PI),
        angle in -PI..PI,
        t1 in interior_theta(),
        t2 in interior_theta(),
    ) {
        let sys = SpinSystem::new(two_j);
        let u = rotation_matrix(sys, axis, angle);
        let a = coherent_vector(&CoherentSpec::new(t1, 0.4).unwrap(), sys);
        let b = coherent_vector(&CoherentSpec::new(t2, 2.0).unwrap(), sys);
        let before = overlap(&a, &b).unwrap();
        let after = overlap(&u.apply(&a).unwrap(), &u.apply(&b).unwrap()).unwrap();
        prop_assert!((before - after).norm() < 1e-11);
    }
}

proptest! {
    // Propagation per case is comparatively expensive; fewer cases.
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn polar_basis_dyads_decay_within_their_band(
        two_j in 2u32..14,
        k1 in 0usize..5,
        k2 in 0usize..5,
        tau in 0.05..1.5,
    ) {
        let sys = SpinSystem::new(two_j);
        let dim = sys.dim();
        let (k1, k2) = (k1 % dim, k2 % dim);
        let rho = dyad(
            &DickeVector::basis_state(sys, k1),
            &DickeVector::basis_state(sys, k2),
        )
        .unwrap();
        let out = propagate(&rho, tau, &PropagatorConfig::default()).unwrap();
        let d = k2 as i32 - k1 as i32;
        for r in 0..dim {
            for c in 0..dim {
                if c as i32 - r as i32 != d {
                    prop_assert!(out.element(r, c) == C64::ZERO);
                }
            }
        }
    }
}

/// Monotone decay of both norms, on dyads whose components have negligible
/// overlap (the decoherence regime). Dyads with appreciable component
/// overlap must eventually recover: the trace is conserved, so the norms
/// relax toward |tr ρ|² and |tr ρ| rather than zero.
#[test]
fn distinct_dyad_norms_decay_monotonically() {
    let cases = [
        (20u32, 0.4, 2.9, 0.0),
        (20, 0.3, 2.6, PI / 2.0),
        (20, 0.7, 2.8, PI),
        (20, 0.5, PI - 0.5, 0.0),
        (20, 0.0, PI, 0.0),
        (13, 0.4, 2.9, 0.0),
    ];
    let cfg = PropagatorConfig::default();
    for (two_j, t1, t2, dphi) in cases {
        let sys = SpinSystem::new(two_j);
        let a = coherent_vector(&CoherentSpec::new(t1, 0.0).unwrap(), sys);
        let b = coherent_vector(&CoherentSpec::new(t2, dphi).unwrap(), sys);
        let mut rho = dyad(&a, &b).unwrap();
        // Confirm the case sits in the claimed regime.
        assert!(
            rho.trace().norm_sqr() < 1e-11,
            "grid case has appreciable overlap"
        );
        let mut n1_prev = norm_hs(&rho);
        let mut n2_prev = norm_abs(&rho);
        for _ in 0..12 {
            rho = propagate(&rho, 0.2, &cfg).unwrap();
            let n1 = norm_hs(&rho);
            let n2 = norm_abs(&rho);
            assert!(n1 <= n1_prev + 1e-10, "N1 grew: {n1_prev} -> {n1}");
            assert!(n2 <= n2_prev + 1e-10, "N2 grew: {n2_prev} -> {n2}");
            n1_prev = n1;
            n2_prev = n2;
        }
    }
}
