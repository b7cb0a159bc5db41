//! Time evolution under the superradiance master equation and the dispersive
//! nonlinear Hamiltonian.
//!
//! The dissipative generator
//!
//!   Λρ = (1/2j)·(2·J₋ρJ₊ − J₊J₋ρ − ρJ₊J₋)
//!
//! acts element-wise in the Dicke basis and couples only matrix elements with
//! equal diagonal offset d = m₁ − m₂. Each of the 2·dim−1 offset bands is a
//! lower-bidiagonal linear ODE system of length dim − |d| that `propagate`
//! integrates independently (optionally in parallel); results do not depend
//! on band evaluation order. The largest decay rate in Λ is ≈ j+1, which sets
//! the default step cap.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spinalg::{DickeVector, SpinOperator, SpinSystem};

/// Cavity-QED parameters behind the effective dynamics: single-atom vacuum
/// Rabi frequency g, mode amplitude damping κ, detuning δ (all rad/s), and
/// the atom number N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub g: f64,
    pub kappa: f64,
    pub delta: f64,
    pub n_atoms: u32,
}

impl PhysicalParams {
    /// Dispersive phase-shift rate η = g²δ/(κ² + δ²).
    pub fn eta(&self) -> f64 {
        self.g * self.g * self.delta / (self.kappa * self.kappa + self.delta * self.delta)
    }

    /// Classical superradiance time scale T_class = κ/(N·g²); one unit of
    /// dimensionless time τ.
    pub fn t_class(&self) -> f64 {
        self.kappa / (f64::from(self.n_atoms) * self.g * self.g)
    }

    /// Overdamped collective regime κ ≫ g√N, read operationally as a
    /// factor of ten.
    pub fn superradiance_valid(&self) -> bool {
        self.kappa > 10.0 * self.g * f64::from(self.n_atoms).sqrt()
    }

    /// Strongly detuned cavity |δ| ≫ κ, read operationally as a factor of ten.
    pub fn dispersive_valid(&self) -> bool {
        self.delta.abs() > 10.0 * self.kappa
    }

    pub fn tau_to_seconds(&self, tau: f64) -> f64 {
        tau * self.t_class()
    }

    pub fn seconds_to_tau(&self, t: f64) -> f64 {
        t / self.t_class()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Embedded Dormand–Prince 5(4) pair per offset band. The default.
    AdaptiveRk,
    /// Classic fixed-step RK4 per offset band, step = the configured cap.
    FixedRk4,
    /// Dense dim²×dim² superoperator exponential; small systems only,
    /// retained as an independent cross-check of the banded path.
    DenseExpmOracle,
}

/// Integrator settings for [`propagate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Step cap; `None` derives 0.1/(j+1) from the spectral bound of Λ.
    pub max_step: Option<f64>,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self {
            method: Method::AdaptiveRk,
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_step: None,
        }
    }
}

impl PropagatorConfig {
    pub fn max_step_for(&self, sys: SpinSystem) -> f64 {
        self.max_step.unwrap_or(0.1 / (sys.j() + 1.0))
    }
}

/// Λρ, evaluated element-wise in O(dim²) without dense products:
/// (Λρ)_{m₁,m₂} = (1/2j)·[2·c_{m₁+1}c_{m₂+1}·ρ_{m₁+1,m₂+1} − (c²_{m₁}+c²_{m₂})·ρ_{m₁,m₂}].
pub fn lindblad_apply(rho: &SpinOperator) -> SpinOperator {
    let sys = rho.sys();
    let dim = sys.dim();
    let two_j = f64::from(sys.two_j());
    let src = rho.mat();
    let mut out = DMatrix::zeros(dim, dim);
    for k2 in 0..dim {
        for k1 in 0..dim {
            // m+1 lives at index k−1.
            let decay = (sys.ladder_coeff_sq_at(k1) + sys.ladder_coeff_sq_at(k2)) / two_j;
            let mut v = -decay * src[(k1, k2)];
            if k1 > 0 && k2 > 0 {
                let feed = 2.0 * sys.ladder_coeff_at(k1 - 1) * sys.ladder_coeff_at(k2 - 1) / two_j;
                v += feed * src[(k1 - 1, k2 - 1)];
            }
            out[(k1, k2)] = v;
        }
    }
    SpinOperator::new(sys, out).expect("shape preserved")
}

/// e^{Λτ}ρ₀ to within the configured tolerances.
///
/// Rejects negative τ; a step-size underflow reports the τ actually reached.
pub fn propagate(rho0: &SpinOperator, tau: f64, cfg: &PropagatorConfig) -> Result<SpinOperator> {
    if !(tau >= 0.0) {
        return Err(Error::NegativeTime { tau });
    }
    propagate_signed(rho0, tau, cfg)
}

/// Signed-time propagation used internally (initial-slope stencils need a
/// short backward step, which is well-conditioned for |τ| ≪ 1/(j+1)).
pub(crate) fn propagate_signed(
    rho0: &SpinOperator,
    tau: f64,
    cfg: &PropagatorConfig,
) -> Result<SpinOperator> {
    if tau == 0.0 {
        return Ok(rho0.clone());
    }
    match cfg.method {
        Method::AdaptiveRk => propagate_banded(rho0, tau, cfg, true),
        Method::FixedRk4 => propagate_banded(rho0, tau, cfg, false),
        Method::DenseExpmOracle => propagate_dense(rho0, tau),
    }
}

/// Decay and feed coefficients along one offset band.
///
/// Band d holds the elements (k₁, k₂) = (s + max(0,−d), s + max(0,d)) for
/// s = 0 … dim−|d|−1; element s is fed only by element s−1, making the band
/// system lower bidiagonal.
struct Band {
    row0: usize,
    col0: usize,
    decay: Vec<f64>,
    feed: Vec<f64>,
}

impl Band {
    fn new(sys: SpinSystem, d: isize) -> Self {
        let dim = sys.dim();
        let two_j = f64::from(sys.two_j());
        let row0 = d.min(0).unsigned_abs();
        let col0 = d.max(0) as usize;
        let len = dim - d.unsigned_abs();
        let mut decay = Vec::with_capacity(len);
        let mut feed = Vec::with_capacity(len);
        for s in 0..len {
            let (k1, k2) = (row0 + s, col0 + s);
            decay.push((sys.ladder_coeff_sq_at(k1) + sys.ladder_coeff_sq_at(k2)) / two_j);
            feed.push(if s == 0 {
                0.0
            } else {
                2.0 * sys.ladder_coeff_at(k1 - 1) * sys.ladder_coeff_at(k2 - 1) / two_j
            });
        }
        Self {
            row0,
            col0,
            decay,
            feed,
        }
    }

    fn len(&self) -> usize {
        self.decay.len()
    }

    fn rhs(&self, y: &[C64], dy: &mut [C64]) {
        dy[0] = -self.decay[0] * y[0];
        for s in 1..y.len() {
            dy[s] = -self.decay[s] * y[s] + self.feed[s] * y[s - 1];
        }
    }
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn propagate_banded(
    rho0: &SpinOperator,
    tau: f64,
    cfg: &PropagatorConfig,
    adaptive: bool,
) -> Result<SpinOperator> {
    let sys = rho0.sys();
    let dim = sys.dim();
    let max_step = cfg.max_step_for(sys);
    let src = rho0.mat();

    let offsets: Vec<isize> = (-(dim as isize - 1)..=(dim as isize - 1)).collect();
    let solved: Vec<Result<(usize, usize, Vec<C64>)>> = offsets
        .par_iter()
        .map(|&d| {
            let band = Band::new(sys, d);
            let y0: Vec<C64> = (0..band.len())
                .map(|s| src[(band.row0 + s, band.col0 + s)])
                .collect();
            let y = if adaptive {
                solve_band(&band, y0, tau, cfg.rel_tol, cfg.abs_tol, max_step)?
            } else {
                solve_band_rk4(&band, y0, tau, max_step)
            };
            Ok((band.row0, band.col0, y))
        })
        .collect();

    let mut out = DMatrix::zeros(dim, dim);
    for res in solved {
        let (row0, col0, y) = res?;
        for (s, v) in y.into_iter().enumerate() {
            out[(row0 + s, col0 + s)] = v;
        }
    }
    SpinOperator::new(sys, out)
}

fn solve_band(
    band: &Band,
    mut y: Vec<C64>,
    tau: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_step: f64,
) -> Result<Vec<C64>> {
    let len = band.len();
    let mut k: [Vec<C64>; 7] = std::array::from_fn(|_| vec![C64::ZERO; len]);
    let mut stage = vec![C64::ZERO; len];
    let mut y_next = vec![C64::ZERO; len];

    let dir = tau.signum();
    let mut t = 0.0_f64;
    // Controller step magnitude; the actual step is clamped to the remaining
    // span so a short final step never looks like an underflow.
    let mut h_mag = max_step.min(tau.abs());

    while (tau - t) * dir > 0.0 {
        let h = h_mag.min((tau - t).abs()) * dir;

        band.rhs(&y, &mut k[0]);
        for i in 0..len {
            stage[i] = y[i] + h * A21 * k[0][i];
        }
        band.rhs(&stage, &mut k[1]);
        for i in 0..len {
            stage[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        band.rhs(&stage, &mut k[2]);
        for i in 0..len {
            stage[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        band.rhs(&stage, &mut k[3]);
        for i in 0..len {
            stage[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        band.rhs(&stage, &mut k[4]);
        for i in 0..len {
            stage[i] = y[i]
                + h * (A61 * k[0][i]
                    + A62 * k[1][i]
                    + A63 * k[2][i]
                    + A64 * k[3][i]
                    + A65 * k[4][i]);
        }
        band.rhs(&stage, &mut k[5]);
        for i in 0..len {
            y_next[i] = y[i]
                + h * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
        }
        band.rhs(&y_next, &mut k[6]);

        let mut err_sq = 0.0;
        for i in 0..len {
            let e = h
                * (E1 * k[0][i]
                    + E3 * k[2][i]
                    + E4 * k[3][i]
                    + E5 * k[4][i]
                    + E6 * k[5][i]
                    + E7 * k[6][i]);
            let scale = abs_tol + rel_tol * y[i].norm().max(y_next[i].norm());
            let r = e.norm() / scale;
            err_sq += r * r;
        }
        let err = (err_sq / len as f64).sqrt();

        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y_next);
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h_mag = (h_mag * factor).min(max_step);
        if h_mag < 16.0 * f64::EPSILON * tau.abs() {
            return Err(Error::StepUnderflow {
                achieved: t,
                requested: tau,
            });
        }
    }
    Ok(y)
}

fn solve_band_rk4(band: &Band, mut y: Vec<C64>, tau: f64, max_step: f64) -> Vec<C64> {
    let len = band.len();
    let steps = (tau.abs() / max_step).ceil().max(1.0) as usize;
    let h = tau / steps as f64;
    let mut k1 = vec![C64::ZERO; len];
    let mut k2 = vec![C64::ZERO; len];
    let mut k3 = vec![C64::ZERO; len];
    let mut k4 = vec![C64::ZERO; len];
    let mut stage = vec![C64::ZERO; len];
    for _ in 0..steps {
        band.rhs(&y, &mut k1);
        for i in 0..len {
            stage[i] = y[i] + 0.5 * h * k1[i];
        }
        band.rhs(&stage, &mut k2);
        for i in 0..len {
            stage[i] = y[i] + 0.5 * h * k2[i];
        }
        band.rhs(&stage, &mut k3);
        for i in 0..len {
            stage[i] = y[i] + h * k3[i];
        }
        band.rhs(&stage, &mut k4);
        for i in 0..len {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

const DENSE_ORACLE_MAX_DIM: usize = 32;

/// The generator Λ as a dense dim²×dim² matrix acting on column-major
/// vectorized operators.
pub fn superradiance_superoperator(sys: SpinSystem) -> DMatrix<C64> {
    let jm = crate::spinalg::lowering_matrix(sys).into_matrix();
    let jp = jm.adjoint();
    let jpjm = &jp * &jm;
    let id = DMatrix::<C64>::identity(sys.dim(), sys.dim());
    let scale = C64::new(1.0 / f64::from(sys.two_j()), 0.0);
    // vec(AρB) = (Bᵀ ⊗ A)·vec(ρ) for column-major vec.
    let feed = jp.transpose().kronecker(&jm) * C64::new(2.0, 0.0);
    let left = id.kronecker(&jpjm);
    let right = jpjm.transpose().kronecker(&id);
    (feed - left - right) * scale
}

fn propagate_dense(rho0: &SpinOperator, tau: f64) -> Result<SpinOperator> {
    let sys = rho0.sys();
    let dim = sys.dim();
    if dim > DENSE_ORACLE_MAX_DIM {
        return Err(Error::DenseOracleTooLarge {
            dim,
            max: DENSE_ORACLE_MAX_DIM,
        });
    }
    let sup = superradiance_superoperator(sys) * C64::new(tau, 0.0);
    let exp = sup.exp();
    let vec = DVector::from_column_slice(rho0.mat().as_slice());
    let out = exp * vec;
    let mat = DMatrix::from_column_slice(dim, dim, out.as_slice());
    SpinOperator::new(sys, mat)
}

/// Diagonal of exp(−i·H_eff·t/ħ) for H_eff = ħη·J₊J₋: the phase
/// e^{−i·η·t·(j+m)(j−m+1)} at the index of m. Exact; no integrator.
pub fn dispersive_phases(sys: SpinSystem, params: &PhysicalParams, t: f64) -> DVector<C64> {
    let eta_t = params.eta() * t;
    let two_j = f64::from(sys.two_j());
    DVector::from_iterator(
        sys.dim(),
        (0..sys.dim()).map(|k| {
            let q = (two_j - k as f64) * (k as f64 + 1.0); // (j+m)(j−m+1) at k = j−m
            C64::from_polar(1.0, -eta_t * q)
        }),
    )
}

/// Dispersive evolution of a ket for laboratory time `t` (seconds): the
/// entrywise product with [`dispersive_phases`]. Unitary, so the norm is
/// preserved to rounding.
///
/// Warns (but proceeds) when the parameters are outside the strongly detuned
/// regime the effective Hamiltonian is derived in.
pub fn propagate_dispersive(psi: &DickeVector, params: &PhysicalParams, t: f64) -> DickeVector {
    if !params.dispersive_valid() {
        log::warn!(
            "dispersive evolution outside its regime: |delta| = {:.3e} <= 10*kappa = {:.3e}",
            params.delta.abs(),
            10.0 * params.kappa
        );
    }
    let phases = dispersive_phases(psi.sys(), params, t);
    let amp = psi.amp().zip_map(&phases, |a, p| a * p);
    DickeVector::new(psi.sys(), amp).expect("length preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinalg::{coherent_vector, dyad, max_entry_norm, CoherentSpec};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_operator(sys: SpinSystem, rng: &mut ChaCha8Rng) -> SpinOperator {
        let dim = sys.dim();
        let mat = DMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        SpinOperator::new(sys, mat).unwrap()
    }

    fn random_density(sys: SpinSystem, rng: &mut ChaCha8Rng) -> SpinOperator {
        // A A† / tr, positive semidefinite with unit trace.
        let a = random_operator(sys, rng);
        let m = a.mat() * a.mat().adjoint();
        let tr = m.trace();
        SpinOperator::new(sys, m / tr).unwrap()
    }

    fn polar_dyad(sys: SpinSystem) -> SpinOperator {
        let north = DickeVector::basis_state(sys, 0);
        let south = DickeVector::basis_state(sys, sys.dim() - 1);
        dyad(&north, &south).unwrap()
    }

    fn max_entry_diff(a: &SpinOperator, b: &SpinOperator) -> f64 {
        max_entry_norm(&(a.mat() - b.mat()))
    }

    #[test]
    fn ground_state_is_annihilated_by_the_generator() {
        let sys = SpinSystem::new(10);
        let south = DickeVector::basis_state(sys, sys.dim() - 1);
        let rho = dyad(&south, &south).unwrap();
        let out = lindblad_apply(&rho);
        assert_eq!(max_entry_norm(out.mat()), 0.0);
    }

    #[test]
    fn polar_dyad_obeys_a_single_element_equation() {
        let sys = SpinSystem::new(14);
        let rho = polar_dyad(sys);
        let out = lindblad_apply(&rho);
        // Λρ = −ρ for the corner element.
        assert!(max_entry_diff(&out, &SpinOperator::new(sys, -rho.mat()).unwrap()) < 1e-14);
    }

    #[test]
    fn generator_is_traceless_on_hermitian_input() {
        let sys = SpinSystem::new(6); // j = 3
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..8 {
            let a = random_operator(sys, &mut rng);
            let herm =
                SpinOperator::new(sys, (a.mat() + a.mat().adjoint()) * C64::new(0.5, 0.0)).unwrap();
            let tr = lindblad_apply(&herm).trace();
            assert!(tr.norm() < 1e-13, "trace {tr}");
        }
    }

    #[test]
    fn generator_matches_dense_superoperator() {
        let sys = SpinSystem::new(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_operator(sys, &mut rng);
        let elementwise = lindblad_apply(&rho);
        let sup = superradiance_superoperator(sys);
        let vec = DVector::from_column_slice(rho.mat().as_slice());
        let dense = &sup * vec;
        let dense_mat = DMatrix::from_column_slice(sys.dim(), sys.dim(), dense.as_slice());
        assert!(max_entry_norm(&(elementwise.mat() - dense_mat)) < 1e-13);
    }

    #[test]
    fn zero_time_is_identity() {
        let sys = SpinSystem::new(9);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_operator(sys, &mut rng);
        let out = propagate(&rho, 0.0, &PropagatorConfig::default()).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn negative_time_is_rejected() {
        let sys = SpinSystem::new(4);
        let err = propagate(&polar_dyad(sys), -0.5, &PropagatorConfig::default());
        assert!(matches!(err, Err(Error::NegativeTime { .. })));
    }

    #[test]
    fn polar_dyad_decays_like_a_single_exponential() {
        let sys = SpinSystem::new(12);
        let cfg = PropagatorConfig::default();
        let out = propagate(&polar_dyad(sys), 1.0, &cfg).unwrap();
        let corner = out.element(0, sys.dim() - 1);
        assert_relative_eq!(corner.re, (-1.0_f64).exp(), max_relative = 1e-9);
        assert!(corner.im.abs() < 1e-14);
    }

    #[test]
    fn banded_and_dense_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for two_j in [1u32, 4, 7] {
            let sys = SpinSystem::new(two_j);
            for _ in 0..3 {
                let rho = random_operator(sys, &mut rng);
                for tau in [0.1, 0.7] {
                    let banded = propagate(&rho, tau, &PropagatorConfig::default()).unwrap();
                    let dense = propagate(
                        &rho,
                        tau,
                        &PropagatorConfig {
                            method: Method::DenseExpmOracle,
                            ..Default::default()
                        },
                    )
                    .unwrap();
                    let gap = max_entry_diff(&banded, &dense);
                    assert!(gap < 1e-9, "2j={two_j} tau={tau}: {gap}");
                }
            }
        }
    }

    #[test]
    fn fixed_step_path_agrees_with_adaptive() {
        let sys = SpinSystem::new(6);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rho = random_operator(sys, &mut rng);
        let adaptive = propagate(&rho, 0.4, &PropagatorConfig::default()).unwrap();
        let fixed = propagate(
            &rho,
            0.4,
            &PropagatorConfig {
                method: Method::FixedRk4,
                max_step: Some(0.005),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(max_entry_diff(&adaptive, &fixed) < 1e-8);
    }

    #[test]
    fn impossible_step_cap_reports_underflow() {
        let sys = SpinSystem::new(8);
        let cfg = PropagatorConfig {
            max_step: Some(1e-18),
            ..Default::default()
        };
        let err = propagate(&polar_dyad(sys), 1.0, &cfg);
        assert!(matches!(err, Err(Error::StepUnderflow { .. })));
    }

    #[test]
    fn dense_oracle_rejects_large_systems() {
        let sys = SpinSystem::new(80);
        let out = propagate(
            &polar_dyad(sys),
            0.1,
            &PropagatorConfig {
                method: Method::DenseExpmOracle,
                ..Default::default()
            },
        );
        assert!(matches!(out, Err(Error::DenseOracleTooLarge { .. })));
    }

    #[test]
    fn trace_and_hermiticity_are_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let cfg = PropagatorConfig::default();
        for two_j in [4u32, 11, 20] {
            let sys = SpinSystem::new(two_j);
            let rho = random_density(sys, &mut rng);
            let mut state = rho.clone();
            for _ in 0..5 {
                state = propagate(&state, 1.0, &cfg).unwrap();
            }
            assert!((state.trace() - rho.trace()).norm() < 1e-10);
            assert!(max_entry_norm(&(state.mat() - state.mat().adjoint())) < 1e-10);
        }
    }

    #[test]
    fn hermiticity_symmetry_holds_for_non_hermitian_input() {
        // propagate(ρ†) = propagate(ρ)† as a superoperator symmetry.
        let sys = SpinSystem::new(8);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rho = random_operator(sys, &mut rng);
        let cfg = PropagatorConfig::default();
        let forward = propagate(&rho, 0.6, &cfg).unwrap();
        let adjoint_first = propagate(&rho.adjoint(), 0.6, &cfg).unwrap();
        assert!(max_entry_diff(&forward.adjoint(), &adjoint_first) < 1e-10);
    }

    #[test]
    fn density_matrices_stay_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let cfg = PropagatorConfig::default();
        for two_j in [6u32, 20] {
            let sys = SpinSystem::new(two_j);
            for _ in 0..4 {
                let rho = random_density(sys, &mut rng);
                for tau in [0.2, 1.0, 3.0] {
                    let out = propagate(&rho, tau, &cfg).unwrap();
                    let herm = (out.mat() + out.mat().adjoint()) * C64::new(0.5, 0.0);
                    let eig = herm.symmetric_eigen();
                    let min = eig.eigenvalues.min();
                    assert!(min > -1e-9, "2j={two_j} tau={tau}: min eigenvalue {min}");
                }
            }
        }
    }

    #[test]
    fn bands_never_mix() {
        let sys = SpinSystem::new(10);
        let dim = sys.dim();
        let cfg = PropagatorConfig::default();
        // Populate a single band and check support is preserved exactly.
        for d in [-7i32, -1, 0, 3, 10] {
            let mut mat = DMatrix::zeros(dim, dim);
            let (row0, col0) = ((-d).max(0) as usize, d.max(0) as usize);
            for s in 0..dim - d.unsigned_abs() as usize {
                mat[(row0 + s, col0 + s)] = C64::new(0.3 + s as f64, -0.1);
            }
            let rho = SpinOperator::new(sys, mat).unwrap();
            let out = propagate(&rho, 0.8, &cfg).unwrap();
            for k1 in 0..dim {
                for k2 in 0..dim {
                    if k2 as i32 - k1 as i32 != d {
                        assert_eq!(out.element(k1, k2), C64::ZERO, "leaked to ({k1},{k2})");
                    }
                }
            }
        }
    }

    #[test]
    fn ground_state_is_stationary() {
        let sys = SpinSystem::new(15);
        let south = DickeVector::basis_state(sys, sys.dim() - 1);
        let rho = dyad(&south, &south).unwrap();
        for tau in [0.3, 2.0, 5.0] {
            let out = propagate(&rho, tau, &PropagatorConfig::default()).unwrap();
            assert_eq!(max_entry_diff(&out, &rho), 0.0, "tau = {tau}");
        }
    }

    #[test]
    fn propagation_is_linear() {
        let sys = SpinSystem::new(7);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let cfg = PropagatorConfig::default();
        let r1 = random_operator(sys, &mut rng);
        let r2 = random_operator(sys, &mut rng);
        let (alpha, beta) = (C64::new(0.7, -0.2), C64::new(-1.1, 0.4));
        let combined = SpinOperator::new(sys, r1.mat() * alpha + r2.mat() * beta).unwrap();
        let lhs = propagate(&combined, 0.9, &cfg).unwrap();
        let rhs_mat = propagate(&r1, 0.9, &cfg).unwrap().into_matrix() * alpha
            + propagate(&r2, 0.9, &cfg).unwrap().into_matrix() * beta;
        assert!(max_entry_norm(&(lhs.mat() - rhs_mat)) < 1e-9);
    }

    #[test]
    fn coherent_state_follows_the_classical_trajectory() {
        // Quick variant at moderate j; the full j = 100 check runs in the
        // acceptance suite.
        let sys = SpinSystem::new(60); // j = 30
        let theta0 = 0.9;
        let v = coherent_vector(&CoherentSpec::new(theta0, 0.0).unwrap(), sys);
        let mut rho = dyad(&v, &v).unwrap();
        let cfg = PropagatorConfig::default();
        let j = sys.j();
        for step in 1..=4 {
            rho = propagate(&rho, 0.25, &cfg).unwrap();
            let tau = 0.25 * step as f64;
            let bloch = crate::observables::bloch_vector(&rho).unwrap();
            let theta_num = (bloch[2] / j).clamp(-1.0, 1.0).acos();
            let theta_cl = crate::analytics::classical_theta(theta0, tau);
            assert!(
                (theta_num - theta_cl).abs() < 5.0 / j.sqrt(),
                "tau={tau}: {theta_num} vs {theta_cl}"
            );
        }
    }

    #[test]
    fn dispersive_phases_basics() {
        let sys = SpinSystem::new(12); // integer j
        let p = PhysicalParams {
            g: 0.05,
            kappa: 4.0,
            delta: 70.0,
            n_atoms: 12,
        };
        // Ground-state entry never acquires phase.
        let ph = dispersive_phases(sys, &p, 123.4);
        assert_eq!(ph[sys.dim() - 1], C64::ONE);
        // t = 0: all ones.
        let ph0 = dispersive_phases(sys, &p, 0.0);
        assert!(ph0.iter().all(|&z| z == C64::ONE));
        // Full revival at t = 2π/η for integer j.
        let t_revival = 2.0 * PI / p.eta();
        let phr = dispersive_phases(sys, &p, t_revival);
        for z in phr.iter() {
            assert!((z - C64::ONE).norm() < 1e-9, "{z}");
        }
    }

    #[test]
    fn dispersive_evolution_preserves_norm() {
        let sys = SpinSystem::new(25);
        let p = PhysicalParams {
            g: 0.05,
            kappa: 4.0,
            delta: 70.0,
            n_atoms: 25,
        };
        let v = coherent_vector(&CoherentSpec::new(1.2, 0.5).unwrap(), sys);
        let t = PI / (2.0 * p.eta());
        let out = propagate_dispersive(&v, &p, t);
        assert!((out.norm() - 1.0).abs() < 1e-13);
        let out0 = propagate_dispersive(&v, &p, 0.0);
        assert_eq!(out0.amp(), v.amp());
    }

    #[test]
    fn dispersive_quarter_period_gives_four_components() {
        let sys = SpinSystem::new(16); // j = 8
        let p = PhysicalParams {
            g: 0.05,
            kappa: 4.0,
            delta: 70.0,
            n_atoms: 16,
        };
        let (theta, phi) = (PI / 2.0, 0.9);
        let v = coherent_vector(&CoherentSpec::new(theta, phi).unwrap(), sys);
        let t = PI / (4.0 * p.eta());
        let out = propagate_dispersive(&v, &p, t);
        // Project onto the four-component frame |θ, φ+π(2q−N+1)/4⟩.
        let n = f64::from(sys.two_j());
        let comps: Vec<DickeVector> = (0..4)
            .map(|q| {
                let az = (phi + PI * (2.0 * q as f64 - n + 1.0) / 4.0).rem_euclid(2.0 * PI);
                coherent_vector(&CoherentSpec::new(theta, az).unwrap(), sys)
            })
            .collect();
        let mut gram = DMatrix::zeros(4, 4);
        let mut rhs = DVector::zeros(4);
        for (i, ci) in comps.iter().enumerate() {
            for (l, cl) in comps.iter().enumerate() {
                gram[(i, l)] = crate::spinalg::overlap(ci, cl).unwrap();
            }
            rhs[i] = crate::spinalg::overlap(ci, &out).unwrap();
        }
        let x = gram.lu().solve(&rhs).expect("well-conditioned frame");
        let captured = rhs.dotc(&x).re;
        assert!(captured > 1.0 - 1e-10, "captured {captured}");
    }
}
