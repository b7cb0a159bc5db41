//! Angular-momentum algebra in the Dicke basis.
//!
//! Everything lives in a single spin-j irreducible representation spanned by
//! the Dicke states |j,m⟩, m = −j … j. Vector and matrix entries are ordered
//! by k = j − m, so index 0 is the "all up" state m = j and index 2j is
//! "all down". The quantum number is stored doubled (`two_j`) so half-integer
//! j is exact.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// A single spin-j representation; fixes the dimension 2j+1 of every vector
/// and operator built on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSystem {
    two_j: u32,
}

impl SpinSystem {
    /// System with quantum number j = `two_j` / 2. Panics on `two_j` = 0:
    /// the dissipator is normalized by 1/2j.
    pub fn new(two_j: u32) -> Self {
        assert!(two_j >= 1, "two_j must be at least 1");
        Self { two_j }
    }

    /// System for `n` two-level atoms in the maximal-spin sector, j = n/2.
    pub fn from_atom_count(n: u32) -> Self {
        Self::new(n)
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// The m value stored at array index k (m = j − k).
    pub fn m_at(self, k: usize) -> f64 {
        (f64::from(self.two_j) - 2.0 * k as f64) / 2.0
    }

    /// Lowering matrix element c_m = √((j+m)(j−m+1)), i.e. J₋|j,m⟩ = c_m|j,m−1⟩.
    ///
    /// `m` must be a ladder level: −j ≤ m ≤ j with j − m integer.
    pub fn ladder_coeff(self, m: f64) -> Result<f64> {
        let k = self.j() - m;
        let k_round = k.round();
        if !m.is_finite()
            || (k - k_round).abs() > 1e-9
            || k_round < 0.0
            || k_round > f64::from(self.two_j)
        {
            return Err(Error::LevelOutOfRange { j: self.j(), m });
        }
        Ok(self.ladder_coeff_at(k_round as usize))
    }

    /// c_m at index k = j − m; (j+m)(j−m+1) = (2j−k)(k+1) is an exact
    /// integer product, so this is accurate to one rounding of sqrt.
    pub(crate) fn ladder_coeff_at(self, k: usize) -> f64 {
        self.ladder_coeff_sq_at(k).sqrt()
    }

    pub(crate) fn ladder_coeff_sq_at(self, k: usize) -> f64 {
        debug_assert!(k < self.dim());
        (f64::from(self.two_j) - k as f64) * (k as f64 + 1.0)
    }
}

/// Orientation (θ, φ) of a spin coherent state.
///
/// γ = tan(θ/2)·e^{iφ} for θ < π; θ = π is the south pole (γ = ∞) and is
/// represented without ever forming γ. φ is canonicalized to [0, 2π) and to
/// 0 at the poles, where it is meaningless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec {
    theta: f64,
    phi: f64,
}

impl CoherentSpec {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::ThetaOutOfRange { theta });
        }
        let phi = if theta == 0.0 || theta == PI {
            0.0
        } else {
            phi.rem_euclid(TAU)
        };
        Ok(Self { theta, phi })
    }

    /// North pole θ = 0, the "all up" state |j,j⟩.
    pub fn north() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// South pole θ = π, the "all down" state |j,−j⟩.
    pub fn south() -> Self {
        Self {
            theta: PI,
            phi: 0.0,
        }
    }

    /// Orientation from a real amplitude γ = tan(θ/2): θ = 2·arctan|γ|,
    /// with φ = 0 for γ ≥ 0 and φ = π for γ < 0.
    pub fn from_real_gamma(gamma: f64) -> Self {
        let theta = 2.0 * gamma.abs().atan();
        let phi = if gamma < 0.0 { PI } else { 0.0 };
        Self { theta, phi }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    /// Reflection through the equatorial plane: (θ, φ) ↦ (π−θ, φ).
    ///
    /// The image shares |⟨J₋⟩| = j·sinθ with the original; the pair are the
    /// two coherent states with γ₁γ₂* = 1.
    pub fn equator_mirror(self) -> Self {
        Self::new(PI - self.theta, self.phi).expect("mirror of a valid angle is valid")
    }

    pub fn is_north_pole(self) -> bool {
        self.theta == 0.0
    }

    pub fn is_south_pole(self) -> bool {
        self.theta == PI
    }
}

/// A ket in the Dicke basis; `amp[k]` is the amplitude of |j, m = j−k⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeVector {
    sys: SpinSystem,
    amp: DVector<C64>,
}

impl DickeVector {
    pub fn new(sys: SpinSystem, amp: DVector<C64>) -> Result<Self> {
        if amp.len() != sys.dim() {
            return Err(Error::VectorLength {
                len: amp.len(),
                dim: sys.dim(),
            });
        }
        Ok(Self { sys, amp })
    }

    /// The Dicke state |j, m = j−k⟩.
    pub fn basis_state(sys: SpinSystem, k: usize) -> Self {
        let mut amp = DVector::zeros(sys.dim());
        amp[k] = C64::new(1.0, 0.0);
        Self { sys, amp }
    }

    pub fn sys(&self) -> SpinSystem {
        self.sys
    }

    pub fn amp(&self) -> &DVector<C64> {
        &self.amp
    }

    pub fn into_amp(self) -> DVector<C64> {
        self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            sys: self.sys,
            amp: &self.amp * factor,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_system(self.sys, other.sys)?;
        Ok(Self {
            sys: self.sys,
            amp: &self.amp + &other.amp,
        })
    }
}

/// A (2j+1)×(2j+1) operator in the Dicke basis; entry (k₁, k₂) is
/// ⟨j,m₁|ρ|j,m₂⟩ with k = j − m. No Hermiticity is assumed: off-diagonal
/// dyads |γ⟩⟨γ′| are first-class citizens.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    sys: SpinSystem,
    mat: DMatrix<C64>,
}

impl SpinOperator {
    pub fn new(sys: SpinSystem, mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != sys.dim() || mat.ncols() != sys.dim() {
            return Err(Error::MatrixShape {
                rows: mat.nrows(),
                cols: mat.ncols(),
                dim: sys.dim(),
            });
        }
        Ok(Self { sys, mat })
    }

    pub fn zeros(sys: SpinSystem) -> Self {
        Self {
            sys,
            mat: DMatrix::zeros(sys.dim(), sys.dim()),
        }
    }

    pub fn identity(sys: SpinSystem) -> Self {
        Self {
            sys,
            mat: DMatrix::identity(sys.dim(), sys.dim()),
        }
    }

    pub fn sys(&self) -> SpinSystem {
        self.sys
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            sys: self.sys,
            mat: self.mat.adjoint(),
        }
    }

    /// Apply the operator to a ket.
    pub fn apply(&self, v: &DickeVector) -> Result<DickeVector> {
        check_same_system(self.sys, v.sys)?;
        Ok(DickeVector {
            sys: self.sys,
            amp: &self.mat * &v.amp,
        })
    }

    pub fn element(&self, k1: usize, k2: usize) -> C64 {
        self.mat[(k1, k2)]
    }
}

pub(crate) fn check_same_system(a: SpinSystem, b: SpinSystem) -> Result<()> {
    if a != b {
        return Err(Error::SystemMismatch {
            left: a.two_j(),
            right: b.two_j(),
        });
    }
    Ok(())
}

/// Largest entry modulus of a complex matrix; the entrywise distance used
/// throughout the test suites.
pub fn max_entry_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The lowering operator J₋, with ⟨j,m−1|J₋|j,m⟩ = c_m its only nonzeros.
pub fn lowering_matrix(sys: SpinSystem) -> SpinOperator {
    let dim = sys.dim();
    let mut mat = DMatrix::zeros(dim, dim);
    for k in 0..dim - 1 {
        // J₋ maps index k to k+1 (m to m−1).
        mat[(k + 1, k)] = C64::new(sys.ladder_coeff_at(k), 0.0);
    }
    SpinOperator { sys, mat }
}

/// The raising operator J₊ = (J₋)†.
pub fn raising_matrix(sys: SpinSystem) -> SpinOperator {
    lowering_matrix(sys).adjoint()
}

/// J_z, diagonal with entries m.
pub fn jz_matrix(sys: SpinSystem) -> SpinOperator {
    let dim = sys.dim();
    let mut mat = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        mat[(k, k)] = C64::new(sys.m_at(k), 0.0);
    }
    SpinOperator { sys, mat }
}

/// Spin coherent state |θ,φ⟩ as a Dicke-basis ket.
///
/// The amplitude at k = j − m is √C(2j,k)·cos^{2j−k}(θ/2)·sin^k(θ/2)·e^{ikφ},
/// evaluated in the log domain so large j does not overflow the binomials.
/// The poles return exact basis states.
pub fn coherent_vector(spec: &CoherentSpec, sys: SpinSystem) -> DickeVector {
    let dim = sys.dim();
    if spec.is_north_pole() {
        return DickeVector::basis_state(sys, 0);
    }
    if spec.is_south_pole() {
        return DickeVector::basis_state(sys, dim - 1);
    }
    let half = 0.5 * spec.theta;
    let ln_cos = half.cos().ln();
    let ln_sin = half.sin().ln();
    let two_j = f64::from(sys.two_j());
    let mut amp = DVector::zeros(dim);
    let mut ln_binom = 0.0; // ln C(2j, k), accumulated over k
    for k in 0..dim {
        if k > 0 {
            ln_binom += ((two_j - k as f64 + 1.0) / k as f64).ln();
        }
        let ln_mag = 0.5 * ln_binom + (two_j - k as f64) * ln_cos + k as f64 * ln_sin;
        amp[k] = C64::from_polar(ln_mag.exp(), k as f64 * spec.phi);
    }
    DickeVector { sys, amp }
}

/// Unitary rotation exp(−i·angle·(J_x·sin(axis_phi) − J_y·cos(axis_phi)))
/// about the equatorial axis at azimuth `axis_phi` − π/2.
///
/// Convention fixed by `coherent_vector`: applied to |j,j⟩ this produces the
/// coherent state (θ = angle, φ = axis_phi + π) with no extra phase.
pub fn rotation_matrix(sys: SpinSystem, axis_phi: f64, angle: f64) -> SpinOperator {
    let dim = sys.dim();
    if angle == 0.0 {
        return SpinOperator::identity(sys);
    }
    // Generator G = (i e^{−i axis_phi} J₊ − i e^{i axis_phi} J₋)/2, Hermitian
    // tridiagonal; exponentiate through its eigendecomposition so the result
    // stays unitary to rounding for any j·angle.
    let mut gen = DMatrix::zeros(dim, dim);
    let up = C64::new(0.0, 0.5) * C64::from_polar(1.0, -axis_phi);
    for k in 0..dim - 1 {
        let c = C64::new(sys.ladder_coeff_at(k), 0.0);
        gen[(k, k + 1)] = up * c; // J₊ entry at (k, k+1) scaled
        gen[(k + 1, k)] = (up * c).conj();
    }
    let eig = gen.symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for (col, lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = C64::from_polar(1.0, -angle * lambda);
        for r in 0..dim {
            scaled[(r, col)] *= phase;
        }
    }
    let mat = scaled * eig.eigenvectors.adjoint();
    SpinOperator { sys, mat }
}

/// ⟨a|b⟩ = Σ_m conj(a_m)·b_m.
pub fn overlap(a: &DickeVector, b: &DickeVector) -> Result<C64> {
    check_same_system(a.sys, b.sys)?;
    Ok(a.amp.dotc(&b.amp))
}

/// The dyad |a⟩⟨b|, entry (k₁,k₂) = a_{k₁}·conj(b_{k₂}).
pub fn dyad(a: &DickeVector, b: &DickeVector) -> Result<SpinOperator> {
    check_same_system(a.sys, b.sys)?;
    let mat = &a.amp * b.amp.adjoint();
    Ok(SpinOperator { sys: a.sys, mat })
}
