/* spincat C API: collective-spin superradiance simulation. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum SpincatStatus {
  SPINCAT_STATUS_OK = 0,
  SPINCAT_STATUS_NULL_POINTER = 1,
  SPINCAT_STATUS_INVALID_ARGUMENT = 2,
  SPINCAT_STATUS_DEGENERATE_INPUT = 3,
  SPINCAT_STATUS_NUMERICAL_FAILURE = 4,
  SPINCAT_STATUS_INTERNAL_PANIC = 5,
} SpincatStatus;

// Propagation method selector for `spincat_propagate`.
typedef enum SpincatMethod {
  SPINCAT_METHOD_ADAPTIVE_RK = 0,
  SPINCAT_METHOD_FIXED_RK4 = 1,
  SPINCAT_METHOD_DENSE_EXPM_ORACLE = 2,
} SpincatMethod;

// Opaque operator in the Dicke basis.
typedef struct SpincatOperator SpincatOperator;

// Opaque ket in the Dicke basis.
typedef struct SpincatVector SpincatVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; valid until the next
// failing call on the same thread. Never null.
const char *spincat_last_error_message(void);

// Spin coherent state |θ,φ⟩ for the spin j = `two_j`/2.
//
// # Safety
// `out` must be a valid pointer; the returned handle must be released with
// `spincat_vector_free`.
enum SpincatStatus spincat_coherent_vector(uint32_t two_j,
                                           double theta,
                                           double phi,
                                           struct SpincatVector **out);

// Normalized superposition c₁|θ₁,φ₁⟩ + c₂|θ₂,φ₂⟩.
//
// # Safety
// See `spincat_coherent_vector`.
enum SpincatStatus spincat_cat_vector(uint32_t two_j,
                                      double theta1,
                                      double phi1,
                                      double theta2,
                                      double phi2,
                                      double c1_re,
                                      double c1_im,
                                      double c2_re,
                                      double c2_im,
                                      struct SpincatVector **out);

// Three-step preparation of a long-lived symmetric cat (resonant pulse,
// dispersive splitting for t = π/(2η), final π/2 pulse).
//
// # Safety
// See `spincat_coherent_vector`.
enum SpincatStatus spincat_prepare_long_lived_cat(uint32_t two_j,
                                                  double theta,
                                                  double phi,
                                                  double g,
                                                  double kappa,
                                                  double delta,
                                                  struct SpincatVector **out);

// Dispersive (effectively unitary) evolution of a ket for `t` seconds.
//
// # Safety
// `psi` must be a live handle from this library.
enum SpincatStatus spincat_dispersive_evolve(const struct SpincatVector *psi,
                                             double g,
                                             double kappa,
                                             double delta,
                                             double t,
                                             struct SpincatVector **out);

// Dimension 2j+1 of the ket.
//
// # Safety
// `v` must be a live handle.
enum SpincatStatus spincat_vector_dim(const struct SpincatVector *v, uintptr_t *out);

// Copy amplitudes as interleaved (re, im) pairs; `buffer` must hold
// 2·(2j+1) doubles.
//
// # Safety
// `v` must be a live handle and `buffer` writable for `2*dim` doubles.
enum SpincatStatus spincat_vector_amplitudes(const struct SpincatVector *v,
                                             double *buffer,
                                             uintptr_t buffer_len);

// ⟨a|b⟩.
//
// # Safety
// `a` and `b` must be live handles.
enum SpincatStatus spincat_vector_overlap(const struct SpincatVector *a,
                                          const struct SpincatVector *b,
                                          double *re,
                                          double *im);

// The dyad |a⟩⟨b| as a new operator handle.
//
// # Safety
// `a` and `b` must be live handles; release the result with
// `spincat_operator_free`.
enum SpincatStatus spincat_vector_dyad(const struct SpincatVector *a,
                                       const struct SpincatVector *b,
                                       struct SpincatOperator **out);

// Best symmetric-pair decomposition {(θ,φ), (π−θ,φ)} of a ket.
//
// # Safety
// `v` must be a live handle.
enum SpincatStatus spincat_symmetric_decomposition(const struct SpincatVector *v,
                                                   double *theta,
                                                   double *phi,
                                                   double *captured);

// # Safety
// `v` must be a handle from this library, not yet freed; null is a no-op.
void spincat_vector_free(struct SpincatVector *v);

// Operator from a row-major interleaved (re, im) dense matrix of shape
// (2j+1)×(2j+1); `data` holds 2·dim² doubles.
//
// # Safety
// `data` must be readable for `2*dim*dim` doubles.
enum SpincatStatus spincat_operator_from_dense(uint32_t two_j,
                                               const double *data,
                                               uintptr_t data_len,
                                               struct SpincatOperator **out);

// # Safety
// `op` must be a live handle.
enum SpincatStatus spincat_operator_dim(const struct SpincatOperator *op, uintptr_t *out);

// Copy the operator as a row-major interleaved (re, im) array of
// 2·dim² doubles.
//
// # Safety
// `op` must be a live handle and `buffer` writable for `2*dim*dim` doubles.
enum SpincatStatus spincat_operator_elements(const struct SpincatOperator *op,
                                             double *buffer,
                                             uintptr_t buffer_len);

// e^{Λτ}ρ with the chosen method. Non-positive `rel_tol`, `abs_tol` or
// `max_step` select the defaults (1e-10, 1e-13, 0.1/(j+1)).
//
// # Safety
// `rho` must be a live handle; release the result with
// `spincat_operator_free`.
enum SpincatStatus spincat_propagate(const struct SpincatOperator *rho,
                                     double tau,
                                     enum SpincatMethod method,
                                     double rel_tol,
                                     double abs_tol,
                                     double max_step,
                                     struct SpincatOperator **out);

// Hilbert–Schmidt norm tr ρρ†.
//
// # Safety
// `op` must be a live handle.
enum SpincatStatus spincat_norm_hs(const struct SpincatOperator *op, double *out);

// Entrywise absolute-sum norm in the Dicke basis.
//
// # Safety
// `op` must be a live handle.
enum SpincatStatus spincat_norm_abs(const struct SpincatOperator *op, double *out);

// Normalized Bloch vector (⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)/tr ρ into `out[3]`.
//
// # Safety
// `op` must be a live handle and `out` writable for 3 doubles.
enum SpincatStatus spincat_bloch_vector(const struct SpincatOperator *op, double *out);

// # Safety
// `op` must be a handle from this library, not yet freed; null is a no-op.
void spincat_operator_free(struct SpincatOperator *op);

// Dispersive phase-shift rate η = g²δ/(κ²+δ²).
enum SpincatStatus spincat_eta(double g, double kappa, double delta, double *out);

// Classical time scale κ/(N g²).
enum SpincatStatus spincat_t_class(double g, double kappa, uint32_t n_atoms, double *out);

// Splitting time π/(m·η); `m` must be even and positive, η nonzero.
enum SpincatStatus spincat_multi_component_time(double g,
                                                double kappa,
                                                double delta,
                                                int64_t m,
                                                double *out);

// cos²α between J₋|γ⟩ and |γ⟩ in closed form.
enum SpincatStatus spincat_cos2_alpha(double theta, double j, double *out);

// Initial decay rate of the Hilbert–Schmidt norm of |γ₁⟩⟨γ₂|, split into
// classical-scale and fast (∝ j) parts.
enum SpincatStatus spincat_n1_initial_slope(double theta1,
                                            double phi1,
                                            double theta2,
                                            double phi2,
                                            double j,
                                            double *slow,
                                            double *fast,
                                            double *total);

// Fast decoherence rate 2j(γ₁−γ₂)²(1−γ₁γ₂)²/((1+γ₁²)(1+γ₂²))².
enum SpincatStatus spincat_n2_rate_general(double gamma1, double gamma2, double j, double *out);

// Linear and quadratic exponent coefficients for the mirror pair (γ, 1/γ).
enum SpincatStatus spincat_n2_coeffs_symmetric(double gamma1, double *linear, double *quadratic);

// Diagonal-state decay rate γ⁴((γ²−1)/(γ²+1))².
enum SpincatStatus spincat_n2_rate_diagonal(double gamma, double *out);

// Exact polar-pair norms (e^{−2τ}, e^{−τ}).
enum SpincatStatus spincat_polar_cat_norms(double tau, double *n1, double *n2);

// Overdamped-pendulum trajectory θ(τ) = 2·arctan(tan(θ₀/2)·e^τ).
enum SpincatStatus spincat_classical_theta(double theta0, double tau, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
