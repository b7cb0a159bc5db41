/* Build (from the workspace root, after `cargo build -p spincat-capi`):
 *
 *   cc crates/capi/examples/demo.c -Icrates/capi/include \
 *      target/debug/libspincat_capi.a -lm -lpthread -ldl -o spincat_demo
 *
 * Propagates the polar pair dyad |j,j><j,-j| for one classical time unit and
 * checks its norms against the exact laws, then prepares a long-lived cat
 * and reports its symmetric decomposition.
 */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "spincat.h"

static void require(SpincatStatus status, const char *what) {
    if (status != SPINCAT_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)status,
                spincat_last_error_message());
        exit(1);
    }
}

int main(void) {
    const uint32_t two_j = 20;
    const double pi = 3.14159265358979323846;

    SpincatVector *north = NULL;
    SpincatVector *south = NULL;
    require(spincat_coherent_vector(two_j, 0.0, 0.0, &north), "north");
    require(spincat_coherent_vector(two_j, pi, 0.0, &south), "south");

    SpincatOperator *dyad = NULL;
    require(spincat_vector_dyad(north, south, &dyad), "dyad");

    SpincatOperator *evolved = NULL;
    require(spincat_propagate(dyad, 1.0, SPINCAT_METHOD_ADAPTIVE_RK, -1.0, -1.0,
                              -1.0, &evolved),
            "propagate");

    double n1 = 0.0, n2 = 0.0, ref1 = 0.0, ref2 = 0.0;
    require(spincat_norm_hs(evolved, &n1), "norm_hs");
    require(spincat_norm_abs(evolved, &n2), "norm_abs");
    require(spincat_polar_cat_norms(1.0, &ref1, &ref2), "reference");
    printf("polar pair at tau=1: N1 = %.12f (exact %.12f), N2 = %.12f (exact %.12f)\n",
           n1, ref1, n2, ref2);
    if (fabs(n1 - ref1) > 1e-8 || fabs(n2 - ref2) > 1e-8) {
        fprintf(stderr, "norms deviate from the exact law\n");
        return 1;
    }

    SpincatVector *cat = NULL;
    require(spincat_prepare_long_lived_cat(two_j, pi / 3.0, 0.0, 0.05, 4.0, 70.0,
                                           &cat),
            "prepare");
    double theta = 0.0, phi = 0.0, captured = 0.0;
    require(spincat_symmetric_decomposition(cat, &theta, &phi, &captured),
            "decomposition");
    printf("prepared cat: symmetric pair at theta=%.6f, phi=%.6f, captured=%.12f\n",
           theta, phi, captured);
    if (captured < 1.0 - 1e-8) {
        fprintf(stderr, "prepared state is not a symmetric cat\n");
        return 1;
    }

    spincat_vector_free(cat);
    spincat_operator_free(evolved);
    spincat_operator_free(dyad);
    spincat_vector_free(north);
    spincat_vector_free(south);
    puts("ok");
    return 0;
}
