/* Minimal consumer of the C API: evaluate the quantum-gas Yukawa term
 * near the condensation onset and compare it with the asymptote.
 *
 * Build (from the workspace root, after `cargo build --release`):
 *   cc crates/frobstat-ffi/examples/demo.c \
 *      -Icrates/frobstat-ffi/include \
 *      target/release/libfrobstat_ffi.a -lm -o demo
 */
#include <stdio.h>
#include <stdlib.h>
#include "frobstat.h"

int main(void) {
    FrobUnits units = frob_units_reduced();
    FrobModel *gas = frob_model_bose(units);
    if (!gas) {
        fprintf(stderr, "failed to create model\n");
        return 1;
    }

    double x[2] = {1.0, 0.5}; /* (beta, gamma) */
    double g[4];
    double yukawa, closed, asymptote;
    FrobStatus status;

    status = frob_metric(gas, x, 2, g);
    if (status != FROB_STATUS_OK) {
        fprintf(stderr, "metric: %s\n", frob_status_message(status));
        return 1;
    }
    printf("g = [[%.12g, %.12g], [%.12g, %.12g]]\n", g[0], g[1], g[2], g[3]);

    status = frob_yukawa(gas, x, 2, &yukawa);
    if (status != FROB_STATUS_OK) {
        fprintf(stderr, "yukawa: %s\n", frob_status_message(status));
        return 1;
    }
    frob_bose_yukawa_closed_form(x[0], x[1], units, &closed);
    printf("yukawa (contraction) = %.12g\n", yukawa);
    printf("yukawa (closed form) = %.12g\n", closed);

    frob_bose_yukawa_closed_form(1.0, 1e-6, units, &closed);
    frob_bec_asymptote(1.0, 1e-6, units, &asymptote);
    printf("near condensation: closed = %.6g, asymptote = %.6g, ratio = %.6f\n",
           closed, asymptote, closed / asymptote);

    frob_model_free(gas);
    return 0;
}
