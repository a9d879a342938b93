#include <math.h>
#include <stdio.h>
#include <string.h>

#include "walklab.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,   \
                    #cond, walk_last_error());                        \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    const double alpha[8] = {0.5, 0.0, 0.0, 0.5, -0.5, 0.0, 0.0, -0.5};
    WalkCoin *fourier = NULL;
    WalkCoin *grover = NULL;
    WalkState *start = NULL;
    WalkState *later = NULL;

    CHECK(walk_coin_fourier(WALK_SHIFT_MS, &fourier) == WALK_STATUS_OK);
    CHECK(walk_coin_grover(WALK_SHIFT_MS, &grover) == WALK_STATUS_OK);
    CHECK(walk_state_initial(WALK_INIT_DELTA, alpha, 2, &start) == WALK_STATUS_OK);
    CHECK(walk_state_size(start) == 2);

    CHECK(walk_evolve(start, fourier, 16, WALK_ENGINE_MOMENTUM, &later) == WALK_STATUS_OK);
    double amp[8];
    CHECK(walk_state_amplitude(later, 0, 0, amp) == WALK_STATUS_OK);
    for (int j = 0; j < 8; ++j) {
        CHECK(fabs(amp[j] - alpha[j]) < 1e-12);
    }

    size_t period = 0;
    double residual = 1.0;
    CHECK(walk_detect_period(start, fourier, 64, &period, &residual) == WALK_STATUS_OK);
    CHECK(period == 16);

    bool has_root = true;
    CHECK(walk_certificate(fourier, 16, &has_root, NULL) == WALK_STATUS_OK);
    CHECK(!has_root);
    char *json = NULL;
    CHECK(walk_certificate(grover, 16, &has_root, &json) == WALK_STATUS_OK);
    CHECK(has_root && strstr(json, "ConstantRoots") != NULL);
    walk_string_free(json);

    CHECK(walk_state_initial(WALK_INIT_DELTA, NULL, 2, &later) == WALK_STATUS_NULL_POINTER);
    CHECK(strlen(walk_last_error()) > 0);

    walk_state_free(later);
    walk_state_free(start);
    walk_coin_free(grover);
    walk_coin_free(fourier);
    puts("ok");
    return 0;
}
