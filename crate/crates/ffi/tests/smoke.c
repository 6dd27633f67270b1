#include <math.h>
#include <stdio.h>

#include "mana_lab.h"

int main(void) {
    MlState *s = NULL;
    if (ml_state_named("strange", NULL, 0, &s) != ML_STATUS_OK) return 1;
    double m = 0.0;
    if (ml_mana(s, &m) != ML_STATUS_OK) return 2;
    ml_state_free(s);
    if (fabs(m - log(5.0 / 3.0)) > 1e-12) return 3;

    MlState *bad = NULL;
    if (ml_state_named("nosuch", NULL, 0, &bad) != ML_STATUS_INVALID_ARGUMENT) return 4;
    if (ml_last_error_message() == NULL) return 5;
    printf("mana = %.8f\n", m);
    return 0;
}
