#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qchaos.h"

#define CHECK(cond)                                                 \
    do {                                                            \
        if (!(cond)) {                                              \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                               \
        }                                                           \
    } while (0)

int main(void) {
    QcMatrix *u = NULL;
    QcEigenSystem *es = NULL;
    double phases[32];
    double defect = -1.0;

    CHECK(qc_matrix_qft(5, &u) == QC_STATUS_OK);
    CHECK(qc_matrix_dim(u) == 32);
    CHECK(qc_matrix_unitarity_defect(u, &defect) == QC_STATUS_OK);
    CHECK(defect < 1e-12);
    CHECK(qc_eig(u, 0.0, 3, &es) == QC_STATUS_OK);
    CHECK(qc_eig_phases(es, phases, 32) == QC_STATUS_OK);
    for (int i = 0; i < 32; ++i) {
        double r = phases[i] / (M_PI / 2.0);
        CHECK(fabs(r - round(r)) < 1e-8);
    }
    qc_eig_free(es);
    qc_matrix_free(u);

    u = NULL;
    CHECK(qc_matrix_grover(4, 16, &u) == QC_STATUS_INVALID_ARGUMENT);
    CHECK(u == NULL);
    CHECK(qc_last_error_message() != NULL);
    CHECK(strlen(qc_last_error_message()) > 0);
    printf("ok %s\n", qc_version());
    return 0;
}
