#include <stdio.h>
#include "cullis.h"

int main(void) {
    CullisMatrix *m = NULL;
    if (cullis_matrix_parse("3 2 Q\n1 2\n3 4\n0 1/2\n", &m) != CULLIS_STATUS_OK) {
        return 10;
    }
    char buf[64];
    size_t len = 0;
    CullisAlgorithm algos[] = {CULLIS_ALGORITHM_INJECTION, CULLIS_ALGORITHM_MINOR, CULLIS_ALGORITHM_LAPLACE};
    for (int i = 0; i < 3; i++) {
        if (cullis_matrix_det(m, algos[i], buf, sizeof buf, &len) != CULLIS_STATUS_OK) {
            return 11;
        }
        printf("det %s\n", buf);
    }
    cullis_matrix_free(m);

    CullisSweepOptions opts = cullis_sweep_options_default();
    opts.jobs = 2;
    CullisReport *r = NULL;
    if (cullis_verify_codim_bound(4, 2, 2, &opts, &r) != CULLIS_STATUS_OK) {
        return 12;
    }
    printf("passed %d cases %llu\n", cullis_report_passed(r), (unsigned long long)cullis_report_cases(r));
    cullis_report_free(r);

    if (cullis_matrix_parse("2 3 F5\n1 2 3\n", &m) != CULLIS_STATUS_PARSE) {
        return 13;
    }
    cullis_last_error(buf, sizeof buf, &len);
    printf("error %s\n", buf);
    return 0;
}
