#include "coxkit.h"
#include <stdio.h>
#include <string.h>
#include <assert.h>

int main(void) {
    const char *json =
        "{\"generators\": [\"s\", \"t\"], \"m\": [[1, 0], [0, 1]]}";
    CoxkitSystem *sys = NULL;
    assert(coxkit_system_from_json(json, &sys) == COXKIT_OK);

    uint32_t rank = 0;
    assert(coxkit_system_rank(sys, &rank) == COXKIT_OK && rank == 2);

    char *nf = NULL;
    assert(coxkit_normal_form(sys, "s t s t", &nf) == COXKIT_OK);
    printf("nf(stst) = %s\n", nf);
    assert(strcmp(nf, "s t s t") == 0);
    coxkit_string_free(nf);

    char *bad = NULL;
    int code = coxkit_normal_form(sys, "s q", &bad);
    assert(code == COXKIT_ERR_INVALID);
    printf("error: %s\n", coxkit_last_error());

    char *report = NULL;
    assert(coxkit_rank_one(sys, "s t", &report) == COXKIT_OK);
    printf("rank-one report: %.60s...\n", report);
    coxkit_string_free(report);

    coxkit_system_free(sys);
    puts("C ABI smoke test passed");
    return 0;
}
