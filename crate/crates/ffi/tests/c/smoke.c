#include <stdio.h>
#include <string.h>
#include "linsofic.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, \
    ls_last_error() ? ls_last_error() : "no error"); return 1; } } while (0)

int main(void) {
    LsSpectrum *a = NULL, *sq = NULL;
    char *json = NULL;
    CHECK(ls_spectrum_from_json("{\"free_rank\":0,\"blocks\":[{\"torsion\":\"0\",\"free\":[],\"size\":2,\"mult\":\"1\"}]}", &a) == LS_STATUS_OK);
    CHECK(ls_spectrum_tensor(a, a, 1000, &sq) == LS_STATUS_OK);
    CHECK(ls_spectrum_stats(sq, &json) == LS_STATUS_OK);
    CHECK(strstr(json, "\"dimension\":\"4\"") != NULL);
    ls_string_free(json);

    LsTable *t = NULL;
    CHECK(ls_table_builtin("S3", &t) == LS_STATUS_OK);
    CHECK(ls_kappa_complex(t, &json) == LS_STATUS_OK);
    CHECK(strstr(json, "\"kappa\":\"2/3\"") != NULL);
    ls_string_free(json);

    CHECK(ls_table_builtin("nope", NULL) != LS_STATUS_OK);
    CHECK(ls_spectrum_from_json("{", &a) == LS_STATUS_PARSE);
    CHECK(ls_last_error() != NULL);

    ls_table_free(t);
    ls_spectrum_free(sq);
    ls_spectrum_free(a);
    puts("ok");
    return 0;
}
