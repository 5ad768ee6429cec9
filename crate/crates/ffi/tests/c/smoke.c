#include <stdio.h>
#include <string.h>

#include "orbifunctor.h"

int main(void) {
    const int64_t entries[4] = {2, 0, 0, 3};
    OfGroup *g = NULL;
    if (of_group_cokernel(2, 2, entries, &g) != OF_STATUS_OK) {
        return 1;
    }
    char *s = NULL;
    of_group_describe(g, &s);
    printf("%s\n", s);
    int ok = strcmp(s, "Z/6") == 0;
    of_string_free(s);
    of_group_free(g);

    OfReport *r = NULL;
    OfOptions opts = {0};
    opts.has_truncation = true;
    opts.truncation = 4;
    if (of_run("demo-tor-probe", NULL, &opts, &r) != OF_STATUS_OK) {
        return 1;
    }
    ok = ok && of_report_passes(r) == 1;
    of_report_free(r);

    OfManifest *m = NULL;
    if (of_manifest_parse("{", &m) == OF_STATUS_OK || m != NULL || of_last_error() == NULL) {
        return 1;
    }
    return ok ? 0 : 1;
}
