#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "foldext.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    rewind(f);
    char *buf = malloc(n + 1);
    if (fread(buf, 1, n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc != 2) return 10;
    char *json = slurp(argv[1]);
    if (!json) return 11;

    FoldextInstance *inst = NULL;
    if (foldext_instance_parse(json, &inst) != FOLDEXT_STATUS_OK) return 12;

    size_t count = 0;
    bool truncated = true;
    if (foldext_generated_set_count(inst, 0, &count, &truncated) != FOLDEXT_STATUS_OK) return 13;

    FoldextOutcome outcome;
    char *cert = NULL;
    if (foldext_decide(inst, 0, 0, &outcome, &cert) != FOLDEXT_STATUS_OK) return 14;
    if (outcome != FOLDEXT_OUTCOME_EXTENDABLE || !cert) return 15;

    bool accepted = false;
    if (foldext_check_certificate(inst, cert, &accepted) != FOLDEXT_STATUS_OK || !accepted) return 16;

    if (foldext_instance_parse("{", &inst) != FOLDEXT_STATUS_PARSE) return 17;
    if (!foldext_last_error()) return 18;

    printf("%zu %d\n", count, (int)truncated);
    foldext_string_free(cert);
    foldext_instance_free(inst);
    free(json);
    return 0;
}
