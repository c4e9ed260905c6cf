/* Loads a space document from argv[1] (or the S3xS3 model), checks it and
 * prints the text report. Exit status: 0 pass, 1 check failed, 2 error. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "nearly_kahler.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    char *buf = malloc((size_t)n + 1);
    if (buf && fread(buf, 1, (size_t)n, f) != (size_t)n) {
        free(buf);
        buf = NULL;
    }
    if (buf) buf[n] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    NkSpace *space = NULL;
    NkStatus st;
    if (argc > 1) {
        char *text = slurp(argv[1]);
        if (!text) {
            fprintf(stderr, "cannot read %s\n", argv[1]);
            return 2;
        }
        st = nk_space_from_json(text, &space);
        free(text);
    } else {
        st = nk_space_emit("s3xs3", &space);
    }
    if (st != NK_STATUS_OK) {
        fprintf(stderr, "load failed (%d): %s\n", (int)st, nk_last_error());
        return 2;
    }

    NkOptions opts = nk_options_default();
    opts.samples = 10;
    NkReport *report = NULL;
    st = nk_check(space, &opts, 1, &report);
    nk_space_free(space);
    if (st != NK_STATUS_OK) {
        fprintf(stderr, "check failed (%d): %s\n", (int)st, nk_last_error());
        return 2;
    }

    char *text = NULL;
    int passed = 0;
    nk_report_text(report, &text);
    nk_report_passed(report, &passed);
    printf("nearly-kahler %s\n%s", nk_version(), text);
    nk_string_free(text);
    nk_report_free(report);
    return passed ? 0 : 1;
}
