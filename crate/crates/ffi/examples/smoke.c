#include <stdio.h>
#include "patpop.h"

int main(void) {
    PatpopPatternSet *set = NULL;
    if (patpop_pattern_set_parse("132,231", &set) != PATPOP_STATUS_OK) {
        fprintf(stderr, "%s\n", patpop_last_error());
        return 1;
    }
    char *count = NULL, *ratio = NULL;
    if (patpop_popularity(set, "321", 4, &count, &ratio) != PATPOP_STATUS_OK) {
        fprintf(stderr, "%s\n", patpop_last_error());
        return 1;
    }
    printf("%s %s\n", count, ratio);
    patpop_string_free(count);
    patpop_string_free(ratio);
    patpop_pattern_set_free(set);
    return 0;
}
