#include <stdio.h>
#include <string.h>
#include "nullcone.h"

int main(void) {
    NcFormulas f;
    if (nc_formulas(NC_FAMILY_PFAFFIAN, 0, 1, 3, &f) != NC_STATUS_OK || f.ara != 3) return 1;

    NcNullcone *h = NULL;
    if (nc_nullcone_new(NC_FAMILY_PFAFFIAN, 0, 1, 3, "p=32003", &h) != NC_STATUS_OK) return 2;
    int64_t height = -1;
    if (nc_nullcone_height(h, &height) != NC_STATUS_OK || height != f.height) return 3;
    nc_nullcone_free(h);

    if (nc_nullcone_new(NC_FAMILY_PFAFFIAN, 0, 1, 3, "p=4", &h) != NC_STATUS_INVALID_ARGUMENT) return 4;
    if (strlen(nc_last_error()) == 0) return 5;

    char *count = NULL;
    if (nc_count_closed("Sp", 0, 1, 0, 1, 3, &count) != NC_STATUS_OK || strcmp(count, "24") != 0) return 6;
    nc_string_free(count);

    printf("ok\n");
    return 0;
}
