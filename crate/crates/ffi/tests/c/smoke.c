#include <stdio.h>
#include <string.h>
#include "tribracket.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, trb_last_error()); return 1; } } while (0)

int main(void) {
    TrbBracket *b = NULL;
    TrbDiagram *d = NULL;
    TrbTribracket *x = NULL;
    char *phi = NULL;
    uint32_t delta = 0, w = 0;
    uint64_t count = 0;

    CHECK(trb_bracket_builtin("z7", &b) == TRB_STATUS_OK);
    CHECK(trb_bracket_delta_w(b, &delta, &w) == TRB_STATUS_OK);
    CHECK(delta == 6 && w == 4);
    CHECK(trb_diagram_from_pd("X[4,1,3,2], X[2,3,1,4]", 0, &d) == TRB_STATUS_OK);
    CHECK(trb_phi(d, b, false, &phi) == TRB_STATUS_OK);
    CHECK(strcmp(phi, "4u^6+4u") == 0);
    trb_string_free(phi);
    CHECK(trb_tribracket_builtin("x2", &x) == TRB_STATUS_OK);
    CHECK(trb_counting_invariant(d, x, &count) == TRB_STATUS_OK);
    CHECK(count == 8);
    CHECK(trb_diagram_from_pd("X[1,2,3", 0, &d) == TRB_STATUS_PARSE);
    CHECK(strlen(trb_last_error()) > 0);
    trb_diagram_free(d);
    trb_tribracket_free(x);
    trb_bracket_free(b);
    printf("ok\n");
    return 0;
}
