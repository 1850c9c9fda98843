#include <stdio.h>
#include "epoa.h"

int main(void) {
    EpoaGraph *g = NULL;
    if (epoa_graph_new(EPOA_TOPOLOGY_STAR, 20, &g) != EPOA_STATUS_OK) {
        fprintf(stderr, "%s\n", epoa_last_error());
        return 1;
    }
    EpoaDynamics dyn = epoa_dynamics_default(EPOA_DYNAMICS_KIND_PAIRWISE);
    EpoaReport r;
    EpoaDistribution *d = NULL;
    if (epoa_analyze_exact(g, 2.0, 1.0, &dyn, &r, &d) != EPOA_STATUS_OK) {
        fprintf(stderr, "%s\n", epoa_last_error());
        return 1;
    }
    printf("states %zu poa %.6f epoa %.6f\n", epoa_distribution_len(d), r.poa, r.epoa);
    epoa_distribution_free(d);

    EpoaStatus s = epoa_analyze_exact(g, 1.0, 2.0, &dyn, &r, NULL);
    printf("bad costs %d\n", (int)s);
    epoa_graph_free(g);
    return 0;
}
