#include <stdio.h>

#include "locpc.h"

int main(void) {
    LocpcDag *dag = NULL;
    if (locpc_dag_parse("dag 4\n0 -> 2\n1 -> 2\n2 -> 3\n", &dag) != LOCPC_STATUS_OK) {
        fprintf(stderr, "%s\n", locpc_last_error());
        return 1;
    }
    LocpcReport *report = NULL;
    if (locpc_oracle_cde(dag, 0, 2, &report) != LOCPC_STATUS_OK) {
        fprintf(stderr, "%s\n", locpc_last_error());
        return 1;
    }
    size_t adj[8];
    size_t k = locpc_report_adjustment_set(report, adj, 8);
    printf("identifiable=%d adjustment=", locpc_report_identifiable(report));
    for (size_t i = 0; i < k; i++) {
        printf(i ? ",%zu" : "%zu", adj[i]);
    }
    printf("\n");
    if (locpc_dag_add_edge(dag, 3, 0) != LOCPC_STATUS_GRAPH) {
        return 1;
    }
    locpc_report_free(report);
    locpc_dag_free(dag);
    return 0;
}
