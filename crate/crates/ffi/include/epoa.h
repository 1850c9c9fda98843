#ifndef EPOA_H
#define EPOA_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EpoaDynamicsKind {
  EPOA_DYNAMICS_KIND_MORAN_DB = 0,
  EPOA_DYNAMICS_KIND_MORAN_BD = 1,
  EPOA_DYNAMICS_KIND_PAIRWISE = 2,
} EpoaDynamicsKind;

typedef enum EpoaStatus {
  EPOA_STATUS_OK = 0,
  EPOA_STATUS_NULL_POINTER = 1,
  EPOA_STATUS_INVALID_ARGUMENT = 2,
  EPOA_STATUS_UNSUPPORTED = 3,
  EPOA_STATUS_TOO_LARGE = 4,
  EPOA_STATUS_REDUCIBLE = 5,
  EPOA_STATUS_NUMERICAL = 6,
  EPOA_STATUS_BUFFER_TOO_SMALL = 7,
  EPOA_STATUS_IO = 8,
  EPOA_STATUS_PANIC = 9,
} EpoaStatus;

typedef enum EpoaTopology {
  EPOA_TOPOLOGY_CLIQUE = 0,
  EPOA_TOPOLOGY_STAR = 1,
  EPOA_TOPOLOGY_TWO_CLIQUE = 2,
  EPOA_TOPOLOGY_TWO_STAR = 3,
  EPOA_TOPOLOGY_CYCLE = 4,
} EpoaTopology;

/**
 * Opaque stationary distribution handle.
 */
typedef struct EpoaDistribution EpoaDistribution;

/**
 * Opaque graph handle.
 */
typedef struct EpoaGraph EpoaGraph;

/**
 * Update rule and its parameters.
 */
typedef struct EpoaDynamics {
  enum EpoaDynamicsKind kind;
  double mutation_rate;
  double selection_strength;
  double fitness_exponent;
  bool self_replacement;
} EpoaDynamics;

/**
 * Headline numbers of an ePoA computation.
 */
typedef struct EpoaReport {
  double s_hat;
  double omega;
  double poa;
  double epoa;
  double epoa_over_poa;
  double worst_nash_cost;
  /**
   * Solver residual; negative for simulated reports.
   */
  double residual;
} EpoaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next call on
 * the same thread.
 */
const char *epoa_last_error(void);

/**
 * Default dynamics for `kind`: mutation 0.001, selection strength 1,
 * fitness exponent 1, self-replacement on.
 */
struct EpoaDynamics epoa_dynamics_default(enum EpoaDynamicsKind kind);

/**
 * Builds a named topology. `size` is the node count, or the per-block node
 * count for the two-block kinds.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum EpoaStatus epoa_graph_new(enum EpoaTopology topology, size_t size, struct EpoaGraph **out);

/**
 * Builds a custom graph from `edge_count` pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` values; `out` must be valid for writes.
 */
enum EpoaStatus epoa_graph_from_edges(size_t nodes,
                                      const size_t *edges,
                                      size_t edge_count,
                                      struct EpoaGraph **out);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards. Null is a no-op.
 */
void epoa_graph_free(struct EpoaGraph *g);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t epoa_graph_node_count(const struct EpoaGraph *g);

/**
 * Expected cost of every node under `bits` (nonzero = inoculated).
 * `out_costs` receives `len` values; `out_social` may be null.
 *
 * # Safety
 * Pointers must be valid for `len` elements.
 */
enum EpoaStatus epoa_node_costs(const struct EpoaGraph *g,
                                const uint8_t *bits,
                                size_t len,
                                double infection,
                                double inoculation,
                                double *out_costs,
                                double *out_social);

/**
 * # Safety
 * `bits` must hold `len` bytes; `out` must be valid for writes.
 */
enum EpoaStatus epoa_is_nash(const struct EpoaGraph *g,
                             const uint8_t *bits,
                             size_t len,
                             double infection,
                             double inoculation,
                             bool *out);

/**
 * Price of anarchy: worst Nash cost over the optimum.
 *
 * # Safety
 * `out_poa` must be valid for writes; `out_nash_count` may be null.
 */
enum EpoaStatus epoa_price_of_anarchy(const struct EpoaGraph *g,
                                      double infection,
                                      double inoculation,
                                      double *out_poa,
                                      size_t *out_nash_count);

/**
 * Exact ePoA from the stationary distribution. Clique and star only.
 * `out_dist` may be null; otherwise it receives a distribution handle.
 *
 * # Safety
 * `dynamics` must be readable; `out` must be valid for writes.
 */
enum EpoaStatus epoa_analyze_exact(const struct EpoaGraph *g,
                                   double infection,
                                   double inoculation,
                                   const struct EpoaDynamics *dynamics,
                                   struct EpoaReport *out,
                                   struct EpoaDistribution **out_dist);

/**
 * Monte Carlo ePoA over `replicas` pooled runs from uniform random starts.
 *
 * # Safety
 * `dynamics` must be readable; `out` must be valid for writes.
 */
enum EpoaStatus epoa_simulate(const struct EpoaGraph *g,
                              double infection,
                              double inoculation,
                              const struct EpoaDynamics *dynamics,
                              uint64_t steps,
                              uint64_t burn_in,
                              uint64_t seed,
                              uint64_t replicas,
                              struct EpoaReport *out);

/**
 * Number of states, or 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
size_t epoa_distribution_len(const struct EpoaDistribution *d);

/**
 * Copies the probabilities into `buf`, which holds `cap` values.
 *
 * # Safety
 * `buf` must be valid for `cap` writes.
 */
enum EpoaStatus epoa_distribution_copy(const struct EpoaDistribution *d, double *buf, size_t cap);

/**
 * Label of state `index` (e.g. `"15"` or `"(0,10)"`), or null when out of
 * range. Owned by the handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
const char *epoa_distribution_label(const struct EpoaDistribution *d, size_t index);

/**
 * # Safety
 * `d` must come from this library and not be used afterwards. Null is a no-op.
 */
void epoa_distribution_free(struct EpoaDistribution *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPOA_H */
