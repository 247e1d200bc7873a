/* Coherent Ising machine simulator: public C API.
 *
 * A network of degenerate optical parametric oscillators is integrated as
 * coupled c-number Langevin equations; above-threshold phase signs read out
 * Ising spins. The API exposes problem construction (MAX-CUT graphs, delay
 * topologies), single trials, campaign-level commands that write CSV/JSON
 * reports, and the interferometer readout model.
 *
 * All functions returning cim_status set a thread-local message retrievable
 * via cim_last_error() on failure. Handles are opaque; every *_new/_load
 * function pairs with a *_free.
 */

#ifndef CIM_H
#define CIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cim_status {
    CIM_OK = 0,
    CIM_ERR_INVALID_ARGUMENT = 1,
    CIM_ERR_PARSE = 2,
    CIM_ERR_VALIDATION = 3,
    CIM_ERR_CAPABILITY = 4,
    CIM_ERR_DIMENSION = 5,
    CIM_ERR_DOMAIN = 6,
    CIM_ERR_DIVERGENCE = 7,
    CIM_ERR_STIFFNESS = 8,
    CIM_ERR_IO = 9,
    CIM_ERR_CHECK_FAILED = 10,
    CIM_ERR_INTERNAL = 11
} cim_status;

const char* cim_status_name(cim_status status);
const char* cim_last_error(void);

/* ---- Problems ---------------------------------------------------------- */

typedef struct cim_graph cim_graph;
typedef struct cim_ising cim_ising;

/* Text format: header "n m", then m lines "u v w" with 1-indexed vertices. */
cim_status cim_graph_parse_gset(const char* text, cim_graph** out);
cim_status cim_graph_load_gset(const char* path, cim_graph** out);
cim_status cim_graph_complete(int n, double weight, cim_graph** out);
/* index-th connected cubic graph of the given even order (4..10). */
cim_status cim_graph_cubic(int n, int index, cim_graph** out);
cim_status cim_graph_random_cubic(int n, uint64_t seed, cim_graph** out);
void cim_graph_free(cim_graph* graph);

int cim_graph_vertex_count(const cim_graph* graph);
int cim_graph_edge_count(const cim_graph* graph);
int cim_graph_negative_edge_count(const cim_graph* graph);
/* spins: +1/-1 entries, length = vertex count. */
cim_status cim_graph_cut_value(const cim_graph* graph, const int8_t* spins, double* out);

/* Number of non-isomorphic connected cubic graphs of the given order. */
cim_status cim_cubic_graph_count(int n, int* out);

/* MAX-CUT mapping J = -w. */
cim_status cim_ising_from_graph(const cim_graph* graph, cim_ising** out);

typedef struct cim_delay_line {
    int m;           /* delay in slots, 1..n-1 */
    int phase_pi;    /* 0 = in phase (J>0), 1 = out of phase (J<0) */
    double amplitude;
    int enabled;
} cim_delay_line;

cim_status cim_ising_from_delays(int n, const cim_delay_line* lines, int n_lines,
                                 cim_ising** out);
void cim_ising_free(cim_ising* ising);

int cim_ising_spin_count(const cim_ising* ising);
cim_status cim_ising_coupling(const cim_ising* ising, int i, int k, double* out);
cim_status cim_ising_energy(const cim_ising* ising, const int8_t* spins, double* out);
/* Exhaustive oracle, n <= 24. n_ground counts all minimizers. */
cim_status cim_ising_ground(const cim_ising* ising, double* min_energy, long* n_ground);
/* Greedy single-spin-flip descent, in place. */
cim_status cim_ising_local_improve(const cim_ising* ising, int8_t* spins);

/* (o + e_neg) / (u_sdp + e_neg); e_neg >= 0 and denominator > 0. */
cim_status cim_normalized_cut_score(double o, double e_neg, double u_sdp, double* out);

/* ---- Readout ----------------------------------------------------------- */

/* bits[k] = 1 iff adjacent slots k, k+1 (mod n) share a phase. */
cim_status cim_interferometer_pattern(const int8_t* spins, int n, uint8_t* bits);
cim_status cim_slow_detector_level(const uint8_t* bits, int n, double* level);
/* representative = lexicographically minimal rotation. */
cim_status cim_classify_pattern(const uint8_t* bits, int n, uint8_t* representative,
                                int* class_size);

/* ---- Configuration ------------------------------------------------------ */

/* Key-value run configuration ("key = value" lines, '#' comments). */
typedef struct cim_config cim_config;

cim_status cim_config_load(const char* path, cim_config** out);
cim_status cim_config_parse(const char* text, const char* origin, cim_config** out);
void cim_config_free(cim_config* config);

void cim_config_override_seed(cim_config* config, uint64_t seed);
void cim_config_override_workers(cim_config* config, int workers);

/* ---- Single trial ------------------------------------------------------- */

/* Integrates one trial from vacuum under the config's schedule. spins must
 * hold cim_ising_spin_count entries. build_up < 0 encodes "never built up". */
cim_status cim_run_trial(const cim_ising* ising, const cim_config* config,
                         uint64_t trial_index, int8_t* spins, double* energy,
                         double* build_up);

/* ---- Campaign commands -------------------------------------------------- */

/* Each command runs its campaign, writes CSV/JSON reports atomically into
 * out_dir, and (with check = 1) evaluates the config's check_* bands.
 * check_ok receives 1/0; it is always 1 when check = 0. */
cim_status cim_cmd_solve(const cim_config* config, const char* out_dir, int check,
                         int* check_ok);
cim_status cim_cmd_survey_cubic(const cim_config* config, const char* out_dir, int check,
                                int* check_ok);
cim_status cim_cmd_bench_gset(const cim_config* config, const char* out_dir, int check,
                              int* check_ok);
cim_status cim_cmd_squeeze(const cim_config* config, const char* out_dir, int check,
                           int* check_ok);
cim_status cim_cmd_readout_table(const char* out_dir, int* check_ok);
cim_status cim_cmd_independent(const cim_config* config, const char* out_dir, int check,
                               int* check_ok);

/* One-line summary of the last command run on this thread (for CLI echo). */
const char* cim_last_summary(void);

#ifdef __cplusplus
}
#endif

#endif /* CIM_H */
