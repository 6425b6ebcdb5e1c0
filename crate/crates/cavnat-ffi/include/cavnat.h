#ifndef CAVNAT_H
#define CAVNAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum CavnatStatus {
  CavnatStatus_Ok = 0,
  CavnatStatus_NullPointer = 1,
  CavnatStatus_InvalidUtf8 = 2,
  CavnatStatus_ParseError = 3,
  CavnatStatus_ValidationError = 4,
  CavnatStatus_SolverError = 5,
  CavnatStatus_DimensionGuard = 6,
  CavnatStatus_IoError = 7,
} CavnatStatus;

/**
 * Opaque handle to a validated network description.
 */
typedef struct CavnatNetwork CavnatNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. The pointer
 * stays valid until the next failing call on the same thread; do not free.
 */
const char *cavnat_last_error_message(void);

/**
 * Parse a JSON network description. Returns null on failure (see
 * `cavnat_last_error_message`); free with `cavnat_network_free`.
 */
struct CavnatNetwork *cavnat_network_parse(const char *json);

/**
 * Build the default four-site network preset. `constructive` selects the
 * interference configuration (nonzero → constructive). Free with
 * `cavnat_network_free`.
 */
struct CavnatNetwork *cavnat_network_four_site(int constructive);

/**
 * Release a network handle. Null is ignored.
 */
void cavnat_network_free(struct CavnatNetwork *net);

/**
 * Serialize a network back to JSON. Free the result with
 * `cavnat_string_free`.
 */
char *cavnat_network_to_json(const struct CavnatNetwork *net);

/**
 * Release a string returned by this library. Null is ignored.
 */
void cavnat_string_free(char *s);

/**
 * Steady-state transmission from the exact second-moment backend.
 */
enum CavnatStatus cavnat_moment_transmission(const struct CavnatNetwork *net, double *out);

/**
 * Steady-state transmission from the truncated-Fock Lindblad backend with
 * global excitation cutoff `n_max`.
 */
enum CavnatStatus cavnat_fock_transmission(const struct CavnatNetwork *net,
                                           uintptr_t n_max,
                                           double *out);

/**
 * Window-averaged transmission of the classical interferometer.
 * `config_json` holds a FourSiteOpticalConfig document (empty object for
 * defaults); `dx` is the static detuning, `ddx` the averaging window, and
 * `n_samples` the odd window sample count.
 */
enum CavnatStatus cavnat_classical_transmission(const char *config_json,
                                                double dx,
                                                double ddx,
                                                uintptr_t n_samples,
                                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAVNAT_H */
