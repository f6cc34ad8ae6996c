#ifndef ERASIM_H
#define ERASIM_H

/* erasim -- two-party interactive coding over erasure channels.
 *
 * C interface to the erasim core. The library simulates alternating
 * binary protocols over channels that may erase an unbounded, a-priori
 * unknown number of transmissions, using challenge-response coding
 * schemes; it also verifies per-round invariants of every run and can
 * drive the same state machines across TCP sockets through an
 * erasure-injecting relay.
 *
 * Conventions:
 *   - every function returns an error code (ERASIM_OK on success);
 *     erasim_last_error() describes the most recent failure on the
 *     calling thread;
 *   - strings returned through char** out-parameters are heap-allocated
 *     by the library and must be released with erasim_string_free();
 *   - bit strings are ASCII strings of '0'/'1' characters.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ERASIM_API __declspec(dllexport)
#else
#define ERASIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  ERASIM_OK = 0,
  ERASIM_ERR_CHECK = 1,     /* an invariant, bound, or certification failed */
  ERASIM_ERR_USAGE = 2,     /* malformed arguments, specs, or input files */
  ERASIM_ERR_IO = 3,        /* filesystem failure */
  ERASIM_ERR_LIMIT = 4,     /* enumeration larger than the configured limit */
  ERASIM_ERR_TRANSPORT = 5, /* socket-level failure (not a channel erasure) */
  ERASIM_ERR_PROTOCOL = 6,  /* framing violation on the wire */
  ERASIM_ERR_INTERNAL = 7
};

/* An opaque noiseless protocol (next-bit oracle plus length). */
typedef struct erasim_protocol erasim_protocol;

/* Construct the built-in string-exchange protocol of n_bits bits
 * (each party's input must have n_bits/2 bits). n_bits must be even
 * and positive. */
ERASIM_API int erasim_protocol_string_exchange(uint32_t n_bits,
                                               erasim_protocol** out);

/* Load a table-backed protocol from a JSON file of the form
 *   {"n_bits": N, "entries": {"<transcript prefix>": 0|1, ...}}
 * Odd n_bits is rejected (the last message must belong to Bob). */
ERASIM_API int erasim_protocol_from_table_file(const char* path,
                                               erasim_protocol** out);

/* Parse a protocol spec: "builtin:string-exchange:N" or "file:PATH"
 * (a bare path is treated as a file). */
ERASIM_API int erasim_protocol_from_spec(const char* spec,
                                         erasim_protocol** out);

ERASIM_API void erasim_protocol_free(erasim_protocol* p);
ERASIM_API uint32_t erasim_protocol_length(const erasim_protocol* p);

/* Run one simulation.
 *   scheme      "basic4" | "basic2" | "ecc3" | "ags4" | "ags1"
 *   x, y        the parties' input bit strings
 *   noise_spec  "none" | "file:PATH" | "list:t1,t2,..." |
 *               "random:p=P,seed=S,horizon=H" | "burst:start=A,len=B" |
 *               "adversary:greedy,budget=T"
 *   max_rounds  0 for the automatic safety cap
 *   settle      silent settle rounds certifying semi-termination
 *               (AGS schemes; 0 selects the default of 3)
 *   trace_path  optional JSON-lines trace output (NULL to skip)
 *   result_json receives {"outputs":..,"metrics":..,"verify":..}
 * Returns ERASIM_ERR_CHECK if any per-round invariant, bound, or the
 * output itself is wrong (result_json is still produced). */
ERASIM_API int erasim_run(const char* scheme, const erasim_protocol* p,
                          const char* x, const char* y,
                          const char* noise_spec, uint32_t max_rounds,
                          uint32_t settle, const char* trace_path,
                          char** result_json);

/* Re-verify a JSON-lines trace file; report_json receives the
 * per-check report. Returns ERASIM_ERR_CHECK when a check fails. */
ERASIM_API int erasim_verify_trace_file(const char* path,
                                        char** report_json);

/* Worst-case sweep over erasure budgets T = 0..t_max under the greedy
 * adversary; csv receives the table. */
ERASIM_API int erasim_sweep_budget(const char* scheme,
                                   const erasim_protocol* p, const char* x,
                                   const char* y, uint32_t t_max,
                                   char** csv);

/* Sweep over noise fractions delta (each in [0, 0.5)); for each delta
 * the budget is the largest T with T <= delta * (N + 2T). */
ERASIM_API int erasim_sweep_delta(const char* scheme,
                                  const erasim_protocol* p, const char* x,
                                  const char* y, const double* deltas,
                                  size_t n_deltas, char** csv);

/* Build and run the noise pattern that makes Bob terminate exactly
 * `gap` rounds after Alice (basic4), spending gap-1 erasures.
 * result_json receives {"pattern":[..],"t_a":..,"t_b":..,"erasures":..}. */
ERASIM_API int erasim_unsync_demo(const erasim_protocol* p, const char* x,
                                  const char* y, uint32_t gap,
                                  char** result_json);

/* Run one party of the scheme over TCP against a relay.
 *   role   "alice" | "bob"
 *   scheme "basic4" | "ags4" | "ags1" (tokens must fit the frame format)
 * Blocks until the run completes; result_json receives
 * {"transcript":..,"sent_symbols":..,"received_erasures":..}. */
ERASIM_API int erasim_serve_party(const char* role, const char* scheme,
                                  const erasim_protocol* p,
                                  const char* input, const char* host,
                                  uint16_t port, uint32_t settle,
                                  char** result_json);

/* Erasure-injecting relay between two parties. Listens on port_a
 * (Alice side) and port_b (Bob side); port 0 lets the OS pick. mode is
 * "4ary" or "unary" (how per-direction frame numbers map to global
 * timesteps). If print_ready is nonzero, prints "READY <a> <b>\n" on
 * stdout once both listeners are bound. Blocks until both directions
 * close; stats_json receives {"forwarded":..,"erased":..}. */
ERASIM_API int erasim_relay(uint16_t port_a, uint16_t port_b,
                            const char* noise_spec, const char* mode,
                            int print_ready, char** stats_json);

/* Thread-local message for the most recent error ("" if none). */
ERASIM_API const char* erasim_last_error(void);

ERASIM_API void erasim_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ERASIM_H */
