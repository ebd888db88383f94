#ifndef WNETKAT_H
#define WNETKAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which query [`wnk_check`] runs.
typedef enum WnkQuery {
  WNK_QUERY_SAFE = 0,
  WNK_QUERY_REACH = 1,
} WnkQuery;

// Result of every fallible call.
typedef enum WnkStatus {
  WNK_STATUS_OK = 0,
  WNK_STATUS_NULL_POINTER = 1,
  WNK_STATUS_INVALID_UTF8 = 2,
  WNK_STATUS_PARSE = 3,
  WNK_STATUS_ALGEBRA = 4,
  WNK_STATUS_SCHEMA = 5,
  WNK_STATUS_CAPABILITY = 6,
  WNK_STATUS_RESOURCE = 7,
  WNK_STATUS_INVALID = 8,
  WNK_STATUS_TOPOLOGY = 9,
  WNK_STATUS_IO = 10,
  WNK_STATUS_PANIC = 11,
} WnkStatus;

// A compiled automaton together with its schema and guards.
typedef struct WnkAutomaton WnkAutomaton;

// A packet schema.
typedef struct WnkSchema WnkSchema;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Owned by the
// library and valid until the next call on the same thread.
const char *wnk_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void wnk_string_free(char *s);

// Parses a `fields { … }` block.
//
// # Safety
// `text` must be a valid C string and `out` a valid pointer.
enum WnkStatus wnk_schema_parse(const char *text, struct WnkSchema **out);

// Number of packets over the schema, or 0 for null.
//
// # Safety
// `s` must be null or a live schema handle.
size_t wnk_schema_packet_count(const struct WnkSchema *s);

// # Safety
// `s` must be null or a schema handle that has not been freed.
void wnk_schema_free(struct WnkSchema *s);

// Compiles a policy document. `schema` may be null when the document has a
// `fields` header.
//
// # Safety
// Strings must be valid C strings, `schema` null or live, `out` valid.
enum WnkStatus wnk_compile_policy(const struct WnkSchema *schema,
                                  const char *policy,
                                  const char *semiring,
                                  struct WnkAutomaton **out);

// Compiles the network generated from a topology JSON document, wrapped in
// the topology's ingress and egress guards. `profile` may be null.
//
// # Safety
// Strings must be valid C strings (or null for `profile`), `out` valid.
enum WnkStatus wnk_compile_topology(const char *topology_json,
                                    const char *flavor,
                                    const char *profile,
                                    const char *semiring,
                                    struct WnkAutomaton **out);

// Number of automaton states, or 0 for null.
//
// # Safety
// `a` must be null or a live automaton handle.
size_t wnk_automaton_state_count(const struct WnkAutomaton *a);

// # Safety
// `a` must be null or an automaton handle that has not been freed.
void wnk_automaton_free(struct WnkAutomaton *a);

// Decides a safety or reachability query against `bound`. On success
// `*holds` is 1 when the property holds and 0 otherwise; when `report` is
// not null it receives a JSON verdict to be freed with [`wnk_string_free`].
//
// # Safety
// `a` must be live, `bound` a valid C string, `holds` valid, `report` null or valid.
enum WnkStatus wnk_check(const struct WnkAutomaton *a,
                         enum WnkQuery query,
                         const char *bound,
                         int32_t *holds,
                         char **report);

// Weight of input packet `packet` (`f=v,g=w`) producing `history`
// (`π :: π :: …`, head first), written to `*weight` as a string.
//
// # Safety
// `a` must be live, strings valid C strings, `weight` valid.
enum WnkStatus wnk_eval(const struct WnkAutomaton *a,
                        const char *packet,
                        const char *history,
                        char **weight);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WNETKAT_H */
