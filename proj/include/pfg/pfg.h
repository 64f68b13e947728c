#ifndef PFG_PFG_H
#define PFG_PFG_H

/* C interface to the pointer-analysis engine. Handles are opaque; every call
 * returns a status and leaves a message for pfg_last_error() on failure.
 * Strings handed out by the library are released with pfg_string_free(). */

#include <stddef.h>

#if defined(_WIN32)
#define PFG_API __declspec(dllexport)
#else
#define PFG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pfg_status {
    PFG_OK = 0,
    PFG_ERR_SYNTAX = 1,
    PFG_ERR_DUPLICATE_LABEL = 2,
    PFG_ERR_UNRESOLVED = 3,
    PFG_ERR_CHECK = 4,
    PFG_ERR_MODEL = 5,
    PFG_ERR_USAGE = 6,
    PFG_ERR_IO = 7,
    PFG_ERR_INVALID_ARGUMENT = 8,
    PFG_ERR_INTERNAL = 9
} pfg_status;

enum {
    PFG_PATTERN_FIELD = 1,
    PFG_PATTERN_CONTAINER = 2,
    PFG_PATTERN_LOCAL_FLOW = 4,
    PFG_PATTERN_ALL = 7,
    /* every pattern the inputs allow: container only when a model is given */
    PFG_PATTERN_DEFAULT = -1
};

typedef struct pfg_program pfg_program;
typedef struct pfg_model pfg_model;
typedef struct pfg_result pfg_result;
typedef struct pfg_facts pfg_facts;

typedef struct pfg_options {
    const char* analysis; /* "ci", "csc", "kcfa:K" or "kobj:K"; NULL means "csc" */
    int patterns;         /* PFG_PATTERN_* bits or PFG_PATTERN_DEFAULT */
    int load_handling;    /* nonzero: field-load handling enabled */
    long drop_shortcut;   /* test hook, -1 disables */
    long time_budget_ms;  /* context-sensitive runs only, <= 0 means none */
} pfg_options;

typedef struct pfg_stress_spec {
    unsigned long long seed;
    int containers;
    int field_wrappers;
    int local_flows;
    int depth;
    int workers;
    int worker_chain;
} pfg_stress_spec;

PFG_API const char* pfg_last_error(void);
PFG_API const char* pfg_status_name(pfg_status status);
PFG_API void pfg_string_free(char* s);

PFG_API pfg_status pfg_program_parse(const char* text, pfg_program** out);
PFG_API pfg_status pfg_program_load_file(const char* path, pfg_program** out);
PFG_API pfg_status pfg_program_set_entry(pfg_program* program, const char* entry);
/* PFG_ERR_CHECK when diagnostics were found; *diagnostics gets one per line. */
PFG_API pfg_status pfg_program_check(const pfg_program* program, char** diagnostics);
PFG_API pfg_status pfg_program_print(const pfg_program* program, char** out);
PFG_API void pfg_program_free(pfg_program* program);

PFG_API pfg_status pfg_model_load(const pfg_program* program, const char* json, pfg_model** out);
PFG_API pfg_status pfg_model_load_file(const pfg_program* program, const char* path, pfg_model** out);
/* Unclassified container methods, one per line. */
PFG_API pfg_status pfg_model_warnings(const pfg_model* model, char** out);
PFG_API void pfg_model_free(pfg_model* model);

/* "field,container,local", "all" or "none" to PFG_PATTERN_* bits. */
PFG_API pfg_status pfg_parse_patterns(const char* text, int* out);
PFG_API void pfg_options_init(pfg_options* options);
/* model may be NULL. */
PFG_API pfg_status pfg_analyze(const pfg_program* program, const pfg_model* model, const pfg_options* options,
                               pfg_result** out);
PFG_API pfg_status pfg_result_report_json(const pfg_result* result, char** out);
PFG_API pfg_status pfg_result_dot(const pfg_result* result, char** out);
PFG_API int pfg_result_timed_out(const pfg_result* result);
PFG_API void pfg_result_free(pfg_result* result);

PFG_API pfg_status pfg_explore(const pfg_program* program, size_t max_steps, size_t max_paths, pfg_facts** out);
PFG_API pfg_status pfg_facts_json(const pfg_facts* facts, char** out);
PFG_API int pfg_facts_exhausted(const pfg_facts* facts);
PFG_API void pfg_facts_free(pfg_facts* facts);

/* Dynamic facts the result misses; *count is 0 at full recall. */
PFG_API pfg_status pfg_check_recall(const pfg_facts* facts, const pfg_result* result, char** violations,
                                    size_t* count);
/* Points-to entries of result absent from baseline. */
PFG_API pfg_status pfg_check_dominance(const pfg_result* result, const pfg_result* baseline, char** violations,
                                       size_t* count);
/* Metrics of n results; the first row is the reference for the flags. */
PFG_API pfg_status pfg_compare(const pfg_result* const* results, const char* const* names, size_t n, char** table,
                               char** csv);

PFG_API void pfg_stress_spec_init(pfg_stress_spec* spec);
PFG_API pfg_status pfg_generate(const pfg_stress_spec* spec, char** out);

#ifdef __cplusplus
}
#endif

#endif
