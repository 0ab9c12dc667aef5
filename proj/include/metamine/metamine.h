#ifndef METAMINE_METAMINE_H
#define METAMINE_METAMINE_H

/*
 * C interface to the metaquery mining library.
 *
 * Objects are opaque handles released with their matching *_free function.
 * Every fallible call returns an mm_status; on failure a description is
 * available from mm_last_error() on the same thread until the next call.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with mm_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(METAMINE_BUILDING)
#    define MM_API __declspec(dllexport)
#  else
#    define MM_API __declspec(dllimport)
#  endif
#else
#  define MM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mm_status {
  MM_OK = 0,
  MM_INVALID_ARGUMENT = 1,  /* null handle, unknown enum value, bad option */
  MM_PARSE_ERROR = 2,
  MM_VALIDATION_ERROR = 3,  /* rejected metaquery, threshold, gadget input */
  MM_BINDING_ERROR = 4,     /* missing relation or arity mismatch */
  MM_IO_ERROR = 5,
  MM_ORACLE_REFUSED = 6,    /* instance above the oracle's size guard */
  MM_ORACLE_MISMATCH = 7,   /* engine and oracle disagree */
  MM_INTERNAL_ERROR = 8
} mm_status;

typedef enum mm_format { MM_FORMAT_TEXT = 0, MM_FORMAT_JSON = 1 } mm_format;

typedef enum mm_index { MM_INDEX_SUP = 0, MM_INDEX_CVR = 1, MM_INDEX_CNF = 2 } mm_index;

typedef struct mm_database mm_database;
typedef struct mm_metaquery mm_metaquery;
typedef struct mm_result mm_result;

MM_API const char* mm_version(void);
MM_API const char* mm_last_error(void);
MM_API const char* mm_status_name(mm_status status);
MM_API void mm_string_free(char* s);

/* Directory of <relation>.csv files, each starting with a header row. */
MM_API mm_status mm_database_load(const char* dir, mm_database** out);
MM_API mm_status mm_database_save(const mm_database* db, const char* dir);
/* which 1: UsCa, CaTe, binary UsPT. which 2: ternary UsPT. */
MM_API mm_status mm_database_example(int which, mm_database** out);
MM_API size_t mm_database_relation_count(const mm_database* db);
MM_API mm_status mm_database_relation_shape(const mm_database* db, const char* name, size_t* arity, size_t* rows);
MM_API void mm_database_free(mm_database* db);

MM_API mm_status mm_metaquery_parse(const char* text, mm_metaquery** out);
MM_API mm_status mm_metaquery_text(const mm_metaquery* mq, char** out);
MM_API void mm_metaquery_free(mm_metaquery* mq);

typedef struct mm_mine_options {
  int type;                      /* instantiation type 0, 1 or 2 */
  const char* sup;               /* thresholds as "3/4" or "0.75"; NULL means 0 */
  const char* cvr;
  const char* cnf;
  unsigned threads;              /* 0 or 1: single-threaded */
  int zero_threshold_fast_path;
  int trivial_decomposition;
  int oracle;                    /* cross-check against the brute-force miner */
} mm_mine_options;

MM_API void mm_mine_options_init(mm_mine_options* options);

/* With options->oracle set, returns MM_ORACLE_MISMATCH (and still fills
 * *out) when the brute-force miner disagrees. */
MM_API mm_status mm_mine(const mm_database* db, const mm_metaquery* mq, const mm_mine_options* options,
                         mm_result** out);
MM_API size_t mm_result_count(const mm_result* result);
MM_API mm_status mm_result_rule(const mm_result* result, size_t i, mm_format format, char** out);
MM_API mm_status mm_result_index(const mm_result* result, size_t i, mm_index which, uint64_t* numerator,
                                 uint64_t* denominator);
MM_API mm_status mm_result_stats(const mm_result* result, mm_format format, char** out);
MM_API void mm_result_free(mm_result* result);

/* Indices of one concrete rule such as "uspt(X,Z) <- usca(X,Y), cate(Y,Z).".
 * With oracle set, returns MM_ORACLE_MISMATCH (report still filled) when the
 * brute-force evaluation differs. */
MM_API mm_status mm_check(const mm_database* db, const char* rule, int oracle, mm_format format, char** out);

MM_API mm_status mm_analyze(const char* metaquery, mm_format format, char** out);

/* kind: "3col", "semi3col", "ham" or "csat". input is a graph or formula in
 * the text format. type selects the csat variant and is ignored otherwise.
 * Writes <out_dir>/<relation>.csv and <out_dir>/query.mq; *hint receives
 * the suggested run parameters and, for small inputs, the expected verdict. */
MM_API mm_status mm_gadget(const char* kind, const char* input, int type, const char* out_dir, char** hint);

#ifdef __cplusplus
}
#endif

#endif
