#ifndef DIFFALG_DIFFALG_H
#define DIFFALG_DIFFALG_H

#include <stddef.h>

#if defined(_WIN32)
#define DIFFALG_API __declspec(dllexport)
#elif defined(__GNUC__)
#define DIFFALG_API __attribute__((visibility("default")))
#else
#define DIFFALG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum diffalg_status {
  DIFFALG_OK = 0,
  DIFFALG_ERR_SYNTAX = 1,
  DIFFALG_ERR_VALIDATION = 2,
  DIFFALG_ERR_INCOMPATIBLE = 3,
  DIFFALG_ERR_UNSUPPORTED_CHARACTERISTIC = 4,
  DIFFALG_ERR_UNSUPPORTED_MODE = 5,
  DIFFALG_ERR_ZERO_OPERATOR = 6,
  DIFFALG_ERR_OUT_OF_RANGE = 7,
  DIFFALG_ERR_NULL_ARGUMENT = 8,
  DIFFALG_ERR_INTERNAL = 9
} diffalg_status;

/* Rank, characteristic and mode shared by values. */
typedef struct diffalg_context diffalg_context;
/* An operator on H_n (elements are stored as left multiplications). */
typedef struct diffalg_value diffalg_value;

DIFFALG_API diffalg_status diffalg_context_new(int n, unsigned long characteristic, int weyl, diffalg_context** out);
DIFFALG_API void diffalg_context_free(diffalg_context* ctx);

DIFFALG_API diffalg_status diffalg_parse(const diffalg_context* ctx, const char* text, diffalg_value** out);
DIFFALG_API void diffalg_value_free(diffalg_value* value);
/* Canonical text; release with diffalg_free_string. */
DIFFALG_API diffalg_status diffalg_print(const diffalg_value* value, char** out);
DIFFALG_API int diffalg_value_equal(const diffalg_value* a, const diffalg_value* b);

DIFFALG_API diffalg_status diffalg_compose(const diffalg_value* a, const diffalg_value* b, diffalg_value** out);
DIFFALG_API diffalg_status diffalg_commutator(const diffalg_value* a, const diffalg_value* b, diffalg_value** out);
/* d applied to the element a (a must have no partials). */
DIFFALG_API diffalg_status diffalg_apply(const diffalg_value* d, const diffalg_value* a, diffalg_value** out);
/* *is_zero is set for the zero operator, in which case *out is unspecified. */
DIFFALG_API diffalg_status diffalg_mdeg(const diffalg_value* d, int* out, int* is_zero);
/* Comma-separated bracket partners and the final scalar. */
DIFFALG_API diffalg_status diffalg_reduce(const diffalg_value* d, char** witness, char** scalar);

typedef struct diffalg_request {
  const char* command;
  const char* const* args;
  size_t nargs;
  int n;
  unsigned long characteristic;
  const char* mode;    /* "heisenberg" or "weyl"; NULL for heisenberg */
  const char* format;  /* "text" or "structured"; NULL for text */
  const char* vars;    /* polynomial ring variables, comma separated; NULL for none */
  const char* algebra; /* NULL for none */
  int imax;            /* negative for the default */
  int relative;
  int has_check;
  int check;
} diffalg_request;

/* Runs a CLI command; on success *output holds the text to print. */
DIFFALG_API diffalg_status diffalg_run_command(const diffalg_request* request, char** output);
/* 0 for DIFFALG_OK, 2 for precondition failures, 1 otherwise. */
DIFFALG_API int diffalg_exit_code(diffalg_status status);

/* Message of the last failure on this thread (empty if none). */
DIFFALG_API const char* diffalg_last_error(void);
DIFFALG_API void diffalg_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif
