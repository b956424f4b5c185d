#include "diffalg/diffalg.h"

#include <cstdlib>
#include <cstring>
#include <new>

#include "diffalg/commands.hpp"
#include "diffalg/text.hpp"

struct diffalg_context {
  diffalg::HContext ctx;
};

struct diffalg_value {
  diffalg::DOperator op;
};

namespace {

thread_local std::string last_error;

diffalg_status status_of(diffalg::ErrorKind k) {
  using diffalg::ErrorKind;
  switch (k) {
    case ErrorKind::syntax: return DIFFALG_ERR_SYNTAX;
    case ErrorKind::validation: return DIFFALG_ERR_VALIDATION;
    case ErrorKind::incompatible_context: return DIFFALG_ERR_INCOMPATIBLE;
    case ErrorKind::unsupported_characteristic: return DIFFALG_ERR_UNSUPPORTED_CHARACTERISTIC;
    case ErrorKind::unsupported_mode: return DIFFALG_ERR_UNSUPPORTED_MODE;
    case ErrorKind::zero_operator: return DIFFALG_ERR_ZERO_OPERATOR;
    case ErrorKind::out_of_range: return DIFFALG_ERR_OUT_OF_RANGE;
  }
  return DIFFALG_ERR_INTERNAL;
}

template <class F>
diffalg_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return DIFFALG_OK;
  } catch (const diffalg::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  }
  return DIFFALG_ERR_INTERNAL;
}

diffalg_status null_argument() {
  last_error = "null argument";
  return DIFFALG_ERR_NULL_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

diffalg_status diffalg_context_new(int n, unsigned long characteristic, int weyl, diffalg_context** out) {
  if (!out) return null_argument();
  return guarded([&] {
    *out = new diffalg_context{diffalg::HContext(n, diffalg::Field::of_characteristic(characteristic),
                                                 weyl ? diffalg::Mode::weyl : diffalg::Mode::heisenberg)};
  });
}

void diffalg_context_free(diffalg_context* ctx) { delete ctx; }

diffalg_status diffalg_parse(const diffalg_context* ctx, const char* text, diffalg_value** out) {
  if (!ctx || !text || !out) return null_argument();
  return guarded([&] { *out = new diffalg_value{diffalg::parse_operator(text, ctx->ctx)}; });
}

void diffalg_value_free(diffalg_value* value) { delete value; }

diffalg_status diffalg_print(const diffalg_value* value, char** out) {
  if (!value || !out) return null_argument();
  return guarded([&] {
    auto a = diffalg::as_element(value->op);
    *out = duplicate(a ? diffalg::to_text(*a) : diffalg::to_text(value->op));
  });
}

int diffalg_value_equal(const diffalg_value* a, const diffalg_value* b) { return a && b && a->op == b->op; }

diffalg_status diffalg_compose(const diffalg_value* a, const diffalg_value* b, diffalg_value** out) {
  if (!a || !b || !out) return null_argument();
  return guarded([&] { *out = new diffalg_value{diffalg::compose(a->op, b->op)}; });
}

diffalg_status diffalg_commutator(const diffalg_value* a, const diffalg_value* b, diffalg_value** out) {
  if (!a || !b || !out) return null_argument();
  return guarded([&] { *out = new diffalg_value{diffalg::op_commutator(a->op, b->op)}; });
}

diffalg_status diffalg_apply(const diffalg_value* d, const diffalg_value* a, diffalg_value** out) {
  if (!d || !a || !out) return null_argument();
  return guarded([&] {
    auto elem = diffalg::as_element(a->op);
    if (!elem) throw diffalg::Error(diffalg::ErrorKind::validation, "apply needs an element as second argument");
    *out = new diffalg_value{diffalg::lambda_of(diffalg::apply(d->op, *elem))};
  });
}

diffalg_status diffalg_mdeg(const diffalg_value* d, int* out, int* is_zero) {
  if (!d || !out || !is_zero) return null_argument();
  return guarded([&] {
    const int m = diffalg::mdeg(d->op);
    *is_zero = m == diffalg::kDegreeOfZero;
    *out = *is_zero ? 0 : m;
  });
}

diffalg_status diffalg_reduce(const diffalg_value* d, char** witness, char** scalar) {
  if (!d || !witness || !scalar) return null_argument();
  return guarded([&] {
    const auto w = diffalg::reduce_to_scalar(d->op);
    std::string list;
    for (const auto& p : w.partners) {
      if (!list.empty()) list += ", ";
      if (const auto* g = std::get_if<diffalg::Generator>(&p)) list += g->name();
      else list += diffalg::to_text(std::get<diffalg::DOperator>(p));
    }
    char* wl = duplicate(list);
    try {
      *scalar = duplicate(w.scalar.to_string());
    } catch (...) {
      std::free(wl);
      throw;
    }
    *witness = wl;
  });
}

diffalg_status diffalg_run_command(const diffalg_request* request, char** output) {
  if (!request || !output || !request->command || (request->nargs > 0 && !request->args)) return null_argument();
  return guarded([&] {
    diffalg::Request r;
    r.command = request->command;
    for (std::size_t i = 0; i < request->nargs; ++i) {
      if (!request->args[i]) throw diffalg::Error(diffalg::ErrorKind::validation, "null command argument");
      r.args.emplace_back(request->args[i]);
    }
    r.n = request->n;
    r.characteristic = request->characteristic;
    if (request->mode) r.mode = request->mode;
    if (request->format) r.format = request->format;
    if (request->vars) r.vars = request->vars;
    if (request->algebra) r.algebra = request->algebra;
    r.imax = request->imax;
    r.relative = request->relative != 0;
    if (request->has_check) r.check = request->check;
    *output = duplicate(diffalg::run_command(r));
  });
}

int diffalg_exit_code(diffalg_status status) {
  switch (status) {
    case DIFFALG_OK: return 0;
    case DIFFALG_ERR_UNSUPPORTED_CHARACTERISTIC:
    case DIFFALG_ERR_UNSUPPORTED_MODE:
    case DIFFALG_ERR_ZERO_OPERATOR: return 2;
    default: return 1;
  }
}

const char* diffalg_last_error(void) { return last_error.c_str(); }

void diffalg_free_string(char* s) { std::free(s); }

}  // extern "C"
