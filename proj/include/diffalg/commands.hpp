#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffalg/azumaya.hpp"
#include "diffalg/findim.hpp"

namespace diffalg {

struct Request {
  std::string command;
  std::vector<std::string> args;
  int n = 1;
  std::uint64_t characteristic = 0;
  std::string mode = "heisenberg";
  std::string format = "text";
  /// Comma-separated polynomial-ring variables; selects the polynomial context when nonempty.
  std::string vars;
  std::string algebra;
  int imax = -1;
  bool relative = false;
  std::optional<int> check;
};

/// Runs one command and returns its output (newline terminated). Throws Error on failure.
std::string run_command(const Request& req);

/// 1 for bad input, 2 for violated mathematical preconditions.
int exit_code_for(const Error& e);

/// "matrix:N", "heisenberg:N", "weyl:N", "dual", or a structure-constant file.
CenteredFreeAlgebra free_algebra_from_spec(const std::string& spec, const Request& req);
/// "field", "truncated:K", "matrix:N", "A/B" (tensor product), or a structure-constant file.
FinAlgebra fin_algebra_from_spec(const std::string& spec, Field f);

}  // namespace diffalg
