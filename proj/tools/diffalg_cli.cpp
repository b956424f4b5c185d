#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diffalg/diffalg.h"

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with Heisenberg/Weyl algebras and their differential operators"};
  std::string command;
  std::vector<std::string> args;
  int n = 1;
  unsigned long characteristic = 0;
  std::string mode = "heisenberg", format = "text", vars, algebra;
  int imax = -1;
  bool relative = false;
  int check = 0;

  app.add_option("command", command,
                 "normalize | comm | apply | compose | mdeg | order | reduce | weyl-decompose | decompose | "
                 "reconstruct | zeta | eta | azumaya-check | zfilt")
      ->required();
  app.add_option("inputs", args, "expressions, operator matrices or generators");
  app.add_option("--n", n, "rank of the Heisenberg algebra")->check(CLI::PositiveNumber);
  app.add_option("--char", characteristic, "characteristic: 0 or a prime")->envname("DIFFALG_CHAR");
  app.add_option("--mode", mode, "heisenberg or weyl (h = 1)")->check(CLI::IsMember({"heisenberg", "weyl"}));
  app.add_option("--format", format, "text or structured (JSON lines)")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--vars", vars, "comma-separated polynomial ring variables");
  app.add_option("--algebra", algebra, "matrix:N, heisenberg:N, weyl:N, dual, truncated:K, A/B, field or a file");
  app.add_option("--imax", imax, "Z-filtration cap");
  app.add_flag("--relative", relative, "Z-filtration relative to the centre");
  auto* check_opt = app.add_option("--check", check, "order bound to test");

  // CLI11 expands "[a, b]" into a list; a leading blank keeps bracketed inputs whole.
  std::vector<std::string> storage(argv, argv + argc);
  for (auto& a : storage)
    if (a.size() > 1 && a.front() == '[' && a.back() == ']') a.insert(a.begin(), ' ');
  std::vector<char*> shielded;
  for (auto& a : storage) shielded.push_back(a.data());

  try {
    app.parse(static_cast<int>(shielded.size()), shielded.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::vector<const char*> raw;
  for (const auto& a : args) raw.push_back(a.c_str());
  diffalg_request req{};
  req.command = command.c_str();
  req.args = raw.data();
  req.nargs = raw.size();
  req.n = n;
  req.characteristic = characteristic;
  req.mode = mode.c_str();
  req.format = format.c_str();
  req.vars = vars.empty() ? nullptr : vars.c_str();
  req.algebra = algebra.empty() ? nullptr : algebra.c_str();
  req.imax = imax;
  req.relative = relative ? 1 : 0;
  req.has_check = check_opt->count() > 0 ? 1 : 0;
  req.check = check;

  char* out = nullptr;
  const diffalg_status st = diffalg_run_command(&req, &out);
  if (st != DIFFALG_OK) {
    std::fprintf(stderr, "error: %s\n", diffalg_last_error());
    return diffalg_exit_code(st);
  }
  std::fputs(out, stdout);
  diffalg_free_string(out);
  return 0;
}
