#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "diffalg/text.hpp"
#include "support.hpp"

using namespace diffalg;
using testing_support::Gen;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << "s";
  return os.str();
}

DOperator lam(const HContext& c, Generator g) { return lambda_of(HElement::generator(c, g)); }
DOperator partial(const HContext& c, Generator g, int k = 1) { return DOperator::partial(c, g, k); }

Outcome criterion1() {
  Outcome o;
  Gen g(101);
  const auto t0 = Clock::now();
  for (int t = 0; t < 10000; ++t) {
    const HContext c(g.uniform(1, 2), Field::of_characteristic(g.coin() ? 0 : 5));
    const auto a = g.element(c, 3, 5, 2), b = g.element(c, 3, 5, 2), d = g.element(c, 3, 5, 2);
    o.require(normalize_mul(normalize_mul(a, b), d) == normalize_mul(a, normalize_mul(b, d)), "associativity");
    o.require(normalize_mul(a, b + d) == normalize_mul(a, b) + normalize_mul(a, d), "left distributivity");
    o.require(normalize_mul(a + b, d) == normalize_mul(a, d) + normalize_mul(b, d), "right distributivity");
    if (!o.pass) break;
  }
  const double s = seconds_since(t0);
  o.require(s < 60, "over the 60 s budget");
  o.detail = (o.pass ? "" : o.detail + "; ") + "10000 triples in " + fmt_seconds(s);
  return o;
}

Outcome criterion2() {
  Outcome o;
  int checks = 0;
  auto require = [&](bool ok, const std::string& what) {
    ++checks;
    o.require(ok, what);
  };
  for (int n = 1; n <= 3; ++n) {
    const HContext c(n, Field::rationals());
    const auto h = lam(c, Generator::h());
    const auto dh = partial(c, Generator::h());
    std::vector<Generator> all{Generator::h()};
    for (int l = 1; l <= n; ++l) {
      all.push_back(Generator::x(l));
      all.push_back(Generator::y(l));
    }
    for (auto r : all)
      for (auto s : all) require(op_commutator(partial(c, r), partial(c, s)).is_zero(), "partials commute");
    for (int l = 1; l <= n; ++l) {
      for (auto which : {Generator::x(l), Generator::y(l)})
        for (auto r : all) {
          const auto br = bracket_with_gen(partial(c, which), r);
          require(r == which ? br == DOperator::identity(c) : br.is_zero(), "[d_x, x] and [d_y, y]");
        }
      require(bracket_with_gen(dh, Generator::y(l)) == -partial(c, Generator::x(l)), "[dh, y] = -dx");
      require(bracket_with_gen(dh, Generator::x(l)).is_zero(), "[dh, x] = 0");
      require(mdeg(partial(c, Generator::x(l))) == 1 && mdeg(partial(c, Generator::y(l))) == 1, "dx, dy in M_1");
      require(lam(c, Generator::x(l)) - rho_of_generator(c, Generator::x(l)) ==
                  compose(h, partial(c, Generator::y(l))),
              "lambda_x - rho_x = h dy");
      require(rho_of_generator(c, Generator::y(l)) - lam(c, Generator::y(l)) ==
                  compose(h, partial(c, Generator::x(l))),
              "rho_y - lambda_y = h dx");
      require(bracket_with_gen(bar_dh(c), Generator::x(l)) == partial(c, Generator::y(l)), "[Dh, x] = dy");
      require(bracket_with_gen(bar_dh(c), Generator::y(l)).is_zero(), "[Dh, y] = 0");
      const auto x = lam(c, Generator::x(l)), y = lam(c, Generator::y(l));
      const auto dx = partial(c, Generator::x(l)), dy = partial(c, Generator::y(l));
      for (int k = 0; k <= 3; ++k)
        for (int s = 0; s <= 3; ++s) {
          using testing_support::power;
          DOperator e1(c), e2(c);
          if (k > 0) {
            e1 += Scalar(c.field, k) * compose(compose(h, power(x, k - 1)), power(dy, s));
            e2 += Scalar(c.field, -k) * compose(compose(h, power(y, k - 1)), power(dx, s));
          }
          if (s > 0) {
            e1 += Scalar(c.field, s) * compose(power(x, k), power(dy, s - 1));
            e2 += Scalar(c.field, s) * compose(power(y, k), power(dx, s - 1));
          }
          require(op_commutator(compose(power(x, k), power(dy, s)), y) == e1, "[x^k dy^s, y]");
          require(op_commutator(compose(power(y, k), power(dx, s)), x) == e2, "[y^k dx^s, x]");
        }
    }
    require(bracket_with_gen(dh, Generator::h()) == DOperator::identity(c), "[dh, h] = 1");
    require(mdeg(dh) == 2, "dh in M_2");
    DOperator sum = dh;
    for (int l = 1; l <= n; ++l) sum += compose(partial(c, Generator::x(l)), partial(c, Generator::y(l)));
    require(bar_dh(c) == sum, "Dh = dh + sum dx dy");
    require(bracket_with_gen(bar_dh(c), Generator::h()) == DOperator::identity(c), "[Dh, h] = 1");
    for (int s = 1; s <= 6; ++s)
      require(op_commutator(partial(c, Generator::h(), s), h) == partial(c, Generator::h(), s - 1),
              "[dh^[s], h] = dh^[s-1]");
  }
  if (o.pass) o.detail = std::to_string(checks) + " identities for n = 1..3";
  return o;
}

Outcome criterion3() {
  Outcome o;
  Gen g(103);
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const Mode mode = g.uniform(0, 3) == 0 ? Mode::weyl : Mode::heisenberg;
    const HContext c(g.uniform(1, 2), Field::of_characteristic(g.coin() ? 0 : (g.coin() ? 2 : 5)), mode);
    const auto d1 = g.op(c, 3, 3), d2 = g.op(c, 3, 3);
    const auto a = g.element(c, 3, 4);
    o.require(apply(compose(d1, d2), a) == apply(d1, apply(d2, a)), "apply(compose) differs from nested apply");
  }
  if (o.pass) o.detail = "1000 triples";
  return o;
}

Outcome criterion4() {
  Outcome o;
  Gen g(104);
  const auto t0 = Clock::now();
  int symbol = 0;
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const HContext c(g.uniform(1, 2), Field::rationals());
    const auto d = g.nonzero_op(c, 3, 3);
    const auto w = reduce_to_scalar(d);
    symbol += w.used_symbol_schedule ? 1 : 0;
    o.require(!w.scalar.is_zero(), "zero scalar");
    o.require(replay_reduction(d, w.partners) == DOperator::scalar(c, w.scalar), "witness does not replay");
  }
  const double s = seconds_since(t0);
  o.require(s < 300, "over the 5 min budget");
  o.detail = (o.pass ? "" : o.detail + "; ") + "1000 operators (" + std::to_string(symbol) +
             " via the symbol schedule) in " + fmt_seconds(s);
  return o;
}

Outcome criterion5() {
  Outcome o;
  Gen g(105);
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const HContext c(g.uniform(1, 2), Field::rationals(), Mode::weyl);
    const auto d = g.op(c, 3, 3);
    const auto back = assemble_lambda_rho(c, weyl_d0_decompose(d));
    o.require(testing_support::agree_on_basis(back, d, 8), "round trip differs on a basis monomial");
  }
  for (int n = 1; n <= 3; ++n) {
    const HContext c(n, Field::rationals(), Mode::weyl);
    // A_n (x) A_n^o presented by (lambda_x, lambda_y) and (rho_y, rho_x)
    std::vector<std::pair<DOperator, DOperator>> pairs;
    for (int l = 1; l <= n; ++l) {
      pairs.emplace_back(lam(c, Generator::x(l)), lam(c, Generator::y(l)));
      pairs.emplace_back(rho_of_generator(c, Generator::y(l)), rho_of_generator(c, Generator::x(l)));
    }
    std::vector<DOperator> gens;
    for (const auto& [p, q] : pairs) {
      gens.push_back(p);
      gens.push_back(q);
    }
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < gens.size(); ++j) {
        DOperator expect(c);
        if (i % 2 == 0 && j == i + 1) expect = DOperator::identity(c);
        if (j % 2 == 0 && i == j + 1) expect = -DOperator::identity(c);
        o.require(op_commutator(gens[i], gens[j]) == expect, "A_2n relation fails");
      }
    for (int l = 1; l <= n; ++l) {
      o.require(partial(c, Generator::x(l)) == gens[4 * (l - 1) + 2] - gens[4 * (l - 1) + 1], "dx substitution");
      o.require(partial(c, Generator::y(l)) == gens[4 * (l - 1)] - gens[4 * (l - 1) + 3], "dy substitution");
    }
  }
  if (o.pass) o.detail = "1000 round trips on deg2 <= 8; A_2n relations for n = 1..3";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = Clock::now();
  const Field f5 = Field::prime(5);
  const auto base = truncated_polynomial(2, f5);
  const auto a = tensor_product(matrix_algebra(2, f5), base);
  const auto rb = z_filtration(base, 4), ra = z_filtration(a, 4);
  std::string dims_a, dims_b;
  for (std::size_t m = 0; m < 3; ++m) {
    const auto db = rb.levels[std::min(m, rb.levels.size() - 1)].space.dim();
    const auto da = ra.levels[std::min(m, ra.levels.size() - 1)].space.dim();
    dims_a += (m ? ", " : "") + std::to_string(da);
    dims_b += (m ? ", " : "") + std::to_string(db);
    o.require(da == 16 * db, "dimension ratio is not 16");
  }
  const double s = seconds_since(t0);
  o.require(s < 120, "over the 2 min budget");
  o.detail = (o.pass ? "" : o.detail + "; ") + "dims (" + dims_a + ") = 16 x (" + dims_b + ") in " + fmt_seconds(s);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto m = azumaya_check(build_matrix_algebra(2, PolyRing({"t"}, Field::prime(3))));
  const auto h = azumaya_check(build_heisenberg_charp(1, 2));
  const auto d = azumaya_check(build_dual_numbers(PolyRing({"t"}, Field::prime(3))));
  const auto w = azumaya_check(build_heisenberg_charp(1, 2, Mode::weyl));
  o.require(m.azumaya, "M_2(F_3[t]) reported non-Azumaya");
  o.require(!d.azumaya, "dual numbers reported Azumaya");
  o.require(h.azumaya, "H_1 at p = 2: det = " + to_text(h.determinant) + " is not a unit of k[h, X, Y]");
  const double s = seconds_since(t0);
  o.require(s < 300, "over the 5 min budget");
  o.detail = (o.pass ? "" : o.detail + "; ") + "M_2 det " + to_text(m.determinant) + ", dual det " +
             to_text(d.determinant) + ", weyl p = 2 det " + to_text(w.determinant) + ", " + fmt_seconds(s);
  return o;
}

Outcome criterion8() {
  Outcome o;
  Gen g(108);
  for (std::uint32_t p : {2u, 3u}) {
    const auto a = build_heisenberg_charp(1, p);
    for (int m = 1; m <= static_cast<int>(p); ++m) {
      const auto t = tilde_extend(PDOp::partial(a.ring(), 0, m), a);
      o.require(order_check(t, m), "tilde(dh^[m]) fails order m");
      o.require(!order_check(t, m - 1), "tilde(dh^[m]) passes order m - 1");
    }
    for (int t = 0; t < 100; ++t) {
      const auto phi = g.pdop(a.ring(), 3, 2, 3);
      o.require(zeta_elem(tilde_extend(phi, a), a) == phi, "zeta(tilde(phi)) != phi");
    }
  }
  if (o.pass) o.detail = "p = 2, 3; 200 restriction checks";
  return o;
}

Outcome criterion9() {
  Outcome o;
  Gen g(109);
  const auto m2 = build_matrix_algebra(2, PolyRing({"t"}, Field::prime(3)));
  const auto h1 = build_heisenberg_charp(1, 2);
  for (const auto* a : {&m2, &h1})
    for (int t = 0; t < 200 && o.pass; ++t) {
      const auto phi = g.op_matrix(*a, 2, 2, 2);
      o.require(reconstruct(decompose(phi, *a), *a) == phi, "reconstruct(decompose(Phi)) != Phi");
    }
  if (o.pass) o.detail = "200 matrices for each of M_2(F_3[t]) and H_1 (p = 2)";
  return o;
}

Outcome criterion10() {
  Outcome o;
  Gen g(110);
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const HContext c(g.uniform(1, 2), Field::rationals());
    const auto d1 = g.nonzero_op(c, 2, 2), d2 = g.nonzero_op(c, 2, 2);
    const auto prod = compose(d1, d2);
    o.require(prod.is_zero() || mdeg(prod) <= mdeg(d1) + mdeg(d2), "mdeg not subadditive");
  }
  for (int t = 0; t < 100 && o.pass; ++t) {
    const HContext c(g.uniform(1, 2), Field::rationals());
    const auto d = g.nonzero_op(c, 3, 2);
    const auto b = op_commutator(d, lam(c, Generator::h()));
    o.require(b.is_zero() || mdeg(b) <= mdeg(d) - 2, "[M_l, h] not in M_(l-2)");
    if (t < 20) o.require(testing_support::bracket_chains_vanish(b, std::max(mdeg(d) - 1, 0)), "bracket oracle");
  }
  const auto a = matrix_algebra(2, Field::prime(5));
  const auto rel = relative_z_filtration(a, algebra_centre(a), 4);
  const auto abs = z_filtration(a, 4);
  for (std::size_t i = 0; i < std::min(rel.levels.size(), abs.levels.size()); ++i)
    o.require(rel.levels[i].space.contains(abs.levels[i].space), "relative filtration misses absolute level");
  if (o.pass) o.detail = "1000 pairs, 100 h-bracket checks, M_2(F_5) containment";
  return o;
}

int run_cli(const std::string& cli, const std::vector<std::string>& args, std::string& output) {
  int fds[2];
  if (pipe(fds) != 0) return -1;
  const pid_t pid = fork();
  if (pid == 0) {
    dup2(fds[1], 1);
    dup2(fds[1], 2);
    close(fds[0]);
    close(fds[1]);
    std::vector<char*> argv{const_cast<char*>(cli.c_str())};
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execv(cli.c_str(), argv.data());
    _exit(127);
  }
  close(fds[1]);
  output.clear();
  char buf[4096];
  ssize_t got;
  while ((got = read(fds[0], buf, sizeof buf)) > 0) output.append(buf, static_cast<std::size_t>(got));
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion11() {
  Outcome o;
  namespace fs = std::filesystem;
  std::vector<fs::path> cases;
  for (const auto& e : fs::directory_iterator(GOLDEN_DIR))
    if (e.path().extension() == ".args") cases.push_back(e.path());
  std::sort(cases.begin(), cases.end());
  std::set<std::string> commands;
  for (const auto& path : cases) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    const int want = std::stoi(line);
    std::vector<std::string> args;
    while (std::getline(in, line)) {
      for (auto pos = line.find("@DATA@"); pos != std::string::npos; pos = line.find("@DATA@"))
        line.replace(pos, 6, DATA_DIR);
      args.push_back(line);
    }
    if (!args.empty()) commands.insert(args[0]);
    std::ifstream ex(fs::path(path).replace_extension(".expected"), std::ios::binary);
    const std::string expected((std::istreambuf_iterator<char>(ex)), std::istreambuf_iterator<char>());
    std::string got;
    const int rc = run_cli(CLI_PATH, args, got);
    o.require(rc == want && got == expected, "golden mismatch: " + path.stem().string());
  }
  o.require(cases.size() >= 20, "fewer than 20 golden cases");
  for (const char* c : {"normalize", "comm", "apply", "compose", "mdeg", "order", "reduce", "weyl-decompose",
                        "decompose", "reconstruct", "zeta", "eta", "azumaya-check", "zfilt"})
    o.require(commands.count(c) == 1, std::string("no golden case for ") + c);

  Gen g(111);
  int trips = 0;
  for (int t = 0; t < 250; ++t) {
    const Mode mode = g.uniform(0, 3) == 0 ? Mode::weyl : Mode::heisenberg;
    const HContext c(g.uniform(1, 3), Field::of_characteristic(g.coin() ? 0 : 7), mode);
    const auto a = g.element(c, 4, 4, 3);
    const auto d = g.op(c, 4, 3);
    const PolyRing r(g.coin() ? std::vector<std::string>{"t"} : std::vector<std::string>{"u", "v"},
                     Field::of_characteristic(g.coin() ? 0 : 3));
    const auto p = g.poly(r, 4, 4);
    const auto q = g.pdop(r, 3, 3, 3);
    o.require(parse_element(to_text(a), c) == a, "element round trip");
    o.require(parse_operator(to_text(d), c) == d, "operator round trip");
    o.require(parse_poly(to_text(p), r) == p, "polynomial round trip");
    o.require(parse_pdop(to_text(q), r) == q, "PDOp round trip");
    trips += 4;
  }
  if (o.pass)
    o.detail = std::to_string(cases.size()) + " golden cases over " + std::to_string(commands.size()) +
               " subcommands; " + std::to_string(trips) + " round trips";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10, criterion11};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[i] << "\n";
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);
  bool all = true;
  for (int k : selected) {
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
  }
  return all ? 0 : 1;
}
