#include "diffalg/azumaya.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include <json.hpp>

#include "diffalg/text.hpp"

namespace diffalg {

namespace {

std::vector<Poly> zero_vector(const PolyRing& ring, std::size_t n) { return std::vector<Poly>(n, Poly(ring)); }

void for_each_exponent_up_to(std::size_t vars, int bound, const std::function<void(const Exponents&)>& fn) {
  // Graded: every exponent of total degree d is visited before any of degree d + 1.
  for (int total = 0; total <= bound; ++total) {
    Exponents e(vars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i + 1 == vars) {
        e[i] = left;
        fn(e);
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[i] = v;
        rec(i + 1, left - v);
      }
    };
    if (vars == 0) {
      if (total == 0) fn(e);
    } else {
      rec(0, total);
    }
  }
}

Poly monomial_poly(const PolyRing& ring, const Exponents& e) { return Poly::monomial(ring, e, Scalar(ring.field(), 1)); }

}  // namespace

CenteredFreeAlgebra::CenteredFreeAlgebra(PolyRing base, std::vector<std::string> basis_names,
                                         std::vector<std::vector<std::vector<Poly>>> table)
    : ring_(std::move(base)), names_(std::move(basis_names)), table_(std::move(table)) {
  const std::size_t n = names_.size();
  if (n == 0) throw Error(ErrorKind::validation, "algebra basis is empty");
  if (table_.size() != n) throw Error(ErrorKind::validation, "structure table has wrong size");
  for (const auto& row : table_) {
    if (row.size() != n) throw Error(ErrorKind::validation, "structure table has wrong size");
    for (const auto& col : row) {
      if (col.size() != n) throw Error(ErrorKind::validation, "structure table has wrong size");
      for (const auto& p : col)
        if (!(p.ring() == ring_)) throw Error(ErrorKind::incompatible_context, "structure constant over another ring");
    }
  }
  const Poly one = Poly::constant(ring_, 1), zero(ring_);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const Poly& expect = j == k ? one : zero;
      if (!(table_[0][j][k] == expect) || !(table_[j][0][k] == expect))
        throw Error(ErrorKind::validation, "basis element 0 is not the unit");
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const auto ij = multiply(basis_vector(i), basis_vector(j));
        const auto jk = multiply(basis_vector(j), basis_vector(k));
        if (multiply(ij, basis_vector(k)) != multiply(basis_vector(i), jk))
          throw Error(ErrorKind::validation, "structure constants are not associative at (" + std::to_string(i) + ", " +
                                                 std::to_string(j) + ", " + std::to_string(k) + ")");
      }
}

std::vector<Poly> CenteredFreeAlgebra::basis_vector(std::size_t i) const {
  auto v = zero_vector(ring_, dim());
  v.at(i) = Poly::constant(ring_, 1);
  return v;
}

std::vector<Poly> CenteredFreeAlgebra::multiply(const std::vector<Poly>& u, const std::vector<Poly>& v) const {
  const std::size_t n = dim();
  auto out = zero_vector(ring_, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j].is_zero()) continue;
      const Poly uv = u[i] * v[j];
      for (std::size_t k = 0; k < n; ++k)
        if (!table_[i][j][k].is_zero()) out[k] += uv * table_[i][j][k];
    }
  }
  return out;
}

PolyMatrix CenteredFreeAlgebra::left_matrix(const std::vector<Poly>& a) const {
  PolyMatrix m(dim(), zero_vector(ring_, dim()));
  for (std::size_t j = 0; j < dim(); ++j) {
    const auto col = multiply(a, basis_vector(j));
    for (std::size_t i = 0; i < dim(); ++i) m[i][j] = col[i];
  }
  return m;
}

PolyMatrix CenteredFreeAlgebra::right_matrix(const std::vector<Poly>& a) const {
  PolyMatrix m(dim(), zero_vector(ring_, dim()));
  for (std::size_t j = 0; j < dim(); ++j) {
    const auto col = multiply(basis_vector(j), a);
    for (std::size_t i = 0; i < dim(); ++i) m[i][j] = col[i];
  }
  return m;
}

CenteredFreeAlgebra build_matrix_algebra(int n, const PolyRing& base) {
  if (n < 1) throw Error(ErrorKind::validation, "matrix size must be at least 1");
  std::vector<std::pair<int, int>> units;
  std::vector<std::string> names{"1"};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != n - 1 || j != n - 1) {
        units.emplace_back(i, j);
        names.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
      }
  const std::size_t dim = names.size();
  using IntMatrix = std::vector<std::vector<long>>;
  auto as_matrix = [&](std::size_t b) {
    IntMatrix m(n, std::vector<long>(n, 0));
    if (b == 0)
      for (int i = 0; i < n; ++i) m[i][i] = 1;
    else
      m[units[b - 1].first][units[b - 1].second] = 1;
    return m;
  };
  auto coordinates = [&](const IntMatrix& m) {
    std::vector<long> c(dim, 0);
    const long last = m[n - 1][n - 1];
    c[0] = last;
    for (std::size_t b = 1; b < dim; ++b) {
      const auto [i, j] = units[b - 1];
      c[b] = i == j ? m[i][j] - last : m[i][j];
    }
    return c;
  };
  std::vector<std::vector<std::vector<Poly>>> table(dim, std::vector<std::vector<Poly>>(dim, zero_vector(base, dim)));
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) {
      const IntMatrix x = as_matrix(a), y = as_matrix(b);
      IntMatrix prod(n, std::vector<long>(n, 0));
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j) prod[i][j] += x[i][k] * y[k][j];
      const auto c = coordinates(prod);
      for (std::size_t k = 0; k < dim; ++k) table[a][b][k] = Poly::constant(base, c[k]);
    }
  return CenteredFreeAlgebra(base, std::move(names), std::move(table));
}

CenteredFreeAlgebra build_heisenberg_charp(int n, std::uint32_t p, Mode mode) {
  const HContext ctx(n, Field::prime(p), mode);
  const PolyRing ring = centre_ring(ctx);
  std::vector<Exponents> keys;
  Exponents key(2 * n + 1, 0);
  std::function<void(int)> rec = [&](int slot) {
    if (slot == 2 * n + 1) {
      keys.push_back(key);
      return;
    }
    for (int e = 0; e < static_cast<int>(p); ++e) {
      key[slot] = e;
      rec(slot + 1);
    }
    key[slot] = 0;
  };
  rec(1);
  std::sort(keys.begin(), keys.end());
  std::vector<std::string> names;
  for (const auto& k : keys) {
    std::string s;
    for (int slot = 1; slot <= 2 * n; ++slot) {
      if (k[slot] == 0) continue;
      if (!s.empty()) s += "*";
      s += (slot <= n ? "x" + std::to_string(slot) : "y" + std::to_string(slot - n));
      if (k[slot] > 1) s += "^" + std::to_string(k[slot]);
    }
    names.push_back(s.empty() ? "1" : s);
  }
  const std::size_t dim = keys.size();
  std::vector<std::vector<std::vector<Poly>>> table(dim, std::vector<std::vector<Poly>>(dim, zero_vector(ring, dim)));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      HElement prod(ctx);
      multiply_monomials(ctx, keys[i], keys[j], Scalar(ctx.field, 1), prod);
      for (const auto& [reduced, poly] : central_decompose(prod)) {
        const auto pos = std::lower_bound(keys.begin(), keys.end(), reduced) - keys.begin();
        table[i][j][pos] = poly;
      }
    }
  CenteredFreeAlgebra a(ring, std::move(names), std::move(table));
  a.heisenberg_source = ctx;
  a.heisenberg_keys = std::move(keys);
  return a;
}

CenteredFreeAlgebra build_dual_numbers(const PolyRing& base) {
  std::vector<std::vector<std::vector<Poly>>> table(2, std::vector<std::vector<Poly>>(2, zero_vector(base, 2)));
  table[0][0][0] = Poly::constant(base, 1);
  table[0][1][1] = Poly::constant(base, 1);
  table[1][0][1] = Poly::constant(base, 1);
  return CenteredFreeAlgebra(base, {"1", "e"}, std::move(table));
}

CenteredFreeAlgebra load_free_algebra_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::syntax, std::string("algebra file: ") + e.what());
  }
  try {
    const std::size_t dim = j.at("dim").get<std::size_t>();
    const auto vars = j.at("vars").get<std::vector<std::string>>();
    const PolyRing ring(vars, Field::of_characteristic(j.value("char", 0u)));
    std::vector<std::string> names;
    if (j.contains("basis")) {
      names = j.at("basis").get<std::vector<std::string>>();
    } else {
      for (std::size_t i = 0; i < dim; ++i) names.push_back("a" + std::to_string(i));
    }
    if (names.size() != dim) throw Error(ErrorKind::validation, "algebra file: basis length differs from dim");
    const auto& t = j.at("table");
    std::vector<std::vector<std::vector<Poly>>> table(dim, std::vector<std::vector<Poly>>(dim, zero_vector(ring, dim)));
    if (t.size() != dim) throw Error(ErrorKind::validation, "algebra file: table has wrong size");
    for (std::size_t a = 0; a < dim; ++a) {
      if (t[a].size() != dim) throw Error(ErrorKind::validation, "algebra file: table has wrong size");
      for (std::size_t b = 0; b < dim; ++b) {
        if (t[a][b].size() != dim) throw Error(ErrorKind::validation, "algebra file: table has wrong size");
        for (std::size_t k = 0; k < dim; ++k) {
          const auto& entry = t[a][b][k];
          table[a][b][k] = parse_poly(entry.is_string() ? entry.get<std::string>() : entry.dump(), ring);
        }
      }
    }
    return CenteredFreeAlgebra(ring, std::move(names), std::move(table));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::validation, std::string("algebra file: ") + e.what());
  }
}

OperatorMatrix::OperatorMatrix(const PolyRing& ring, std::size_t n)
    : entries_(n, std::vector<PDOp>(n, PDOp(ring))) {
  if (n == 0) throw Error(ErrorKind::validation, "operator matrix must be nonempty");
}

OperatorMatrix::OperatorMatrix(std::vector<std::vector<PDOp>> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorKind::validation, "operator matrix must be nonempty");
  const PolyRing& r = entries_[0].at(0).ring();
  for (const auto& row : entries_) {
    if (row.size() != entries_.size()) throw Error(ErrorKind::validation, "operator matrix must be square");
    for (const auto& e : row)
      if (!(e.ring() == r)) throw Error(ErrorKind::incompatible_context, "operator matrix entries over different rings");
  }
}

bool OperatorMatrix::is_zero() const {
  for (const auto& row : entries_)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

std::vector<Poly> OperatorMatrix::apply(const std::vector<Poly>& v) const {
  if (v.size() != size()) throw Error(ErrorKind::validation, "vector length differs from matrix size");
  auto out = zero_vector(ring(), size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) out[i] += p_apply(entries_[i][j], v[j]);
  return out;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& o) {
  if (o.size() != size()) throw Error(ErrorKind::validation, "operator matrices of different sizes");
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) entries_[i][j] += o.entries_[i][j];
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& o) {
  if (o.size() != size()) throw Error(ErrorKind::validation, "operator matrices of different sizes");
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) entries_[i][j] -= o.entries_[i][j];
  return *this;
}

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::validation, "operator matrices of different sizes");
  const std::size_t n = a.size();
  OperatorMatrix out(a.ring(), n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (a.at(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (!b.at(j, k).is_zero()) out.at(i, k) += p_compose(a.at(i, j), b.at(j, k));
    }
  return out;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) { return compose(a, b) - compose(b, a); }

OperatorMatrix from_poly_matrix(const PolyMatrix& m, const PolyRing& ring) {
  OperatorMatrix out(ring, m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out.at(i, j) = PDOp::multiplication(m[i][j]);
  return out;
}

OperatorMatrix lambda_matrix(const CenteredFreeAlgebra& a, const std::vector<Poly>& v) {
  return from_poly_matrix(a.left_matrix(v), a.ring());
}

OperatorMatrix rho_matrix(const CenteredFreeAlgebra& a, const std::vector<Poly>& v) {
  return from_poly_matrix(a.right_matrix(v), a.ring());
}

OperatorMatrix tilde_extend(const PDOp& phi, const CenteredFreeAlgebra& a) {
  if (!(phi.ring() == a.ring())) throw Error(ErrorKind::incompatible_context, "operator is not over the base ring");
  OperatorMatrix out(a.ring(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out.at(i, i) = phi;
  return out;
}

OperatorMatrix wp(std::size_t l, std::size_t k, const CenteredFreeAlgebra& a) {
  if (l >= a.dim() || k >= a.dim()) throw Error(ErrorKind::out_of_range, "basis index out of range");
  OperatorMatrix out(a.ring(), a.dim());
  out.at(l, k) = PDOp::identity(a.ring());
  return out;
}

PDOp phi_ij(const OperatorMatrix& m, std::size_t i, std::size_t j, const CenteredFreeAlgebra& a) {
  if (i >= a.dim() || j >= a.dim()) throw Error(ErrorKind::out_of_range, "basis index out of range");
  if (m.size() != a.dim()) throw Error(ErrorKind::validation, "operator matrix size differs from the algebra rank");
  // f_i is wp(0, i) followed by reading coordinate 0; R sits in A as the a_0 coordinate.
  const OperatorMatrix chain = compose(compose(wp(0, i, a), m), rho_matrix(a, a.basis_vector(j)));
  return chain.at(0, 0);
}

std::vector<std::vector<PDOp>> decompose(const OperatorMatrix& m, const CenteredFreeAlgebra& a) {
  std::vector<std::vector<PDOp>> out(a.dim(), std::vector<PDOp>(a.dim(), PDOp(a.ring())));
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out[i][j] = phi_ij(m, i, j, a);
  return out;
}

OperatorMatrix reconstruct(const std::vector<std::vector<PDOp>>& components, const CenteredFreeAlgebra& a) {
  if (components.size() != a.dim()) throw Error(ErrorKind::validation, "component matrix has wrong size");
  OperatorMatrix out(a.ring(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (components[i].size() != a.dim()) throw Error(ErrorKind::validation, "component matrix has wrong size");
    const OperatorMatrix rho = rho_matrix(a, a.basis_vector(i));
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (components[i][j].is_zero()) continue;
      out += compose(compose(rho, tilde_extend(components[i][j], a)), wp(0, j, a));
    }
  }
  return out;
}

bool order_check(const OperatorMatrix& m, int order) {
  for (const auto& row : m.entries())
    for (const auto& e : row)
      if (!grothendieck_order_check(e, order)) return false;
  return true;
}

PDOp zeta_elem(const OperatorMatrix& m, const CenteredFreeAlgebra& a) { return phi_ij(m, 0, 0, a); }

std::vector<OperatorMatrix> eta_gens(const std::vector<PDOp>& gens, const CenteredFreeAlgebra& a) {
  std::vector<OperatorMatrix> out;
  for (const auto& g : gens) out.push_back(tilde_extend(g, a));
  return out;
}

AzumayaReport azumaya_check(const CenteredFreeAlgebra& a) {
  const std::size_t n = a.dim();
  if (n > 9) throw Error(ErrorKind::out_of_range, "azumaya-check is limited to rank N <= 9 (an 81 x 81 determinant)");
  const std::size_t big = n * n;
  PolyMatrix m(big, zero_vector(a.ring(), big));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      const auto il = a.multiply(a.basis_vector(i), a.basis_vector(l));
      for (std::size_t j = 0; j < n; ++j) {
        const auto ilj = a.multiply(il, a.basis_vector(j));
        for (std::size_t k = 0; k < n; ++k) m[k * n + l][i * n + j] = ilj[k];
      }
    }
  Poly det = determinant(std::move(m), a.ring());
  const bool unit = !det.is_zero() && det.is_constant();
  return {std::move(det), unit};
}

std::vector<Poly> coordinates_of(const HElement& x, const CenteredFreeAlgebra& a) {
  if (!a.heisenberg_source || !(x.context() == *a.heisenberg_source))
    throw Error(ErrorKind::incompatible_context, "element does not belong to this algebra");
  auto out = zero_vector(a.ring(), a.dim());
  for (const auto& [reduced, poly] : central_decompose(x)) {
    const auto& keys = a.heisenberg_keys;
    const auto pos = std::lower_bound(keys.begin(), keys.end(), reduced) - keys.begin();
    out[pos] = poly;
  }
  return out;
}

OperatorMatrix to_operator_matrix(const DOperator& d, const CenteredFreeAlgebra& a) {
  if (!a.heisenberg_source || !(d.context() == *a.heisenberg_source))
    throw Error(ErrorKind::incompatible_context, "operator does not act on this algebra");
  const HContext& ctx = d.context();
  const PolyRing& ring = a.ring();
  const int n = ctx.n;
  const int p = static_cast<int>(ctx.field.characteristic());
  const int offset = ctx.is_weyl() ? 0 : 1;
  int bound = 0;
  for (const auto& [key, c] : d.terms()) {
    const Exponents lam = lambda_part(key), alpha = partial_part(key);
    bound = std::max(bound, std::accumulate(alpha.begin(), alpha.end(), 0) +
                                std::accumulate(lam.begin() + 1 + n, lam.end(), 0));
  }
  std::vector<Exponents> alphas;
  for_each_exponent_up_to(ring.size(), bound, [&](const Exponents& e) { alphas.push_back(e); });

  OperatorMatrix out(ring, a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    // values[i][alpha] = f_i(D(t^alpha a_j))
    std::vector<std::map<Exponents, Poly>> values(a.dim());
    for (const auto& alpha : alphas) {
      Exponents key = a.heisenberg_keys[j];
      if (!ctx.is_weyl()) key[0] = alpha[0];
      for (int l = 0; l < 2 * n; ++l) key[1 + l] += p * alpha[offset + l];
      HElement basis(ctx);
      basis.add_term(key, Scalar(ctx.field, 1));
      const auto coords = coordinates_of(apply(d, basis), a);
      for (std::size_t i = 0; i < a.dim(); ++i) values[i].emplace(alpha, coords[i]);
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
      // c_alpha = phi(t^alpha) - sum_{beta < alpha} c_beta C(alpha, beta) t^(alpha - beta)
      std::map<Exponents, Poly> coeffs;
      for (const auto& alpha : alphas) {
        Poly c = values[i].at(alpha);
        for (const auto& [beta, cb] : coeffs) {
          Scalar w(ring.field(), 1);
          Exponents diff(alpha.size());
          bool below = true;
          for (std::size_t v = 0; v < alpha.size() && below; ++v) {
            if (beta[v] > alpha[v]) below = false;
            else {
              w *= binomial(ring.field(), alpha[v], beta[v]);
              diff[v] = alpha[v] - beta[v];
            }
          }
          if (below && !w.is_zero()) c -= w * (cb * monomial_poly(ring, diff));
        }
        coeffs.emplace(alpha, std::move(c));
      }
      PDOp phi(ring);
      for (const auto& [alpha, c] : coeffs)
        for (const auto& [beta, s] : c.terms()) {
          Exponents k = beta;
          k.insert(k.end(), alpha.begin(), alpha.end());
          phi.add_term(k, s);
        }
      out.at(i, j) = std::move(phi);
    }
  }
  return out;
}

}  // namespace diffalg
