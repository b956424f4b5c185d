#include "diffalg/findim.hpp"

#include <json.hpp>

#include "diffalg/text.hpp"

namespace diffalg {

namespace {

Vector zeros(Field f, std::size_t n) { return Vector(n, Scalar(f)); }

/// Row-major d x d product.
Vector mat_mul(const Vector& x, const Vector& y, std::size_t d, Field f) {
  Vector out = zeros(f, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const Scalar& a = x[i * d + k];
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (!y[k * d + j].is_zero()) out[i * d + j] += a * y[k * d + j];
    }
  return out;
}

Vector sub(Vector a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

bool is_zero_vector(const Vector& v) {
  for (const auto& s : v)
    if (!s.is_zero()) return false;
  return true;
}

/// Operators phi with [L_r, phi] in `previous` for every r in `acting`.
LinearSubspace relative_centre(const FinAlgebra& a, const std::vector<Vector>& acting_left,
                               const LinearSubspace& previous) {
  const std::size_t d = a.dim(), dd = d * d;
  const Field f = a.field();
  std::vector<std::size_t> free_coords;
  {
    std::vector<bool> pivot(dd, false);
    for (auto p : previous.pivots()) pivot[p] = true;
    for (std::size_t i = 0; i < dd; ++i)
      if (!pivot[i]) free_coords.push_back(i);
  }
  std::vector<Vector> columns;
  for (std::size_t u = 0; u < dd; ++u) {
    Vector e = zeros(f, dd);
    e[u] = Scalar(f, 1);
    Vector col;
    for (const auto& l : acting_left) {
      const Vector bracket = previous.reduce(sub(mat_mul(l, e, d, f), mat_mul(e, l, d, f)));
      for (auto c : free_coords) col.push_back(bracket[c]);
    }
    columns.push_back(std::move(col));
  }
  return kernel(f, free_coords.size() * acting_left.size(), columns);
}

LinearSubspace generate(const FinAlgebra& a, const std::vector<Vector>& left, const std::vector<Vector>& right,
                        const LinearSubspace& s) {
  const std::size_t d = a.dim(), dd = d * d;
  LinearSubspace out(a.field(), dd);
  for (const auto& phi : s.basis())
    for (const auto& l : left) {
      const Vector lp = mat_mul(l, phi, d, a.field());
      for (const auto& r : right) {
        out.insert(mat_mul(lp, r, d, a.field()));
        if (out.dim() == dd) return out;
      }
    }
  return out;
}

FiltrationReport filtration(const FinAlgebra& a, const std::vector<Vector>& acting, int i_max) {
  if (i_max < 0) throw Error(ErrorKind::validation, "i_max must be nonnegative");
  std::vector<Vector> mats;
  for (const auto& v : acting) mats.push_back(a.left_matrix(v));
  FiltrationReport report;
  LinearSubspace previous(a.field(), a.dim() * a.dim());
  for (int i = 0; i <= i_max; ++i) {
    LinearSubspace z = generate(a, mats, mats, relative_centre(a, mats, previous));
    for (const auto& v : previous.basis()) z.insert(v);
    const bool same = i > 0 && z.dim() == previous.dim();
    report.levels.push_back({i, z});
    if (same) {
      report.stabilized_at = i - 1;
      break;
    }
    previous = std::move(z);
  }
  return report;
}

}  // namespace

FinAlgebra::FinAlgebra(Field field, std::vector<std::vector<Vector>> constants, Vector unit)
    : field_(field), c_(std::move(constants)), unit_(std::move(unit)) {
  const std::size_t d = unit_.size();
  if (d == 0) throw Error(ErrorKind::validation, "algebra dimension must be positive");
  if (c_.size() != d) throw Error(ErrorKind::validation, "structure table has wrong size");
  for (const auto& row : c_) {
    if (row.size() != d) throw Error(ErrorKind::validation, "structure table has wrong size");
    for (const auto& v : row)
      if (v.size() != d) throw Error(ErrorKind::validation, "structure table has wrong size");
  }
  for (std::size_t i = 0; i < d; ++i) {
    const Vector e = basis_vector(i);
    if (multiply(unit_, e) != e || multiply(e, unit_) != e)
      throw Error(ErrorKind::validation, "the given unit is not a two-sided identity");
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        const Vector ej = basis_vector(j), ek = basis_vector(k);
        if (multiply(multiply(e, ej), ek) != multiply(e, multiply(ej, ek)))
          throw Error(ErrorKind::validation, "structure constants are not associative");
      }
  }
}

Vector FinAlgebra::basis_vector(std::size_t i) const {
  Vector v = zeros(field_, dim());
  v.at(i) = Scalar(field_, 1);
  return v;
}

Vector FinAlgebra::multiply(const Vector& u, const Vector& v) const {
  const std::size_t d = dim();
  Vector out = zeros(field_, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (v[j].is_zero()) continue;
      const Scalar w = u[i] * v[j];
      for (std::size_t k = 0; k < d; ++k)
        if (!c_[i][j][k].is_zero()) out[k] += w * c_[i][j][k];
    }
  }
  return out;
}

Vector FinAlgebra::left_matrix(const Vector& a) const {
  const std::size_t d = dim();
  Vector m = zeros(field_, d * d);
  for (std::size_t l = 0; l < d; ++l) {
    const Vector col = multiply(a, basis_vector(l));
    for (std::size_t k = 0; k < d; ++k) m[k * d + l] = col[k];
  }
  return m;
}

FinAlgebra truncated_polynomial(int k, Field f) {
  if (k < 1) throw Error(ErrorKind::validation, "truncation degree must be at least 1");
  const std::size_t d = static_cast<std::size_t>(k);
  std::vector<std::vector<Vector>> c(d, std::vector<Vector>(d, zeros(f, d)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; i + j < d; ++j) c[i][j][i + j] = Scalar(f, 1);
  Vector unit = zeros(f, d);
  unit[0] = Scalar(f, 1);
  return FinAlgebra(f, std::move(c), std::move(unit));
}

FinAlgebra matrix_algebra(int n, Field f) {
  if (n < 1) throw Error(ErrorKind::validation, "matrix size must be at least 1");
  const std::size_t m = static_cast<std::size_t>(n), d = m * m;
  std::vector<std::vector<Vector>> c(d, std::vector<Vector>(d, zeros(f, d)));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < m; ++l) c[i * m + j][j * m + l][i * m + l] = Scalar(f, 1);
  Vector unit = zeros(f, d);
  for (std::size_t i = 0; i < m; ++i) unit[i * m + i] = Scalar(f, 1);
  return FinAlgebra(f, std::move(c), std::move(unit));
}

FinAlgebra tensor_product(const FinAlgebra& a, const FinAlgebra& b) {
  if (!(a.field() == b.field())) throw Error(ErrorKind::incompatible_context, "tensor factors over different fields");
  const Field f = a.field();
  const std::size_t da = a.dim(), db = b.dim(), d = da * db;
  std::vector<std::vector<Vector>> c(d, std::vector<Vector>(d, zeros(f, d)));
  for (std::size_t i1 = 0; i1 < da; ++i1)
    for (std::size_t j1 = 0; j1 < db; ++j1)
      for (std::size_t i2 = 0; i2 < da; ++i2)
        for (std::size_t j2 = 0; j2 < db; ++j2)
          for (std::size_t k1 = 0; k1 < da; ++k1) {
            const Scalar& ca = a.constant(i1, i2, k1);
            if (ca.is_zero()) continue;
            for (std::size_t k2 = 0; k2 < db; ++k2)
              c[i1 * db + j1][i2 * db + j2][k1 * db + k2] = ca * b.constant(j1, j2, k2);
          }
  Vector unit = zeros(f, d);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) unit[i * db + j] = a.unit()[i] * b.unit()[j];
  return FinAlgebra(f, std::move(c), std::move(unit));
}

FinAlgebra load_fin_algebra_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::syntax, std::string("algebra file: ") + e.what());
  }
  try {
    const std::size_t d = j.at("dim").get<std::size_t>();
    const Field f = Field::of_characteristic(j.value("char", 0u));
    auto scalar = [&](const nlohmann::json& e) {
      return parse_scalar(e.is_string() ? e.get<std::string>() : e.dump(), f);
    };
    const auto& t = j.at("table");
    if (t.size() != d) throw Error(ErrorKind::validation, "algebra file: table has wrong size");
    std::vector<std::vector<Vector>> c(d, std::vector<Vector>(d, zeros(f, d)));
    for (std::size_t a = 0; a < d; ++a) {
      if (t[a].size() != d) throw Error(ErrorKind::validation, "algebra file: table has wrong size");
      for (std::size_t b = 0; b < d; ++b) {
        if (t[a][b].size() != d) throw Error(ErrorKind::validation, "algebra file: table has wrong size");
        for (std::size_t k = 0; k < d; ++k) c[a][b][k] = scalar(t[a][b][k]);
      }
    }
    Vector unit = zeros(f, d);
    const auto& u = j.value("unit", nlohmann::json(0));
    if (u.is_number_integer()) {
      const auto idx = u.get<std::size_t>();
      if (idx >= d) throw Error(ErrorKind::validation, "algebra file: unit index out of range");
      unit[idx] = Scalar(f, 1);
    } else {
      if (u.size() != d) throw Error(ErrorKind::validation, "algebra file: unit has wrong length");
      for (std::size_t k = 0; k < d; ++k) unit[k] = scalar(u[k]);
    }
    return FinAlgebra(f, std::move(c), std::move(unit));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::validation, std::string("algebra file: ") + e.what());
  }
}

LinearSubspace LinearSubspace::span(Field f, std::size_t ambient, const std::vector<Vector>& vectors) {
  LinearSubspace s(f, ambient);
  for (const auto& v : vectors) s.insert(v);
  return s;
}

Vector LinearSubspace::reduce(Vector v) const {
  if (v.size() != ambient_) throw Error(ErrorKind::validation, "vector length differs from the ambient dimension");
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Scalar c = v[pivots_[r]];
    if (c.is_zero()) continue;
    for (std::size_t i = 0; i < ambient_; ++i)
      if (!rows_[r][i].is_zero()) v[i] -= c * rows_[r][i];
  }
  return v;
}

bool LinearSubspace::insert(Vector v) {
  v = reduce(std::move(v));
  std::size_t p = 0;
  while (p < ambient_ && v[p].is_zero()) ++p;
  if (p == ambient_) return false;
  const Scalar inv = v[p].inverse();
  for (auto& s : v) s *= inv;
  for (auto& row : rows_) {
    const Scalar c = row[p];
    if (c.is_zero()) continue;
    for (std::size_t i = 0; i < ambient_; ++i)
      if (!v[i].is_zero()) row[i] -= c * v[i];
  }
  // Keep rows sorted by pivot so the representation is canonical.
  std::size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
  pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
  return true;
}

bool LinearSubspace::contains(const Vector& v) const { return is_zero_vector(reduce(v)); }

bool LinearSubspace::contains(const LinearSubspace& o) const {
  for (const auto& v : o.basis())
    if (!contains(v)) return false;
  return true;
}

LinearSubspace kernel(Field f, std::size_t rows, const std::vector<Vector>& columns) {
  const std::size_t n = columns.size();
  // Row reduce the transpose-free system: build rows of the matrix, then read off the null space.
  std::vector<Vector> m(rows, zeros(f, n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < rows; ++i) m[i][j] = columns[j][i];
  LinearSubspace rowspace = LinearSubspace::span(f, n, m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : rowspace.pivots()) is_pivot[p] = true;
  LinearSubspace out(f, n);
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vector v = zeros(f, n);
    v[free] = Scalar(f, 1);
    for (std::size_t r = 0; r < rowspace.dim(); ++r) v[rowspace.pivots()[r]] = -rowspace.basis()[r][free];
    out.insert(std::move(v));
  }
  return out;
}

LinearSubspace bimodule_center(const FinAlgebra& a) {
  std::vector<Vector> mats;
  for (std::size_t i = 0; i < a.dim(); ++i) mats.push_back(a.left_matrix(a.basis_vector(i)));
  return relative_centre(a, mats, LinearSubspace(a.field(), a.dim() * a.dim()));
}

LinearSubspace ae_generate(const FinAlgebra& a, const LinearSubspace& s) {
  std::vector<Vector> mats;
  for (std::size_t i = 0; i < a.dim(); ++i) mats.push_back(a.left_matrix(a.basis_vector(i)));
  return generate(a, mats, mats, s);
}

FiltrationReport z_filtration(const FinAlgebra& a, int i_max) {
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < a.dim(); ++i) basis.push_back(a.basis_vector(i));
  return filtration(a, basis, i_max);
}

FiltrationReport relative_z_filtration(const FinAlgebra& a, const std::vector<Vector>& central_basis, int i_max) {
  const LinearSubspace r = LinearSubspace::span(a.field(), a.dim(), central_basis);
  if (!r.contains(a.unit())) throw Error(ErrorKind::validation, "central subalgebra must contain the unit");
  for (const auto& u : central_basis) {
    if (u.size() != a.dim()) throw Error(ErrorKind::validation, "central basis vector has wrong length");
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const Vector e = a.basis_vector(i);
      if (a.multiply(u, e) != a.multiply(e, u)) throw Error(ErrorKind::validation, "subalgebra basis is not central");
    }
    for (const auto& v : central_basis)
      if (!r.contains(a.multiply(u, v))) throw Error(ErrorKind::validation, "subalgebra basis is not closed");
  }
  return filtration(a, central_basis, i_max);
}

std::vector<Vector> algebra_centre(const FinAlgebra& a) {
  const std::size_t d = a.dim();
  const Field f = a.field();
  std::vector<Vector> columns;
  for (std::size_t u = 0; u < d; ++u) {
    const Vector e = a.basis_vector(u);
    Vector col;
    for (std::size_t i = 0; i < d; ++i) {
      const Vector b = a.basis_vector(i);
      const Vector c = sub(a.multiply(e, b), a.multiply(b, e));
      col.insert(col.end(), c.begin(), c.end());
    }
    columns.push_back(std::move(col));
  }
  return kernel(f, d * d, columns).basis();
}

}  // namespace diffalg
