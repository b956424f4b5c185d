#include "diffalg/poly.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace diffalg {

PolyRing::PolyRing(std::vector<std::string> vars, Field field) {
  std::set<std::string> seen(vars.begin(), vars.end());
  if (seen.size() != vars.size()) throw Error(ErrorKind::validation, "polynomial ring variable names must be distinct");
  data_ = std::make_shared<const Data>(Data{std::move(vars), field});
}

std::optional<std::size_t> PolyRing::index_of(const std::string& name) const {
  auto it = std::find(data_->vars.begin(), data_->vars.end(), name);
  if (it == data_->vars.end()) return std::nullopt;
  return static_cast<std::size_t>(it - data_->vars.begin());
}

Exponents add_exponents(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Poly Poly::constant(const PolyRing& ring, const Scalar& c) {
  Poly p(ring);
  p.add_term(Exponents(ring.size(), 0), c);
  return p;
}

Poly Poly::variable(const PolyRing& ring, std::size_t index) {
  if (index >= ring.size()) throw Error(ErrorKind::out_of_range, "variable index out of range");
  Exponents e(ring.size(), 0);
  e[index] = 1;
  return monomial(ring, std::move(e), Scalar(ring.field(), 1));
}

Poly Poly::monomial(const PolyRing& ring, Exponents e, const Scalar& c) {
  if (e.size() != ring.size()) throw Error(ErrorKind::validation, "exponent vector has wrong length");
  Poly p(ring);
  p.add_term(e, c);
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

Scalar Poly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(field()) : it->second;
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

void Poly::add_term(const Exponents& e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::check_ring(const Poly& o) const {
  if (!(ring_ == o.ring_)) throw Error(ErrorKind::incompatible_context, "polynomials over different rings");
}

Poly Poly::operator-() const {
  Poly r(ring_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  check_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_ring(b);
  Poly r(a.ring_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(add_exponents(ea, eb), ca * cb);
  return r;
}

Poly operator*(const Scalar& c, const Poly& p) {
  Poly r(p.ring_);
  if (c.is_zero()) return r;
  for (const auto& [e, v] : p.terms_) r.terms_.emplace(e, c * v);
  return r;
}

std::optional<Poly> Poly::exact_divide(const Poly& divisor) const {
  check_ring(divisor);
  if (divisor.is_zero()) throw Error(ErrorKind::validation, "division by the zero polynomial");
  // Lex order on exponent vectors is a monomial well-order; the leading term is the map's last key.
  const auto& [lead_e, lead_c] = *divisor.terms_.rbegin();
  const Scalar lead_inv = lead_c.inverse();
  Poly rem = *this;
  Poly quotient(ring_);
  while (!rem.is_zero()) {
    const auto& [re, rc] = *rem.terms_.rbegin();
    Exponents q(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
      q[i] = re[i] - lead_e[i];
      if (q[i] < 0) return std::nullopt;
    }
    Poly step = Poly::monomial(ring_, q, rc * lead_inv);
    quotient += step;
    rem -= step * divisor;
  }
  return quotient;
}

Poly determinant(std::vector<std::vector<Poly>> m, const PolyRing& ring) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw Error(ErrorKind::validation, "determinant of a non-square matrix");
  if (n == 0) return Poly::constant(ring, 1);
  bool negate = false;
  Poly previous = Poly::constant(ring, 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return Poly(ring);
      std::swap(m[k], m[swap_row]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Poly num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        auto q = num.exact_divide(previous);
        if (!q) throw Error(ErrorKind::validation, "Bareiss step produced an inexact division");
        m[i][j] = std::move(*q);
      }
      m[i][k] = Poly(ring);
    }
    previous = m[k][k];
  }
  Poly det = m[n - 1][n - 1];
  return negate ? -det : det;
}

}  // namespace diffalg
