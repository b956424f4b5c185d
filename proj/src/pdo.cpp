#include "diffalg/pdo.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>

namespace diffalg {

namespace {

Exponents first_half(const Exponents& key) { return Exponents(key.begin(), key.begin() + key.size() / 2); }
Exponents second_half(const Exponents& key) { return Exponents(key.begin() + key.size() / 2, key.end()); }

Exponents concat(const Exponents& a, const Exponents& b) {
  Exponents r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

void for_each_below(const Exponents& bound, const std::function<void(const Exponents&)>& fn) {
  Exponents k(bound.size(), 0);
  while (true) {
    fn(k);
    std::size_t i = 0;
    while (i < k.size() && k[i] == bound[i]) k[i++] = 0;
    if (i == k.size()) return;
    ++k[i];
  }
}

}  // namespace

void PDOp::check_ring(const PolyRing& r) const {
  if (!(ring_ == r)) throw Error(ErrorKind::incompatible_context, "operators over different polynomial rings");
}

PDOp PDOp::identity(const PolyRing& ring) {
  return monomial(ring, Exponents(ring.size(), 0), Exponents(ring.size(), 0), Scalar(ring.field(), 1));
}

PDOp PDOp::multiplication(const Poly& f) {
  PDOp d(f.ring());
  const Exponents zero(f.ring().size(), 0);
  for (const auto& [e, c] : f.terms()) d.add_term(concat(e, zero), c);
  return d;
}

PDOp PDOp::partial(const PolyRing& ring, std::size_t var, int k) {
  if (var >= ring.size()) throw Error(ErrorKind::out_of_range, "partial variable index out of range");
  if (k < 0) throw Error(ErrorKind::validation, "negative divided-power order");
  Exponents alpha(ring.size(), 0);
  alpha[var] = k;
  return monomial(ring, Exponents(ring.size(), 0), alpha, Scalar(ring.field(), 1));
}

PDOp PDOp::monomial(const PolyRing& ring, const Exponents& beta, const Exponents& alpha, const Scalar& c) {
  PDOp d(ring);
  d.add_term(concat(beta, alpha), c);
  return d;
}

void PDOp::add_term(const Exponents& key, const Scalar& c) {
  if (key.size() != 2 * ring_.size()) throw Error(ErrorKind::validation, "operator key has wrong length");
  if (std::any_of(key.begin(), key.end(), [](int v) { return v < 0; }))
    throw Error(ErrorKind::validation, "negative exponent");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PDOp PDOp::operator-() const {
  PDOp r(ring_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

PDOp& PDOp::operator+=(const PDOp& o) {
  check_ring(o.ring_);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

PDOp& PDOp::operator-=(const PDOp& o) {
  check_ring(o.ring_);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

PDOp operator*(const Scalar& c, const PDOp& d) {
  PDOp r(d.ring_);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : d.terms_) r.terms_.emplace(k, c * v);
  return r;
}

Poly p_apply(const PDOp& d, const Poly& f) {
  if (!(d.ring() == f.ring())) throw Error(ErrorKind::incompatible_context, "operator and polynomial over different rings");
  const Field fld = d.field();
  Poly out(f.ring());
  for (const auto& [key, c] : d.terms()) {
    const Exponents beta = first_half(key), alpha = second_half(key);
    for (const auto& [e, fc] : f.terms()) {
      Scalar w = c * fc;
      Exponents r(e.size());
      for (std::size_t i = 0; i < e.size() && !w.is_zero(); ++i) {
        if (alpha[i] > e[i]) {
          w = Scalar(fld);
          break;
        }
        if (alpha[i] > 0) w *= binomial(fld, e[i], alpha[i]);
        r[i] = e[i] - alpha[i] + beta[i];
      }
      if (!w.is_zero()) out.add_term(r, w);
    }
  }
  return out;
}

PDOp p_compose(const PDOp& d1, const PDOp& d2) {
  if (!(d1.ring() == d2.ring())) throw Error(ErrorKind::incompatible_context, "operators over different polynomial rings");
  const Field f = d1.field();
  PDOp out(d1.ring());
  for (const auto& [k1, c1] : d1.terms()) {
    const Exponents beta = first_half(k1), alpha = second_half(k1);
    for (const auto& [k2, c2] : d2.terms()) {
      const Exponents gamma = first_half(k2), delta = second_half(k2);
      Exponents bound(alpha.size());
      for (std::size_t i = 0; i < bound.size(); ++i) bound[i] = std::min(alpha[i], gamma[i]);
      // d^[alpha] t^gamma = sum_eps C(gamma, eps) t^(gamma-eps) d^[alpha-eps]
      for_each_below(bound, [&](const Exponents& eps) {
        Scalar c = c1 * c2;
        Exponents coef(beta.size()), ord(alpha.size());
        for (std::size_t i = 0; i < beta.size() && !c.is_zero(); ++i) {
          if (eps[i] > 0) c *= binomial(f, gamma[i], eps[i]);
          const int rest = alpha[i] - eps[i];
          if (rest > 0 && delta[i] > 0) c *= binomial(f, rest + delta[i], rest);
          coef[i] = beta[i] + gamma[i] - eps[i];
          ord[i] = rest + delta[i];
        }
        if (!c.is_zero()) out.add_term(concat(coef, ord), c);
      });
    }
  }
  return out;
}

PDOp p_commutator(const PDOp& d1, const PDOp& d2) { return p_compose(d1, d2) - p_compose(d2, d1); }

int p_order(const PDOp& d) {
  int best = INT_MIN;
  for (const auto& [key, c] : d.terms()) {
    const Exponents alpha = second_half(key);
    best = std::max(best, std::accumulate(alpha.begin(), alpha.end(), 0));
  }
  return best;
}

bool grothendieck_order_check(const PDOp& d, int m) {
  if (d.is_zero()) return true;
  if (m < 0) return false;
  const PolyRing& ring = d.ring();
  std::vector<PDOp> vars;
  for (std::size_t i = 0; i < ring.size(); ++i) vars.push_back(PDOp::multiplication(Poly::variable(ring, i)));
  std::vector<PDOp> level{d};
  for (int depth = 0; depth <= m && !level.empty(); ++depth) {
    std::vector<PDOp> next;
    for (const auto& op : level)
      for (const auto& v : vars) {
        PDOp b = p_commutator(op, v);
        if (b.is_zero()) continue;
        if (std::find(next.begin(), next.end(), b) == next.end()) next.push_back(std::move(b));
      }
    level = std::move(next);
  }
  return level.empty();
}

}  // namespace diffalg
