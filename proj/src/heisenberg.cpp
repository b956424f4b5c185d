#include "diffalg/heisenberg.hpp"

#include <algorithm>
#include <numeric>

namespace diffalg {

HContext::HContext(int rank, Field f, Mode m) : n(rank), field(f), mode(m) {
  if (rank < 1) throw Error(ErrorKind::validation, "rank n must be at least 1");
}

std::string Generator::name() const {
  switch (kind) {
    case Kind::h: return "h";
    case Kind::x: return "x" + std::to_string(index);
    case Kind::y: return "y" + std::to_string(index);
  }
  return "?";
}

void require_same_context(const HContext& a, const HContext& b) {
  if (!(a == b)) throw Error(ErrorKind::incompatible_context, "operands have different rank, field or mode");
}

HElement HElement::scalar(const HContext& ctx, const Scalar& c) {
  HElement a(ctx);
  a.add_term(Exponents(2 * ctx.n + 1, 0), c);
  return a;
}

HElement HElement::generator(const HContext& ctx, Generator g) {
  if (g.kind != Generator::Kind::h && (g.index < 1 || g.index > ctx.n))
    throw Error(ErrorKind::out_of_range, "generator index " + std::to_string(g.index) + " out of range for n = " +
                                             std::to_string(ctx.n));
  if (g.kind == Generator::Kind::h && ctx.is_weyl()) return scalar(ctx, 1);
  Exponents key(2 * ctx.n + 1, 0);
  key[key_slot(g, ctx.n)] = 1;
  HElement a(ctx);
  a.add_term(key, Scalar(ctx.field, 1));
  return a;
}

HElement HElement::monomial(const HContext& ctx, int m, const Exponents& I, const Exponents& J, const Scalar& c) {
  if (static_cast<int>(I.size()) != ctx.n || static_cast<int>(J.size()) != ctx.n)
    throw Error(ErrorKind::validation, "multi-index length must equal the rank");
  Exponents key;
  key.reserve(2 * ctx.n + 1);
  key.push_back(ctx.is_weyl() ? 0 : m);
  key.insert(key.end(), I.begin(), I.end());
  key.insert(key.end(), J.begin(), J.end());
  HElement a(ctx);
  a.add_term(key, c);
  return a;
}

void HElement::add_term(const Exponents& key, const Scalar& c) {
  if (static_cast<int>(key.size()) != 2 * ctx_.n + 1) throw Error(ErrorKind::validation, "PBW key has wrong length");
  if (ctx_.is_weyl() && key[0] != 0) throw Error(ErrorKind::validation, "Weyl-mode monomials carry no h");
  if (std::any_of(key.begin(), key.end(), [](int v) { return v < 0; }))
    throw Error(ErrorKind::validation, "negative exponent");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

HElement HElement::operator-() const {
  HElement r(ctx_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

HElement& HElement::operator+=(const HElement& o) {
  require_same_context(ctx_, o.ctx_);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

HElement& HElement::operator-=(const HElement& o) {
  require_same_context(ctx_, o.ctx_);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

HElement operator*(const Scalar& c, const HElement& a) {
  HElement r(a.ctx_);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : a.terms_) r.terms_.emplace(k, c * v);
  return r;
}

void multiply_monomials(const HContext& ctx, const Exponents& a, const Exponents& b, const Scalar& c, HElement& out) {
  const int n = ctx.n;
  // y_l^j x_l^i = sum_k k! C(i,k) C(j,k) (-h)^k x_l^(i-k) y_l^(j-k); distinct indices commute.
  std::vector<std::vector<Scalar>> weights(n);
  for (int l = 0; l < n; ++l) {
    const int j = a[1 + n + l], i = b[1 + l];
    const int kmax = std::min(i, j);
    for (int k = 0; k <= kmax; ++k) {
      mpz_class w = binomial_z(i, k) * binomial_z(j, k);
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), k);
      w *= f;
      if (k % 2 == 1) w = -w;
      weights[l].emplace_back(ctx.field, w);
    }
  }
  std::vector<int> ks(n, 0);
  Exponents key(2 * n + 1);
  while (true) {
    Scalar w = c;
    int ksum = 0;
    for (int l = 0; l < n && !w.is_zero(); ++l) {
      w *= weights[l][ks[l]];
      ksum += ks[l];
    }
    if (!w.is_zero()) {
      key[0] = ctx.is_weyl() ? 0 : a[0] + b[0] + ksum;
      for (int l = 0; l < n; ++l) {
        key[1 + l] = a[1 + l] + b[1 + l] - ks[l];
        key[1 + n + l] = a[1 + n + l] + b[1 + n + l] - ks[l];
      }
      out.add_term(key, w);
    }
    int l = 0;
    while (l < n && ks[l] + 1 >= static_cast<int>(weights[l].size())) ks[l++] = 0;
    if (l == n) break;
    ++ks[l];
  }
}

HElement normalize_mul(const HElement& a, const HElement& b) {
  require_same_context(a.context(), b.context());
  HElement r(a.context());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) multiply_monomials(a.context(), ka, kb, ca * cb, r);
  return r;
}

HElement commutator(const HElement& a, const HElement& b) { return normalize_mul(a, b) - normalize_mul(b, a); }

int deg1_of_key(const Exponents& key) { return std::accumulate(key.begin() + 1, key.end(), 0); }

int deg2_of_key(const Exponents& key) { return 2 * key[0] + deg1_of_key(key); }

int deg1(const HElement& a) {
  int d = kDegreeOfZero;
  for (const auto& [k, c] : a.terms()) d = std::max(d, deg1_of_key(k));
  return d;
}

int deg2(const HElement& a) {
  int d = kDegreeOfZero;
  for (const auto& [k, c] : a.terms()) d = std::max(d, deg2_of_key(k));
  return d;
}

HElement specialize_weyl(const HElement& a) {
  HContext w = a.context();
  w.mode = Mode::weyl;
  HElement r(w);
  for (const auto& [key, c] : a.terms()) {
    Exponents k = key;
    k[0] = 0;
    r.add_term(k, c);
  }
  return r;
}

PolyRing centre_ring(const HContext& ctx) {
  if (ctx.field.is_zero_characteristic())
    throw Error(ErrorKind::unsupported_characteristic, "the centre decomposition needs characteristic p > 0");
  std::vector<std::string> vars;
  if (!ctx.is_weyl()) vars.push_back("h");
  for (int l = 1; l <= ctx.n; ++l) vars.push_back("X" + std::to_string(l));
  for (int l = 1; l <= ctx.n; ++l) vars.push_back("Y" + std::to_string(l));
  return PolyRing(std::move(vars), ctx.field);
}

std::map<Exponents, Poly> central_decompose(const HElement& a) {
  const HContext& ctx = a.context();
  const PolyRing ring = centre_ring(ctx);
  const int p = static_cast<int>(ctx.field.characteristic());
  const int n = ctx.n;
  const int offset = ctx.is_weyl() ? 0 : 1;
  std::map<Exponents, Poly> parts;
  for (const auto& [k, c] : a.terms()) {
    Exponents reduced(2 * n + 1, 0), centre(ring.size(), 0);
    if (!ctx.is_weyl()) centre[0] = k[0];
    for (int l = 0; l < 2 * n; ++l) {
      reduced[1 + l] = k[1 + l] % p;
      centre[offset + l] = k[1 + l] / p;
    }
    auto it = parts.try_emplace(reduced, ring).first;
    it->second.add_term(centre, c);
    if (it->second.is_zero()) parts.erase(it);
  }
  return parts;
}

HElement recombine_central(const HContext& ctx, const std::map<Exponents, Poly>& parts) {
  const PolyRing ring = centre_ring(ctx);
  const int p = static_cast<int>(ctx.field.characteristic());
  const int n = ctx.n;
  const int offset = ctx.is_weyl() ? 0 : 1;
  HElement r(ctx);
  for (const auto& [reduced, poly] : parts) {
    if (!(poly.ring() == ring)) throw Error(ErrorKind::incompatible_context, "coefficient is not over the centre ring");
    for (const auto& [e, c] : poly.terms()) {
      Exponents key(2 * n + 1, 0);
      key[0] = ctx.is_weyl() ? 0 : e[0];
      for (int l = 0; l < 2 * n; ++l) {
        if (reduced[1 + l] >= p) throw Error(ErrorKind::validation, "basis exponent not reduced mod p");
        key[1 + l] = reduced[1 + l] + p * e[offset + l];
      }
      r.add_term(key, c);
    }
  }
  return r;
}

}  // namespace diffalg
