#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "diffalg/azumaya.hpp"
#include "diffalg/findim.hpp"
#include "diffalg/operator.hpp"
#include "diffalg/pdo.hpp"
#include "diffalg/text.hpp"

namespace testing_support {

using namespace diffalg;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }

  Scalar coefficient(Field f) {
    int v = 0;
    while (v == 0 || Scalar(f, v).is_zero()) v = uniform(-4, 4);
    if (f.is_zero_characteristic() && uniform(0, 4) == 0) return Scalar(f, v, uniform(2, 3));
    return Scalar(f, v);
  }

  /// PBW key with deg1 <= max_deg1 and h-exponent <= max_h.
  Exponents pbw_key(const HContext& ctx, int max_deg1, int max_h) {
    Exponents k(2 * ctx.n + 1, 0);
    k[0] = ctx.is_weyl() ? 0 : uniform(0, max_h);
    const int budget = uniform(0, max_deg1);
    for (int i = 0; i < budget; ++i) ++k[uniform(1, 2 * ctx.n)];
    return k;
  }

  HElement element(const HContext& ctx, int max_terms, int max_deg1, int max_h = 2) {
    HElement a(ctx);
    const int terms = uniform(1, max_terms);
    for (int t = 0; t < terms; ++t) a.add_term(pbw_key(ctx, max_deg1, max_h), coefficient(ctx.field));
    return a;
  }

  HElement nonzero_element(const HContext& ctx, int max_terms, int max_deg1, int max_h = 2) {
    while (true) {
      HElement a = element(ctx, max_terms, max_deg1, max_h);
      if (!a.is_zero()) return a;
    }
  }

  /// Operator with every exponent (lambda and partial) at most max_exp.
  DOperator op(const HContext& ctx, int max_terms, int max_exp) {
    DOperator d(ctx);
    const int w = 2 * ctx.n + 1;
    const int terms = uniform(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      Exponents key(2 * w, 0);
      for (int i = 0; i < 2 * w; ++i) {
        if (ctx.is_weyl() && (i == 0 || i == w)) continue;
        key[i] = uniform(0, 2) == 0 ? uniform(0, max_exp) : 0;
      }
      d.add_term(key, coefficient(ctx.field));
    }
    return d;
  }

  DOperator nonzero_op(const HContext& ctx, int max_terms, int max_exp) {
    while (true) {
      DOperator d = op(ctx, max_terms, max_exp);
      if (!d.is_zero()) return d;
    }
  }

  Poly poly(const PolyRing& ring, int max_terms, int max_deg) {
    Poly p(ring);
    const int terms = uniform(0, max_terms);
    for (int t = 0; t < terms; ++t) {
      Exponents e(ring.size(), 0);
      const int budget = uniform(0, max_deg);
      for (int i = 0; i < budget && !e.empty(); ++i) ++e[uniform(0, static_cast<int>(ring.size()) - 1)];
      p.add_term(e, coefficient(ring.field()));
    }
    return p;
  }

  PDOp pdop(const PolyRing& ring, int max_terms, int max_deg, int max_order) {
    PDOp d(ring);
    const int terms = uniform(0, max_terms);
    const std::size_t k = ring.size();
    for (int t = 0; t < terms; ++t) {
      Exponents key(2 * k, 0);
      const int cb = uniform(0, max_deg), ca = uniform(0, max_order);
      for (int i = 0; i < cb; ++i) ++key[uniform(0, static_cast<int>(k) - 1)];
      for (int i = 0; i < ca; ++i) ++key[k + uniform(0, static_cast<int>(k) - 1)];
      d.add_term(key, coefficient(ring.field()));
    }
    return d;
  }

  OperatorMatrix op_matrix(const CenteredFreeAlgebra& a, int density, int max_deg, int max_order) {
    OperatorMatrix m(a.ring(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j)
        if (uniform(0, density) == 0) m.at(i, j) = pdop(a.ring(), 2, max_deg, max_order);
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

/// Independent multiplication oracle: expand both operands as words in the generators and
/// rewrite y_l x_l -> x_l y_l - h (other inversions just swap) until no inversion remains.
inline HElement word_rewrite_product(const HElement& a, const HElement& b) {
  const HContext& ctx = a.context();
  const int n = ctx.n;
  using Word = std::vector<int>;  // key slots
  auto word_of = [&](const Exponents& k) {
    Word w;
    for (int slot = 0; slot < 2 * n + 1; ++slot)
      for (int e = 0; e < k[slot]; ++e) w.push_back(slot);
    return w;
  };
  std::map<Word, Scalar> pending;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      Word w = word_of(ka);
      const Word wb = word_of(kb);
      w.insert(w.end(), wb.begin(), wb.end());
      auto [it, ins] = pending.try_emplace(w, ca * cb);
      if (!ins) it->second += ca * cb;
    }
  HElement out(ctx);
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    Word w = node.key();
    const Scalar c = node.mapped();
    if (c.is_zero()) continue;
    std::size_t i = 0;
    while (i + 1 < w.size() && w[i] <= w[i + 1]) ++i;
    if (i + 1 >= w.size()) {
      Exponents k(2 * n + 1, 0);
      for (int s : w) ++k[s];
      out.add_term(k, c);
      continue;
    }
    const int first = w[i], second = w[i + 1];
    Word swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    auto add = [&](const Word& word, const Scalar& s) {
      auto [it, ins] = pending.try_emplace(word, s);
      if (!ins) it->second += s;
    };
    add(swapped, c);
    if (first > n && second == first - n) {
      Word reduced(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      if (!ctx.is_weyl()) reduced.push_back(0);
      reduced.insert(reduced.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 2, w.end());
      add(reduced, -c);
    }
  }
  return out;
}

/// All bracket chains of the given length with generators x_i, y_i vanish.
inline bool bracket_chains_vanish(const DOperator& d, int length) {
  const HContext& ctx = d.context();
  std::vector<Generator> gens;
  for (int l = 1; l <= ctx.n; ++l) {
    gens.push_back(Generator::x(l));
    gens.push_back(Generator::y(l));
  }
  std::vector<DOperator> level;
  if (!d.is_zero()) level.push_back(d);
  for (int step = 0; step < length && !level.empty(); ++step) {
    std::vector<DOperator> next;
    for (const auto& op : level)
      for (const auto& g : gens) {
        DOperator b = bracket_with_gen(op, g);
        if (!b.is_zero() && std::find(next.begin(), next.end(), b) == next.end()) next.push_back(std::move(b));
      }
    level = std::move(next);
  }
  return level.empty();
}

/// Bracket-chain M-degree for small operators (kDegreeOfZero for 0).
inline int bracket_mdeg(const DOperator& d, int cap) {
  if (d.is_zero()) return kDegreeOfZero;
  for (int l = 0; l <= cap; ++l)
    if (bracket_chains_vanish(d, l + 1)) return l;
  return cap + 1;
}

inline HElement pbw_monomial(const HContext& ctx, const Exponents& key) {
  HElement a(ctx);
  a.add_term(key, Scalar(ctx.field, 1));
  return a;
}

/// Apply-equality on every PBW monomial with deg2 <= bound.
inline bool agree_on_basis(const DOperator& a, const DOperator& b, int bound) {
  for (const auto& key : basis_up_to_deg2(a.context(), bound)) {
    const HElement m = pbw_monomial(a.context(), key);
    if (!(apply(a, m) == apply(b, m))) return false;
  }
  return true;
}

/// Integer power d^k by repeated composition.
inline DOperator power(const DOperator& d, int k) {
  DOperator r = DOperator::identity(d.context());
  for (int i = 0; i < k; ++i) r = compose(r, d);
  return r;
}

}  // namespace testing_support
