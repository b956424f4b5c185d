#include "diffalg/operator.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace diffalg {

namespace {

int key_width(const HContext& ctx) { return 2 * ctx.n + 1; }

Exponents zero_key(const HContext& ctx) { return Exponents(key_width(ctx), 0); }

bool all_zero(const Exponents& e) {
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

/// Coefficient of d^[a] o d^[b] = prod C(a_i+b_i, a_i) d^[a+b].
Scalar merge_coefficient(Field f, const Exponents& a, const Exponents& b) {
  Scalar c(f, 1);
  for (std::size_t i = 0; i < a.size() && !c.is_zero(); ++i)
    if (a[i] != 0 && b[i] != 0) c *= binomial(f, a[i] + b[i], a[i]);
  return c;
}

/// Iterates over all vectors k with 0 <= k <= bound componentwise.
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

/// Push d^[alpha] rightwards through lambda of the PBW word `rest`, generator by generator.
/// Result keys are [sub-monomial of rest, partial orders].
class Pusher {
 public:
  explicit Pusher(const HContext& ctx) : ctx_(ctx) {}

  const DOperator::Terms& push(const Exponents& alpha, const Exponents& rest) {
    Exponents memo_key = join_keys(rest, alpha);
    if (auto it = memo_.find(memo_key); it != memo_.end()) return it->second;

    DOperator::Terms out;
    auto add = [&](const Exponents& key, const Scalar& c) {
      if (c.is_zero()) return;
      auto [it, inserted] = out.try_emplace(key, c);
      if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
      }
    };

    const std::size_t slot = std::find_if(rest.begin(), rest.end(), [](int v) { return v != 0; }) - rest.begin();
    if (slot == rest.size()) {
      add(join_keys(rest, alpha), Scalar(ctx_.field, 1));
    } else {
      Exponents tail = rest;
      --tail[slot];
      // d^[alpha] lambda_g = lambda_g d^[alpha] + (pure partial terms)
      for (const auto& [key, c] : push(alpha, tail)) {
        Exponents k = key;
        ++k[slot];
        add(k, c);
      }
      for (const auto& [beta, c] : extra_terms(alpha, slot))
        for (const auto& [key, c2] : push(beta, tail)) add(key, c * c2);
    }
    return memo_.emplace(std::move(memo_key), std::move(out)).first->second;
  }

 private:
  /// [d^[alpha], lambda_g] for the generator g at key slot `slot`.
  std::vector<std::pair<Exponents, Scalar>> extra_terms(const Exponents& alpha, std::size_t slot) const {
    std::vector<std::pair<Exponents, Scalar>> r;
    const Scalar one(ctx_.field, 1);
    if (alpha[slot] >= 1) {
      Exponents b = alpha;
      --b[slot];
      r.emplace_back(std::move(b), one);
    }
    const std::size_t n = static_cast<std::size_t>(ctx_.n);
    if (slot > n && alpha[0] >= 1) {
      // [d_h^[s], lambda_{y_l}] = -d_{x_l} d_h^[s-1]
      const std::size_t xslot = slot - n;
      Exponents b = alpha;
      --b[0];
      ++b[xslot];
      r.emplace_back(std::move(b), -Scalar(ctx_.field, b[xslot]));
    }
    return r;
  }

  HContext ctx_;
  std::map<Exponents, DOperator::Terms> memo_;
};

void accumulate(DOperator::Terms& terms, const Exponents& key, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

}  // namespace

Exponents lambda_part(const Exponents& key) { return Exponents(key.begin(), key.begin() + key.size() / 2); }

Exponents partial_part(const Exponents& key) { return Exponents(key.begin() + key.size() / 2, key.end()); }

Exponents join_keys(const Exponents& lambda_key, const Exponents& partial_key) {
  Exponents k;
  k.reserve(lambda_key.size() + partial_key.size());
  k.insert(k.end(), lambda_key.begin(), lambda_key.end());
  k.insert(k.end(), partial_key.begin(), partial_key.end());
  return k;
}

DOperator DOperator::scalar(const HContext& ctx, const Scalar& c) {
  DOperator d(ctx);
  d.add_term(Exponents(2 * key_width(ctx), 0), c);
  return d;
}

DOperator DOperator::partial(const HContext& ctx, Generator g, int k) {
  if (g.kind != Generator::Kind::h && (g.index < 1 || g.index > ctx.n))
    throw Error(ErrorKind::out_of_range, "partial index " + std::to_string(g.index) + " out of range for n = " +
                                             std::to_string(ctx.n));
  if (g.kind == Generator::Kind::h && ctx.is_weyl())
    throw Error(ErrorKind::unsupported_mode, "d_h is not defined in Weyl mode");
  if (k < 0) throw Error(ErrorKind::validation, "negative divided-power order");
  Exponents alpha = zero_key(ctx);
  alpha[key_slot(g, ctx.n)] = k;
  return monomial(ctx, zero_key(ctx), alpha, Scalar(ctx.field, 1));
}

DOperator DOperator::monomial(const HContext& ctx, const Exponents& lambda_key, const Exponents& partial_key,
                              const Scalar& c) {
  DOperator d(ctx);
  d.add_term(join_keys(lambda_key, partial_key), c);
  return d;
}

bool DOperator::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && all_zero(terms_.begin()->first));
}

Scalar DOperator::scalar_value() const {
  if (!is_scalar()) throw Error(ErrorKind::validation, "operator is not a scalar");
  return terms_.empty() ? Scalar(ctx_.field) : terms_.begin()->second;
}

void DOperator::add_term(const Exponents& key, const Scalar& c) {
  const int w = key_width(ctx_);
  if (static_cast<int>(key.size()) != 2 * w) throw Error(ErrorKind::validation, "operator key has wrong length");
  if (std::any_of(key.begin(), key.end(), [](int v) { return v < 0; }))
    throw Error(ErrorKind::validation, "negative exponent");
  if (ctx_.is_weyl() && (key[0] != 0 || key[w] != 0))
    throw Error(ErrorKind::unsupported_mode, "Weyl-mode operators carry neither h nor d_h");
  accumulate(terms_, key, c);
}

DOperator DOperator::operator-() const {
  DOperator r(ctx_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

DOperator& DOperator::operator+=(const DOperator& o) {
  require_same_context(ctx_, o.ctx_);
  for (const auto& [k, c] : o.terms_) accumulate(terms_, k, c);
  return *this;
}

DOperator& DOperator::operator-=(const DOperator& o) {
  require_same_context(ctx_, o.ctx_);
  for (const auto& [k, c] : o.terms_) accumulate(terms_, k, -c);
  return *this;
}

DOperator operator*(const Scalar& c, const DOperator& d) {
  DOperator r(d.ctx_);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : d.terms_) r.terms_.emplace(k, c * v);
  return r;
}

HElement apply(const DOperator& d, const HElement& a) {
  require_same_context(d.context(), a.context());
  const HContext& ctx = d.context();
  const Field f = ctx.field;
  HElement out(ctx);
  for (const auto& [dk, dc] : d.terms()) {
    const Exponents lam = lambda_part(dk), alpha = partial_part(dk);
    for (const auto& [ak, ac] : a.terms()) {
      Scalar c = dc * ac;
      Exponents reduced(ak.size());
      for (std::size_t i = 0; i < ak.size() && !c.is_zero(); ++i) {
        if (alpha[i] > ak[i]) {
          c = Scalar(f);
          break;
        }
        if (alpha[i] > 0) c *= binomial(f, ak[i], alpha[i]);
        reduced[i] = ak[i] - alpha[i];
      }
      if (!c.is_zero()) multiply_monomials(ctx, lam, reduced, c, out);
    }
  }
  return out;
}

DOperator compose(const DOperator& d1, const DOperator& d2) {
  require_same_context(d1.context(), d2.context());
  const HContext& ctx = d1.context();
  Pusher pusher(ctx);
  DOperator out(ctx);
  DOperator::Terms acc;
  for (const auto& [k1, c1] : d1.terms()) {
    const Exponents a = lambda_part(k1), alpha = partial_part(k1);
    for (const auto& [k2, c2] : d2.terms()) {
      const Exponents b = lambda_part(k2), beta = partial_part(k2);
      const Scalar c12 = c1 * c2;
      for (const auto& [pk, pc] : pusher.push(alpha, b)) {
        const Exponents u = lambda_part(pk), gamma = partial_part(pk);
        const Scalar merged = merge_coefficient(ctx.field, gamma, beta);
        if (merged.is_zero()) continue;
        const Exponents partial_key = add_exponents(gamma, beta);
        HElement prod(ctx);
        multiply_monomials(ctx, a, u, c12 * pc * merged, prod);
        for (const auto& [v, vc] : prod.terms()) accumulate(acc, join_keys(v, partial_key), vc);
      }
    }
  }
  for (const auto& [k, c] : acc) out.add_term(k, c);
  return out;
}

DOperator op_commutator(const DOperator& d1, const DOperator& d2) { return compose(d1, d2) - compose(d2, d1); }

DOperator lambda_of(const HElement& a) {
  const HContext& ctx = a.context();
  DOperator d(ctx);
  const Exponents zero = zero_key(ctx);
  for (const auto& [k, c] : a.terms()) d.add_term(join_keys(k, zero), c);
  return d;
}

DOperator rho_of_generator(const HContext& ctx, Generator g) {
  DOperator lam = lambda_of(HElement::generator(ctx, g));
  if (g.kind == Generator::Kind::h) return lam;
  const DOperator h = lambda_of(HElement::generator(ctx, Generator::h()));
  if (g.kind == Generator::Kind::x) return lam - compose(h, DOperator::partial(ctx, Generator::y(g.index)));
  return lam + compose(h, DOperator::partial(ctx, Generator::x(g.index)));
}

DOperator rho_of(const HElement& a) {
  const HContext& ctx = a.context();
  const int w = key_width(ctx);
  std::vector<DOperator> gens;
  for (int slot = 0; slot < w; ++slot) {
    Generator g = slot == 0 ? Generator::h() : slot <= ctx.n ? Generator::x(slot) : Generator::y(slot - ctx.n);
    gens.push_back(slot == 0 && ctx.is_weyl() ? DOperator::identity(ctx) : rho_of_generator(ctx, g));
  }
  DOperator out(ctx);
  for (const auto& [k, c] : a.terms()) {
    // rho_{g_1 ... g_r} = rho_{g_r} o ... o rho_{g_1}
    DOperator term = DOperator::identity(ctx);
    for (int slot = 0; slot < w; ++slot)
      for (int e = 0; e < k[slot]; ++e) term = compose(gens[slot], term);
    out += c * term;
  }
  return out;
}

DOperator bar_dh(const HContext& ctx) {
  if (ctx.is_weyl()) throw Error(ErrorKind::unsupported_mode, "the operator Dh needs Heisenberg mode");
  DOperator d = DOperator::partial(ctx, Generator::h());
  for (int l = 1; l <= ctx.n; ++l) {
    Exponents alpha = zero_key(ctx);
    alpha[l] = 1;
    alpha[ctx.n + l] = 1;
    d.add_term(join_keys(zero_key(ctx), alpha), Scalar(ctx.field, 1));
  }
  return d;
}

DOperator bracket_with_gen(const DOperator& d, Generator g) {
  return op_commutator(d, lambda_of(HElement::generator(d.context(), g)));
}

std::map<Exponents, Scalar> rho_normal_form(const DOperator& d) {
  const HContext& ctx = d.context();
  std::map<Exponents, Scalar> form;
  std::map<Exponents, DOperator> rho_cache;
  DOperator work = d;
  // rho_b o d^[alpha] = lambda_b o d^[alpha] + terms whose left part has smaller deg1.
  while (!work.is_zero()) {
    auto pick = work.terms().begin();
    for (auto it = work.terms().begin(); it != work.terms().end(); ++it)
      if (deg1_of_key(lambda_part(it->first)) >= deg1_of_key(lambda_part(pick->first))) pick = it;
    const Exponents key = pick->first;
    const Scalar c = pick->second;
    const Exponents b = lambda_part(key), alpha = partial_part(key);
    auto cached = rho_cache.find(b);
    if (cached == rho_cache.end()) {
      HElement mono(ctx);
      mono.add_term(b, Scalar(ctx.field, 1));
      cached = rho_cache.emplace(b, rho_of(mono)).first;
    }
    const DOperator partial = DOperator::monomial(ctx, zero_key(ctx), alpha, Scalar(ctx.field, 1));
    work -= c * compose(cached->second, partial);
    accumulate(form, key, c);
  }
  return form;
}

DOperator from_rho_normal_form(const HContext& ctx, const std::map<Exponents, Scalar>& form) {
  DOperator out(ctx);
  for (const auto& [key, c] : form) {
    HElement mono(ctx);
    mono.add_term(lambda_part(key), Scalar(ctx.field, 1));
    out += c * compose(rho_of(mono), DOperator::monomial(ctx, zero_key(ctx), partial_part(key), Scalar(ctx.field, 1)));
  }
  return out;
}

int mdeg(const DOperator& d) {
  int best = kDegreeOfZero;
  for (const auto& [key, c] : rho_normal_form(d)) {
    const Exponents alpha = partial_part(key);
    best = std::max(best, 2 * alpha[0] + std::accumulate(alpha.begin() + 1, alpha.end(), 0));
  }
  return best;
}

namespace {

/// Converts between lambda and coordinate forms. Per index l the two differ by
/// lambda_{y_l} = mu_{y_l} - mu_h d_{x_l} (mu_h -> 1 in Weyl mode); all three factors commute.
std::map<Exponents, Scalar> convert_y_factors(const HContext& ctx, const DOperator::Terms& terms, bool to_coordinate) {
  const Field f = ctx.field;
  const int n = ctx.n;
  std::map<Exponents, Scalar> out;
  for (const auto& [key, c] : terms) {
    const Exponents lam = lambda_part(key), alpha = partial_part(key);
    Exponents bound(n);
    for (int l = 0; l < n; ++l) bound[l] = lam[n + 1 + l];
    for_each_below(bound, [&](const Exponents& k) {
      Scalar coeff = c;
      Exponents new_lam = lam, new_alpha = alpha;
      int ksum = 0;
      for (int l = 0; l < n && !coeff.is_zero(); ++l) {
        const int j = lam[n + 1 + l], kk = k[l];
        if (kk == 0) continue;
        // C(j,k) k! C(k+K, k), sign (-1)^k when expanding lambda in coordinates.
        coeff *= binomial(f, j, kk) * factorial(f, kk) * binomial(f, kk + alpha[1 + l], kk);
        if (to_coordinate && kk % 2 == 1) coeff = -coeff;
        new_lam[n + 1 + l] -= kk;
        new_alpha[1 + l] += kk;
        ksum += kk;
      }
      if (coeff.is_zero()) return;
      if (!ctx.is_weyl()) new_lam[0] += ksum;
      accumulate(out, join_keys(new_lam, new_alpha), coeff);
    });
  }
  return out;
}

}  // namespace

std::map<Exponents, Scalar> coordinate_form(const DOperator& d) { return convert_y_factors(d.context(), d.terms(), true); }

DOperator from_coordinate_form(const HContext& ctx, const std::map<Exponents, Scalar>& form) {
  DOperator out(ctx);
  for (const auto& [k, c] : convert_y_factors(ctx, form, false)) out.add_term(k, c);
  return out;
}

DOperator coordinate_compose(const DOperator& d1, const DOperator& d2) {
  require_same_context(d1.context(), d2.context());
  const HContext& ctx = d1.context();
  const Field f = ctx.field;
  const auto f1 = coordinate_form(d1), f2 = coordinate_form(d2);
  std::map<Exponents, Scalar> prod;
  for (const auto& [k1, c1] : f1) {
    const Exponents a = lambda_part(k1), alpha = partial_part(k1);
    for (const auto& [k2, c2] : f2) {
      const Exponents b = lambda_part(k2), beta = partial_part(k2);
      Exponents bound(alpha.size());
      for (std::size_t i = 0; i < alpha.size(); ++i) bound[i] = std::min(alpha[i], b[i]);
      // d^[alpha] mu^b = sum_gamma C(b, gamma) mu^(b-gamma) d^[alpha-gamma]
      for_each_below(bound, [&](const Exponents& gamma) {
        Scalar c = c1 * c2;
        Exponents mu = a, rem(alpha.size());
        for (std::size_t i = 0; i < alpha.size() && !c.is_zero(); ++i) {
          if (gamma[i] > 0) c *= binomial(f, b[i], gamma[i]);
          mu[i] += b[i] - gamma[i];
          rem[i] = alpha[i] - gamma[i];
        }
        if (c.is_zero()) return;
        c *= merge_coefficient(f, rem, beta);
        accumulate(prod, join_keys(mu, add_exponents(rem, beta)), c);
      });
    }
  }
  return from_coordinate_form(ctx, prod);
}

DOperator replay_reduction(const DOperator& d, const std::vector<BracketPartner>& partners) {
  DOperator cur = d;
  for (const auto& partner : partners) {
    if (const auto* g = std::get_if<Generator>(&partner))
      cur = bracket_with_gen(cur, *g);
    else
      cur = op_commutator(cur, std::get<DOperator>(partner));
  }
  return cur;
}

ReductionWitness reduce_to_scalar(const DOperator& d) {
  const HContext& ctx = d.context();
  if (!ctx.field.is_zero_characteristic())
    throw Error(ErrorKind::unsupported_characteristic, "reduce needs characteristic 0");
  if (ctx.is_weyl()) throw Error(ErrorKind::unsupported_mode, "reduce needs Heisenberg mode");
  if (d.is_zero()) throw Error(ErrorKind::zero_operator, "cannot reduce the zero operator");

  const int n = ctx.n;
  const int w = key_width(ctx);
  auto max_over_terms = [](const DOperator& op, const std::function<int(const Exponents&)>& weight) {
    int best = 0;
    for (const auto& [k, c] : op.terms()) best = std::max(best, weight(k));
    return best;
  };

  ReductionWitness witness;
  DOperator cur = d;
  auto bracket = [&](const BracketPartner& partner) {
    cur = replay_reduction(cur, {partner});
    witness.partners.push_back(partner);
  };

  // Remove d_h: [d_h^[s], lambda_h] = d_h^[s-1] and lambda_h commutes with everything else.
  for (int i = max_over_terms(cur, [&](const Exponents& k) { return k[w]; }); i > 0; --i) bracket(Generator::h());
  const DOperator after_h = cur;
  const std::size_t after_h_len = witness.partners.size();

  // Fixed phase schedule: y_l removes x_l and d_{y_l}, x_l removes y_l and d_{x_l}, then d_h removes h.
  for (int l = 1; l <= n && !cur.is_zero(); ++l)
    for (int i = max_over_terms(cur, [&](const Exponents& k) { return k[l] + k[w + n + l]; }); i > 0; --i)
      bracket(Generator::y(l));
  for (int l = 1; l <= n && !cur.is_zero(); ++l)
    for (int i = max_over_terms(cur, [&](const Exponents& k) { return k[n + l] + k[w + l]; }); i > 0; --i)
      bracket(Generator::x(l));
  if (!cur.is_zero()) {
    const DOperator dh = DOperator::partial(ctx, Generator::h());
    for (int i = max_over_terms(cur, [](const Exponents& k) { return k[0]; }); i > 0; --i) bracket(dh);
  }
  if (!cur.is_zero() && cur.is_scalar()) {
    witness.scalar = cur.scalar_value();
    return witness;
  }

  // The phase schedule can cancel (e.g. on rho_{x_l}, which commutes with every lambda).
  // Fall back to differentiating the lex-largest monomial of the coordinate symbol: brackets
  // with mu_t and d_t act as independent partial derivatives on that symbol.
  cur = after_h;
  witness.partners.resize(after_h_len);
  witness.used_symbol_schedule = true;
  const auto symbol = coordinate_form(cur);
  const Exponents top = symbol.rbegin()->first;
  for (int l = 1; l <= n; ++l) {
    for (int i = 0; i < top[w + l]; ++i) bracket(Generator::x(l));
    const DOperator mu_y = rho_of_generator(ctx, Generator::y(l));
    for (int i = 0; i < top[w + n + l]; ++i) bracket(mu_y);
  }
  for (int slot = 0; slot < w; ++slot) {
    if (top[slot] == 0) continue;
    Generator g = slot == 0 ? Generator::h() : slot <= n ? Generator::x(slot) : Generator::y(slot - n);
    const DOperator partial = DOperator::partial(ctx, g);
    for (int i = 0; i < top[slot]; ++i) bracket(partial);
  }
  if (cur.is_zero() || !cur.is_scalar())
    throw Error(ErrorKind::validation, "internal: symbol schedule did not reach a nonzero scalar");
  witness.scalar = cur.scalar_value();
  return witness;
}

std::vector<LambdaRhoPair> weyl_d0_decompose(const DOperator& d) {
  const HContext& ctx = d.context();
  if (!ctx.is_weyl()) throw Error(ErrorKind::unsupported_mode, "weyl-decompose needs Weyl mode (h = 1)");
  if (!ctx.field.is_zero_characteristic())
    throw Error(ErrorKind::unsupported_characteristic, "weyl-decompose needs characteristic 0");
  const Field f = ctx.field;
  const int n = ctx.n;
  const int w = key_width(ctx);
  std::map<Exponents, HElement> by_right;
  for (const auto& [key, c] : d.terms()) {
    const Exponents lam = lambda_part(key);
    Exponents bound(2 * n);  // [K, L]
    for (int i = 0; i < 2 * n; ++i) bound[i] = key[w + 1 + i];
    Scalar scale = c;
    for (int v : bound) scale /= factorial(f, v);
    // i_l rho_y factors out of K_l, j_l rho_x factors out of L_l.
    for_each_below(bound, [&](const Exponents& ij) {
      Scalar coeff = scale;
      Exponents left_y(n), left_x(n), right_key = zero_key(ctx);
      for (int l = 0; l < n; ++l) {
        const int K = bound[l], L = bound[n + l], i = ij[l], j = ij[n + l];
        coeff *= binomial(f, K, i) * binomial(f, L, j);
        if ((K - i + j) % 2 == 1) coeff = -coeff;
        left_y[l] = K - i;
        left_x[l] = L - j;
        right_key[1 + l] = j;
        right_key[1 + n + l] = i;
      }
      HElement left = HElement(ctx);
      left.add_term(lam, coeff);
      left = normalize_mul(left, HElement::monomial(ctx, 0, Exponents(n, 0), left_y, Scalar(f, 1)));
      left = normalize_mul(left, HElement::monomial(ctx, 0, left_x, Exponents(n, 0), Scalar(f, 1)));
      auto it = by_right.try_emplace(right_key, ctx).first;
      it->second += left;
    });
  }
  std::vector<LambdaRhoPair> pairs;
  for (auto& [right_key, left] : by_right) {
    if (left.is_zero()) continue;
    HElement right(ctx);
    right.add_term(right_key, Scalar(f, 1));
    pairs.push_back({std::move(left), std::move(right)});
  }
  return pairs;
}

DOperator assemble_lambda_rho(const HContext& ctx, const std::vector<LambdaRhoPair>& pairs) {
  DOperator out(ctx);
  for (const auto& [left, right] : pairs) out += compose(lambda_of(left), rho_of(right));
  return out;
}

std::vector<Exponents> basis_up_to_deg2(const HContext& ctx, int bound) {
  std::vector<Exponents> out;
  const int w = key_width(ctx);
  Exponents caps(w, bound);
  caps[0] = ctx.is_weyl() ? 0 : bound / 2;
  for_each_below(caps, [&](const Exponents& k) {
    if (deg2_of_key(k) <= bound) out.push_back(k);
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace diffalg
