#pragma once

#include <map>
#include <variant>
#include <vector>

#include "diffalg/heisenberg.hpp"

namespace diffalg {

/// Element of D(H_n) in normal form: sum c * lambda_{h^m x^I y^J} o d_h^[s] d_x^[K] d_y^[L].
///
/// Keys have length 4n+2: the PBW key [m, I, J] of the left multiplication followed by the
/// divided-power orders [s, K, L] laid out in the same slot order (h, x_1..x_n, y_1..y_n).
/// The partials act on PBW coordinates, d^[k] t^j = C(j,k) t^(j-k). Weyl mode has m = s = 0.
class DOperator {
 public:
  using Terms = std::map<Exponents, Scalar>;

  explicit DOperator(HContext ctx) : ctx_(ctx) {}

  static DOperator identity(const HContext& ctx) { return scalar(ctx, Scalar(ctx.field, 1)); }
  static DOperator scalar(const HContext& ctx, const Scalar& c);
  /// Divided power d_g^[k] of the coordinate partial for generator g.
  static DOperator partial(const HContext& ctx, Generator g, int k = 1);
  static DOperator monomial(const HContext& ctx, const Exponents& lambda_key, const Exponents& partial_key,
                            const Scalar& c);

  const HContext& context() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True when the operator is lambda_c for a scalar c (possibly zero).
  bool is_scalar() const;
  /// The scalar c of lambda_c; requires is_scalar().
  Scalar scalar_value() const;

  void add_term(const Exponents& key, const Scalar& c);

  DOperator operator-() const;
  DOperator& operator+=(const DOperator& o);
  DOperator& operator-=(const DOperator& o);
  friend DOperator operator+(DOperator a, const DOperator& b) { return a += b; }
  friend DOperator operator-(DOperator a, const DOperator& b) { return a -= b; }
  friend DOperator operator*(const Scalar& c, const DOperator& d);
  friend bool operator==(const DOperator& a, const DOperator& b) { return a.ctx_ == b.ctx_ && a.terms_ == b.terms_; }

 private:
  HContext ctx_;
  Terms terms_;
};

/// First 2n+1 entries of an operator key (the PBW key of the left multiplication).
Exponents lambda_part(const Exponents& key);
/// Last 2n+1 entries of an operator key (the divided-power orders).
Exponents partial_part(const Exponents& key);
Exponents join_keys(const Exponents& lambda_key, const Exponents& partial_key);

HElement apply(const DOperator& d, const HElement& a);
/// Normal-ordered product d1 o d2, computed by pushing partials right through single
/// left-multiplication generators with the bracket table.
DOperator compose(const DOperator& d1, const DOperator& d2);
DOperator op_commutator(const DOperator& d1, const DOperator& d2);

DOperator lambda_of(const HElement& a);
/// Right multiplication c -> c a, built from rho_h = lambda_h, rho_x = lambda_x - lambda_h d_y,
/// rho_y = lambda_y + lambda_h d_x, extended anti-multiplicatively.
DOperator rho_of(const HElement& a);
DOperator rho_of_generator(const HContext& ctx, Generator g);
/// d_h + sum_l d_{x_l} d_{y_l}; Heisenberg mode only.
DOperator bar_dh(const HContext& ctx);

/// op_commutator(d, lambda_of(g)).
DOperator bracket_with_gen(const DOperator& d, Generator g);

/// The same operator written as sum c * rho_b o d^[alpha]; keys are [b, alpha] as for DOperator.
std::map<Exponents, Scalar> rho_normal_form(const DOperator& d);
DOperator from_rho_normal_form(const HContext& ctx, const std::map<Exponents, Scalar>& form);

/// Bracket filtration degree: the least l with every chain [..[[d, r_0], r_1].., r_l] = 0,
/// r_i in {x_i, y_i}. Equals max 2s+|K|+|L| over the rho normal form.
int mdeg(const DOperator& d);

/// Coordinate form sum c * mu_{h^a x^B y^C} o d^[alpha], mu = commutative multiplication on
/// PBW coordinates. Keys have the DOperator layout.
std::map<Exponents, Scalar> coordinate_form(const DOperator& d);
DOperator from_coordinate_form(const HContext& ctx, const std::map<Exponents, Scalar>& form);
/// Composition carried out in the coordinate Weyl algebra (Leibniz rule with divided powers).
DOperator coordinate_compose(const DOperator& d1, const DOperator& d2);

/// A bracket partner in a reduction: a generator g (meaning lambda_g) or an explicit operator.
using BracketPartner = std::variant<Generator, DOperator>;

struct ReductionWitness {
  std::vector<BracketPartner> partners;
  Scalar scalar;
  /// False when the fixed phase schedule (h; y_l; x_l; d_h) already reached a nonzero scalar.
  bool used_symbol_schedule = false;
};

/// Brackets d successively with the partners until a nonzero scalar remains.
/// Characteristic 0, Heisenberg mode, d != 0.
ReductionWitness reduce_to_scalar(const DOperator& d);
/// Applies the partners of `w` to d in order.
DOperator replay_reduction(const DOperator& d, const std::vector<BracketPartner>& partners);

struct LambdaRhoPair {
  HElement left;
  HElement right;
};

/// Writes a Weyl-mode operator (characteristic 0) as sum lambda_a o rho_b by substituting
/// d_{x_l} = rho_{y_l} - lambda_{y_l} and d_{y_l} = lambda_{x_l} - rho_{x_l}. Pairs are grouped by b.
std::vector<LambdaRhoPair> weyl_d0_decompose(const DOperator& d);
DOperator assemble_lambda_rho(const HContext& ctx, const std::vector<LambdaRhoPair>& pairs);

/// PBW monomials h^m x^I y^J with deg2 <= bound (m = 0 in Weyl mode), in key order.
std::vector<Exponents> basis_up_to_deg2(const HContext& ctx, int bound);

}  // namespace diffalg
