#pragma once

#include <climits>
#include <map>
#include <string>
#include <vector>

#include "diffalg/poly.hpp"
#include "diffalg/scalar.hpp"

namespace diffalg {

enum class Mode { heisenberg, weyl };

/// Rank, field and mode shared by every value in one computation.
struct HContext {
  int n = 1;
  Field field;
  Mode mode = Mode::heisenberg;

  HContext() = default;
  HContext(int rank, Field f, Mode m = Mode::heisenberg);

  bool is_weyl() const { return mode == Mode::weyl; }
  friend bool operator==(const HContext&, const HContext&) = default;
};

/// One of the algebra generators h, x_l, y_l (l is 1-based).
struct Generator {
  enum class Kind { h, x, y };
  Kind kind = Kind::h;
  int index = 0;

  static Generator h() { return {Kind::h, 0}; }
  static Generator x(int l) { return {Kind::x, l}; }
  static Generator y(int l) { return {Kind::y, l}; }
  std::string name() const;
  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Position of a generator's exponent inside a PBW key [m, I_1..I_n, J_1..J_n].
inline std::size_t key_slot(const Generator& g, int n) {
  switch (g.kind) {
    case Generator::Kind::h: return 0;
    case Generator::Kind::x: return static_cast<std::size_t>(g.index);
    case Generator::Kind::y: return static_cast<std::size_t>(n + g.index);
  }
  return 0;
}

/// Element of H_n (or A_n in Weyl mode) in PBW normal form
/// sum c * h^m x^I y^J. Keys are [m, I_1..I_n, J_1..J_n]; m is 0 in Weyl mode.
class HElement {
 public:
  using Terms = std::map<Exponents, Scalar>;

  explicit HElement(HContext ctx) : ctx_(ctx) {}

  static HElement scalar(const HContext& ctx, const Scalar& c);
  static HElement scalar(const HContext& ctx, long c) { return scalar(ctx, Scalar(ctx.field, c)); }
  static HElement generator(const HContext& ctx, Generator g);
  static HElement monomial(const HContext& ctx, int m, const Exponents& I, const Exponents& J, const Scalar& c);

  const HContext& context() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Accumulates c times the PBW monomial `key` (validated against the context).
  void add_term(const Exponents& key, const Scalar& c);

  HElement operator-() const;
  HElement& operator+=(const HElement& o);
  HElement& operator-=(const HElement& o);
  friend HElement operator+(HElement a, const HElement& b) { return a += b; }
  friend HElement operator-(HElement a, const HElement& b) { return a -= b; }
  friend HElement operator*(const Scalar& c, const HElement& a);
  friend bool operator==(const HElement& a, const HElement& b) { return a.ctx_ == b.ctx_ && a.terms_ == b.terms_; }

 private:
  HContext ctx_;
  Terms terms_;
};

/// Degree of the zero element for deg1/deg2/mdeg/order.
inline constexpr int kDegreeOfZero = INT_MIN;

void require_same_context(const HContext& a, const HContext& b);

/// Product in PBW normal form: y_j x_i -> x_i y_j - delta_ij h, with h -> 1 in Weyl mode.
HElement normalize_mul(const HElement& a, const HElement& b);
HElement commutator(const HElement& a, const HElement& b);

/// Product of two PBW keys accumulated into `out` with weight c.
void multiply_monomials(const HContext& ctx, const Exponents& a, const Exponents& b, const Scalar& c, HElement& out);

/// max |I|+|J| over terms.
int deg1(const HElement& a);
/// max 2m+|I|+|J| over terms; a grading since the defining relation is homogeneous.
int deg2(const HElement& a);
int deg1_of_key(const Exponents& key);
int deg2_of_key(const Exponents& key);

/// h -> 1, merging like monomials; result is in Weyl mode.
HElement specialize_weyl(const HElement& a);

/// The centre k[h, X_1..X_n, Y_1..Y_n] of H_n in characteristic p (X_l = x_l^p, Y_l = y_l^p).
PolyRing centre_ring(const HContext& ctx);

/// a = sum r_{I,J} x^I y^J with 0 <= I,J < p; keys of the result are [0, I, J].
std::map<Exponents, Poly> central_decompose(const HElement& a);
/// Inverse of central_decompose.
HElement recombine_central(const HContext& ctx, const std::map<Exponents, Poly>& parts);

}  // namespace diffalg
