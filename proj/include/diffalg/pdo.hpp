#pragma once

#include <map>

#include "diffalg/poly.hpp"

namespace diffalg {

/// Differential operator on a polynomial ring: sum c * t^beta d^[alpha] with divided powers,
/// d^[alpha] t^m = prod C(m_i, alpha_i) t^(m - alpha). Keys are [beta, alpha] (length 2k).
class PDOp {
 public:
  using Terms = std::map<Exponents, Scalar>;

  explicit PDOp(PolyRing ring) : ring_(std::move(ring)) {}

  static PDOp identity(const PolyRing& ring);
  static PDOp multiplication(const Poly& f);
  /// d_{t_var}^[k].
  static PDOp partial(const PolyRing& ring, std::size_t var, int k = 1);
  static PDOp monomial(const PolyRing& ring, const Exponents& beta, const Exponents& alpha, const Scalar& c);

  const PolyRing& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  Field field() const { return ring_.field(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& key, const Scalar& c);

  PDOp operator-() const;
  PDOp& operator+=(const PDOp& o);
  PDOp& operator-=(const PDOp& o);
  friend PDOp operator+(PDOp a, const PDOp& b) { return a += b; }
  friend PDOp operator-(PDOp a, const PDOp& b) { return a -= b; }
  friend PDOp operator*(const Scalar& c, const PDOp& d);
  friend bool operator==(const PDOp& a, const PDOp& b) { return a.ring_ == b.ring_ && a.terms_ == b.terms_; }

 private:
  void check_ring(const PolyRing& r) const;

  PolyRing ring_;
  Terms terms_;
};

Poly p_apply(const PDOp& d, const Poly& f);
PDOp p_compose(const PDOp& d1, const PDOp& d2);
PDOp p_commutator(const PDOp& d1, const PDOp& d2);
/// max |alpha|; kDegreeOfZero-style sentinel (INT_MIN) for the zero operator.
int p_order(const PDOp& d);
/// True iff every chain [..[[d, t_{i_0}], t_{i_1}].., t_{i_m}] of m+1 brackets with ring variables vanishes.
bool grothendieck_order_check(const PDOp& d, int m);

}  // namespace diffalg
