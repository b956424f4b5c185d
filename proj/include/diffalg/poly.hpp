#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffalg/scalar.hpp"

namespace diffalg {

/// Exponent vector of a monomial. Map keys compare lexicographically.
using Exponents = std::vector<int>;

/// Commutative polynomial ring k[t_1, ..., t_k] with named variables.
class PolyRing {
 public:
  PolyRing(std::vector<std::string> vars, Field field);

  std::size_t size() const { return data_->vars.size(); }
  const std::vector<std::string>& vars() const { return data_->vars; }
  Field field() const { return data_->field; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  friend bool operator==(const PolyRing& a, const PolyRing& b) {
    return a.data_ == b.data_ || (a.data_->field == b.data_->field && a.data_->vars == b.data_->vars);
  }

 private:
  struct Data {
    std::vector<std::string> vars;
    Field field;
  };
  std::shared_ptr<const Data> data_;
};

/// Sparse polynomial: exponent vector -> nonzero coefficient.
class Poly {
 public:
  using Terms = std::map<Exponents, Scalar>;

  explicit Poly(PolyRing ring) : ring_(std::move(ring)) {}

  static Poly constant(const PolyRing& ring, const Scalar& c);
  static Poly constant(const PolyRing& ring, long c) { return constant(ring, Scalar(ring.field(), c)); }
  static Poly variable(const PolyRing& ring, std::size_t index);
  static Poly monomial(const PolyRing& ring, Exponents e, const Scalar& c);

  const PolyRing& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  Field field() const { return ring_.field(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the monomial e (zero if absent).
  Scalar coefficient(const Exponents& e) const;
  /// Maximum total degree; -1 for the zero polynomial.
  int total_degree() const;

  /// Accumulates c * t^e, dropping the entry if it cancels.
  void add_term(const Exponents& e, const Scalar& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Scalar& c, const Poly& p);
  friend bool operator==(const Poly& a, const Poly& b) { return a.ring_ == b.ring_ && a.terms_ == b.terms_; }

  /// Quotient if `divisor` divides this exactly, otherwise nullopt.
  std::optional<Poly> exact_divide(const Poly& divisor) const;

 private:
  void check_ring(const Poly& o) const;

  PolyRing ring_;
  Terms terms_;
};

/// Sum of exponent vectors.
Exponents add_exponents(const Exponents& a, const Exponents& b);

/// Determinant of a square matrix over a polynomial ring (fraction-free Bareiss elimination).
Poly determinant(std::vector<std::vector<Poly>> matrix, const PolyRing& ring);

}  // namespace diffalg
