#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "diffalg/error.hpp"

namespace diffalg {

/// The ground field: the rationals (characteristic 0) or F_p for a prime p.
class Field {
 public:
  constexpr Field() = default;

  static Field rationals() { return Field(); }
  /// Throws validation error unless p is a prime below 2^31.
  static Field prime(std::uint64_t p);
  /// 0 -> rationals, otherwise prime(p).
  static Field of_characteristic(std::uint64_t p) { return p == 0 ? rationals() : prime(p); }

  std::uint32_t characteristic() const noexcept { return p_; }
  bool is_zero_characteristic() const noexcept { return p_ == 0; }

  friend bool operator==(Field, Field) = default;

 private:
  explicit constexpr Field(std::uint32_t p) : p_(p) {}
  std::uint32_t p_ = 0;
};

/// Exact field element: a canonical (reduced) rational in characteristic 0,
/// or a residue in [0, p) in characteristic p.
class Scalar {
 public:
  explicit Scalar(Field f = Field()) : p_(f.characteristic()) {}
  Scalar(Field f, long value);
  Scalar(Field f, const mpz_class& value);
  /// numerator/denominator; throws validation error if the denominator vanishes in the field.
  Scalar(Field f, const mpz_class& num, const mpz_class& den);

  Field field() const { return Field::of_characteristic(p_); }

  bool is_zero() const { return p_ == 0 ? sgn(q_) == 0 : r_ == 0; }
  bool is_one() const { return p_ == 0 ? q_ == 1 : r_ == 1; }
  /// Only meaningful in characteristic 0; residues are never negative.
  bool is_negative() const { return p_ == 0 && sgn(q_) < 0; }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar inverse() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// "3", "-1/2" in characteristic 0; the residue in characteristic p.
  std::string to_string() const;
  /// Numerator and denominator of the canonical representative.
  mpz_class numerator() const;
  mpz_class denominator() const;

 private:
  void check_same(const Scalar& o) const;

  std::uint32_t p_ = 0;
  std::uint64_t r_ = 0;  // residue when p_ != 0
  mpq_class q_;          // value when p_ == 0
};

/// Binomial coefficient C(n, k) as a field element (Lucas reduction in characteristic p).
Scalar binomial(Field f, std::uint64_t n, std::uint64_t k);

/// n! as a field element.
Scalar factorial(Field f, std::uint64_t n);

/// Exact integer binomial; zero when k > n.
mpz_class binomial_z(std::uint64_t n, std::uint64_t k);

}  // namespace diffalg
