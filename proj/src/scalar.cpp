#include "diffalg/scalar.hpp"

#include <vector>

namespace diffalg {

namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t reduce(const mpz_class& v, std::uint32_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return r.get_ui();
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint32_t p) {
  // Fermat: a^(p-2)
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

}  // namespace

Field Field::prime(std::uint64_t p) {
  if (p >= (1ULL << 31) || !is_prime(p))
    throw Error(ErrorKind::validation, "characteristic must be 0 or a prime below 2^31, got " + std::to_string(p));
  return Field(static_cast<std::uint32_t>(p));
}

Scalar::Scalar(Field f, long value) : p_(f.characteristic()) {
  if (p_ == 0)
    q_ = value;
  else
    r_ = reduce(mpz_class(value), p_);
}

Scalar::Scalar(Field f, const mpz_class& value) : p_(f.characteristic()) {
  if (p_ == 0)
    q_ = value;
  else
    r_ = reduce(value, p_);
}

Scalar::Scalar(Field f, const mpz_class& num, const mpz_class& den) : p_(f.characteristic()) {
  if (p_ == 0) {
    if (den == 0) throw Error(ErrorKind::validation, "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  } else {
    std::uint64_t d = reduce(den, p_);
    if (d == 0) throw Error(ErrorKind::validation, "denominator vanishes in characteristic " + std::to_string(p_));
    r_ = reduce(num, p_) * inverse_mod(d, p_) % p_;
  }
}

void Scalar::check_same(const Scalar& o) const {
  if (p_ != o.p_) throw Error(ErrorKind::incompatible_context, "scalars from different fields");
}

Scalar Scalar::operator-() const {
  Scalar s(*this);
  if (p_ == 0)
    s.q_ = -q_;
  else
    s.r_ = r_ == 0 ? 0 : p_ - r_;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same(o);
  if (p_ == 0)
    q_ += o.q_;
  else
    r_ = (r_ + o.r_) % p_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_same(o);
  if (p_ == 0)
    q_ -= o.q_;
  else
    r_ = (r_ + p_ - o.r_) % p_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same(o);
  if (p_ == 0)
    q_ *= o.q_;
  else
    r_ = r_ * o.r_ % p_;
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorKind::validation, "division by zero");
  Scalar s(*this);
  if (p_ == 0)
    s.q_ = 1 / q_;
  else
    s.r_ = inverse_mod(r_, p_);
  return s;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  check_same(o);
  return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.p_ != b.p_) return false;
  return a.p_ == 0 ? a.q_ == b.q_ : a.r_ == b.r_;
}

std::string Scalar::to_string() const {
  if (p_ != 0) return std::to_string(r_);
  return q_.get_str();
}

mpz_class Scalar::numerator() const { return p_ == 0 ? mpz_class(q_.get_num()) : mpz_class(static_cast<unsigned long>(r_)); }

mpz_class Scalar::denominator() const { return p_ == 0 ? mpz_class(q_.get_den()) : mpz_class(1); }

mpz_class binomial_z(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Scalar binomial(Field f, std::uint64_t n, std::uint64_t k) {
  if (k > n) return Scalar(f);
  const std::uint32_t p = f.characteristic();
  if (p == 0) return Scalar(f, binomial_z(n, k));
  // Lucas: C(n,k) = prod C(n_i, k_i) over base-p digits.
  Scalar result(f, 1);
  while (n > 0 || k > 0) {
    std::uint64_t ni = n % p, ki = k % p;
    if (ki > ni) return Scalar(f);
    result *= Scalar(f, binomial_z(ni, ki));
    n /= p;
    k /= p;
  }
  return result;
}

Scalar factorial(Field f, std::uint64_t n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return Scalar(f, r);
}

}  // namespace diffalg
