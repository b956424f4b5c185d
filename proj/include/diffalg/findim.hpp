#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diffalg/scalar.hpp"

namespace diffalg {

using Vector = std::vector<Scalar>;

/// Finite-dimensional associative algebra over a field: e_i e_j = sum_k c[i][j][k] e_k.
class FinAlgebra {
 public:
  /// Validates shape, associativity and that `unit` is a two-sided identity.
  FinAlgebra(Field field, std::vector<std::vector<Vector>> constants, Vector unit);

  std::size_t dim() const { return unit_.size(); }
  Field field() const { return field_; }
  const Scalar& constant(std::size_t i, std::size_t j, std::size_t k) const { return c_[i][j][k]; }
  const Vector& unit() const { return unit_; }

  Vector multiply(const Vector& u, const Vector& v) const;
  Vector basis_vector(std::size_t i) const;
  /// d x d matrix (row-major, flattened) of c -> a c.
  Vector left_matrix(const Vector& a) const;

 private:
  Field field_;
  std::vector<std::vector<Vector>> c_;
  Vector unit_;
};

/// k[e]/(e^k), basis 1, e, ..., e^(k-1).
FinAlgebra truncated_polynomial(int k, Field f);
/// M_n(k), basis e_ij in row-major order.
FinAlgebra matrix_algebra(int n, Field f);
/// A (x) B with basis e_i (x) f_j at index i * dim(B) + j.
FinAlgebra tensor_product(const FinAlgebra& a, const FinAlgebra& b);
/// {"dim": d, "char": p, "table": [[[scalar strings]]], "unit": [...] or index}.
FinAlgebra load_fin_algebra_json(const std::string& json_text);

/// Subspace of k^ambient kept as a reduced row echelon basis.
class LinearSubspace {
 public:
  LinearSubspace(Field f, std::size_t ambient) : field_(f), ambient_(ambient) {}
  static LinearSubspace span(Field f, std::size_t ambient, const std::vector<Vector>& vectors);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  Field field() const { return field_; }
  const std::vector<Vector>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Adds v to the span; returns true when the dimension grew.
  bool insert(Vector v);
  /// v minus its projection along the pivots (zero iff v is in the span).
  Vector reduce(Vector v) const;
  bool contains(const Vector& v) const;
  bool contains(const LinearSubspace& o) const;
  friend bool operator==(const LinearSubspace& a, const LinearSubspace& b) { return a.rows_ == b.rows_; }

 private:
  Field field_;
  std::size_t ambient_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

/// Null space of the linear map given by `columns` (columns[j] is the image of the j-th unit vector).
LinearSubspace kernel(Field f, std::size_t rows, const std::vector<Vector>& columns);

/// Operators phi in End(A) (d x d matrices, flattened row-major) with a phi = phi a for all a.
LinearSubspace bimodule_center(const FinAlgebra& a);
/// Span of L_a o phi o L_b over basis elements a, b and phi in s.
LinearSubspace ae_generate(const FinAlgebra& a, const LinearSubspace& s);

struct FiltrationLevel {
  int index;
  LinearSubspace space;
};

struct FiltrationReport {
  std::vector<FiltrationLevel> levels;
  /// First i with Z_i = Z_{i+1}; empty when the cap was reached first.
  std::optional<int> stabilized_at;
};

FiltrationReport z_filtration(const FinAlgebra& a, int i_max);
/// Filtration for the R-bimodule structure, R spanned by `central_basis` (checked central and closed).
FiltrationReport relative_z_filtration(const FinAlgebra& a, const std::vector<Vector>& central_basis, int i_max);
/// Basis of the centre of A.
std::vector<Vector> algebra_centre(const FinAlgebra& a);

}  // namespace diffalg
