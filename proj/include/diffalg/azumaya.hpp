#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diffalg/operator.hpp"
#include "diffalg/pdo.hpp"

namespace diffalg {

using PolyMatrix = std::vector<std::vector<Poly>>;

/// Algebra A, free over a central polynomial ring R with basis a_0 = 1, a_1, ..., a_{N-1}.
/// table[i][j][k] = r_{i,j}^k with a_i a_j = sum_k r_{i,j}^k a_k. The dual basis is the
/// coordinate projections f_i.
class CenteredFreeAlgebra {
 public:
  /// Validates shape, the unit law for a_0 and associativity.
  CenteredFreeAlgebra(PolyRing base, std::vector<std::string> basis_names,
                      std::vector<std::vector<std::vector<Poly>>> table);

  const PolyRing& ring() const { return ring_; }
  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& basis_names() const { return names_; }
  const Poly& constant(std::size_t i, std::size_t j, std::size_t k) const { return table_[i][j][k]; }

  /// Element in coordinates: a = sum_i v[i] a_i.
  std::vector<Poly> multiply(const std::vector<Poly>& u, const std::vector<Poly>& v) const;
  std::vector<Poly> basis_vector(std::size_t i) const;
  /// Matrix of c -> a c (entry (i,j) = f_i(a a_j)).
  PolyMatrix left_matrix(const std::vector<Poly>& a) const;
  /// Matrix of c -> c a.
  PolyMatrix right_matrix(const std::vector<Poly>& a) const;

  /// Set for H_n / A_n in characteristic p: the source context and the PBW key of each a_i.
  std::optional<HContext> heisenberg_source;
  std::vector<Exponents> heisenberg_keys;

 private:
  PolyRing ring_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::vector<Poly>>> table_;
};

/// M_n(R) with basis {1} and e_ij for (i,j) != (n,n).
CenteredFreeAlgebra build_matrix_algebra(int n, const PolyRing& base);
/// H_n (or A_n in Weyl mode) over its centre k[h, X, Y], basis x^I y^J with 0 <= I, J < p.
CenteredFreeAlgebra build_heisenberg_charp(int n, std::uint32_t p, Mode mode = Mode::heisenberg);
/// The commutative algebra R[e]/(e^2) with basis {1, e}.
CenteredFreeAlgebra build_dual_numbers(const PolyRing& base);
/// {"dim": N, "vars": [...], "char": p, "basis": [...]?, "table": [[[poly strings]]]}.
CenteredFreeAlgebra load_free_algebra_json(const std::string& json_text);

/// Phi in Hom_k(A, A) as an N x N matrix of operators on R: Phi(sum_j r_j a_j) = sum_i (sum_j phi_ij(r_j)) a_i.
class OperatorMatrix {
 public:
  OperatorMatrix(const PolyRing& ring, std::size_t n);
  explicit OperatorMatrix(std::vector<std::vector<PDOp>> entries);

  std::size_t size() const { return entries_.size(); }
  const PolyRing& ring() const { return entries_.at(0).at(0).ring(); }
  const PDOp& at(std::size_t i, std::size_t j) const { return entries_.at(i).at(j); }
  PDOp& at(std::size_t i, std::size_t j) { return entries_.at(i).at(j); }
  const std::vector<std::vector<PDOp>>& entries() const { return entries_; }
  bool is_zero() const;

  std::vector<Poly> apply(const std::vector<Poly>& v) const;

  OperatorMatrix& operator+=(const OperatorMatrix& o);
  OperatorMatrix& operator-=(const OperatorMatrix& o);
  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
  friend bool operator==(const OperatorMatrix& a, const OperatorMatrix& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::vector<PDOp>> entries_;
};

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix from_poly_matrix(const PolyMatrix& m, const PolyRing& ring);
OperatorMatrix lambda_matrix(const CenteredFreeAlgebra& a, const std::vector<Poly>& v);
OperatorMatrix rho_matrix(const CenteredFreeAlgebra& a, const std::vector<Poly>& v);

/// phi acting on every coordinate: tilde(phi)(r a_i) = phi(r) a_i.
OperatorMatrix tilde_extend(const PDOp& phi, const CenteredFreeAlgebra& a);
/// The extension through the dual basis; coincides with tilde_extend for coordinate projections.
inline OperatorMatrix bar_extend(const PDOp& phi, const CenteredFreeAlgebra& a) { return tilde_extend(phi, a); }
/// wp(l, k)(a_i) = delta_{ik} a_l.
OperatorMatrix wp(std::size_t l, std::size_t k, const CenteredFreeAlgebra& a);
/// f_i o Phi o rho_{a_j} restricted to R.
PDOp phi_ij(const OperatorMatrix& m, std::size_t i, std::size_t j, const CenteredFreeAlgebra& a);
std::vector<std::vector<PDOp>> decompose(const OperatorMatrix& m, const CenteredFreeAlgebra& a);
/// sum_{i,j} rho_{a_i} o tilde(components[i][j]) o f_j.
OperatorMatrix reconstruct(const std::vector<std::vector<PDOp>>& components, const CenteredFreeAlgebra& a);
bool order_check(const OperatorMatrix& m, int order);

PDOp zeta_elem(const OperatorMatrix& m, const CenteredFreeAlgebra& a);
std::vector<OperatorMatrix> eta_gens(const std::vector<PDOp>& gens, const CenteredFreeAlgebra& a);

struct AzumayaReport {
  Poly determinant;
  bool azumaya;
};

/// Determinant of A (x)_R A^o -> End_R(A), a_i (x) a_j^o -> (c -> a_i c a_j); Azumaya iff a nonzero constant.
AzumayaReport azumaya_check(const CenteredFreeAlgebra& a);

/// Matrix of a differential operator on H_n over the centre; needs a heisenberg_charp algebra.
OperatorMatrix to_operator_matrix(const DOperator& d, const CenteredFreeAlgebra& a);
/// Coordinates of an element of H_n in the basis of a heisenberg_charp algebra.
std::vector<Poly> coordinates_of(const HElement& x, const CenteredFreeAlgebra& a);

}  // namespace diffalg
