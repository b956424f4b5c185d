#include <doctest.h>

#include "support.hpp"

using namespace diffalg;
using testing_support::Gen;

namespace {

PolyRing ring_t(std::uint32_t p) { return PolyRing({"t"}, Field::of_characteristic(p)); }

bool associative(const CenteredFreeAlgebra& a) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const auto ai = a.basis_vector(i), aj = a.basis_vector(j), ak = a.basis_vector(k);
        if (a.multiply(a.multiply(ai, aj), ak) != a.multiply(ai, a.multiply(aj, ak))) return false;
      }
  return true;
}

std::vector<Poly> random_vector(Gen& g, const CenteredFreeAlgebra& a) {
  std::vector<Poly> v;
  for (std::size_t i = 0; i < a.dim(); ++i) v.push_back(g.poly(a.ring(), 2, 3));
  return v;
}

}  // namespace

TEST_CASE("matrix algebra builder") {
  const PolyRing r = ring_t(3);
  CHECK(build_matrix_algebra(1, r).dim() == 1);
  const auto m2 = build_matrix_algebra(2, r);
  REQUIRE(m2.dim() == 4);
  CHECK(m2.basis_names()[0] == "1");
  for (std::size_t i = 0; i < 4; ++i) CHECK(m2.multiply(m2.basis_vector(0), m2.basis_vector(i)) == m2.basis_vector(i));
  CHECK(associative(m2));
  const auto m3 = build_matrix_algebra(3, PolyRing({"t"}, Field::rationals()));
  CHECK(m3.dim() == 9);
  CHECK(associative(m3));
}

TEST_CASE("heisenberg builder") {
  const auto a = build_heisenberg_charp(1, 2);
  REQUIRE(a.dim() == 4);
  CHECK(a.ring().size() == 3);
  // x * x = X * 1
  std::size_t xi = 0, yi = 0, xyi = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.basis_names()[i] == "x1") xi = i;
    if (a.basis_names()[i] == "y1") yi = i;
    if (a.basis_names()[i] == "x1*y1") xyi = i;
  }
  REQUIRE(xi != 0);
  const auto xx = a.multiply(a.basis_vector(xi), a.basis_vector(xi));
  CHECK(xx[0] == Poly::variable(a.ring(), 1));
  for (std::size_t k = 1; k < a.dim(); ++k) CHECK(xx[k].is_zero());
  // y * x = x y - h
  const auto yx = a.multiply(a.basis_vector(yi), a.basis_vector(xi));
  CHECK(yx[xyi] == Poly::constant(a.ring(), 1));
  CHECK(yx[0] == -Poly::variable(a.ring(), 0));
  // centre variables commute with everything
  for (std::size_t v = 0; v < a.ring().size(); ++v) {
    std::vector<Poly> z(a.dim(), Poly(a.ring()));
    z[0] = Poly::variable(a.ring(), v);
    for (std::size_t i = 0; i < a.dim(); ++i)
      CHECK(a.multiply(z, a.basis_vector(i)) == a.multiply(a.basis_vector(i), z));
  }
  CHECK(associative(build_heisenberg_charp(1, 3)));
}

TEST_CASE("dual basis and wp") {
  Gen g(31);
  const auto a = build_matrix_algebra(2, ring_t(3));
  for (int t = 0; t < 20; ++t) {
    const auto v = random_vector(g, a);
    std::vector<Poly> sum(a.dim(), Poly(a.ring()));
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const auto bi = a.basis_vector(i);
      for (std::size_t k = 0; k < a.dim(); ++k) sum[k] += v[i] * bi[k];
    }
    CHECK(sum == v);
  }
  OperatorMatrix total(a.ring(), a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    CHECK(wp(k, k, a).apply(a.basis_vector(k)) == a.basis_vector(k));
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (j != k) CHECK(wp(1, k, a).apply(a.basis_vector(j)) == std::vector<Poly>(a.dim(), Poly(a.ring())));
    total += wp(k, k, a);
  }
  CHECK(total == tilde_extend(PDOp::identity(a.ring()), a));
  CHECK_THROWS_AS(wp(4, 0, a), Error);
}

TEST_CASE("tilde extension") {
  const auto a = build_matrix_algebra(2, ring_t(3));
  const PolyRing& r = a.ring();
  const auto t = Poly::variable(r, 0);
  const auto tt = tilde_extend(PDOp::multiplication(t), a);
  std::vector<Poly> tv(a.dim(), Poly(r));
  tv[0] = t;
  CHECK(tt == lambda_matrix(a, tv));
  for (int m = 0; m <= 3; ++m) {
    CHECK(order_check(tilde_extend(PDOp::partial(r, 0, m), a), m));
    if (m > 0) CHECK(!order_check(tilde_extend(PDOp::partial(r, 0, m), a), m - 1));
  }
  Gen g(32);
  for (int i = 0; i < 30; ++i) {
    const auto phi = g.pdop(r, 3, 3, 3);
    CHECK(phi_ij(tilde_extend(phi, a), 0, 0, a) == phi);
    CHECK(zeta_elem(tilde_extend(phi, a), a) == phi);
    CHECK(bar_extend(phi, a) == tilde_extend(phi, a));
    // restriction: on R the extension acts as phi
    std::vector<Poly> v(a.dim(), Poly(r));
    v[0] = g.poly(r, 3, 4);
    CHECK(tilde_extend(phi, a).apply(v)[0] == p_apply(phi, v[0]));
  }
}

TEST_CASE("phi_ij") {
  const auto a = build_matrix_algebra(2, ring_t(3));
  const PolyRing& r = a.ring();
  for (std::size_t l = 1; l < a.dim(); ++l)
    for (std::size_t k = 1; k < a.dim(); ++k) CHECK(zeta_elem(wp(l, k, a), a).is_zero());
  // wp(l, k) components are multiplication operators given by the structure constants
  for (std::size_t l = 0; l < a.dim(); ++l)
    for (std::size_t k = 0; k < a.dim(); ++k)
      for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
          const Poly expect = i == l ? a.constant(0, j, k) : Poly(r);
          CHECK(phi_ij(wp(l, k, a), i, j, a) == PDOp::multiplication(expect));
        }
  Gen g(33);
  for (int t = 0; t < 20; ++t) {
    const auto m = g.op_matrix(a, 1, 2, 2);
    const auto rr = g.poly(r, 2, 2), ss = g.poly(r, 2, 2);
    const auto rm = PDOp::multiplication(rr), sm = PDOp::multiplication(ss);
    const auto scaled = compose(compose(tilde_extend(rm, a), m), tilde_extend(sm, a));
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j)
        CHECK(p_compose(p_compose(rm, phi_ij(m, i, j, a)), sm) == phi_ij(scaled, i, j, a));
  }
}

TEST_CASE("bracket identity for the extension") {
  // [tilde(phi), lambda_{a_j}] = sum_{i,k} tilde([phi, r_{j,i}^k]) wp(k, i)
  Gen g(34);
  const auto a = build_matrix_algebra(2, ring_t(3));
  for (int t = 0; t < 10; ++t) {
    const auto phi = g.pdop(a.ring(), 3, 2, 3);
    for (std::size_t j = 0; j < a.dim(); ++j) {
      OperatorMatrix rhs(a.ring(), a.dim());
      for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < a.dim(); ++k)
          rhs += compose(tilde_extend(p_commutator(phi, PDOp::multiplication(a.constant(j, i, k))), a), wp(k, i, a));
      CHECK(commutator(tilde_extend(phi, a), lambda_matrix(a, a.basis_vector(j))) == rhs);
    }
  }
}

TEST_CASE("decompose and reconstruct") {
  const auto a = build_matrix_algebra(2, ring_t(3));
  for (std::size_t l = 0; l < a.dim(); ++l)
    for (std::size_t k = 0; k < a.dim(); ++k) CHECK(reconstruct(decompose(wp(l, k, a), a), a) == wp(l, k, a));
  const auto d = tilde_extend(PDOp::partial(a.ring(), 0), a);
  CHECK(reconstruct(decompose(d, a), a) == d);
  Gen g(35);
  const auto h = build_heisenberg_charp(1, 2);
  for (int t = 0; t < 40; ++t) {
    const auto& alg = t % 2 ? a : h;
    const auto m = g.op_matrix(alg, 2, 2, 2);
    CHECK(reconstruct(decompose(m, alg), alg) == m);
  }
}

TEST_CASE("order_check on matrices") {
  const auto a = build_matrix_algebra(2, ring_t(3));
  CHECK(order_check(wp(1, 2, a), 0));
  CHECK(!order_check(tilde_extend(PDOp::partial(a.ring(), 0), a), 0));
  Gen g(36);
  for (int t = 0; t < 20; ++t) {
    const auto m1 = g.op_matrix(a, 1, 2, 2), m2 = g.op_matrix(a, 1, 2, 2);
    int o1 = 0, o2 = 0;
    while (!order_check(m1, o1)) ++o1;
    while (!order_check(m2, o2)) ++o2;
    CHECK(order_check(compose(m1, m2), o1 + o2));
    // entries of order <= m give a matrix of order <= m and conversely
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j) CHECK(grothendieck_order_check(m1.at(i, j), o1));
  }
}

TEST_CASE("eta generators") {
  const auto a = build_matrix_algebra(2, ring_t(3));
  Gen g(37);
  std::vector<PDOp> gens;
  for (int i = 0; i < 4; ++i) gens.push_back(g.pdop(a.ring(), 2, 2, 2));
  const auto etas = eta_gens(gens, a);
  REQUIRE(etas.size() == gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) CHECK(zeta_elem(etas[i], a) == gens[i]);
}

TEST_CASE("azumaya_check") {
  CHECK(azumaya_check(build_matrix_algebra(2, ring_t(3))).azumaya);
  CHECK(azumaya_check(build_matrix_algebra(1, ring_t(3))).azumaya);
  const auto dual = azumaya_check(build_dual_numbers(ring_t(3)));
  CHECK(!dual.azumaya);
  CHECK(dual.determinant.is_zero());
  CHECK(azumaya_check(build_heisenberg_charp(1, 2, Mode::weyl)).azumaya);
  CHECK(azumaya_check(build_heisenberg_charp(1, 3, Mode::weyl)).azumaya);
  // The Heisenberg algebra degenerates where h vanishes.
  const auto h = azumaya_check(build_heisenberg_charp(1, 2));
  CHECK(!h.azumaya);
  CHECK(!h.determinant.is_zero());
  CHECK(h.determinant.exact_divide(Poly::variable(h.determinant.ring(), 0)).has_value());
}

TEST_CASE("json structure constants") {
  const std::string text = R"({"dim": 2, "vars": ["t"], "char": 3, "basis": ["1", "e"],
    "table": [[["1", "0"], ["0", "1"]], [["0", "1"], ["t", "0"]]]})";
  const auto a = load_free_algebra_json(text);
  CHECK(a.dim() == 2);
  CHECK(a.basis_names()[1] == "e");
  CHECK(a.multiply(a.basis_vector(1), a.basis_vector(1))[0] == Poly::variable(a.ring(), 0));
  CHECK_THROWS_AS(load_free_algebra_json(R"({"dim": 2, "vars": ["t"], "char": 3,
    "table": [[["0", "0"], ["0", "1"]], [["0", "1"], ["t", "0"]]]})"), Error);
  CHECK_THROWS_AS(load_free_algebra_json("{"), Error);
}

TEST_CASE("operators on H_1 in characteristic p as matrices") {
  for (std::uint32_t p : {2u, 3u}) {
    const auto a = build_heisenberg_charp(1, p);
    const HContext& c = *a.heisenberg_source;
    // tilde of the h partials
    for (int m = 1; m <= static_cast<int>(p); ++m) {
      const auto dh = tilde_extend(PDOp::partial(a.ring(), 0, m), a);
      CHECK(order_check(dh, m));
      CHECK(!order_check(dh, m - 1));
    }
    std::vector<DOperator> gens{lambda_of(HElement::generator(c, Generator::x(1))),
                                lambda_of(HElement::generator(c, Generator::y(1))),
                                lambda_of(HElement::generator(c, Generator::h())),
                                DOperator::partial(c, Generator::h()),
                                DOperator::partial(c, Generator::x(1)),
                                DOperator::partial(c, Generator::y(1)),
                                DOperator::partial(c, Generator::x(1), static_cast<int>(p)),
                                DOperator::partial(c, Generator::h(), 2)};
    Gen g(38 + p);
    for (const auto& d : gens) {
      const auto m = to_operator_matrix(d, a);
      for (int t = 0; t < 5; ++t) {
        const auto x = g.element(c, 3, 2 * static_cast<int>(p), 2);
        CHECK(m.apply(coordinates_of(x, a)) == coordinates_of(apply(d, x), a));
      }
    }
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < gens.size(); ++j)
        CHECK(to_operator_matrix(compose(gens[i], gens[j]), a) ==
              compose(to_operator_matrix(gens[i], a), to_operator_matrix(gens[j], a)));
  }
}
