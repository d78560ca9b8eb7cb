#include <doctest.h>

#include <stdexcept>

#include "fsc/error.hpp"
#include "fsc/linalg.hpp"
#include "fsc/subspace.hpp"
#include "oracle.hpp"

using namespace fsc;

TEST_CASE("packed GF(2) elimination agrees with the generic path") {
  const Field& f = Field::of_order(2);
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const std::size_t rows = 1 + uniform_index(rng, 12), cols = 1 + uniform_index(rng, 64);
    Matrix a(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) a(r, c) = uniform_index(rng, 2);
    Matrix b = a;
    const auto pa = linalg::rref(f, a);
    const auto pb = linalg::rref_generic(f, b);
    REQUIRE(pa == pb);
    REQUIRE(a == b);
  }
}

TEST_CASE("inverse, solve and kernel") {
  Rng rng(3);
  for (int q : {2, 3, 4, 7, 8, 9}) {
    const Field& f = Field::of_order(q);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + uniform_index(rng, 5);
      Matrix a(n, n);
      for (auto r = 0u; r < n; ++r)
        for (auto c = 0u; c < n; ++c) a(r, c) = uniform_index(rng, q);
      const auto inv = linalg::inverse(f, a);
      CHECK(inv.has_value() == (linalg::rank(f, a) == n));
      if (inv) CHECK(linalg::multiply(f, a, *inv) == Matrix::identity(n));
      const Matrix k = linalg::left_kernel(f, a);
      CHECK(k.rows() + linalg::rank(f, a) == n);
      for (std::size_t r = 0; r < k.rows(); ++r) {
        Matrix row(0, n);
        row.append_row(k.row(r));
        CHECK(linalg::multiply(f, row, a) == Matrix(1, n));
      }
      std::vector<Elem> y(n, 0);
      for (std::size_t r = 0; r < n; ++r) linalg::axpy(f, y, a.row(r), static_cast<Elem>(r % q));
      const auto x = linalg::solve_left(f, a, y);
      REQUIRE(x.has_value());
      std::vector<Elem> back(n, 0);
      for (std::size_t r = 0; r < n; ++r) linalg::axpy(f, back, a.row(r), (*x)[r]);
      CHECK(back == y);
    }
  }
}

TEST_CASE("subspaces compare by canonical basis") {
  const Field& f = Field::of_order(2);
  const auto a = Subspace::span(f, 4, {Vector(f, {1, 0, 0, 1}), Vector(f, {0, 1, 0, 1})});
  const auto b = Subspace::span(f, 4, {Vector(f, {1, 1, 0, 0}), Vector(f, {1, 0, 0, 1})});
  CHECK(a == b);
  CHECK(a.key() == b.key());
  CHECK(a.dim() == 2);
  CHECK(a.contains(Vector(f, {1, 1, 0, 0})));
  CHECK_FALSE(a.contains(Vector(f, {0, 0, 1, 0})));
  CHECK(Subspace(f, 4).dim() == 0);
  CHECK(Subspace::whole(f, 4).dim() == 4);
  CHECK_THROWS_AS(require_same_ambient(a, Subspace(f, 3)), std::invalid_argument);
  CHECK_THROWS_AS(require_same_ambient(a, Subspace(Field::of_order(3), 4)), std::invalid_argument);
}

TEST_CASE("coordinates and combine are inverse") {
  const Field& f = Field::of_order(9);
  Rng rng(5);
  oracle::VectorSpace vs(f, 3);
  for (int t = 0; t < 50; ++t) {
    const auto s = vs.random_subspace(rng, 2);
    for_each_vector(s, [&](const Vector& v) { REQUIRE(s.combine(s.coordinates(v.coords())) == v); });
  }
}

TEST_CASE("vector enumeration respects its cap") {
  const Field& f = Field::of_order(2);
  CHECK(vectors(Subspace::whole(f, 6)).size() == 64);
  CHECK_THROWS_AS(vectors(Subspace::whole(f, 6), 10), CapExceeded);
  CHECK_THROWS_AS(enumerate_subspaces(f, 10, 5, 1000), CapExceeded);
}

TEST_CASE("Gaussian binomials") {
  CHECK(gaussian_binomial(2, 5, 2) == 155);
  CHECK(gaussian_binomial(2, 4, 2) == 35);
  CHECK(gaussian_binomial(3, 3, 1) == 13);
  CHECK(gaussian_binomial(2, 5, 0) == 1);
  CHECK(gaussian_binomial(2, 5, 6) == 0);
  CHECK(subspaces_of(Subspace::whole(Field::of_order(2), 5), 2).size() == 155);
}

TEST_CASE("intersections, sums, enumeration and distances match vector-set oracles") {
  std::uint64_t seed = 1;
  for (const auto& [q, m] : oracle::small_shapes()) {
    CAPTURE(q);
    CAPTURE(m);
    const auto c = oracle::compare_shape(q, m, seed++, 10);
    CHECK(c.mismatches == 0);
  }
}
