#include <doctest.h>

#include <stdexcept>

#include "fsc/gf.hpp"
#include "fsc/random.hpp"

using namespace fsc;

namespace {

const int kSmallOrders[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32};

// Schoolbook product of base-p digit polynomials reduced by the modulus.
Elem reference_mul(const Field& f, Elem a, Elem b) {
  const int p = f.p(), e = f.e();
  std::vector<int> x(e), y(e), prod(2 * e, 0);
  for (int j = 0, u = a, v = b; j < e; ++j, u /= p, v /= p) {
    x[j] = u % p;
    y[j] = v % p;
  }
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
  const auto& mod = f.modulus();
  for (int d = 2 * e - 1; d >= e; --d) {
    const int c = prod[d];
    if (c == 0) continue;
    for (int j = 0; j <= e; ++j) prod[d - e + j] = ((prod[d - e + j] - c * mod[j]) % p + p) % p;
  }
  int out = 0;
  for (int d = e - 1; d >= 0; --d) out = out * p + prod[d];
  return static_cast<Elem>(out);
}

}  // namespace

TEST_CASE("interned fields and basic shape") {
  const Field& f8 = Field::get(2, 3);
  CHECK(&f8 == &Field::of_order(8));
  CHECK(f8.q() == 8);
  CHECK(f8.modulus() == std::vector<int>{1, 1, 0, 1});
  CHECK(f8.primitive() == 2);
  CHECK_THROWS_AS(Field::of_order(6), std::invalid_argument);
  CHECK_THROWS_AS(f8.element(8), std::out_of_range);
}

TEST_CASE("moduli are irreducible") {
  for (int q : {4, 8, 9, 16, 25, 27, 32, 49, 64, 81, 125, 128, 256, 1024, 4096}) {
    const Field& f = Field::of_order(q);
    CHECK(is_irreducible(f.modulus(), f.p()));
  }
  CHECK_FALSE(is_irreducible({1, 0, 1}, 2));
  CHECK(is_irreducible({1, 1, 1}, 2));
}

TEST_CASE("multiplication matches schoolbook reduction") {
  for (int q : kSmallOrders) {
    const Field& f = Field::of_order(q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) REQUIRE(f.mul(a, b) == reference_mul(f, a, b));
  }
  Rng rng(7);
  for (int q : {256, 729, 4096}) {
    const Field& f = Field::of_order(q);
    for (int t = 0; t < 20000; ++t) {
      const Elem a = uniform_index(rng, q), b = uniform_index(rng, q);
      REQUIRE(f.mul(a, b) == reference_mul(f, a, b));
    }
  }
}

TEST_CASE("field axioms hold exhaustively on small fields") {
  for (int q : kSmallOrders) {
    const Field& f = Field::of_order(q);
    for (int a = 0; a < q; ++a) {
      REQUIRE(f.add(a, 0) == a);
      REQUIRE(f.mul(a, 1) == a);
      REQUIRE(f.add(a, f.neg(a)) == 0);
      if (a != 0) REQUIRE(f.mul(a, f.inv(a)) == 1);
      for (int b = 0; b < q; ++b) {
        REQUIRE(f.add(a, b) == f.add(b, a));
        REQUIRE(f.mul(a, b) == f.mul(b, a));
        REQUIRE(f.sub(f.add(a, b), b) == a);
        for (int c = 0; c < q; ++c) {
          REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
          REQUIRE(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
          REQUIRE(f.add(a, f.add(b, c)) == f.add(f.add(a, b), c));
        }
      }
    }
  }
}

TEST_CASE("primitive element generates the multiplicative group") {
  for (int q : {2, 3, 4, 8, 9, 16, 27, 64, 256}) {
    const Field& f = Field::of_order(q);
    std::vector<bool> seen(q, false);
    for (int k = 0; k < q - 1; ++k) {
      const Elem x = f.exp(k);
      REQUIRE_FALSE(seen[x]);
      seen[x] = true;
      REQUIRE(f.log(x) == k);
    }
    CHECK_FALSE(seen[0]);
  }
}

TEST_CASE("inverse of zero is an error") {
  CHECK_THROWS_AS(Field::of_order(8).inv(0), std::domain_error);
}

TEST_CASE("powers and Frobenius") {
  for (int q : {4, 8, 9, 16, 25, 27, 32}) {
    const Field& f = Field::of_order(q);
    for (int a = 0; a < q; ++a) {
      REQUIRE(f.pow(a, q) == a);
      REQUIRE(f.frobenius(a, f.e()) == a);
      REQUIRE(f.frobenius(a, 1) == f.pow(a, f.p()));
      if (a != 0) REQUIRE(f.mul(f.pow(a, -3), f.pow(a, 3)) == 1);
      for (int b = 0; b < q; ++b) {
        REQUIRE(f.frobenius(f.add(a, b), 1) == f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        REQUIRE(f.frobenius(f.mul(a, b), 1) == f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
      }
    }
  }
}

TEST_CASE("GF(8) with alpha^3 = alpha + 1") {
  const Field& f = Field::get(2, 3);
  CHECK(f.exp(3) == f.add(2, 1));
  CHECK(f.exp(7) == 1);
  FieldElement a(f, 2);
  CHECK(a.pow(3) == a + FieldElement(f, 1));
  CHECK(a * a.inv() == FieldElement(f, 1));
  CHECK_THROWS_AS(a + FieldElement(Field::get(2, 2), 1), std::invalid_argument);
}
