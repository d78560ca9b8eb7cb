#include <doctest.h>

#include <stdexcept>

#include "fsc/error.hpp"
#include "fsc/family.hpp"
#include "ltmds.hpp"

using namespace fsc;
using namespace fsc::family;

TEST_CASE("m_rs, rate and cutset identities for r <= 10") {
  for (std::size_t r = 1; r <= 10; ++r) {
    for (std::size_t s = 0; s < r; ++s) {
      const auto p = family_params(r, s, 2);
      REQUIRE(m_rs(r, s) == cutset_bound(r, r, s + 1, 1));
      REQUIRE(p.m == m_rs(r, s));
      REQUIRE(2 * p.m * (r + 1) == (2 * r - s) * p.n * p.alpha);
      REQUIRE(p.rate() == doctest::Approx((r - s / 2.0) / (r + 1)));
      REQUIRE(good_span_target(r, s, s) == m_rs(r, s));
      REQUIRE(good_span_target(r, s, 0) == (r - s) * (s + 1));
    }
  }
  CHECK(m_rs(3, 1) == 5);
  CHECK(cutset_bound(3, 3, 2, 1) == 5);
  CHECK(cutset_bound(4, 3, 2, 1) == 5);
  CHECK_THROWS_AS(m_rs(2, 2), std::invalid_argument);
}

TEST_CASE("canonical good collections") {
  for (auto [r, s, q] : {std::tuple{3u, 1u, 2}, {2u, 1u, 2}, {4u, 1u, 3}, {3u, 2u, 2}, {4u, 2u, 3}, {5u, 2u, 4}}) {
    CAPTURE(r);
    CAPTURE(s);
    const auto spaces = construct_good(r, s, q);
    CHECK(spaces.size() == r);
    CHECK(spaces.front().ambient() == m_rs(r, s));
    CHECK(is_good(spaces, r, s));
  }
}

TEST_CASE("no binary [4,2,3] code, so the (4,1) family has no binary repair step") {
  const auto spaces = construct_good(4, 1, 2);
  CHECK(is_good(spaces, 4, 1));
  Rng rng(1);
  CHECK_THROWS_AS(random_choice(spaces, 4, 1, rng), std::invalid_argument);
  const auto t = ltmds::exhaustive(spaces, 4, 1);
  CHECK(t.cases > 0);
  CHECK(t.good == 0);
  CHECK(t.corrected_disagreements == 0);
}

TEST_CASE("goodness fails for a degenerate collection") {
  auto spaces = construct_good(3, 1, 2);
  spaces[2] = spaces[1];
  CHECK_FALSE(is_good(spaces, 3, 1));
  CHECK_THROWS_AS(is_good(std::span(spaces).first(2), 3, 1), std::invalid_argument);
}

TEST_CASE("MDS generators") {
  for (int q : {2, 3, 4, 5, 8}) {
    const Field& f = Field::of_order(q);
    for (std::size_t r = 1; r <= std::size_t(q) + 1 && r <= 6; ++r)
      for (std::size_t k = 1; k <= r; ++k) {
        const Matrix g = mds_generator(f, r, k);
        CHECK(mds_check(f, g, r, k, r - k + 1));
      }
  }
  CHECK_THROWS_AS(mds_generator(Field::of_order(2), 4, 2), std::invalid_argument);
}

TEST_CASE("replacement goodness versus the MDS condition on the canonical (3,1) collection") {
  const auto spaces = construct_good(3, 1, 2);
  const auto t = ltmds::exhaustive(spaces, 3, 1);
  CHECK(t.cases > 0);
  CHECK(t.good > 0);
  CHECK(t.corrected_disagreements == 0);
  CHECK(t.literal_disagreements > 0);
}

TEST_CASE("the separation condition is needed") {
  const auto spaces = construct_good(3, 1, 2);
  const Field& f = Field::of_order(2);
  const std::vector<Vector> w{Vector(f, {0, 0, 0, 1, 0}), Vector(f, {0, 0, 0, 0, 1}), Vector(f, {0, 0, 1, 0, 0})};
  for (std::size_t i = 0; i < 3; ++i) REQUIRE(spaces[i].contains(w[i]));
  const auto u = Subspace::span(f, 5, {w[0] + w[2], w[1] + w[2]});
  const auto sides = ltmds_sides(spaces, w, u, 3, 1);
  CHECK(sides.independent_and_mds);
  CHECK_FALSE(sides.separated);
  CHECK_FALSE(sides.replacements_good);
  CHECK_FALSE(verify_ltmds(spaces, w, u, 3, 1));
}

TEST_CASE("corrected condition on further shapes") {
  for (auto [r, s, q] : {std::tuple{2u, 1u, 2}, {3u, 2u, 2}, {4u, 1u, 3}}) {
    const auto t = ltmds::exhaustive(construct_good(r, s, q), r, s);
    CAPTURE(r);
    CAPTURE(s);
    CHECK(t.corrected_disagreements == 0);
  }
}

TEST_CASE("a thousand family steps stay good") {
  for (auto [r, s, q] : {std::tuple{3u, 1u, 2}, {4u, 1u, 3}, {3u, 2u, 2}}) {
    Rng rng(2024);
    std::vector<Subspace> current = construct_good(r, s, q);
    for (int i = 0; i < 1000; ++i) {
      const auto choice = random_choice(current, r, s, rng);
      const auto step = family_step(current, r, s, choice);
      REQUIRE(step.newcomer.dim() == s + 1);
      REQUIRE(step.code.is_mds());
      for (const auto& rep : step.replacements) REQUIRE(is_good(rep, r, s));
      current = step.replacements[uniform_index(rng, r)];
    }
  }
}

TEST_CASE("family step rejects unseparated choices") {
  const auto spaces = construct_good(3, 1, 2);
  const Field& f = Field::of_order(2);
  FamilyChoice choice{{Vector(f, {0, 0, 0, 1, 0}), Vector(f, {0, 0, 0, 0, 1}), Vector(f, {0, 0, 1, 0, 0})},
                      mds_generator(f, 3, 2)};
  CHECK_THROWS_AS(family_step(spaces, 3, 1, choice), std::invalid_argument);
}

TEST_CASE("repair codes and distances") {
  const Field& f = Field::of_order(2);
  const auto even = Subspace::span(f, 3, {Vector(f, {1, 1, 0}), Vector(f, {0, 1, 1})});
  CHECK(min_distance(even) == 2u);
  CHECK_FALSE(min_distance(Subspace(f, 3)).has_value());
  CHECK(min_distance(Subspace::whole(f, 3)) == 1u);
}

TEST_CASE("closure of the (3,1) family is every good collection") {
  const auto seed = construct_good(3, 1, 2);
  const StateSet closure = family_closure(seed, 3, 1);
  const StateSet all = all_good_collections(Field::of_order(2), 3, 1);
  CHECK(closure.size() == 208320);
  CHECK(closure.key_set() == all.key_set());
  CHECK_THROWS_AS(family_closure(seed, 3, 1, 1000), CapExceeded);
}

TEST_CASE("closure of the (2,1) family verifies") {
  const auto seed = construct_good(2, 1, 2);
  const StateSet closure = family_closure(seed, 2, 1);
  CHECK(closure.key_set() == all_good_collections(Field::of_order(2), 2, 1).key_set());
  CHECK(check_repair_property(closure).passed);
}
