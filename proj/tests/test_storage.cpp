#include <doctest.h>

#include <stdexcept>

#include <algorithm>

#include "example1.hpp"
#include "fsc/error.hpp"
#include "fsc/storage.hpp"

using namespace fsc;

namespace {

RepairingCollection survivors(const std::vector<Subspace>& nodes, std::size_t failed) {
  std::vector<Subspace> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (i != failed) out.push_back(nodes[i]);
  return RepairingCollection(out);
}

}  // namespace

TEST_CASE("parameters are validated") {
  CHECK_NOTHROW(example1::params().validate());
  CodeParams bad = example1::params();
  bad.beta = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = example1::params();
  bad.k = 5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(example1::params().rate() == doctest::Approx(0.5));
}

TEST_CASE("collection keys ignore member order") {
  const auto nodes = example1::nodes();
  const RepairingCollection a({nodes[0], nodes[1], nodes[2]});
  const RepairingCollection b({nodes[2], nodes[0], nodes[1]});
  CHECK(a == b);
  CHECK(a.key() == collection_key_with(b.spaces(), 0, nodes[2]));
  CHECK_FALSE(a.has_duplicates());
  CHECK(RepairingCollection({nodes[0], nodes[0], nodes[1]}).has_duplicates());
  CHECK(RepairingCollection({nodes[0], nodes[0], nodes[1]}) != RepairingCollection({nodes[0], nodes[1], nodes[1]}));
}

TEST_CASE("recovery sets of the four node spaces") {
  const auto nodes = example1::nodes();
  CHECK(recovery_dimension(nodes, 4) == 2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) CHECK(is_recovery_set(std::vector{nodes[i], nodes[j]}, 4));
  CHECK_FALSE(is_recovery_set(std::vector{nodes[0]}, 4));
  CHECK(spanning_subset(nodes, 2, 4) == std::vector<std::size_t>{0, 1});
  const Field& f = example1::field();
  const auto line = Subspace::span(f, 4, {Vector(f, {1, 0, 0, 0})});
  CHECK_THROWS_AS(recovery_dimension(std::vector{line, line}, 4), VerificationFailure);
}

TEST_CASE("exact-repair code passes the repair property") {
  const auto nodes = example1::nodes();
  const StateSet a = exact_to_states(nodes, example1::params());
  CHECK(a.size() == 4);
  VerifyOptions full;
  full.full = true;
  const auto report = check_repair_property(a, full);
  CHECK(report.passed);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto* c = report.find(survivors(nodes, i).key());
    REQUIRE(c != nullptr);
    CHECK(c->ok());
    CHECK(std::find(c->valid_newcomers.begin(), c->valid_newcomers.end(), nodes[i]) != c->valid_newcomers.end());
  }
}

TEST_CASE("witness for the documented repair of node 0") {
  const auto nodes = example1::nodes();
  const auto c = survivors(nodes, 0);
  const auto w = find_witness(c, nodes[0], example1::params());
  REQUIRE(w.has_value());
  CHECK(w->helpers.size() == 3);
  CHECK(verify_witness(c, nodes[0], *w, example1::params()));

  const Field& f = example1::field();
  RepairWitness documented;
  documented.helpers = {0, 1, 2};
  documented.repair_spaces = {Subspace::span(f, 4, {Vector(f, {1, 0, 0, 1})}),
                              Subspace::span(f, 4, {Vector(f, {0, 0, 1, 0})}),
                              Subspace::span(f, 4, {Vector(f, {0, 0, 0, 1})})};
  documented.coefficients = {{1, 0, 1}, {0, 1, 1}};
  CHECK(verify_witness(c, nodes[0], documented, example1::params()));
  documented.coefficients = {{1, 0, 0}, {0, 1, 1}};
  CHECK_FALSE(verify_witness(c, nodes[0], documented, example1::params()));

  const auto obtainable = obtainable_spaces(c, example1::params());
  CHECK(std::find(obtainable.begin(), obtainable.end(), nodes[0]) != obtainable.end());
  CHECK(std::is_sorted(obtainable.begin(), obtainable.end()));
}

TEST_CASE("a missing collection breaks the repair property") {
  const auto nodes = example1::nodes();
  StateSet a(example1::field(), example1::params());
  for (std::size_t i = 0; i < 3; ++i) a.insert(survivors(nodes, i));
  const auto report = check_repair_property(a);
  CHECK_FALSE(report.passed);
  REQUIRE(report.failing_key.has_value());
  CHECK_FALSE(report.failure_reason.empty());
}

TEST_CASE("state sets deduplicate and reject foreign spaces") {
  const auto nodes = example1::nodes();
  StateSet a(example1::field(), example1::params());
  CHECK(a.insert(survivors(nodes, 0)));
  CHECK_FALSE(a.insert(survivors(nodes, 0)));
  const Field& f3 = Field::of_order(3);
  CHECK_THROWS_AS(a.insert(RepairingCollection({Subspace::whole(f3, 4)})), std::invalid_argument);
}

TEST_CASE("single and multi-threaded verification agree") {
  const StateSet a = exact_to_states(example1::nodes(), example1::params());
  VerifyOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto r1 = check_repair_property(a, one), r4 = check_repair_property(a, many);
  CHECK(r1.passed == r4.passed);
  REQUIRE(r1.collections.size() == r4.collections.size());
  for (std::size_t i = 0; i < r1.collections.size(); ++i) CHECK(r1.collections[i].key == r4.collections[i].key);
}
