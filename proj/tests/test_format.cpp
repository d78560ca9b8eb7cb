#include <doctest.h>

#include <stdexcept>

#include "fsc/error.hpp"
#include "fsc/fsc_format.hpp"
#include "fsc/partition_code.hpp"

using namespace fsc;
using namespace fsc::format;

namespace {

const std::string kFixtures = FSC_FIXTURES;

const char* kHeader = "FSC 1\nfield 2 1\nambient 3\n";

std::size_t error_line(const std::string& text) {
  try {
    parse_fsc(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("fixture round trips") {
  for (const char* name : {"example1.fsc", "example1_corrupt.fsc", "partition_seed.fsc"}) {
    CAPTURE(name);
    const auto doc = parse_fsc(read_file(kFixtures + "/" + name));
    const auto text = emit_fsc(doc);
    const auto again = parse_fsc(text);
    CHECK(again == doc);
    CHECK(emit_fsc(again) == text);
  }
}

TEST_CASE("example fixture contents") {
  const auto doc = parse_fsc(read_file(kFixtures + "/example1.fsc"));
  CHECK(doc.m == 4);
  CHECK(doc.subspaces.size() == 7);
  CHECK(doc.collections.size() == 4);
  CHECK(doc.states.size() == 4);
  REQUIRE(doc.witnesses.size() == 1);
  CHECK(doc.witnesses[0].parts.size() == 3);
  const StateSet a = to_state_set(doc);
  CHECK(a.size() == 4);
  CHECK(a.transitions().size() == 4);
  CHECK(check_repair_property(a).passed);
}

TEST_CASE("equal documents emit identical text") {
  const std::string a = std::string(kHeader) +
                        "subspace B\nrow 0 1 1\nrow 1 1 0\nend\nsubspace A\nrow 1 0 0\nend\n";
  const std::string b = std::string(kHeader) +
                        "# same spaces, other order and bases\nsubspace A\nrow   1 0 0\nend\n"
                        "subspace B\nrow 1 0 1\nrow 0 1 1\nend\n";
  CHECK(emit_fsc(parse_fsc(a)) == emit_fsc(parse_fsc(b)));
}

TEST_CASE("collections without states are valid") {
  const std::string text = std::string(kHeader) + "params 3 2 2 1 1\nsubspace A\nrow 1 0 0\nend\n"
                           "subspace B\nrow 0 1 0\nend\ncollection C A B\n";
  const auto doc = parse_fsc(text);
  CHECK(doc.states.empty());
  CHECK(to_state_set(doc).size() == 1);
}

TEST_CASE("state sets convert to documents and back") {
  const StateSet a = partition::code_states();
  const auto doc = from_state_set(a);
  CHECK(doc.collections.size() == 56);
  const StateSet b = to_state_set(parse_fsc(emit_fsc(doc)));
  CHECK(b.key_set() == a.key_set());
  CHECK(b.params() == a.params());
}

TEST_CASE("parse errors carry the offending line") {
  CHECK(error_line("FSC 2\n") == 1);
  CHECK(error_line("FSC 1\nfield 2 13\n") == 2);
  CHECK(error_line("FSC 1\nfield 6 1\n") == 2);
  CHECK(error_line(std::string(kHeader) + "subspace A\nrow 1 0\nend\n") == 5);
  CHECK(error_line(std::string(kHeader) + "subspace A\nrow 1 0 2\nend\n") == 5);
  CHECK(error_line(std::string(kHeader) + "params 3 2 2 1 1\ncollection C A B\n") == 5);
  CHECK(error_line(std::string(kHeader) + "map M\nrow 1 0 0\nrow 1 0 0\nrow 0 0 1\nend\n") == 8);
  CHECK(error_line(std::string(kHeader) + "subspace A\nrow 1 0 0\nend\nsubspace A\nrow 0 1 0\nend\n") == 7);
  CHECK(error_line(std::string(kHeader) + "subspace A\nrow 1 0 0\n") > 0);
  CHECK(error_line("subspace A\n") == 1);
  CHECK(error_line(std::string(kHeader) + "bogus\n") == 4);
  CHECK(error_line(std::string(kHeader) + "params 3 2 2 2 1\nsubspace A\nrow 1 0 0\nend\n"
                                          "subspace B\nrow 0 1 0\nend\ncollection C A B\n") == 11);
}

TEST_CASE("parse error columns") {
  try {
    parse_fsc(std::string(kHeader) + "subspace A\nrow 1 0 9\nend\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(e.column() == 9);
  }
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(read_file(kFixtures + "/no_such_file.fsc"), std::runtime_error);
}
