#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsc/groupsearch.hpp"
#include "fsc/storage.hpp"
#include "fsc/subspace.hpp"

namespace fsc::format {

// Line-oriented text format:
//
//   FSC 1
//   field P E
//   ambient M
//   params N K R ALPHA BETA
//   subspace NAME / row v1 .. vM / ... / end
//   map NAME / row ... (M rows) / end
//   collection NAME S1 S2 ...
//   state COLLECTION -> SUBSPACE
//   witness COLLECTION -> SUBSPACE : MEMBER=REPAIR ...
//
// '#' starts a comment. Field elements are integers 0..q-1 (base-p digits).

struct Witness {
  std::string collection;
  std::string newcomer;
  /// (member subspace name, repair subspace name), sorted.
  std::vector<std::pair<std::string, std::string>> parts;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct FscDocument {
  int p = 2;
  int e = 1;
  std::size_t m = 0;
  /// n, k, r, alpha, beta (m and q come from the lines above).
  std::optional<CodeParams> params;
  std::map<std::string, Subspace> subspaces;
  std::map<std::string, group::LinearMap> maps;
  /// Member names kept sorted; collections are multisets.
  std::map<std::string, std::vector<std::string>> collections;
  /// (collection, newcomer), sorted.
  std::vector<std::pair<std::string, std::string>> states;
  std::vector<Witness> witnesses;

  const Field& field() const { return Field::get(p, e); }

  friend bool operator==(const FscDocument& a, const FscDocument& b);
};

/// Throws ParseError with the line and column of the first problem.
FscDocument parse_fsc(const std::string& text);
/// Canonical text: sorted names, RREF rows, single spaces.
std::string emit_fsc(const FscDocument& doc);

/// Collections become the set A, states become transitions. Throws
/// std::invalid_argument without a params line.
StateSet to_state_set(const FscDocument& doc);
std::vector<Subspace> collection_spaces(const FscDocument& doc, const std::string& name);

/// Names subspaces S1.. and collections C1.. in key order (zero padded).
FscDocument from_state_set(const StateSet& states);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fsc::format
