#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsc/storage.hpp"
#include "fsc/subspace.hpp"

namespace fsc::group {

/// Invertible linear map of F_q^m acting on row vectors: v -> v * M.
class LinearMap {
 public:
  /// Throws std::invalid_argument unless the matrix is square and invertible.
  LinearMap(const Field& f, Matrix matrix);
  static LinearMap identity(const Field& f, std::size_t m);

  const Field& field() const noexcept { return *field_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  /// Row-major entries as bytes (two per entry when q > 256).
  const std::string& key() const noexcept { return key_; }
  /// 16 hex digits of FNV-1a over key().
  std::string fingerprint() const;

  Vector apply(const Vector& v) const;
  Subspace apply(const Subspace& s) const;
  RepairingCollection apply(const RepairingCollection& c) const;

  LinearMap inverse() const;
  /// Matrix power under composition.
  LinearMap power(long long n) const;

  /// (h * g)(v) = h(g(v)); its matrix is M_g M_h.
  friend LinearMap operator*(const LinearMap& h, const LinearMap& g);
  friend bool operator==(const LinearMap& a, const LinearMap& b) { return a.key_ == b.key_; }
  friend bool operator<(const LinearMap& a, const LinearMap& b) { return a.key_ < b.key_; }

 private:
  LinearMap(const Field& f, Matrix matrix, bool checked);
  void build_key();

  const Field* field_;
  Matrix matrix_;
  std::string key_;
};

/// Group generated by a set of maps, closed by breadth-first search.
struct GroupClosure {
  std::vector<LinearMap> generators;
  /// BFS order starting from the identity.
  std::vector<LinearMap> elements;
  /// False when the closure stopped at the cap; then order() is only a lower bound.
  bool complete = false;
  std::size_t cap = 0;

  std::size_t order() const { return elements.size(); }
  bool contains(const LinearMap& g) const;
};

struct SearchLimits {
  std::uint64_t max_nodes = 10000000;
  std::size_t group_cap = 1000000;
  std::size_t orbit_cap = 100000;
};

/// All invertible L with L(sources[j]) = targets[pi(j)] for some bijection pi,
/// optionally pinning sources[j] -> targets[j] for j in `pinned`. Backtracks over
/// bijections, then over images of an adapted basis. Sorted by key, deduplicated.
std::vector<LinearMap> find_set_maps(std::span<const Subspace> sources, std::span<const Subspace> targets,
                                     std::span<const std::size_t> pinned = {}, const SearchLimits& limits = {});

/// All invertible L mapping the collection onto the collection with member i
/// replaced by the newcomer (as multisets).
std::vector<LinearMap> find_transition_maps(const RepairingCollection& collection, const Subspace& newcomer,
                                            std::size_t i, const SearchLimits& limits = {});

/// Same result by running through all of GL(m, q); feasible only for tiny m, q.
std::vector<LinearMap> find_transition_maps_exhaustive(const RepairingCollection& collection,
                                                       const Subspace& newcomer, std::size_t i);

/// Every invertible m x m matrix over GF(q), for q^(m*m) <= 2^25.
std::vector<LinearMap> general_linear_group(const Field& f, std::size_t m);

struct Stabilizer {
  GroupClosure group;
  /// The induced action on collection members is transitive.
  bool transitive = false;
  /// First element (in key order) inducing a full cycle on the members, if any.
  std::optional<LinearMap> cycle;
};

/// All L fixing the collection setwise and the newcomer.
Stabilizer stabilizer(const RepairingCollection& collection, const Subspace& newcomer,
                      const SearchLimits& limits = {});

/// Permutation of member indices induced by L (L(c[i]) = c[perm[i]]), or nullopt if
/// L does not preserve the collection.
std::optional<std::vector<std::size_t>> induced_permutation(const LinearMap& l, const RepairingCollection& c);

/// BFS closure under right multiplication by the generators. Stops at cap with
/// complete = false rather than throwing.
GroupClosure generate_group(std::span<const LinearMap> generators, std::size_t cap = 1000000);

/// Orbit of the seed under the group (deduplicated), verified with the repair
/// property. Throws VerificationFailure with the failing collection otherwise, and
/// std::invalid_argument for an incomplete group.
StateSet orbit_code(const GroupClosure& g, const RepairingCollection& seed, const CodeParams& params,
                    std::size_t orbit_cap = 100000);

/// Orbit without verification: BFS over generators.
std::vector<RepairingCollection> orbit(std::span<const LinearMap> generators, const RepairingCollection& seed,
                                       std::size_t cap);

struct SeedState {
  RepairingCollection collection;
  Subspace newcomer;
  CodeParams params;
};

struct SearchResult {
  GroupClosure group;
  StateSet states;
  LinearMap transition;
  /// Index of the transition's class L * Stab among the candidates.
  std::size_t candidate_class = 0;
};

struct SearchOutcome {
  std::vector<SearchResult> results;  // sorted by orbit size, then group order
  std::size_t candidate_maps = 0;
  /// Candidates up to right multiplication by the stabilizer (L ~ L * g).
  std::size_t candidate_classes = 0;
  bool stabilizer_transitive = false;
  std::size_t stabilizer_order = 0;
  /// One line per attempt: generator fingerprints, group order, orbit size, verdict.
  std::vector<std::string> log;
};

struct SearchOptions {
  SearchLimits limits;
  /// Stop after this many successes (0 = try every candidate).
  std::size_t max_results = 0;
};

/// Group-orbit search: for each transition map L, close <T, L> (T the stabilizer's
/// cycling element; the whole stabilizer when it is not transitive) and keep the
/// orbits of the seed that pass the repair property.
SearchOutcome ltgc_search(const SeedState& seed, const SearchOptions& options = {});

}  // namespace fsc::group
