#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "fsc/subspace.hpp"

namespace fsc {

/// (m; n, k, r, alpha, beta) over GF(q).
struct CodeParams {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t r = 0;
  std::size_t alpha = 0;
  std::size_t beta = 0;
  int q = 2;

  /// m / (n alpha)
  double rate() const { return static_cast<double>(m) / static_cast<double>(n * alpha); }
  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

/// The n-1 surviving node spaces after a failure, as a multiset.
///
/// Member order is kept (it is the index order used by repair), while the key is
/// built from the sorted member keys so it does not depend on that order.
class RepairingCollection {
 public:
  explicit RepairingCollection(std::vector<Subspace> spaces);

  std::size_t size() const noexcept { return spaces_.size(); }
  const Subspace& operator[](std::size_t i) const noexcept { return spaces_[i]; }
  const std::vector<Subspace>& spaces() const noexcept { return spaces_; }
  const std::string& key() const noexcept { return key_; }
  bool has_duplicates() const;

  /// The collection with member i replaced by u.
  RepairingCollection replaced(std::size_t i, const Subspace& u) const;

  friend bool operator==(const RepairingCollection& a, const RepairingCollection& b) { return a.key_ == b.key_; }
  friend bool operator<(const RepairingCollection& a, const RepairingCollection& b) { return a.key_ < b.key_; }

 private:
  std::vector<Subspace> spaces_;
  std::string key_;
};

/// Key of the multiset obtained from `spaces` by replacing member `skip` with `extra`,
/// without materialising the collection.
std::string collection_key_with(std::span<const Subspace> spaces, std::size_t skip, const Subspace& extra);

/// Proof that a newcomer is obtainable by (r, beta)-repair: helper indices into the
/// collection, one beta-dim repair space per helper, and for each newcomer basis row
/// its coefficients over the concatenated repair-space bases.
struct RepairWitness {
  std::vector<std::size_t> helpers;
  std::vector<Subspace> repair_spaces;
  std::vector<std::vector<Elem>> coefficients;
};

struct AdmissibleState {
  RepairingCollection collection;
  Subspace newcomer;
  RepairWitness witness;
};

/// A candidate set A of repairing collections, deduplicated and sorted by key.
class StateSet {
 public:
  StateSet(const Field& f, CodeParams params) : field_(&f), params_(params) {}

  const Field& field() const noexcept { return *field_; }
  const CodeParams& params() const noexcept { return params_; }

  /// Returns false when an equal collection is already present.
  bool insert(RepairingCollection c);
  bool contains(const std::string& key) const { return keys_.count(key) != 0; }
  bool contains(const RepairingCollection& c) const { return contains(c.key()); }
  std::size_t size() const noexcept { return keys_.size(); }

  /// Sorted by key.
  const std::vector<RepairingCollection>& collections() const;
  std::unordered_set<std::string> key_set() const { return keys_; }

  /// Known newcomers per collection key (from a file or a construction).
  void add_transition(const std::string& collection_key, const Subspace& newcomer);
  const std::map<std::string, std::vector<Subspace>>& transitions() const noexcept { return transitions_; }

 private:
  const Field* field_;
  CodeParams params_;
  mutable std::vector<RepairingCollection> items_;
  mutable bool sorted_ = true;
  std::unordered_set<std::string> keys_;
  std::map<std::string, std::vector<Subspace>> transitions_;
};

struct RepairLimits {
  /// Distinct candidate newcomers per collection.
  std::size_t max_candidates = 100000;
};

/// True iff the spaces together span F^m.
bool is_recovery_set(std::span<const Subspace> spaces, std::size_t m);

/// Smallest number of the given spaces that span F^m; throws VerificationFailure
/// when even all of them do not.
std::size_t recovery_dimension(std::span<const Subspace> spaces, std::size_t m);

/// First size-k subset (lexicographic) spanning F^m, if any.
std::optional<std::vector<std::size_t>> spanning_subset(std::span<const Subspace> spaces, std::size_t k,
                                                        std::size_t m);

/// Every alpha-dim space obtainable from the collection by (r, beta)-repair,
/// sorted by key.
std::vector<Subspace> obtainable_spaces(const RepairingCollection& collection, const CodeParams& params,
                                        const RepairLimits& limits = {});

/// First witness in search order (helper subsets lexicographic, then repair spaces
/// in key order), or nullopt when the newcomer is not obtainable.
std::optional<RepairWitness> find_witness(const RepairingCollection& collection, const Subspace& newcomer,
                                          const CodeParams& params);

/// Exact check of a witness against the collection and newcomer.
bool verify_witness(const RepairingCollection& collection, const Subspace& newcomer, const RepairWitness& witness,
                    const CodeParams& params);

struct CollectionReport {
  std::string key;
  std::optional<std::vector<std::size_t>> spanning_subset;
  /// Valid newcomers in key order (all of them in full mode, else at most the first).
  std::vector<Subspace> valid_newcomers;
  std::optional<RepairWitness> witness;
  /// Full mode: whether some obtainable space keeps replacement i inside A.
  std::vector<bool> per_index_feasible;
  std::size_t candidates = 0;
  bool has_duplicates = false;
  bool ok() const { return spanning_subset.has_value() && !valid_newcomers.empty(); }
};

struct VerificationReport {
  bool passed = true;
  std::vector<CollectionReport> collections;  // sorted by key
  std::optional<std::string> failing_key;
  std::string failure_reason;
  bool duplicates_seen = false;

  const CollectionReport* find(const std::string& key) const;
};

struct VerifyOptions {
  /// Collect every valid newcomer and per-index feasibility, not just the first.
  bool full = false;
  RepairLimits limits;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

/// The repair property of a functional-repair storage code: every collection has a
/// spanning k-subset and an obtainable newcomer U such that every replacement
/// (collection with member i swapped for U) is again in A.
VerificationReport check_repair_property(const StateSet& a, const VerifyOptions& options = {});

/// The n collections {U_1..U_n} minus U_i of an exact-repair code; throws
/// VerificationFailure when they do not satisfy the repair property.
StateSet exact_to_states(std::span<const Subspace> node_spaces, const CodeParams& params);

}  // namespace fsc
