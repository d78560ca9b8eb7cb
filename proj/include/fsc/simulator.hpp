#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsc/random.hpp"
#include "fsc/storage.hpp"
#include "fsc/subspace.hpp"

namespace fsc::sim {

/// The chosen nodes do not span the message space.
class InsufficientNodes : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node {
  std::size_t id = 0;
  Subspace space;
  /// Rows are the basis vectors b_1..b_alpha (the columns of B_i).
  Matrix basis;
  /// stored[l] = <x, b_l>
  std::vector<Elem> stored;
  bool alive = true;
};

struct HelperDownload {
  std::size_t node = 0;
  Subspace repair_space;
  /// alpha x beta; column t expresses repair-space basis row t in the node basis.
  Matrix combination;
  std::vector<Elem> symbols;
};

struct RepairTranscript {
  std::size_t event = 0;
  std::size_t failed = 0;
  std::vector<HelperDownload> helpers;
  Subspace newcomer;
  Matrix newcomer_basis;
  /// Row l: coefficients of newcomer symbol l over the concatenated downloads.
  std::vector<std::vector<Elem>> reconstruction;
  std::vector<Elem> newcomer_symbols;
  /// Survivors of this failure, printable form.
  std::string collection;

  std::size_t downloads() const;
};

enum class NewcomerChoice { Least, Random };

struct SimOptions {
  /// Keep x and check every stored symbol against it.
  bool test_mode = true;
  NewcomerChoice choice = NewcomerChoice::Least;
  /// Recover from every spanning k-subset after each repair (otherwise one random one).
  bool exhaustive_collect = true;
};

struct RunReport {
  std::size_t steps = 0;
  std::size_t repairs = 0;
  std::size_t states_visited = 0;
  std::size_t downloads_total = 0;
  /// Every repair downloaded exactly r * beta symbols.
  bool bandwidth_ok = true;
  /// After every repair each leave-one-out collection of the nodes was in A.
  bool closure_ok = true;
  std::size_t collect_checks = 0;
  std::size_t integrity_failures = 0;
  std::string failure;

  bool ok() const { return bandwidth_ok && closure_ok && integrity_failures == 0; }
  std::string text() const;
};

/// A running distributed storage system over a verified code.
class Dss {
 public:
  /// Verifies the code first; throws VerificationFailure when it fails.
  Dss(const StateSet& code, Vector x, std::uint64_t seed, SimOptions options = {});
  /// Uses a report from an earlier check_repair_property run on the same code.
  Dss(const StateSet& code, const VerificationReport& proof, Vector x, std::uint64_t seed, SimOptions options = {});
  /// Explicit node spaces; every leave-one-out collection must be in the code.
  Dss(const StateSet& code, const VerificationReport& proof, std::span<const Subspace> nodes, Vector x,
      std::uint64_t seed, SimOptions options = {});

  const CodeParams& params() const noexcept { return code_->params(); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(std::size_t id) const { return nodes_.at(id); }

  void fail(std::size_t id);
  /// Picks the newcomer (least key, or seeded random) and a witness, then repairs.
  RepairTranscript repair(std::size_t id);

  struct HelperChoice {
    std::size_t node;
    Subspace repair_space;
  };
  /// Repair with a caller-chosen newcomer and repair spaces.
  RepairTranscript repair_with(std::size_t id, const Subspace& newcomer, std::span<const HelperChoice> helpers);

  /// Recovers x from the stored symbols of the given live nodes; throws
  /// InsufficientNodes when they do not span F^m.
  Vector collect(std::span<const std::size_t> ids) const;

  /// fail -> repair -> collect, `steps` times, with failed nodes chosen by the seeded
  /// generator. Stops at the first integrity failure.
  RunReport run_random(std::size_t steps);

  /// Valid newcomers for the collection (sorted by key), cached.
  const std::vector<Subspace>& valid_newcomers(const RepairingCollection& survivors);

  /// One block per repair event in fixed field order.
  const std::string& transcript() const noexcept { return transcript_; }

 private:
  void init_nodes(std::span<const Subspace> spaces, const Vector& x);
  RepairingCollection survivors(std::size_t failed) const;
  bool closure_holds() const;
  void check_integrity(const Node& n) const;

  const StateSet* code_;
  SimOptions options_;
  Rng rng_;
  std::vector<Node> nodes_;
  std::optional<Vector> x_;
  std::optional<std::size_t> failed_;
  std::size_t events_ = 0;
  std::map<std::string, std::vector<Subspace>> newcomer_cache_;
  std::string transcript_;
};

/// "DIGITS" in base q (0-9 then a-z) as a vector of F_q^m.
Vector parse_data(const Field& f, std::size_t m, const std::string& digits);
std::string format_vector(std::span<const Elem> v, int q);
/// Basis rows in RREF, comma separated, inside brackets.
std::string format_subspace(const Subspace& s);
std::string format_transcript(const RepairTranscript& t, int q);

}  // namespace fsc::sim
