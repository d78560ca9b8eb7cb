#include "fsc/storage.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "fsc/error.hpp"

namespace fsc {

void CodeParams::validate() const {
  if (m == 0 || n == 0 || k == 0 || r == 0 || alpha == 0 || beta == 0) {
    throw std::invalid_argument("code parameters must be positive");
  }
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  if (k > n) throw std::invalid_argument("k exceeds n");
  if (r > n - 1) throw std::invalid_argument("repair locality r exceeds n - 1");
  if (alpha > m) throw std::invalid_argument("alpha exceeds m");
  if (beta > alpha) throw std::invalid_argument("beta exceeds alpha");
}

// ---------------------------------------------------------------- collections

namespace {

void append_member(std::string& out, const std::string& key) {
  out.push_back(static_cast<char>(key.size() >> 8));
  out.push_back(static_cast<char>(key.size() & 0xFF));
  out += key;
}

std::string key_from(std::vector<const std::string*> members) {
  std::sort(members.begin(), members.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
  std::string out;
  for (const auto* k : members) append_member(out, *k);
  return out;
}

}  // namespace

RepairingCollection::RepairingCollection(std::vector<Subspace> spaces) : spaces_(std::move(spaces)) {
  if (spaces_.empty()) throw std::invalid_argument("a repairing collection needs at least one space");
  for (const auto& s : spaces_) require_same_ambient(spaces_.front(), s);
  std::vector<const std::string*> members;
  members.reserve(spaces_.size());
  for (const auto& s : spaces_) members.push_back(&s.key());
  key_ = key_from(std::move(members));
}

bool RepairingCollection::has_duplicates() const {
  for (std::size_t i = 0; i < spaces_.size(); ++i) {
    for (std::size_t j = i + 1; j < spaces_.size(); ++j) {
      if (spaces_[i] == spaces_[j]) return true;
    }
  }
  return false;
}

RepairingCollection RepairingCollection::replaced(std::size_t i, const Subspace& u) const {
  auto copy = spaces_;
  copy.at(i) = u;
  return RepairingCollection(std::move(copy));
}

std::string collection_key_with(std::span<const Subspace> spaces, std::size_t skip, const Subspace& extra) {
  std::vector<const std::string*> members;
  members.reserve(spaces.size());
  for (std::size_t i = 0; i < spaces.size(); ++i) members.push_back(i == skip ? &extra.key() : &spaces[i].key());
  return key_from(std::move(members));
}

bool StateSet::insert(RepairingCollection c) {
  if (!c.spaces().empty()) {
    const auto& s = c[0];
    if (&s.field() != field_ || s.ambient() != params_.m) {
      throw std::invalid_argument("collection does not live in the code's message space");
    }
  }
  if (!keys_.insert(c.key()).second) return false;
  if (!items_.empty() && c.key() < items_.back().key()) sorted_ = false;
  items_.push_back(std::move(c));
  return true;
}

const std::vector<RepairingCollection>& StateSet::collections() const {
  if (!sorted_) {
    std::sort(items_.begin(), items_.end());
    sorted_ = true;
  }
  return items_;
}

void StateSet::add_transition(const std::string& collection_key, const Subspace& newcomer) {
  auto& list = transitions_[collection_key];
  if (std::find(list.begin(), list.end(), newcomer) == list.end()) {
    list.push_back(newcomer);
    std::sort(list.begin(), list.end());
  }
}

// ---------------------------------------------------------------- recovery

bool is_recovery_set(std::span<const Subspace> spaces, std::size_t m) {
  if (spaces.empty()) return m == 0;
  return sum(spaces).dim() == m;
}

namespace {

// Visits index subsets of {0..n-1} of the given size in lexicographic order until
// visit returns true.
template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t size, Visit&& visit) {
  if (size > n) return false;
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    if (visit(static_cast<const std::vector<std::size_t>&>(idx))) return true;
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<Subspace> pick(std::span<const Subspace> spaces, const std::vector<std::size_t>& idx) {
  std::vector<Subspace> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(spaces[i]);
  return out;
}

}  // namespace

std::optional<std::vector<std::size_t>> spanning_subset(std::span<const Subspace> spaces, std::size_t k,
                                                        std::size_t m) {
  std::optional<std::vector<std::size_t>> found;
  for_each_subset(spaces.size(), k, [&](const std::vector<std::size_t>& idx) {
    const auto chosen = pick(spaces, idx);
    if (is_recovery_set(chosen, m)) {
      found = idx;
      return true;
    }
    return false;
  });
  return found;
}

std::size_t recovery_dimension(std::span<const Subspace> spaces, std::size_t m) {
  if (!is_recovery_set(spaces, m)) throw VerificationFailure("node spaces do not span the message space");
  for (std::size_t k = 0; k <= spaces.size(); ++k) {
    if (spanning_subset(spaces, k, m)) return k;
  }
  throw InternalError("recovery_dimension: no spanning subset despite full span");
}

// ---------------------------------------------------------------- (r, beta)-repair

namespace {

// Walks every choice of one beta-dim repair space per helper, for every helper
// subset, in the documented order. visit(helpers, repair spaces, their sum) returns
// true to stop.
template <typename Visit>
void for_each_repair_choice(const RepairingCollection& c, const CodeParams& params, Visit&& visit) {
  if (params.r > c.size()) throw std::invalid_argument("repair locality exceeds collection size");
  std::vector<std::vector<Subspace>> choices(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].dim() < params.beta) continue;
    choices[i] = subspaces_of(c[i], params.beta);
  }
  for_each_subset(c.size(), params.r, [&](const std::vector<std::size_t>& helpers) {
    for (auto h : helpers) {
      if (choices[h].empty()) return false;
    }
    std::vector<std::size_t> pos(helpers.size(), 0);
    std::vector<Subspace> picked;
    picked.reserve(helpers.size());
    while (true) {
      picked.clear();
      for (std::size_t t = 0; t < helpers.size(); ++t) picked.push_back(choices[helpers[t]][pos[t]]);
      if (visit(helpers, static_cast<const std::vector<Subspace>&>(picked), sum(picked))) return true;
      std::size_t t = helpers.size();
      while (true) {
        if (t == 0) return false;
        --t;
        if (++pos[t] < choices[helpers[t]].size()) break;
        pos[t] = 0;
      }
    }
  });
}

Matrix stacked_bases(const std::vector<Subspace>& spaces, std::size_t m) {
  Matrix rows(0, m);
  for (const auto& s : spaces) {
    for (std::size_t i = 0; i < s.dim(); ++i) rows.append_row(s.basis().row(i));
  }
  return rows;
}

}  // namespace

std::vector<Subspace> obtainable_spaces(const RepairingCollection& collection, const CodeParams& params,
                                        const RepairLimits& limits) {
  std::unordered_map<std::string, Subspace> found;
  std::unordered_set<std::string> sums_seen;
  for_each_repair_choice(collection, params,
                         [&](const std::vector<std::size_t>&, const std::vector<Subspace>&, const Subspace& s) {
                           if (s.dim() < params.alpha || !sums_seen.insert(s.key()).second) return false;
                           for (auto& u : subspaces_of(s, params.alpha)) {
                             const std::string key = u.key();
                             found.try_emplace(key, std::move(u));
                           }
                           if (found.size() > limits.max_candidates) {
                             throw CapExceeded("more than " + std::to_string(limits.max_candidates) +
                                               " candidate newcomers for one collection");
                           }
                           return false;
                         });
  std::vector<Subspace> out;
  out.reserve(found.size());
  for (auto& [key, u] : found) out.push_back(std::move(u));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<RepairWitness> find_witness(const RepairingCollection& collection, const Subspace& newcomer,
                                          const CodeParams& params) {
  std::optional<RepairWitness> out;
  for_each_repair_choice(collection, params,
                         [&](const std::vector<std::size_t>& helpers, const std::vector<Subspace>& spaces,
                             const Subspace& s) {
                           if (!newcomer.is_subspace_of(s)) return false;
                           RepairWitness w;
                           w.helpers = helpers;
                           w.repair_spaces = spaces;
                           const Matrix rows = stacked_bases(spaces, params.m);
                           for (std::size_t l = 0; l < newcomer.dim(); ++l) {
                             auto coeffs = linalg::solve_left(newcomer.field(), rows, newcomer.basis().row(l));
                             if (!coeffs) throw InternalError("newcomer row not expressible in its repair span");
                             w.coefficients.push_back(std::move(*coeffs));
                           }
                           out = std::move(w);
                           return true;
                         });
  return out;
}

bool verify_witness(const RepairingCollection& collection, const Subspace& newcomer, const RepairWitness& witness,
                    const CodeParams& params) {
  if (newcomer.dim() != params.alpha) return false;
  if (witness.helpers.size() != params.r || witness.repair_spaces.size() != params.r) return false;
  for (std::size_t t = 0; t < witness.helpers.size(); ++t) {
    const auto h = witness.helpers[t];
    if (h >= collection.size()) return false;
    for (std::size_t u = 0; u < t; ++u) {
      if (witness.helpers[u] == h) return false;
    }
    const auto& w = witness.repair_spaces[t];
    if (w.dim() != params.beta || !w.is_subspace_of(collection[h])) return false;
  }
  const Matrix rows = stacked_bases(witness.repair_spaces, params.m);
  if (witness.coefficients.size() != newcomer.dim()) return false;
  const Field& f = newcomer.field();
  for (std::size_t l = 0; l < newcomer.dim(); ++l) {
    const auto& c = witness.coefficients[l];
    if (c.size() != rows.rows()) return false;
    std::vector<Elem> acc(params.m, 0);
    for (std::size_t i = 0; i < rows.rows(); ++i) linalg::axpy(f, acc, rows.row(i), c[i]);
    const auto target = newcomer.basis().row(l);
    if (!std::equal(acc.begin(), acc.end(), target.begin(), target.end())) return false;
  }
  return true;
}

// ---------------------------------------------------------------- repair property

const CollectionReport* VerificationReport::find(const std::string& key) const {
  auto it = std::lower_bound(collections.begin(), collections.end(), key,
                             [](const CollectionReport& r, const std::string& k) { return r.key < k; });
  return it != collections.end() && it->key == key ? &*it : nullptr;
}

namespace {

CollectionReport check_collection(const StateSet& a, const RepairingCollection& c, const VerifyOptions& options) {
  const auto& params = a.params();
  CollectionReport rep;
  rep.key = c.key();
  rep.has_duplicates = c.has_duplicates();
  if (params.k <= c.size()) rep.spanning_subset = spanning_subset(c.spaces(), params.k, params.m);
  if (!rep.spanning_subset && !options.full) return rep;

  const auto candidates = obtainable_spaces(c, params, options.limits);
  rep.candidates = candidates.size();
  if (options.full) rep.per_index_feasible.assign(c.size(), false);
  for (const auto& u : candidates) {
    bool valid = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const bool inside = a.contains(collection_key_with(c.spaces(), i, u));
      if (options.full) {
        if (inside) rep.per_index_feasible[i] = true;
        valid = valid && inside;
      } else if (!inside) {
        valid = false;
        break;
      }
    }
    if (!valid) continue;
    rep.valid_newcomers.push_back(u);
    if (!options.full) break;
  }
  if (!rep.valid_newcomers.empty()) {
    rep.witness = find_witness(c, rep.valid_newcomers.front(), params);
    if (!rep.witness || !verify_witness(c, rep.valid_newcomers.front(), *rep.witness, params)) {
      throw InternalError("obtainable newcomer has no verifiable repair witness");
    }
  }
  return rep;
}

}  // namespace

VerificationReport check_repair_property(const StateSet& a, const VerifyOptions& options) {
  a.params().validate();
  const auto& items = a.collections();
  VerificationReport report;
  report.collections.resize(items.size());

  unsigned threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, items.size() / 64)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    try {
      for (std::size_t i = next++; i < items.size() && !failed; i = next++) {
        report.collections[i] = check_collection(a, items[i], options);
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (const auto& rep : report.collections) {
    report.duplicates_seen = report.duplicates_seen || rep.has_duplicates;
    if (rep.ok() || !report.passed) continue;
    report.passed = false;
    report.failing_key = rep.key;
    report.failure_reason = !rep.spanning_subset ? "no spanning subset of size " + std::to_string(a.params().k)
                                                 : "no obtainable newcomer keeps every replacement admissible";
  }
  return report;
}

StateSet exact_to_states(std::span<const Subspace> node_spaces, const CodeParams& params) {
  params.validate();
  if (node_spaces.size() != params.n) throw std::invalid_argument("expected n node spaces");
  for (const auto& u : node_spaces) {
    if (u.dim() != params.alpha) throw std::invalid_argument("node space dimension differs from alpha");
  }
  StateSet states(node_spaces.front().field(), params);
  for (std::size_t i = 0; i < node_spaces.size(); ++i) {
    std::vector<Subspace> rest;
    for (std::size_t j = 0; j < node_spaces.size(); ++j) {
      if (j != i) rest.push_back(node_spaces[j]);
    }
    RepairingCollection c(std::move(rest));
    states.add_transition(c.key(), node_spaces[i]);
    states.insert(std::move(c));
  }
  const auto report = check_repair_property(states);
  if (!report.passed) throw VerificationFailure("exact-repair code fails the repair property: " + report.failure_reason);
  return states;
}

}  // namespace fsc
