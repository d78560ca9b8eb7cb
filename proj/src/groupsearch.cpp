#include "fsc/groupsearch.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "fsc/error.hpp"

namespace fsc::group {

// ---------------------------------------------------------------- LinearMap

LinearMap::LinearMap(const Field& f, Matrix matrix) : field_(&f), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("linear map matrix must be square");
  if (linalg::rank(f, matrix_) != matrix_.rows()) throw std::invalid_argument("linear map matrix is not invertible");
  build_key();
}

LinearMap::LinearMap(const Field& f, Matrix matrix, bool) : field_(&f), matrix_(std::move(matrix)) { build_key(); }

LinearMap LinearMap::identity(const Field& f, std::size_t m) { return LinearMap(f, Matrix::identity(m), true); }

void LinearMap::build_key() {
  const bool wide = field_->q() > 256;
  key_.clear();
  key_.reserve(matrix_.data().size() * (wide ? 2 : 1));
  for (Elem v : matrix_.data()) {
    if (wide) key_.push_back(static_cast<char>(v >> 8));
    key_.push_back(static_cast<char>(v & 0xFF));
  }
}

std::string LinearMap::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key_) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Vector LinearMap::apply(const Vector& v) const {
  if (&v.field() != field_ || v.size() != dim()) throw std::invalid_argument("map and vector do not match");
  std::vector<Elem> out(dim(), 0);
  for (std::size_t i = 0; i < dim(); ++i) linalg::axpy(*field_, out, matrix_.row(i), v[i]);
  return Vector(*field_, std::move(out));
}

Subspace LinearMap::apply(const Subspace& s) const {
  if (&s.field() != field_ || s.ambient() != dim()) throw std::invalid_argument("map and subspace do not match");
  if (s.dim() == 0) return s;
  return Subspace::row_space(*field_, linalg::multiply(*field_, s.basis(), matrix_));
}

RepairingCollection LinearMap::apply(const RepairingCollection& c) const {
  std::vector<Subspace> out;
  out.reserve(c.size());
  for (const auto& s : c.spaces()) out.push_back(apply(s));
  return RepairingCollection(std::move(out));
}

LinearMap LinearMap::inverse() const {
  auto inv = linalg::inverse(*field_, matrix_);
  if (!inv) throw InternalError("stored linear map is singular");
  return LinearMap(*field_, std::move(*inv), true);
}

LinearMap LinearMap::power(long long n) const {
  LinearMap base = n < 0 ? inverse() : *this;
  if (n < 0) n = -n;
  LinearMap acc = identity(*field_, dim());
  while (n > 0) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

LinearMap operator*(const LinearMap& h, const LinearMap& g) {
  if (h.field_ != g.field_ || h.dim() != g.dim()) throw std::invalid_argument("composing maps of different spaces");
  return LinearMap(*h.field_, linalg::multiply(*h.field_, g.matrix_, h.matrix_), true);
}

bool GroupClosure::contains(const LinearMap& g) const {
  return std::any_of(elements.begin(), elements.end(), [&](const LinearMap& e) { return e == g; });
}

// ---------------------------------------------------------------- map search

namespace {

class MapSearch {
 public:
  MapSearch(std::span<const Subspace> sources, std::span<const Subspace> targets, const SearchLimits& limits)
      : f_(sources.front().field()), m_(sources.front().ambient()), sources_(sources), targets_(targets),
        limits_(limits) {
    for (const auto& t : targets_) {
      std::vector<std::vector<Elem>> vs;
      for_each_vector(t, [&](const Vector& v) {
        if (!v.is_zero()) vs.emplace_back(v.coords().begin(), v.coords().end());
      });
      target_vectors_.push_back(std::move(vs));
    }
  }

  void run(const std::vector<std::size_t>& perm) {
    perm_ = perm;
    tasks_.clear();
    for (std::size_t j = 0; j < sources_.size(); ++j) {
      for (std::size_t t = 0; t < sources_[j].dim(); ++t) {
        const auto row = sources_[j].basis().row(t);
        tasks_.push_back({std::vector<Elem>(row.begin(), row.end()), perm[j]});
      }
    }
    basis_ = Matrix(0, m_);
    images_ = Matrix(0, m_);
    step(0);
  }

  std::map<std::string, LinearMap>& found() { return found_; }

 private:
  struct Task {
    std::vector<Elem> vec;
    std::size_t target;
  };

  void tick() {
    if (++nodes_ > limits_.max_nodes) {
      throw CapExceeded("map search exceeded " + std::to_string(limits_.max_nodes) + " backtrack nodes");
    }
  }

  bool independent_image(std::span<const Elem> y) const {
    Matrix trial = images_;
    trial.append_row(y);
    return linalg::rank(f_, std::move(trial)) == trial.rows();
  }

  void push(std::span<const Elem> b, std::span<const Elem> y) {
    basis_.append_row(b);
    images_.append_row(y);
  }
  void pop() {
    basis_.truncate_rows(basis_.rows() - 1);
    images_.truncate_rows(images_.rows() - 1);
  }

  void step(std::size_t t) {
    tick();
    if (t == tasks_.size()) {
      complete();
      return;
    }
    const auto& task = tasks_[t];
    if (auto coeffs = basis_.rows() > 0 ? linalg::solve_left(f_, basis_, task.vec) : std::nullopt;
        coeffs || std::all_of(task.vec.begin(), task.vec.end(), [](Elem c) { return c == 0; })) {
      std::vector<Elem> image(m_, 0);
      if (coeffs) {
        for (std::size_t i = 0; i < coeffs->size(); ++i) linalg::axpy(f_, image, images_.row(i), (*coeffs)[i]);
      }
      if (targets_[task.target].contains(image)) step(t + 1);
      return;
    }
    for (const auto& y : target_vectors_[task.target]) {
      if (!independent_image(y)) continue;
      push(task.vec, y);
      step(t + 1);
      pop();
    }
  }

  // Extend to a full basis when the sources do not span F^m.
  void complete() {
    if (basis_.rows() == m_) {
      finish();
      return;
    }
    std::vector<Elem> e(m_, 0);
    for (std::size_t c = 0; c < m_; ++c) {
      std::fill(e.begin(), e.end(), 0);
      e[c] = 1;
      if (linalg::solve_left(f_, basis_, e)) continue;
      Subspace::whole(f_, m_);
      for_each_vector(Subspace::whole(f_, m_), [&](const Vector& y) {
        if (y.is_zero() || !independent_image(y.coords())) return;
        tick();
        push(e, y.coords());
        complete();
        pop();
      });
      return;
    }
  }

  void finish() {
    auto inv = linalg::inverse(f_, basis_);
    if (!inv) throw InternalError("adapted basis is singular");
    LinearMap l(f_, linalg::multiply(f_, *inv, images_));
    for (std::size_t j = 0; j < sources_.size(); ++j) {
      if (!(l.apply(sources_[j]) == targets_[perm_[j]])) return;
    }
    found_.try_emplace(l.key(), l);
  }

  const Field& f_;
  std::size_t m_;
  std::span<const Subspace> sources_;
  std::span<const Subspace> targets_;
  SearchLimits limits_;
  std::vector<std::vector<std::vector<Elem>>> target_vectors_;
  std::vector<std::size_t> perm_;
  std::vector<Task> tasks_;
  Matrix basis_;
  Matrix images_;
  std::uint64_t nodes_ = 0;
  std::map<std::string, LinearMap> found_;
};

}  // namespace

std::vector<LinearMap> find_set_maps(std::span<const Subspace> sources, std::span<const Subspace> targets,
                                     std::span<const std::size_t> pinned, const SearchLimits& limits) {
  if (sources.size() != targets.size()) return {};
  if (sources.empty()) throw std::invalid_argument("find_set_maps: no subspaces given");
  for (const auto& s : sources) require_same_ambient(sources.front(), s);
  for (const auto& t : targets) require_same_ambient(sources.front(), t);

  MapSearch search(sources, targets, limits);
  std::vector<std::size_t> perm(sources.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::vector<std::size_t>> distinct_assignments;
  do {
    bool ok = true;
    for (auto j : pinned) ok = ok && perm[j] == j;
    for (std::size_t j = 0; j < perm.size() && ok; ++j) ok = sources[j].dim() == targets[perm[j]].dim();
    if (!ok) continue;
    // Equal targets make several permutations describe the same assignment.
    std::vector<std::size_t> canonical(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) {
      std::size_t first = perm[j];
      for (std::size_t t = 0; t < targets.size(); ++t) {
        if (targets[t] == targets[perm[j]]) {
          first = t;
          break;
        }
      }
      canonical[j] = first;
    }
    if (!distinct_assignments.insert(canonical).second) continue;
    search.run(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<LinearMap> out;
  for (auto& [key, l] : search.found()) out.push_back(std::move(l));
  return out;
}

std::vector<LinearMap> find_transition_maps(const RepairingCollection& collection, const Subspace& newcomer,
                                            std::size_t i, const SearchLimits& limits) {
  if (i >= collection.size()) throw std::out_of_range("transition index out of range");
  std::vector<Subspace> targets = collection.spaces();
  targets[i] = newcomer;
  return find_set_maps(collection.spaces(), targets, {}, limits);
}

std::vector<LinearMap> general_linear_group(const Field& f, std::size_t m) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m * m; ++i) {
    total *= static_cast<std::uint64_t>(f.q());
    if (total > (std::uint64_t{1} << 25)) throw CapExceeded("GL(m, q) enumeration is too large");
  }
  std::vector<LinearMap> out;
  Matrix a(m, m);
  std::vector<Elem> digits(m * m, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < m * m; ++i) {
      a(i / m, i % m) = static_cast<Elem>(c % static_cast<std::uint64_t>(f.q()));
      c /= static_cast<std::uint64_t>(f.q());
    }
    if (linalg::rank(f, a) == m) out.emplace_back(f, a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LinearMap> find_transition_maps_exhaustive(const RepairingCollection& collection,
                                                       const Subspace& newcomer, std::size_t i) {
  const std::string target = collection.replaced(i, newcomer).key();
  std::vector<LinearMap> out;
  for (auto& l : general_linear_group(collection[0].field(), collection[0].ambient())) {
    if (l.apply(collection).key() == target) out.push_back(std::move(l));
  }
  return out;
}

std::optional<std::vector<std::size_t>> induced_permutation(const LinearMap& l, const RepairingCollection& c) {
  std::vector<std::size_t> perm(c.size());
  std::vector<bool> used(c.size(), false);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Subspace image = l.apply(c[i]);
    bool placed = false;
    for (std::size_t j = 0; j < c.size() && !placed; ++j) {
      if (!used[j] && c[j] == image) {
        perm[i] = j;
        used[j] = true;
        placed = true;
      }
    }
    if (!placed) return std::nullopt;
  }
  return perm;
}

Stabilizer stabilizer(const RepairingCollection& collection, const Subspace& newcomer, const SearchLimits& limits) {
  std::vector<Subspace> spaces = collection.spaces();
  spaces.push_back(newcomer);
  const std::size_t pin = spaces.size() - 1;
  Stabilizer out;
  out.group.elements = find_set_maps(spaces, spaces, std::span<const std::size_t>(&pin, 1), limits);
  out.group.generators = out.group.elements;
  out.group.complete = true;
  out.group.cap = out.group.elements.size();

  const std::size_t n = collection.size();
  std::vector<bool> reached(n, false);
  reached[0] = true;
  for (const auto& l : out.group.elements) {
    const auto perm = induced_permutation(l, collection);
    if (!perm) throw InternalError("stabilizer element does not preserve the collection");
    reached[(*perm)[0]] = true;
    if (!out.cycle) {
      std::size_t len = 1;
      for (std::size_t i = (*perm)[0]; i != 0 && len <= n; i = (*perm)[i]) ++len;
      if (len == n && n > 1) out.cycle = l;
    }
  }
  out.transitive = std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
  return out;
}

GroupClosure generate_group(std::span<const LinearMap> generators, std::size_t cap) {
  if (generators.empty()) throw std::invalid_argument("generate_group: no generators");
  GroupClosure g;
  g.generators.assign(generators.begin(), generators.end());
  g.cap = cap;
  std::unordered_set<std::string> seen;
  g.elements.push_back(LinearMap::identity(generators[0].field(), generators[0].dim()));
  seen.insert(g.elements.back().key());
  for (std::size_t i = 0; i < g.elements.size(); ++i) {
    for (const auto& s : g.generators) {
      LinearMap h = g.elements[i] * s;
      if (!seen.insert(h.key()).second) continue;
      if (g.elements.size() >= cap) return g;
      g.elements.push_back(std::move(h));
    }
  }
  g.complete = true;
  return g;
}

std::vector<RepairingCollection> orbit(std::span<const LinearMap> generators, const RepairingCollection& seed,
                                       std::size_t cap) {
  std::vector<RepairingCollection> out{seed};
  std::unordered_set<std::string> seen{seed.key()};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& s : generators) {
      RepairingCollection next = s.apply(out[i]);
      if (!seen.insert(next.key()).second) continue;
      if (out.size() >= cap) throw CapExceeded("orbit exceeds " + std::to_string(cap) + " collections");
      out.push_back(std::move(next));
    }
  }
  return out;
}

StateSet orbit_code(const GroupClosure& g, const RepairingCollection& seed, const CodeParams& params,
                    std::size_t orbit_cap) {
  if (!g.complete) throw std::invalid_argument("orbit_code: group closure is incomplete (order > cap)");
  StateSet states(seed[0].field(), params);
  for (const auto& l : g.elements) {
    if (states.insert(l.apply(seed)) && states.size() > orbit_cap) {
      throw CapExceeded("orbit exceeds " + std::to_string(orbit_cap) + " collections");
    }
  }
  if (states.size() > g.order()) throw InternalError("orbit larger than the group");
  const auto report = check_repair_property(states);
  if (!report.passed) {
    throw VerificationFailure("orbit fails the repair property (" + report.failure_reason + ")");
  }
  return states;
}

// ---------------------------------------------------------------- search

SearchOutcome ltgc_search(const SeedState& seed, const SearchOptions& options) {
  SearchOutcome out;
  const auto& params = seed.params;
  params.validate();
  if (seed.collection.size() != params.n - 1) throw std::invalid_argument("seed collection must have n - 1 members");

  if (!find_witness(seed.collection, seed.newcomer, params)) {
    out.log.push_back("seed newcomer is not obtainable by (r,beta)-repair");
    return out;
  }
  if (params.k < params.n - 1 && !spanning_subset(seed.collection.spaces(), params.k, params.m)) {
    out.log.push_back("seed collection has no spanning k-subset");
    return out;
  }

  const Stabilizer stab = stabilizer(seed.collection, seed.newcomer, options.limits);
  out.stabilizer_order = stab.group.order();
  out.stabilizer_transitive = stab.transitive;

  std::vector<LinearMap> base;
  if (stab.transitive && stab.cycle) {
    base.push_back(*stab.cycle);
  } else {
    for (const auto& l : stab.group.elements) {
      if (!(l == LinearMap::identity(l.field(), l.dim()))) base.push_back(l);
    }
  }

  std::vector<std::pair<std::size_t, LinearMap>> candidates;
  const std::size_t indices = stab.transitive ? 1 : seed.collection.size();
  for (std::size_t i = 0; i < indices; ++i) {
    for (auto& l : find_transition_maps(seed.collection, seed.newcomer, i, options.limits)) {
      candidates.emplace_back(i, std::move(l));
    }
  }
  out.candidate_maps = candidates.size();
  std::map<std::string, std::size_t> class_of_rep;
  std::vector<std::size_t> classes;
  for (const auto& [index, l] : candidates) {
    std::string rep = l.key();
    for (const auto& g : stab.group.elements) rep = std::min(rep, (l * g).key());
    classes.push_back(class_of_rep.emplace(rep + char('0' + index), class_of_rep.size()).first->second);
  }
  out.candidate_classes = class_of_rep.size();

  std::ostringstream head;
  head << "stabilizer order " << stab.group.order() << (stab.transitive ? " transitive" : " intransitive")
       << ", base generators " << base.size() << ", candidate maps " << candidates.size() << " in "
       << out.candidate_classes << " classes";
  out.log.push_back(head.str());

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const auto& [index, l] = candidates[ci];
    std::vector<LinearMap> gens = base;
    gens.push_back(l);
    std::ostringstream line;
    line << "i=" << index << " class=" << classes[ci] << " L=" << l.fingerprint();
    if (stab.cycle && stab.transitive) line << " T=" << stab.cycle->fingerprint();

    std::size_t orbit_size = 0;
    try {
      orbit_size = orbit(gens, seed.collection, options.limits.orbit_cap).size();
    } catch (const CapExceeded&) {
      line << " group_order=? orbit_size>" << options.limits.orbit_cap << " verdict=skipped";
      out.log.push_back(line.str());
      continue;
    }
    GroupClosure g = generate_group(gens, options.limits.group_cap);
    if (!g.complete) {
      line << " group_order>" << options.limits.group_cap << " orbit_size=" << orbit_size << " verdict=skipped";
      out.log.push_back(line.str());
      continue;
    }
    line << " group_order=" << g.order() << " orbit_size=" << orbit_size;
    try {
      StateSet states = orbit_code(g, seed.collection, params, options.limits.orbit_cap);
      for (const auto& e : g.elements) states.add_transition(e.apply(seed.collection).key(), e.apply(seed.newcomer));
      line << " verdict=pass";
      out.results.push_back(SearchResult{std::move(g), std::move(states), l, classes[ci]});
    } catch (const VerificationFailure&) {
      line << " verdict=fail";
    }
    out.log.push_back(line.str());
    if (options.max_results != 0 && out.results.size() >= options.max_results) break;
  }

  std::stable_sort(out.results.begin(), out.results.end(), [](const SearchResult& a, const SearchResult& b) {
    if (a.states.size() != b.states.size()) return a.states.size() < b.states.size();
    return a.group.order() < b.group.order();
  });
  return out;
}

}  // namespace fsc::group
