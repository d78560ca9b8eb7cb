#include "fsc/partition_code.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "fsc/error.hpp"

namespace fsc::partition {

namespace {

const Field& gf8() { return Field::get(2, 3); }
const Field& gf2() { return Field::get(2, 1); }

constexpr Elem kAlpha = 2;
constexpr Elem kAlpha2 = 4;

// u = c0 a + c1 a^2
std::pair<Elem, Elem> u_coordinates(Elem u) {
  for (Elem c0 = 0; c0 < 2; ++c0) {
    for (Elem c1 = 0; c1 < 2; ++c1) {
      if (static_cast<Elem>((c0 ? kAlpha : 0) ^ (c1 ? kAlpha2 : 0)) == u) return {c0, c1};
    }
  }
  throw std::invalid_argument("element is not in U");
}

std::uint32_t mask_of(const Subspace& s) {
  std::uint32_t mask = 0;
  for_each_vector(s, [&](const Vector& v) {
    unsigned bits = 0;
    for (std::size_t j = 0; j < v.size(); ++j) bits |= static_cast<unsigned>(v[j]) << j;
    mask |= std::uint32_t{1} << bits;
  });
  return mask;
}

std::uint32_t sum_mask(std::uint32_t a, std::uint32_t b) {
  std::uint32_t out = 0;
  for (unsigned x = 0; x < 32; ++x) {
    if (!(a >> x & 1)) continue;
    for (unsigned y = 0; y < 32; ++y) {
      if (b >> y & 1) out |= std::uint32_t{1} << (x ^ y);
    }
  }
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InternalError("partition check failed: " + what);
}

}  // namespace

std::array<Elem, 4> u_elements() { return {0, kAlpha, 6, kAlpha2}; }

Vector embed(Elem w, Elem u) {
  if (w >= 8) throw std::invalid_argument("w is not a GF(8) element");
  const auto [c0, c1] = u_coordinates(u);
  return Vector(gf2(), {static_cast<Elem>(w & 1), static_cast<Elem>(w >> 1 & 1), static_cast<Elem>(w >> 2 & 1), c0, c1});
}

std::pair<Elem, Elem> split(const Vector& v) {
  if (v.size() != 5 || v.field().q() != 2) throw std::invalid_argument("not a vector of F_2^5");
  const Elem w = static_cast<Elem>(v[0] | v[1] << 1 | v[2] << 2);
  const Elem u = static_cast<Elem>((v[3] ? kAlpha : 0) ^ (v[4] ? kAlpha2 : 0));
  return {w, u};
}

PartitionModel build_partition() {
  const Field& f8 = gf8();
  const Field& f2 = gf2();
  const auto w_space = Subspace::span(f2, 5, {Vector::unit(f2, 5, 0), Vector::unit(f2, 5, 1), Vector::unit(f2, 5, 2)});
  auto make = [&](Elem beta) {
    return Subspace::span(f2, 5, {embed(f8.mul(beta, kAlpha), kAlpha), embed(f8.mul(beta, kAlpha2), kAlpha2)});
  };
  PartitionModel model{&f8, &f2, w_space, {make(0), make(1), make(2), make(3), make(4), make(5), make(6), make(7)}};

  for (Elem b = 0; b < 8; ++b) require(model.spaces[b].dim() == 2, "U_b has dimension 2");
  require(model.spaces[0] == Subspace::span(f2, 5, {Vector::unit(f2, 5, 3), Vector::unit(f2, 5, 4)}),
          "U_0 = {0} + U");

  // Each nonzero vector of V lies in exactly one of the nine spaces.
  const Subspace whole = Subspace::whole(f2, 5);
  bool covered_once = true;
  for_each_vector(whole, [&](const Vector& v) {
    if (v.is_zero()) return;
    int hits = model.w_space.contains(v) ? 1 : 0;
    if (hits) ++model.w_vectors;
    for (Elem b = 0; b < 8; ++b) {
      if (model.spaces[b].contains(v)) {
        ++hits;
        ++model.space_vectors[b];
      }
    }
    covered_once = covered_once && hits == 1;
  });
  require(covered_once, "nonzero vectors covered exactly once");
  require(model.w_vectors == 7, "7 nonzero vectors in W");
  for (auto c : model.space_vectors) require(c == 3, "3 nonzero vectors in each U_b");

  for (Elem b = 0; b < 8; ++b) {
    for (Elem g = b + 1; g < 8; ++g) {
      require(intersect(model.spaces[b], model.spaces[g]).dim() == 0, "pairwise trivial intersection");
      for (Elem d = g + 1; d < 8; ++d) {
        const std::array<Subspace, 3> triple{model.spaces[b], model.spaces[g], model.spaces[d]};
        require(sum(triple).dim() == 5, "every three spaces span V");
      }
    }
  }
  return model;
}

Elem epsilon(Elem beta, Elem gamma, Elem delta) {
  const Field& f = gf8();
  if (beta >= 8 || gamma >= 8 || delta >= 8) throw std::invalid_argument("epsilon: not GF(8) elements");
  if (beta == gamma || beta == delta || gamma == delta) throw std::invalid_argument("epsilon: elements not distinct");
  const Elem s = f.add(f.add(f.mul(beta, gamma), f.mul(beta, delta)), f.mul(gamma, delta));
  return f.pow(s, 4);
}

FieldElement epsilon(const FieldElement& beta, const FieldElement& gamma, const FieldElement& delta) {
  const Field& f = gf8();
  if (&beta.field() != &f || &gamma.field() != &f || &delta.field() != &f) {
    throw std::invalid_argument("epsilon: arguments must lie in GF(8)");
  }
  return FieldElement(f, epsilon(beta.value(), gamma.value(), delta.value()));
}

CodeParams code_params() { return CodeParams{5, 4, 3, 3, 2, 1, 2}; }

std::vector<TableRow> epsilon_table() {
  std::vector<TableRow> out;
  for (Elem b = 0; b < 8; ++b)
    for (Elem g = b + 1; g < 8; ++g)
      for (Elem d = g + 1; d < 8; ++d) out.push_back({b, g, d, epsilon(b, g, d)});
  return out;
}

StateSet code_states() {
  const PartitionModel model = build_partition();
  StateSet states(gf2(), code_params());
  for (const auto& row : epsilon_table()) {
    RepairingCollection c({model.spaces[row.beta], model.spaces[row.gamma], model.spaces[row.delta]});
    states.add_transition(c.key(), model.spaces[row.eps]);
    states.insert(std::move(c));
  }
  return states;
}

group::SeedState canonical_seed() {
  const PartitionModel model = build_partition();
  return group::SeedState{RepairingCollection({model.spaces[0], model.spaces[1], model.spaces[kAlpha]}),
                          model.spaces[epsilon(0, 1, kAlpha)], code_params()};
}

Elem Semilinear::operator()(Elem x) const {
  const Field& f = gf8();
  return f.add(f.mul(a, f.frobenius(x, i)), b);
}

Semilinear compose(const Semilinear& h, const Semilinear& g) {
  // h(g(x)) = c (a x^(2^i) + b)^(2^j) + d
  const Field& f = gf8();
  return Semilinear{f.mul(h.a, f.frobenius(g.a, h.i)), f.add(f.mul(h.a, f.frobenius(g.b, h.i)), h.b),
                    (g.i + h.i) % 3};
}

std::vector<Semilinear> semilinear_group() {
  std::vector<Semilinear> out;
  for (int i = 0; i < 3; ++i)
    for (Elem a = 1; a < 8; ++a)
      for (Elem b = 0; b < 8; ++b) out.push_back({a, b, i});
  return out;
}

group::LinearMap semilinear_map(const Semilinear& g) {
  const Field& f = gf8();
  if (g.a == 0 || g.a >= 8 || g.b >= 8) throw std::invalid_argument("semilinear map needs a != 0 in GF(8)");
  const int i = ((g.i % 3) + 3) % 3;
  Matrix m(5, 5);
  auto set_row = [&](std::size_t j, const Vector& image) {
    for (std::size_t c = 0; c < 5; ++c) m(j, c) = image[c];
  };
  for (std::size_t j = 0; j < 3; ++j) {
    const Elem w = static_cast<Elem>(1u << j);
    set_row(j, embed(f.mul(g.a, f.frobenius(w, i)), 0));
  }
  const std::array<Elem, 2> u_basis{kAlpha, kAlpha2};
  for (std::size_t j = 0; j < 2; ++j) {
    const Elem u = f.frobenius(u_basis[j], i);
    set_row(3 + j, embed(f.mul(g.b, u), u));
  }
  return group::LinearMap(gf2(), std::move(m));
}

std::string element_name(Elem x) {
  if (x == 0) return "0";
  const int k = gf8().log(x);
  if (k == 0) return "1";
  if (k == 1) return "a";
  return "a^" + std::to_string(k);
}

// ---------------------------------------------------------------- maximality

namespace {

class CliqueSearch {
 public:
  explicit CliqueSearch(std::vector<std::uint32_t> masks) : masks_(std::move(masks)), n_(masks_.size()) {
    sums_.assign(n_ * n_, 0);
    compatible_.assign(n_ * n_, false);
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        compatible_[a * n_ + b] = a != b && (masks_[a] & masks_[b]) == 1;
        if (compatible_[a * n_ + b]) sums_[a * n_ + b] = sum_mask(masks_[a], masks_[b]);
      }
    }
  }

  // Branch and bound; with collect_at set, records every clique of that size.
  void run(std::size_t collect_at) {
    collect_at_ = collect_at;
    std::vector<std::size_t> all(n_);
    for (std::size_t i = 0; i < n_; ++i) all[i] = i;
    std::vector<std::size_t> chosen;
    extend(chosen, all);
  }

  std::size_t best() const { return best_.size(); }
  const std::vector<std::size_t>& best_set() const { return best_; }
  const std::vector<std::vector<std::size_t>>& collected() const { return collected_; }
  std::uint64_t nodes() const { return nodes_; }

  bool admissible(const std::vector<std::size_t>& set) const {
    for (std::size_t x = 0; x < set.size(); ++x) {
      for (std::size_t y = x + 1; y < set.size(); ++y) {
        if (!compatible_[set[x] * n_ + set[y]]) return false;
        for (std::size_t z = y + 1; z < set.size(); ++z) {
          if (std::popcount(masks_[set[z]] & sums_[set[x] * n_ + set[y]]) != 2) return false;
        }
      }
    }
    return true;
  }

 private:
  void extend(std::vector<std::size_t>& chosen, const std::vector<std::size_t>& candidates) {
    ++nodes_;
    if (collect_at_ != 0) {
      if (chosen.size() == collect_at_) {
        collected_.push_back(chosen);
        return;
      }
      if (chosen.size() + candidates.size() < collect_at_) return;
    } else {
      if (chosen.size() > best_.size()) best_ = chosen;
      if (chosen.size() + candidates.size() <= best_.size()) return;
    }
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
      if (collect_at_ == 0 && chosen.size() + (candidates.size() - idx) <= best_.size()) return;
      if (collect_at_ != 0 && chosen.size() + (candidates.size() - idx) < collect_at_) return;
      const std::size_t v = candidates[idx];
      std::vector<std::size_t> next;
      for (std::size_t j = idx + 1; j < candidates.size(); ++j) {
        const std::size_t u = candidates[j];
        if (!compatible_[v * n_ + u]) continue;
        bool spans = true;
        for (std::size_t s : chosen) {
          if (std::popcount(masks_[u] & sums_[s * n_ + v]) != 2) {
            spans = false;
            break;
          }
        }
        if (spans) next.push_back(u);
      }
      chosen.push_back(v);
      extend(chosen, next);
      chosen.pop_back();
    }
  }

  std::vector<std::uint32_t> masks_;
  std::size_t n_;
  std::vector<std::uint32_t> sums_;
  std::vector<bool> compatible_;
  std::vector<std::size_t> best_;
  std::vector<std::vector<std::size_t>> collected_;
  std::size_t collect_at_ = 0;
  std::uint64_t nodes_ = 0;
};

std::array<std::uint8_t, 32> vector_permutation(const Matrix& m) {
  std::array<std::uint8_t, 32> perm{};
  for (unsigned x = 0; x < 32; ++x) {
    unsigned y = 0;
    for (unsigned j = 0; j < 5; ++j) {
      if (!(x >> j & 1)) continue;
      for (unsigned c = 0; c < 5; ++c) y ^= static_cast<unsigned>(m(j, c)) << c;
    }
    perm[x] = static_cast<std::uint8_t>(y);
  }
  return perm;
}

}  // namespace

MaxCollectionResult max_collection_check(const MaxCollectionOptions& options) {
  const Field& f2 = gf2();
  const auto subspaces = enumerate_subspaces(f2, 5, 2);
  std::vector<std::uint32_t> masks;
  masks.reserve(subspaces.size());
  for (const auto& s : subspaces) masks.push_back(mask_of(s));

  CliqueSearch search(masks);
  search.run(0);

  MaxCollectionResult result;
  result.maximum = search.best();
  result.nodes = search.nodes();
  for (auto i : search.best_set()) result.witness.push_back(subspaces[i]);

  const PartitionModel model = build_partition();
  std::vector<std::size_t> u_indices;
  for (const auto& u : model.spaces) {
    u_indices.push_back(static_cast<std::size_t>(std::lower_bound(subspaces.begin(), subspaces.end(), u) -
                                                 subspaces.begin()));
  }
  std::sort(u_indices.begin(), u_indices.end());
  result.u_spaces_attain = search.admissible(u_indices) && u_indices.size() == result.maximum;

  if (options.uniqueness) {
    CliqueSearch all(masks);
    all.run(result.maximum);
    result.nodes += all.nodes();
    result.maximum_collections = all.collected().size();

    // Orbit of {U_b} under GL(5,2) = <I + E_01, 5-cycle permutation>.
    Matrix transvection = Matrix::identity(5);
    transvection(0, 1) = 1;
    Matrix cycle(5, 5);
    for (std::size_t j = 0; j < 5; ++j) cycle(j, (j + 1) % 5) = 1;
    const std::array<std::array<std::uint8_t, 32>, 2> gens{vector_permutation(transvection),
                                                           vector_permutation(cycle)};
    std::vector<std::size_t> by_mask(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) by_mask[i] = i;
    std::sort(by_mask.begin(), by_mask.end(), [&](std::size_t a, std::size_t b) { return masks[a] < masks[b]; });
    auto index_of = [&](std::uint32_t mask) {
      auto it = std::lower_bound(by_mask.begin(), by_mask.end(), mask,
                                 [&](std::size_t i, std::uint32_t m) { return masks[i] < m; });
      return *it;
    };
    auto image = [&](const std::vector<std::size_t>& set, const std::array<std::uint8_t, 32>& perm) {
      std::vector<std::size_t> out;
      for (auto i : set) {
        std::uint32_t m = 0;
        for (unsigned x = 0; x < 32; ++x) {
          if (masks[i] >> x & 1) m |= std::uint32_t{1} << perm[x];
        }
        out.push_back(index_of(m));
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    std::set<std::vector<std::size_t>> orbit{u_indices};
    std::vector<std::vector<std::size_t>> queue{u_indices};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      for (const auto& g : gens) {
        auto next = image(queue[q], g);
        if (orbit.insert(next).second) queue.push_back(std::move(next));
      }
    }
    result.orbit_size = orbit.size();
    const std::set<std::vector<std::size_t>> found(all.collected().begin(), all.collected().end());
    result.unique_up_to_gl = found == orbit;
  }
  return result;
}

}  // namespace fsc::partition
