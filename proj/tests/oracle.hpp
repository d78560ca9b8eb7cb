#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "fsc/error.hpp"
#include "fsc/family.hpp"
#include "fsc/random.hpp"
#include "fsc/subspace.hpp"

namespace oracle {

using fsc::Elem;
using fsc::Field;

// Vectors of F_q^m as integers: coordinate i is base-q digit i.
class VectorSpace {
 public:
  VectorSpace(const Field& f, std::size_t m) : f_(f), m_(m), size_(1) {
    for (std::size_t i = 0; i < m; ++i) size_ *= static_cast<std::size_t>(f.q());
    add_.resize(size_ * size_);
    for (std::size_t a = 0; a < size_; ++a)
      for (std::size_t b = 0; b < size_; ++b) add_[a * size_ + b] = combine(a, b, 1);
  }

  std::size_t size() const { return size_; }
  std::size_t m() const { return m_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * size_ + b]; }
  std::uint32_t scale(std::uint32_t a, Elem c) const {
    std::uint32_t out = 0, place = 1;
    for (std::size_t i = 0; i < m_; ++i, a /= f_.q(), place *= f_.q()) out += f_.mul(a % f_.q(), c) * place;
    return out;
  }

  std::uint32_t encode(std::span<const Elem> v) const {
    std::uint32_t out = 0;
    for (std::size_t i = m_; i-- > 0;) out = out * f_.q() + v[i];
    return out;
  }
  fsc::Vector decode(std::uint32_t a) const {
    std::vector<Elem> v(m_);
    for (std::size_t i = 0; i < m_; ++i, a /= f_.q()) v[i] = a % f_.q();
    return fsc::Vector(f_, std::move(v));
  }

  // Linear closure by repeated addition of scalar multiples, as a sorted list.
  std::vector<std::uint32_t> closure_list(const std::vector<std::uint32_t>& gens) const {
    std::vector<std::uint32_t> members{0};
    seen_.assign(size_, false);
    seen_[0] = true;
    for (std::uint32_t g : gens) {
      if (seen_[g]) continue;
      const std::size_t before = members.size();
      for (int c = 1; c < f_.q(); ++c) {
        const std::uint32_t cg = scale(g, c);
        for (std::size_t j = 0; j < before; ++j) {
          const std::uint32_t v = add(members[j], cg);
          if (!seen_[v]) {
            seen_[v] = true;
            members.push_back(v);
          }
        }
      }
    }
    std::sort(members.begin(), members.end());
    return members;
  }

  std::vector<bool> closure(const std::vector<std::uint32_t>& gens) const {
    std::vector<bool> in(size_, false);
    for (auto v : closure_list(gens)) in[v] = true;
    return in;
  }

  std::vector<bool> members(const fsc::Subspace& s) const {
    std::vector<bool> in(size_, false);
    fsc::for_each_vector(s, [&](const fsc::Vector& v) { in[encode(v.coords())] = true; });
    return in;
  }

  fsc::Subspace random_subspace(fsc::Rng& rng, std::size_t gens) const {
    std::vector<fsc::Vector> vs;
    for (std::size_t i = 0; i < gens; ++i) vs.push_back(decode(fsc::uniform_index(rng, size_)));
    return fsc::Subspace::span(f_, m_, vs);
  }

  std::size_t weight(std::uint32_t a) const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < m_; ++i, a /= f_.q()) w += a % f_.q() != 0;
    return w;
  }

 private:
  std::uint32_t combine(std::size_t a, std::size_t b, Elem c) const {
    std::uint32_t out = 0, place = 1;
    for (std::size_t i = 0; i < m_; ++i, a /= f_.q(), b /= f_.q(), place *= f_.q())
      out += f_.add(a % f_.q(), f_.mul(b % f_.q(), c)) * place;
    return out;
  }

  const Field& f_;
  std::size_t m_;
  std::size_t size_;
  std::vector<std::uint32_t> add_;
  mutable std::vector<bool> seen_;
};

// Number of d-dim subspaces found by growing (d-1)-dim vector sets one vector at a
// time; returns 0 when the work estimate exceeds the budget.
inline std::uint64_t count_subspaces(const VectorSpace& vs, int q, std::size_t d, std::uint64_t budget) {
  std::uint64_t work = 0;
  for (std::size_t k = 0; k < d; ++k) work += fsc::gaussian_binomial(q, vs.m(), k) * vs.size();
  if (work > budget) return 0;
  std::set<std::vector<std::uint32_t>> level{{0}};
  for (std::size_t k = 1; k <= d; ++k) {
    std::set<std::vector<std::uint32_t>> next;
    for (const auto& base : level) {
      std::vector<bool> in(vs.size(), false);
      for (auto v : base) in[v] = true;
      std::vector<std::uint32_t> gens(base.begin() + 1, base.end());
      for (std::uint32_t v = 1; v < vs.size(); ++v) {
        if (in[v]) continue;
        gens.push_back(v);
        next.insert(vs.closure_list(gens));
        gens.pop_back();
      }
    }
    level = std::move(next);
  }
  return level.size();
}

inline std::size_t min_weight(const VectorSpace& vs, const std::vector<bool>& code) {
  std::size_t best = vs.m() + 1;
  for (std::uint32_t v = 1; v < vs.size(); ++v)
    if (code[v]) best = std::min(best, vs.weight(v));
  return best;
}

struct Counts {
  std::size_t intersections = 0;
  std::size_t sums = 0;
  std::size_t enumerations = 0;
  std::size_t enumerations_by_formula = 0;
  std::size_t beyond_cap = 0;
  std::size_t distances = 0;
  std::size_t mismatches = 0;
};

inline std::vector<std::pair<int, std::size_t>> small_shapes() {
  std::vector<std::pair<int, std::size_t>> out;
  for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32}) {
    std::size_t size = q;
    for (std::size_t m = 1; size <= 1024; ++m, size *= q) out.emplace_back(q, m);
  }
  return out;
}

// Compares intersect, sum, enumerate_subspaces and min_distance against the
// vector-set oracles for one (q, m).
inline Counts compare_shape(int q, std::size_t m, std::uint64_t seed, std::size_t pairs = 40,
                            std::uint64_t budget = 1u << 21) {
  const Field& f = Field::of_order(q);
  VectorSpace vs(f, m);
  fsc::Rng rng(seed);
  Counts c;
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto a = vs.random_subspace(rng, fsc::uniform_index(rng, m + 1));
    const auto b = vs.random_subspace(rng, fsc::uniform_index(rng, m + 1));
    const auto ma = vs.members(a), mb = vs.members(b);
    std::vector<bool> both(vs.size());
    std::vector<std::uint32_t> union_gens;
    for (std::uint32_t v = 0; v < vs.size(); ++v) {
      both[v] = ma[v] && mb[v];
      if (ma[v] || mb[v]) union_gens.push_back(v);
    }
    c.mismatches += vs.members(fsc::intersect(a, b)) != both;
    c.mismatches += vs.members(fsc::sum(a, b)) != vs.closure(union_gens);
    ++c.intersections;
    ++c.sums;
    if (a.dim() > 0) {
      const auto d = fsc::family::min_distance(a);
      c.mismatches += !d || *d != min_weight(vs, ma);
      ++c.distances;
    }
  }
  for (std::size_t d = 0; d <= m; ++d) {
    const std::uint64_t expected = fsc::gaussian_binomial(q, m, d);
    if (expected > fsc::kDefaultSubspaceCap) {
      bool capped = false;
      try {
        fsc::enumerate_subspaces(f, m, d);
      } catch (const fsc::CapExceeded&) {
        capped = true;
      }
      c.mismatches += !capped;
      ++c.beyond_cap;
      continue;
    }
    const auto listed = fsc::enumerate_subspaces(f, m, d);
    std::set<std::vector<std::uint32_t>> distinct;
    for (const auto& s : listed) {
      std::vector<std::uint32_t> list;
      fsc::for_each_vector(s, [&](const fsc::Vector& v) { list.push_back(vs.encode(v.coords())); });
      std::sort(list.begin(), list.end());
      c.mismatches += s.dim() != d || list != vs.closure_list(list);
      distinct.insert(std::move(list));
    }
    c.mismatches += distinct.size() != listed.size() || listed.size() != expected;
    const std::uint64_t brute = count_subspaces(vs, q, std::min(d, m - d), budget);
    if (brute != 0) {
      c.mismatches += brute != listed.size();
      ++c.enumerations;
    } else {
      ++c.enumerations_by_formula;
    }
  }
  return c;
}

}  // namespace oracle
