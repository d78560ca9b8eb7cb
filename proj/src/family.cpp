#include "fsc/family.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_set>

#include "fsc/error.hpp"

namespace fsc::family {

std::size_t m_rs(std::size_t r, std::size_t s) {
  if (r <= s) throw std::invalid_argument("m_rs requires r > s");
  return (r - s) * (s + 1) + s * (s + 1) / 2;
}

std::size_t good_span_target(std::size_t r, std::size_t s, std::size_t j) {
  std::size_t target = (r - s) * (s + 1);
  for (std::size_t t = 0; t < j; ++t) target += s - t;
  return target;
}

CodeParams family_params(std::size_t r, std::size_t s, int q) {
  CodeParams p;
  p.m = m_rs(r, s);
  p.n = r + 1;
  p.k = r;
  p.r = r;
  p.alpha = s + 1;
  p.beta = 1;
  p.q = q;
  return p;
}

namespace {

template <typename Visit>
bool any_subset(std::size_t n, std::size_t size, Visit&& visit) {
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

std::size_t span_dim(std::span<const Subspace> spaces, const std::vector<std::size_t>& idx) {
  Matrix rows(0, spaces.front().ambient());
  for (auto i : idx) {
    for (std::size_t t = 0; t < spaces[i].dim(); ++t) rows.append_row(spaces[i].basis().row(t));
  }
  return linalg::rank(spaces.front().field(), std::move(rows));
}

Matrix rows_of(std::span<const Vector> w) {
  Matrix m(0, w.front().size());
  for (const auto& v : w) m.append_row(v.coords());
  return m;
}

// rest[i] = sum of all members except i
std::vector<Subspace> others(std::span<const Subspace> spaces) {
  std::vector<Subspace> rest;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    std::vector<Subspace> group;
    for (std::size_t j = 0; j < spaces.size(); ++j) {
      if (j != i) group.push_back(spaces[j]);
    }
    rest.push_back(group.empty() ? Subspace(spaces[i].field(), spaces[i].ambient()) : sum(group));
  }
  return rest;
}

bool separated(std::span<const Subspace> spaces, std::span<const Vector> w) {
  const auto rest = others(spaces);
  for (std::size_t i = 0; i < spaces.size() && i < w.size(); ++i) {
    if (rest[i].contains(w[i])) return false;
  }
  return true;
}

}  // namespace

bool is_good(std::span<const Subspace> spaces, std::size_t r, std::size_t s) {
  if (spaces.size() != r) throw std::invalid_argument("is_good: expected exactly r spaces");
  const std::size_t m = m_rs(r, s);
  for (const auto& u : spaces) {
    if (u.ambient() != m) throw std::invalid_argument("is_good: ambient dimension is not m_rs");
    if (u.dim() != s + 1) throw std::invalid_argument("is_good: member dimension is not s + 1");
    require_same_ambient(spaces.front(), u);
  }
  for (std::size_t j = 0; j <= s; ++j) {
    const std::size_t target = good_span_target(r, s, j);
    const bool bad = any_subset(r, r - s + j, [&](const std::vector<std::size_t>& idx) {
      return span_dim(spaces, idx) != target;
    });
    if (bad) return false;
  }
  return true;
}

std::optional<std::size_t> min_distance(const Subspace& code, std::uint64_t cap) {
  std::optional<std::size_t> best;
  for_each_vector(
      code,
      [&](const Vector& c) {
        std::size_t weight = 0;
        for (Elem x : c.coords()) weight += x != 0;
        if (weight > 0 && (!best || weight < *best)) best = weight;
      },
      cap);
  return best;
}

RepairCode repair_code(std::span<const Subspace> spaces, std::span<const Vector> w, const Subspace& u) {
  if (w.size() != spaces.size() || w.empty()) throw std::invalid_argument("repair_code: need one w per space");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!spaces[i].contains(w[i])) throw std::invalid_argument("repair_code: w_i is not in U_i");
  }
  const Field& f = u.field();
  const Matrix wm = rows_of(w);
  if (!u.is_subspace_of(Subspace::row_space(f, wm))) throw std::invalid_argument("repair_code: U is not inside span(w)");

  // sum c_j w_j in U  <=>  sum c_j (w_j mod U) = 0, with w_j mod U the residue after
  // eliminating U's pivots.
  Matrix residues = wm;
  for (std::size_t j = 0; j < residues.rows(); ++j) {
    auto row = residues.row(j);
    for (std::size_t i = 0; i < u.dim(); ++i) {
      const Elem c = row[u.pivots()[i]];
      if (c != 0) linalg::axpy(f, row, u.basis().row(i), f.neg(c));
    }
  }
  Subspace code = Subspace::row_space(f, linalg::left_kernel(f, residues));
  auto d = min_distance(code);
  return RepairCode{std::move(code), d};
}

bool mds_check(const Field& f, const Matrix& generator, std::size_t r, std::size_t kdim, std::size_t d_target) {
  if (generator.cols() != r) throw std::invalid_argument("mds_check: generator width differs from r");
  if (kdim == 0 || kdim > r || d_target != r - kdim + 1) return false;
  const Subspace code = Subspace::row_space(f, generator);
  if (code.dim() != kdim) return false;
  return min_distance(code) == d_target;
}

Matrix mds_generator(const Field& f, std::size_t r, std::size_t k) {
  if (k == 0 || k > r) throw std::invalid_argument("mds_generator: need 0 < k <= r");
  Matrix g(k, r);
  if (k == r) {
    g = Matrix::identity(r);
  } else if (k == 1) {
    for (std::size_t j = 0; j < r; ++j) g(0, j) = 1;
  } else if (k == r - 1) {
    for (std::size_t i = 0; i < k; ++i) {
      g(i, i) = 1;
      g(i, r - 1) = 1;
    }
  } else if (r <= static_cast<std::size_t>(f.q()) + 1) {
    const std::size_t finite = std::min<std::size_t>(r, static_cast<std::size_t>(f.q()));
    for (std::size_t j = 0; j < finite; ++j) {
      for (std::size_t t = 0; t < k; ++t) g(t, j) = f.pow(static_cast<Elem>(j), static_cast<long long>(t));
    }
    if (finite < r) g(k - 1, r - 1) = 1;  // point at infinity
  } else {
    for (const auto& code : enumerate_subspaces(f, r, k)) {
      if (min_distance(code) == r - k + 1) return code.basis();
    }
    throw std::invalid_argument("no [" + std::to_string(r) + "," + std::to_string(k) + "," +
                                std::to_string(r - k + 1) + "] MDS code over " + f.name());
  }
  if (!mds_check(f, g, r, k, r - k + 1)) throw InternalError("canonical MDS generator is not MDS");
  return g;
}

LtmdsSides ltmds_sides(std::span<const Subspace> spaces, std::span<const Vector> w, const Subspace& u, std::size_t r,
                       std::size_t s) {
  LtmdsSides sides;
  if (u.dim() == s + 1) {
    sides.replacements_good = true;
    for (std::size_t i = 0; i < r && sides.replacements_good; ++i) {
      std::vector<Subspace> replaced(spaces.begin(), spaces.end());
      replaced[i] = u;
      sides.replacements_good = is_good(replaced, r, s);
    }
  }
  const Field& f = u.field();
  const bool independent = linalg::rank(f, rows_of(w)) == r;
  const RepairCode code = repair_code(spaces, w, u);
  sides.independent_and_mds = independent && code.dimension() == s + 1 && code.distance == r - s;
  sides.separated = separated(spaces, w);
  return sides;
}

bool verify_ltmds(std::span<const Subspace> spaces, std::span<const Vector> w, const Subspace& u, std::size_t r,
                  std::size_t s) {
  const auto sides = ltmds_sides(spaces, w, u, r, s);
  if (sides.replacements_good != sides.corrected()) {
    throw InternalError("MDS characterisation: replacement goodness and MDS condition disagree");
  }
  return sides.replacements_good;
}

std::vector<Subspace> construct_good(std::size_t r, std::size_t s, int q) {
  if (r <= s) throw std::invalid_argument("construct_good requires r > s");
  const Field& f = Field::of_order(q);
  std::size_t m = r;
  std::vector<Matrix> bases;
  for (std::size_t i = 0; i < r; ++i) {
    Matrix b(1, r);
    b(0, i) = 1;
    bases.push_back(std::move(b));
  }
  for (std::size_t level = 1; level <= s; ++level) {
    const std::size_t extra = r - level;
    const Matrix g = mds_generator(f, r, extra);
    const std::size_t next_m = m + extra;
    for (std::size_t i = 0; i < r; ++i) {
      Matrix grown(bases[i].rows() + 1, next_m);
      for (std::size_t t = 0; t < bases[i].rows(); ++t) {
        for (std::size_t c = 0; c < m; ++c) grown(t, c) = bases[i](t, c);
      }
      for (std::size_t c = 0; c < extra; ++c) grown(bases[i].rows(), m + c) = g(c, i);
      bases[i] = std::move(grown);
    }
    m = next_m;
  }
  std::vector<Subspace> out;
  for (auto& b : bases) out.push_back(Subspace::row_space(f, std::move(b)));
  if (!is_good(out, r, s)) throw InternalError("construct_good produced a collection that is not good");
  return out;
}

FamilyStep family_step(std::span<const Subspace> spaces, std::size_t r, std::size_t s, const FamilyChoice& choice) {
  if (!is_good(spaces, r, s)) throw std::invalid_argument("family_step: input collection is not (r,s)-good");
  if (choice.w.size() != r) throw std::invalid_argument("family_step: need r vectors w");
  const Field& f = spaces.front().field();
  for (std::size_t i = 0; i < r; ++i) {
    if (!spaces[i].contains(choice.w[i])) throw std::invalid_argument("family_step: w_i is not in U_i");
  }
  const Matrix wm = rows_of(choice.w);
  if (linalg::rank(f, wm) != r) throw std::invalid_argument("family_step: w is not independent");
  if (!separated(spaces, choice.w)) {
    throw std::invalid_argument("family_step: some w_i lies in the sum of the other members");
  }
  if (!mds_check(f, choice.generator, r, s + 1, r - s)) {
    throw std::invalid_argument("family_step: generator does not span an [r,s+1,r-s] MDS code");
  }

  Subspace u = Subspace::row_space(f, linalg::multiply(f, choice.generator, wm));
  RepairCode code = repair_code(spaces, choice.w, u);
  if (!(code.code == Subspace::row_space(f, choice.generator))) {
    throw InternalError("family_step: recovered repair code differs from the chosen generator");
  }

  FamilyStep step{u, std::move(code), {}, {}};
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Subspace> replaced(spaces.begin(), spaces.end());
    replaced[i] = u;
    if (!is_good(replaced, r, s)) throw InternalError("family_step: replacement lost the good property");
    step.replacements.push_back(std::move(replaced));
  }
  for (std::size_t i = 0; i < r; ++i) {
    step.witness.helpers.push_back(i);
    step.witness.repair_spaces.push_back(Subspace::span(f, wm.cols(), {choice.w[i]}));
  }
  // Repair-space bases are the RREF of <w_i>, i.e. w_i scaled to a leading 1.
  Matrix repair_rows(0, wm.cols());
  for (const auto& w : step.witness.repair_spaces) repair_rows.append_row(w.basis().row(0));
  for (std::size_t l = 0; l < u.dim(); ++l) {
    auto coeffs = linalg::solve_left(f, repair_rows, u.basis().row(l));
    if (!coeffs) throw InternalError("family_step: newcomer not in the span of its repair spaces");
    step.witness.coefficients.push_back(std::move(*coeffs));
  }
  return step;
}

FamilyChoice random_choice(std::span<const Subspace> spaces, std::size_t r, std::size_t s, Rng& rng) {
  const Field& f = spaces.front().field();
  const std::size_t m = spaces.front().ambient();
  const auto rest = others(spaces);
  FamilyChoice choice;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 10000) throw std::runtime_error("random_choice: no independent w found");
    choice.w.clear();
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<Elem> coeffs(spaces[i].dim());
      Vector v(f, m);
      for (int tries = 0;; ++tries) {
        if (tries == 10000) throw std::runtime_error("random_choice: U_i lies in the sum of the other members");
        for (auto& c : coeffs) c = static_cast<Elem>(uniform_index(rng, static_cast<std::size_t>(f.q())));
        v = spaces[i].combine(coeffs);
        if (!rest[i].contains(v)) break;
      }
      choice.w.push_back(std::move(v));
    }
    if (linalg::rank(f, rows_of(choice.w)) == r) break;
  }
  const Matrix g = mds_generator(f, r, s + 1);
  std::vector<std::size_t> perm(r);
  for (std::size_t j = 0; j < r; ++j) perm[j] = j;
  for (std::size_t j = r; j > 1; --j) std::swap(perm[j - 1], perm[uniform_index(rng, j)]);
  choice.generator = Matrix(g.rows(), r);
  for (std::size_t j = 0; j < r; ++j) {
    const Elem scale = static_cast<Elem>(1 + uniform_index(rng, static_cast<std::size_t>(f.q() - 1)));
    for (std::size_t t = 0; t < g.rows(); ++t) choice.generator(t, j) = f.mul(scale, g(t, perm[j]));
  }
  return choice;
}

std::size_t cutset_bound(std::size_t k, std::size_t r, std::size_t alpha, std::size_t beta) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t flow = i < r ? (r - i) * beta : 0;
    total += std::min(alpha, flow);
  }
  return total;
}

StateSet family_closure(std::span<const Subspace> seed, std::size_t r, std::size_t s, std::size_t cap) {
  if (!is_good(seed, r, s)) throw std::invalid_argument("family_closure: seed is not (r,s)-good");
  const Field& f = seed.front().field();
  StateSet states(f, family_params(r, s, f.q()));

  std::vector<Matrix> mds_codes;
  for (const auto& code : enumerate_subspaces(f, r, s + 1)) {
    if (min_distance(code) == r - s) mds_codes.push_back(code.basis());
  }
  if (mds_codes.empty()) throw std::invalid_argument("family_closure: no [r,s+1,r-s] MDS code over " + f.name());

  std::deque<RepairingCollection> queue;
  {
    RepairingCollection c(std::vector<Subspace>(seed.begin(), seed.end()));
    states.insert(c);
    queue.push_back(std::move(c));
  }
  while (!queue.empty()) {
    const RepairingCollection c = std::move(queue.front());
    queue.pop_front();

    const auto rest = others(c.spaces());
    std::vector<std::vector<Vector>> choices(r);
    for (std::size_t i = 0; i < r; ++i) {
      for (auto& v : vectors(c[i])) {
        if (!rest[i].contains(v)) choices[i].push_back(std::move(v));
      }
      if (choices[i].empty()) throw InternalError("family_closure: collection is not good");
    }
    std::unordered_set<std::string> seen;
    std::vector<std::size_t> pos(r, 0);
    Matrix wm(r, c[0].ambient());
    bool done = false;
    while (!done) {
      for (std::size_t i = 0; i < r; ++i) {
        const auto coords = choices[i][pos[i]].coords();
        std::copy(coords.begin(), coords.end(), wm.row(i).begin());
      }
      if (linalg::rank(f, wm) == r) {
        for (const auto& g : mds_codes) {
          Subspace u = Subspace::row_space(f, linalg::multiply(f, g, wm));
          if (!seen.insert(u.key()).second) continue;
          for (std::size_t i = 0; i < r; ++i) {
            RepairingCollection next = c.replaced(i, u);
            if (states.contains(next)) continue;
            if (states.size() >= cap) {
              throw CapExceeded("family closure exceeds " + std::to_string(cap) + " collections");
            }
            states.insert(next);
            queue.push_back(std::move(next));
          }
        }
      }
      std::size_t t = r;
      while (true) {
        if (t == 0) {
          done = true;
          break;
        }
        --t;
        if (++pos[t] < choices[t].size()) break;
        pos[t] = 0;
      }
    }
  }
  return states;
}

StateSet all_good_collections(const Field& f, std::size_t r, std::size_t s, std::size_t cap) {
  const std::size_t m = m_rs(r, s);
  StateSet states(f, family_params(r, s, f.q()));
  const auto pool = enumerate_subspaces(f, m, s + 1);
  std::vector<std::size_t> chosen;

  // A subset of at most r - s members of a good collection is a direct sum.
  auto extends = [&](std::size_t cand) {
    std::vector<Subspace> group;
    bool ok = true;
    const std::size_t max_t = std::min(chosen.size(), r - s - 1);
    for (std::size_t t = 1; t <= max_t && ok; ++t) {
      any_subset(chosen.size(), t, [&](const std::vector<std::size_t>& idx) {
        group.clear();
        for (auto i : idx) group.push_back(pool[chosen[i]]);
        group.push_back(pool[cand]);
        if (sum(group).dim() != (t + 1) * (s + 1)) ok = false;
        return !ok;
      });
    }
    return ok;
  };

  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (chosen.size() == r) {
      std::vector<Subspace> members;
      for (auto i : chosen) members.push_back(pool[i]);
      if (is_good(members, r, s)) {
        if (states.size() >= cap) throw CapExceeded("more than " + std::to_string(cap) + " good collections");
        states.insert(RepairingCollection(std::move(members)));
      }
      return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      if (!extends(i)) continue;
      chosen.push_back(i);
      extend(i + 1);
      chosen.pop_back();
    }
  };
  extend(0);
  return states;
}

}  // namespace fsc::family
