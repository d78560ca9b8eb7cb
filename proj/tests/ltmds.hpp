#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fsc/family.hpp"

namespace ltmds {

struct Tally {
  std::size_t cases = 0;
  std::size_t literal_disagreements = 0;
  std::size_t corrected_disagreements = 0;
  std::size_t good = 0;
  std::optional<std::vector<fsc::Vector>> first_literal_counterexample;
  std::optional<fsc::Subspace> counterexample_u;
};

// Every w with nonzero w_i in U_i and every (s+1)-dim U inside span(w).
inline Tally exhaustive(const std::vector<fsc::Subspace>& spaces, std::size_t r, std::size_t s) {
  Tally t;
  const fsc::Field& f = spaces.front().field();
  const std::size_t m = spaces.front().ambient();
  std::vector<std::vector<fsc::Vector>> choices;
  for (const auto& u : spaces) {
    std::vector<fsc::Vector> nz;
    for (auto& v : fsc::vectors(u))
      if (!v.is_zero()) nz.push_back(v);
    choices.push_back(std::move(nz));
  }
  std::vector<fsc::Vector> w;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == r) {
      const auto span = fsc::Subspace::span(f, m, w);
      if (span.dim() < s + 1) return;
      for (const auto& u : fsc::subspaces_of(span, s + 1)) {
        const auto sides = fsc::family::ltmds_sides(spaces, w, u, r, s);
        ++t.cases;
        t.good += sides.replacements_good;
        if (!sides.literal_agrees()) {
          ++t.literal_disagreements;
          if (!t.first_literal_counterexample) {
            t.first_literal_counterexample = w;
            t.counterexample_u = u;
          }
        }
        t.corrected_disagreements += sides.replacements_good != sides.corrected();
      }
      return;
    }
    for (const auto& v : choices[i]) {
      w.push_back(v);
      rec(i + 1);
      w.pop_back();
    }
  };
  rec(0);
  return t;
}

}  // namespace ltmds
