#pragma once

#include <vector>

#include "fsc/storage.hpp"

namespace example1 {

inline const fsc::Field& field() { return fsc::Field::of_order(2); }

inline fsc::CodeParams params() { return {4, 4, 2, 3, 2, 1, 2}; }

inline fsc::Subspace space(std::initializer_list<int> a, std::initializer_list<int> b) {
  return fsc::Subspace::span(field(), 4, {fsc::Vector(field(), a), fsc::Vector(field(), b)});
}

// Node i stores <x, b> for the two basis vectors below.
inline std::vector<fsc::Subspace> nodes() {
  return {space({1, 0, 0, 0}, {0, 0, 1, 1}), space({0, 1, 0, 0}, {1, 0, 0, 1}), space({0, 0, 1, 0}, {1, 1, 0, 0}),
          space({0, 0, 0, 1}, {0, 1, 1, 0})};
}

inline std::vector<std::vector<std::vector<int>>> bases() {
  return {{{1, 0, 0, 0}, {0, 0, 1, 1}}, {{0, 1, 0, 0}, {1, 0, 0, 1}}, {{0, 0, 1, 0}, {1, 1, 0, 0}},
          {{0, 0, 0, 1}, {0, 1, 1, 0}}};
}

}  // namespace example1
