#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fsc/groupsearch.hpp"
#include "fsc/storage.hpp"
#include "fsc/subspace.hpp"

namespace fsc::partition {

/// V = F_2^5 = W + U with W = GF(8) (coordinates 0..2, basis 1, a, a^2) and
/// U = {0, a, a^2, a^4} (coordinates 3..4, basis a, a^2), where a^3 = a + 1.
struct PartitionModel {
  const Field* f8;
  const Field* f2;
  Subspace w_space;                 // W + {0}
  std::array<Subspace, 8> spaces;   // spaces[b] = U_b = {(b u, u) : u in U}
  std::size_t w_vectors = 0;        // nonzero vectors of W + {0}
  std::array<std::size_t, 8> space_vectors{};
};

/// The GF(8) elements of U, in increasing value order.
std::array<Elem, 4> u_elements();

/// (w, u) as a vector of F_2^5; throws std::invalid_argument when u is not in U.
Vector embed(Elem w, Elem u);
/// Inverse of embed.
std::pair<Elem, Elem> split(const Vector& v);

/// Builds the spaces and checks the partition, pairwise and triple conditions by
/// enumerating all 32 vectors; throws InternalError on any failure.
PartitionModel build_partition();

/// The square root of bg + bd + gd (computed as x^4). Throws std::invalid_argument
/// unless the three elements are distinct.
Elem epsilon(Elem beta, Elem gamma, Elem delta);
FieldElement epsilon(const FieldElement& beta, const FieldElement& gamma, const FieldElement& delta);

CodeParams code_params();

struct TableRow {
  Elem beta, gamma, delta, eps;
};
/// All 56 triples beta < gamma < delta with their epsilon.
std::vector<TableRow> epsilon_table();

/// The 56 collections {U_b, U_g, U_d} with newcomer U_eps recorded as transition.
StateSet code_states();

/// ({U_0, U_1, U_a}, U_{eps(0,1,a)}).
group::SeedState canonical_seed();

/// g(x) = a x^(2^i) + b on GF(8), a != 0.
struct Semilinear {
  Elem a = 1;
  Elem b = 0;
  int i = 0;

  Elem operator()(Elem x) const;
  friend bool operator==(const Semilinear&, const Semilinear&) = default;
};

/// h o g.
Semilinear compose(const Semilinear& h, const Semilinear& g);

/// All 168 maps, ordered by (i, a, b).
std::vector<Semilinear> semilinear_group();

/// L_g(w, u) = (a w^(2^i) + b u^(2^i), u^(2^i)) as a 5x5 matrix over GF(2).
group::LinearMap semilinear_map(const Semilinear& g);

/// Element written as 0, 1, a, a^2, ..., a^6.
std::string element_name(Elem x);

struct MaxCollectionOptions {
  /// Also collect every maximum collection and compare with the GL(5,2) orbit of
  /// {U_b}.
  bool uniqueness = false;
};

struct MaxCollectionResult {
  std::size_t maximum = 0;
  std::vector<Subspace> witness;   // first maximum collection found
  bool u_spaces_attain = false;    // the 8 spaces U_b satisfy both conditions
  std::uint64_t nodes = 0;
  // uniqueness mode only
  std::size_t maximum_collections = 0;
  std::size_t orbit_size = 0;
  bool unique_up_to_gl = false;
};

/// Largest set of 2-dim subspaces of F_2^5 with pairwise trivial intersections and
/// every three spanning, by exhaustive branch and bound.
MaxCollectionResult max_collection_check(const MaxCollectionOptions& options = {});

}  // namespace fsc::partition
