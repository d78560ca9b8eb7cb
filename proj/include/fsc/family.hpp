#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fsc/random.hpp"
#include "fsc/storage.hpp"
#include "fsc/subspace.hpp"

namespace fsc::family {

/// (r - s)(s + 1) + s(s + 1)/2; requires r > s >= 0.
std::size_t m_rs(std::size_t r, std::size_t s);

/// Required span dimension of any r - s + j members of an (r, s)-good collection:
/// (r - s)(s + 1) + s + (s - 1) + ... + (s + 1 - j).
std::size_t good_span_target(std::size_t r, std::size_t s, std::size_t j);

/// Parameters (m_rs; n = r + 1, k = r, r, alpha = s + 1, beta = 1) over GF(q).
CodeParams family_params(std::size_t r, std::size_t s, int q);

/// (r, s)-goodness, checked over every subset of size r - s + j, j = 0..s.
/// Throws std::invalid_argument when the count, ambient or member dimensions are off.
bool is_good(std::span<const Subspace> spaces, std::size_t r, std::size_t s);

/// Exhaustive minimum weight over nonzero codewords; nullopt for the zero code.
std::optional<std::size_t> min_distance(const Subspace& code, std::uint64_t cap = kDefaultVectorCap);

/// The code C = { c in F^r : sum_j c_j w_j in U }.
struct RepairCode {
  Subspace code;
  std::optional<std::size_t> distance;

  std::size_t length() const { return code.ambient(); }
  std::size_t dimension() const { return code.dim(); }
  /// [r, k, r - k + 1] with k = dimension() > 0.
  bool is_mds() const { return dimension() > 0 && distance == length() - dimension() + 1; }
};

/// Requires w_i in U_i and U inside span(w). C is the left kernel of the w_i
/// reduced modulo U.
RepairCode repair_code(std::span<const Subspace> spaces, std::span<const Vector> w, const Subspace& u);

/// Row space of the generator has dimension kdim and minimum distance d_target,
/// and d_target = r - kdim + 1.
bool mds_check(const Field& f, const Matrix& generator, std::size_t r, std::size_t kdim, std::size_t d_target);

/// Canonical k x r MDS generator: identity, repetition and parity codes for the
/// trivial shapes, extended Reed-Solomon (points in element order, then infinity)
/// otherwise, exhaustive search as a last resort. Throws std::invalid_argument if
/// no [r, k, r - k + 1] code exists over the field.
Matrix mds_generator(const Field& f, std::size_t r, std::size_t k);

/// Both sides of the MDS characterisation of good replacements.
///
/// Independence plus the MDS property alone is not sufficient: w_i may also have to
/// avoid the span of the other members (e.g. w = (e3, e4, e2) in the canonical
/// (3,1) collection gives the even-weight code, yet U meets U_3). The corrected
/// side adds that separation condition.
struct LtmdsSides {
  bool replacements_good = false;    // every member-i replacement by U is (r, s)-good
  bool independent_and_mds = false;  // w independent and C is [r, s+1, r-s]
  bool separated = false;            // no w_i lies in the sum of the other members

  bool corrected() const { return independent_and_mds && separated; }
  bool literal_agrees() const { return replacements_good == independent_and_mds; }
};
LtmdsSides ltmds_sides(std::span<const Subspace> spaces, std::span<const Vector> w, const Subspace& u,
                       std::size_t r, std::size_t s);

/// Evaluates goodness of the replacements and the corrected condition
/// independently; throws InternalError if they disagree.
bool verify_ltmds(std::span<const Subspace> spaces, std::span<const Vector> w, const Subspace& u, std::size_t r,
                  std::size_t s);

/// A deterministic (r, s)-good collection over GF(q). Built up from the coordinate
/// axes (s = 0); each level s-1 -> s appends r - s coordinates and adds to member i
/// the i-th column of an [r, r - s] MDS generator in the new coordinates.
std::vector<Subspace> construct_good(std::size_t r, std::size_t s, int q);

struct FamilyChoice {
  std::vector<Vector> w;
  Matrix generator;  // (s+1) x r, spans an [r, s+1, r-s] MDS code
};

struct FamilyStep {
  Subspace newcomer;
  RepairCode code;
  /// Replacement i: spaces with member i swapped for the newcomer.
  std::vector<std::vector<Subspace>> replacements;
  /// beta = 1 witness, W_i = <w_i>.
  RepairWitness witness;
};

/// One repair of the family code: U = { sum_j c_j w_j : c in C }.
FamilyStep family_step(std::span<const Subspace> spaces, std::size_t r, std::size_t s, const FamilyChoice& choice);

/// Random independent w_i in U_i outside the sum of the other members and a column-scaled, column-permuted canonical MDS
/// generator.
FamilyChoice random_choice(std::span<const Subspace> spaces, std::size_t r, std::size_t s, Rng& rng);

/// sum_{i<k} min(alpha, (r - i) beta), with negative (r - i) treated as 0.
std::size_t cutset_bound(std::size_t k, std::size_t r, std::size_t alpha, std::size_t beta);

/// All collections reachable from the seed by family steps (every admissible w,
/// every MDS code).
/// Throws CapExceeded when more than cap collections are reached.
StateSet family_closure(std::span<const Subspace> seed, std::size_t r, std::size_t s, std::size_t cap = 1000000);

/// Every (r, s)-good collection in F_q^{m_rs} (as unordered sets), for small cases.
StateSet all_good_collections(const Field& f, std::size_t r, std::size_t s, std::size_t cap = 1000000);

}  // namespace fsc::family
