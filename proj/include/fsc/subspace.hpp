#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fsc/gf.hpp"
#include "fsc/linalg.hpp"

namespace fsc {

/// A vector of F_q^m.
class Vector {
 public:
  Vector(const Field& f, std::size_t m) : field_(&f), coords_(m, 0) {}
  Vector(const Field& f, std::vector<Elem> coords);
  Vector(const Field& f, std::initializer_list<int> coords);

  /// Unit vector e_i.
  static Vector unit(const Field& f, std::size_t m, std::size_t i);

  const Field& field() const noexcept { return *field_; }
  std::size_t size() const noexcept { return coords_.size(); }
  Elem operator[](std::size_t i) const noexcept { return coords_[i]; }
  Elem& operator[](std::size_t i) noexcept { return coords_[i]; }
  std::span<const Elem> coords() const noexcept { return coords_; }
  bool is_zero() const noexcept;

  Vector operator+(const Vector& o) const;
  Vector operator-(const Vector& o) const;
  Vector scaled(Elem c) const;
  Elem dot(const Vector& o) const;

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.field_ == b.field_ && a.coords_ == b.coords_;
  }

 private:
  void check(const Vector& o) const;

  const Field* field_;
  std::vector<Elem> coords_;
};

/// A subspace of F_q^m held as its reduced row echelon basis.
///
/// The RREF basis is unique per subspace, so equality, ordering, and hashing all
/// go through key(), a byte string of (m, dim, basis entries).
class Subspace {
 public:
  /// The zero subspace of F_q^m.
  Subspace(const Field& f, std::size_t m);

  static Subspace span(const Field& f, std::size_t m, std::span<const Vector> vectors);
  static Subspace span(const Field& f, std::size_t m, std::initializer_list<Vector> vectors) {
    return span(f, m, std::span<const Vector>(vectors.begin(), vectors.size()));
  }
  /// Row space of a matrix with m columns.
  static Subspace row_space(const Field& f, Matrix rows);
  static Subspace whole(const Field& f, std::size_t m);

  const Field& field() const noexcept { return *field_; }
  std::size_t ambient() const noexcept { return m_; }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const Matrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  Vector basis_vector(std::size_t i) const;
  const std::string& key() const noexcept { return key_; }

  bool contains(std::span<const Elem> v) const;
  bool contains(const Vector& v) const;
  bool is_subspace_of(const Subspace& other) const;

  /// sum_i coeffs[i] * basis row i.
  Vector combine(std::span<const Elem> coeffs) const;
  /// Coordinates of v in the RREF basis; v must lie in the subspace.
  std::vector<Elem> coordinates(std::span<const Elem> v) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.field_ == b.field_ && a.key_ == b.key_;
  }
  friend bool operator<(const Subspace& a, const Subspace& b) { return a.key_ < b.key_; }

 private:
  Subspace(const Field& f, std::size_t m, Matrix reduced, std::vector<std::size_t> pivots);
  void build_key();

  const Field* field_;
  std::size_t m_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
  std::string key_;
};

struct SubspaceHash {
  std::size_t operator()(const Subspace& s) const noexcept { return std::hash<std::string>{}(s.key()); }
};

/// Throws std::invalid_argument unless both live in the same F_q^m.
void require_same_ambient(const Subspace& a, const Subspace& b);

Subspace sum(const Subspace& a, const Subspace& b);
Subspace sum(std::span<const Subspace> spaces);
/// Zassenhaus two-block elimination.
Subspace intersect(const Subspace& a, const Subspace& b);

inline constexpr std::uint64_t kDefaultVectorCap = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kDefaultSubspaceCap = 1000000;

/// Visits all q^dim vectors, coefficient tuples in lexicographic order (last
/// coefficient fastest). Throws CapExceeded beyond cap.
void for_each_vector(const Subspace& a, const std::function<void(const Vector&)>& visit,
                     std::uint64_t cap = kDefaultVectorCap);
std::vector<Vector> vectors(const Subspace& a, std::uint64_t cap = kDefaultVectorCap);

/// Number of d-dimensional subspaces of F_q^m; saturates at UINT64_MAX.
std::uint64_t gaussian_binomial(int q, std::size_t m, std::size_t d);

/// Every d-dimensional subspace of F_q^m exactly once, sorted by key.
std::vector<Subspace> enumerate_subspaces(const Field& f, std::size_t m, std::size_t d,
                                          std::uint64_t cap = kDefaultSubspaceCap);

/// Every d-dimensional subspace of the given space, sorted by key.
std::vector<Subspace> subspaces_of(const Subspace& space, std::size_t d, std::uint64_t cap = kDefaultSubspaceCap);

}  // namespace fsc
