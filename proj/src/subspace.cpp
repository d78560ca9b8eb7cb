#include "fsc/subspace.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "fsc/error.hpp"

namespace fsc {

// ---------------------------------------------------------------- Vector

Vector::Vector(const Field& f, std::vector<Elem> coords) : field_(&f), coords_(std::move(coords)) {
  for (Elem c : coords_) f.element(c);
}

Vector::Vector(const Field& f, std::initializer_list<int> coords) : field_(&f) {
  coords_.reserve(coords.size());
  for (int c : coords) coords_.push_back(f.element(c));
}

Vector Vector::unit(const Field& f, std::size_t m, std::size_t i) {
  Vector v(f, m);
  v.coords_.at(i) = 1;
  return v;
}

bool Vector::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](Elem c) { return c == 0; });
}

void Vector::check(const Vector& o) const {
  if (o.field_ != field_) throw std::invalid_argument("vectors over different fields");
  if (o.size() != size()) throw std::invalid_argument("vectors of different length");
}

Vector Vector::operator+(const Vector& o) const {
  check(o);
  Vector out = *this;
  linalg::axpy(*field_, out.coords_, o.coords_, 1);
  return out;
}

Vector Vector::operator-(const Vector& o) const {
  check(o);
  Vector out = *this;
  linalg::axpy(*field_, out.coords_, o.coords_, field_->neg(1));
  return out;
}

Vector Vector::scaled(Elem c) const {
  Vector out = *this;
  for (auto& v : out.coords_) v = field_->mul(v, c);
  return out;
}

Elem Vector::dot(const Vector& o) const {
  check(o);
  return linalg::dot(*field_, coords_, o.coords_);
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(const Field& f, std::size_t m) : field_(&f), m_(m), basis_(0, m) { build_key(); }

Subspace::Subspace(const Field& f, std::size_t m, Matrix reduced, std::vector<std::size_t> pivots)
    : field_(&f), m_(m), basis_(std::move(reduced)), pivots_(std::move(pivots)) {
  basis_.truncate_rows(pivots_.size());
  build_key();
}

Subspace Subspace::row_space(const Field& f, Matrix rows) {
  const std::size_t m = rows.cols();
  auto pivots = linalg::rref(f, rows);
  return Subspace(f, m, std::move(rows), std::move(pivots));
}

Subspace Subspace::span(const Field& f, std::size_t m, std::span<const Vector> vectors) {
  Matrix rows(0, m);
  for (const auto& v : vectors) {
    if (&v.field() != &f) throw std::invalid_argument("span: vector over a different field");
    if (v.size() != m) throw std::invalid_argument("span: mixed ambient dimensions");
    rows.append_row(v.coords());
  }
  return row_space(f, std::move(rows));
}

Subspace Subspace::whole(const Field& f, std::size_t m) { return row_space(f, Matrix::identity(m)); }

void Subspace::build_key() {
  const bool wide = field_->q() > 256;
  key_.clear();
  key_.reserve(2 + basis_.data().size() * (wide ? 2 : 1));
  key_.push_back(static_cast<char>(m_));
  key_.push_back(static_cast<char>(dim()));
  for (Elem v : basis_.data()) {
    if (wide) key_.push_back(static_cast<char>(v >> 8));
    key_.push_back(static_cast<char>(v & 0xFF));
  }
}

Vector Subspace::basis_vector(std::size_t i) const {
  const auto r = basis_.row(i);
  return Vector(*field_, std::vector<Elem>(r.begin(), r.end()));
}

bool Subspace::contains(std::span<const Elem> v) const {
  if (v.size() != m_) throw std::invalid_argument("contains: vector has wrong ambient dimension");
  std::vector<Elem> rest(v.begin(), v.end());
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    const Elem c = rest[pivots_[i]];
    if (c != 0) linalg::axpy(*field_, rest, basis_.row(i), field_->neg(c));
  }
  return std::all_of(rest.begin(), rest.end(), [](Elem c) { return c == 0; });
}

bool Subspace::contains(const Vector& v) const {
  if (&v.field() != field_) throw std::invalid_argument("contains: vector over a different field");
  return contains(v.coords());
}

bool Subspace::is_subspace_of(const Subspace& other) const {
  require_same_ambient(*this, other);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!other.contains(basis_.row(i))) return false;
  }
  return true;
}

Vector Subspace::combine(std::span<const Elem> coeffs) const {
  if (coeffs.size() != dim()) throw std::invalid_argument("combine: wrong number of coefficients");
  std::vector<Elem> acc(m_, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) linalg::axpy(*field_, acc, basis_.row(i), coeffs[i]);
  return Vector(*field_, std::move(acc));
}

std::vector<Elem> Subspace::coordinates(std::span<const Elem> v) const {
  std::vector<Elem> out(dim());
  // In RREF, the coordinate on row i is the entry at pivot i.
  for (std::size_t i = 0; i < pivots_.size(); ++i) out[i] = v[pivots_[i]];
  const Vector back = combine(out);
  if (!std::equal(v.begin(), v.end(), back.coords().begin(), back.coords().end())) {
    throw std::invalid_argument("coordinates: vector is not in the subspace");
  }
  return out;
}

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (&a.field() != &b.field() || a.ambient() != b.ambient()) {
    throw std::invalid_argument("subspaces live in different ambient spaces");
  }
}

Subspace sum(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  Matrix rows(0, a.ambient());
  for (std::size_t i = 0; i < a.dim(); ++i) rows.append_row(a.basis().row(i));
  for (std::size_t i = 0; i < b.dim(); ++i) rows.append_row(b.basis().row(i));
  return Subspace::row_space(a.field(), std::move(rows));
}

Subspace sum(std::span<const Subspace> spaces) {
  if (spaces.empty()) throw std::invalid_argument("sum of an empty list has no ambient space");
  Matrix rows(0, spaces.front().ambient());
  for (const auto& s : spaces) {
    require_same_ambient(spaces.front(), s);
    for (std::size_t i = 0; i < s.dim(); ++i) rows.append_row(s.basis().row(i));
  }
  return Subspace::row_space(spaces.front().field(), std::move(rows));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  const std::size_t m = a.ambient();
  // Rows (a | a) and (b | 0); after elimination the rows with zero left block
  // carry a basis of the intersection in the right block.
  Matrix z(a.dim() + b.dim(), 2 * m);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < m; ++j) z(i, j) = z(i, m + j) = a.basis()(i, j);
  }
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (std::size_t j = 0; j < m; ++j) z(a.dim() + i, j) = b.basis()(i, j);
  }
  const auto pivots = linalg::rref(a.field(), z);
  Matrix rows(0, m);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] >= m) rows.append_row(z.row(r).subspan(m));
  }
  return Subspace::row_space(a.field(), std::move(rows));
}

// ---------------------------------------------------------------- enumeration

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    out *= base;
  }
  return out;
}

// Coefficient-space enumerations: all d-dim subspaces of F_q^n as RREF matrices,
// generated from pivot patterns plus free entries, memoised per (q, n, d).
const std::vector<Matrix>& coefficient_subspaces(const Field& f, std::size_t n, std::size_t d, std::uint64_t cap) {
  static std::mutex mutex;
  static std::map<std::tuple<const Field*, std::size_t, std::size_t>, std::unique_ptr<std::vector<Matrix>>> cache;

  const std::uint64_t count = gaussian_binomial(f.q(), n, d);
  if (count > cap) {
    throw CapExceeded("enumerating " + std::to_string(d) + "-dim subspaces of " + f.name() + "^" +
                      std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }

  std::lock_guard lock(mutex);
  auto& slot = cache[{&f, n, d}];
  if (slot) return *slot;

  auto out = std::make_unique<std::vector<Matrix>>();
  out->reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> piv(d);
  for (std::size_t i = 0; i < d; ++i) piv[i] = i;

  auto emit_pattern = [&]() {
    std::vector<bool> is_pivot(n, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = piv[i] + 1; c < n; ++c) {
        if (!is_pivot[c]) free.emplace_back(i, c);
      }
    }
    std::vector<Elem> vals(free.size(), 0);
    while (true) {
      Matrix m(d, n);
      for (std::size_t i = 0; i < d; ++i) m(i, piv[i]) = 1;
      for (std::size_t t = 0; t < free.size(); ++t) m(free[t].first, free[t].second) = vals[t];
      out->push_back(std::move(m));
      std::size_t t = free.size();
      while (t > 0) {
        --t;
        if (++vals[t] < f.q()) break;
        vals[t] = 0;
        if (t == 0) return;
      }
      if (free.empty()) return;
    }
  };

  if (d <= n) {
    while (true) {
      emit_pattern();
      std::size_t i = d;
      while (i > 0 && piv[i - 1] == n - d + i - 1) --i;
      if (i == 0) break;
      ++piv[i - 1];
      for (std::size_t j = i; j < d; ++j) piv[j] = piv[j - 1] + 1;
    }
  }
  if (out->size() != count) throw InternalError("subspace enumeration count disagrees with Gaussian binomial");
  slot = std::move(out);
  return *slot;
}

}  // namespace

std::uint64_t gaussian_binomial(int q, std::size_t m, std::size_t d) {
  if (d > m) return 0;
  // prod_{i<d} (q^{m-i} - 1) / (q^{i+1} - 1), evaluated incrementally; each partial
  // product is itself a Gaussian binomial, hence an integer.
  unsigned __int128 acc = 1;
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint64_t num = checked_pow(static_cast<std::uint64_t>(q), m - i);
    const std::uint64_t den = checked_pow(static_cast<std::uint64_t>(q), i + 1);
    if (num == std::numeric_limits<std::uint64_t>::max()) return num;
    acc = acc * (num - 1) / (den - 1);
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

void for_each_vector(const Subspace& a, const std::function<void(const Vector&)>& visit, std::uint64_t cap) {
  const std::uint64_t count = checked_pow(static_cast<std::uint64_t>(a.field().q()), a.dim());
  if (count > cap) throw CapExceeded("subspace has " + std::to_string(count) + " vectors, over cap");
  const Field& f = a.field();
  std::vector<Elem> coeffs(a.dim(), 0);
  while (true) {
    visit(a.combine(coeffs));
    std::size_t t = coeffs.size();
    while (true) {
      if (t == 0) return;
      --t;
      if (++coeffs[t] < f.q()) break;
      coeffs[t] = 0;
    }
  }
}

std::vector<Vector> vectors(const Subspace& a, std::uint64_t cap) {
  std::vector<Vector> out;
  for_each_vector(a, [&](const Vector& v) { out.push_back(v); }, cap);
  return out;
}

std::vector<Subspace> enumerate_subspaces(const Field& f, std::size_t m, std::size_t d, std::uint64_t cap) {
  if (d > m) throw std::invalid_argument("subspace dimension exceeds ambient dimension");
  const auto& mats = coefficient_subspaces(f, m, d, cap);
  std::vector<Subspace> out;
  out.reserve(mats.size());
  for (const auto& mat : mats) out.push_back(Subspace::row_space(f, mat));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Subspace> subspaces_of(const Subspace& space, std::size_t d, std::uint64_t cap) {
  if (d > space.dim()) return {};
  const Field& f = space.field();
  const auto& mats = coefficient_subspaces(f, space.dim(), d, cap);
  std::vector<Subspace> out;
  out.reserve(mats.size());
  for (const auto& coeff : mats) out.push_back(Subspace::row_space(f, linalg::multiply(f, coeff, space.basis())));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fsc
