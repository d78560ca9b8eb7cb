#include "fsc/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace fsc {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

void Matrix::append_row(std::span<const Elem> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("row length does not match matrix width");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void Matrix::truncate_rows(std::size_t n) {
  if (n >= rows_) return;
  rows_ = n;
  data_.resize(rows_ * cols_);
}

namespace linalg {

void axpy(const Field& f, std::span<Elem> dst, std::span<const Elem> src, Elem c) noexcept {
  if (c == 0) return;
  if (f.p() == 2 && c == 1) {
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] ^= src[j];
    return;
  }
  for (std::size_t j = 0; j < dst.size(); ++j) {
    if (src[j] != 0) dst[j] = f.add(dst[j], f.mul(c, src[j]));
  }
}

Elem dot(const Field& f, std::span<const Elem> a, std::span<const Elem> b) noexcept {
  Elem acc = 0;
  for (std::size_t j = 0; j < a.size(); ++j) acc = f.add(acc, f.mul(a[j], b[j]));
  return acc;
}

std::vector<std::size_t> rref_generic(const Field& f, Matrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < a.cols() && lead < a.rows(); ++c) {
    std::size_t sel = lead;
    while (sel < a.rows() && a(sel, c) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != lead) {
      auto r1 = a.row(sel);
      auto r2 = a.row(lead);
      std::swap_ranges(r1.begin(), r1.end(), r2.begin());
    }
    const Elem scale = f.inv(a(lead, c));
    for (auto& v : a.row(lead)) v = f.mul(v, scale);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r != lead && a(r, c) != 0) axpy(f, a.row(r), a.row(lead), f.neg(a(r, c)));
    }
    pivots.push_back(c);
    ++lead;
  }
  return pivots;
}

std::vector<std::size_t> rref_gf2(std::vector<std::uint64_t>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows.size(); ++c) {
    const std::uint64_t bit = std::uint64_t{1} << c;
    std::size_t sel = lead;
    while (sel < rows.size() && !(rows[sel] & bit)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[lead]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != lead && (rows[r] & bit)) rows[r] ^= rows[lead];
    }
    pivots.push_back(c);
    ++lead;
  }
  return pivots;
}

std::vector<std::size_t> rref(const Field& f, Matrix& a) {
  if (f.q() != 2 || a.cols() > 64) return rref_generic(f, a);
  std::vector<std::uint64_t> packed(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a(r, c)) packed[r] |= std::uint64_t{1} << c;
    }
  }
  auto pivots = rref_gf2(packed, a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = static_cast<Elem>((packed[r] >> c) & 1U);
  }
  return pivots;
}

std::size_t rank(const Field& f, Matrix a) { return rref(f, a).size(); }

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix dimensions do not agree");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) != 0) axpy(f, out.row(i), b.row(k), a(i, k));
    }
  }
  return out;
}

std::optional<Matrix> inverse(const Field& f, const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const auto pivots = rref(f, aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  }
  return inv;
}

std::optional<std::vector<Elem>> solve_left(const Field& f, const Matrix& a, std::span<const Elem> b) {
  if (b.size() != a.cols()) throw std::invalid_argument("right-hand side has wrong length");
  // Transpose to column-equations: sum_i x_i a(i, c) = b_c.
  const std::size_t unknowns = a.rows();
  Matrix sys(a.cols(), unknowns + 1);
  for (std::size_t c = 0; c < a.cols(); ++c) {
    for (std::size_t i = 0; i < unknowns; ++i) sys(c, i) = a(i, c);
    sys(c, unknowns) = b[c];
  }
  const auto pivots = rref(f, sys);
  std::vector<Elem> x(unknowns, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == unknowns) return std::nullopt;
    x[pivots[r]] = sys(r, unknowns);
  }
  return x;
}

Matrix left_kernel(const Field& f, const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix aug(n, a.cols() + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols() + i) = 1;
  }
  const auto pivots = rref(f, aug);
  Matrix out(0, n);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] >= a.cols()) {
      auto row = aug.row(r).subspan(a.cols());
      out.append_row(row);
    }
  }
  // Rows with left part zero are already in RREF on the right block.
  return out;
}

}  // namespace linalg
}  // namespace fsc
