#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fsc/gf.hpp"

namespace fsc {

/// Dense row-major matrix of field elements. The field is supplied per operation.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Elem& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  Elem operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<Elem> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Elem> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Elem> values);
  /// Keeps the first n rows.
  void truncate_rows(std::size_t n);

  const std::vector<Elem>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

namespace linalg {

/// In-place reduced row echelon form. Nonzero rows end up first, with pivot 1 and
/// zeros above and below every pivot. Returns the pivot columns (size = rank).
/// GF(2) matrices with at most 64 columns take the bit-packed path.
std::vector<std::size_t> rref(const Field& f, Matrix& a);

/// Reference elimination over any field.
std::vector<std::size_t> rref_generic(const Field& f, Matrix& a);

/// Bit-packed GF(2) elimination: bit c of a row word is column c. Rows are
/// reordered so that the first (returned size) rows form the RREF.
std::vector<std::size_t> rref_gf2(std::vector<std::uint64_t>& rows, std::size_t cols);

std::size_t rank(const Field& f, Matrix a);

/// a * b.
Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);

std::optional<Matrix> inverse(const Field& f, const Matrix& a);

/// Some x with x * a = b (row-vector convention: combination of the rows of a),
/// free coordinates set to zero; nullopt when b is not in the row space.
std::optional<std::vector<Elem>> solve_left(const Field& f, const Matrix& a, std::span<const Elem> b);

/// Basis (as rows, in RREF) of { c : c * a = 0 }.
Matrix left_kernel(const Field& f, const Matrix& a);

/// dst += c * src, element-wise.
void axpy(const Field& f, std::span<Elem> dst, std::span<const Elem> src, Elem c) noexcept;

Elem dot(const Field& f, std::span<const Elem> a, std::span<const Elem> b) noexcept;

}  // namespace linalg
}  // namespace fsc
