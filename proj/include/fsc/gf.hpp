#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fsc {

/// Field elements are integers in [0, q) read as base-p digit strings:
/// value = sum c_j p^j  <->  sum c_j x^j (little-endian polynomial basis).
using Elem = std::uint16_t;

/// Exact arithmetic in GF(p^e) for q = p^e <= 4096.
///
/// Instances are interned: Field::get(p, e) always returns the same object, so
/// fields compare by address and references stay valid for the program's lifetime.
class Field {
 public:
  static constexpr int kMaxOrder = 4096;

  static const Field& get(int p, int e);
  /// Field of order q; q must be a prime power.
  static const Field& of_order(int q);

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  int p() const noexcept { return p_; }
  int e() const noexcept { return e_; }
  int q() const noexcept { return q_; }
  /// Monic modulus, coefficients low to high (size e + 1).
  const std::vector<int>& modulus() const noexcept { return modulus_; }
  Elem primitive() const noexcept { return primitive_; }
  std::string name() const;

  Elem add(Elem a, Elem b) const noexcept {
    if (p_ == 2) return static_cast<Elem>(a ^ b);
    return digitwise(a, b, 1);
  }
  Elem sub(Elem a, Elem b) const noexcept {
    if (p_ == 2) return static_cast<Elem>(a ^ b);
    return digitwise(a, b, p_ - 1);
  }
  Elem neg(Elem a) const noexcept { return sub(0, a); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  /// Throws std::domain_error for a == 0.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  /// a^n for any integer n (negative n requires a != 0).
  Elem pow(Elem a, long long n) const;
  /// a^(p^i), with i taken modulo e.
  Elem frobenius(Elem a, long long i) const noexcept;

  /// Discrete log base primitive(); a != 0.
  int log(Elem a) const noexcept { return log_[a]; }
  Elem exp(long long k) const noexcept;

  /// Throws std::out_of_range unless v < q.
  Elem element(long long v) const;

 private:
  Field(int p, int e);
  Elem digitwise(Elem a, Elem b, int scale) const noexcept;
  Elem slow_mul(Elem a, Elem b) const;

  int p_;
  int e_;
  int q_;
  std::vector<int> modulus_;
  Elem primitive_ = 1;
  std::vector<Elem> exp_;  // length 2(q-1) so log sums need no reduction
  std::vector<int> log_;
};

bool is_prime(int n) noexcept;

/// Exhaustive irreducibility test over GF(p): trial division by every monic
/// polynomial of degree 1..deg/2. Coefficients low to high, leading coefficient 1.
bool is_irreducible(const std::vector<int>& poly, int p);

/// A field element bound to its field. Mixing elements of different fields throws
/// std::invalid_argument.
class FieldElement {
 public:
  FieldElement(const Field& field, long long value) : field_(&field), value_(field.element(value)) {}

  const Field& field() const noexcept { return *field_; }
  Elem value() const noexcept { return value_; }

  FieldElement operator+(const FieldElement& o) const { return {*field_, field_->add(value_, same(o))}; }
  FieldElement operator-(const FieldElement& o) const { return {*field_, field_->sub(value_, same(o))}; }
  FieldElement operator*(const FieldElement& o) const { return {*field_, field_->mul(value_, same(o))}; }
  FieldElement operator/(const FieldElement& o) const { return {*field_, field_->div(value_, same(o))}; }
  FieldElement operator-() const { return {*field_, field_->neg(value_)}; }
  FieldElement inv() const { return {*field_, field_->inv(value_)}; }
  FieldElement pow(long long n) const { return {*field_, field_->pow(value_, n)}; }
  FieldElement frobenius(long long i) const { return {*field_, field_->frobenius(value_, i)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

 private:
  Elem same(const FieldElement& o) const;

  const Field* field_;
  Elem value_;
};

}  // namespace fsc
