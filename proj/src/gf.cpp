#include "fsc/gf.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace fsc {

namespace {

// Moduli fixed for reproducibility; GF(8) must use x^3 + x + 1.
const std::map<std::pair<int, int>, std::vector<int>>& fixed_moduli() {
  static const std::map<std::pair<int, int>, std::vector<int>> table = {
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
  };
  return table;
}

// Remainder of a mod b over GF(p); b monic. Both low-to-high.
std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& b, int p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const int lead = a.back() % p;
    if (lead != 0) {
      const std::size_t shift = a.size() - 1 - db;
      for (std::size_t i = 0; i <= db; ++i) {
        a[shift + i] = ((a[shift + i] - lead * b[i]) % p + p) % p;
      }
    }
    a.pop_back();
  }
  return a;
}

std::vector<int> digits_of(long long code, int p, std::size_t count) {
  std::vector<int> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = static_cast<int>(code % p);
    code /= p;
  }
  return out;
}

std::vector<int> prime_factors(int n) {
  std::vector<int> out;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(int n) noexcept {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_irreducible(const std::vector<int>& poly, int p) {
  if (poly.size() < 2 || poly.back() != 1) throw std::invalid_argument("polynomial must be monic, degree >= 1");
  const int deg = static_cast<int>(poly.size()) - 1;
  for (int d = 1; 2 * d <= deg; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long low = 0; low < count; ++low) {
      auto divisor = digits_of(low, p, static_cast<std::size_t>(d));
      divisor.push_back(1);
      const auto rem = poly_mod(poly, divisor, p);
      bool zero = true;
      for (int c : rem) zero = zero && c == 0;
      if (zero) return false;
    }
  }
  return true;
}

const Field& Field::get(int p, int e) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Field>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{p, e}];
  if (!slot) slot.reset(new Field(p, e));
  return *slot;
}

const Field& Field::of_order(int q) {
  if (q < 2) throw std::invalid_argument("field order must be >= 2");
  const auto factors = prime_factors(q);
  if (factors.size() != 1) throw std::invalid_argument("field order " + std::to_string(q) + " is not a prime power");
  int e = 0;
  for (int n = q; n > 1; n /= factors[0]) ++e;
  return get(factors[0], e);
}

Field::Field(int p, int e) : p_(p), e_(e), q_(1) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (e < 1) throw std::invalid_argument("extension degree must be >= 1");
  for (int i = 0; i < e; ++i) {
    if (q_ > kMaxOrder / p) throw std::invalid_argument("field order p^e exceeds " + std::to_string(kMaxOrder));
    q_ *= p;
  }

  if (auto it = fixed_moduli().find({p, e}); it != fixed_moduli().end()) {
    modulus_ = it->second;
  } else if (e == 1) {
    modulus_ = {0, 1};
  } else {
    // Lexicographically least monic irreducible (constant term varies fastest).
    for (long long low = 0; low < q_ && modulus_.empty(); ++low) {
      auto cand = digits_of(low, p, static_cast<std::size_t>(e));
      cand.push_back(1);
      if (is_irreducible(cand, p)) modulus_ = std::move(cand);
    }
    if (modulus_.empty()) throw std::logic_error("no irreducible modulus found for GF(" + std::to_string(q_) + ")");
  }
  if (e > 1 && !is_irreducible(modulus_, p)) throw std::logic_error("fixed modulus is reducible");

  // Search a primitive element with the polynomial multiplication, then build tables.
  const auto factors = prime_factors(q_ - 1);
  auto slow_pow = [this](Elem a, long long n) {
    Elem r = 1;
    while (n > 0) {
      if (n & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      n >>= 1;
    }
    return r;
  };
  auto is_primitive = [&](Elem g) {
    if (g == 0) return false;
    for (int f : factors) {
      if (slow_pow(g, (q_ - 1) / f) == 1) return false;
    }
    return true;
  };
  // Prefer x (encoded as p) when it is primitive.
  if (q_ == 2) {
    primitive_ = 1;
  } else if (e > 1 && is_primitive(static_cast<Elem>(p))) {
    primitive_ = static_cast<Elem>(p);
  } else {
    for (int g = 2; g < q_; ++g) {
      if (is_primitive(static_cast<Elem>(g))) {
        primitive_ = static_cast<Elem>(g);
        break;
      }
    }
  }

  exp_.assign(2 * static_cast<std::size_t>(q_ - 1), 0);
  log_.assign(static_cast<std::size_t>(q_), 0);
  Elem cur = 1;
  for (int k = 0; k < q_ - 1; ++k) {
    exp_[k] = cur;
    exp_[k + q_ - 1] = cur;
    log_[cur] = k;
    cur = slow_mul(cur, primitive_);
  }
  if (cur != 1) throw std::logic_error("primitive element has wrong order");
}

Elem Field::slow_mul(Elem a, Elem b) const {
  const auto da = digits_of(a, p_, static_cast<std::size_t>(e_));
  const auto db = digits_of(b, p_, static_cast<std::size_t>(e_));
  std::vector<int> prod(2 * static_cast<std::size_t>(e_) - 1, 0);
  for (int i = 0; i < e_; ++i) {
    for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
  }
  const auto rem = e_ == 1 ? prod : poly_mod(prod, modulus_, p_);
  long long v = 0;
  for (std::size_t i = rem.size(); i-- > 0;) v = v * p_ + rem[i];
  return static_cast<Elem>(v);
}

Elem Field::digitwise(Elem a, Elem b, int scale) const noexcept {
  int out = 0;
  int place = 1;
  for (int i = 0; i < e_; ++i) {
    const int da = a % p_;
    const int db = b % p_;
    out += ((da + scale * db) % p_) * place;
    a = static_cast<Elem>(a / p_);
    b = static_cast<Elem>(b / p_);
    place *= p_;
  }
  return static_cast<Elem>(out);
}

std::string Field::name() const { return "GF(" + std::to_string(q_) + ")"; }

Elem Field::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero in " + name());
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Elem Field::exp(long long k) const noexcept {
  const long long n = q_ - 1;
  return exp_[static_cast<std::size_t>(((k % n) + n) % n)];
}

Elem Field::pow(Elem a, long long n) const {
  if (a == 0) {
    if (n < 0) throw std::domain_error("negative power of zero");
    return n == 0 ? 1 : 0;
  }
  const long long order = q_ - 1;
  const long long k = (static_cast<long long>(log_[a]) * (((n % order) + order) % order)) % order;
  return exp_[static_cast<std::size_t>(k)];
}

Elem Field::frobenius(Elem a, long long i) const noexcept {
  if (a == 0) return 0;
  i = ((i % e_) + e_) % e_;
  long long power = 1;
  for (long long t = 0; t < i; ++t) power *= p_;
  return exp(static_cast<long long>(log_[a]) * power);
}

Elem Field::element(long long v) const {
  if (v < 0 || v >= q_) throw std::out_of_range("value " + std::to_string(v) + " is not an element of " + name());
  return static_cast<Elem>(v);
}

Elem FieldElement::same(const FieldElement& o) const {
  if (o.field_ != field_) throw std::invalid_argument("operands belong to different fields");
  return o.value_;
}

}  // namespace fsc
