#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fairdiv {

/// Exact rational over 64-bit integers, gcd-normalized, denominator > 0.
/// Comparisons cross-multiply in 128-bit so int64 operands never overflow.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational reciprocal() const {
    if (num_ == 0) throw std::domain_error("Rational: reciprocal of zero");
    return Rational(den_, num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  Rational operator*(const Rational& o) const {
    // Cross-reduce before multiplying so intermediate products stay small.
    const std::int64_t g1 = std::gcd(num_, o.den_);
    const std::int64_t g2 = std::gcd(o.num_, den_);
    return Rational((num_ / g1) * (o.num_ / g2), (den_ / g2) * (o.den_ / g1));
  }

  /// a/b compared against integer ratio p/q without constructing a Rational.
  static int compare(std::int64_t a, std::int64_t b, std::int64_t p, std::int64_t q) {
    const __int128 lhs = static_cast<__int128>(a) * q;
    const __int128 rhs = static_cast<__int128>(p) * b;
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
  }

  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Decimal expansion with the given number of significant digits.
  std::string to_decimal(int significant = 12) const;

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace fairdiv
