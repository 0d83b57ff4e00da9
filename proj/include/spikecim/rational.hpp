#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "spikecim/errors.hpp"

namespace spikecim {

// Exact rational on int64 with 128-bit intermediates. Small by intent:
// the reference oracle needs exact sums of d/(6-w) terms, nothing more.
class Rational64 {
 public:
  Rational64() : num_(0), den_(1) {}
  Rational64(std::int64_t n, std::int64_t d = 1) {
    if (d == 0) throw ValidationError("Rational64: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num_ = g ? n / g : n;
    den_ = g ? d / g : d;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational64 operator+(const Rational64& a, const Rational64& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational64 operator-(const Rational64& a, const Rational64& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational64 operator*(const Rational64& a, const Rational64& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational64 operator/(const Rational64& a, const Rational64& b) {
    if (b.num_ == 0) throw ValidationError("Rational64: division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  friend bool operator==(const Rational64& a, const Rational64& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational64& a, const Rational64& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }

 private:
  using i128 = __int128;

  static Rational64 make(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > std::numeric_limits<std::int64_t>::max() ||
        n < std::numeric_limits<std::int64_t>::min() ||
        d > std::numeric_limits<std::int64_t>::max())
      throw ValidationError("Rational64: overflow");
    Rational64 r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace spikecim
