#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hyperbell {

// Exact dyadic rational num / 2^den_pow, kept fully reduced (odd numerator,
// or zero, or den_pow == 0). All state-vector correlations and outcome
// probabilities in this library are dyadic, so this one type carries every
// exact value end to end; floats appear only at the LP boundary and in the
// CLI display path.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  constexpr Dyadic(std::int64_t integer) : num_(integer) {}  // NOLINT(runtime/explicit)

  static Dyadic ratio(std::int64_t num, int den_pow) {
    if (den_pow < 0) throw std::invalid_argument("Dyadic: negative denominator power");
    Dyadic d;
    d.num_ = num;
    d.den_pow_ = den_pow;
    d.reduce();
    return d;
  }

  // 2^e for any (possibly negative) exponent.
  static Dyadic pow2(int e) {
    if (e >= 0) {
      if (e > 62) throw std::overflow_error("Dyadic: pow2 exponent too large");
      return Dyadic(std::int64_t(1) << e);
    }
    return ratio(1, -e);
  }

  std::int64_t num() const { return num_; }
  int den_pow() const { return den_pow_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_pow_ == 0; }

  Dyadic operator-() const {
    Dyadic d = *this;
    d.num_ = -d.num_;
    return d;
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const int d = a.den_pow_ > b.den_pow_ ? a.den_pow_ : b.den_pow_;
    const Int128 s = shifted(a.num_, d - a.den_pow_) + shifted(b.num_, d - b.den_pow_);
    return from_wide(s, d);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return from_wide(Int128(a.num_) * Int128(b.num_), a.den_pow_ + b.den_pow_);
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.num_ == b.num_ && a.den_pow_ == b.den_pow_;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    const int d = a.den_pow_ > b.den_pow_ ? a.den_pow_ : b.den_pow_;
    return shifted(a.num_, d - a.den_pow_) < shifted(b.num_, d - b.den_pow_);
  }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return b < a; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return !(a < b); }

  Dyadic abs() const { return num_ < 0 ? -*this : *this; }

  double to_double() const;
  std::string str() const;

 private:
  using Int128 = __int128;

  static Int128 shifted(std::int64_t v, int sh) {
    if (sh > 120) throw std::overflow_error("Dyadic: denominator mismatch too large");
    Int128 w = v;
    for (; sh >= 60; sh -= 60) {
      w <<= 60;
      check_wide(w);
    }
    return w << sh;
  }

  static void check_wide(Int128 w) {
    // keep room for one more 60-bit shift
    const Int128 lim = Int128(1) << 66;
    if (w > lim || w < -lim) throw std::overflow_error("Dyadic: value out of range");
  }

  static Dyadic from_wide(Int128 w, int den_pow) {
    while (w != 0 && (w & 1) == 0 && den_pow > 0) {
      w >>= 1;
      --den_pow;
    }
    if (w > Int128(INT64_MAX) || w < Int128(INT64_MIN))
      throw std::overflow_error("Dyadic: numerator overflow");
    Dyadic d;
    d.num_ = static_cast<std::int64_t>(w);
    d.den_pow_ = d.num_ == 0 ? 0 : den_pow;
    return d;
  }

  void reduce() {
    if (num_ == 0) {
      den_pow_ = 0;
      return;
    }
    while ((num_ & 1) == 0 && den_pow_ > 0) {
      num_ >>= 1;
      --den_pow_;
    }
  }

  std::int64_t num_ = 0;
  int den_pow_ = 0;
};

inline double Dyadic::to_double() const {
  double v = static_cast<double>(num_);
  for (int k = den_pow_; k > 0; --k) v *= 0.5;
  return v;
}

inline std::string Dyadic::str() const {
  if (den_pow_ == 0) return std::to_string(num_);
  if (den_pow_ <= 62)
    return std::to_string(num_) + "/" + std::to_string(std::int64_t(1) << den_pow_);
  return std::to_string(num_) + "/2^" + std::to_string(den_pow_);
}

}  // namespace hyperbell
