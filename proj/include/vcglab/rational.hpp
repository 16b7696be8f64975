#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vcg {

/// Exact rational number in canonical form (gcd(|num|, den) == 1, den > 0).
///
/// Backed by int64 with __int128 intermediates. All arithmetic is exact;
/// results that do not fit int64 after reduction throw std::overflow_error
/// instead of wrapping. Welfare comparisons and tie detection rely on this
/// exactness, so there is deliberately no float constructor.
class Rat {
 public:
  constexpr Rat() = default;
  constexpr Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(std::int64_t n, std::int64_t d) { assign(n, d); }

  /// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on anything
  /// else, including zero denominators.
  static Rat parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  Rat operator-() const { return raw(-num_, den_); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return reduced(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return reduced(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return reduced(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return reduced(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    // Cross multiplication; int64 operands never overflow an __int128.
    return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
  }

  /// "p" when integral, "p/q" otherwise. parse(str()) round-trips.
  std::string str() const;

 private:
  using i128 = __int128;

  static constexpr Rat raw(std::int64_t n, std::int64_t d) {
    Rat r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  static Rat reduced(i128 n, i128 d);
  void assign(std::int64_t n, std::int64_t d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rat abs(const Rat& r) { return r.is_negative() ? -r : r; }

inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace vcg
