#include "vcglab/rational.hpp"

#include <charconv>
#include <limits>

namespace vcg {

namespace {

constexpr __int128 kMin64 = std::numeric_limits<std::int64_t>::min();
constexpr __int128 kMax64 = std::numeric_limits<std::int64_t>::max();

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t parse_i64(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  return value;
}

}  // namespace

Rat Rat::reduced(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return Rat{};
  i128 g = gcd128(n, d);
  n /= g;
  d /= g;
  if (n < kMin64 || n > kMax64 || d > kMax64)
    throw std::overflow_error("rational overflow");
  return raw(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

void Rat::assign(std::int64_t n, std::int64_t d) {
  *this = reduced(i128(n), i128(d));
}

Rat Rat::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_i64(text));
  std::int64_t n = parse_i64(text.substr(0, slash));
  std::int64_t d = parse_i64(text.substr(slash + 1));
  if (d == 0)
    throw std::invalid_argument("rational '" + std::string(text) +
                                "' has zero denominator");
  return Rat(n, d);
}

std::string Rat::str() const {
  std::string s = std::to_string(num_);
  if (den_ != 1) {
    s += '/';
    s += std::to_string(den_);
  }
  return s;
}

}  // namespace vcg
