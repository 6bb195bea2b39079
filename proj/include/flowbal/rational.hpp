#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowbal {

/// Exact rational number with a 64-bit numerator and a positive denominator,
/// always kept in lowest terms. Used for edge flow limits so that the integer
/// interval [ceil(l), floor(u)] is computed without rounding error.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
    normalize();
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }
  constexpr bool is_integer() const noexcept { return den_ == 1; }

  std::int64_t floor() const noexcept {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  std::int64_t ceil() const noexcept {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend auto operator<=>(const Rational& a, const Rational& b) noexcept {
    // Cross-multiplication in 128 bits; denominators are positive.
    __extension__ using wide = __int128;
    const wide lhs = static_cast<wide>(a.num_) * b.den_;
    const wide rhs = static_cast<wide>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  /// Accepts "7", "-3", "5/2" and decimal literals such as "2.35".
  static Rational parse(std::string_view text);

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

namespace detail {

inline std::int64_t parse_int(std::string_view s, std::string_view whole) {
  if (s.empty()) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    }
    if (v > (INT64_MAX - (c - '0')) / 10) {
      throw std::out_of_range("number out of range '" + std::string(whole) + "'");
    }
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const std::int64_t sign = negative ? -1 : 1;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = detail::parse_int(s.substr(0, slash), text);
    const auto den = detail::parse_int(s.substr(slash + 1), text);
    return Rational(sign * num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto int_part = s.substr(0, dot);
    const auto frac_part = s.substr(dot + 1);
    if (frac_part.size() > 17) throw std::out_of_range("too many decimals in '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : detail::parse_int(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : detail::parse_int(frac_part, text);
    if (int_part.empty() && frac_part.empty()) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    return Rational(sign * (whole * den + frac), den);
  }
  return Rational(sign * detail::parse_int(s, text));
}

}  // namespace flowbal
