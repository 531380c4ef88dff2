#pragma once

// Exact rational numbers for the exponent calculus.
//
// Backed by boost::rational over 64-bit integers: always in lowest terms with
// a positive denominator. ExtRational adds a single +infinity value, which the
// calculus needs for q = inf, r = inf and r* = inf.

#include <boost/rational.hpp>

#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nlkg {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Parses "N", "N/D" or a finite decimal "I.F" into an exact rational.
/// Anything else (symbols, exponents, non-finite values) is rejected.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [](std::string_view s) -> std::int64_t {
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("empty integer");
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw std::invalid_argument("not an integer: " + std::string(s));
      if (v > (INT64_MAX - 9) / 10) throw std::overflow_error("integer too large");
      v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
  };

  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  try {
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
      const auto num = parse_int(trim(s.substr(0, slash)));
      const auto den = parse_int(trim(s.substr(slash + 1)));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      const std::string_view ip = s.substr(0, dot);
      const std::string_view fp = s.substr(dot + 1);
      if (fp.empty() || fp.size() > 15) throw std::invalid_argument("bad fraction digits");
      const bool neg = !ip.empty() && ip[0] == '-';
      const std::int64_t whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : parse_int(ip);
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
      const std::int64_t frac = parse_int(fp);
      if (frac < 0 || fp[0] == '+' || fp[0] == '-') throw std::invalid_argument("bad fraction");
      Rational r = Rational(whole) + Rational(frac, scale) * (neg || whole < 0 ? -1 : 1);
      return r;
    }
    return Rational(parse_int(s));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not an exact rational: '" + std::string(s) + "'");
  }
}

/// A rational or +infinity.
class ExtRational {
 public:
  constexpr ExtRational() = default;
  ExtRational(Rational v) : value_(v) {}  // NOLINT: implicit by design of the calculus
  ExtRational(std::int64_t v) : value_(Rational(v)) {}  // NOLINT

  static ExtRational infinity() {
    ExtRational r;
    r.value_.reset();
    return r;
  }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  const Rational& value() const {
    if (!value_) throw std::logic_error("ExtRational: infinite value has no rational part");
    return *value_;
  }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    return *a.value_ == *b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.is_infinite()) return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    if (*a.value_ < *b.value_) return std::strong_ordering::less;
    if (*a.value_ > *b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  std::optional<Rational> value_ = Rational(0);
};

inline std::string to_string(const ExtRational& r) {
  return r.is_infinite() ? std::string("inf") : to_string(r.value());
}

inline ExtRational parse_ext_rational(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "+inf") return ExtRational::infinity();
  return parse_rational(text);
}

inline std::ostream& operator<<(std::ostream& os, const ExtRational& r) { return os << to_string(r); }

}  // namespace nlkg
