#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "hhs/error.hpp"

namespace hhs {

/// Exact arithmetic for weights, distances and every reported constant.
using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Accepts "p" or "p/q" with optional leading minus sign.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view part) -> std::int64_t {
    if (part.empty()) throw Error(ErrorCode::ParseError, "empty number in '" + std::string(text) + "'");
    std::size_t pos = 0;
    bool negative = false;
    if (part[0] == '-' || part[0] == '+') {
      negative = part[0] == '-';
      pos = 1;
    }
    if (pos == part.size()) throw Error(ErrorCode::ParseError, "bad number '" + std::string(text) + "'");
    std::int64_t value = 0;
    for (; pos < part.size(); ++pos) {
      char c = part[pos];
      if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "bad number '" + std::string(text) + "'");
      value = value * 10 + (c - '0');
    }
    return negative ? -value : value;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace hhs
