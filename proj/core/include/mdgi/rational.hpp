#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace mdgi {

// Compare against Rational(k), never a bare integer: under C++20 rewritten
// comparisons boost's mixed-type operator== recurses forever.
using Rational = boost::rational<std::int64_t>;

/// "a/b" in lowest terms; integers print without a denominator.
inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace mdgi
