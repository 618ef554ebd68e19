#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "types.hpp"

namespace coalg {

// Exact rational arithmetic with arbitrary-precision integers. Kept canonical
// (reduced, positive denominator) by the backing type.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "num/den" and plain integers. Never goes through floating point.
inline Rational parse_rational(const std::string& s) {
  auto parse_int = [&](const std::string& t) -> BigInt {
    if (t.empty()) throw ValidationError("empty integer in rational: '" + s + "'");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw ValidationError("bad integer in rational: '" + s + "'");
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9')
        throw ValidationError("bad integer in rational: '" + s + "'");
    return BigInt(t);
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_int(s));
  BigInt num = parse_int(s.substr(0, slash));
  BigInt den = parse_int(s.substr(slash + 1));
  if (den == 0) throw ValidationError("zero denominator in rational: '" + s + "'");
  return Rational(num, den);
}

}  // namespace coalg
