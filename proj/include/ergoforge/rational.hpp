#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ergoforge {

// Expression templates are disabled so Rat behaves like a plain value type
// (std::min/std::max, ternaries, and container moves all work unsurprised).
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using BigInt =
    boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;

inline Rat rat(long long n, long long d = 1) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  return Rat(n, d);
}

// Exact 2^-n for the defect weight series.
inline Rat pow2_neg(unsigned n) {
  BigInt d = 1;
  d <<= n;
  return Rat(1, d);
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// Canonical "n/d" (or "n" when d = 1); parse accepts both forms.
inline std::string rat_to_string(const Rat& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

inline double rat_to_double(const Rat& x) { return x.convert_to<double>(); }

}  // namespace ergoforge
