// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_RATIONAL_HPP
#define NFC_RATIONAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace nfc {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Parses "a" or "a/b".
Rational parse_rational(const std::string& s);

inline std::int64_t floor_div(const Rational& r) {
  std::int64_t num = r.numerator(), den = r.denominator();
  std::int64_t q = num / den;
  if (num % den != 0 && (num < 0)) --q;
  return q;
}

}  // namespace nfc

#endif
