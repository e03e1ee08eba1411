#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace recomb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p", "p/q" or "-p/q" (q > 0 after normalization). Whitespace is not
// tolerated; these strings travel through files and must round-trip exactly.
inline Rational parse_rational(const std::string& text) {
  // cpp_int's string constructor quietly reads "" as 0, so validate first
  auto is_int = [](const std::string& s, bool allow_sign) {
    size_t i = (allow_sign && !s.empty() && s[0] == '-') ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
      if (!is_int(text, true)) throw std::invalid_argument("not an integer");
      return Rational(BigInt(text));
    }
    const std::string num_text = text.substr(0, slash);
    const std::string den_text = text.substr(slash + 1);
    if (!is_int(num_text, true) || !is_int(den_text, false))
      throw std::invalid_argument("malformed fraction");
    BigInt num(num_text);
    BigInt den(den_text);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

// Always emits "p/q" in lowest terms with q >= 1, even for integers ("3/1").
inline std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt factorial(uint32_t n) {
  BigInt f = 1;
  for (uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

// C(n, k); exact, zero outside the triangle.
inline BigInt binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt c = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;  // exact: prefix products of consecutive integers divide out
  }
  return c;
}

// Pascal triangle rows 0..s, as arbitrary precision (s stays tiny here but
// the moment recursion multiplies these into rationals, so keep them exact).
inline std::vector<std::vector<BigInt>> pascal_rows(uint32_t s) {
  std::vector<std::vector<BigInt>> rows(s + 1);
  for (uint32_t i = 0; i <= s; ++i) {
    rows[i].resize(i + 1);
    rows[i][0] = rows[i][i] = 1;
    for (uint32_t j = 1; j < i; ++j) rows[i][j] = rows[i - 1][j - 1] + rows[i - 1][j];
  }
  return rows;
}

}  // namespace recomb
