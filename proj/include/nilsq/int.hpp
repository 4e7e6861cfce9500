#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace nilsq {

// Exact arbitrary-precision integer. All group-theoretic computation in this
// library is exact; no fixed-width arithmetic is used anywhere invariants are
// derived.
using Int = boost::multiprecision::cpp_int;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

// gcd(0,0) = 0; result is always non-negative.
inline Int gcd_int(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Int lcm_int(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs_int(a / gcd_int(a, b) * b);
}

// Extended gcd: returns g >= 0 with s*a + t*b == g.
struct ExtGcd {
  Int g, s, t;
};

inline ExtGcd ext_gcd(Int a, Int b) {
  Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  Int r0 = a, r1 = b;
  while (r1 != 0) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    r0 = r1; r1 = r2;
    Int s2 = s0 - q * s1;
    s0 = s1; s1 = s2;
    Int t2 = t0 - q * t1;
    t0 = t1; t1 = t2;
  }
  if (r0 < 0) { r0 = -r0; s0 = -s0; t0 = -t0; }
  return {r0, s0, t0};
}

// Euclidean remainder: result in [0, |m|), m != 0.
inline Int mod_floor(const Int& a, const Int& m) {
  Int mm = abs_int(m);
  Int r = a % mm;
  if (r < 0) r += mm;
  return r;
}

inline std::string to_string(const Int& a) { return a.str(); }

}  // namespace nilsq
