#pragma once

#include <cstdint>

#include "isopoint/gl2.hpp"

namespace isopoint {

// Exact invariants of X1(N) for N >= 5 (no elliptic points):
//   index = (1/2) N^2 prod_{p|N} (1 - 1/p^2)
//   cusps = (1/2) sum_{d|N} phi(d) phi(N/d)
//   genus = 1 + index/12 - cusps/2
// All arithmetic is integer-exact with divisibility asserted.
struct CurveInvariants {
  Modulus level;
  uint64_t index = 0;
  uint64_t cusps = 0;
  uint64_t genus = 0;
};

CurveInvariants invariants_x1(const Modulus& level);

// deg(X1(l^n) -> X1(l^m)) = l^{2(n-m)}
uint64_t covering_degree(uint32_t ell, uint32_t n, uint32_t m);

// genus(X1(l)) < (l^2-1)/24 for primes l >= 5; 24 divides l^2-1 there
struct GenusBound {
  uint64_t bound = 0;
  uint64_t genus = 0;
  bool ok = false;
  int64_t margin = 0;  // bound - genus
};
GenusBound genus_bound_ok(uint32_t ell);

}  // namespace isopoint
