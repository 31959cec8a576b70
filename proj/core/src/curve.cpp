#include "isopoint/curve.hpp"

#include <vector>

namespace isopoint {

namespace {

std::vector<uint32_t> prime_factors(uint32_t n) {
  std::vector<uint32_t> ps;
  for (uint32_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

uint64_t euler_phi(uint32_t n) {
  uint64_t r = n;
  for (uint32_t p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

void exact_div(uint64_t& v, uint64_t d, const char* what) {
  if (v % d != 0)
    fail(ErrorKind::InvalidArgument, std::string("internal: ") + what +
                                         " not divisible as required");
  v /= d;
}

}  // namespace

CurveInvariants invariants_x1(const Modulus& level) {
  const uint32_t N = level.value;
  if (N < 5)
    fail(ErrorKind::OutOfScope,
         "small-level special case: X1(N) invariants need N >= 5");
  CurveInvariants out;
  out.level = level;

  uint64_t idx = uint64_t(N) * N;
  for (uint32_t p : prime_factors(N)) {
    exact_div(idx, uint64_t(p) * p, "index");
    idx *= uint64_t(p) * p - 1;
  }
  exact_div(idx, 2, "index");
  out.index = idx;

  uint64_t s = 0;
  for (uint32_t d = 1; d <= N; ++d)
    if (N % d == 0) s += euler_phi(d) * euler_phi(N / d);
  exact_div(s, 2, "cusp count");
  out.cusps = s;

  // genus = 1 + index/12 - cusps/2, kept integral as (12 + index - 6*cusps)/12
  int64_t twelve_g = 12 + int64_t(out.index) - 6 * int64_t(out.cusps);
  if (twelve_g < 0 || twelve_g % 12 != 0)
    fail(ErrorKind::InvalidArgument, "internal: genus formula not integral");
  out.genus = uint64_t(twelve_g / 12);
  return out;
}

uint64_t covering_degree(uint32_t ell, uint32_t n, uint32_t m) {
  if (!is_prime(ell)) fail(ErrorKind::InvalidArgument, "ell must be prime");
  if (n < m || m < 1)
    fail(ErrorKind::InvalidArgument, "covering degree needs n >= m >= 1");
  uint64_t r = 1;
  for (uint32_t i = 0; i < 2 * (n - m); ++i) {
    if (r > (~uint64_t(0)) / ell)
      fail(ErrorKind::InvalidArgument, "covering degree overflows 64 bits");
    r *= ell;
  }
  return r;
}

GenusBound genus_bound_ok(uint32_t ell) {
  if (!is_prime(ell) || ell < 5)
    fail(ErrorKind::InvalidArgument, "genus bound needs a prime >= 5");
  GenusBound out;
  uint64_t q = uint64_t(ell) * ell - 1;
  if (q % 24 != 0)
    fail(ErrorKind::InvalidArgument, "internal: 24 does not divide l^2-1");
  out.bound = q / 24;
  out.genus = invariants_x1(Modulus(ell)).genus;
  out.ok = out.genus < out.bound;
  out.margin = int64_t(out.bound) - int64_t(out.genus);
  return out;
}

}  // namespace isopoint
