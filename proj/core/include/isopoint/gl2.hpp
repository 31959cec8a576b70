#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "isopoint/errors.hpp"

namespace isopoint {

// Ring level N. Matrices live in GL2(Z/NZ). Residues are packed four to a
// 64-bit word, which requires N <= 65535; the largest level any workflow
// needs is 37^2 = 1369.
struct Modulus {
  uint32_t value = 0;
  // prime-power view, present when value = ell^n with ell prime
  uint32_t ell = 0;
  uint32_t n = 0;

  Modulus() = default;
  explicit Modulus(uint32_t v);

  bool is_prime_power() const { return ell != 0; }
  bool is_prime() const { return ell != 0 && n == 1; }
  bool is_odd() const { return (value & 1u) != 0; }
};

bool is_prime(uint32_t p);

// Entries are canonical representatives in [0, N). Default is the zero
// matrix; the identity must be asked for explicitly.
struct Mat2 {
  uint16_t a = 0, b = 0, c = 0, d = 0;

  static Mat2 identity() { return {1, 0, 0, 1}; }
  bool operator==(const Mat2&) const = default;
};

inline uint64_t pack(Mat2 m) {
  return (uint64_t(m.a) << 48) | (uint64_t(m.b) << 32) | (uint64_t(m.c) << 16) |
         uint64_t(m.d);
}
inline Mat2 unpack(uint64_t w) {
  return {uint16_t(w >> 48), uint16_t((w >> 32) & 0xffff),
          uint16_t((w >> 16) & 0xffff), uint16_t(w & 0xffff)};
}
// pack() is strictly monotone for the lexicographic order on (a,b,c,d), so
// sorting packed words is the canonical element order.
inline bool lex_less(Mat2 x, Mat2 y) { return pack(x) < pack(y); }

struct Vec2 {
  uint16_t x = 0, y = 0;
  bool operator==(const Vec2&) const = default;
};

inline uint32_t pack(Vec2 v) { return (uint32_t(v.x) << 16) | uint32_t(v.y); }
inline Vec2 unpack_vec(uint32_t w) {
  return {uint16_t(w >> 16), uint16_t(w & 0xffff)};
}

Mat2 make_mat(int64_t a, int64_t b, int64_t c, int64_t d, const Modulus& m);
Vec2 make_vec(int64_t x, int64_t y, const Modulus& m);

Mat2 mul(Mat2 p, Mat2 q, const Modulus& m);
uint32_t det(Mat2 g, const Modulus& m);
uint32_t trace(Mat2 g, const Modulus& m);
// char poly x^2 - tr*x + det, encoded as (trace, det)
std::pair<uint32_t, uint32_t> char_poly(Mat2 g, const Modulus& m);

bool is_unit(uint32_t r, const Modulus& m);
uint32_t inverse_unit(uint32_t r, const Modulus& m);  // throws SingularElement
Mat2 inverse(Mat2 g, const Modulus& m);               // throws SingularElement
Mat2 mat_pow(Mat2 g, uint64_t e, const Modulus& m);

// least k >= 1 with g^k = I; requires det(g) a unit
uint32_t element_order(Mat2 g, const Modulus& m);

Vec2 act(Mat2 g, Vec2 v, const Modulus& m);
Vec2 negate(Vec2 v, const Modulus& m);

// least k >= 1 with k*v = 0; equals N / gcd(N, x, y)
uint32_t exact_order(Vec2 v, const Modulus& m);

}  // namespace isopoint
